use divpoly::fixtures;
use divpoly::json::{to_json, Document};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".to_string());
    let docs = [
        (
            "ldp.divpoly.json",
            Document::DivisorialPolytope(fixtures::ldp_divpoly()),
        ),
        (
            "ldp.sf.json",
            Document::SupportFunction(fixtures::ldp_support_function()),
        ),
        ("ldp.fansy.json", Document::Fansy(fixtures::ldp_fansy())),
        (
            "ldp.cone.json",
            Document::PolyhedralDivisor(fixtures::ldp_cone_divisor()),
        ),
        (
            "ldp_literal.cone.json",
            Document::PolyhedralDivisor(fixtures::ldp_literal_cone_divisor()),
        ),
    ];
    for (name, doc) in docs {
        std::fs::write(format!("{dir}/{name}"), to_json(&doc)).unwrap();
    }
}
