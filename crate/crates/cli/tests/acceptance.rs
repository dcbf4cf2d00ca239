//! The acceptance suite: one PASS/FAIL line per criterion on stderr, and a
//! single failing assertion listing every criterion that did not pass.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use divpoly::cone_algebra::{
    cone_divisor, generator_weights, generators, minimal_weights, projectively_normal, recover,
    recover_divpoly, refinement_sigma,
};
use divpoly::curve::Tri;
use divpoly::divpoly::Hilbert;
use divpoly::fixtures;
use divpoly::geometry::lattice::{ehrhart, euclidean_volume, hilbert_basis};
use divpoly::geometry::{Cone, LatticeVec, Rat, UniPoly};

type Check = Result<String, String>;

fn r(n: i64) -> Rat {
    Rat::from_integer(n as i128)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: divpoly::Error) -> String {
    err.to_string()
}

fn c1_degree() -> Check {
    let p = fixtures::ldp_divpoly();
    let deg = p.degree_number().map_err(e)?;
    ensure(deg == r(6), format!("degree {deg}"))?;
    let sets: [&[&str]; 5] = [&[], &["0"], &["inf"], &["1"], &["0", "inf", "1"]];
    for set in sets {
        let i: Vec<String> = set.iter().map(|s| s.to_string()).collect();
        let vol = euclidean_volume(&p.delta_polytope(&i).map_err(e)?).map_err(e)?;
        ensure(vol == r(3), format!("vol Delta({set:?}) = {vol}"))?;
    }
    Ok("degree 6, all five volumes 3".into())
}

fn c2_ehrhart() -> Check {
    let p = fixtures::ldp_divpoly();
    let cases = [
        ("box", p.box_polytope().clone(), vec![1, 4]),
        ("0", p.tilde_delta("0").map_err(e)?, vec![1, 6, 11]),
        ("inf", p.tilde_delta("inf").map_err(e)?, vec![1, 4, 4]),
        ("1", p.tilde_delta("1").map_err(e)?, vec![1, 4, 4]),
    ];
    for (name, poly, coeffs) in cases {
        let want = UniPoly::from_ints(&coeffs);
        let got = ehrhart(&poly).map_err(e)?;
        ensure(
            got == want,
            format!("{name}: ehrhart {}", got.format_in("k")),
        )?;
        for k in 1..=4 {
            let brute = common::brute_count(&poly, k);
            ensure(
                r(brute as i64) == want.eval_int(k),
                format!("{name}: {brute} lattice points at k={k}"),
            )?;
        }
    }
    Ok("4k+1, 11k^2+6k+1, 4k^2+4k+1 (x2) by interpolation and counting".into())
}

fn c3_hilbert() -> Check {
    let p = fixtures::ldp_divpoly();
    let want = UniPoly::from_ints(&[1, 2, 3]);
    match p.hilbert_polynomial().map_err(e)? {
        Hilbert::Exact(h) => ensure(h == want, format!("hilbert {}", h.format_in("k")))?,
        other => return Err(format!("expected an exact polynomial, got {other:?}")),
    }
    let d = fixtures::ldp_cone_divisor();
    for (k, expected) in [(1i64, 6u64), (2, 17), (3, 34)] {
        let mut total = 0;
        for u in -2 * k..=2 * k {
            total += d
                .weight_module_dim(&[r(u), r(k)])
                .map_err(e)?
                .exact()
                .ok_or("inexact weight dimension")?;
        }
        ensure(total == expected, format!("k={k}: {total} sections"))?;
        ensure(
            want.eval_int(k) == r(expected as i64),
            "polynomial disagrees",
        )?;
    }
    Ok("3k^2+2k+1; section sums 6, 17, 34".into())
}

fn c4_smooth() -> Check {
    let p = fixtures::ldp_divpoly();
    let s = p.is_smooth().map_err(e)?;
    ensure(s.verdict == Tri::No, format!("verdict {:?}", s.verdict))?;
    let got: BTreeSet<(String, Vec<Rat>)> = s.witnesses.into_iter().collect();
    let want: BTreeSet<(String, Vec<Rat>)> = [
        ("P".to_string(), vec![r(2)]),
        ("P".to_string(), vec![r(-2)]),
    ]
    .into_iter()
    .collect();
    ensure(got == want, format!("witnesses {got:?}"))?;
    for v in [-1, 1] {
        let t = p.smooth_at("0", &[r(v)]).map_err(e)?;
        ensure(t == Tri::Yes, format!("smooth_at(0, {v}) = {t:?}"))?;
    }
    Ok("not smooth exactly at (P, +-2); smooth at (0, +-1)".into())
}

fn c5_generators() -> Check {
    let d = fixtures::ldp_cone_divisor();
    let r5 = minimal_weights(&d, None).map_err(e)?;
    let want: BTreeSet<LatticeVec> = (-2..=2).map(|j| vec![j, 1]).collect();
    ensure(r5.g_min == want, format!("g_min {:?}", r5.g_min))?;
    let h = fixtures::ldp_support_function();
    let t = projectively_normal(&h, None).map_err(e)?;
    ensure(t == Tri::Yes, format!("normality {t:?}"))?;
    let g = generators(&d, None).map_err(e)?;
    let count: usize = g.generators.values().map(Vec::len).sum();
    ensure(count == 6, format!("{count} generators"))?;
    Ok("five minimal weights, projectively normal, 6 generators".into())
}

fn c6_round_trips() -> Check {
    let mut rng = common::rng(6);
    let n = 200;
    for i in 0..n {
        let p = common::random_divpoly(&mut rng, 8, 4, 3);
        let ctx = |m: &str| {
            format!(
                "instance {i}: {m}\n{}",
                divpoly::json::to_json(&divpoly::json::Document::DivisorialPolytope(p.clone()))
            )
        };
        let (x, h) = p.dualize().map_err(|err| ctx(&err.to_string()))?;
        let back = h.dualize().map_err(|err| ctx(&err.to_string()))?;
        ensure(back == p, ctx("dualize round trip differs"))?;
        let d = cone_divisor(&h).map_err(|err| ctx(&err.to_string()))?;
        let (x2, h2) = recover(&d).map_err(|err| ctx(&err.to_string()))?;
        ensure(x2 == x && h2 == h, ctx("recover differs"))?;
        let p2 = recover_divpoly(&d).map_err(|err| ctx(&err.to_string()))?;
        ensure(p2 == p, ctx("recover_divpoly differs"))?;
    }
    Ok(format!(
        "{n} random instances, no failures (seed {})",
        common::seed()
    ))
}

fn c7_generation() -> Check {
    let mut weights = 0;
    let ldp = fixtures::ldp_cone_divisor();
    let g = generator_weights(&ldp, None).map_err(e)?;
    weights += common::check_generation(&ldp, &g.g_all, 4, 2)?;
    let mut rng = common::rng(7);
    for i in 0..20 {
        let p = common::random_divpoly(&mut rng, 4, 3, 2);
        let (_, h) = p.dualize().map_err(e)?;
        let d = cone_divisor(&h).map_err(e)?;
        ensure(
            d.is_proper() == Tri::Yes,
            format!("instance {i} is not proper"),
        )?;
        let g = generator_weights(&d, None).map_err(e)?;
        let width = p
            .box_polytope()
            .vertices()
            .iter()
            .map(|v| v[0].to_integer().abs() as i64 + 1)
            .max()
            .unwrap_or(0);
        weights += common::check_generation(&d, &g.g_all, 4, width)
            .map_err(|m| format!("instance {i}: {m}"))?;
    }
    Ok(format!(
        "{weights} weights of grading <= 4 spanned by products"
    ))
}

fn c8_hilbert_basis() -> Check {
    let ldp = fixtures::ldp_cone_divisor();
    let dual = ldp.tail().dual();
    let basis = hilbert_basis(&dual).map_err(e)?;
    let want: BTreeSet<LatticeVec> = [[-2, 1], [-1, 1], [0, 1], [1, 1], [2, 1]]
        .iter()
        .map(|v| v.to_vec())
        .collect();
    ensure(basis == want, format!("dual basis {basis:?}"))?;
    let mut cones: BTreeSet<Cone> = BTreeSet::new();
    cones.insert(dual);
    cones.insert(ldp.tail().clone());
    cones.extend(refinement_sigma(&ldp).map_err(e)?.full_dimensional());
    let mut rng = common::rng(8);
    for _ in 0..20 {
        let p = common::random_divpoly(&mut rng, 6, 3, 3);
        let d = cone_divisor(&p.dualize().map_err(e)?.1).map_err(e)?;
        cones.insert(d.tail().clone());
        cones.insert(d.tail().dual());
        for c in refinement_sigma(&d).map_err(e)?.full_dimensional() {
            cones.insert(c.dual());
            cones.insert(c);
        }
    }
    for _ in 0..15 {
        cones.insert(common::random_cone(&mut rng, 2));
    }
    for _ in 0..5 {
        cones.insert(common::random_cone(&mut rng, 3));
    }
    for c in &cones {
        let b = hilbert_basis(c).map_err(e)?;
        common::check_hilbert_basis(c, &b, 10).map_err(|m| format!("cone {c}: {m}"))?;
    }
    Ok(format!("{} cones checked to bound 10", cones.len()))
}

fn c9_volume() -> Check {
    let mut rng = common::rng(9);
    let n = 100;
    for i in 0..n {
        let p = common::random_divpoly(&mut rng, 8, 4, 3);
        let support = p.support();
        let mut vols = BTreeSet::new();
        for mask in 0..(1u32 << support.len()) {
            let set: Vec<String> = support
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, l)| l.clone())
                .collect();
            vols.insert(euclidean_volume(&p.delta_polytope(&set).map_err(e)?).map_err(e)?);
        }
        ensure(vols.len() == 1, format!("instance {i}: volumes {vols:?}"))?;
    }
    Ok(format!("{n} random instances, volume independent of I"))
}

fn c10_literal() -> Check {
    let d = fixtures::ldp_literal_cone_divisor();
    let p = d.properness();
    ensure(p.verdict == Tri::No, format!("verdict {:?}", p.verdict))?;
    ensure(
        p.witness == Some(vec![r(-2), r(2)]),
        format!("witness {:?}", p.witness),
    )?;
    let data = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/ldp_literal.cone.json"
    );
    let out = Command::new(env!("CARGO_BIN_EXE_divpoly"))
        .args(["validate", "--in", data])
        .output()
        .map_err(|err| err.to_string())?;
    ensure(
        out.status.code() == Some(1),
        format!("exit status {:?}", out.status),
    )?;
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|err| err.to_string())?;
    let note = v["note"].as_str().unwrap_or_default();
    ensure(
        note.contains("(-2,2)") && note.contains("(0,2),(1,1),(2,2)"),
        format!("note {note:?}"),
    )?;
    Ok("not proper with witness (-2,2); CLI exits 1 with the note".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 degree and volumes", c1_degree),
        ("2 Ehrhart data", c2_ehrhart),
        ("3 Hilbert polynomial", c3_hilbert),
        ("4 smoothness", c4_smooth),
        ("5 generators", c5_generators),
        ("6 duality round trips", c6_round_trips),
        ("7 generation soundness", c7_generation),
        ("8 Hilbert bases", c8_hilbert_basis),
        ("9 volume independence", c9_volume),
        ("10 literal data guard", c10_literal),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => {
                let _ = writeln!(err, "PASS criterion {name}: {detail} [{secs:.1}s]");
            }
            Err(why) => {
                let _ = writeln!(err, "FAIL criterion {name}: {why} [{secs:.1}s]");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
