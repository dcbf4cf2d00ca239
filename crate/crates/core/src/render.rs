//! SVG pictures of rank-1 objects: slices of fansy and polyhedral divisors
//! as strips on a line, and pieces of support functions and divisorial
//! polytopes as graphs over a lattice grid.
//!
//! Output is a pure function of the input, so equal inputs give byte-equal
//! files.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_traits::{Signed, ToPrimitive};

use crate::divpoly::DivisorialPolytope;
use crate::error::{Error, Result};
use crate::fansy::MarkedFansyDivisor;
use crate::geometry::{Cone, Polyhedron, Rat};
use crate::json::Document;
use crate::pdiv::PolyhedralDivisor;
use crate::support::SupportFunction;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 60.0;
const STRIP_H: f64 = 70.0;
const GRAPH_H: f64 = 220.0;

fn f(r: Rat) -> f64 {
    r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Canvas {
    body: String,
    height: f64,
}

impl Canvas {
    fn new() -> Canvas {
        Canvas {
            body: String::new(),
            height: 20.0,
        }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: u32, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="{size}">{}</text>"#,
            esc(s)
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    fn dot(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{fill}"/>"#
        );
    }

    fn finish(self) -> String {
        let h = self.height + 20.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h:.0}" viewBox="0 0 {WIDTH} {h:.0}" font-family="sans-serif">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

/// Maps `[lo, hi]` onto the drawable width.
struct XScale {
    lo: Rat,
    hi: Rat,
}

impl XScale {
    fn around(points: impl IntoIterator<Item = Rat>) -> XScale {
        let pts: Vec<Rat> = points.into_iter().collect();
        let lo = pts.iter().min().copied().unwrap_or_default().floor() - Rat::from_integer(1);
        let hi = pts.iter().max().copied().unwrap_or_default().ceil() + Rat::from_integer(1);
        XScale { lo, hi }
    }

    fn px(&self, x: Rat) -> f64 {
        MARGIN + (f(x) - f(self.lo)) / (f(self.hi) - f(self.lo)) * (WIDTH - 2.0 * MARGIN)
    }
}

fn rank_one(found: usize, what: &str) -> Result<()> {
    if found != 1 {
        return Err(Error::Unsupported(format!(
            "rendering {what} needs rank 1, found rank {found}"
        )));
    }
    Ok(())
}

fn ray_label(c: &Cone) -> &'static str {
    match c.rays().first().map(|r| r[0]) {
        Some(x) if x > 0 => "+",
        Some(_) => "-",
        None => "0",
    }
}

fn strip(
    c: &mut Canvas,
    xs: &XScale,
    title: &str,
    cells: &[Polyhedron],
    marked: &BTreeSet<&'static str>,
) {
    let y = c.height + STRIP_H / 2.0;
    c.text(10.0, y - 18.0, "start", 13, title);
    let left = xs.px(xs.lo);
    let right = xs.px(xs.hi);
    c.line((left, y), (right, y), r##"stroke="#bbb" stroke-width="1""##);
    let mut k = xs.lo.to_integer();
    while Rat::from_integer(k) <= xs.hi {
        let x = xs.px(Rat::from_integer(k));
        c.line(
            (x, y - 3.0),
            (x, y + 3.0),
            r##"stroke="#bbb" stroke-width="1""##,
        );
        k += 1;
    }
    let mut verts: BTreeSet<Rat> = BTreeSet::new();
    for cell in cells {
        let vs: Vec<Rat> = cell.vertices().iter().map(|v| v[0]).collect();
        verts.extend(vs.iter().copied());
        let a = *vs.iter().min().expect("nonempty cell");
        let b = *vs.iter().max().expect("nonempty cell");
        for r in cell.rays() {
            let (from, to, anchor) = if r[0] > 0 {
                (b, xs.hi, "end")
            } else {
                (a, xs.lo, "start")
            };
            c.line(
                (xs.px(from), y),
                (xs.px(to), y),
                r##"stroke="#36c" stroke-width="2""##,
            );
            let side = if r[0] > 0 { "+" } else { "-" };
            let note = if marked.contains(side) {
                "marked"
            } else {
                "unmarked"
            };
            c.text(xs.px(to), y + 20.0, anchor, 11, note);
        }
        if a != b {
            c.line(
                (xs.px(a), y),
                (xs.px(b), y),
                r##"stroke="#000" stroke-width="3""##,
            );
        }
    }
    for v in verts {
        c.dot(xs.px(v), y, 4.0, "#c33");
        c.text(xs.px(v), y - 8.0, "middle", 11, &v.to_string());
    }
    c.height += STRIP_H;
}

pub fn render_fansy(x: &MarkedFansyDivisor) -> Result<String> {
    rank_one(x.ambient_dim(), "a fansy divisor")?;
    let slices: Vec<(String, Vec<Polyhedron>)> = x
        .nontrivial_slices()
        .iter()
        .map(|(l, s)| (l.clone(), s.clone()))
        .collect();
    let xs = XScale::around(
        slices
            .iter()
            .flat_map(|(_, s)| s.iter().flat_map(|c| c.vertices().iter().map(|v| v[0]))),
    );
    let marked: BTreeSet<&'static str> = x
        .marks()
        .iter()
        .filter(|m| m.dimension() == 1)
        .map(ray_label)
        .collect();
    let mut c = Canvas::new();
    let names: Vec<&str> = marked.iter().copied().collect();
    c.text(
        10.0,
        c.height,
        "start",
        12,
        &format!(
            "marked rays: {}",
            if names.is_empty() {
                "none".to_string()
            } else {
                names.join(" ")
            }
        ),
    );
    c.height += 10.0;
    for (label, cells) in &slices {
        strip(&mut c, &xs, &format!("slice at {label}"), cells, &marked);
    }
    Ok(c.finish())
}

pub fn render_pdiv(d: &PolyhedralDivisor) -> Result<String> {
    rank_one(d.ambient_dim(), "a polyhedral divisor")?;
    let coeffs: Vec<(String, Polyhedron)> = d
        .coefficients()
        .iter()
        .map(|(l, p)| (l.clone(), p.clone()))
        .collect();
    let xs = XScale::around(
        coeffs
            .iter()
            .flat_map(|(_, p)| p.vertices().iter().map(|v| v[0])),
    );
    let mut c = Canvas::new();
    c.text(
        10.0,
        c.height,
        "start",
        12,
        &format!("tail cone: {}", d.tail()),
    );
    c.height += 10.0;
    let none = BTreeSet::new();
    for (label, p) in &coeffs {
        if p.is_empty() {
            continue;
        }
        strip(
            &mut c,
            &xs,
            &format!("coefficient at {label}"),
            std::slice::from_ref(p),
            &none,
        );
    }
    Ok(c.finish())
}

/// One piecewise linear graph, given by its breakpoints in increasing order.
fn graph(c: &mut Canvas, xs: &XScale, title: &str, pts: &[(Rat, Rat)]) {
    let top = c.height + 20.0;
    c.text(10.0, top - 4.0, "start", 13, title);
    let ys: Vec<Rat> = pts.iter().map(|p| p.1).collect();
    let ylo = ys.iter().min().copied().unwrap_or_default().floor() - Rat::from_integer(1);
    let yhi = ys.iter().max().copied().unwrap_or_default().ceil() + Rat::from_integer(1);
    let inner = GRAPH_H - 40.0;
    let py = |y: Rat| top + 10.0 + (f(yhi) - f(y)) / (f(yhi) - f(ylo)) * inner;
    let xspan = (xs.hi - xs.lo).abs().to_integer();
    let yspan = (yhi - ylo).abs().to_integer();
    let step = ((xspan.max(yspan) + 39) / 40).max(1);
    let mut i = xs.lo.to_integer();
    while Rat::from_integer(i) <= xs.hi {
        let mut j = ylo.to_integer();
        while Rat::from_integer(j) <= yhi {
            c.dot(
                xs.px(Rat::from_integer(i)),
                py(Rat::from_integer(j)),
                1.5,
                "#999",
            );
            j += step;
        }
        i += step;
    }
    let zero = Rat::from_integer(0);
    if ylo <= zero && zero <= yhi {
        c.line(
            (xs.px(xs.lo), py(zero)),
            (xs.px(xs.hi), py(zero)),
            r##"stroke="#bbb" stroke-width="1""##,
        );
    }
    if xs.lo <= zero && zero <= xs.hi {
        c.line(
            (xs.px(zero), py(ylo)),
            (xs.px(zero), py(yhi)),
            r##"stroke="#bbb" stroke-width="1""##,
        );
    }
    let path: Vec<String> = pts
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", xs.px(*x), py(*y)))
        .collect();
    let _ = writeln!(
        c.body,
        r##"<polyline points="{}" fill="none" stroke="#000" stroke-width="2"/>"##,
        path.join(" ")
    );
    for (x, y) in pts {
        c.dot(xs.px(*x), py(*y), 3.5, "#c33");
        c.text(xs.px(*x), py(*y) - 8.0, "middle", 10, &format!("({x},{y})"));
    }
    c.height += GRAPH_H;
}

pub fn render_support(h: &SupportFunction) -> Result<String> {
    rank_one(h.base().ambient_dim(), "a support function")?;
    let labels: Vec<String> = h.pieces().keys().cloned().collect();
    let mut breaks: BTreeSet<Rat> = BTreeSet::new();
    for l in &labels {
        for (cell, _) in h.piece(l) {
            breaks.extend(cell.vertices().iter().map(|v| v[0]));
        }
    }
    let xs = XScale::around(breaks.iter().copied());
    let mut c = Canvas::new();
    for l in &labels {
        let mut at: BTreeSet<Rat> = [xs.lo, xs.hi].into_iter().collect();
        for (cell, _) in h.piece(l) {
            at.extend(cell.vertices().iter().map(|v| v[0]));
        }
        let pts: Vec<(Rat, Rat)> = at.into_iter().map(|x| (x, h.eval(l, &[x]))).collect();
        graph(&mut c, &xs, &format!("h at {l}"), &pts);
    }
    Ok(c.finish())
}

pub fn render_divpoly(p: &DivisorialPolytope) -> Result<String> {
    rank_one(p.ambient_dim(), "a divisorial polytope")?;
    let bx = p.box_polytope();
    if bx.is_empty() {
        return Err(Error::Empty);
    }
    let xs = XScale::around(bx.vertices().iter().map(|v| v[0]));
    let mut c = Canvas::new();
    for l in p.support() {
        let pts: Vec<(Rat, Rat)> = p
            .graph_vertices(&l)
            .into_iter()
            .map(|(u, y)| (u[0], y))
            .collect();
        graph(&mut c, &xs, &format!("Psi at {l}"), &pts);
    }
    Ok(c.finish())
}

pub fn render_document(doc: &Document) -> Result<String> {
    match doc {
        Document::Fansy(x) => render_fansy(x),
        Document::PolyhedralDivisor(d) => render_pdiv(d),
        Document::SupportFunction(h) => render_support(h),
        Document::DivisorialPolytope(p) => render_divpoly(p),
        other => Err(Error::Unsupported(format!(
            "cannot render a {}",
            other.type_name()
        ))),
    }
}
