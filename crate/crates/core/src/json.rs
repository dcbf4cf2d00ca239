//! JSON encoding of every object type, with parse errors that name the
//! offending JSON path.
//!
//! Rationals are written as strings (`"2"`, `"-1/2"`) and accepted as either
//! strings or JSON integers. Documents carry a `"type"` tag; when it is
//! missing the type is inferred from the keys present.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::curve::{Coord, Curve, CurveKind, PointId, QDivisor};
use crate::divpoly::DivisorialPolytope;
use crate::error::{Error, Result};
use crate::fansy::MarkedFansyDivisor;
use crate::geometry::{Cone, Fan, LatticeVec, Polyhedron, Rat, RatVec};
use crate::pdiv::PolyhedralDivisor;
use crate::support::{Affine, SupportFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JRat(pub Rat);

impl Serialize for JRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = JRat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JRat, E> {
        Ok(JRat(Rat::from_integer(v as i128)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JRat, E> {
        Ok(JRat(Rat::from_integer(v as i128)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JRat, E> {
        parse_rat(v)
            .map(JRat)
            .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<JRat, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            (d != 0).then(|| Rat::new(n, d))
        }
        None => s.parse::<i128>().ok().map(Rat::from_integer),
    }
}

fn jvec(v: &[Rat]) -> Vec<JRat> {
    v.iter().map(|x| JRat(*x)).collect()
}

fn rvec(v: &[JRat]) -> RatVec {
    v.iter().map(|x| x.0).collect()
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse {
            path: inner,
            message,
        } => Error::Parse {
            path: format!("{path}.{inner}"),
            message,
        },
        other => Error::Parse {
            path: path.to_string(),
            message: other.to_string(),
        },
    })
}

fn bad(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJ {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub empty: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Vec<JRat>>,
    #[serde(default)]
    pub rays: Vec<LatticeVec>,
}

impl PolyJ {
    pub fn from_poly(p: &Polyhedron) -> PolyJ {
        if p.is_empty() {
            return PolyJ {
                empty: true,
                dim: Some(p.ambient_dim()),
                vertices: vec![],
                rays: vec![],
            };
        }
        PolyJ {
            empty: false,
            dim: None,
            vertices: p.vertices().iter().map(|v| jvec(v)).collect(),
            rays: p.rays().to_vec(),
        }
    }

    /// Decodes with the ambient rank `dim` when known from context.
    pub fn to_poly(&self, dim: Option<usize>) -> Result<Polyhedron> {
        let inferred = self
            .dim
            .or(dim)
            .or_else(|| self.vertices.first().map(|v| v.len()))
            .ok_or_else(|| bad("dim", "ambient rank is unknown"))?;
        if self.empty {
            return Ok(Polyhedron::empty(inferred));
        }
        if self.vertices.is_empty() {
            return Err(bad("vertices", "a nonempty polyhedron needs a vertex"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != inferred {
                return Err(bad(
                    &format!("vertices[{i}]"),
                    format!("expected {inferred} coordinates"),
                ));
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != inferred {
                return Err(bad(
                    &format!("rays[{i}]"),
                    format!("expected {inferred} coordinates"),
                ));
            }
        }
        let pts: Vec<RatVec> = self.vertices.iter().map(|v| rvec(v)).collect();
        let rays: Vec<RatVec> = self
            .rays
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x as i128)).collect())
            .collect();
        Polyhedron::new(inferred, &pts, &rays)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJ {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub rays: Vec<LatticeVec>,
    #[serde(default)]
    pub lineality: Vec<LatticeVec>,
}

impl ConeJ {
    pub fn from_cone(c: &Cone) -> ConeJ {
        ConeJ {
            dim: Some(c.ambient_dim()),
            rays: c.rays().to_vec(),
            lineality: c.lineality().to_vec(),
        }
    }

    pub fn to_cone(&self, dim: Option<usize>) -> Result<Cone> {
        let n = self
            .dim
            .or(dim)
            .or_else(|| {
                self.rays
                    .first()
                    .or(self.lineality.first())
                    .map(|r| r.len())
            })
            .ok_or_else(|| bad("dim", "ambient rank is unknown"))?;
        for (i, r) in self.rays.iter().chain(&self.lineality).enumerate() {
            if r.len() != n {
                return Err(bad(
                    &format!("rays[{i}]"),
                    format!("expected {n} coordinates"),
                ));
            }
        }
        Ok(Cone::new(n, &self.rays, &self.lineality))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJ {
    pub dim: usize,
    pub maximal: Vec<ConeJ>,
}

impl FanJ {
    pub fn from_fan(f: &Fan) -> FanJ {
        FanJ {
            dim: f.ambient_dim(),
            maximal: f.maximal().iter().map(ConeJ::from_cone).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<Fan> {
        let cones = self
            .maximal
            .iter()
            .enumerate()
            .map(|(i, c)| at(&format!("maximal[{i}]"), c.to_cone(Some(self.dim))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Fan::from_maximal(self.dim, &cones))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJ {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord: Option<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJ {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    pub points: Vec<PointJ>,
}

fn coord_json(c: &Coord) -> Value {
    match c {
        Coord::Finite(x) => Value::String(x.to_string()),
        Coord::Infinity => Value::String("inf".to_string()),
    }
}

fn parse_coord(v: &Value) -> Option<Coord> {
    match v {
        Value::String(s) if s == "inf" => Some(Coord::Infinity),
        Value::String(s) => parse_rat(s).map(Coord::Finite),
        Value::Number(n) => n
            .as_i64()
            .map(|x| Coord::Finite(Rat::from_integer(x as i128))),
        _ => None,
    }
}

impl CurveJ {
    pub fn from_curve(c: &Curve) -> CurveJ {
        let (kind, genus) = match c.kind() {
            CurveKind::ProjectiveLine => ("P1", None),
            CurveKind::Abstract { genus } => ("abstract", Some(genus)),
        };
        CurveJ {
            kind: kind.to_string(),
            genus,
            points: c
                .points()
                .iter()
                .map(|p| PointJ {
                    label: p.label.clone(),
                    coord: p.coord.as_ref().map(coord_json),
                })
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<Curve> {
        let kind = match self.kind.as_str() {
            "P1" => CurveKind::ProjectiveLine,
            "abstract" => CurveKind::Abstract {
                genus: self
                    .genus
                    .ok_or_else(|| bad("genus", "abstract curves need a genus"))?,
            },
            k => return Err(bad("kind", format!("unknown curve kind {k:?}"))),
        };
        let mut points = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let coord = match &p.coord {
                None => None,
                Some(v) => Some(parse_coord(v).ok_or_else(|| {
                    bad(
                        &format!("points[{i}].coord"),
                        format!("invalid coordinate {v}"),
                    )
                })?),
            };
            points.push(PointId {
                label: p.label.clone(),
                coord,
            });
        }
        at("points", Curve::new(kind, points))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJ {
    pub coeffs: std::collections::BTreeMap<String, JRat>,
}

impl DivisorJ {
    pub fn from_divisor(d: &QDivisor) -> DivisorJ {
        DivisorJ {
            coeffs: d.iter().map(|(l, c)| (l.clone(), JRat(*c))).collect(),
        }
    }

    pub fn to_divisor(&self) -> QDivisor {
        QDivisor::from_pairs(self.coeffs.iter().map(|(l, c)| (l.as_str(), c.0)))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffJ {
    pub point: String,
    pub poly: PolyJ,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdivJ {
    pub curve: CurveJ,
    pub tail: ConeJ,
    pub coeffs: Vec<CoeffJ>,
}

impl PdivJ {
    pub fn from_pdiv(d: &PolyhedralDivisor) -> PdivJ {
        PdivJ {
            curve: CurveJ::from_curve(d.curve()),
            tail: ConeJ::from_cone(d.tail()),
            coeffs: d
                .coefficients()
                .iter()
                .map(|(l, p)| CoeffJ {
                    point: l.clone(),
                    poly: PolyJ::from_poly(p),
                })
                .collect(),
        }
    }

    pub fn to_pdiv(&self) -> Result<PolyhedralDivisor> {
        let curve = at("curve", self.curve.to_curve())?;
        let tail = at("tail", self.tail.to_cone(None))?;
        let n = tail.ambient_dim();
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push((
                c.point.clone(),
                at(&format!("coeffs[{i}].poly"), c.poly.to_poly(Some(n)))?,
            ));
        }
        at("coeffs", PolyhedralDivisor::new(curve, tail, coeffs))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceJ {
    pub point: String,
    pub cells: Vec<PolyJ>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FansyJ {
    pub curve: CurveJ,
    pub tailfan: FanJ,
    pub slices: Vec<SliceJ>,
    pub marks: Vec<ConeJ>,
}

impl FansyJ {
    pub fn from_fansy(x: &MarkedFansyDivisor) -> FansyJ {
        FansyJ {
            curve: CurveJ::from_curve(x.curve()),
            tailfan: FanJ::from_fan(x.tailfan()),
            slices: x
                .nontrivial_slices()
                .iter()
                .map(|(l, cells)| SliceJ {
                    point: l.clone(),
                    cells: cells.iter().map(PolyJ::from_poly).collect(),
                })
                .collect(),
            marks: x.marks().iter().map(ConeJ::from_cone).collect(),
        }
    }

    pub fn to_fansy(&self) -> Result<MarkedFansyDivisor> {
        let curve = at("curve", self.curve.to_curve())?;
        let tailfan = at("tailfan", self.tailfan.to_fan())?;
        let n = tailfan.ambient_dim();
        let mut slices = Vec::new();
        for (i, s) in self.slices.iter().enumerate() {
            let cells = s
                .cells
                .iter()
                .enumerate()
                .map(|(j, c)| at(&format!("slices[{i}].cells[{j}]"), c.to_poly(Some(n))))
                .collect::<Result<Vec<_>>>()?;
            slices.push((s.point.clone(), cells));
        }
        let marks = self
            .marks
            .iter()
            .enumerate()
            .map(|(i, m)| at(&format!("marks[{i}]"), m.to_cone(Some(n))))
            .collect::<Result<Vec<_>>>()?;
        at(
            "slices",
            MarkedFansyDivisor::new(curve, tailfan, slices, marks),
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearJ {
    pub cone: ConeJ,
    pub gradient: Vec<JRat>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJ {
    pub cell: PolyJ,
    pub gradient: Vec<JRat>,
    pub constant: JRat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceJ {
    pub point: String,
    pub cells: Vec<CellJ>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportJ {
    pub base: FansyJ,
    pub linear: Vec<LinearJ>,
    pub pieces: Vec<PieceJ>,
}

impl SupportJ {
    pub fn from_support(h: &SupportFunction) -> SupportJ {
        SupportJ {
            base: FansyJ::from_fansy(h.base()),
            linear: h
                .linear()
                .iter()
                .map(|(c, g)| LinearJ {
                    cone: ConeJ::from_cone(c),
                    gradient: jvec(g),
                })
                .collect(),
            pieces: h
                .pieces()
                .iter()
                .map(|(l, cells)| PieceJ {
                    point: l.clone(),
                    cells: cells
                        .iter()
                        .map(|(c, f)| CellJ {
                            cell: PolyJ::from_poly(c),
                            gradient: jvec(&f.gradient),
                            constant: JRat(f.constant),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_support(&self) -> Result<SupportFunction> {
        let base = at("base", self.base.to_fansy())?;
        let n = base.ambient_dim();
        let mut linear = Vec::new();
        for (i, l) in self.linear.iter().enumerate() {
            linear.push((
                at(&format!("linear[{i}].cone"), l.cone.to_cone(Some(n)))?,
                rvec(&l.gradient),
            ));
        }
        let mut pieces = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let mut cells = Vec::new();
            for (j, c) in p.cells.iter().enumerate() {
                let poly = at(
                    &format!("pieces[{i}].cells[{j}].cell"),
                    c.cell.to_poly(Some(n)),
                )?;
                cells.push((poly, Affine::new(rvec(&c.gradient), c.constant.0)));
            }
            pieces.push((p.point.clone(), cells));
        }
        at("pieces", SupportFunction::new(base, linear, pieces))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineJ {
    pub gradient: Vec<JRat>,
    pub constant: JRat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinesJ {
    pub point: String,
    pub affines: Vec<AffineJ>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivPolyJ {
    pub curve: CurveJ,
    #[serde(rename = "box")]
    pub bx: PolyJ,
    pub pieces: Vec<AffinesJ>,
}

impl DivPolyJ {
    pub fn from_divpoly(p: &DivisorialPolytope) -> DivPolyJ {
        DivPolyJ {
            curve: CurveJ::from_curve(p.curve()),
            bx: PolyJ::from_poly(p.box_polytope()),
            pieces: p
                .pieces()
                .iter()
                .map(|(l, affs)| AffinesJ {
                    point: l.clone(),
                    affines: affs
                        .iter()
                        .map(|f| AffineJ {
                            gradient: jvec(&f.gradient),
                            constant: JRat(f.constant),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_divpoly(&self) -> Result<DivisorialPolytope> {
        let curve = at("curve", self.curve.to_curve())?;
        let bx = at("box", self.bx.to_poly(None))?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let affs = p
                    .affines
                    .iter()
                    .map(|f| Affine::new(rvec(&f.gradient), f.constant.0))
                    .collect();
                (p.point.clone(), affs)
            })
            .collect::<Vec<_>>();
        at("pieces", DivisorialPolytope::new(curve, bx, pieces))
    }
}

/// Any object that can be read from or written to a JSON document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Curve(Curve),
    Polyhedron(Polyhedron),
    Cone(Cone),
    PolyhedralDivisor(PolyhedralDivisor),
    Fansy(MarkedFansyDivisor),
    SupportFunction(SupportFunction),
    DivisorialPolytope(DivisorialPolytope),
}

impl Document {
    pub fn type_name(&self) -> &'static str {
        match self {
            Document::Curve(_) => "curve",
            Document::Polyhedron(_) => "polyhedron",
            Document::Cone(_) => "cone",
            Document::PolyhedralDivisor(_) => "polyhedral_divisor",
            Document::Fansy(_) => "fansy_divisor",
            Document::SupportFunction(_) => "support_function",
            Document::DivisorialPolytope(_) => "divisorial_polytope",
        }
    }
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn infer_type(obj: &serde_json::Map<String, Value>) -> Option<&'static str> {
    let has = |k: &str| obj.contains_key(k);
    if has("box") {
        Some("divisorial_polytope")
    } else if has("base") {
        Some("support_function")
    } else if has("tailfan") {
        Some("fansy_divisor")
    } else if has("tail") {
        Some("polyhedral_divisor")
    } else if has("points") {
        Some("curve")
    } else if has("vertices") || has("empty") {
        Some("polyhedron")
    } else if has("rays") {
        Some("cone")
    } else {
        None
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let Value::Object(mut obj) = value else {
        return Err(bad(".", "expected a JSON object"));
    };
    let ty = match obj.remove("type") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(bad("type", "expected a string")),
        None => infer_type(&obj)
            .ok_or_else(|| bad(".", "cannot infer the document type"))?
            .to_string(),
    };
    let body = Value::Object(obj);
    Ok(match ty.as_str() {
        "curve" => Document::Curve(typed::<CurveJ>(body)?.to_curve()?),
        "polyhedron" => Document::Polyhedron(typed::<PolyJ>(body)?.to_poly(None)?),
        "cone" => Document::Cone(typed::<ConeJ>(body)?.to_cone(None)?),
        "polyhedral_divisor" => Document::PolyhedralDivisor(typed::<PdivJ>(body)?.to_pdiv()?),
        "fansy_divisor" => Document::Fansy(typed::<FansyJ>(body)?.to_fansy()?),
        "support_function" => Document::SupportFunction(typed::<SupportJ>(body)?.to_support()?),
        "divisorial_polytope" => {
            Document::DivisorialPolytope(typed::<DivPolyJ>(body)?.to_divpoly()?)
        }
        t => return Err(bad("type", format!("unknown document type {t:?}"))),
    })
}

fn tagged<T: Serialize>(ty: &str, body: T) -> Value {
    let mut v = serde_json::to_value(body).expect("serializable");
    if let Value::Object(m) = &mut v {
        let mut out = serde_json::Map::new();
        out.insert("type".to_string(), Value::String(ty.to_string()));
        out.extend(std::mem::take(m));
        return Value::Object(out);
    }
    v
}

pub fn document_value(doc: &Document) -> Value {
    let ty = doc.type_name();
    match doc {
        Document::Curve(c) => tagged(ty, CurveJ::from_curve(c)),
        Document::Polyhedron(p) => tagged(ty, PolyJ::from_poly(p)),
        Document::Cone(c) => tagged(ty, ConeJ::from_cone(c)),
        Document::PolyhedralDivisor(d) => tagged(ty, PdivJ::from_pdiv(d)),
        Document::Fansy(x) => tagged(ty, FansyJ::from_fansy(x)),
        Document::SupportFunction(h) => tagged(ty, SupportJ::from_support(h)),
        Document::DivisorialPolytope(p) => tagged(ty, DivPolyJ::from_divpoly(p)),
    }
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn to_json(doc: &Document) -> String {
    pretty(&document_value(doc))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn rat_value(r: Rat) -> Value {
    Value::String(r.to_string())
}

pub fn vec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| rat_value(*x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn round_trip(doc: Document) {
        let text = to_json(&doc);
        let back = parse_document(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn fixtures_round_trip() {
        round_trip(Document::DivisorialPolytope(fixtures::ldp_divpoly()));
        round_trip(Document::SupportFunction(fixtures::ldp_support_function()));
        round_trip(Document::Fansy(fixtures::ldp_fansy()));
        round_trip(Document::PolyhedralDivisor(fixtures::ldp_cone_divisor()));
        round_trip(Document::Curve(
            Curve::abstract_curve(2, &["a", "b"]).unwrap(),
        ));
        round_trip(Document::Cone(Cone::zero(2)));
        round_trip(Document::Polyhedron(Polyhedron::empty(3)));
    }

    #[test]
    fn integers_and_strings_are_accepted() {
        let text = r#"{"curve":{"kind":"P1","points":[{"label":"0","coord":0},{"label":"inf","coord":"inf"}]},
            "box":{"vertices":[[-1],["1"]]},
            "pieces":[{"point":"0","affines":[{"gradient":["1/2"],"constant":1}]}]}"#;
        let doc = parse_document(text).unwrap();
        assert!(matches!(doc, Document::DivisorialPolytope(_)));
    }

    #[test]
    fn errors_name_the_path() {
        let text = r#"{"type":"divisorial_polytope","curve":{"kind":"P1","points":[]},
            "box":{"vertices":[[0],[1]]},
            "pieces":[{"point":"0","affines":[{"gradient":["x"],"constant":1}]}]}"#;
        match parse_document(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "pieces[0].affines[0].gradient[0]"),
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"type":"divisorial_polytope","curve":{"kind":"P1","points":[]},
            "box":{"vertices":[[0],[1]]},
            "pieces":[{"point":"nowhere","affines":[{"gradient":[0],"constant":1}]}]}"#;
        match parse_document(text) {
            Err(Error::Parse { path, message }) => {
                assert_eq!(path, "pieces");
                assert!(message.contains("nowhere"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
