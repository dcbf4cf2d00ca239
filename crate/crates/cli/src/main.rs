//! `divpoly`: command-line front end for the `divpoly` library.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 error, 3 undecided verdict.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use divpoly::cone_algebra::{self, GeneratorReport};
use divpoly::curve::Tri;
use divpoly::divpoly::{DivisorialPolytope, Hilbert};
use divpoly::fansy::Condition;
use divpoly::geometry::{LatticeVec, Rat, UniPoly};
use divpoly::json::{self as wire, Document};
use divpoly::pdiv::PolyhedralDivisor;
use divpoly::render;
use divpoly::support::SupportFunction;
use divpoly::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Check the defining conditions of the input object.
    Validate,
    /// Pass between divisorial polytopes and support functions.
    Dualize,
    /// The marked fansy divisor underlying the input.
    Fansy,
    /// Degree, Hilbert polynomial and smoothness of a divisorial polytope.
    Invariants,
    /// The polyhedral divisor on the affine cone.
    Cone,
    /// The support function recovered from a cone divisor.
    Recover,
    /// Generator weights and sections of the graded algebra.
    Generators,
    /// Projective normality of the polarization.
    Normality,
    /// Divisorial polytope of a lattice polytope under an exact sequence.
    Downgrade,
    /// SVG picture of a rank-1 object.
    Render,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Parser, Debug)]
#[command(
    name = "divpoly",
    version,
    about = "Divisorial polytopes, support functions and polyhedral divisors"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input JSON document; `downgrade` takes the polytope and then the sequence data.
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Output file, written atomically; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Replace the genus of the base curve; points lose their coordinates.
    #[arg(long)]
    genus_override: Option<u32>,
    /// Search cap for the alpha multipliers.
    #[arg(long)]
    alpha_cap: Option<u64>,
    /// Dilations at which to tabulate the Hilbert function.
    #[arg(long, value_delimiter = ',')]
    hilbert_k: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Negative,
    Unknown,
}

impl Status {
    fn of(t: Tri) -> Status {
        match t {
            Tri::Yes => Status::Ok,
            Tri::No => Status::Negative,
            Tri::Unknown => Status::Unknown,
        }
    }

    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Unknown => 3,
        }
    }
}

enum Output {
    Doc(Document),
    Report(Value),
    Svg(String),
}

struct Outcome {
    output: Output,
    status: Status,
}

impl Outcome {
    fn doc(d: Document) -> Outcome {
        Outcome {
            output: Output::Doc(d),
            status: Status::Ok,
        }
    }

    fn report(v: Value, status: Status) -> Outcome {
        Outcome {
            output: Output::Report(v),
            status,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    let docs = if cli.command == Command::Downgrade {
        Vec::new()
    } else {
        cli.inputs
            .iter()
            .map(|p| load(p, cli.genus_override))
            .collect::<Result<Vec<_>, String>>()?
    };
    let outcome = match dispatch(cli, &docs) {
        Ok(o) => o,
        Err(Error::NotAmple(why)) => {
            Outcome::report(json!({"verdict": "no", "reason": why}), Status::Negative)
        }
        Err(Error::Undecided(why)) => Outcome::report(
            json!({"verdict": "unknown", "reason": why}),
            Status::Unknown,
        ),
        Err(e) => return Err(e.to_string()),
    };
    let format = cli.format.unwrap_or(if cli.command == Command::Render {
        Format::Svg
    } else {
        Format::Json
    });
    let text = match (outcome.output, format) {
        (Output::Svg(s), _) => s,
        (Output::Doc(d), Format::Svg) => render::render_document(&d).map_err(|e| e.to_string())?,
        (Output::Doc(d), Format::Json) => wire::to_json(&d),
        (Output::Report(v), Format::Json) => wire::pretty(&v),
        (Output::Report(_), Format::Svg) => {
            return Err("this command produces a report, which has no SVG form".to_string())
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(outcome.status.code())
}

fn load(path: &Path, genus: Option<u32>) -> Result<Document, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = wire::parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    match genus {
        None => Ok(doc),
        Some(g) => regenus(doc, g).map_err(|e| e.to_string()),
    }
}

fn regenus(doc: Document, g: u32) -> divpoly::Result<Document> {
    Ok(match doc {
        Document::Curve(c) => Document::Curve(c.with_genus(g)),
        Document::PolyhedralDivisor(d) => {
            Document::PolyhedralDivisor(d.with_curve(d.curve().with_genus(g))?)
        }
        Document::Fansy(x) => Document::Fansy(x.with_curve(x.curve().with_genus(g))?),
        Document::SupportFunction(h) => {
            let base = h.base().with_curve(h.base().curve().with_genus(g))?;
            Document::SupportFunction(h.with_base(base)?)
        }
        Document::DivisorialPolytope(p) => {
            Document::DivisorialPolytope(p.with_curve(p.curve().with_genus(g))?)
        }
        other => other,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    let Some(path) = out else {
        print!("{text}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    tmp.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    tmp.persist(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(())
}

fn single<'a>(cli: &Cli, docs: &'a [Document]) -> divpoly::Result<&'a Document> {
    if cli.command != Command::Downgrade && docs.len() != 1 {
        return Err(Error::Invalid(
            format!("{:?} takes exactly one input", cli.command).to_lowercase(),
        ));
    }
    Ok(&docs[0])
}

fn dispatch(cli: &Cli, docs: &[Document]) -> divpoly::Result<Outcome> {
    if cli.command == Command::Downgrade {
        return downgrade(cli);
    }
    let doc = single(cli, docs)?;
    match cli.command {
        Command::Validate => Ok(validate(doc)),
        Command::Dualize => dualize(doc),
        Command::Fansy => Ok(Outcome::doc(Document::Fansy(match doc {
            Document::DivisorialPolytope(p) => p.dualize()?.0,
            Document::SupportFunction(h) => h.base().clone(),
            Document::PolyhedralDivisor(d) => cone_algebra::recover(d)?.0,
            Document::Fansy(x) => x.clone(),
            other => return Err(wrong_type(other)),
        }))),
        Command::Invariants => invariants(cli, as_divpoly(doc)?),
        Command::Cone => Ok(Outcome::doc(Document::PolyhedralDivisor(
            cone_algebra::cone_divisor(&as_support(doc)?)?,
        ))),
        Command::Recover => match doc {
            Document::PolyhedralDivisor(d) => Ok(Outcome::doc(Document::SupportFunction(
                cone_algebra::recover(d)?.1,
            ))),
            other => Err(wrong_type(other)),
        },
        Command::Generators => generators(cli, &as_cone_divisor(doc)?),
        Command::Normality => normality(cli, &as_support(doc)?),
        Command::Render => Ok(Outcome {
            output: Output::Svg(render::render_document(doc)?),
            status: Status::Ok,
        }),
        Command::Downgrade => unreachable!(),
    }
}

fn wrong_type(doc: &Document) -> Error {
    Error::Invalid(format!(
        "this command does not accept a {}",
        doc.type_name()
    ))
}

fn as_divpoly(doc: &Document) -> divpoly::Result<DivisorialPolytope> {
    match doc {
        Document::DivisorialPolytope(p) => Ok(p.clone()),
        Document::SupportFunction(h) => h.dualize(),
        other => Err(wrong_type(other)),
    }
}

fn as_support(doc: &Document) -> divpoly::Result<SupportFunction> {
    match doc {
        Document::SupportFunction(h) => Ok(h.clone()),
        Document::DivisorialPolytope(p) => Ok(p.dualize()?.1),
        Document::PolyhedralDivisor(d) => Ok(cone_algebra::recover(d)?.1),
        other => Err(wrong_type(other)),
    }
}

fn as_cone_divisor(doc: &Document) -> divpoly::Result<PolyhedralDivisor> {
    match doc {
        Document::PolyhedralDivisor(d) => Ok(d.clone()),
        _ => cone_algebra::cone_divisor(&as_support(doc)?),
    }
}

fn conditions(cs: &[Condition]) -> Value {
    Value::Array(
        cs.iter()
            .map(|c| json!({"name": c.name, "verdict": c.verdict.as_str(), "witnesses": c.witnesses}))
            .collect(),
    )
}

fn validate(doc: &Document) -> Outcome {
    let mut out = Map::new();
    out.insert("type".into(), json!(doc.type_name()));
    let verdict = match doc {
        Document::DivisorialPolytope(p) => {
            let r = p.validate();
            out.insert("conditions".into(), conditions(&r.conditions));
            r.verdict
        }
        Document::Fansy(x) => {
            let r = x.validate();
            out.insert("conditions".into(), conditions(&r.conditions));
            r.verdict
        }
        Document::PolyhedralDivisor(d) => {
            let p = d.properness();
            if let Some(r) = &p.reason {
                out.insert("reason".into(), json!(r));
            }
            if let Some(w) = &p.witness {
                out.insert("witness".into(), wire::vec_value(w));
            }
            if let Some(note) = d.known_inconsistency_note() {
                out.insert("note".into(), json!(note));
            }
            p.verdict
        }
        Document::SupportFunction(h) => {
            out.insert("cartier".into(), json!(h.is_cartier().as_str()));
            match h.ample_report() {
                Ok((t, why)) => {
                    out.insert("ample".into(), json!(t.as_str()));
                    if let Some(w) = why {
                        out.insert("reason".into(), json!(w));
                    }
                }
                Err(e) => {
                    out.insert("ample".into(), json!("no"));
                    out.insert("reason".into(), json!(e.to_string()));
                }
            }
            Tri::Yes
        }
        _ => Tri::Yes,
    };
    out.insert("verdict".into(), json!(verdict.as_str()));
    Outcome::report(Value::Object(out), Status::of(verdict))
}

fn dualize(doc: &Document) -> divpoly::Result<Outcome> {
    match doc {
        Document::DivisorialPolytope(p) => {
            let r = p.validate();
            if r.verdict == Tri::No {
                let v = json!({"verdict": "no", "conditions": conditions(&r.conditions)});
                return Ok(Outcome::report(v, Status::Negative));
            }
            Ok(Outcome::doc(Document::SupportFunction(p.dualize()?.1)))
        }
        Document::SupportFunction(h) => {
            Ok(Outcome::doc(Document::DivisorialPolytope(h.dualize()?)))
        }
        other => Err(wrong_type(other)),
    }
}

fn poly_value(p: &UniPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| rat_or_int(*c)).collect())
}

fn rat_or_int(c: Rat) -> Value {
    if c.is_integer() {
        if let Ok(n) = i64::try_from(c.to_integer()) {
            return json!(n);
        }
    }
    wire::rat_value(c)
}

fn point_value(v: &[Rat]) -> Value {
    if v.len() == 1 {
        wire::rat_value(v[0])
    } else {
        wire::vec_value(v)
    }
}

fn tri_value(t: Tri) -> Value {
    match t {
        Tri::Yes => json!(true),
        Tri::No => json!(false),
        Tri::Unknown => json!("unknown"),
    }
}

fn invariants(cli: &Cli, p: DivisorialPolytope) -> divpoly::Result<Outcome> {
    let r = p.validate();
    if r.verdict == Tri::No {
        let v = json!({"verdict": "no", "conditions": conditions(&r.conditions)});
        return Ok(Outcome::report(v, Status::Negative));
    }
    let mut out = Map::new();
    out.insert("degree".into(), wire::rat_value(p.degree_number()?));
    let hilbert = p.hilbert_polynomial()?;
    let value = match &hilbert {
        Hilbert::Exact(e) => poly_value(e),
        Hilbert::Bounds { upper, lower } => {
            json!({"upper": poly_value(upper), "lower": poly_value(lower)})
        }
    };
    out.insert("hilbert".into(), value);
    if !cli.hilbert_k.is_empty() {
        let rows: Vec<Value> = cli
            .hilbert_k
            .iter()
            .map(|&k| match &hilbert {
                Hilbert::Exact(e) => json!([k, rat_or_int(e.eval_int(k))]),
                Hilbert::Bounds { upper, lower } => {
                    json!([k, {"upper": rat_or_int(upper.eval_int(k)), "lower": rat_or_int(lower.eval_int(k))}])
                }
            })
            .collect();
        out.insert("table".into(), Value::Array(rows));
    }
    let s = p.is_smooth()?;
    out.insert("smooth".into(), tri_value(s.verdict));
    out.insert(
        "witnesses".into(),
        Value::Array(
            s.witnesses
                .iter()
                .map(|(l, v)| json!([l, point_value(v)]))
                .collect(),
        ),
    );
    Ok(Outcome::report(Value::Object(out), Status::Ok))
}

fn weight_list<'a>(ws: impl IntoIterator<Item = &'a LatticeVec>) -> Value {
    Value::Array(ws.into_iter().map(|w| json!(w)).collect())
}

fn generators(cli: &Cli, d: &PolyhedralDivisor) -> divpoly::Result<Outcome> {
    let r: GeneratorReport = cone_algebra::generators(d, cli.alpha_cap)?;
    let mut gens = Vec::new();
    for (w, secs) in &r.generators {
        let rendered = secs
            .iter()
            .map(|s| s.render(d.curve()))
            .collect::<divpoly::Result<Vec<_>>>()?;
        gens.push(json!({"weight": w, "sections": rendered}));
    }
    let count: usize = r.generators.values().map(Vec::len).sum();
    let v = json!({
        "c": r.c,
        "alphas": r.alphas.iter().map(|(u, a)| json!([u, a])).collect::<Vec<_>>(),
        "g_all": weight_list(&r.g_all),
        "g_min": weight_list(&r.g_min),
        "generators": gens,
        "generator_count": count,
        "normality": r.normality.as_str(),
    });
    Ok(Outcome::report(v, Status::Ok))
}

fn normality(cli: &Cli, h: &SupportFunction) -> divpoly::Result<Outcome> {
    let t = cone_algebra::projectively_normal(h, cli.alpha_cap)?;
    let mut out = Map::new();
    out.insert("normality".into(), json!(t.as_str()));
    if h.base().curve().is_p1() {
        let d = cone_algebra::cone_divisor(h)?;
        let r = cone_algebra::minimal_weights(&d, cli.alpha_cap)?;
        out.insert("g_min".into(), weight_list(&r.g_min));
    }
    Ok(Outcome::report(Value::Object(out), Status::of(t)))
}

fn int_list(v: &Value, what: &str) -> divpoly::Result<LatticeVec> {
    v.as_array()
        .ok_or_else(|| parse_err(what, "expected an array of integers"))?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_i64()
                .ok_or_else(|| parse_err(&format!("{what}[{i}]"), "expected an integer"))
        })
        .collect()
}

fn matrix(v: &Value, what: &str) -> divpoly::Result<Vec<LatticeVec>> {
    v.as_array()
        .ok_or_else(|| parse_err(what, "expected an array of rows"))?
        .iter()
        .enumerate()
        .map(|(i, row)| int_list(row, &format!("{what}[{i}]")))
        .collect()
}

fn parse_err(path: &str, message: &str) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn downgrade(cli: &Cli) -> divpoly::Result<Outcome> {
    if cli.inputs.len() != 2 {
        return Err(Error::Invalid(
            "downgrade takes the polytope and the sequence data as two inputs".to_string(),
        ));
    }
    let delta = match load(&cli.inputs[0], None).map_err(Error::Invalid)? {
        Document::Polyhedron(p) => p,
        other => return Err(wrong_type(&other)),
    };
    let text =
        std::fs::read_to_string(&cli.inputs[1]).map_err(|e| Error::Invalid(e.to_string()))?;
    let seq: Value =
        serde_json::from_str(&text).map_err(|e| parse_err("sequence", &e.to_string()))?;
    let f = int_list(&seq["f"], "f")?;
    let g = matrix(&seq["g"], "g")?;
    let s = matrix(&seq["s"], "s")?;
    let p = DivisorialPolytope::toric_downgrade(&delta, &f, &g, &s)?;
    Ok(Outcome::doc(Document::DivisorialPolytope(p)))
}
