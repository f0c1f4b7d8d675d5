//! Command dispatch for the `berkline` binary: one JSON document in on
//! stdin, one JSON (or DOT, or TSV) document out.
//!
//! Exit status 0 on success, 1 with `{code, message, location}` on stderr
//! when an operation rejects its input, and 2 when the input is malformed.

mod codec;

use std::fmt::Debug;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub use codec::ElemCodec;
use codec::*;

use crate::berkline::{dist, gauss_eval, gauss_eval_nd, invert, join, path, point_eq, Chart, TreeDistance};
use crate::fields::{validate_table, PAdic, TAdic, UltrametricTable, ValuedField};
use crate::trees::{contract, entry_time, retract, Time};
use crate::tropical::{
    decompose_monomial, immersion_check, is_def_compact, local_constancy, newton_breakpoints, poly_dimension,
    poly_member, skeleton_preimage, trop_eval, valuation_terms, Dimension, SkeletonPreimage, TropTerm,
};
use crate::valgrp::{collapse, concat_segments};

/// The subcommands, in the order they are listed by `--help`.
pub const COMMANDS: &[&str] = &[
    "point-eq",
    "join",
    "dist",
    "path",
    "gauss-eval",
    "invert",
    "hull",
    "entry-time",
    "retract",
    "contract",
    "trop-eval",
    "newton",
    "decompose",
    "poly-member",
    "compactness",
    "dimension",
    "skeleton",
    "immersion-check",
    "validate-table",
    "local-constancy",
    "collapse",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Dot,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Everything that determines a run besides the input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobConfig {
    /// Field configuration as JSON text; the 3-adic rationals when absent.
    pub field: Option<String>,
    pub command: String,
    pub format: Format,
    /// Seeds the sampled validation of explicitly given trees.
    pub seed: u64,
    /// Number of sampled vertex pairs in tree validation.
    pub budget: usize,
}

impl JobConfig {
    pub fn new(command: impl Into<String>) -> Self {
        JobConfig {
            field: None,
            command: command.into(),
            format: Format::Json,
            seed: 0,
            budget: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Exit status 2.
    Malformed { location: String, message: String },
    /// Exit status 1.
    Module {
        code: String,
        message: String,
        location: String,
    },
}

impl CliError {
    pub(crate) fn malformed(location: &str, message: impl Into<String>) -> Self {
        CliError::Malformed {
            location: location.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn module(code: &str, message: impl Into<String>, location: &str) -> Self {
        CliError::Module {
            code: code.to_string(),
            message: message.into(),
            location: location.to_string(),
        }
    }

    /// Wraps a library error; its code is the innermost variant name.
    pub(crate) fn from_module<E: std::error::Error + Debug>(e: &E, location: &str) -> Self {
        CliError::module(&error_code(&format!("{e:?}")), e.to_string(), location)
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed { .. } => 2,
            CliError::Module { .. } => 1,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Malformed { location, message } => {
                json!({ "code": "malformed_input", "message": message, "location": location })
            }
            CliError::Module {
                code,
                message,
                location,
            } => {
                json!({ "code": code, "message": message, "location": location })
            }
        }
    }
}

/// Snake-cased name of the first variant in a `Debug` rendering that is not
/// a wrapper around another module's error.
fn error_code(debug: &str) -> String {
    const WRAPPERS: &[&str] = &["Value", "Field", "Tree", "Berk", "Linear", "Table"];
    let name = debug
        .split(|c: char| !c.is_ascii_alphanumeric())
        .find(|t| !t.is_empty() && !WRAPPERS.contains(t))
        .unwrap_or("error");
    let mut out = String::new();
    for (i, ch) in name.chars().enumerate() {
        if ch.is_ascii_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.push(ch.to_ascii_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

/// Reads `--field`: inline JSON if it starts with `{`, otherwise a path.
pub fn load_field_arg(arg: &str) -> std::io::Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg)
    }
}

enum Space {
    PAdic(PAdic),
    TAdic(TAdic),
    Table(UltrametricTable),
}

fn parse_field(text: Option<&str>) -> Result<Space, CliError> {
    let Some(text) = text else {
        return Ok(Space::PAdic(PAdic::new(3).expect("3 is prime")));
    };
    let at = "--field";
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::malformed(at, e.to_string()))?;
    match string(get(&v, "field", at)?, &child(at, "field"))? {
        "padic" => {
            let p = unsigned(get(&v, "p", at)?, &child(at, "p"))?;
            PAdic::new(p)
                .map(Space::PAdic)
                .map_err(|e| CliError::from_module(&e, at))
        }
        "tadic" => match v.get("q") {
            None | Some(Value::Null) => Ok(Space::TAdic(TAdic::rational())),
            Some(q) => TAdic::prime(unsigned(q, &child(at, "q"))?)
                .map(Space::TAdic)
                .map_err(|e| CliError::from_module(&e, at)),
        },
        "table" => {
            let (labels, dist) = table_parts(&v, at)?;
            UltrametricTable::new(labels, dist)
                .map(Space::Table)
                .map_err(|e| CliError::from_module(&e, at))
        }
        other => Err(CliError::malformed(
            &child(at, "field"),
            format!("unknown field `{other}`"),
        )),
    }
}

fn table_parts(v: &Value, at: &str) -> Result<(Vec<String>, Vec<Vec<crate::valgrp::Gamma0Value>>), CliError> {
    let labels_at = child(at, "labels");
    let labels = array(get(v, "labels", at)?, &labels_at)?
        .iter()
        .enumerate()
        .map(|(i, l)| string(l, &child(&labels_at, i)).map(str::to_string))
        .collect::<Result<Vec<_>, _>>()?;
    let dist_at = child(at, "dist");
    let dist = array(get(v, "dist", at)?, &dist_at)?
        .iter()
        .enumerate()
        .map(|(i, row)| gammas(row, &child(&dist_at, i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((labels, dist))
}

/// Runs one command on one input document.
pub fn run(config: &JobConfig, input: &str) -> CliOutput {
    match execute(config, input) {
        Ok(stdout) => CliOutput {
            stdout,
            stderr: String::new(),
            code: 0,
        },
        Err(e) => CliOutput {
            stdout: String::new(),
            stderr: format!("{}\n", e.to_json()),
            code: e.exit_code(),
        },
    }
}

enum Rendered {
    Json(Value),
    Text(String),
}

fn execute(config: &JobConfig, input: &str) -> Result<String, CliError> {
    if !COMMANDS.contains(&config.command.as_str()) {
        return Err(CliError::malformed(
            "command",
            format!("unknown command `{}`", config.command),
        ));
    }
    let space = parse_field(config.field.as_deref())?;
    let v: Value = serde_json::from_str(input).map_err(|e| CliError::malformed("stdin", e.to_string()))?;
    let job = Job { config, input: &v };
    let rendered = match &space {
        Space::PAdic(f) => job.dispatch_field(f)?,
        Space::TAdic(f) => job.dispatch_field(f)?,
        Space::Table(t) => match job.dispatch_space(t)? {
            Some(r) => r,
            None => {
                return Err(CliError::module(
                    "unsupported_field",
                    format!(
                        "`{}` needs field arithmetic; a distance table only supports tree operations",
                        config.command
                    ),
                    "--field",
                ))
            }
        },
    };
    match rendered {
        Rendered::Json(v) => Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))),
        Rendered::Text(s) => Ok(s),
    }
}

struct Job<'a> {
    config: &'a JobConfig,
    input: &'a Value,
}

impl Job<'_> {
    fn arg(&self, key: &str) -> Result<&Value, CliError> {
        get(self.input, key, "")
    }

    fn json(&self, v: Value) -> Result<Rendered, CliError> {
        self.only(&[Format::Json])?;
        Ok(Rendered::Json(v))
    }

    fn only(&self, allowed: &[Format]) -> Result<(), CliError> {
        if allowed.contains(&self.config.format) {
            Ok(())
        } else {
            Err(CliError::malformed(
                "--format",
                format!(
                    "`{}` does not produce {:?} output",
                    self.config.command, self.config.format
                ),
            ))
        }
    }

    fn fail<E: std::error::Error + Debug>(&self) -> impl Fn(E) -> CliError + '_ {
        move |e| CliError::from_module(&e, &self.config.command)
    }

    /// Commands that need field arithmetic, falling back to the tree commands.
    fn dispatch_field<F: ElemCodec + ValuedField>(&self, f: &F) -> Result<Rendered, CliError> {
        match self.config.command.as_str() {
            "gauss-eval" => {
                let p = polynomial(f, self.arg("poly")?, "/poly")?;
                let value = if let Some(radii) = self.input.get("radii") {
                    gauss_eval_nd(f, &gammas(radii, "/radii")?, &p).map_err(self.fail())?
                } else {
                    let x = point(f, self.arg("point")?, "/point")?;
                    gauss_eval(f, &x, &p).map_err(self.fail())?
                };
                self.json(encode_gamma(&value))
            }
            "invert" => {
                let x = point(f, self.arg("x")?, "/x")?;
                self.json(encode_point(f, &invert(f, &x)))
            }
            "newton" => {
                let p = polynomial(f, self.arg("poly")?, "/poly")?;
                let bps = newton_breakpoints(f, &p).map_err(self.fail())?;
                let list: Vec<Value> = bps
                    .iter()
                    .map(|(s, m)| json!({ "slope": encode_rational(s), "multiplicity": m }))
                    .collect();
                self.json(json!({ "breakpoints": list }))
            }
            "trop-eval" if self.input.get("poly").is_some() => {
                let p = polynomial(f, self.arg("poly")?, "/poly")?;
                let r = gammas(self.arg("r")?, "/r")?;
                self.json(encode_gamma(
                    &trop_eval(&valuation_terms(f, &p), &r).map_err(self.fail())?,
                ))
            }
            _ => Ok(self.dispatch_space(f)?.expect("every command is handled for fields")),
        }
    }

    /// Commands that only use the ultrametric; `None` for arithmetic ones.
    fn dispatch_space<S: ElemCodec>(&self, s: &S) -> Result<Option<Rendered>, CliError> {
        let cfg = self.config;
        let two = || -> Result<_, CliError> { Ok((point(s, self.arg("x")?, "/x")?, point(s, self.arg("y")?, "/y")?)) };
        let tree_arg = || tree(s, self.arg("tree")?, "/tree", cfg.seed, cfg.budget);
        let time_arg = || -> Result<Time, CliError> {
            Time::new(gamma(self.arg("t")?, "/t")?).map_err(|e| CliError::from_module(&e, "/t"))
        };
        let out = match cfg.command.as_str() {
            "point-eq" => {
                let (x, y) = two()?;
                self.json(json!({ "equal": point_eq(s, &x, &y) }))?
            }
            "join" => {
                let (x, y) = two()?;
                self.json(encode_point(s, &join(s, &x, &y)))?
            }
            "dist" => {
                let (x, y) = two()?;
                let d = match dist(s, &x, &y) {
                    TreeDistance::Finite(q) => encode_rational(&q),
                    TreeDistance::Infinite => Value::String("inf".into()),
                };
                self.json(json!({ "dist": d }))?
            }
            "path" => {
                let (x, y) = two()?;
                let p = path(s, &x, &y);
                let pieces: Vec<Value> = p
                    .segment
                    .pieces()
                    .iter()
                    .zip(&p.charts)
                    .map(|(seg, chart)| {
                        let chart = match chart {
                            Chart::Radius(c) => json!({ "kind": "radius", "center": s.encode_elem(c) }),
                            Chart::InverseRadius(c) => json!({ "kind": "inverse_radius", "center": s.encode_elem(c) }),
                            Chart::Infinity => json!({ "kind": "infinity" }),
                        };
                        json!({ "origin": encode_gamma(&seg.origin), "end": encode_gamma(&seg.end), "chart": chart })
                    })
                    .collect();
                self.json(json!({
                    "pieces": pieces,
                    "start": encode_point(s, &p.start()),
                    "finish": encode_point(s, &p.finish()),
                }))?
            }
            "hull" => {
                let pts = points(s, self.arg("points")?, "/points")?;
                let gauss = match self.input.get("gauss") {
                    Some(g) => boolean(g, "/gauss")?,
                    None => false,
                };
                let t = crate::trees::convex_hull(s, &pts, gauss).map_err(self.fail())?;
                match cfg.format {
                    Format::Dot => Rendered::Text(t.to_dot(|e| s.label(e), |_| None)),
                    _ => self.json(encode_tree(s, &t))?,
                }
            }
            "entry-time" => {
                let t = tree_arg()?;
                let x = point(s, self.arg("x")?, "/x")?;
                let time = entry_time(s, &t, &x).map_err(self.fail())?;
                self.json(json!({ "time": encode_gamma(time.value()) }))?
            }
            "retract" => {
                let t = tree_arg()?;
                let time = time_arg()?;
                let x = point(s, self.arg("x")?, "/x")?;
                self.json(encode_point(s, &retract(s, &t, &time, &x).map_err(self.fail())?))?
            }
            "contract" => {
                let time = time_arg()?;
                let x = point(s, self.arg("x")?, "/x")?;
                self.json(encode_point(s, &contract(s, &time, &x).map_err(self.fail())?))?
            }
            "trop-eval" => {
                let terms_v = self.arg("terms")?;
                let mut terms = Vec::new();
                for (i, t) in array(terms_v, "/terms")?.iter().enumerate() {
                    let at = child("/terms", i);
                    let coeff = gamma(get(t, "coeff", &at)?, &child(&at, "coeff"))?;
                    let exps_at = child(&at, "exps");
                    let exps = array(get(t, "exps", &at)?, &exps_at)?
                        .iter()
                        .enumerate()
                        .map(|(k, e)| integer(e, &child(&exps_at, k)))
                        .collect::<Result<Vec<_>, _>>()?;
                    terms.push(TropTerm::new(coeff, exps));
                }
                let r = gammas(self.arg("r")?, "/r")?;
                self.json(encode_gamma(&trop_eval(&terms, &r).map_err(self.fail())?))?
            }
            "decompose" => {
                let expr = mono_expr(self.arg("expr")?, "/expr")?;
                let domain = interval(self.arg("domain")?, "/domain")?;
                let pl = decompose_monomial(&expr, &domain).map_err(self.fail())?;
                match cfg.format {
                    Format::Tsv => Rendered::Text(pl.to_tsv().map_err(self.fail())?),
                    _ => self.json(encode_pl(&pl))?,
                }
            }
            "poly-member" => {
                let p = polyhedron(self.arg("polyhedron")?, "/polyhedron")?;
                let v = gammas(self.arg("point")?, "/point")?;
                self.json(json!({ "member": poly_member(&p, &v).map_err(self.fail())? }))?
            }
            "compactness" => {
                let p = polyhedron(self.arg("polyhedron")?, "/polyhedron")?;
                self.json(json!({ "compact": is_def_compact(&p).map_err(self.fail())? }))?
            }
            "dimension" => {
                let p = polyhedron(self.arg("polyhedron")?, "/polyhedron")?;
                let r = poly_dimension(&p).map_err(self.fail())?;
                let d = match r.dimension {
                    Dimension::NegInfinity => Value::String("-inf".into()),
                    Dimension::Finite(n) => json!(n),
                };
                self.json(json!({ "dimension": d, "certified": r.certified }))?
            }
            "skeleton" => {
                let div = divisor(s, self.input, "")?;
                let r = skeleton_preimage(s, &div).map_err(self.fail())?;
                match cfg.format {
                    Format::Dot => Rendered::Text(r.preimage.to_dot(|e| s.label(e))),
                    _ => self.json(json!({
                        "tree": encode_tree(s, &r.preimage.tree),
                        "slopes": r.preimage.edge_slopes,
                        "hull": encode_tree(s, &r.hull.tree),
                        "hull_slopes": r.hull.edge_slopes,
                        "immersion": immersion_check(&r.preimage),
                    }))?,
                }
            }
            "immersion-check" => {
                if let Some(tv) = self.input.get("tree") {
                    let t = tree(s, tv, "/tree", cfg.seed, cfg.budget)?;
                    let slopes_v = self.arg("slopes")?;
                    let slopes = array(slopes_v, "/slopes")?
                        .iter()
                        .enumerate()
                        .map(|(i, k)| integer(k, &child("/slopes", i)))
                        .collect::<Result<Vec<_>, _>>()?;
                    if slopes.len() != t.edges().len() {
                        return Err(CliError::module(
                            "slope_count",
                            "expected one slope per tree edge",
                            "/slopes",
                        ));
                    }
                    self.json(json!({ "immersion": immersion_check(&SkeletonPreimage::new(t, slopes)) }))?
                } else {
                    let div = divisor(s, self.input, "")?;
                    let r = skeleton_preimage(s, &div).map_err(self.fail())?;
                    self.json(json!({
                        "immersion": immersion_check(&r.preimage),
                        "hull_immersion": immersion_check(&r.hull),
                    }))?
                }
            }
            "local-constancy" => {
                let div = divisor(s, self.input, "")?;
                let x = point(s, self.arg("x")?, "/x")?;
                self.json(json!({ "slope": local_constancy(s, &div, &x).map_err(self.fail())? }))?
            }
            "validate-table" => {
                let (labels, dist) = table_parts(self.input, "")?;
                let report = match validate_table(&labels, &dist) {
                    Ok(()) => json!({ "valid": true }),
                    Err(v) => json!({
                        "valid": false,
                        "violation": { "code": error_code(&format!("{v:?}")), "message": v.to_string() },
                    }),
                };
                self.json(report)?
            }
            "collapse" => {
                let segs_v = self.arg("segments")?;
                let segs = array(segs_v, "/segments")?
                    .iter()
                    .enumerate()
                    .map(|(i, sv)| segment(sv, &child("/segments", i)))
                    .collect::<Result<Vec<_>, _>>()?;
                let g = concat_segments(segs).map_err(self.fail())?;
                let c = collapse(&g).map_err(self.fail())?;
                let mut images = Vec::new();
                if let Some(pv) = self.input.get("points") {
                    for (i, p) in array(pv, "/points")?.iter().enumerate() {
                        let at = child("/points", i);
                        let piece = unsigned(get(p, "piece", &at)?, &child(&at, "piece"))?
                            .to_usize()
                            .unwrap_or(usize::MAX);
                        let value = gamma(get(p, "value", &at)?, &child(&at, "value"))?;
                        let sp = g.point(piece, value).map_err(|e| CliError::from_module(&e, &at))?;
                        images.push(encode_gamma(&c.apply(&sp).map_err(|e| CliError::from_module(&e, &at))?));
                    }
                }
                self.json(json!({
                    "interval": encode_interval(&c.interval),
                    "maps": c.maps.iter().map(encode_monomial).collect::<Vec<_>>(),
                    "piece_images": c.piece_images().iter().map(encode_segment).collect::<Vec<_>>(),
                    "images": images,
                }))?
            }
            _ => return Ok(None),
        };
        Ok(Some(out))
    }
}
