//! JSON encodings of values, points, trees, polynomials, formulas and
//! divisors. Decoders report the JSON location of whatever they reject.

use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::CliError;
use crate::berkline::BerkPoint;
use crate::fields::{PAdic, Polynomial, TAdic, Ultrametric, UltrametricTable, ValuedField};
use crate::trees::{convex_hull, validate_tree, FiniteSubtree, RadiusBound};
use crate::tropical::{Atom, Cmp, Divisor, Formula, MonoExpr, MonoTerm, PLFunction1D, TropicalPolyhedron};
use crate::valgrp::{fmt_rational, parse_rational, Gamma0Value, Interval, MonomialMap, Segment};

pub(crate) fn child(at: &str, key: impl std::fmt::Display) -> String {
    format!("{at}/{key}")
}

pub(crate) fn get<'a>(v: &'a Value, key: &str, at: &str) -> Result<&'a Value, CliError> {
    v.get(key)
        .ok_or_else(|| CliError::malformed(&child(at, key), format!("missing field `{key}`")))
}

pub(crate) fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::malformed(at, "expected an array"))
}

pub(crate) fn boolean(v: &Value, at: &str) -> Result<bool, CliError> {
    v.as_bool().ok_or_else(|| CliError::malformed(at, "expected a boolean"))
}

pub(crate) fn integer(v: &Value, at: &str) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| CliError::malformed(at, "expected an integer"))
}

pub(crate) fn unsigned(v: &Value, at: &str) -> Result<u64, CliError> {
    v.as_u64()
        .ok_or_else(|| CliError::malformed(at, "expected a nonnegative integer"))
}

pub(crate) fn string<'a>(v: &'a Value, at: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| CliError::malformed(at, "expected a string"))
}

/// `"num/den"`, an integer string, or a JSON integer.
pub(crate) fn rational(v: &Value, at: &str) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| CliError::malformed(at, e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(|k| BigRational::from_integer(k.into()))
            .ok_or_else(|| CliError::malformed(at, "expected an integer or a \"num/den\" string")),
        _ => Err(CliError::malformed(at, "expected a rational")),
    }
}

pub(crate) fn encode_rational(q: &BigRational) -> Value {
    Value::String(fmt_rational(q))
}

/// `{"zero":true}`, `{"e":"num/den"}`, or the strings `zero`, `inf`
/// (the zero value, used for times), `e=num/den` and `num/den`.
pub(crate) fn gamma(v: &Value, at: &str) -> Result<Gamma0Value, CliError> {
    match v {
        Value::Object(m) => {
            if m.get("zero") == Some(&Value::Bool(true)) {
                Ok(Gamma0Value::Zero)
            } else if let Some(e) = m.get("e") {
                rational(e, &child(at, "e")).map(Gamma0Value::Fin)
            } else {
                Err(CliError::malformed(
                    at,
                    "expected {\"zero\":true} or {\"e\":\"num/den\"}",
                ))
            }
        }
        Value::String(s) if s.trim() == "inf" => Ok(Gamma0Value::Zero),
        Value::String(s) => s
            .parse()
            .map_err(|e: crate::valgrp::ValueError| CliError::malformed(at, e.to_string())),
        _ => Err(CliError::malformed(at, "expected a value")),
    }
}

pub(crate) fn encode_gamma(g: &Gamma0Value) -> Value {
    match g {
        Gamma0Value::Zero => json!({ "zero": true }),
        Gamma0Value::Fin(e) => json!({ "e": fmt_rational(e) }),
    }
}

pub(crate) fn gammas(v: &Value, at: &str) -> Result<Vec<Gamma0Value>, CliError> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| gamma(x, &child(at, i)))
        .collect()
}

/// Element encodings for each carrier.
pub trait ElemCodec: Ultrametric {
    fn decode_elem(&self, v: &Value, at: &str) -> Result<Self::Elem, CliError>;
    fn encode_elem(&self, e: &Self::Elem) -> Value;

    /// Short text for DOT labels.
    fn label(&self, e: &Self::Elem) -> String {
        match self.encode_elem(e) {
            Value::String(s) => s,
            other => other.to_string(),
        }
    }
}

impl ElemCodec for PAdic {
    fn decode_elem(&self, v: &Value, at: &str) -> Result<BigRational, CliError> {
        rational(v, at)
    }

    fn encode_elem(&self, e: &BigRational) -> Value {
        encode_rational(e)
    }
}

/// A t-adic element is a rational, a coefficient array (lowest degree
/// first) or `{"num":[…],"den":[…]}`.
impl ElemCodec for TAdic {
    fn decode_elem(&self, v: &Value, at: &str) -> Result<crate::fields::RationalFunction, CliError> {
        let coeffs = |v: &Value, at: &str| -> Result<Vec<BigRational>, CliError> {
            array(v, at)?
                .iter()
                .enumerate()
                .map(|(i, c)| rational(c, &child(at, i)))
                .collect()
        };
        let (num, den) = match v {
            Value::Array(_) => (coeffs(v, at)?, vec![BigRational::one()]),
            Value::Object(_) => {
                let num = coeffs(get(v, "num", at)?, &child(at, "num"))?;
                let den = match v.get("den") {
                    Some(d) => coeffs(d, &child(at, "den"))?,
                    None => vec![BigRational::one()],
                };
                (num, den)
            }
            _ => (vec![rational(v, at)?], vec![BigRational::one()]),
        };
        self.fraction(&num, &den).ok_or_else(|| {
            CliError::module(
                "bad_coefficient",
                "coefficient outside the field or zero denominator",
                at,
            )
        })
    }

    fn encode_elem(&self, e: &crate::fields::RationalFunction) -> Value {
        let enc = |v: &[BigRational]| Value::Array(v.iter().map(encode_rational).collect());
        json!({ "num": enc(e.numerator()), "den": enc(e.denominator()) })
    }

    fn label(&self, e: &crate::fields::RationalFunction) -> String {
        let text = |v: &[BigRational]| v.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
        format!("[{}]/[{}]", text(e.numerator()), text(e.denominator()))
    }
}

/// Table elements are referred to by label.
impl ElemCodec for UltrametricTable {
    fn decode_elem(&self, v: &Value, at: &str) -> Result<usize, CliError> {
        let s = string(v, at)?;
        self.index_of(s)
            .ok_or_else(|| CliError::module("unknown_label", format!("no table entry `{s}`"), at))
    }

    fn encode_elem(&self, e: &usize) -> Value {
        Value::String(self.label(*e).to_string())
    }
}

pub(crate) fn point<S: ElemCodec>(s: &S, v: &Value, at: &str) -> Result<BerkPoint<S::Elem>, CliError> {
    if v.get("inf") == Some(&Value::Bool(true)) {
        return Ok(BerkPoint::Infinity);
    }
    let center = s.decode_elem(get(v, "center", at)?, &child(at, "center"))?;
    let radius = gamma(get(v, "radius", at)?, &child(at, "radius"))?;
    Ok(BerkPoint::disc(center, radius))
}

pub(crate) fn encode_point<S: ElemCodec>(s: &S, p: &BerkPoint<S::Elem>) -> Value {
    match p {
        BerkPoint::Infinity => json!({ "inf": true }),
        BerkPoint::Disc { center, radius } => {
            json!({ "center": s.encode_elem(center), "radius": encode_gamma(radius) })
        }
    }
}

pub(crate) fn points<S: ElemCodec>(s: &S, v: &Value, at: &str) -> Result<Vec<BerkPoint<S::Elem>>, CliError> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, p)| point(s, p, &child(at, i)))
        .collect()
}

/// A dense coefficient array (univariate, lowest degree first) or
/// `{"arity":n,"terms":[{"exps":[…],"coeff":…}]}`.
pub(crate) fn polynomial<F: ElemCodec + ValuedField>(
    f: &F,
    v: &Value,
    at: &str,
) -> Result<Polynomial<F::Elem>, CliError> {
    if let Value::Array(items) = v {
        let coeffs = items
            .iter()
            .enumerate()
            .map(|(i, c)| f.decode_elem(c, &child(at, i)))
            .collect::<Result<_, _>>()?;
        return Ok(Polynomial::from_coeffs(f, coeffs));
    }
    let arity = unsigned(get(v, "arity", at)?, &child(at, "arity"))? as usize;
    let terms_at = child(at, "terms");
    let mut terms = Vec::new();
    for (i, t) in array(get(v, "terms", at)?, &terms_at)?.iter().enumerate() {
        let t_at = child(&terms_at, i);
        let exps_at = child(&t_at, "exps");
        let exps = array(get(t, "exps", &t_at)?, &exps_at)?
            .iter()
            .enumerate()
            .map(|(k, e)| unsigned(e, &child(&exps_at, k)).map(|e| e as u32))
            .collect::<Result<Vec<_>, _>>()?;
        terms.push((exps, f.decode_elem(get(t, "coeff", &t_at)?, &child(&t_at, "coeff"))?));
    }
    Polynomial::new(f, arity, terms).map_err(|e| CliError::from_module(&e, at))
}

/// Either hull generators `{"points":[…],"gauss":bool}` or an explicit
/// `{"vertices":[…],"edges":[{"center","rlo","rhi"}]}`, which is checked
/// by sampling `budget` vertex pairs.
pub(crate) fn tree<S: ElemCodec>(
    s: &S,
    v: &Value,
    at: &str,
    seed: u64,
    budget: usize,
) -> Result<FiniteSubtree<S::Elem>, CliError> {
    if let Some(ps) = v.get("points") {
        let gens = points(s, ps, &child(at, "points"))?;
        let gauss = match v.get("gauss") {
            Some(g) => boolean(g, &child(at, "gauss"))?,
            None => false,
        };
        return convex_hull(s, &gens, gauss).map_err(|e| CliError::from_module(&e, at));
    }
    let vertices = points(s, get(v, "vertices", at)?, &child(at, "vertices"))?;
    let edges_at = child(at, "edges");
    let mut edges = Vec::new();
    for (i, e) in array(get(v, "edges", at)?, &edges_at)?.iter().enumerate() {
        let e_at = child(&edges_at, i);
        let center = s.decode_elem(get(e, "center", &e_at)?, &child(&e_at, "center"))?;
        let lo = gamma(get(e, "rlo", &e_at)?, &child(&e_at, "rlo"))?;
        let hi_v = get(e, "rhi", &e_at)?;
        let hi = if hi_v.as_str() == Some("unbounded") {
            RadiusBound::Unbounded
        } else {
            RadiusBound::Finite(gamma(hi_v, &child(&e_at, "rhi"))?)
        };
        edges.push((center, lo, hi));
    }
    let t = FiniteSubtree::from_parts(s, vertices, edges).map_err(|e| CliError::from_module(&e, at))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    validate_tree(s, &t, &mut rng, budget).map_err(|e| CliError::from_module(&e, at))?;
    Ok(t)
}

pub(crate) fn encode_tree<S: ElemCodec>(s: &S, t: &FiniteSubtree<S::Elem>) -> Value {
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .map(|e| {
            let rhi = match &e.hi {
                RadiusBound::Finite(h) => encode_gamma(h),
                RadiusBound::Unbounded => Value::String("unbounded".into()),
            };
            json!({ "center": s.encode_elem(&e.center), "rlo": encode_gamma(&e.lo), "rhi": rhi })
        })
        .collect();
    let vertices: Vec<Value> = t.vertices().iter().map(|p| encode_point(s, p)).collect();
    json!({ "vertices": vertices, "edges": edges })
}

/// `{"lo":…,"hi":…,"lo_closed":bool,"hi_closed":bool}`; ends default closed.
pub(crate) fn interval(v: &Value, at: &str) -> Result<Interval, CliError> {
    let flag = |key: &str| -> Result<bool, CliError> { v.get(key).map_or(Ok(true), |b| boolean(b, &child(at, key))) };
    let lo = gamma(get(v, "lo", at)?, &child(at, "lo"))?;
    let hi = gamma(get(v, "hi", at)?, &child(at, "hi"))?;
    Interval::new(lo, hi, flag("lo_closed")?, flag("hi_closed")?).map_err(|e| CliError::from_module(&e, at))
}

pub(crate) fn encode_interval(i: &Interval) -> Value {
    json!({
        "lo": encode_gamma(&i.lo),
        "hi": encode_gamma(&i.hi),
        "lo_closed": i.lo_closed,
        "hi_closed": i.hi_closed,
    })
}

/// `[origin, end]`.
pub(crate) fn segment(v: &Value, at: &str) -> Result<Segment, CliError> {
    match array(v, at)?.as_slice() {
        [o, e] => Ok(Segment::new(gamma(o, &child(at, 0))?, gamma(e, &child(at, 1))?)),
        _ => Err(CliError::malformed(at, "a segment is [origin, end]")),
    }
}

pub(crate) fn encode_segment(s: &Segment) -> Value {
    json!([encode_gamma(&s.origin), encode_gamma(&s.end)])
}

/// `{"coeff":…,"exp":"num/den"}`.
pub(crate) fn monomial(v: &Value, at: &str) -> Result<MonomialMap, CliError> {
    let coeff = gamma(get(v, "coeff", at)?, &child(at, "coeff"))?;
    let exp = rational(get(v, "exp", at)?, &child(at, "exp"))?;
    MonomialMap::new(coeff, exp).map_err(|e| CliError::from_module(&e, at))
}

pub(crate) fn encode_monomial(m: &MonomialMap) -> Value {
    json!({ "coeff": encode_gamma(m.coeff()), "exp": encode_rational(m.exponent()) })
}

/// `{"mono":{…}}`, `{"max":[…]}` or `{"min":[…]}`.
pub(crate) fn mono_expr(v: &Value, at: &str) -> Result<MonoExpr, CliError> {
    let list = |key: &str, items: &Value| -> Result<Vec<MonoExpr>, CliError> {
        let list_at = child(at, key);
        array(items, &list_at)?
            .iter()
            .enumerate()
            .map(|(i, e)| mono_expr(e, &child(&list_at, i)))
            .collect()
    };
    if let Some(m) = v.get("mono") {
        Ok(MonoExpr::Mono(monomial(m, &child(at, "mono"))?))
    } else if let Some(items) = v.get("max") {
        Ok(MonoExpr::Max(list("max", items)?))
    } else if let Some(items) = v.get("min") {
        Ok(MonoExpr::Min(list("min", items)?))
    } else {
        Err(CliError::malformed(at, "expected one of `mono`, `max`, `min`"))
    }
}

pub(crate) fn encode_pl(pl: &PLFunction1D) -> Value {
    let cells: Vec<Value> = pl
        .cells
        .iter()
        .zip(&pl.pieces)
        .map(|(c, m)| json!({ "interval": encode_interval(c), "monomial": encode_monomial(m) }))
        .collect();
    json!({ "domain": encode_interval(&pl.domain), "cells": cells, "continuous": pl.is_continuous() })
}

fn mono_term(v: &Value, arity: usize, at: &str) -> Result<MonoTerm, CliError> {
    let coeff = gamma(get(v, "coeff", at)?, &child(at, "coeff"))?;
    let exps = match v.get("exps") {
        Some(e) => {
            let exps_at = child(at, "exps");
            array(e, &exps_at)?
                .iter()
                .enumerate()
                .map(|(k, x)| integer(x, &child(&exps_at, k)))
                .collect::<Result<_, _>>()?
        }
        None => vec![0; arity],
    };
    Ok(MonoTerm::new(coeff, exps))
}

fn cmp(v: &Value, at: &str) -> Result<Cmp, CliError> {
    match string(v, at)? {
        "<" => Ok(Cmp::Lt),
        "<=" => Ok(Cmp::Le),
        ">" => Ok(Cmp::Gt),
        ">=" => Ok(Cmp::Ge),
        other => Err(CliError::malformed(at, format!("unknown comparison `{other}`"))),
    }
}

/// `{"and":[…]}`, `{"or":[…]}` or
/// `{"atom":{"lhs":{"coeff","exps"},"cmp":"<=","rhs":{…}}}`.
pub(crate) fn formula(v: &Value, arity: usize, at: &str) -> Result<Formula, CliError> {
    let list = |key: &str, items: &Value| -> Result<Vec<Formula>, CliError> {
        let list_at = child(at, key);
        array(items, &list_at)?
            .iter()
            .enumerate()
            .map(|(i, f)| formula(f, arity, &child(&list_at, i)))
            .collect()
    };
    if let Some(a) = v.get("atom") {
        let a_at = child(at, "atom");
        let lhs = mono_term(get(a, "lhs", &a_at)?, arity, &child(&a_at, "lhs"))?;
        let rhs = mono_term(get(a, "rhs", &a_at)?, arity, &child(&a_at, "rhs"))?;
        let c = cmp(get(a, "cmp", &a_at)?, &child(&a_at, "cmp"))?;
        Atom::new(lhs, c, rhs)
            .map(Formula::Atom)
            .map_err(|e| CliError::from_module(&e, &a_at))
    } else if let Some(items) = v.get("and") {
        Ok(Formula::And(list("and", items)?))
    } else if let Some(items) = v.get("or") {
        Ok(Formula::Or(list("or", items)?))
    } else {
        Err(CliError::malformed(at, "expected one of `atom`, `and`, `or`"))
    }
}

#[cfg(test)]
pub(crate) fn encode_formula(f: &Formula) -> Value {
    let term = |t: &MonoTerm| json!({ "coeff": encode_gamma(&t.coeff), "exps": t.exps });
    match f {
        Formula::Atom(a) => json!({ "atom": { "lhs": term(a.lhs()), "cmp": a.cmp().symbol(), "rhs": term(a.rhs()) } }),
        Formula::And(fs) => json!({ "and": fs.iter().map(encode_formula).collect::<Vec<_>>() }),
        Formula::Or(fs) => json!({ "or": fs.iter().map(encode_formula).collect::<Vec<_>>() }),
    }
}

/// `{"arity":n,"formula":…}`.
pub(crate) fn polyhedron(v: &Value, at: &str) -> Result<TropicalPolyhedron, CliError> {
    let arity = unsigned(get(v, "arity", at)?, &child(at, "arity"))? as usize;
    let f = formula(get(v, "formula", at)?, arity, &child(at, "formula"))?;
    TropicalPolyhedron::new(arity, f).map_err(|e| CliError::from_module(&e, at))
}

/// `{"zeros":[{"point":…,"mult":k}],"poles":[…]}`.
pub(crate) fn divisor<S: ElemCodec>(s: &S, v: &Value, at: &str) -> Result<Divisor<S::Elem>, CliError> {
    type Side<E> = Vec<(BerkPoint<E>, u32)>;
    let side = |key: &str| -> Result<Side<S::Elem>, CliError> {
        let side_at = child(at, key);
        let Some(items) = v.get(key) else { return Ok(Vec::new()) };
        array(items, &side_at)?
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let item_at = child(&side_at, i);
                let p = point(s, get(item, "point", &item_at)?, &child(&item_at, "point"))?;
                let m = match item.get("mult") {
                    Some(m) => unsigned(m, &child(&item_at, "mult"))? as u32,
                    None => 1,
                };
                Ok((p, m))
            })
            .collect()
    };
    Divisor::new(side("zeros")?, side("poles")?).map_err(|e| CliError::from_module(&e, at))
}
