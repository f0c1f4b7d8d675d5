//! Max-plus evaluation, Newton polygons, piecewise-monomial functions of one
//! variable, tropical polyhedra and skeleta of rational functions.

mod polyhedron;
mod skeleton;

pub use polyhedron::{
    is_def_compact, poly_dimension, poly_member, Atom, Cmp, Dimension, DimensionReport, Formula, MonoTerm,
    TropicalPolyhedron, DNF_ATOM_CAP,
};
pub use skeleton::{immersion_check, local_constancy, skeleton_preimage, Divisor, SkeletonPreimage, SkeletonResult};

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::berkline::BerkError;
use crate::fields::{FieldError, Polynomial, ValuedField};
use crate::linear::LinearError;
use crate::trees::{midpoint, TreeError};
use crate::valgrp::{fmt_rational, Gamma0Value, Interval, MonomialMap, ValueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropicalError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("expected {expected} coordinates, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("disjunctive normal form exceeds {0} atoms")]
    FormulaTooLarge(usize),
    #[error("divisor is unbalanced: {zeros} zeros against {poles} poles")]
    Unbalanced { zeros: u64, poles: u64 },
    #[error("divisor points must be simple points or infinity")]
    NotSimple,
    #[error("slope is only defined at disc points with a nonzero radius")]
    NotTypeTwo,
    #[error("a max/min expression needs at least one monomial")]
    EmptyExpression,
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Berk(#[from] BerkError),
}

/// One term `coeff · r₁^{e₁} ⋯ r_n^{e_n}` of a tropical polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropTerm {
    pub coeff: Gamma0Value,
    pub exps: Vec<i64>,
}

impl TropTerm {
    pub fn new(coeff: Gamma0Value, exps: Vec<i64>) -> Self {
        TropTerm { coeff, exps }
    }
}

/// Max-plus evaluation `max_I coeff_I · r^I`; `Zero` for no terms.
pub fn trop_eval(terms: &[TropTerm], r: &[Gamma0Value]) -> Result<Gamma0Value, TropicalError> {
    let mut best = Gamma0Value::Zero;
    for t in terms {
        if t.exps.len() != r.len() {
            return Err(TropicalError::ArityMismatch {
                expected: t.exps.len(),
                found: r.len(),
            });
        }
        let mut v = t.coeff.clone();
        for (x, &e) in r.iter().zip(&t.exps) {
            v = &v * &x.powi(e)?;
        }
        best = best.max(v);
    }
    Ok(best)
}

/// The terms `|a_I| T^I` of a polynomial.
pub fn valuation_terms<F: ValuedField>(field: &F, p: &Polynomial<F::Elem>) -> Vec<TropTerm> {
    p.terms()
        .map(|(exps, c)| TropTerm::new(field.valuation(c), exps.iter().map(|&e| e as i64).collect()))
        .collect()
}

/// Slopes of the lower convex hull of `{(i, v(a_i))}` with their horizontal
/// lengths, ordered by increasing `i`. A slope `ρ` means `P` has that many
/// roots of absolute value `Fin(ρ)`. Roots at the origin are not reported.
pub fn newton_breakpoints<F: ValuedField>(
    field: &F,
    p: &Polynomial<F::Elem>,
) -> Result<Vec<(BigRational, u32)>, TropicalError> {
    if p.arity() != 1 {
        return Err(FieldError::NotUnivariate.into());
    }
    let mut points: Vec<(i64, BigRational)> = Vec::new();
    for (exps, c) in p.terms() {
        let v = field.valuation(c);
        let e = v.exponent().expect("stored coefficients are nonzero").clone();
        points.push((exps[0] as i64, e));
    }
    if points.is_empty() {
        return Err(TropicalError::ZeroPolynomial);
    }
    points.sort_by_key(|(i, _)| *i);
    Ok(lower_hull_slopes(&points))
}

/// Monotone-chain lower hull of points sorted by abscissa; each hull segment
/// from `(i, u)` to `(j, w)` yields `((u − w)/(j − i), j − i)`.
fn lower_hull_slopes(points: &[(i64, BigRational)]) -> Vec<(BigRational, u32)> {
    let mut hull: Vec<&(i64, BigRational)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // keep `a` only if o → a → p turns strictly counter-clockwise
            let cross = BigRational::from_integer((a.0 - o.0).into()) * (&p.1 - &o.1)
                - (&a.1 - &o.1) * BigRational::from_integer((p.0 - o.0).into());
            if cross > BigRational::zero() {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| {
            let width = w[1].0 - w[0].0;
            (
                (&w[0].1 - &w[1].1) / BigRational::from_integer(width.into()),
                width as u32,
            )
        })
        .collect()
}

/// A max/min combination of monomials in one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoExpr {
    Mono(MonomialMap),
    Max(Vec<MonoExpr>),
    Min(Vec<MonoExpr>),
}

impl MonoExpr {
    pub fn eval(&self, x: &Gamma0Value) -> Result<Gamma0Value, TropicalError> {
        match self {
            MonoExpr::Mono(m) => Ok(m.eval(x)?),
            MonoExpr::Max(items) | MonoExpr::Min(items) => {
                let mut values = items.iter().map(|e| e.eval(x));
                let first = values.next().ok_or(TropicalError::EmptyExpression)??;
                values.try_fold(first, |acc, v| {
                    let v = v?;
                    Ok(if matches!(self, MonoExpr::Max(_)) {
                        acc.max(v)
                    } else {
                        acc.min(v)
                    })
                })
            }
        }
    }

    pub fn leaves(&self) -> Vec<&MonomialMap> {
        match self {
            MonoExpr::Mono(m) => vec![m],
            MonoExpr::Max(items) | MonoExpr::Min(items) => items.iter().flat_map(MonoExpr::leaves).collect(),
        }
    }
}

/// A function on an interval that is a single monomial on each cell of a
/// finite partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction1D {
    pub domain: Interval,
    pub cells: Vec<Interval>,
    pub pieces: Vec<MonomialMap>,
}

impl PLFunction1D {
    pub fn eval(&self, x: &Gamma0Value) -> Result<Gamma0Value, TropicalError> {
        let i = self
            .cells
            .iter()
            .position(|c| c.contains(x))
            .ok_or(ValueError::NotOnPiece(0))?;
        Ok(self.pieces[i].eval(x)?)
    }

    /// Whether neighbouring pieces agree at every shared endpoint.
    pub fn is_continuous(&self) -> bool {
        self.cells.windows(2).zip(self.pieces.windows(2)).all(|(c, p)| {
            let at = &c[0].hi;
            debug_assert_eq!(at, &c[1].lo);
            matches!((p[0].eval(at), p[1].eval(at)), (Ok(a), Ok(b)) if a == b)
        })
    }

    /// Cell endpoints with the function value there. Columns are exponents;
    /// `inf` stands for the zero value.
    pub fn to_tsv(&self) -> Result<String, TropicalError> {
        let mut out = String::from("x_exponent\tvalue_exponent\tvalue_exponent_decimal_derived\n");
        let mut points: Vec<&Gamma0Value> = self.cells.iter().map(|c| &c.lo).collect();
        points.extend(self.cells.last().map(|c| &c.hi));
        for (k, x) in points.into_iter().enumerate() {
            let piece = &self.pieces[k.min(self.pieces.len() - 1)];
            let y = piece.eval(x)?;
            let decimal = match y.exponent() {
                Some(e) => format!("{:.6}", e.to_f64().unwrap_or(f64::NAN)),
                None => "inf".to_string(),
            };
            let _ = writeln!(out, "{}\t{}\t{}", exponent_text(x), exponent_text(&y), decimal);
        }
        Ok(out)
    }
}

fn exponent_text(v: &Gamma0Value) -> String {
    v.exponent().map_or_else(|| "inf".to_string(), fmt_rational)
}

/// Splits `domain` at the crossings of every pair of monomials occurring in
/// `expr`, so that `expr` is a single monomial on each cell. Neighbouring
/// cells carrying the same monomial are merged.
pub fn decompose_monomial(expr: &MonoExpr, domain: &Interval) -> Result<PLFunction1D, TropicalError> {
    let leaves = expr.leaves();
    if leaves.is_empty() {
        return Err(TropicalError::EmptyExpression);
    }
    if domain.lo.is_zero() && leaves.iter().any(|m| m.exponent() < &BigRational::zero()) {
        return Err(ValueError::NegativePowerOfZero.into());
    }
    let inside = |v: &Gamma0Value| *v > domain.lo && *v < domain.hi;
    let mut cuts: Vec<Gamma0Value> = Vec::new();
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            if a.exponent() == b.exponent() {
                continue;
            }
            let (Some(ea), Some(eb)) = (a.coeff().exponent(), b.coeff().exponent()) else {
                continue;
            };
            let crossing = Gamma0Value::Fin((eb - ea) / (a.exponent() - b.exponent()));
            if inside(&crossing) {
                cuts.push(crossing);
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut bounds = vec![domain.lo.clone()];
    bounds.extend(cuts);
    bounds.push(domain.hi.clone());
    let last = bounds.len() - 2;
    let mut cells: Vec<Interval> = Vec::new();
    let mut pieces: Vec<MonomialMap> = Vec::new();
    for (k, w) in bounds.windows(2).enumerate() {
        let cell = Interval::new(
            w[0].clone(),
            w[1].clone(),
            if k == 0 { domain.lo_closed } else { false },
            if k == last { domain.hi_closed } else { true },
        )?;
        let sample = interior_sample(&w[0], &w[1]);
        let target = expr.eval(&sample)?;
        let mut chosen = None;
        for m in &leaves {
            if m.eval(&sample)? == target {
                chosen = Some((*m).clone());
                break;
            }
        }
        let piece = chosen.expect("the expression takes the value of one of its monomials");
        match (cells.last_mut(), pieces.last()) {
            (Some(prev), Some(p)) if *p == piece => {
                prev.hi = cell.hi;
                prev.hi_closed = cell.hi_closed;
            }
            _ => {
                cells.push(cell);
                pieces.push(piece);
            }
        }
    }
    Ok(PLFunction1D {
        domain: domain.clone(),
        cells,
        pieces,
    })
}

fn interior_sample(lo: &Gamma0Value, hi: &Gamma0Value) -> Gamma0Value {
    match (lo, hi) {
        (Gamma0Value::Zero, Gamma0Value::Fin(h)) => Gamma0Value::Fin(h + BigRational::from_integer(1.into())),
        (Gamma0Value::Fin(_), Gamma0Value::Fin(_)) => midpoint(lo, hi),
        _ => lo.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::PAdic;
    use crate::valgrp::rat;
    use proptest::prelude::*;

    fn g(n: i64) -> Gamma0Value {
        Gamma0Value::exp(n)
    }

    fn mono(coeff: i64, exp: i64) -> MonoExpr {
        MonoExpr::Mono(MonomialMap::new(g(coeff), rat(exp)).unwrap())
    }

    fn poly3(coeffs: &[i64]) -> (PAdic, Polynomial<BigRational>) {
        let f = PAdic::new(3).unwrap();
        let p = Polynomial::from_coeffs(&f, coeffs.iter().map(|&c| rat(c)).collect());
        (f, p)
    }

    #[test]
    fn evaluation() {
        let terms = vec![
            TropTerm::new(g(2), vec![0]),
            TropTerm::new(g(1), vec![1]),
            TropTerm::new(g(0), vec![2]),
        ];
        assert_eq!(trop_eval(&terms, &[Gamma0Value::ratio(1, 2)]).unwrap(), g(1));
        assert_eq!(trop_eval(&terms[..1], &[Gamma0Value::Zero]).unwrap(), g(2));
        let inverse = [TropTerm::new(g(0), vec![-1])];
        assert_eq!(
            trop_eval(&inverse, &[Gamma0Value::Zero]),
            Err(ValueError::NegativePowerOfZero.into())
        );
    }

    #[test]
    fn newton_polygons() {
        let (f, p) = poly3(&[9, 3, 1]);
        assert_eq!(newton_breakpoints(&f, &p).unwrap(), vec![(rat(1), 2)]);
        let (f, p) = poly3(&[3, -4, 1]);
        assert_eq!(newton_breakpoints(&f, &p).unwrap(), vec![(rat(1), 1), (rat(0), 1)]);
        let (f, p) = poly3(&[7]);
        assert!(newton_breakpoints(&f, &p).unwrap().is_empty());
        let (f, p) = poly3(&[]);
        assert_eq!(newton_breakpoints(&f, &p), Err(TropicalError::ZeroPolynomial));
        // T³: all roots at the origin
        let (f, p) = poly3(&[0, 0, 0, 1]);
        assert!(newton_breakpoints(&f, &p).unwrap().is_empty());
    }

    /// Independent oracle: every candidate tie radius between two terms,
    /// with the multiplicity read off as the change of the winning degree.
    fn breakpoints_by_ties(points: &[(i64, BigRational)]) -> Vec<(BigRational, u32)> {
        let winner = |s: &BigRational| -> i64 {
            let exps = points
                .iter()
                .map(|(i, v)| (v + BigRational::from_integer((*i).into()) * s, *i));
            // smallest exponent wins; ties go to the lowest degree
            exps.min().unwrap().1
        };
        let mut ties: Vec<BigRational> = Vec::new();
        for (a, (i, u)) in points.iter().enumerate() {
            for (j, w) in &points[a + 1..] {
                ties.push((u - w) / BigRational::from_integer((j - i).into()));
            }
        }
        ties.sort();
        ties.dedup();
        let one = BigRational::from_integer(1.into());
        let mut out = Vec::new();
        for t in ties.iter().rev() {
            let below = winner(&(t - &one / BigRational::from_integer(1_000_000.into())));
            let above = winner(&(t + &one / BigRational::from_integer(1_000_000.into())));
            if below != above {
                out.push((t.clone(), (below - above) as u32));
            }
        }
        out
    }

    proptest! {
        #[test]
        fn newton_matches_tie_oracle(coeffs in proptest::collection::vec(-500i64..500, 1..7)) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let (f, p) = poly3(&coeffs);
            let points: Vec<(i64, BigRational)> = p.terms()
                .map(|(e, c)| (e[0] as i64, f.valuation(c).exponent().unwrap().clone()))
                .collect();
            prop_assert_eq!(newton_breakpoints(&f, &p).unwrap(), breakpoints_by_ties(&points));
        }

        #[test]
        fn decomposition_matches_direct_evaluation(
            leaves in proptest::collection::vec((-6i64..6, -3i64..4), 1..5),
            use_max in any::<bool>(),
            samples in proptest::collection::vec(-40i64..40, 20),
        ) {
            let ms: Vec<MonoExpr> = leaves.iter().map(|&(c, e)| mono(c, e)).collect();
            let expr = if use_max { MonoExpr::Max(ms) } else { MonoExpr::Min(ms) };
            let domain = Interval::closed(g(10), g(-10)).unwrap();
            let pl = decompose_monomial(&expr, &domain).unwrap();
            prop_assert!(pl.is_continuous());
            for s in samples {
                let x = Gamma0Value::ratio(s, 4);
                prop_assert_eq!(pl.eval(&x).unwrap(), expr.eval(&x).unwrap());
            }
        }
    }

    #[test]
    fn single_monomial_is_one_cell() {
        let domain = Interval::closed(g(3), g(-3)).unwrap();
        let pl = decompose_monomial(&mono(0, 1), &domain).unwrap();
        assert_eq!(pl.cells, vec![domain]);
        assert_eq!(pl.pieces, vec![MonomialMap::identity()]);
    }

    #[test]
    fn max_with_a_constant() {
        let domain = Interval::closed(Gamma0Value::Zero, g(0)).unwrap();
        let pl = decompose_monomial(&MonoExpr::Max(vec![mono(0, 1), mono(1, 0)]), &domain).unwrap();
        assert_eq!(
            pl.cells,
            vec![
                Interval::new(Gamma0Value::Zero, g(1), true, true).unwrap(),
                Interval::new(g(1), g(0), false, true).unwrap()
            ]
        );
        assert_eq!(
            pl.pieces,
            vec![MonomialMap::new(g(1), rat(0)).unwrap(), MonomialMap::identity()]
        );
        assert!(pl.is_continuous());
        let tsv = pl.to_tsv().unwrap();
        assert_eq!(
            tsv,
            "x_exponent\tvalue_exponent\tvalue_exponent_decimal_derived\n\
             inf\t1/1\t1.000000\n1/1\t1/1\t1.000000\n0/1\t0/1\t0.000000\n"
        );
    }

    #[test]
    fn square_against_shifted_identity() {
        // x² and Fin(1)·x cross where 2s = 1 + s
        let domain = Interval::closed(g(5), g(-5)).unwrap();
        let pl = decompose_monomial(&MonoExpr::Max(vec![mono(0, 2), mono(1, 1)]), &domain).unwrap();
        assert_eq!(pl.cells.len(), 2);
        assert_eq!(pl.cells[0].hi, g(1));
    }
}
