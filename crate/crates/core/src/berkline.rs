//! Points of the Berkovich projective line as closed discs.
//!
//! A disc point `η_{a,r}` is the Gauss valuation `Σ b_i (T − a)^i ↦ max |b_i| r^i`;
//! it only depends on the ball `B(a, r)`, so two discs are equal exactly
//! when they describe the same ball. Radius `Zero` gives the simple point
//! `a`; [`BerkPoint::Infinity`] is the simple point at infinity.

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::fields::{taylor_shift, FieldError, Polynomial, Ultrametric, ValuedField};
use crate::valgrp::{concat_segments, Gamma0Value, GeneralizedSegment, Segment, SegmentPoint, ValueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BerkError {
    #[error("rational function has a pole at this point")]
    Pole,
    #[error("numerator and denominator both vanish at this simple point")]
    Indeterminate,
    #[error("gauss evaluation is undefined at infinity; use rational evaluation")]
    AtInfinity,
    #[error("radius must be nonzero")]
    ZeroRadius,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("the carrier has no origin element")]
    NoOrigin,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// A point of the Berkovich projective line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BerkPoint<E> {
    Disc { center: E, radius: Gamma0Value },
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointType {
    Type1,
    Type2,
}

impl<E: Clone> BerkPoint<E> {
    pub fn disc(center: E, radius: Gamma0Value) -> Self {
        BerkPoint::Disc { center, radius }
    }

    /// The simple point at `center`.
    pub fn simple(center: E) -> Self {
        BerkPoint::Disc {
            center,
            radius: Gamma0Value::Zero,
        }
    }

    pub fn center(&self) -> Option<&E> {
        match self {
            BerkPoint::Disc { center, .. } => Some(center),
            BerkPoint::Infinity => None,
        }
    }

    pub fn radius(&self) -> Option<&Gamma0Value> {
        match self {
            BerkPoint::Disc { radius, .. } => Some(radius),
            BerkPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BerkPoint::Infinity)
    }

    pub fn classify_type(&self) -> PointType {
        match self {
            BerkPoint::Disc {
                radius: Gamma0Value::Fin(_),
                ..
            } => PointType::Type2,
            _ => PointType::Type1,
        }
    }
}

/// The Gauss point `η_{0,1}`.
pub fn gauss_point<S: Ultrametric>(space: &S) -> Result<BerkPoint<S::Elem>, BerkError> {
    let o = space.origin().ok_or(BerkError::NoOrigin)?;
    Ok(BerkPoint::disc(o, Gamma0Value::one()))
}

/// Ball equality: `η_{a,r} = η_{b,s}` iff `r = s` and `|a − b| ≤ r`.
pub fn point_eq<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>, y: &BerkPoint<S::Elem>) -> bool {
    match (x, y) {
        (BerkPoint::Infinity, BerkPoint::Infinity) => true,
        (BerkPoint::Disc { center: a, radius: r }, BerkPoint::Disc { center: b, radius: s }) => {
            r == s && space.distance(a, b) <= *r
        }
        _ => false,
    }
}

/// Ball containment `B(a,r) ⊆ B(b,s)`. Infinity is above every point.
pub fn point_leq<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>, y: &BerkPoint<S::Elem>) -> bool {
    match (x, y) {
        (_, BerkPoint::Infinity) => true,
        (BerkPoint::Infinity, _) => false,
        (BerkPoint::Disc { center: a, radius: r }, BerkPoint::Disc { center: b, radius: s }) => {
            r <= s && space.distance(a, b) <= *s
        }
    }
}

/// Least upper bound for [`point_leq`]: the smallest ball containing both.
pub fn join<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>, y: &BerkPoint<S::Elem>) -> BerkPoint<S::Elem> {
    match (x, y) {
        (BerkPoint::Disc { center: a, radius: r }, BerkPoint::Disc { center: b, radius: s }) => {
            let radius = r.clone().max(s.clone()).max(space.distance(a, b));
            BerkPoint::disc(a.clone(), radius)
        }
        _ => BerkPoint::Infinity,
    }
}

/// Path length in the log-radius tree metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDistance {
    Finite(BigRational),
    /// At least one endpoint is a distinct simple point.
    Infinite,
}

/// `(e_x − j) + (e_y − j)`, where `e_x, e_y` are the radius exponents and `j`
/// the exponent of the join radius.
pub fn dist<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>, y: &BerkPoint<S::Elem>) -> TreeDistance {
    if point_eq(space, x, y) {
        return TreeDistance::Finite(BigRational::zero());
    }
    let (Some(Gamma0Value::Fin(ex)), Some(Gamma0Value::Fin(ey))) = (x.radius(), y.radius()) else {
        return TreeDistance::Infinite;
    };
    let j = join(space, x, y);
    let ej = j
        .radius()
        .and_then(Gamma0Value::exponent)
        .expect("join of type 2 discs");
    TreeDistance::Finite((ex - ej) + (ey - ej))
}

/// `max_i |b_i| r^i` for the Taylor coefficients of `p` at the disc center.
pub fn gauss_eval<F: ValuedField>(
    field: &F,
    x: &BerkPoint<F::Elem>,
    p: &Polynomial<F::Elem>,
) -> Result<Gamma0Value, BerkError> {
    let BerkPoint::Disc { center, radius } = x else {
        return Err(BerkError::AtInfinity);
    };
    let shifted = taylor_shift(field, p, center)?;
    let mut best = Gamma0Value::Zero;
    for (i, b) in shifted.iter().enumerate() {
        let term = &field.valuation(b) * &radius.powi(i as i64)?;
        best = best.max(term);
    }
    Ok(best)
}

/// The multivariate Gauss norm `max_I |a_I| r^I` for nonzero radii.
pub fn gauss_eval_nd<F: ValuedField>(
    field: &F,
    radii: &[Gamma0Value],
    p: &Polynomial<F::Elem>,
) -> Result<Gamma0Value, BerkError> {
    if radii.len() != p.arity() {
        return Err(FieldError::ArityMismatch {
            expected: p.arity(),
            found: radii.len(),
        }
        .into());
    }
    if radii.iter().any(Gamma0Value::is_zero) {
        return Err(BerkError::ZeroRadius);
    }
    let mut best = Gamma0Value::Zero;
    for (exps, c) in p.terms() {
        let mut term = field.valuation(c);
        for (r, &e) in radii.iter().zip(exps) {
            term = &term * &r.powi(e as i64)?;
        }
        best = best.max(term);
    }
    Ok(best)
}

/// `|P/Q|` at a point. At infinity the substitution `T ↦ 1/T` is applied and
/// the quotient is evaluated at the simple point 0.
pub fn rational_eval<F: ValuedField>(
    field: &F,
    x: &BerkPoint<F::Elem>,
    p: &Polynomial<F::Elem>,
    q: &Polynomial<F::Elem>,
) -> Result<Gamma0Value, BerkError> {
    if q.is_zero() {
        return Err(BerkError::ZeroDenominator);
    }
    match x {
        BerkPoint::Disc { .. } => {
            let den = gauss_eval(field, x, q)?;
            let num = gauss_eval(field, x, p)?;
            match (num.is_zero(), den.is_zero()) {
                (true, true) => Err(BerkError::Indeterminate),
                (false, true) => Err(BerkError::Pole),
                _ => Ok(num.div(&den)?),
            }
        }
        BerkPoint::Infinity => {
            if p.is_zero() {
                return Ok(Gamma0Value::Zero);
            }
            let dp = p.degree().unwrap_or(0) as usize;
            let dq = q.degree().unwrap_or(0) as usize;
            let shift = |poly: &Polynomial<F::Elem>, k: usize| -> Result<Polynomial<F::Elem>, BerkError> {
                let mut dense = vec![field.zero(); k];
                dense.extend(poly.reverse(field)?.dense(field)?);
                Ok(Polynomial::from_coeffs(field, dense))
            };
            let num = shift(p, dq.saturating_sub(dp))?;
            let den = shift(q, dp.saturating_sub(dq))?;
            let origin = BerkPoint::simple(field.zero());
            rational_eval(field, &origin, &num, &den)
        }
    }
}

/// Image under `ψ : T ↦ 1/T`.
pub fn invert<F: ValuedField>(field: &F, x: &BerkPoint<F::Elem>) -> BerkPoint<F::Elem> {
    let BerkPoint::Disc { center, radius } = x else {
        return BerkPoint::simple(field.zero());
    };
    let abs = field.valuation(center);
    if radius.is_zero() {
        return match field.inv(center) {
            Some(inv) => BerkPoint::simple(inv),
            None => BerkPoint::Infinity,
        };
    }
    if abs <= *radius {
        // 0 ∈ B(a, r)
        return BerkPoint::disc(field.zero(), radius.inv().expect("nonzero radius"));
    }
    let inv = field.inv(center).expect("|a| > r ≥ 0");
    let scaled = radius * &abs.powi(-2).expect("nonzero absolute value");
    BerkPoint::disc(inv, scaled)
}

/// How a piece of a geodesic parametrizes points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Chart<E> {
    /// `s ↦ η_{center,s}`.
    Radius(E),
    /// `u ↦ η_{center,1/u}`, with `u = 0` sent to infinity.
    InverseRadius(E),
    /// The constant path at infinity.
    Infinity,
}

/// The geodesic between two points: a generalized segment and a chart for
/// each of its pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathParam<E> {
    pub segment: GeneralizedSegment,
    pub charts: Vec<Chart<E>>,
}

impl<E: Clone> PathParam<E> {
    pub fn point_at(&self, p: &SegmentPoint) -> BerkPoint<E> {
        match &self.charts[p.piece] {
            Chart::Radius(c) => BerkPoint::disc(c.clone(), p.value.clone()),
            Chart::InverseRadius(c) => match p.value.inv() {
                Ok(r) => BerkPoint::disc(c.clone(), r),
                Err(_) => BerkPoint::Infinity,
            },
            Chart::Infinity => BerkPoint::Infinity,
        }
    }

    pub fn start(&self) -> BerkPoint<E> {
        self.point_at(&self.segment.origin())
    }

    pub fn finish(&self) -> BerkPoint<E> {
        self.point_at(&self.segment.end())
    }

    pub fn is_degenerate(&self) -> bool {
        self.segment.pieces().iter().all(Segment::is_degenerate)
    }

    fn reversed(&self) -> Self {
        PathParam {
            segment: self.segment.reversed(),
            charts: self.charts.iter().rev().cloned().collect(),
        }
    }
}

/// The unique geodesic `[x;y]`.
pub fn path<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>, y: &BerkPoint<S::Elem>) -> PathParam<S::Elem> {
    let build = |pieces: Vec<(Segment, Chart<S::Elem>)>| {
        let (segs, charts): (Vec<_>, Vec<_>) = pieces.into_iter().unzip();
        PathParam {
            segment: concat_segments(segs).expect("nonempty path"),
            charts,
        }
    };
    match (x, y) {
        (BerkPoint::Infinity, BerkPoint::Infinity) => build(vec![(
            Segment::new(Gamma0Value::Zero, Gamma0Value::Zero),
            Chart::Infinity,
        )]),
        (BerkPoint::Infinity, _) => path(space, y, x).reversed(),
        (BerkPoint::Disc { center: a, radius: r }, BerkPoint::Infinity) => {
            if r.is_zero() {
                build(vec![
                    (
                        Segment::new(Gamma0Value::Zero, Gamma0Value::one()),
                        Chart::Radius(a.clone()),
                    ),
                    (
                        Segment::new(Gamma0Value::one(), Gamma0Value::Zero),
                        Chart::InverseRadius(a.clone()),
                    ),
                ])
            } else {
                let u = r.inv().expect("nonzero radius");
                build(vec![(
                    Segment::new(u, Gamma0Value::Zero),
                    Chart::InverseRadius(a.clone()),
                )])
            }
        }
        (BerkPoint::Disc { center: a, radius: r }, BerkPoint::Disc { center: b, radius: s }) => {
            let top = r.clone().max(s.clone()).max(space.distance(a, b));
            let mut pieces = Vec::with_capacity(2);
            if top != *r {
                pieces.push((Segment::new(r.clone(), top.clone()), Chart::Radius(a.clone())));
            }
            if top != *s {
                pieces.push((Segment::new(top.clone(), s.clone()), Chart::Radius(b.clone())));
            }
            if pieces.is_empty() {
                pieces.push((Segment::new(r.clone(), r.clone()), Chart::Radius(a.clone())));
            }
            build(pieces)
        }
    }
}
