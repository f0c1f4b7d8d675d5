//! The preimage of the skeleton `[0; ∞]` under `|f|` for a rational
//! function `f` on the line, described through its divisor.
//!
//! Along an edge `{η_{c,s}}` of the convex hull of the zeros and poles,
//! `|f|(η_{c,s})` is a monomial in `s` whose exponent is the number of
//! zeros minus poles inside the ball `B(c, s)`. Off the hull, and on edges
//! where that count vanishes, `|f|` is locally constant.

use super::TropicalError;
use crate::berkline::BerkPoint;
use crate::fields::Ultrametric;
use crate::trees::{convex_hull, FiniteSubtree};

/// Zeros and poles with multiplicities. Points are simple points or
/// infinity; finite degree balance is enforced on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor<E> {
    zeros: Vec<(BerkPoint<E>, u32)>,
    poles: Vec<(BerkPoint<E>, u32)>,
}

impl<E: Clone> Divisor<E> {
    pub fn new(zeros: Vec<(BerkPoint<E>, u32)>, poles: Vec<(BerkPoint<E>, u32)>) -> Result<Self, TropicalError> {
        let simple = |p: &BerkPoint<E>| match p {
            BerkPoint::Infinity => true,
            BerkPoint::Disc { radius, .. } => radius.is_zero(),
        };
        if !zeros.iter().chain(&poles).all(|(p, _)| simple(p)) {
            return Err(TropicalError::NotSimple);
        }
        let total = |side: &[(BerkPoint<E>, u32)]| side.iter().map(|(_, m)| u64::from(*m)).sum::<u64>();
        let (z, p) = (total(&zeros), total(&poles));
        if z != p {
            return Err(TropicalError::Unbalanced { zeros: z, poles: p });
        }
        Ok(Divisor { zeros, poles })
    }

    pub fn zeros(&self) -> &[(BerkPoint<E>, u32)] {
        &self.zeros
    }

    pub fn poles(&self) -> &[(BerkPoint<E>, u32)] {
        &self.poles
    }

    fn support(&self) -> Vec<BerkPoint<E>> {
        self.zeros
            .iter()
            .chain(&self.poles)
            .filter(|(_, m)| *m > 0)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Zeros minus poles inside the closed ball `B(center, radius)`.
    fn count_in<S: Ultrametric<Elem = E>>(&self, space: &S, center: &E, radius: &crate::valgrp::Gamma0Value) -> i64 {
        let inside = |side: &[(BerkPoint<E>, u32)]| -> i64 {
            side.iter()
                .filter(|(p, _)| matches!(p, BerkPoint::Disc { center: a, .. } if space.distance(a, center) <= *radius))
                .map(|(_, m)| i64::from(*m))
                .sum()
        };
        inside(&self.zeros) - inside(&self.poles)
    }
}

/// The exponent of `|f|` along the radius direction at a disc point; zero
/// exactly where `|f|` is locally constant.
pub fn local_constancy<S: Ultrametric>(
    space: &S,
    div: &Divisor<S::Elem>,
    x: &BerkPoint<S::Elem>,
) -> Result<i64, TropicalError> {
    match x {
        BerkPoint::Disc { center, radius } if !radius.is_zero() => Ok(div.count_in(space, center, radius)),
        _ => Err(TropicalError::NotTypeTwo),
    }
}

/// A finite subtree with the exponent of `|f|` on each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonPreimage<E> {
    pub tree: FiniteSubtree<E>,
    pub edge_slopes: Vec<i64>,
}

impl<E: Clone + PartialEq> SkeletonPreimage<E> {
    /// Slopes along `tree`'s edges, in order.
    pub fn new(tree: FiniteSubtree<E>, edge_slopes: Vec<i64>) -> Self {
        assert_eq!(tree.edges().len(), edge_slopes.len(), "one slope per edge");
        SkeletonPreimage { tree, edge_slopes }
    }

    pub fn to_dot(&self, label: impl Fn(&E) -> String) -> String {
        self.tree
            .to_dot(label, |i| Some(format!("slope={}", self.edge_slopes[i])))
    }
}

/// The locus where `|f|` is not locally constant, together with the full
/// convex hull of the divisor and the slope on every hull edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonResult<E> {
    pub preimage: SkeletonPreimage<E>,
    pub hull: SkeletonPreimage<E>,
}

/// `f⁻¹([0; ∞])`: the hull edges of nonzero slope. It may be a forest when
/// `|f|` is constant on an inner stretch of the hull.
pub fn skeleton_preimage<S: Ultrametric>(
    space: &S,
    div: &Divisor<S::Elem>,
) -> Result<SkeletonResult<S::Elem>, TropicalError> {
    let support = div.support();
    let hull_tree = if support.is_empty() {
        FiniteSubtree::from_parts(space, Vec::new(), Vec::new())?
    } else {
        convex_hull(space, &support, false)?
    };
    let slopes: Vec<i64> = hull_tree
        .edges()
        .iter()
        .map(|e| div.count_in(space, &e.center, &e.interior_radius()))
        .collect();
    let tree = hull_tree.restrict_edges(|i| slopes[i] != 0);
    let kept = slopes.iter().copied().filter(|&s| s != 0).collect();
    Ok(SkeletonResult {
        preimage: SkeletonPreimage::new(tree, kept),
        hull: SkeletonPreimage::new(hull_tree, slopes),
    })
}

/// Whether `|f|` is injective along every edge, i.e. no slope is zero.
pub fn immersion_check<E>(s: &SkeletonPreimage<E>) -> bool {
    s.edge_slopes.iter().all(|&k| k != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::berkline::point_eq;
    use crate::fields::PAdic;
    use crate::trees::{tree_contains, RadiusBound};
    use crate::valgrp::{rat, Gamma0Value};
    use num_rational::BigRational;

    fn pt(n: i64) -> BerkPoint<BigRational> {
        BerkPoint::simple(rat(n))
    }

    fn f3() -> PAdic {
        PAdic::new(3).unwrap()
    }

    #[test]
    fn identity_is_the_whole_line() {
        let f = f3();
        let div = Divisor::new(vec![(pt(0), 1)], vec![(BerkPoint::Infinity, 1)]).unwrap();
        let s = skeleton_preimage(&f, &div).unwrap().preimage;
        assert_eq!(s.edge_slopes, vec![1]);
        let e = &s.tree.edges()[0];
        assert_eq!(
            (e.lo.clone(), e.hi.clone()),
            (Gamma0Value::Zero, RadiusBound::Unbounded)
        );
        assert!(immersion_check(&s));
        let sq = Divisor::new(vec![(pt(0), 2)], vec![(BerkPoint::Infinity, 2)]).unwrap();
        assert_eq!(skeleton_preimage(&f, &sq).unwrap().preimage.edge_slopes, vec![2]);
    }

    #[test]
    fn one_minus_inverse() {
        // (T − 1)/T: zero at 1, pole at 0
        let f = f3();
        let div = Divisor::new(vec![(pt(1), 1)], vec![(pt(0), 1)]).unwrap();
        let r = skeleton_preimage(&f, &div).unwrap();
        let gauss = BerkPoint::disc(rat(0), Gamma0Value::one());
        assert!(r.preimage.tree.vertices().iter().any(|v| point_eq(&f, v, &gauss)));
        assert!(!tree_contains(&f, &r.preimage.tree, &BerkPoint::Infinity));
        let mut slopes = r.preimage.edge_slopes.clone();
        slopes.sort();
        assert_eq!(slopes, vec![-1, 1]);
        assert!(immersion_check(&r.preimage));
    }

    #[test]
    fn constant_stretch_is_pruned() {
        // T(T − 1)/(T − 3): the ball B(0, 1/3) holds one zero and one pole,
        // so the hull edge from η_{0,1/3} up to the Gauss point is flat
        let f = f3();
        let div = Divisor::new(vec![(pt(0), 1), (pt(1), 1)], vec![(pt(3), 1), (BerkPoint::Infinity, 1)]).unwrap();
        let r = skeleton_preimage(&f, &div).unwrap();
        assert_eq!(r.hull.edge_slopes.iter().filter(|&&k| k == 0).count(), 1);
        assert!(!immersion_check(&r.hull));
        assert!(immersion_check(&r.preimage));
        assert_eq!(r.preimage.tree.edges().len(), r.hull.tree.edges().len() - 1);
        let on_flat_edge = BerkPoint::disc(rat(0), Gamma0Value::ratio(1, 2));
        assert!(!tree_contains(&f, &r.preimage.tree, &on_flat_edge));
        assert_eq!(local_constancy(&f, &div, &on_flat_edge).unwrap(), 0);
    }

    #[test]
    fn constancy_counts() {
        let f = f3();
        let div = Divisor::new(vec![(pt(1), 1)], vec![(BerkPoint::Infinity, 1)]).unwrap();
        assert_eq!(
            local_constancy(&f, &div, &BerkPoint::disc(rat(0), Gamma0Value::exp(2))).unwrap(),
            0
        );
        assert_eq!(
            local_constancy(&f, &div, &BerkPoint::disc(rat(1), Gamma0Value::exp(1))).unwrap(),
            1
        );
        assert_eq!(local_constancy(&f, &div, &pt(1)), Err(TropicalError::NotTypeTwo));
        let empty: Divisor<BigRational> = Divisor::new(vec![], vec![]).unwrap();
        assert_eq!(
            local_constancy(&f, &empty, &BerkPoint::disc(rat(5), Gamma0Value::exp(-1))).unwrap(),
            0
        );
        assert!(skeleton_preimage(&f, &empty).unwrap().preimage.tree.edges().is_empty());
    }

    #[test]
    fn rejects_bad_divisors() {
        assert_eq!(
            Divisor::new(vec![(pt(0), 2)], vec![(pt(1), 1)]),
            Err(TropicalError::Unbalanced { zeros: 2, poles: 1 })
        );
        let disc = BerkPoint::disc(rat(0), Gamma0Value::one());
        assert_eq!(
            Divisor::new(vec![(disc, 1)], vec![(pt(1), 1)]),
            Err(TropicalError::NotSimple)
        );
    }
}
