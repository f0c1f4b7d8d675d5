//! Finite subtrees of the Berkovich line, convex hulls, and the
//! deformation retraction onto a subtree containing the Gauss point.
//!
//! Times are values in `[Zero; Fin(0)]`: `Zero` is the start (identity) and
//! `Fin(0)` the end, where the basic contraction has collapsed everything
//! to the Gauss point `η_{0,1}`. On the closed unit disc the contraction is
//! `h(t, η_{a,r}) = η_{a,max(t,r)}`; outside it the same formula is
//! conjugated by `T ↦ 1/T`. Either way the trajectory of a point runs along
//! its geodesic to the Gauss point, and the stopped retraction freezes it at
//! the first point of the subtree it meets.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::berkline::{gauss_point, join, path, point_eq, point_leq, BerkError, BerkPoint};
use crate::fields::Ultrametric;
use crate::valgrp::{Gamma0Value, SegmentPoint, ValueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("convex hull of an empty point set")]
    EmptyInput,
    #[error("the carrier has no origin, so the Gauss point is undefined")]
    NoOrigin,
    #[error("the tree does not contain the Gauss point")]
    MissingGaussPoint,
    #[error("time must lie in [zero; e=0/1]")]
    TimeOutOfRange,
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error(transparent)]
    Value(#[from] ValueError),
}

impl From<BerkError> for TreeError {
    fn from(e: BerkError) -> Self {
        match e {
            BerkError::NoOrigin => TreeError::NoOrigin,
            other => TreeError::Malformed(other.to_string()),
        }
    }
}

/// Upper radius of an edge; `Unbounded` edges run out to infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RadiusBound {
    Finite(Gamma0Value),
    Unbounded,
}

impl RadiusBound {
    fn admits(&self, r: &Gamma0Value) -> bool {
        match self {
            RadiusBound::Finite(hi) => r <= hi,
            RadiusBound::Unbounded => true,
        }
    }
}

/// The set `{η_{center,s} : lo ≤ s ≤ hi}`, joining vertex `lower` to
/// vertex `upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<E> {
    pub center: E,
    pub lo: Gamma0Value,
    pub hi: RadiusBound,
    pub lower: usize,
    pub upper: usize,
}

impl<E: Clone> Edge<E> {
    pub fn contains<S: Ultrametric<Elem = E>>(&self, space: &S, x: &BerkPoint<E>) -> bool {
        match x {
            BerkPoint::Infinity => self.hi == RadiusBound::Unbounded,
            BerkPoint::Disc { center, radius } => {
                *radius >= self.lo && self.hi.admits(radius) && space.distance(center, &self.center) <= *radius
            }
        }
    }

    /// A radius strictly inside the edge.
    pub fn interior_radius(&self) -> Gamma0Value {
        use num_rational::BigRational;
        let half = BigRational::new(1.into(), 2.into());
        match (&self.lo, &self.hi) {
            (Gamma0Value::Fin(a), RadiusBound::Finite(Gamma0Value::Fin(b))) => Gamma0Value::Fin((a + b) * half),
            (Gamma0Value::Zero, RadiusBound::Finite(Gamma0Value::Fin(b))) => {
                Gamma0Value::Fin(b + BigRational::from_integer(1.into()))
            }
            (Gamma0Value::Fin(a), RadiusBound::Unbounded) => Gamma0Value::Fin(a - BigRational::from_integer(1.into())),
            _ => Gamma0Value::one(),
        }
    }
}

/// A finite subtree: vertices (generators and branch points) and the edges
/// between consecutive vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubtree<E> {
    vertices: Vec<BerkPoint<E>>,
    edges: Vec<Edge<E>>,
}

impl<E: Clone + PartialEq> FiniteSubtree<E> {
    /// Assembles a tree from vertices and `(center, lo, hi)` edges, locating
    /// the endpoint vertices of every edge.
    pub fn from_parts<S: Ultrametric<Elem = E>>(
        space: &S,
        vertices: Vec<BerkPoint<E>>,
        edges: Vec<(E, Gamma0Value, RadiusBound)>,
    ) -> Result<Self, TreeError> {
        let find = |p: &BerkPoint<E>| vertices.iter().position(|v| point_eq(space, v, p));
        let mut out = Vec::with_capacity(edges.len());
        for (center, lo, hi) in edges {
            if let RadiusBound::Finite(h) = &hi {
                if *h < lo {
                    return Err(TreeError::Malformed("edge radii out of order".into()));
                }
            }
            let bottom = BerkPoint::disc(center.clone(), lo.clone());
            let top = match &hi {
                RadiusBound::Finite(h) => BerkPoint::disc(center.clone(), h.clone()),
                RadiusBound::Unbounded => BerkPoint::Infinity,
            };
            let lower = find(&bottom).ok_or_else(|| TreeError::Malformed("edge bottom is not a vertex".into()))?;
            let upper = find(&top).ok_or_else(|| TreeError::Malformed("edge top is not a vertex".into()))?;
            out.push(Edge {
                center,
                lo,
                hi,
                lower,
                upper,
            });
        }
        Ok(FiniteSubtree { vertices, edges: out })
    }

    pub fn vertices(&self) -> &[BerkPoint<E>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge<E>] {
        &self.edges
    }

    /// Keeps only the edges selected by `keep`, along with their endpoints.
    pub fn restrict_edges(&self, keep: impl Fn(usize) -> bool) -> FiniteSubtree<E> {
        let kept: Vec<&Edge<E>> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, e)| e)
            .collect();
        let mut used: Vec<usize> = kept.iter().flat_map(|e| [e.lower, e.upper]).collect();
        used.sort_unstable();
        used.dedup();
        let remap = |old: usize| used.binary_search(&old).expect("endpoint kept");
        FiniteSubtree {
            vertices: used.iter().map(|&i| self.vertices[i].clone()).collect(),
            edges: kept
                .into_iter()
                .map(|e| Edge {
                    lower: remap(e.lower),
                    upper: remap(e.upper),
                    ..e.clone()
                })
                .collect(),
        }
    }

    /// Number of edges at each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.lower] += 1;
            deg[e.upper] += 1;
        }
        deg
    }

    /// Graphviz rendering with exponent labels.
    pub fn to_dot(&self, label: impl Fn(&E) -> String, edge_note: impl Fn(usize) -> Option<String>) -> String {
        let mut out = String::from("graph tree {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let text = match v {
                BerkPoint::Infinity => "inf".to_string(),
                BerkPoint::Disc { center, radius } => format!("c={} r={}", label(center), radius),
            };
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", escape(&text));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let hi = match &e.hi {
                RadiusBound::Finite(h) => h.to_string(),
                RadiusBound::Unbounded => "unbounded".to_string(),
            };
            let mut text = format!("c={} [{};{}]", label(&e.center), e.lo, hi);
            if let Some(note) = edge_note(i) {
                text.push(' ');
                text.push_str(&note);
            }
            let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.lower, e.upper, escape(&text));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Membership in the union of the tree's edges and vertices.
pub fn tree_contains<S: Ultrametric>(space: &S, tree: &FiniteSubtree<S::Elem>, x: &BerkPoint<S::Elem>) -> bool {
    tree.edges.iter().any(|e| e.contains(space, x)) || tree.vertices.iter().any(|v| point_eq(space, v, x))
}

/// The union of all geodesics between the given points (and the Gauss
/// point, if requested). Every pairwise join becomes a vertex.
pub fn convex_hull<S: Ultrametric>(
    space: &S,
    points: &[BerkPoint<S::Elem>],
    include_gauss: bool,
) -> Result<FiniteSubtree<S::Elem>, TreeError> {
    if points.is_empty() {
        return Err(TreeError::EmptyInput);
    }
    let mut generators = points.to_vec();
    if include_gauss {
        generators.push(gauss_point(space)?);
    }
    let has_infinity = generators.iter().any(BerkPoint::is_infinity);
    let finite: Vec<&BerkPoint<S::Elem>> = generators.iter().filter(|p| !p.is_infinity()).collect();

    let mut vertices: Vec<BerkPoint<S::Elem>> = Vec::new();
    let push = |p: BerkPoint<S::Elem>, vs: &mut Vec<BerkPoint<S::Elem>>| {
        if !vs.iter().any(|v| point_eq(space, v, &p)) {
            vs.push(p);
        }
    };
    for (i, x) in finite.iter().enumerate() {
        push((*x).clone(), &mut vertices);
        for y in &finite[i + 1..] {
            push(join(space, x, y), &mut vertices);
        }
    }
    let n_finite = vertices.len();
    if has_infinity {
        vertices.push(BerkPoint::Infinity);
    }

    let mut edges = Vec::new();
    for i in 0..n_finite {
        let BerkPoint::Disc { center, radius } = &vertices[i] else {
            unreachable!()
        };
        // parent: the smallest vertex strictly containing this one
        let parent = (0..n_finite)
            .filter(|&j| j != i && point_leq(space, &vertices[i], &vertices[j]))
            .min_by(|&a, &b| vertices[a].radius().cmp(&vertices[b].radius()));
        match parent {
            Some(j) => edges.push(Edge {
                center: center.clone(),
                lo: radius.clone(),
                hi: RadiusBound::Finite(vertices[j].radius().expect("finite vertex").clone()),
                lower: i,
                upper: j,
            }),
            None if has_infinity => edges.push(Edge {
                center: center.clone(),
                lo: radius.clone(),
                hi: RadiusBound::Unbounded,
                lower: i,
                upper: n_finite,
            }),
            None => {}
        }
    }
    Ok(FiniteSubtree { vertices, edges })
}

/// A time in `[Zero; Fin(0)]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Time(Gamma0Value);

impl Time {
    pub fn new(v: Gamma0Value) -> Result<Self, TreeError> {
        if v > Gamma0Value::one() {
            return Err(TreeError::TimeOutOfRange);
        }
        Ok(Time(v))
    }

    pub fn start() -> Self {
        Time(Gamma0Value::Zero)
    }

    pub fn end() -> Self {
        Time(Gamma0Value::one())
    }

    pub fn value(&self) -> &Gamma0Value {
        &self.0
    }
}

fn in_unit_disc<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>) -> Result<bool, TreeError> {
    let one = Gamma0Value::one();
    Ok(match x {
        BerkPoint::Infinity => false,
        BerkPoint::Disc { center, radius } => *radius <= one && space.norm(center).ok_or(TreeError::NoOrigin)? <= one,
    })
}

/// The basic contraction onto the Gauss point, glued from the two charts
/// `|T| ≤ 1` and `|T| ≥ 1`.
pub fn contract<S: Ultrametric>(space: &S, t: &Time, x: &BerkPoint<S::Elem>) -> Result<BerkPoint<S::Elem>, TreeError> {
    let t = t.value();
    let origin = space.origin().ok_or(TreeError::NoOrigin)?;
    if in_unit_disc(space, x)? {
        let BerkPoint::Disc { center, radius } = x else {
            unreachable!()
        };
        return Ok(BerkPoint::disc(center.clone(), radius.clone().max(t.clone())));
    }
    // Outside the unit disc, ψ(x) = η_{1/a, r/|a|²} or η_{0, 1/r}; contract
    // there and map back.
    let out = match x {
        BerkPoint::Infinity => match t.inv() {
            Ok(s) => BerkPoint::disc(origin, s),
            Err(_) => BerkPoint::Infinity,
        },
        BerkPoint::Disc { center, radius } => {
            let abs = space.norm(center).expect("origin exists");
            if *radius < abs {
                let abs2 = &abs * &abs;
                let s = radius.div(&abs2)?.max(t.clone());
                if s < abs.inv()? {
                    BerkPoint::disc(center.clone(), &s * &abs2)
                } else {
                    BerkPoint::disc(origin, s.inv()?)
                }
            } else {
                let s = radius.inv()?.max(t.clone());
                BerkPoint::disc(origin, s.inv()?)
            }
        }
    };
    Ok(out)
}

/// The time at which the contraction trajectory of `x` reaches `p`, for `p`
/// on that trajectory.
fn trajectory_time<S: Ultrametric>(
    space: &S,
    x: &BerkPoint<S::Elem>,
    p: &BerkPoint<S::Elem>,
) -> Result<Time, TreeError> {
    if in_unit_disc(space, x)? {
        return Time::new(p.radius().expect("trajectory stays in the disc").clone());
    }
    let t = match p {
        BerkPoint::Infinity => Gamma0Value::Zero,
        BerkPoint::Disc { center, radius } => {
            let abs = space.norm(center).expect("origin exists");
            if *radius < abs {
                radius.div(&(&abs * &abs))?
            } else {
                radius.inv()?
            }
        }
    };
    Time::new(t)
}

/// One monotone stretch of a trajectory: center fixed, radius moving from
/// `from` to `to`. `from = Unbounded` starts at infinity.
struct Stretch<E> {
    center: E,
    from: RadiusBound,
    to: Gamma0Value,
}

/// The geodesic from `x` to the Gauss point, as at most two stretches.
fn trajectory<S: Ultrametric>(space: &S, x: &BerkPoint<S::Elem>) -> Result<Vec<Stretch<S::Elem>>, TreeError> {
    let origin = space.origin().ok_or(TreeError::NoOrigin)?;
    let one = Gamma0Value::one();
    Ok(match x {
        BerkPoint::Infinity => vec![Stretch {
            center: origin,
            from: RadiusBound::Unbounded,
            to: one,
        }],
        BerkPoint::Disc { center, radius } => {
            let top = radius.clone().max(space.distance(center, &origin)).max(one.clone());
            vec![
                Stretch {
                    center: center.clone(),
                    from: RadiusBound::Finite(radius.clone()),
                    to: top.clone(),
                },
                Stretch {
                    center: origin,
                    from: RadiusBound::Finite(top),
                    to: one,
                },
            ]
        }
    })
}

/// First point of the stretch lying on the edge `(c, [lo; hi])`.
fn first_contact<S: Ultrametric>(
    space: &S,
    stretch: &Stretch<S::Elem>,
    c: &S::Elem,
    lo: &Gamma0Value,
    hi: &RadiusBound,
) -> Option<Gamma0Value> {
    let d = space.distance(&stretch.center, c);
    let floor = lo.clone().max(d);
    match &stretch.from {
        RadiusBound::Finite(from) if *from <= stretch.to => {
            // growing radius: first admissible radius is the smallest
            let s = from.clone().max(floor);
            (s <= stretch.to && hi.admits(&s)).then_some(s)
        }
        from => {
            // shrinking radius: first admissible radius is the largest
            let s = match (from, hi) {
                (RadiusBound::Finite(f), RadiusBound::Finite(h)) => f.clone().min(h.clone()),
                (RadiusBound::Finite(f), RadiusBound::Unbounded) => f.clone(),
                (RadiusBound::Unbounded, RadiusBound::Finite(h)) => h.clone(),
                (RadiusBound::Unbounded, RadiusBound::Unbounded) => return None,
            };
            (s >= floor && s >= stretch.to).then_some(s)
        }
    }
}

/// First point of `x`'s trajectory inside the tree.
fn contact_point<S: Ultrametric>(
    space: &S,
    tree: &FiniteSubtree<S::Elem>,
    x: &BerkPoint<S::Elem>,
) -> Result<BerkPoint<S::Elem>, TreeError> {
    if !tree_contains(space, tree, &gauss_point(space)?) {
        return Err(TreeError::MissingGaussPoint);
    }
    if x.is_infinity() && tree_contains(space, tree, x) {
        return Ok(BerkPoint::Infinity);
    }
    let vertex_edges = tree.vertices.iter().filter_map(|v| match v {
        BerkPoint::Disc { center, radius } => Some((center, radius.clone(), RadiusBound::Finite(radius.clone()))),
        BerkPoint::Infinity => None,
    });
    let edges: Vec<(&S::Elem, Gamma0Value, RadiusBound)> = tree
        .edges
        .iter()
        .map(|e| (&e.center, e.lo.clone(), e.hi.clone()))
        .chain(vertex_edges)
        .collect();
    for stretch in trajectory(space, x)? {
        let growing = matches!(&stretch.from, RadiusBound::Finite(f) if *f <= stretch.to);
        let hits = edges
            .iter()
            .filter_map(|(c, lo, hi)| first_contact(space, &stretch, c, lo, hi));
        let best = if growing { hits.min() } else { hits.max() };
        if let Some(s) = best {
            return Ok(BerkPoint::disc(stretch.center.clone(), s));
        }
    }
    Err(TreeError::Malformed("trajectory never meets the tree".into()))
}

/// The smallest time at which the contraction trajectory of `x` lies in the
/// tree. On the unit disc this is the entry radius.
pub fn entry_time<S: Ultrametric>(
    space: &S,
    tree: &FiniteSubtree<S::Elem>,
    x: &BerkPoint<S::Elem>,
) -> Result<Time, TreeError> {
    let p = contact_point(space, tree, x)?;
    trajectory_time(space, x, &p)
}

/// The contraction stopped when it first meets the tree.
pub fn retract<S: Ultrametric>(
    space: &S,
    tree: &FiniteSubtree<S::Elem>,
    t: &Time,
    x: &BerkPoint<S::Elem>,
) -> Result<BerkPoint<S::Elem>, TreeError> {
    let p = contact_point(space, tree, x)?;
    let tau = trajectory_time(space, x, &p)?;
    if *t <= tau {
        contract(space, t, x)
    } else {
        Ok(p)
    }
}

/// Sampled structural checks: every vertex lies in the tree, edges meet only
/// at vertices, and geodesics between sampled vertex pairs stay inside.
pub fn validate_tree<S: Ultrametric, R: Rng>(
    space: &S,
    tree: &FiniteSubtree<S::Elem>,
    rng: &mut R,
    budget: usize,
) -> Result<(), TreeError> {
    let n = tree.vertices.len();
    if n == 0 {
        return Err(TreeError::Malformed("no vertices".into()));
    }
    let mut seen = HashSet::new();
    for (i, e) in tree.edges.iter().enumerate() {
        if !seen.insert((e.lower.min(e.upper), e.lower.max(e.upper))) {
            return Err(TreeError::Malformed(format!("edge {i} duplicates another edge")));
        }
        let mid = BerkPoint::disc(e.center.clone(), e.interior_radius());
        for (j, other) in tree.edges.iter().enumerate() {
            if i != j && other.contains(space, &mid) {
                return Err(TreeError::Malformed(format!("edges {i} and {j} overlap")));
            }
        }
    }
    for _ in 0..budget {
        let a = &tree.vertices[rng.gen_range(0..n)];
        let b = &tree.vertices[rng.gen_range(0..n)];
        let p = path(space, a, b);
        for (k, piece) in p.segment.pieces().iter().enumerate() {
            for value in [&piece.origin, &piece.end] {
                let z = p.point_at(&SegmentPoint {
                    piece: k,
                    value: value.clone(),
                });
                if !tree_contains(space, tree, &z) {
                    return Err(TreeError::Malformed("tree is not path-connected".into()));
                }
            }
            if !piece.is_degenerate() {
                let mid = midpoint(&piece.origin, &piece.end);
                let z = p.point_at(&SegmentPoint { piece: k, value: mid });
                if !tree_contains(space, tree, &z) {
                    return Err(TreeError::Malformed("tree is not path-connected".into()));
                }
            }
        }
    }
    Ok(())
}

/// A value strictly between two distinct values.
pub fn midpoint(a: &Gamma0Value, b: &Gamma0Value) -> Gamma0Value {
    use num_rational::BigRational;
    match (a, b) {
        (Gamma0Value::Fin(x), Gamma0Value::Fin(y)) => Gamma0Value::Fin((x + y) / BigRational::from_integer(2.into())),
        (Gamma0Value::Zero, Gamma0Value::Fin(y)) | (Gamma0Value::Fin(y), Gamma0Value::Zero) => {
            Gamma0Value::Fin(y + BigRational::from_integer(1.into()))
        }
        (Gamma0Value::Zero, Gamma0Value::Zero) => Gamma0Value::Zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::berkline::invert;
    use crate::fields::PAdic;
    use crate::valgrp::rat;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(n: i64) -> Gamma0Value {
        Gamma0Value::exp(n)
    }

    fn d(c: i64, r: Gamma0Value) -> BerkPoint<BigRational> {
        BerkPoint::disc(rat(c), r)
    }

    fn pt(c: i64) -> BerkPoint<BigRational> {
        BerkPoint::simple(rat(c))
    }

    fn f3() -> PAdic {
        PAdic::new(3).unwrap()
    }

    #[test]
    fn hull_of_one_point() {
        let f = f3();
        let t = convex_hull(&f, &[pt(2)], false).unwrap();
        assert_eq!(t.vertices().len(), 1);
        assert!(t.edges().is_empty());
        assert_eq!(convex_hull(&f, &[], false), Err(TreeError::EmptyInput));
    }

    #[test]
    fn hull_of_zero_one_and_gauss() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), pt(1)], true).unwrap();
        assert_eq!(t.vertices().len(), 3);
        assert_eq!(t.edges().len(), 2);
        let mut spans: Vec<_> = t
            .edges()
            .iter()
            .map(|e| (e.center.clone(), e.lo.clone(), e.hi.clone()))
            .collect();
        spans.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            spans,
            vec![
                (rat(0), Gamma0Value::Zero, RadiusBound::Finite(g(0))),
                (rat(1), Gamma0Value::Zero, RadiusBound::Finite(g(0))),
            ]
        );
        let gauss = t.vertices().iter().position(|v| point_eq(&f, v, &d(0, g(0)))).unwrap();
        assert!(t.edges().iter().all(|e| e.upper == gauss));
    }

    #[test]
    fn hull_through_infinity() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), pt(3), BerkPoint::Infinity], false).unwrap();
        // spine 0 → ∞ through the branch point η_{0,|3|}
        for r in [Gamma0Value::Zero, g(5), g(1), g(0), g(-7)] {
            assert!(tree_contains(&f, &t, &d(0, r)));
        }
        assert!(tree_contains(&f, &t, &BerkPoint::Infinity));
        assert!(tree_contains(&f, &t, &d(3, Gamma0Value::ratio(3, 2))));
        assert!(tree_contains(&f, &t, &d(3, g(2))));
        assert!(!tree_contains(&f, &t, &d(6, g(2))));
        let branch = t.vertices().iter().position(|v| point_eq(&f, v, &d(0, g(1)))).unwrap();
        assert_eq!(t.degrees()[branch], 3);
        assert!(t.edges().iter().any(|e| e.hi == RadiusBound::Unbounded));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        validate_tree(&f, &t, &mut rng, 50).unwrap();
    }

    #[test]
    fn membership() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), pt(1)], true).unwrap();
        assert!(tree_contains(&f, &t, &d(0, g(0))));
        assert!(tree_contains(&f, &t, &d(3, g(1))));
        let single = convex_hull(&f, &[pt(0)], true).unwrap();
        assert!(!tree_contains(&f, &single, &d(1, g(2))));
    }

    #[test]
    fn entry_times() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), pt(1)], true).unwrap();
        assert_eq!(entry_time(&f, &t, &d(0, g(3))).unwrap(), Time::new(g(3)).unwrap());
        assert_eq!(entry_time(&f, &t, &pt(4)).unwrap(), Time::new(g(1)).unwrap());
        assert_eq!(entry_time(&f, &t, &pt(5)).unwrap(), Time::end());
        let no_gauss = convex_hull(&f, &[pt(0), pt(3)], false).unwrap();
        assert_eq!(entry_time(&f, &no_gauss, &pt(1)), Err(TreeError::MissingGaussPoint));
    }

    #[test]
    fn contraction() {
        let f = f3();
        for x in [
            d(0, g(2)),
            pt(7),
            d(2, g(-3)),
            BerkPoint::Infinity,
            d(1, Gamma0Value::ratio(1, 3)),
        ] {
            assert!(point_eq(&f, &contract(&f, &Time::start(), &x).unwrap(), &x));
            assert!(point_eq(&f, &contract(&f, &Time::end(), &x).unwrap(), &d(0, g(0))));
        }
        assert_eq!(
            contract(&f, &Time::new(g(1)).unwrap(), &d(0, g(2))).unwrap(),
            d(0, g(1))
        );
    }

    #[test]
    fn outer_chart_is_conjugated_by_inversion() {
        let f = f3();
        let outside = [
            BerkPoint::simple(BigRational::new(1.into(), 9.into())),
            d(0, g(-2)),
            BerkPoint::Infinity,
            BerkPoint::disc(BigRational::new(2.into(), 27.into()), g(-1)),
            BerkPoint::disc(BigRational::new(2.into(), 3.into()), g(0)),
        ];
        for x in outside {
            for k in [0i64, 1, 2, 3, 5] {
                let t = Time::new(g(k)).unwrap();
                let direct = contract(&f, &t, &x).unwrap();
                let conj = invert(&f, &contract(&f, &t, &invert(&f, &x)).unwrap());
                assert!(point_eq(&f, &direct, &conj), "x={x:?} t={k}");
            }
        }
    }

    #[test]
    fn retraction_examples() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), pt(1)], true).unwrap();
        let x = d(0, g(2));
        for k in [0, 1, 2, 5] {
            assert_eq!(retract(&f, &t, &Time::new(g(k)).unwrap(), &x).unwrap(), x);
        }
        let r = retract(&f, &t, &Time::end(), &pt(4)).unwrap();
        assert!(point_eq(&f, &r, &d(1, g(1))));
        for k in [4, 2, 1, 0] {
            let mid = retract(&f, &t, &Time::new(g(k)).unwrap(), &pt(4)).unwrap();
            let twice = retract(&f, &t, &Time::end(), &mid).unwrap();
            assert!(point_eq(&f, &twice, &r));
        }
    }

    #[test]
    fn restriction_keeps_endpoints() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), pt(1), pt(3)], true).unwrap();
        let sub = t.restrict_edges(|i| i == 0);
        assert_eq!(sub.edges().len(), 1);
        assert_eq!(sub.vertices().len(), 2);
    }

    #[test]
    fn dot_export() {
        let f = f3();
        let t = convex_hull(&f, &[pt(0), BerkPoint::Infinity], false).unwrap();
        let dot = t.to_dot(|c| c.to_string(), |_| None);
        assert!(dot.starts_with("graph tree {"));
        assert!(dot.contains("unbounded"));
        assert!(dot.contains("label=\"inf\""));
    }
}
