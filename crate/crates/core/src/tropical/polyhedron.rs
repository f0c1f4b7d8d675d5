//! Subsets of Γ₀ⁿ cut out by and/or combinations of monomial inequalities.
//!
//! On the locus where a fixed set of coordinates (the support) is nonzero,
//! passing to exponents turns each atom into a rational linear inequality,
//! or into a constant when one side vanishes. Every question below is
//! answered stratum by stratum with exact Fourier–Motzkin elimination.

use num_rational::BigRational;
use num_traits::Zero;

use super::TropicalError;
use crate::linear::{Constraint, LinearError, System};
use crate::valgrp::Gamma0Value;

/// Upper bound on the total number of atoms in a disjunctive normal form.
pub const DNF_ATOM_CAP: usize = 10_000;

/// Largest arity handled; every support pattern is enumerated.
const MAX_ARITY: usize = 12;

/// Branches explored when testing containment of a limit set.
const SEARCH_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn holds(self, l: &Gamma0Value, r: &Gamma0Value) -> bool {
        match self {
            Cmp::Lt => l < r,
            Cmp::Le => l <= r,
            Cmp::Gt => l > r,
            Cmp::Ge => l >= r,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Cmp::Lt | Cmp::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }
}

/// `coeff · x₁^{e₁} ⋯ x_n^{e_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonoTerm {
    pub coeff: Gamma0Value,
    pub exps: Vec<i64>,
}

impl MonoTerm {
    pub fn new(coeff: Gamma0Value, exps: Vec<i64>) -> Self {
        MonoTerm { coeff, exps }
    }

    /// A bare coefficient in `arity` variables.
    pub fn constant(coeff: Gamma0Value, arity: usize) -> Self {
        MonoTerm {
            coeff,
            exps: vec![0; arity],
        }
    }

    /// The coordinate `x_i`.
    pub fn var(i: usize, arity: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        MonoTerm {
            coeff: Gamma0Value::one(),
            exps,
        }
    }

    fn eval(&self, v: &[Gamma0Value]) -> Gamma0Value {
        self.exps.iter().zip(v).fold(self.coeff.clone(), |acc, (&e, x)| {
            &acc * &x.powi(e).expect("atom exponents are nonnegative")
        })
    }

    /// `(constant, coefficients)` of the exponent on a support, or `None`
    /// when the term vanishes there.
    fn exponent_form(&self, support: &[usize]) -> Option<(BigRational, Vec<BigRational>)> {
        let c = self.coeff.exponent()?.clone();
        let vanishes = self
            .exps
            .iter()
            .enumerate()
            .any(|(i, &e)| e > 0 && !support.contains(&i));
        if vanishes {
            return None;
        }
        Some((
            c,
            support
                .iter()
                .map(|&i| BigRational::from_integer(self.exps[i].into()))
                .collect(),
        ))
    }
}

/// `lhs ⋈ rhs`. Negative exponents are cleared by multiplying both sides
/// by the same monomial, so stored exponents are nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    lhs: MonoTerm,
    cmp: Cmp,
    rhs: MonoTerm,
}

impl Atom {
    pub fn new(mut lhs: MonoTerm, cmp: Cmp, mut rhs: MonoTerm) -> Result<Self, TropicalError> {
        if lhs.exps.len() != rhs.exps.len() {
            return Err(TropicalError::ArityMismatch {
                expected: lhs.exps.len(),
                found: rhs.exps.len(),
            });
        }
        for i in 0..lhs.exps.len() {
            let shift = lhs.exps[i].min(rhs.exps[i]).min(0);
            lhs.exps[i] -= shift;
            rhs.exps[i] -= shift;
        }
        Ok(Atom { lhs, cmp, rhs })
    }

    pub fn lhs(&self) -> &MonoTerm {
        &self.lhs
    }

    pub fn cmp(&self) -> Cmp {
        self.cmp
    }

    pub fn rhs(&self) -> &MonoTerm {
        &self.rhs
    }

    pub fn arity(&self) -> usize {
        self.lhs.exps.len()
    }

    pub fn holds(&self, v: &[Gamma0Value]) -> bool {
        self.cmp.holds(&self.lhs.eval(v), &self.rhs.eval(v))
    }

    /// The atom on the stratum where exactly `support` is nonzero, in the
    /// exponent coordinates of `support`.
    fn on_stratum(&self, support: &[usize]) -> Literal {
        match (self.lhs.exponent_form(support), self.rhs.exponent_form(support)) {
            (None, None) => Literal::Const(!self.cmp.is_strict()),
            (None, Some(_)) => Literal::Const(matches!(self.cmp, Cmp::Lt | Cmp::Le)),
            (Some(_), None) => Literal::Const(matches!(self.cmp, Cmp::Gt | Cmp::Ge)),
            (Some((cl, el)), Some((cr, er))) => {
                // a larger value is a smaller exponent
                let (coeffs, rhs) = match self.cmp {
                    Cmp::Le | Cmp::Lt => (sub(&er, &el), &cl - &cr),
                    Cmp::Ge | Cmp::Gt => (sub(&el, &er), &cr - &cl),
                };
                let c = Constraint::new(coeffs, rhs, self.cmp.is_strict());
                if c.coeffs.iter().all(Zero::is_zero) {
                    let holds = if c.strict {
                        c.rhs > BigRational::zero()
                    } else {
                        c.rhs >= BigRational::zero()
                    };
                    Literal::Const(holds)
                } else {
                    Literal::Linear(c)
                }
            }
        }
    }
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone)]
enum Literal {
    Const(bool),
    Linear(Constraint),
}

fn negate(c: &Constraint) -> Constraint {
    Constraint::new(c.coeffs.iter().map(|x| -x).collect(), -c.rhs.clone(), !c.strict)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn holds(&self, v: &[Gamma0Value]) -> bool {
        match self {
            Formula::Atom(a) => a.holds(v),
            Formula::And(fs) => fs.iter().all(|f| f.holds(v)),
            Formula::Or(fs) => fs.iter().any(|f| f.holds(v)),
        }
    }

    fn atoms(&self) -> Vec<&Atom> {
        match self {
            Formula::Atom(a) => vec![a],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().flat_map(Formula::atoms).collect(),
        }
    }

    /// Disjuncts, each a conjunction of atoms.
    fn dnf(&self) -> Result<Vec<Vec<Atom>>, TropicalError> {
        let out = match self {
            Formula::Atom(a) => vec![vec![a.clone()]],
            Formula::Or(fs) => {
                let mut all = Vec::new();
                for f in fs {
                    all.extend(f.dnf()?);
                    check_size(&all)?;
                }
                all
            }
            Formula::And(fs) => {
                let mut acc: Vec<Vec<Atom>> = vec![Vec::new()];
                for f in fs {
                    let part = f.dnf()?;
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for a in &acc {
                        for b in &part {
                            next.push(a.iter().chain(b).cloned().collect());
                        }
                        check_size(&next)?;
                    }
                    acc = next;
                }
                acc
            }
        };
        check_size(&out)?;
        Ok(out)
    }
}

fn check_size(dnf: &[Vec<Atom>]) -> Result<(), TropicalError> {
    if dnf.iter().map(Vec::len).sum::<usize>() > DNF_ATOM_CAP {
        return Err(TropicalError::FormulaTooLarge(DNF_ATOM_CAP));
    }
    Ok(())
}

/// A definable subset of Γ₀ⁿ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolyhedron {
    arity: usize,
    formula: Formula,
}

impl TropicalPolyhedron {
    pub fn new(arity: usize, formula: Formula) -> Result<Self, TropicalError> {
        for a in formula.atoms() {
            if a.arity() != arity {
                return Err(TropicalError::ArityMismatch {
                    expected: arity,
                    found: a.arity(),
                });
            }
        }
        if arity > MAX_ARITY {
            return Err(TropicalError::ArityMismatch {
                expected: MAX_ARITY,
                found: arity,
            });
        }
        Ok(TropicalPolyhedron { arity, formula })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Nonempty pieces: one per disjunct and support pattern.
    fn pieces(&self) -> Result<Vec<Piece>, TropicalError> {
        let dnf = self.formula.dnf()?;
        let mut out = Vec::new();
        for support in supports(self.arity) {
            for disjunct in &dnf {
                if let Some(system) = stratum_system(disjunct, &support) {
                    if system.is_feasible()? {
                        out.push(Piece {
                            support: support.clone(),
                            system,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

fn supports(arity: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << arity).map(move |mask| (0..arity).filter(|i| mask & (1 << i) != 0).collect())
}

/// The linear system of a conjunction on a stratum; `None` if some atom is
/// constantly false there.
fn stratum_system(conj: &[Atom], support: &[usize]) -> Option<System> {
    let mut sys = System::new(support.len());
    for a in conj {
        match a.on_stratum(support) {
            Literal::Const(true) => {}
            Literal::Const(false) => return None,
            Literal::Linear(c) => sys.push(c),
        }
    }
    Some(sys)
}

struct Piece {
    support: Vec<usize>,
    system: System,
}

impl Piece {
    fn is_strict(&self) -> bool {
        self.system.constraints.iter().any(|c| c.strict)
    }
}

pub fn poly_member(p: &TropicalPolyhedron, v: &[Gamma0Value]) -> Result<bool, TropicalError> {
    if v.len() != p.arity {
        return Err(TropicalError::ArityMismatch {
            expected: p.arity,
            found: v.len(),
        });
    }
    Ok(p.formula.holds(v))
}

/// Definable compactness: the set lies in some box `[Zero; R]ⁿ` and is
/// closed, so that it can be written with non-strict atoms alone.
///
/// Closedness is checked on every nonempty piece: its closure within the
/// stratum, and its limit points on each smaller stratum (coordinates
/// tending to `Zero` along a recession direction), must lie in the set.
pub fn is_def_compact(p: &TropicalPolyhedron) -> Result<bool, TropicalError> {
    let pieces = p.pieces()?;
    for piece in &pieces {
        for v in 0..piece.support.len() {
            if !piece.system.is_bounded_below(v)? {
                return Ok(false);
            }
        }
    }
    let dnf = p.formula.dnf()?;
    for piece in &pieces {
        let closure = piece.system.relaxed();
        let n = piece.support.len();
        for keep_mask in 0u32..1 << n {
            let keep: Vec<usize> = (0..n).filter(|i| keep_mask & (1 << i) != 0).collect();
            if keep.len() == n && !piece.is_strict() {
                continue;
            }
            let Some(limit) = limit_set(&closure, &keep)? else {
                continue;
            };
            let stratum: Vec<usize> = keep.iter().map(|&i| piece.support[i]).collect();
            if !contained(&limit, &dnf, &stratum)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Points of the closure of `closure` on the face where only the variables
/// `keep` stay finite; `None` when no point escapes that way.
fn limit_set(closure: &System, keep: &[usize]) -> Result<Option<System>, LinearError> {
    let n = closure.dim;
    if keep.len() < n {
        // a recession direction fixing `keep` and pushing the rest to +∞
        let mut ray = System::new(n);
        for c in &closure.constraints {
            ray.push(Constraint::new(c.coeffs.clone(), BigRational::zero(), false));
        }
        for v in 0..n {
            let mut unit = vec![BigRational::zero(); n];
            unit[v] = BigRational::from_integer(1.into());
            if keep.contains(&v) {
                ray.push(Constraint::new(unit.clone(), BigRational::zero(), false));
                ray.push(Constraint::new(
                    unit.iter().map(|x| -x).collect(),
                    BigRational::zero(),
                    false,
                ));
            } else {
                unit[v] = BigRational::from_integer((-1).into());
                ray.push(Constraint::new(unit, BigRational::from_integer((-1).into()), false));
            }
        }
        if !ray.is_feasible()? {
            return Ok(None);
        }
    }
    closure.project(keep)
}

/// Whether the polyhedron `limit` on `stratum` lies inside the set given by
/// `dnf`, decided by searching for a point of `limit` outside every disjunct.
fn contained(limit: &System, dnf: &[Vec<Atom>], stratum: &[usize]) -> Result<bool, LinearError> {
    // each clause: one of these must hold to escape its disjunct
    let mut clauses: Vec<Vec<Constraint>> = Vec::new();
    for disjunct in dnf {
        let mut escape = Vec::new();
        let mut vacuous = false;
        for a in disjunct {
            match a.on_stratum(stratum) {
                Literal::Const(true) => {}
                Literal::Const(false) => vacuous = true,
                Literal::Linear(c) => escape.push(negate(&c)),
            }
        }
        if vacuous {
            continue;
        }
        if escape.is_empty() {
            return Ok(true);
        }
        clauses.push(escape);
    }
    let mut budget = SEARCH_CAP;
    Ok(!escapes(limit, &clauses, &mut budget)?)
}

fn escapes(sys: &System, clauses: &[Vec<Constraint>], budget: &mut usize) -> Result<bool, LinearError> {
    if *budget == 0 {
        return Err(LinearError::TooLarge(SEARCH_CAP));
    }
    *budget -= 1;
    if !sys.is_feasible()? {
        return Ok(false);
    }
    let Some((first, rest)) = clauses.split_first() else {
        return Ok(true);
    };
    for c in first {
        let mut next = sys.clone();
        next.push(c.clone());
        if escapes(&next, rest, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    NegInfinity,
    Finite(usize),
}

/// The dimension, and whether every nonempty piece is closed and lies on
/// the all-nonzero stratum, where it is the affine-hull dimension of a
/// closed rational polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    pub dimension: Dimension,
    pub certified: bool,
}

pub fn poly_dimension(p: &TropicalPolyhedron) -> Result<DimensionReport, TropicalError> {
    let mut dimension = Dimension::NegInfinity;
    let mut certified = true;
    for piece in p.pieces()? {
        if let Some(d) = piece.system.affine_dimension()? {
            dimension = dimension.max(Dimension::Finite(d));
            certified &= piece.support.len() == p.arity && !piece.is_strict();
        }
    }
    Ok(DimensionReport { dimension, certified })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> Gamma0Value {
        Gamma0Value::exp(n)
    }

    /// `x_i ⋈ c` in `arity` variables.
    fn bound(i: usize, cmp: Cmp, c: i64, arity: usize) -> Formula {
        Formula::Atom(Atom::new(MonoTerm::var(i, arity), cmp, MonoTerm::constant(g(c), arity)).unwrap())
    }

    fn one_var(f: Formula) -> TropicalPolyhedron {
        TropicalPolyhedron::new(1, f).unwrap()
    }

    #[test]
    fn membership() {
        let p = one_var(bound(0, Cmp::Le, 0, 1));
        assert!(poly_member(&p, &[g(1)]).unwrap());
        assert!(poly_member(&p, &[Gamma0Value::Zero]).unwrap());
        assert!(!poly_member(&p, &[g(-1)]).unwrap());
        // x²y ≤ Fin(3) at (Fin(1), Fin(2)): Fin(4) is below Fin(3)
        let atom = Atom::new(MonoTerm::new(g(0), vec![2, 1]), Cmp::Le, MonoTerm::constant(g(3), 2)).unwrap();
        let q = TropicalPolyhedron::new(2, Formula::Atom(atom)).unwrap();
        assert!(poly_member(&q, &[g(1), g(2)]).unwrap());
        let all = TropicalPolyhedron::new(3, Formula::And(vec![])).unwrap();
        assert!(poly_member(&all, &[g(5), Gamma0Value::Zero, g(-2)]).unwrap());
        assert_eq!(
            poly_member(&p, &[g(0), g(0)]),
            Err(TropicalError::ArityMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn negative_exponents_are_cleared() {
        let a = Atom::new(MonoTerm::new(g(0), vec![-1]), Cmp::Le, MonoTerm::constant(g(0), 1)).unwrap();
        assert_eq!(a.lhs().exps, vec![0]);
        assert_eq!(a.rhs().exps, vec![1]);
        // 1 ≤ x, i.e. x ≥ 1
        assert!(a.holds(&[g(-1)]));
        assert!(!a.holds(&[g(1)]));
    }

    #[test]
    fn compactness_examples() {
        let closed_box = one_var(Formula::And(vec![bound(0, Cmp::Ge, 2, 1), bound(0, Cmp::Le, 0, 1)]));
        assert!(is_def_compact(&closed_box).unwrap());
        assert!(!is_def_compact(&one_var(bound(0, Cmp::Lt, 0, 1))).unwrap());
        assert!(!is_def_compact(&one_var(bound(0, Cmp::Ge, 1, 1))).unwrap());
        // [Zero; 1] is compact, including the zero value
        assert!(is_def_compact(&one_var(bound(0, Cmp::Le, 0, 1))).unwrap());
    }

    #[test]
    fn strict_atoms_can_describe_closed_sets() {
        // x < 1 or x ≤ 1 is just x ≤ 1
        let f = Formula::Or(vec![bound(0, Cmp::Lt, 0, 1), bound(0, Cmp::Le, 0, 1)]);
        assert!(is_def_compact(&one_var(f)).unwrap());
        // an empty strict piece does not spoil compactness
        let f = Formula::Or(vec![
            Formula::And(vec![bound(0, Cmp::Lt, 1, 1), bound(0, Cmp::Gt, 1, 1)]),
            bound(0, Cmp::Le, 0, 1),
        ]);
        assert!(is_def_compact(&one_var(f)).unwrap());
        // (0; 1] misses its limit point zero
        let f = Formula::And(vec![bound(0, Cmp::Le, 0, 1), one_var_positive()]);
        assert!(!is_def_compact(&one_var(f)).unwrap());
    }

    fn one_var_positive() -> Formula {
        Formula::Atom(Atom::new(MonoTerm::var(0, 1), Cmp::Gt, MonoTerm::constant(Gamma0Value::Zero, 1)).unwrap())
    }

    #[test]
    fn limit_points_on_smaller_strata() {
        // xy < x with x ≤ 1 and y ≤ 1: the x = 0 face is the whole segment,
        // and together with the closed square the union is [0; 1]²
        let lhs = MonoTerm::new(g(0), vec![1, 1]);
        let strict = Formula::And(vec![
            Formula::Atom(Atom::new(lhs, Cmp::Lt, MonoTerm::var(0, 2)).unwrap()),
            bound(0, Cmp::Le, 0, 2),
            bound(1, Cmp::Le, 0, 2),
        ]);
        let square = Formula::And(vec![bound(0, Cmp::Le, 0, 2), bound(1, Cmp::Le, 0, 2)]);
        let p = TropicalPolyhedron::new(2, Formula::Or(vec![strict.clone(), square])).unwrap();
        assert!(is_def_compact(&p).unwrap());
        let alone = TropicalPolyhedron::new(2, strict).unwrap();
        assert!(!is_def_compact(&alone).unwrap());
    }

    #[test]
    fn dimensions() {
        let diag = Formula::And(vec![
            Formula::Atom(Atom::new(MonoTerm::var(0, 2), Cmp::Le, MonoTerm::var(1, 2)).unwrap()),
            Formula::Atom(Atom::new(MonoTerm::var(0, 2), Cmp::Ge, MonoTerm::var(1, 2)).unwrap()),
            bound(0, Cmp::Ge, 1, 2),
            bound(0, Cmp::Le, 0, 2),
        ]);
        let r = poly_dimension(&TropicalPolyhedron::new(2, diag).unwrap()).unwrap();
        assert_eq!(
            r,
            DimensionReport {
                dimension: Dimension::Finite(1),
                certified: true
            }
        );
        let square = Formula::And(vec![
            bound(0, Cmp::Ge, 1, 2),
            bound(0, Cmp::Le, 0, 2),
            bound(1, Cmp::Ge, 1, 2),
            bound(1, Cmp::Le, 0, 2),
        ]);
        let r = poly_dimension(&TropicalPolyhedron::new(2, square).unwrap()).unwrap();
        assert_eq!(
            r,
            DimensionReport {
                dimension: Dimension::Finite(2),
                certified: true
            }
        );
        let point = Formula::And(vec![bound(0, Cmp::Ge, 3, 1), bound(0, Cmp::Le, 3, 1)]);
        assert_eq!(poly_dimension(&one_var(point)).unwrap().dimension, Dimension::Finite(0));
        let empty = Formula::And(vec![bound(0, Cmp::Gt, 3, 1), bound(0, Cmp::Lt, 3, 1)]);
        assert_eq!(
            poly_dimension(&one_var(empty)).unwrap().dimension,
            Dimension::NegInfinity
        );
        let open = one_var(bound(0, Cmp::Lt, 3, 1));
        assert_eq!(
            poly_dimension(&open).unwrap(),
            DimensionReport {
                dimension: Dimension::Finite(1),
                certified: false
            }
        );
    }

    #[test]
    fn dnf_cap() {
        let pair = Formula::Or(vec![bound(0, Cmp::Le, 0, 1), bound(0, Cmp::Ge, 1, 1)]);
        let big = Formula::And(vec![pair; 14]);
        assert_eq!(
            poly_dimension(&one_var(big)),
            Err(TropicalError::FormulaTooLarge(DNF_ATOM_CAP))
        );
    }
}
