//! Exact rational linear arithmetic: Fourier–Motzkin elimination over
//! systems of (possibly strict) inequalities, and matrix rank.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("elimination exceeded {0} constraints")]
    TooLarge(usize),
}

/// Upper bound on the number of constraints kept during elimination.
pub const CONSTRAINT_CAP: usize = 20_000;

/// `coeffs · x ≤ rhs`, or `<` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
    pub strict: bool,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational, strict: bool) -> Self {
        Constraint { coeffs, rhs, strict }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Truth value of a constraint with no variables.
    fn holds_trivially(&self) -> bool {
        if self.strict {
            self.rhs.is_positive()
        } else {
            !self.rhs.is_negative()
        }
    }

    /// Scales so that the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c = &*c / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }
}

/// A conjunction of linear constraints in `dim` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl System {
    pub fn new(dim: usize) -> Self {
        System {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert_eq!(c.coeffs.len(), self.dim);
        self.constraints.push(c);
    }

    /// Projects out variable `var` (its coefficient becomes zero everywhere).
    /// Returns `None` if a constant constraint is violated.
    fn eliminate(constraints: Vec<Constraint>, var: usize) -> Result<Option<Vec<Constraint>>, LinearError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for c in constraints {
            let a = &c.coeffs[var];
            if a.is_positive() {
                pos.push(c);
            } else if a.is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let (ap, an) = (p.coeffs[var].clone(), -n.coeffs[var].clone());
                let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x / &ap + y / &an).collect();
                rest.push(Constraint::new(
                    coeffs,
                    &p.rhs / &ap + &n.rhs / &an,
                    p.strict || n.strict,
                ));
            }
        }
        Self::simplify(rest)
    }

    /// Drops trivially true constraints and keeps only the tightest bound
    /// per direction.
    fn simplify(constraints: Vec<Constraint>) -> Result<Option<Vec<Constraint>>, LinearError> {
        let mut best: BTreeMap<Vec<BigRational>, (BigRational, bool)> = BTreeMap::new();
        for c in constraints {
            let c = c.normalized();
            if c.is_constant() {
                if !c.holds_trivially() {
                    return Ok(None);
                }
                continue;
            }
            match best.get_mut(&c.coeffs) {
                Some((rhs, strict)) => {
                    if c.rhs < *rhs || (c.rhs == *rhs && c.strict) {
                        *rhs = c.rhs;
                        *strict = c.strict;
                    }
                }
                None => {
                    best.insert(c.coeffs, (c.rhs, c.strict));
                }
            }
        }
        if best.len() > CONSTRAINT_CAP {
            return Err(LinearError::TooLarge(CONSTRAINT_CAP));
        }
        Ok(Some(
            best.into_iter()
                .map(|(coeffs, (rhs, strict))| Constraint { coeffs, rhs, strict })
                .collect(),
        ))
    }

    /// Projection onto the variables not listed in `vars`; `None` if empty.
    fn project_out(&self, vars: impl IntoIterator<Item = usize>) -> Result<Option<Vec<Constraint>>, LinearError> {
        let Some(mut cs) = Self::simplify(self.constraints.clone())? else {
            return Ok(None);
        };
        for v in vars {
            match Self::eliminate(cs, v)? {
                Some(next) => cs = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cs))
    }

    pub fn is_feasible(&self) -> Result<bool, LinearError> {
        Ok(self.project_out(0..self.dim)?.is_some())
    }

    /// Whether variable `var` is bounded below on the (nonempty) solution set.
    pub fn is_bounded_below(&self, var: usize) -> Result<bool, LinearError> {
        let others = (0..self.dim).filter(|&v| v != var);
        Ok(match self.project_out(others)? {
            None => true,
            Some(cs) => cs.iter().any(|c| c.coeffs[var].is_negative()),
        })
    }

    /// The same constraints with every strict inequality made non-strict.
    pub fn relaxed(&self) -> System {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint {
                strict: false,
                ..c.clone()
            })
            .collect();
        System {
            dim: self.dim,
            constraints,
        }
    }

    /// Projection onto the variables `keep`, renumbered in the given order;
    /// `None` if the system is infeasible.
    pub fn project(&self, keep: &[usize]) -> Result<Option<System>, LinearError> {
        let drop = (0..self.dim).filter(|v| !keep.contains(v));
        Ok(self.project_out(drop)?.map(|cs| System {
            dim: keep.len(),
            constraints: cs
                .into_iter()
                .map(|c| Constraint {
                    coeffs: keep.iter().map(|&v| c.coeffs[v].clone()).collect(),
                    ..c
                })
                .collect(),
        }))
    }

    /// Dimension of the affine hull of the solution set, `None` if empty.
    pub fn affine_dimension(&self) -> Result<Option<usize>, LinearError> {
        if !self.is_feasible()? {
            return Ok(None);
        }
        let mut equalities = Vec::new();
        for c in self.constraints.iter().filter(|c| !c.strict) {
            let mut probe = self.clone();
            probe.push(Constraint::new(c.coeffs.clone(), c.rhs.clone(), true));
            if !probe.is_feasible()? {
                equalities.push(c.coeffs.clone());
            }
        }
        Ok(Some(self.dim - rank(equalities)))
    }
}

/// Rank of a rational matrix given by rows.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let p = rows[r][col].clone();
        let pivot_row: Vec<BigRational> = rows[r].iter().map(|x| x / &p).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valgrp::rat;

    fn c(coeffs: &[i64], rhs: i64, strict: bool) -> Constraint {
        Constraint::new(coeffs.iter().map(|&x| rat(x)).collect(), rat(rhs), strict)
    }

    #[test]
    fn feasibility_with_strictness() {
        let mut s = System::new(1);
        s.push(c(&[1], 0, false)); // x ≤ 0
        s.push(c(&[-1], 0, false)); // x ≥ 0
        assert!(s.is_feasible().unwrap());
        assert_eq!(s.affine_dimension().unwrap(), Some(0));
        s.push(c(&[1], 0, true)); // x < 0
        assert!(!s.is_feasible().unwrap());
    }

    #[test]
    fn dimension_of_a_diagonal() {
        let mut s = System::new(2);
        s.push(c(&[1, -1], 0, false));
        s.push(c(&[-1, 1], 0, false));
        s.push(c(&[1, 0], 1, false));
        s.push(c(&[-1, 0], 0, false));
        assert_eq!(s.affine_dimension().unwrap(), Some(1));
        assert!(s.is_bounded_below(1).unwrap());
    }

    #[test]
    fn unbounded_direction() {
        let mut s = System::new(2);
        s.push(c(&[1, 0], 3, false));
        s.push(c(&[-1, 0], 0, false));
        assert!(s.is_bounded_below(0).unwrap());
        assert!(!s.is_bounded_below(1).unwrap());
        assert_eq!(s.affine_dimension().unwrap(), Some(2));
    }

    #[test]
    fn projection_keeps_the_shadow() {
        // 0 ≤ x ≤ y ≤ 2 projects onto 0 ≤ y ≤ 2
        let mut s = System::new(2);
        s.push(c(&[-1, 0], 0, false));
        s.push(c(&[1, -1], 0, false));
        s.push(c(&[0, 1], 2, true));
        let shadow = s.project(&[1]).unwrap().unwrap();
        assert_eq!(shadow.dim, 1);
        assert!(shadow.constraints.contains(&c(&[-1], 0, false)));
        assert!(shadow.constraints.contains(&c(&[1], 2, true)));
        assert!(!shadow.relaxed().constraints.iter().any(|k| k.strict));
    }

    #[test]
    fn ranks() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)], vec![rat(0), rat(1)]];
        assert_eq!(rank(m), 2);
        assert_eq!(rank(vec![]), 0);
    }
}
