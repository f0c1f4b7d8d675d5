//! Exact valued fields: p-adic rationals, t-adic rational functions and
//! abstract ultrametric tables.
//!
//! [`Ultrametric`] is the part every carrier shares: a distance `|a − b|`
//! valued in Γ₀. [`ValuedField`] adds exact field arithmetic and is what
//! Gauss evaluation and inversion need. Ultrametric tables only implement
//! the former.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::valgrp::{rat, Gamma0Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("polynomial arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation requires a univariate polynomial")]
    NotUnivariate,
    #[error("invalid ultrametric table: {0}")]
    Table(#[from] TableViolation),
    #[error("coefficient {0} is not defined in this field")]
    BadCoefficient(String),
}

/// A set with an ultrametric distance valued in Γ₀.
pub trait Ultrametric {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    /// `|a − b|`.
    fn distance(&self, a: &Self::Elem, b: &Self::Elem) -> Gamma0Value;

    /// The element `0`, if the carrier has one.
    fn origin(&self) -> Option<Self::Elem>;

    /// `|a| = |a − 0|`.
    fn norm(&self, a: &Self::Elem) -> Option<Gamma0Value> {
        self.origin().map(|o| self.distance(a, &o))
    }
}

/// An exact field with a multiplicative, ultrametric absolute value
/// normalized so that the uniformizer has value `Fin(1)`.
pub trait ValuedField: Ultrametric {
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn valuation(&self, a: &Self::Elem) -> Gamma0Value;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicity of the prime `p` in the nonzero integer `n`.
fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The rationals with the p-adic absolute value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdic {
    p: BigInt,
}

impl PAdic {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PAdic { p: BigInt::from(p) })
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }
}

impl Ultrametric for PAdic {
    type Elem = BigRational;

    fn distance(&self, a: &BigRational, b: &BigRational) -> Gamma0Value {
        self.valuation(&(a - b))
    }

    fn origin(&self) -> Option<BigRational> {
        Some(BigRational::zero())
    }
}

impl ValuedField for PAdic {
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        rat(n)
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn valuation(&self, a: &BigRational) -> Gamma0Value {
        if a.is_zero() {
            return Gamma0Value::Zero;
        }
        let v = int_valuation(a.numer(), &self.p) - int_valuation(a.denom(), &self.p);
        Gamma0Value::exp(v)
    }
}

/// Coefficient field of t-adic rational functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffField {
    Rationals,
    /// The prime field F_q; elements are kept as integers in `[0, q)`.
    Prime(u64),
}

impl CoeffField {
    fn reduce(&self, c: BigRational) -> BigRational {
        match self {
            CoeffField::Rationals => c,
            CoeffField::Prime(q) => {
                let q = BigInt::from(*q);
                if c.denom().is_one() {
                    return BigRational::from_integer(c.numer().mod_floor(&q));
                }
                let den_inv = mod_inverse(c.denom(), &q);
                BigRational::from_integer((c.numer() * den_inv).mod_floor(&q))
            }
        }
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        match self {
            CoeffField::Rationals => a.recip(),
            CoeffField::Prime(q) => {
                let q = BigInt::from(*q);
                BigRational::from_integer(mod_inverse(a.numer(), &q))
            }
        }
    }

    /// Maps a rational into the coefficient field, if defined there.
    pub fn embed(&self, c: &BigRational) -> Option<BigRational> {
        if let CoeffField::Prime(q) = self {
            if c.denom().mod_floor(&BigInt::from(*q)).is_zero() {
                return None;
            }
        }
        Some(self.reduce(c.clone()))
    }
}

fn mod_inverse(a: &BigInt, q: &BigInt) -> BigInt {
    // q is prime and a is a unit mod q: a^(q-2)
    a.mod_floor(q).modpow(&(q - 2u32), q)
}

/// Dense univariate polynomial over a [`CoeffField`], lowest degree first,
/// with no trailing zeros.
type Dense = Vec<BigRational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn dense_add(k: &CoeffField, a: &[BigRational], b: &[BigRational]) -> Dense {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|i| k.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect(),
    )
}

fn dense_mul(k: &CoeffField, a: &[BigRational], b: &[BigRational]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(out)
}

fn dense_scale(k: &CoeffField, a: &[BigRational], c: &BigRational) -> Dense {
    trim(a.iter().map(|x| k.mul(x, c)).collect())
}

/// Quotient and remainder of `a` by the nonzero `b`.
fn dense_divrem(k: &CoeffField, a: &[BigRational], b: &[BigRational]) -> (Dense, Dense) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = k.inv(&b[db]);
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    while rem.len() > db && !rem.is_empty() {
        let shift = rem.len() - 1 - db;
        let c = k.mul(&rem[rem.len() - 1], &lead_inv);
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] = k.add(&rem[shift + i], &k.neg(&k.mul(&c, bc)));
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn dense_monic(k: &CoeffField, a: &[BigRational]) -> Dense {
    match a.last() {
        None => Vec::new(),
        Some(l) => dense_scale(k, a, &k.inv(l)),
    }
}

fn dense_gcd(k: &CoeffField, a: &[BigRational], b: &[BigRational]) -> Dense {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        // monic remainders keep coefficient growth over Q in check
        let (_, r) = dense_divrem(k, &x, &y);
        x = y;
        y = dense_monic(k, &r);
    }
    dense_monic(k, &x)
}

/// A reduced fraction of polynomials in t with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Dense,
    den: Dense,
}

impl RationalFunction {
    /// Numerator coefficients, lowest degree first.
    pub fn numerator(&self) -> &[BigRational] {
        &self.num
    }

    /// Monic denominator coefficients, lowest degree first.
    pub fn denominator(&self) -> &[BigRational] {
        &self.den
    }
}

/// Rational functions in t over Q or F_q with the t-adic absolute value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TAdic {
    coeffs: CoeffField,
}

impl TAdic {
    pub fn rational() -> Self {
        TAdic {
            coeffs: CoeffField::Rationals,
        }
    }

    pub fn prime(q: u64) -> Result<Self, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(TAdic {
            coeffs: CoeffField::Prime(q),
        })
    }

    pub fn coeff_field(&self) -> &CoeffField {
        &self.coeffs
    }

    /// Builds `num/den` and normalizes it. `None` when a coefficient is not
    /// in the coefficient field or the denominator vanishes.
    pub fn fraction(&self, num: &[BigRational], den: &[BigRational]) -> Option<RationalFunction> {
        let k = &self.coeffs;
        let embed = |v: &[BigRational]| v.iter().map(|c| k.embed(c)).collect::<Option<Vec<_>>>();
        let num = trim(embed(num)?);
        let den = trim(embed(den)?);
        if den.is_empty() {
            return None;
        }
        Some(self.normalize(num, den))
    }

    /// The polynomial with the given integer coefficients, lowest degree first.
    pub fn poly(&self, coeffs: &[i64]) -> RationalFunction {
        let num: Vec<_> = coeffs.iter().map(|&c| rat(c)).collect();
        self.fraction(&num, &[BigRational::one()])
            .expect("integer coefficients embed")
    }

    fn normalize(&self, num: Dense, den: Dense) -> RationalFunction {
        let k = &self.coeffs;
        if num.is_empty() {
            return RationalFunction {
                num,
                den: vec![BigRational::one()],
            };
        }
        let g = dense_gcd(k, &num, &den);
        let (num, _) = dense_divrem(k, &num, &g);
        let (den, _) = dense_divrem(k, &den, &g);
        let lead = k.inv(den.last().expect("nonzero denominator"));
        RationalFunction {
            num: dense_scale(k, &num, &lead),
            den: dense_scale(k, &den, &lead),
        }
    }
}

fn order_at_zero(p: &[BigRational]) -> i64 {
    p.iter().position(|c| !c.is_zero()).expect("nonzero polynomial") as i64
}

impl Ultrametric for TAdic {
    type Elem = RationalFunction;

    fn distance(&self, a: &RationalFunction, b: &RationalFunction) -> Gamma0Value {
        self.valuation(&self.sub(a, b))
    }

    fn origin(&self) -> Option<RationalFunction> {
        Some(self.zero())
    }
}

impl ValuedField for TAdic {
    fn zero(&self) -> RationalFunction {
        RationalFunction {
            num: Vec::new(),
            den: vec![BigRational::one()],
        }
    }

    fn one(&self) -> RationalFunction {
        self.poly(&[1])
    }

    fn from_int(&self, n: i64) -> RationalFunction {
        self.poly(&[n])
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        let k = &self.coeffs;
        if a.den == b.den {
            return self.normalize(dense_add(k, &a.num, &b.num), a.den.clone());
        }
        let num = dense_add(k, &dense_mul(k, &a.num, &b.den), &dense_mul(k, &b.num, &a.den));
        self.normalize(num, dense_mul(k, &a.den, &b.den))
    }

    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        let k = &self.coeffs;
        RationalFunction {
            num: trim(a.num.iter().map(|c| k.neg(c)).collect()),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        let k = &self.coeffs;
        self.normalize(dense_mul(k, &a.num, &b.num), dense_mul(k, &a.den, &b.den))
    }

    fn inv(&self, a: &RationalFunction) -> Option<RationalFunction> {
        if a.num.is_empty() {
            return None;
        }
        Some(self.normalize(a.den.clone(), a.num.clone()))
    }

    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.num.is_empty()
    }

    fn valuation(&self, a: &RationalFunction) -> Gamma0Value {
        if a.num.is_empty() {
            return Gamma0Value::Zero;
        }
        Gamma0Value::exp(order_at_zero(&a.num) - order_at_zero(&a.den))
    }
}

/// Why a distance table fails to be an ultrametric on distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableViolation {
    #[error("distance matrix is not {0}x{0}")]
    Shape(usize),
    #[error("d({0},{1}) != d({1},{0})")]
    Asymmetric(String, String),
    #[error("d({0},{0}) must be zero")]
    NonzeroDiagonal(String),
    #[error("distinct labels {0} and {1} at distance zero")]
    ZeroDistance(String, String),
    #[error("d({x},{z}) > max(d({x},{y}), d({y},{z}))")]
    Triangle { x: String, y: String, z: String },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
}

/// Checks that `dist` is a symmetric ultrametric on distinct labels.
pub fn validate_table(labels: &[String], dist: &[Vec<Gamma0Value>]) -> Result<(), TableViolation> {
    let n = labels.len();
    if dist.len() != n || dist.iter().any(|row| row.len() != n) {
        return Err(TableViolation::Shape(n));
    }
    for i in 0..n {
        if labels[..i].contains(&labels[i]) {
            return Err(TableViolation::DuplicateLabel(labels[i].clone()));
        }
        if !dist[i][i].is_zero() {
            return Err(TableViolation::NonzeroDiagonal(labels[i].clone()));
        }
        for j in 0..n {
            if dist[i][j] != dist[j][i] {
                return Err(TableViolation::Asymmetric(labels[i].clone(), labels[j].clone()));
            }
            if i != j && dist[i][j].is_zero() {
                return Err(TableViolation::ZeroDistance(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if dist[x][z] > dist[x][y].clone().max(dist[y][z].clone()) {
                    return Err(TableViolation::Triangle {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                        z: labels[z].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A finite ultrametric point cloud. Elements are label indices. A label
/// spelled `"0"`, if present, plays the role of the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrametricTable {
    labels: Vec<String>,
    dist: Vec<Vec<Gamma0Value>>,
}

impl UltrametricTable {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Gamma0Value>>) -> Result<Self, TableViolation> {
        validate_table(&labels, &dist)?;
        Ok(UltrametricTable { labels, dist })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn distances(&self) -> &[Vec<Gamma0Value>] {
        &self.dist
    }
}

impl Ultrametric for UltrametricTable {
    type Elem = usize;

    fn distance(&self, a: &usize, b: &usize) -> Gamma0Value {
        self.dist[*a][*b].clone()
    }

    fn origin(&self) -> Option<usize> {
        self.index_of("0")
    }
}

/// A polynomial in `arity` variables with coefficients in a field; no zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<E> {
    arity: usize,
    terms: BTreeMap<Vec<u32>, E>,
}

impl<E: Clone + PartialEq + Eq + Hash + Debug> Polynomial<E> {
    pub fn new<F>(field: &F, arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, E)>) -> Result<Self, FieldError>
    where
        F: ValuedField<Elem = E>,
    {
        let mut map: BTreeMap<Vec<u32>, E> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != arity {
                return Err(FieldError::ArityMismatch {
                    expected: arity,
                    found: exps.len(),
                });
            }
            let entry = map.entry(exps).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Ok(Polynomial { arity, terms: map })
    }

    /// Univariate polynomial from coefficients, lowest degree first.
    pub fn from_coeffs<F>(field: &F, coeffs: Vec<E>) -> Self
    where
        F: ValuedField<Elem = E>,
    {
        let terms = coeffs.into_iter().enumerate().map(|(i, c)| (vec![i as u32], c));
        Polynomial::new(field, 1, terms).expect("univariate terms")
    }

    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &E)> {
        self.terms.iter()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Dense coefficients of a univariate polynomial.
    pub fn dense<F>(&self, field: &F) -> Result<Vec<E>, FieldError>
    where
        F: ValuedField<Elem = E>,
    {
        if self.arity != 1 {
            return Err(FieldError::NotUnivariate);
        }
        let n = self.degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![field.zero(); n];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        Ok(out)
    }

    pub fn add<F>(&self, field: &F, other: &Self) -> Result<Self, FieldError>
    where
        F: ValuedField<Elem = E>,
    {
        self.check_arity(other)?;
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(e, c)| (e.clone(), c.clone()));
        Polynomial::new(field, self.arity, terms)
    }

    pub fn mul<F>(&self, field: &F, other: &Self) -> Result<Self, FieldError>
    where
        F: ValuedField<Elem = E>,
    {
        self.check_arity(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                terms.push((e, field.mul(c1, c2)));
            }
        }
        Polynomial::new(field, self.arity, terms)
    }

    /// Value at a point of the field (univariate).
    pub fn eval<F>(&self, field: &F, x: &E) -> Result<E, FieldError>
    where
        F: ValuedField<Elem = E>,
    {
        let dense = self.dense(field)?;
        Ok(dense
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c)))
    }

    /// `T^deg · P(1/T)` for a univariate `P`.
    pub fn reverse<F>(&self, field: &F) -> Result<Self, FieldError>
    where
        F: ValuedField<Elem = E>,
    {
        let mut dense = self.dense(field)?;
        dense.reverse();
        Ok(Polynomial::from_coeffs(field, dense))
    }

    fn check_arity(&self, other: &Self) -> Result<(), FieldError> {
        if self.arity != other.arity {
            return Err(FieldError::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }
}

/// Coefficients `b_i` with `P = Σ b_i (T − a)^i`, by repeated synthetic
/// division.
pub fn taylor_shift<F: ValuedField>(
    field: &F,
    p: &Polynomial<F::Elem>,
    a: &F::Elem,
) -> Result<Vec<F::Elem>, FieldError> {
    let mut coeffs = p.dense(field)?;
    let n = coeffs.len();
    for k in 0..n {
        for i in (k..n - 1).rev() {
            coeffs[i] = field.add(&coeffs[i], &field.mul(a, &coeffs[i + 1]));
        }
    }
    Ok(coeffs)
}

/// Rational to machine integer, when it is one and fits.
pub fn as_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.numer().to_i64()).flatten()
}
