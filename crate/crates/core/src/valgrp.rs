//! The value monoid Γ₀ = {0} ∪ |F×|^Q, intervals, generalized segments and
//! monomial maps.
//!
//! Values are stored through their exponent with respect to a fixed
//! uniformizer: `Fin(e)` stands for `|π|^e`. A larger exponent therefore
//! means a *smaller* absolute value, and the order implemented by [`Ord`]
//! is the order of absolute values, not of exponents.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by value-group arithmetic and segment manipulation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("zero raised to a negative power")]
    NegativePowerOfZero,
    #[error("division by the zero value")]
    DivisionByZero,
    #[error("monomial coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("interval bounds are out of order")]
    InvalidInterval,
    #[error("a segment piece must be a closed interval")]
    OpenPiece,
    #[error("cannot concatenate an empty list of segments")]
    EmptySegmentList,
    #[error("piece {piece} has a zero origin or endpoint; the concatenation is not collapsible")]
    NotCollapsible { piece: usize },
    #[error("piece index {0} out of range")]
    PieceOutOfRange(usize),
    #[error("value does not lie on piece {0}")]
    NotOnPiece(usize),
    #[error("cannot parse value: {0}")]
    Parse(String),
}

/// An element of Γ₀: either the absolute zero or `|π|^e` for a rational `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gamma0Value {
    Zero,
    Fin(BigRational),
}

impl Gamma0Value {
    /// The unit `|1| = Fin(0)`.
    pub fn one() -> Self {
        Gamma0Value::Fin(BigRational::zero())
    }

    /// `Fin(n)` for an integer exponent.
    pub fn exp(n: i64) -> Self {
        Gamma0Value::Fin(BigRational::from_integer(BigInt::from(n)))
    }

    /// `Fin(num/den)`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Gamma0Value::Fin(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Gamma0Value::Zero)
    }

    pub fn exponent(&self) -> Option<&BigRational> {
        match self {
            Gamma0Value::Zero => None,
            Gamma0Value::Fin(e) => Some(e),
        }
    }

    /// `u^q`, with the convention `0^0 = 1`.
    pub fn pow(&self, q: &BigRational) -> Result<Self, ValueError> {
        match self {
            Gamma0Value::Fin(e) => Ok(Gamma0Value::Fin(e * q)),
            Gamma0Value::Zero if q.is_zero() => Ok(Gamma0Value::one()),
            Gamma0Value::Zero if q.is_positive() => Ok(Gamma0Value::Zero),
            Gamma0Value::Zero => Err(ValueError::NegativePowerOfZero),
        }
    }

    /// Integer power; negative powers of zero are errors.
    pub fn powi(&self, n: i64) -> Result<Self, ValueError> {
        self.pow(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn inv(&self) -> Result<Self, ValueError> {
        match self {
            Gamma0Value::Zero => Err(ValueError::DivisionByZero),
            Gamma0Value::Fin(e) => Ok(Gamma0Value::Fin(-e)),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, ValueError> {
        Ok(self * &other.inv()?)
    }

    /// Canonical text form: `zero` or `e=num/den`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Ord for Gamma0Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Gamma0Value::Zero, Gamma0Value::Zero) => Ordering::Equal,
            (Gamma0Value::Zero, Gamma0Value::Fin(_)) => Ordering::Less,
            (Gamma0Value::Fin(_), Gamma0Value::Zero) => Ordering::Greater,
            // order reversal: a larger exponent is a smaller value
            (Gamma0Value::Fin(a), Gamma0Value::Fin(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Gamma0Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &Gamma0Value {
    type Output = Gamma0Value;

    // values are powers of the uniformizer, so products add exponents
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Gamma0Value) -> Gamma0Value {
        match (self, rhs) {
            (Gamma0Value::Fin(a), Gamma0Value::Fin(b)) => Gamma0Value::Fin(a + b),
            _ => Gamma0Value::Zero,
        }
    }
}

impl Mul for Gamma0Value {
    type Output = Gamma0Value;

    fn mul(self, rhs: Gamma0Value) -> Gamma0Value {
        &self * &rhs
    }
}

impl fmt::Display for Gamma0Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma0Value::Zero => write!(f, "zero"),
            Gamma0Value::Fin(e) => write!(f, "e={}", fmt_rational(e)),
        }
    }
}

impl FromStr for Gamma0Value {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, ValueError> {
        let s = s.trim();
        if s == "zero" {
            return Ok(Gamma0Value::Zero);
        }
        let body = s.strip_prefix("e=").unwrap_or(s);
        parse_rational(body).map(Gamma0Value::Fin)
    }
}

/// Formats a rational as `num/den`, always printing the denominator.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational, ValueError> {
    let s = s.trim();
    let bad = || ValueError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An interval of Γ₀ with independently open or closed ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Gamma0Value,
    pub hi: Gamma0Value,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Gamma0Value, hi: Gamma0Value, lo_closed: bool, hi_closed: bool) -> Result<Self, ValueError> {
        if lo > hi {
            return Err(ValueError::InvalidInterval);
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn closed(lo: Gamma0Value, hi: Gamma0Value) -> Result<Self, ValueError> {
        Interval::new(lo, hi, true, true)
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && !self.is_closed()
    }

    pub fn contains(&self, x: &Gamma0Value) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }
}

/// A closed segment with an orientation: it runs from `origin` to `end`,
/// which may be in either order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub origin: Gamma0Value,
    pub end: Gamma0Value,
}

impl Segment {
    pub fn new(origin: Gamma0Value, end: Gamma0Value) -> Self {
        Segment { origin, end }
    }

    pub fn is_degenerate(&self) -> bool {
        self.origin == self.end
    }

    pub fn is_increasing(&self) -> bool {
        self.origin <= self.end
    }

    pub fn contains(&self, x: &Gamma0Value) -> bool {
        let (lo, hi) = self.bounds();
        lo <= x && x <= hi
    }

    /// `(min, max)` of the two endpoints.
    pub fn bounds(&self) -> (&Gamma0Value, &Gamma0Value) {
        if self.is_increasing() {
            (&self.origin, &self.end)
        } else {
            (&self.end, &self.origin)
        }
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.end.clone(), self.origin.clone())
    }
}

impl TryFrom<&Interval> for Segment {
    type Error = ValueError;

    fn try_from(iv: &Interval) -> Result<Self, ValueError> {
        if !iv.is_closed() {
            return Err(ValueError::OpenPiece);
        }
        Ok(Segment::new(iv.lo.clone(), iv.hi.clone()))
    }
}

/// Closed segments glued end-to-origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralizedSegment {
    pieces: Vec<Segment>,
}

/// A point of a generalized segment, as (piece index, coordinate).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SegmentPoint {
    pub piece: usize,
    pub value: Gamma0Value,
}

impl GeneralizedSegment {
    pub fn pieces(&self) -> &[Segment] {
        &self.pieces
    }

    pub fn origin(&self) -> SegmentPoint {
        SegmentPoint {
            piece: 0,
            value: self.pieces[0].origin.clone(),
        }
    }

    pub fn end(&self) -> SegmentPoint {
        let last = self.pieces.len() - 1;
        SegmentPoint {
            piece: last,
            value: self.pieces[last].end.clone(),
        }
    }

    /// Builds a point and canonicalizes it to the lowest piece index at
    /// junctions.
    pub fn point(&self, piece: usize, value: Gamma0Value) -> Result<SegmentPoint, ValueError> {
        let seg = self.pieces.get(piece).ok_or(ValueError::PieceOutOfRange(piece))?;
        if !seg.contains(&value) {
            return Err(ValueError::NotOnPiece(piece));
        }
        let mut p = SegmentPoint { piece, value };
        while p.piece > 0 && p.value == self.pieces[p.piece].origin {
            p.piece -= 1;
            p.value = self.pieces[p.piece].end.clone();
        }
        Ok(p)
    }

    /// The same segment traversed backwards.
    pub fn reversed(&self) -> GeneralizedSegment {
        GeneralizedSegment {
            pieces: self.pieces.iter().rev().map(Segment::reversed).collect(),
        }
    }
}

/// Concatenates closed segments, identifying each endpoint with the next
/// origin.
pub fn concat_segments(parts: Vec<Segment>) -> Result<GeneralizedSegment, ValueError> {
    if parts.is_empty() {
        return Err(ValueError::EmptySegmentList);
    }
    Ok(GeneralizedSegment { pieces: parts })
}

/// [`concat_segments`] for intervals; every interval must be closed.
pub fn concat_intervals(parts: &[Interval]) -> Result<GeneralizedSegment, ValueError> {
    let pieces = parts.iter().map(Segment::try_from).collect::<Result<Vec<_>, _>>()?;
    concat_segments(pieces)
}

/// `x ↦ coeff · x^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    coeff: Gamma0Value,
    exponent: BigRational,
}

impl MonomialMap {
    pub fn new(coeff: Gamma0Value, exponent: BigRational) -> Result<Self, ValueError> {
        if coeff.is_zero() {
            return Err(ValueError::ZeroCoefficient);
        }
        Ok(MonomialMap { coeff, exponent })
    }

    pub fn identity() -> Self {
        MonomialMap {
            coeff: Gamma0Value::one(),
            exponent: BigRational::one(),
        }
    }

    pub fn coeff(&self) -> &Gamma0Value {
        &self.coeff
    }

    pub fn exponent(&self) -> &BigRational {
        &self.exponent
    }

    pub fn eval(&self, x: &Gamma0Value) -> Result<Gamma0Value, ValueError> {
        Ok(&self.coeff * &x.pow(&self.exponent)?)
    }

    /// Inverse of an injective monomial (`exponent ≠ 0`), evaluated at `y`.
    pub fn solve(&self, y: &Gamma0Value) -> Result<Gamma0Value, ValueError> {
        let scaled = y.div(&self.coeff)?;
        if self.exponent.is_zero() {
            return Err(ValueError::DivisionByZero);
        }
        scaled.pow(&self.exponent.recip())
    }
}

/// A generalized segment collapsed onto a single interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collapse {
    pub interval: Interval,
    /// One monomial per piece; each has exponent ±1.
    pub maps: Vec<MonomialMap>,
    images: Vec<Segment>,
}

impl Collapse {
    pub fn apply(&self, p: &SegmentPoint) -> Result<Gamma0Value, ValueError> {
        let map = self.maps.get(p.piece).ok_or(ValueError::PieceOutOfRange(p.piece))?;
        map.eval(&p.value)
    }

    /// The canonical segment point mapped to `y`, if `y` is in the image.
    pub fn preimage(&self, seg: &GeneralizedSegment, y: &Gamma0Value) -> Result<Option<SegmentPoint>, ValueError> {
        for (i, img) in self.images.iter().enumerate() {
            if img.contains(y) {
                let x = if img.is_degenerate() {
                    seg.pieces()[i].origin.clone()
                } else {
                    self.maps[i].solve(y)?
                };
                return seg.point(i, x).map(Some);
            }
        }
        Ok(None)
    }

    /// Image of each piece, oriented like the piece.
    pub fn piece_images(&self) -> &[Segment] {
        &self.images
    }
}

/// Reparametrizes a generalized segment with nonzero origins and endpoints
/// as one interval, rescaling each piece so that it starts where its
/// predecessor ends.
///
/// The first piece keeps the identity parametrization; later pieces are
/// mapped by `x ↦ a·x` or `x ↦ a·x⁻¹` so the image keeps the direction of
/// the first nondegenerate piece.
pub fn collapse(seg: &GeneralizedSegment) -> Result<Collapse, ValueError> {
    for (i, p) in seg.pieces().iter().enumerate() {
        if p.origin.is_zero() || p.end.is_zero() {
            return Err(ValueError::NotCollapsible { piece: i });
        }
    }
    let increasing = seg
        .pieces()
        .iter()
        .find(|p| !p.is_degenerate())
        .map(Segment::is_increasing)
        .unwrap_or(true);

    let mut cursor = seg.pieces()[0].origin.clone();
    let mut maps = Vec::with_capacity(seg.pieces().len());
    let mut images = Vec::with_capacity(seg.pieces().len());
    for p in seg.pieces() {
        let map = if p.is_degenerate() || p.is_increasing() == increasing {
            MonomialMap::new(cursor.div(&p.origin)?, rat(1))?
        } else {
            MonomialMap::new(&cursor * &p.origin, rat(-1))?
        };
        let next = map.eval(&p.end)?;
        images.push(Segment::new(cursor.clone(), next.clone()));
        maps.push(map);
        cursor = next;
    }
    let first = seg.pieces()[0].origin.clone();
    let (lo, hi) = if first <= cursor {
        (first, cursor)
    } else {
        (cursor, first)
    };
    Ok(Collapse {
        interval: Interval::closed(lo, hi)?,
        maps,
        images,
    })
}
