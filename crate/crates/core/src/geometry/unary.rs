//! One-dimensional pieces: exact decompositions of unary sets and of the
//! trace of a set on a segment.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formula::{Formula, Point};
use crate::rational::{int, Frac, Rational};
use crate::var::VarId;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInfinity,
    PosInfinity,
    Closed(Rational),
    Open(Rational),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Closed(r) | Endpoint::Open(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }
}

/// An interval (possibly a single point or unbounded) of the real line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Piece {
    pub fn point(r: Rational) -> Piece {
        Piece {
            lo: Endpoint::Closed(r.clone()),
            hi: Endpoint::Closed(r),
        }
    }

    pub fn closed(a: Rational, b: Rational) -> Piece {
        Piece {
            lo: Endpoint::Closed(a),
            hi: Endpoint::Closed(b),
        }
    }

    pub fn open(a: Rational, b: Rational) -> Piece {
        Piece {
            lo: Endpoint::Open(a),
            hi: Endpoint::Open(b),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Endpoint::Closed(a), Endpoint::Closed(b)) if a == b)
    }

    /// Length; `None` if unbounded.
    pub fn length(&self) -> Option<Rational> {
        Some(self.hi.value()? - self.lo.value()?)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Endpoint::NegInfinity => true,
            Endpoint::Closed(a) => a <= x,
            Endpoint::Open(a) => a < x,
            Endpoint::PosInfinity => false,
        };
        let below = match &self.hi {
            Endpoint::PosInfinity => true,
            Endpoint::Closed(b) => x <= b,
            Endpoint::Open(b) => x < b,
            Endpoint::NegInfinity => false,
        };
        above && below
    }

    /// Whether every point of `other` lies in `self`.
    pub fn covers(&self, other: &Piece) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (Endpoint::NegInfinity, _) => true,
            (_, Endpoint::NegInfinity) => false,
            (Endpoint::Closed(a), l) => a <= l.value().expect("finite"),
            (Endpoint::Open(a), Endpoint::Open(b)) => a <= b,
            (Endpoint::Open(a), Endpoint::Closed(b)) => a < b,
            _ => false,
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (Endpoint::PosInfinity, _) => true,
            (_, Endpoint::PosInfinity) => false,
            (Endpoint::Closed(a), h) => h.value().expect("finite") <= a,
            (Endpoint::Open(a), Endpoint::Open(b)) => b <= a,
            (Endpoint::Open(a), Endpoint::Closed(b)) => b < a,
            _ => false,
        };
        lo_ok && hi_ok
    }

    /// Whether `self` and the closed interval `[a, b]` share a point.
    pub fn meets_closed(&self, a: &Rational, b: &Rational) -> bool {
        if a > b {
            return false;
        }
        let lo_ok = match &self.hi {
            Endpoint::PosInfinity => true,
            Endpoint::Closed(h) => a <= h,
            Endpoint::Open(h) => a < h,
            Endpoint::NegInfinity => false,
        };
        let hi_ok = match &self.lo {
            Endpoint::NegInfinity => true,
            Endpoint::Closed(l) => l <= b,
            Endpoint::Open(l) => l < b,
            Endpoint::PosInfinity => false,
        };
        lo_ok && hi_ok
    }

    /// A rational point of the piece (its midpoint when bounded).
    pub fn sample(&self) -> Rational {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => (a + b) / int(2),
            (Some(a), None) => a + Rational::one(),
            (None, Some(b)) => b - Rational::one(),
            (None, None) => Rational::zero(),
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", Frac(self.lo.value().expect("finite")));
        }
        match &self.lo {
            Endpoint::Closed(a) => write!(f, "[{}", Frac(a))?,
            Endpoint::Open(a) => write!(f, "({}", Frac(a))?,
            _ => f.write_str("(-inf")?,
        }
        f.write_str(",")?;
        match &self.hi {
            Endpoint::Closed(b) => write!(f, "{}]", Frac(b)),
            Endpoint::Open(b) => write!(f, "{})", Frac(b)),
            _ => f.write_str("+inf)"),
        }
    }
}

/// Sorted, pairwise disjoint, maximal pieces.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UnaryDecomposition {
    pub pieces: Vec<Piece>,
}

impl UnaryDecomposition {
    pub fn contains(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The holes between consecutive pieces.
    pub fn gaps(&self) -> Vec<Piece> {
        self.pieces
            .windows(2)
            .map(|w| Piece {
                lo: flip(&w[0].hi),
                hi: flip(&w[1].lo),
            })
            .collect()
    }

    /// Whether the convex hull minus the set is finite: every hole between
    /// the leftmost and rightmost piece is a single point.
    pub fn hull_defect_is_finite(&self) -> bool {
        self.gaps().iter().all(Piece::is_point)
    }

    pub fn meets_closed(&self, a: &Rational, b: &Rational) -> bool {
        self.pieces.iter().any(|p| p.meets_closed(a, b))
    }
}

impl fmt::Display for UnaryDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("{}");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn flip(e: &Endpoint) -> Endpoint {
    match e {
        Endpoint::Closed(r) => Endpoint::Open(r.clone()),
        Endpoint::Open(r) => Endpoint::Closed(r.clone()),
        other => other.clone(),
    }
}

/// Splits `domain` (or the whole line) at the critical points, classifies
/// each elementary region by evaluating `member` at one point of it, and
/// merges neighbouring regions with the same status.
/// Returns `(inside, outside)`.
pub(crate) fn decompose_by(
    mut critical: Vec<Rational>,
    domain: Option<(Rational, Rational)>,
    mut member: impl FnMut(&Rational) -> Result<bool>,
) -> Result<(Vec<Piece>, Vec<Piece>)> {
    if let Some((a, b)) = &domain {
        critical.retain(|c| a < c && c < b);
        critical.push(a.clone());
        critical.push(b.clone());
    }
    critical.sort();
    critical.dedup();

    let mut regions: Vec<Piece> = Vec::new();
    if domain.is_none() {
        let lo = Endpoint::NegInfinity;
        match critical.first() {
            None => {
                regions.push(Piece {
                    lo,
                    hi: Endpoint::PosInfinity,
                });
            }
            Some(c) => regions.push(Piece {
                lo,
                hi: Endpoint::Open(c.clone()),
            }),
        }
    }
    for (i, c) in critical.iter().enumerate() {
        regions.push(Piece::point(c.clone()));
        match critical.get(i + 1) {
            Some(next) => regions.push(Piece::open(c.clone(), next.clone())),
            None if domain.is_none() => regions.push(Piece {
                lo: Endpoint::Open(c.clone()),
                hi: Endpoint::PosInfinity,
            }),
            None => {}
        }
    }

    let mut inside: Vec<Piece> = Vec::new();
    let mut outside: Vec<Piece> = Vec::new();
    let mut last: Option<bool> = None;
    for r in regions {
        let is_in = member(&r.sample())?;
        let target = if is_in { &mut inside } else { &mut outside };
        if last == Some(is_in) {
            target.last_mut().expect("previous region").hi = r.hi;
        } else {
            target.push(r);
        }
        last = Some(is_in);
    }
    Ok((inside, outside))
}

/// Exact decomposition of the subset of the line defined by `f` in `var`.
pub fn decompose_unary(f: &Formula, var: &VarId) -> Result<UnaryDecomposition> {
    if let Some(other) = f.vars().into_iter().find(|v| v != var) {
        return Err(Error::InvalidArgument(format!(
            "expected a formula in `{var}` only, found `{other}`"
        )));
    }
    let mut critical = Vec::new();
    for l in f.literals() {
        let a = l.term.coeff(var);
        if !a.is_zero() {
            critical.push(-l.term.constant_part() / a);
        }
    }
    let (inside, _) = decompose_by(critical, None, |x| {
        f.eval(&Point::from_iter([(var.clone(), x.clone())]))
    })?;
    Ok(UnaryDecomposition { pieces: inside })
}

/// Where the segment `p + t (q - p)`, `t` in `[0, 1]`, lies inside and outside
/// the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentProfile {
    pub inside: Vec<Piece>,
    pub outside: Vec<Piece>,
}

impl SegmentProfile {
    /// Outside pieces of positive length.
    pub fn excluded_intervals(&self) -> impl Iterator<Item = &Piece> {
        self.outside.iter().filter(|p| !p.is_point())
    }

    pub fn inside_decomposition(&self) -> UnaryDecomposition {
        UnaryDecomposition {
            pieces: self.inside.clone(),
        }
    }
}

pub fn segment_profile(f: &Formula, p: &Point, q: &Point) -> Result<SegmentProfile> {
    if p == q {
        return Err(Error::InvalidArgument("segment endpoints coincide".into()));
    }
    let mut critical = Vec::new();
    for l in f.literals() {
        let a = l.term.eval(p)?;
        let b = l.term.eval(q)?;
        if a != b {
            critical.push(&a / (&a - &b));
        }
    }
    let (inside, outside) = decompose_by(critical, Some((Rational::zero(), Rational::one())), |t| {
        f.eval(&p.lerp(q, t))
    })?;
    Ok(SegmentProfile { inside, outside })
}
