//! Affine functions of variables with rational coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::Point;
use crate::rational::Rational;
use crate::var::VarId;

/// `constant + sum(coeff * var)`. Zero coefficients are never stored, so
/// structural equality is semantic equality of the affine functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearTerm {
    coeffs: BTreeMap<VarId, Rational>,
    constant: Rational,
}

impl LinearTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearTerm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: &VarId) -> Self {
        Self::monomial(Rational::one(), v)
    }

    pub fn monomial(c: Rational, v: &VarId) -> Self {
        let mut t = Self::zero();
        t.add_coeff(v, c);
        t
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (VarId, Rational)>, constant: Rational) -> Self {
        let mut t = Self::constant(constant);
        for (v, c) in coeffs {
            t.add_coeff(&v, c);
        }
        t
    }

    pub fn add_coeff(&mut self, v: &VarId, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(v);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn coeff(&self, v: &VarId) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<VarId, Rational> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.coeffs.keys()
    }

    pub fn collect_vars(&self, into: &mut BTreeSet<VarId>) {
        into.extend(self.coeffs.keys().cloned());
    }

    /// The same term without its constant.
    pub fn linear_part(&self) -> LinearTerm {
        LinearTerm {
            coeffs: self.coeffs.clone(),
            constant: Rational::zero(),
        }
    }

    pub fn scale(&self, k: &Rational) -> LinearTerm {
        if k.is_zero() {
            return LinearTerm::zero();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// Replaces `v` by `replacement`.
    pub fn substitute(&self, v: &VarId, replacement: &LinearTerm) -> LinearTerm {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(v);
                rest + replacement.scale(c)
            }
        }
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> LinearTerm {
        let mut t = LinearTerm::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            t.add_coeff(map.get(v).unwrap_or(v), c.clone());
        }
        t
    }

    /// Positive multiple with integer coefficients and content 1 (the
    /// constant included). Leaves the zero term alone.
    pub fn primitive(&self) -> LinearTerm {
        use num_integer::Integer;
        let values: Vec<&Rational> = self.coeffs.values().chain(std::iter::once(&self.constant)).collect();
        let lcm = crate::rational::lcm_of_denominators(values.iter().copied());
        let gcd = values
            .iter()
            .map(|r| (*r * Rational::from_integer(lcm.clone())).to_integer())
            .fold(num_bigint::BigInt::zero(), |g, n| g.gcd(&n));
        if gcd.is_zero() {
            return self.clone();
        }
        let k = Rational::new(lcm, gcd);
        self.scale(&k)
    }

    /// Sign of the first nonzero coefficient (by variable order), or of the
    /// constant for constant terms.
    pub fn leading_sign(&self) -> i32 {
        let lead = self.coeffs.values().next().unwrap_or(&self.constant);
        if lead.is_positive() {
            1
        } else if lead.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn eval(&self, x: &Point) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let value = x.get(v).ok_or_else(|| Error::MissingVariable(v.name().to_string()))?;
            acc += c * value;
        }
        Ok(acc)
    }
}

/// `constant + sum(coeff * x(var))`, exactly.
pub fn eval_term(t: &LinearTerm, x: &Point) -> Result<Rational> {
    t.eval(x)
}

impl Add<&LinearTerm> for &LinearTerm {
    type Output = LinearTerm;
    fn add(self, rhs: &LinearTerm) -> LinearTerm {
        let mut out = self.clone();
        for (v, c) in &rhs.coeffs {
            out.add_coeff(v, c.clone());
        }
        out.constant += &rhs.constant;
        out
    }
}

impl Add for LinearTerm {
    type Output = LinearTerm;
    fn add(self, rhs: LinearTerm) -> LinearTerm {
        &self + &rhs
    }
}

impl Sub<&LinearTerm> for &LinearTerm {
    type Output = LinearTerm;
    fn sub(self, rhs: &LinearTerm) -> LinearTerm {
        self + &(-rhs)
    }
}

impl Sub for LinearTerm {
    type Output = LinearTerm;
    fn sub(self, rhs: LinearTerm) -> LinearTerm {
        &self - &rhs
    }
}

impl Neg for &LinearTerm {
    type Output = LinearTerm;
    fn neg(self) -> LinearTerm {
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
            constant: -&self.constant,
        }
    }
}

impl Neg for LinearTerm {
    type Output = LinearTerm;
    fn neg(self) -> LinearTerm {
        -&self
    }
}

impl Mul<&Rational> for &LinearTerm {
    type Output = LinearTerm;
    fn mul(self, k: &Rational) -> LinearTerm {
        self.scale(k)
    }
}
