//! Primitive-positive definitions of rational linear equations from
//! `x + y = z` and `x = 1`, and the LP-to-CSP translation built on them.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::{Atom, CspInstance, PpFormula};
use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, Rational};
use crate::term::LinearTerm;
use crate::var::{VarId, VarPool};

struct Builder<'a> {
    pool: &'a mut VarPool,
    atoms: Vec<Atom>,
    exists: Vec<VarId>,
    zero: VarId,
}

impl<'a> Builder<'a> {
    fn new(pool: &'a mut VarPool) -> Self {
        let zero = pool.fresh("zero");
        Builder {
            pool,
            atoms: vec![Atom::Plus(zero.clone(), zero.clone(), zero.clone())],
            exists: vec![zero.clone()],
            zero,
        }
    }

    fn fresh(&mut self, prefix: &str) -> VarId {
        let v = self.pool.fresh(prefix);
        self.exists.push(v.clone());
        v
    }

    fn sum(&mut self, x: &VarId, y: &VarId) -> VarId {
        let z = self.fresh("s");
        self.atoms.push(Atom::Plus(x.clone(), y.clone(), z.clone()));
        z
    }

    /// A variable equal to `n * x` for a positive integer `n`: doubling
    /// chain `x, 2x, 4x, ...` and a running sum over the set bits of `n`.
    fn multiple(&mut self, n: &BigInt, x: &VarId) -> VarId {
        let bits = n.magnitude().bits();
        let mut power = x.clone();
        let mut acc: Option<VarId> = None;
        for i in 0..bits {
            if i > 0 {
                let next = self.fresh("d");
                self.atoms.push(Atom::Plus(power.clone(), power.clone(), next.clone()));
                power = next;
            }
            if n.magnitude().bit(i) {
                acc = Some(match acc {
                    None => power.clone(),
                    Some(a) => self.sum(&a, &power),
                });
            }
        }
        acc.expect("n is positive")
    }

    fn total(&mut self, parts: &[VarId]) -> VarId {
        let mut iter = parts.iter();
        let Some(first) = iter.next() else {
            return self.zero.clone();
        };
        let mut acc = first.clone();
        for p in iter {
            acc = self.sum(&acc, p);
        }
        acc
    }
}

/// A pp-formula defining `{x | sum coeffs[v] * v = rhs}` over the
/// variables of `coeffs`. Denominators are cleared by their least common
/// multiple; positive and negative terms are summed on opposite sides and
/// the constant is built from a variable pinned to 1.
pub fn compile_linear_equation(
    pool: &mut VarPool,
    coeffs: &BTreeMap<VarId, Rational>,
    rhs: &Rational,
) -> Result<PpFormula> {
    if coeffs.values().all(Zero::is_zero) {
        return Err(Error::AllZeroCoefficients);
    }
    let scale = Rational::from_integer(lcm_of_denominators(coeffs.values().chain([rhs])));
    let integer = |r: &Rational| (r * &scale).to_integer();

    let mut b = Builder::new(pool);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (v, c) in coeffs {
        let n = integer(c);
        match n.sign() {
            Sign::NoSign => {}
            Sign::Plus => left.push(b.multiple(&n, v)),
            Sign::Minus => right.push(b.multiple(&n.abs(), v)),
        }
    }
    let n0 = integer(rhs);
    if !n0.is_zero() {
        let one = b.fresh("one");
        b.atoms.push(Atom::One(one.clone()));
        let k = b.multiple(&n0.abs(), &one);
        if n0.is_positive() {
            right.push(k);
        } else {
            left.push(k);
        }
    }
    let l = b.total(&left);
    let r = b.total(&right);
    let zero = b.zero.clone();
    b.atoms.push(Atom::Plus(r, zero, l));
    Ok(PpFormula {
        free: coeffs.keys().cloned().collect(),
        exists: b.exists,
        atoms: b.atoms,
    })
}

/// Translates `terms[i] <= bounds[i]` into atoms: each left-hand side is
/// named by a fresh variable through a compiled equation and compared with
/// a fresh variable pinned to the bound.
pub fn lp_to_csp(pool: &mut VarPool, inequalities: &[(LinearTerm, Rational)]) -> Result<CspInstance> {
    let mut atoms = Vec::new();
    for (term, bound) in inequalities {
        let y = pool.fresh("lhs");
        let mut coeffs: BTreeMap<VarId, Rational> = term.coeffs().clone();
        coeffs.insert(y.clone(), -Rational::from_integer(1.into()));
        let bound = bound - term.constant_part();
        atoms.extend(compile_linear_equation(pool, &coeffs, &Rational::zero())?.atoms);
        let k = pool.fresh("bound");
        let pin = BTreeMap::from([(k.clone(), Rational::from_integer(1.into()))]);
        atoms.extend(compile_linear_equation(pool, &pin, &bound)?.atoms);
        atoms.push(Atom::Leq(y, k));
    }
    CspInstance::new(atoms, None)
}
