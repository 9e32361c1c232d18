//! The hardness reduction from Positive One-In-Three 3SAT through a unary
//! relation that excludes an interval.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{compile_linear_equation, Atom, CspInstance, UserRelation};
use crate::error::{Error, Result};
use crate::formula::{DnfFormula, Formula, Literal, Point, QuantifiedFormula};
use crate::geometry::{decompose_unary, segment_profile, Piece, SegmentProfile, UnaryDecomposition};
use crate::qe::eliminate_exists;
use crate::rational::{int, rat, Rational};
use crate::term::LinearTerm;
use crate::var::{VarId, VarPool};
use crate::Limits;

/// Width of the end bands of the rescaled relation: points only in
/// `[0, 1/7]` and `[6/7, 1]`.
pub fn band() -> Rational {
    rat(1, 7)
}

/// Largest number of variables the brute-force oracle accepts.
pub const BRUTE_FORCE_VARIABLES: usize = 20;

/// Positive One-In-Three 3SAT: each clause needs exactly one true variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OneInThreeInstance {
    pub variables: Vec<String>,
    pub clauses: Vec<[String; 3]>,
}

impl OneInThreeInstance {
    pub fn new<S: AsRef<str>>(clauses: impl IntoIterator<Item = [S; 3]>) -> Self {
        let mut inst = OneInThreeInstance::default();
        for c in clauses {
            let names = [0, 1, 2].map(|i| c[i].as_ref().to_string());
            for n in &names {
                if !inst.variables.contains(n) {
                    inst.variables.push(n.clone());
                }
            }
            inst.clauses.push(names);
        }
        inst
    }

    pub fn satisfied_by(&self, assignment: &BTreeMap<String, bool>) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .filter(|v| assignment.get(*v).copied().unwrap_or(false))
                .count()
                == 1
        })
    }
}

impl fmt::Display for OneInThreeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for [a, b, c] in &self.clauses {
            writeln!(f, "{a} {b} {c}")?;
        }
        Ok(())
    }
}

/// Exhaustive search over all truth assignments.
pub fn brute_force_one_in_three(phi: &OneInThreeInstance) -> Result<Option<BTreeMap<String, bool>>> {
    let n = phi.variables.len();
    if n > BRUTE_FORCE_VARIABLES {
        return Err(Error::SizeLimit {
            limit: BRUTE_FORCE_VARIABLES,
            during: "enumerating truth assignments",
        });
    }
    for mask in 0u32..(1u32 << n) {
        let assignment: BTreeMap<String, bool> = phi
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), mask >> i & 1 == 1))
            .collect();
        if phi.satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// The trace of `s` on the segment from `p` to `q`, as a quantifier-free
/// formula in `y` over `[0, 1]`, obtained by eliminating the coordinates.
pub fn project_to_unary(s: &Formula, p: &Point, q: &Point, y: &VarId, limits: &Limits) -> Result<DnfFormula> {
    let coords = s.vars();
    if coords.contains(y) {
        return Err(Error::InvalidArgument(format!("`{y}` already occurs in the relation")));
    }
    if p == q {
        return Err(Error::InvalidArgument("segment endpoints coincide".into()));
    }
    for (name, pt) in [("p", p), ("q", q)] {
        if !s.eval(pt)? {
            return Err(Error::WitnessNotInRelation(format!("{name} = {pt}")));
        }
    }
    let yt = LinearTerm::var(y);
    let mut extra = vec![Literal::leq(-&yt), Literal::leq(&yt - &LinearTerm::constant(int(1)))];
    for z in &coords {
        let pz = p.get(z).expect("evaluated above").clone();
        let qz = q.get(z).expect("evaluated above").clone();
        let along = LinearTerm::constant(pz.clone()) + yt.scale(&(qz - pz));
        extra.push(Literal::eq(LinearTerm::var(z) - along));
    }
    let matrix = s.and_literals(&extra);
    eliminate_exists(
        &QuantifiedFormula {
            prefix: coords.into_iter().collect(),
            matrix,
        },
        limits,
    )
}

/// Parameters of an excluded interval of a unary relation on `[0, 1]` and
/// the window that rescales it onto the middle of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionParams {
    pub var: VarId,
    /// `[excluded_lo, excluded_hi]` contains no point of the relation.
    pub excluded_lo: Rational,
    pub excluded_hi: Rational,
    /// A fifth of the excluded length; both `[excluded_lo - margin,
    /// excluded_lo]` and `[excluded_hi, excluded_hi + margin]` meet the
    /// relation.
    pub margin: Rational,
    pub window_start: Rational,
    pub window_end: Rational,
    /// Always `1/7`.
    pub band: Rational,
}

impl ExclusionParams {
    /// Position in the original coordinate of `w` in the rescaled one.
    pub fn rescale(&self, w: &Rational) -> Rational {
        &self.window_start + (&self.window_end - &self.window_start) * w
    }

    /// Whether the rescaling sends `band` to `excluded_lo` and `1 - band`
    /// to `excluded_hi`, exactly.
    pub fn identity_holds(&self) -> bool {
        self.band == band()
            && self.rescale(&self.band) == self.excluded_lo
            && self.rescale(&(Rational::one() - &self.band)) == self.excluded_hi
    }

    /// Re-checks the three exclusion conditions against `u`; returns the
    /// first failing one.
    pub fn verify(&self, u: &Formula) -> Result<std::result::Result<(), String>> {
        if self.margin != (&self.excluded_hi - &self.excluded_lo) / int(5) {
            return Ok(Err("margin is not a fifth of the excluded length".into()));
        }
        let profile = unit_profile(u, &self.var)?;
        let inside = profile.inside_decomposition();
        let left = (&self.excluded_lo - &self.margin, self.excluded_lo.clone());
        let right = (self.excluded_hi.clone(), &self.excluded_hi + &self.margin);
        if !inside.meets_closed(&left.0, &left.1) {
            return Ok(Err("no point of the relation just below the excluded interval".into()));
        }
        if !inside.meets_closed(&right.0, &right.1) {
            return Ok(Err("no point of the relation just above the excluded interval".into()));
        }
        let gap = Piece::closed(self.excluded_lo.clone(), self.excluded_hi.clone());
        if !profile.outside.iter().any(|o| o.covers(&gap)) {
            return Ok(Err("the excluded interval meets the relation".into()));
        }
        if !self.identity_holds() {
            return Ok(Err("rescaling identity fails".into()));
        }
        Ok(Ok(()))
    }
}

fn unit_profile(u: &Formula, y: &VarId) -> Result<SegmentProfile> {
    let at = |v: i64| Point::from_iter([(y.clone(), int(v))]);
    segment_profile(u, &at(0), &at(1))
}

fn single_var(u: &Formula) -> Result<VarId> {
    let vars = u.vars();
    if vars.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "expected a unary relation, found {} variables",
            vars.len()
        )));
    }
    Ok(vars.into_iter().next().expect("one variable"))
}

/// Picks the longest gap of `u` inside `(0, 1)`, shrinks it by a hundredth
/// of its length at both ends and verifies the exclusion conditions.
pub fn excluded_interval_params(u: &Formula) -> Result<ExclusionParams> {
    let y = single_var(u)?;
    for v in [0, 1] {
        if !u.eval(&Point::from_iter([(y.clone(), int(v))]))? {
            return Err(Error::ConditionViolated(format!("{v} is not in the relation")));
        }
    }
    let decomposition = decompose_unary(u, &y)?;
    let zero = Rational::zero();
    let one = Rational::one();
    let mut best: Option<(Rational, Rational)> = None;
    for g in decomposition.gaps() {
        let (Some(lo), Some(hi)) = (g.lo.value(), g.hi.value()) else {
            continue;
        };
        if g.is_point() || *lo < zero || *hi > one {
            continue;
        }
        let longer = best.as_ref().is_none_or(|(a, b)| hi - lo > b - a);
        if longer {
            best = Some((lo.clone(), hi.clone()));
        }
    }
    let (g1, g2) = best.ok_or(Error::NoExcludedInterval)?;
    let shrink = (&g2 - &g1) / int(100);
    let excluded_lo = &g1 + &shrink;
    let excluded_hi = &g2 - &shrink;
    let margin = (&excluded_hi - &excluded_lo) / int(5);
    let params = ExclusionParams {
        var: y,
        window_start: &excluded_lo - &margin,
        window_end: &excluded_hi + &margin,
        excluded_lo,
        excluded_hi,
        margin,
        band: band(),
    };
    params.verify(u)?.map_err(Error::ConditionViolated)?;
    assert!(params.identity_holds(), "internal error: rescaling identity");
    Ok(params)
}

/// `u` rescaled to the window, restricted to `[0, 1]`, in the variable `w`.
pub fn rescaled_relation(u: &Formula, params: &ExclusionParams, w: &VarId) -> Formula {
    let wt = LinearTerm::var(w);
    let along =
        LinearTerm::constant(params.window_start.clone()) + wt.scale(&(&params.window_end - &params.window_start));
    u.substitute(&params.var, &along)
        .and_literals(&[Literal::leq(-&wt), Literal::leq(&wt - &LinearTerm::constant(int(1)))])
}

/// A point of the rescaled relation in the low band and one in the high
/// band: midpoints of the first and last pieces.
pub fn band_points(rescaled: &Formula, w: &VarId) -> Result<(Rational, Rational)> {
    let d = decompose_unary(rescaled, w)?;
    let missing = || Error::InvalidParams("rescaled relation misses an end band".into());
    let low = d.pieces.first().ok_or_else(missing)?.sample();
    let high = d.pieces.last().ok_or_else(missing)?.sample();
    if low > band() || high < Rational::one() - band() {
        return Err(missing());
    }
    Ok((low, high))
}

fn check_bands(d: &UnaryDecomposition) -> std::result::Result<(), String> {
    let b = band();
    let one = Rational::one();
    if d.meets_closed(&b, &(&one - &b)) {
        return Err("rescaled relation has points between the bands".into());
    }
    if !d.meets_closed(&Rational::zero(), &b) {
        return Err("rescaled relation has no point in the low band".into());
    }
    if !d.meets_closed(&(&one - &b), &one) {
        return Err("rescaled relation has no point in the high band".into());
    }
    Ok(())
}

/// Builds the CSP instance over `x+y=z`, `<=`, `{1}` and the rescaled
/// relation that is satisfiable iff `phi` is.
pub fn reduce_one_in_three(
    pool: &mut VarPool,
    phi: &OneInThreeInstance,
    u: &Formula,
    params: &ExclusionParams,
) -> Result<CspInstance> {
    if u.vars() != BTreeSet::from([params.var.clone()]) {
        return Err(Error::InvalidParams(format!(
            "relation must be unary in `{}`",
            params.var
        )));
    }
    params.verify(u)?.map_err(Error::InvalidParams)?;

    let vars: BTreeMap<&str, VarId> = phi.variables.iter().map(|n| (n.as_str(), pool.var(n))).collect();
    let w = pool.fresh("w");
    let rescaled = rescaled_relation(u, params, &w);
    check_bands(&decompose_unary(&rescaled, &w)?).map_err(Error::InvalidParams)?;
    let relation = UserRelation::new("U", vec![w], rescaled)?;

    let mut atoms: Vec<Atom> = phi
        .variables
        .iter()
        .map(|n| Atom::Rel(vec![vars[n.as_str()].clone()]))
        .collect();
    let lower = pool.fresh("lower");
    let upper = pool.fresh("upper");
    for (k, value) in [(&lower, rat(6, 7)), (&upper, rat(11, 7))] {
        let pin = BTreeMap::from([(k.clone(), Rational::one())]);
        atoms.extend(compile_linear_equation(pool, &pin, &value)?.atoms);
    }
    for clause in &phi.clauses {
        let sum = pool.fresh("sum");
        let mut coeffs: BTreeMap<VarId, Rational> = BTreeMap::new();
        for n in clause {
            *coeffs.entry(vars[n.as_str()].clone()).or_insert_with(Rational::zero) += Rational::one();
        }
        coeffs.insert(sum.clone(), -Rational::one());
        atoms.extend(compile_linear_equation(pool, &coeffs, &Rational::zero())?.atoms);
        atoms.push(Atom::Leq(lower.clone(), sum.clone()));
        atoms.push(Atom::Leq(sum, upper.clone()));
    }
    CspInstance::new(atoms, Some(relation))
}
