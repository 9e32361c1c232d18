//! Maximising a linear objective over a Horn-DLR formula.
//!
//! After removing disequalities that no model can satisfy, the clauses
//! without disequalities (all `<=` units) form a polyhedron `P'`. Its LP
//! maximum `K` is the supremum over the whole formula: unbounded on `P'`
//! means unbounded overall, and otherwise `K` is attained iff the formula
//! stays satisfiable together with `objective = K`.

use std::collections::BTreeSet;

use crate::formula::{Clause, CnfFormula, Literal, Point, Relation};
use crate::lp::{lp_optimize, LpOutcome, Polyhedron};
use crate::rational::{rat, Rational};
use crate::solver::{horn_dlr_sat, recognize_horn_dlr, HornDlrFormula, SatResult};
use crate::term::LinearTerm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlpProblem {
    pub formula: HornDlrFormula,
    pub objective: LinearTerm,
    pub threshold: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlpResult {
    Infeasible,
    Unbounded,
    Optimum {
        value: Rational,
        witness: Point,
    },
    /// `value` is the supremum but is not attained; `probe` is a model whose
    /// objective is at least `value - probe_gap`.
    Supremum {
        value: Rational,
        probe: Point,
        probe_gap: Rational,
    },
}

/// Gaps at which a supremum is probed; the last one is reported.
pub const SUPREMUM_PROBES: [(i64, i64); 3] = [(1, 1), (1, 10), (1, 100)];

fn canonical_diseq(l: &Literal) -> Literal {
    l.normalized()
}

/// Deletes every disequality `D` for which `f and D` is unsatisfiable.
/// Returns `None` when a clause loses all of its literals.
pub fn star_preprocess(f: &HornDlrFormula) -> Option<HornDlrFormula> {
    let mut distinct: Vec<Literal> = Vec::new();
    for l in f.cnf().literals() {
        if l.rel == Relation::NeqZero {
            let key = canonical_diseq(l);
            if !distinct.contains(&key) {
                distinct.push(key);
            }
        }
    }
    let mut dead: BTreeSet<Literal> = BTreeSet::new();
    for d in distinct {
        let with_d = f
            .and(&CnfFormula::units([d.clone()]))
            .expect("a disequality unit keeps the Horn shape");
        if !horn_dlr_sat(&with_d).is_sat() {
            dead.insert(d);
        }
    }
    if dead.is_empty() {
        return Some(f.clone());
    }
    let mut clauses = Vec::with_capacity(f.cnf().0.len());
    for c in &f.cnf().0 {
        let kept: Vec<Literal> =
            c.0.iter()
                .filter(|l| l.rel != Relation::NeqZero || !dead.contains(&canonical_diseq(l)))
                .cloned()
                .collect();
        if kept.is_empty() && !c.0.is_empty() {
            return None;
        }
        clauses.push(Clause(kept));
    }
    Some(recognize_horn_dlr(&CnfFormula(clauses)).expect("deleting literals keeps the Horn shape"))
}

fn equals(objective: &LinearTerm, k: &Rational) -> [LinearTerm; 2] {
    let shifted = objective - &LinearTerm::constant(k.clone());
    [shifted.clone(), -shifted]
}

/// Model of `formula and objective >= level`, if one exists.
pub fn probe_at_least(formula: &HornDlrFormula, objective: &LinearTerm, level: &Rational) -> SatResult {
    horn_dlr_sat(&formula.with_units([&LinearTerm::constant(level.clone()) - objective]))
}

pub fn glp_solve(p: &GlpProblem) -> GlpResult {
    if !horn_dlr_sat(&p.formula).is_sat() {
        return GlpResult::Infeasible;
    }
    let Some(phi) = star_preprocess(&p.formula) else {
        return GlpResult::Infeasible;
    };
    let units = phi
        .cnf()
        .0
        .iter()
        .filter(|c| c.0.iter().all(|l| l.rel != Relation::NeqZero))
        .map(|c| {
            debug_assert!(c.0.len() == 1 && c.0[0].rel == Relation::LeqZero);
            c.0[0].term.clone()
        });
    let polyhedron = Polyhedron::from_weak(units);
    let k = match lp_optimize(&p.objective, &polyhedron).expect("weak rows only") {
        LpOutcome::Unbounded { .. } => return GlpResult::Unbounded,
        LpOutcome::Optimum { value, .. } => value,
        LpOutcome::Infeasible | LpOutcome::Feasible(_) => {
            unreachable!("the unit part of a satisfiable formula is feasible")
        }
    };
    match horn_dlr_sat(&phi.with_units(equals(&p.objective, &k))) {
        SatResult::Sat(witness) => GlpResult::Optimum { value: k, witness },
        SatResult::Unsat => {
            let (n, d) = SUPREMUM_PROBES[SUPREMUM_PROBES.len() - 1];
            let gap = rat(n, d);
            let level = &k - &gap;
            let probe = match probe_at_least(&phi, &p.objective, &level) {
                SatResult::Sat(x) => x,
                SatResult::Unsat => panic!("internal error: no model within {gap} of the supremum"),
            };
            GlpResult::Supremum {
                value: k,
                probe,
                probe_gap: gap,
            }
        }
    }
}

/// Whether some model reaches `objective >= threshold`.
pub fn glp_decide(p: &GlpProblem) -> Option<bool> {
    let m = p.threshold.as_ref()?;
    Some(decide_from(&glp_solve(p), m))
}

pub fn decide_from(result: &GlpResult, threshold: &Rational) -> bool {
    match result {
        GlpResult::Infeasible => false,
        GlpResult::Unbounded => true,
        GlpResult::Optimum { value, .. } => threshold <= value,
        GlpResult::Supremum { value, .. } => threshold < value,
    }
}

impl GlpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            GlpResult::Optimum { value, .. } | GlpResult::Supremum { value, .. } => Some(value),
            _ => None,
        }
    }
}
