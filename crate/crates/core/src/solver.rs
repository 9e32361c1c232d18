//! Horn-DLR recognition and satisfiability, and a brute-force oracle for
//! arbitrary CNF formulas.
//!
//! A Horn-DLR clause has any number of disequalities `p_i != 0` and at most
//! one weak inequality `p_0 <= 0`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::formula::{Clause, CnfFormula, Literal, Point, Relation};
use crate::lp::{cell_witness, entails_zero, lp_feasible, Polyhedron};
use crate::qe::{find_model, Group};
use crate::term::LinearTerm;
use crate::Limits;

/// A CNF formula known to be Horn-DLR. Obtained through
/// [`recognize_horn_dlr`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornDlrFormula {
    cnf: CnfFormula,
}

impl HornDlrFormula {
    pub fn cnf(&self) -> &CnfFormula {
        &self.cnf
    }

    pub fn into_cnf(self) -> CnfFormula {
        self.cnf
    }

    /// Conjunction with further clauses, re-checked for the Horn shape.
    pub fn and(&self, more: &CnfFormula) -> std::result::Result<HornDlrFormula, Rejection> {
        let cnf = self.cnf.and(more);
        recognize_horn_dlr(&cnf).map_err(|mut r| {
            r.clause -= self.cnf.0.len().min(r.clause);
            r
        })
    }

    /// Appends unit clauses `t <= 0`; always stays Horn-DLR.
    pub fn with_units(&self, weak: impl IntoIterator<Item = LinearTerm>) -> HornDlrFormula {
        let mut cnf = self.cnf.clone();
        cnf.0.extend(weak.into_iter().map(|t| Clause::unit(Literal::leq(t))));
        HornDlrFormula { cnf }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectionReason {
    /// `<` or `=` literal; run the formula through a standard definition first.
    UnsupportedRelation(Relation),
    /// More than one `<=` literal in the clause.
    SeveralInequalities(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    /// Index of the offending clause.
    pub clause: usize,
    pub reason: RejectionReason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            RejectionReason::UnsupportedRelation(r) => {
                write!(f, "clause {} contains a `{}` literal", self.clause + 1, r.symbol())
            }
            RejectionReason::SeveralInequalities(n) => {
                write!(f, "clause {} has {} non-disequality literals", self.clause + 1, n)
            }
        }
    }
}

pub fn recognize_horn_dlr(f: &CnfFormula) -> std::result::Result<HornDlrFormula, Rejection> {
    for (i, clause) in f.0.iter().enumerate() {
        if let Some(l) = clause
            .0
            .iter()
            .find(|l| matches!(l.rel, Relation::LtZero | Relation::EqZero))
        {
            return Err(Rejection {
                clause: i,
                reason: RejectionReason::UnsupportedRelation(l.rel),
            });
        }
        let weak = clause.0.iter().filter(|l| l.rel == Relation::LeqZero).count();
        if weak > 1 {
            return Err(Rejection {
                clause: i,
                reason: RejectionReason::SeveralInequalities(weak),
            });
        }
    }
    Ok(HornDlrFormula { cnf: f.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Unsat,
    Sat(Point),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn witness(&self) -> Option<&Point> {
        match self {
            SatResult::Sat(x) => Some(x),
            SatResult::Unsat => None,
        }
    }
}

fn checked_witness(f: &CnfFormula, mut x: Point) -> SatResult {
    x.complete(&f.vars());
    assert!(
        f.eval(&x).expect("witness is complete"),
        "internal error: satisfying point {x} fails re-evaluation"
    );
    SatResult::Sat(x)
}

/// Unit propagation with LP entailment.
///
/// `U` collects the `<=` units. A disequality `p != 0` is blocked when
/// `U` entails `p = 0`. A clause whose disequalities are all blocked fires:
/// its inequality joins `U`, or the formula is unsatisfiable if it has none.
/// At the fixpoint every open clause keeps an unblocked disequality and a
/// point of `U` avoiding all chosen hyperplanes is a model.
pub fn horn_dlr_sat(f: &HornDlrFormula) -> SatResult {
    let clauses = &f.cnf.0;
    let mut units: Vec<LinearTerm> = Vec::new();
    let mut fired = vec![false; clauses.len()];
    // Blocking is monotone in U, so a blocked literal stays blocked.
    let mut blocked: BTreeSet<(usize, usize)> = BTreeSet::new();

    'propagate: loop {
        let u = Polyhedron::from_weak(units.iter().cloned());
        if lp_feasible(&u).is_none() {
            return SatResult::Unsat;
        }
        for (ci, clause) in clauses.iter().enumerate() {
            if fired[ci] {
                continue;
            }
            let mut all_blocked = true;
            for (li, l) in clause.0.iter().enumerate() {
                if l.rel != Relation::NeqZero || blocked.contains(&(ci, li)) {
                    continue;
                }
                if entails_zero(&u, &l.term).expect("U is closed and feasible") {
                    blocked.insert((ci, li));
                } else {
                    all_blocked = false;
                    break;
                }
            }
            if all_blocked {
                match clause.0.iter().find(|l| l.rel == Relation::LeqZero) {
                    Some(l) => {
                        units.push(l.term.clone());
                        fired[ci] = true;
                        continue 'propagate;
                    }
                    None => return SatResult::Unsat,
                }
            }
        }
        break;
    }

    let mut cell: Vec<Literal> = units.iter().map(|t| Literal::leq(t.clone())).collect();
    for (ci, clause) in clauses.iter().enumerate() {
        if fired[ci] {
            continue;
        }
        let chosen = clause
            .0
            .iter()
            .enumerate()
            .find(|(li, l)| l.rel == Relation::NeqZero && !blocked.contains(&(ci, *li)))
            .map(|(_, l)| l.clone())
            .expect("an open clause keeps an unblocked disequality");
        cell.push(chosen);
    }
    let x = cell_witness(&cell).expect("U avoids finitely many hyperplanes none of which contain it");
    checked_witness(&f.cnf, x)
}

/// Tries every one-literal-per-clause selection, splitting each `p != 0`
/// into `p < 0` and `-p < 0`, and tests each selection with the LP.
/// Partial selections are pruned as soon as their LP is infeasible; the
/// search visits at most `limits.selections` nodes.
pub fn exhaustive_sat(f: &CnfFormula, limits: &Limits) -> Result<SatResult> {
    let groups: Vec<Group> =
        f.0.iter()
            .map(|c| {
                c.0.iter()
                    .flat_map(|l| match l.rel {
                        Relation::NeqZero => vec![vec![Literal::lt(l.term.clone())], vec![Literal::lt(-&l.term)]],
                        _ => vec![vec![l.clone()]],
                    })
                    .collect()
            })
            .collect();
    match find_model(&groups, limits.selections, "enumerating literal selections")? {
        Some(x) => Ok(checked_witness(f, x)),
        None => Ok(SatResult::Unsat),
    }
}
