//! Exact-arithmetic toolkit for constraint problems over semi-linear relations.
//!
//! Everything here works on arbitrary-precision rationals; no floating-point
//! value takes part in any verdict. The crate is organised bottom-up:
//!
//! - [`rational`], [`var`], [`term`], [`formula`]: scalars, variables, linear
//!   terms, literals and CNF/DNF formulas with exact evaluation.
//! - [`lp`]: two-phase Bland simplex with strict-inequality support.
//! - [`qe`]: normal forms, standard definitions, existential quantifier
//!   elimination and exact formula equivalence.
//! - [`solver`]: Horn-DLR recognition and satisfiability, plus a brute-force
//!   oracle for arbitrary CNF input.
//! - [`glp`]: linear objectives over Horn-DLR formulas
//!   (unbounded / optimum / supremum).
//! - [`geometry`]: closures, envelopes, convex-union tests, unary
//!   decompositions, segment profiles and essential-convexity verdicts.
//! - [`reductions`]: pp-definitions of linear equations over
//!   `(R; x+y=z, <=, {1})` and the One-In-Three hardness reduction.

pub mod error;
pub mod formula;
pub mod geometry;
pub mod glp;
pub mod lp;
pub mod qe;
pub mod rational;
pub mod reductions;
pub mod solver;
pub mod term;
pub mod var;

pub use error::{Error, Result};
pub use formula::{
    eval_formula, Clause, CnfFormula, DnfCell, DnfFormula, Formula, Literal, Point, QuantifiedFormula, Relation,
};
pub use rational::Rational;
pub use term::{eval_term, LinearTerm};
pub use var::{VarId, VarPool};

/// Work budgets for the operations whose output can grow exponentially.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of DNF cells (or CNF clauses) materialised, and the
    /// maximum number of search nodes visited by an equivalence check.
    pub cells: usize,
    /// Maximum number of search nodes for the brute-force satisfiability oracle.
    pub selections: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cells: 100_000,
            selections: 1_000_000,
        }
    }
}
