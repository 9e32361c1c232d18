//! Constructive reductions into `CSP(R; x+y=z, <=, {1})`, optionally
//! extended by one user relation.

mod hardness;
mod pp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use hardness::{
    band, band_points, brute_force_one_in_three, excluded_interval_params, project_to_unary, reduce_one_in_three,
    rescaled_relation, ExclusionParams, OneInThreeInstance, BRUTE_FORCE_VARIABLES,
};
pub use pp::{compile_linear_equation, lp_to_csp};

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Formula, Literal};
use crate::lp::{lp_feasible, Polyhedron};
use crate::qe::to_cnf;
use crate::rational::int;
use crate::solver::{exhaustive_sat, SatResult};
use crate::term::LinearTerm;
use crate::var::VarId;
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `x + y = z`
    Plus(VarId, VarId, VarId),
    /// `x = 1`
    One(VarId),
    /// `x <= y`
    Leq(VarId, VarId),
    /// The instance's user relation applied to the arguments.
    Rel(Vec<VarId>),
}

impl Atom {
    pub fn vars(&self) -> Vec<&VarId> {
        match self {
            Atom::Plus(x, y, z) => vec![x, y, z],
            Atom::One(x) => vec![x],
            Atom::Leq(x, y) => vec![x, y],
            Atom::Rel(args) => args.iter().collect(),
        }
    }

    /// The atom as a literal; `None` for a user-relation atom.
    pub fn literal(&self) -> Option<Literal> {
        let v = LinearTerm::var;
        Some(match self {
            Atom::Plus(x, y, z) => Literal::eq(v(x) + v(y) - v(z)),
            Atom::One(x) => Literal::eq(v(x) - LinearTerm::constant(int(1))),
            Atom::Leq(x, y) => Literal::leq(v(x) - v(y)),
            Atom::Rel(_) => return None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Plus(x, y, z) => write!(f, "plus {x} {y} {z}"),
            Atom::One(x) => write!(f, "one {x}"),
            Atom::Leq(x, y) => write!(f, "leq {x} {y}"),
            Atom::Rel(args) => {
                f.write_str("rel")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
        }
    }
}

/// A named relation given by a formula over its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserRelation {
    pub name: String,
    pub params: Vec<VarId>,
    pub formula: Formula,
}

impl UserRelation {
    pub fn new(name: impl Into<String>, params: Vec<VarId>, formula: Formula) -> Result<Self> {
        let declared: BTreeSet<VarId> = params.iter().cloned().collect();
        if declared.len() != params.len() {
            return Err(Error::InvalidArgument("repeated relation parameter".into()));
        }
        if let Some(extra) = formula.vars().into_iter().find(|v| !declared.contains(v)) {
            return Err(Error::InvalidArgument(format!(
                "relation formula mentions `{extra}`, which is not a parameter"
            )));
        }
        Ok(UserRelation {
            name: name.into(),
            params,
            formula,
        })
    }

    /// The relation's formula with parameters replaced by `args`.
    pub fn instantiate(&self, args: &[VarId]) -> Result<Formula> {
        if args.len() != self.params.len() {
            return Err(Error::InvalidArgument(format!(
                "relation `{}` takes {} arguments, got {}",
                self.name,
                self.params.len(),
                args.len()
            )));
        }
        let map: BTreeMap<VarId, VarId> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        Ok(self.formula.rename(&map))
    }
}

/// A conjunction of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CspInstance {
    pub variables: Vec<VarId>,
    pub constraints: Vec<Atom>,
    pub relation: Option<UserRelation>,
}

impl CspInstance {
    pub fn new(constraints: Vec<Atom>, relation: Option<UserRelation>) -> Result<Self> {
        let mut vars = BTreeSet::new();
        for a in &constraints {
            if let Atom::Rel(args) = a {
                let Some(r) = &relation else {
                    return Err(Error::InvalidArgument("relation atom without a relation".into()));
                };
                if args.len() != r.params.len() {
                    return Err(Error::InvalidArgument(format!(
                        "relation `{}` takes {} arguments, got {}",
                        r.name,
                        r.params.len(),
                        args.len()
                    )));
                }
            }
            vars.extend(a.vars().into_iter().cloned());
        }
        Ok(CspInstance {
            variables: vars.into_iter().collect(),
            constraints,
            relation,
        })
    }

    /// The instance as a CNF formula over its variables.
    pub fn to_cnf(&self, limits: &Limits) -> Result<CnfFormula> {
        let mut clauses = Vec::new();
        for a in &self.constraints {
            match (a.literal(), a) {
                (Some(l), _) => clauses.push(Clause::unit(l)),
                (None, Atom::Rel(args)) => {
                    let r = self.relation.as_ref().expect("checked on construction");
                    match r.instantiate(args)? {
                        Formula::Cnf(c) => clauses.extend(c.0),
                        Formula::Dnf(d) => clauses.extend(to_cnf(&d, limits)?.0),
                    }
                }
                (None, _) => unreachable!(),
            }
        }
        Ok(CnfFormula(clauses))
    }

    /// Exact satisfiability: linear programming when no user relation is
    /// used, the brute-force selection oracle otherwise.
    pub fn satisfiable(&self, limits: &Limits) -> Result<SatResult> {
        if self.constraints.iter().all(|a| !matches!(a, Atom::Rel(_))) {
            let mut p = Polyhedron::new();
            for a in &self.constraints {
                p.push_literal(&a.literal().expect("no relation atoms"));
            }
            return Ok(match lp_feasible(&p) {
                Some(mut x) => {
                    x.complete(&self.variables);
                    SatResult::Sat(x)
                }
                None => SatResult::Unsat,
            });
        }
        exhaustive_sat(&self.to_cnf(limits)?, limits)
    }
}

impl fmt::Display for CspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.constraints {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// `exists` `atoms`: a primitive-positive formula over `free`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PpFormula {
    pub free: Vec<VarId>,
    pub exists: Vec<VarId>,
    pub atoms: Vec<Atom>,
}

impl PpFormula {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// The atoms as an equality system over free and existential variables.
    pub fn to_polyhedron(&self) -> Polyhedron {
        let mut p = Polyhedron::new();
        for a in &self.atoms {
            p.push_literal(&a.literal().expect("pp formulas have no relation atoms"));
        }
        p
    }
}
