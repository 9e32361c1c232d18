//! Normal forms, standard definitions, quantifier elimination and exact
//! equivalence for quantifier-free linear formulas.
//!
//! Most operations here reduce to one search problem: a conjunction of
//! groups, each group a disjunction of conjunctions of literals. The search
//! walks one alternative per group depth-first, pruning partial cells whose
//! polyhedral part is infeasible, and tests complete cells with
//! [`cell_witness`]. A CNF clause is a group of single-literal alternatives;
//! a DNF formula is one group whose alternatives are its cells.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, DnfCell, DnfFormula, Formula, Literal, Point, QuantifiedFormula, Relation};
use crate::lp::{cell_witness, lp_feasible, Polyhedron};
use crate::term::LinearTerm;
use crate::var::VarId;
use crate::Limits;

pub(crate) type Group = Vec<Vec<Literal>>;

fn groups_of(f: &Formula) -> Vec<Group> {
    match f {
        Formula::Cnf(cnf) => cnf
            .0
            .iter()
            .map(|c| c.0.iter().map(|l| vec![l.clone()]).collect())
            .collect(),
        Formula::Dnf(dnf) => vec![dnf.0.iter().map(|c| c.0.clone()).collect()],
    }
}

struct Search<'a> {
    groups: Vec<&'a Group>,
    base: Vec<Literal>,
    limit: usize,
    nodes: usize,
    during: &'static str,
    /// Collect every satisfiable leaf instead of stopping at the first one.
    exhaustive: bool,
    found: Vec<(Vec<Literal>, Point)>,
}

impl<'a> Search<'a> {
    fn new(groups: &'a [Group], limit: usize, during: &'static str, exhaustive: bool) -> Option<Self> {
        let mut base = Vec::new();
        let mut branching = Vec::new();
        for g in groups {
            match g.len() {
                0 => return None,
                1 => {
                    for l in &g[0] {
                        if !base.contains(l) {
                            base.push(l.clone());
                        }
                    }
                }
                _ => branching.push(g),
            }
        }
        Some(Search {
            groups: branching,
            base,
            limit,
            nodes: 0,
            during,
            exhaustive,
            found: Vec::new(),
        })
    }

    fn run(&mut self) -> Result<()> {
        let mut cell = std::mem::take(&mut self.base);
        self.descend(0, &mut cell, true)?;
        Ok(())
    }

    fn polyhedral_part_feasible(cell: &[Literal]) -> bool {
        let mut p = Polyhedron::new();
        for l in cell {
            if !p.push_literal(l) && l.constant_value() == Some(false) {
                return false;
            }
        }
        lp_feasible(&p).is_some()
    }

    /// Returns `true` once a model was found and the search should stop.
    fn descend(&mut self, depth: usize, cell: &mut Vec<Literal>, changed: bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SizeLimit {
                limit: self.limit,
                during: self.during,
            });
        }
        if changed && depth < self.groups.len() && !Self::polyhedral_part_feasible(cell) {
            return Ok(false);
        }
        if depth == self.groups.len() {
            if let Some(x) = cell_witness(cell) {
                self.found.push((cell.clone(), x));
                return Ok(!self.exhaustive);
            }
            return Ok(false);
        }
        let group = self.groups[depth];
        // An alternative already implied syntactically makes the others redundant.
        if group.iter().any(|alt| alt.iter().all(|l| cell.contains(l))) {
            return self.descend(depth + 1, cell, false);
        }
        for alt in group {
            let before = cell.len();
            for l in alt {
                if !cell.contains(l) {
                    cell.push(l.clone());
                }
            }
            let stop = self.descend(depth + 1, cell, true)?;
            cell.truncate(before);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// A point satisfying the conjunction of `groups`, if any.
pub(crate) fn find_model(groups: &[Group], limit: usize, during: &'static str) -> Result<Option<Point>> {
    let Some(mut search) = Search::new(groups, limit, during, false) else {
        return Ok(None);
    };
    search.run()?;
    Ok(search.found.pop().map(|(_, x)| x))
}

/// Every satisfiable cell of the expansion of `groups`.
fn all_cells(groups: &[Group], limits: &Limits, during: &'static str) -> Result<Vec<Vec<Literal>>> {
    let Some(mut search) = Search::new(groups, limits.cells, during, true) else {
        return Ok(Vec::new());
    };
    search.run()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (cell, _) in search.found {
        let mut key = cell.clone();
        key.sort();
        if seen.insert(key) {
            out.push(cell);
        }
    }
    Ok(out)
}

/// Whether the formula has a model.
pub fn satisfiable(f: &Formula, limits: &Limits) -> Result<Option<Point>> {
    let mut x = find_model(&groups_of(f), limits.cells, "searching for a model")?;
    if let Some(x) = x.as_mut() {
        x.complete(&f.vars());
    }
    Ok(x)
}

/// Distributes a CNF into DNF; unsatisfiable cells are dropped.
pub fn to_dnf(f: &CnfFormula, limits: &Limits) -> Result<DnfFormula> {
    let groups = groups_of(&Formula::Cnf(f.clone()));
    let cells = all_cells(&groups, limits, "expanding to DNF")?;
    Ok(DnfFormula(cells.into_iter().map(DnfCell).collect()))
}

/// Any formula as DNF (a DNF input only loses its unsatisfiable cells).
pub fn dnf_of(f: &Formula, limits: &Limits) -> Result<DnfFormula> {
    match f {
        Formula::Cnf(c) => to_dnf(c, limits),
        Formula::Dnf(d) => Ok(DnfFormula(
            d.0.iter().filter(|c| cell_witness(&c.0).is_some()).cloned().collect(),
        )),
    }
}

fn tautological(clause: &[Literal]) -> bool {
    let negated: Vec<Literal> = clause.iter().map(Literal::negate).collect();
    cell_witness(&negated).is_none()
}

/// Distributes a DNF into CNF; tautological and subsumed clauses are dropped.
pub fn to_cnf(f: &DnfFormula, limits: &Limits) -> Result<CnfFormula> {
    let mut clauses: Vec<Vec<Literal>> = vec![Vec::new()];
    for cell in &f.0 {
        let mut next: Vec<Vec<Literal>> = Vec::new();
        for clause in &clauses {
            for l in &cell.0 {
                let mut c = clause.clone();
                if !c.contains(l) {
                    c.push(l.clone());
                }
                if !tautological(&c) {
                    next.push(c);
                }
                if next.len() > limits.cells {
                    return Err(Error::SizeLimit {
                        limit: limits.cells,
                        during: "expanding to CNF",
                    });
                }
            }
        }
        clauses = remove_subsumed(next);
    }
    Ok(CnfFormula(clauses.into_iter().map(Clause).collect()))
}

fn remove_subsumed(mut clauses: Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
    let mut keep = vec![true; clauses.len()];
    for i in 0..clauses.len() {
        for j in 0..clauses.len() {
            if i == j || !keep[j] {
                continue;
            }
            let sub = clauses[j].iter().all(|l| clauses[i].contains(l));
            let same = clauses[i].len() == clauses[j].len();
            // j subsumes i; among identical clauses keep the first
            if sub && (!same || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut k = 0;
    clauses.retain(|_| {
        k += 1;
        keep[k - 1]
    });
    clauses
}

/// Result of an exact equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A point where exactly one of the two formulas holds.
    Differ(Point),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Decides `f <=> g` by searching `(f and not g) or (not f and g)`.
pub fn equivalent(f: &Formula, g: &Formula, limits: &Limits) -> Result<Equivalence> {
    let mut vars = f.vars();
    vars.extend(g.vars());
    for (a, b) in [(f, g), (g, f)] {
        let mut groups = groups_of(a);
        groups.extend(groups_of(&b.negate()));
        if let Some(mut x) = find_model(&groups, limits.cells, "checking equivalence")? {
            x.complete(&vars);
            debug_assert_ne!(f.eval(&x).ok(), g.eval(&x).ok());
            return Ok(Equivalence::Differ(x));
        }
    }
    Ok(Equivalence::Equivalent)
}

/// A CNF with only `t <= 0` / `t != 0` literals from which no literal can be
/// removed without changing the defined set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardDefinition {
    pub cnf: CnfFormula,
    pub minimal: bool,
}

/// Rewrites `t < 0` into `t <= 0` and `t != 0` (one clause each) and
/// `t = 0` into `t <= 0` and `-t <= 0`.
pub fn split_to_standard_literals(f: &CnfFormula) -> CnfFormula {
    let mut out = Vec::new();
    for clause in &f.0 {
        let mut variants: Vec<Vec<Literal>> = vec![Vec::new()];
        for l in &clause.0 {
            let options = match l.rel {
                Relation::LeqZero | Relation::NeqZero => vec![l.clone()],
                Relation::LtZero => vec![Literal::leq(l.term.clone()), Literal::neq(l.term.clone())],
                Relation::EqZero => vec![Literal::leq(l.term.clone()), Literal::leq(-&l.term)],
            };
            variants = variants
                .into_iter()
                .flat_map(|v| {
                    options.iter().map(move |o| {
                        let mut v = v.clone();
                        v.push(o.clone());
                        v
                    })
                })
                .collect();
        }
        out.extend(variants.into_iter().map(Clause));
    }
    CnfFormula(out)
}

fn cnf_groups(clauses: &[Clause], skip: Option<usize>) -> Vec<Group> {
    clauses
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(_, c)| c.0.iter().map(|l| vec![l.clone()]).collect())
        .collect()
}

/// Splits strict and equality literals, then greedily removes clauses and
/// literals (clause order, then literal order) while the set is unchanged,
/// repeating until a full pass removes nothing.
pub fn standard_definition(f: &CnfFormula, limits: &Limits) -> Result<StandardDefinition> {
    let mut clauses = split_to_standard_literals(f).0;
    loop {
        let mut changed = false;
        let mut ci = 0;
        while ci < clauses.len() {
            // Dropping clause C keeps the set iff (F - C) and not C is unsatisfiable.
            let mut groups = cnf_groups(&clauses, Some(ci));
            groups.push(vec![clauses[ci].0.iter().map(Literal::negate).collect()]);
            if find_model(&groups, limits.cells, "minimising a standard definition")?.is_none() {
                clauses.remove(ci);
                changed = true;
                continue;
            }
            let mut li = 0;
            while li < clauses[ci].0.len() {
                // Dropping literal l from C keeps the set iff F and not (C - l) is unsatisfiable.
                let mut groups = cnf_groups(&clauses, None);
                let negated: Vec<Literal> = clauses[ci]
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != li)
                    .map(|(_, l)| l.negate())
                    .collect();
                groups.push(vec![negated]);
                if find_model(&groups, limits.cells, "minimising a standard definition")?.is_none() {
                    clauses[ci].0.remove(li);
                    changed = true;
                } else {
                    li += 1;
                }
            }
            ci += 1;
        }
        if !changed {
            break;
        }
    }
    Ok(StandardDefinition {
        cnf: CnfFormula(clauses),
        minimal: true,
    })
}

/// Removes the existential prefix (innermost variable first), returning a
/// quantifier-free DNF over the remaining variables.
pub fn eliminate_exists(f: &QuantifiedFormula, limits: &Limits) -> Result<DnfFormula> {
    let mut cells: Vec<Vec<Literal>> = dnf_of(&f.matrix, limits)?.0.into_iter().map(|c| c.0).collect();
    for v in f.prefix.iter().rev() {
        let mut next = Vec::new();
        let mut seen = BTreeSet::new();
        for cell in &cells {
            for out in eliminate_var(cell, v) {
                let mut key = out.clone();
                key.sort();
                if seen.contains(&key) || cell_witness(&out).is_none() {
                    continue;
                }
                seen.insert(key);
                next.push(out);
                if next.len() > limits.cells {
                    return Err(Error::SizeLimit {
                        limit: limits.cells,
                        during: "eliminating quantifiers",
                    });
                }
            }
        }
        cells = next;
    }
    Ok(DnfFormula(cells.into_iter().map(DnfCell).collect()))
}

struct Bound {
    value: LinearTerm,
    strict: bool,
}

/// Normalises, drops constant-true literals and duplicates; `None` if a
/// literal is constant-false.
fn tidy(literals: Vec<Literal>) -> Option<Vec<Literal>> {
    let mut out: Vec<Literal> = Vec::new();
    for l in literals {
        match l.constant_value() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let n = l.normalized();
        if !out.contains(&n) {
            out.push(n);
        }
    }
    Some(out)
}

/// Fourier-Motzkin step for one cell, extended to disequalities on `v`.
fn eliminate_var(cell: &[Literal], v: &VarId) -> Vec<Vec<Literal>> {
    if let Some(eq) = cell
        .iter()
        .find(|l| l.rel == Relation::EqZero && !l.term.coeff(v).is_zero())
    {
        // a v + r = 0  =>  v = -r / a
        let a = eq.term.coeff(v);
        let mut r = eq.term.clone();
        r.add_coeff(v, -a.clone());
        let value = r.scale(&-a.recip());
        let rest = cell
            .iter()
            .filter(|l| *l != eq)
            .map(|l| l.substitute(v, &value))
            .collect();
        return tidy(rest).into_iter().collect();
    }

    let mut rest = Vec::new();
    let mut lower: Vec<Bound> = Vec::new();
    let mut upper: Vec<Bound> = Vec::new();
    let mut excluded: Vec<LinearTerm> = Vec::new();
    for l in cell {
        let a = l.term.coeff(v);
        if a.is_zero() {
            rest.push(l.clone());
            continue;
        }
        let mut r = l.term.clone();
        r.add_coeff(v, -a.clone());
        let value = r.scale(&-a.recip());
        match l.rel {
            Relation::NeqZero => excluded.push(value),
            Relation::LeqZero | Relation::LtZero => {
                let b = Bound {
                    value,
                    strict: l.rel == Relation::LtZero,
                };
                if a.is_positive() {
                    upper.push(b);
                } else {
                    lower.push(b);
                }
            }
            Relation::EqZero => unreachable!("handled above"),
        }
    }

    if lower.is_empty() || upper.is_empty() {
        // The v-set is a half-line (or the whole line): never finitely many points.
        return tidy(rest).into_iter().collect();
    }

    let pairwise = |force_strict: bool| -> Vec<Literal> {
        let mut lits = Vec::new();
        for lo in &lower {
            for up in &upper {
                let t = &lo.value - &up.value;
                if force_strict || lo.strict || up.strict {
                    lits.push(Literal::lt(t));
                } else {
                    lits.push(Literal::leq(t));
                }
            }
        }
        lits
    };

    if excluded.is_empty() {
        let mut c = rest;
        c.extend(pairwise(false));
        return tidy(c).into_iter().collect();
    }

    let mut out = Vec::new();
    // Nonempty interior: the finitely many exclusions cannot empty it.
    let mut interior = rest.clone();
    interior.extend(pairwise(true));
    out.extend(tidy(interior));
    // Degenerate interval: the single point must survive every exclusion.
    for (i, lo) in lower.iter().enumerate().filter(|(_, b)| !b.strict) {
        for (j, up) in upper.iter().enumerate().filter(|(_, b)| !b.strict) {
            let point = &lo.value;
            let mut c = rest.clone();
            c.push(Literal::eq(point - &up.value));
            for (k, other) in lower.iter().enumerate() {
                if k != i {
                    let t = &other.value - point;
                    c.push(if other.strict { Literal::lt(t) } else { Literal::leq(t) });
                }
            }
            for (k, other) in upper.iter().enumerate() {
                if k != j {
                    let t = point - &other.value;
                    c.push(if other.strict { Literal::lt(t) } else { Literal::leq(t) });
                }
            }
            for e in &excluded {
                c.push(Literal::neq(point - e));
            }
            out.extend(tidy(c));
        }
    }
    out
}
