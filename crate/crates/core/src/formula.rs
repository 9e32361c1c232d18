//! Literals, clauses, CNF/DNF formulas, points and evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::rational::{Frac, Rational};
use crate::term::LinearTerm;
use crate::var::VarId;

/// Comparison of a term against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    LeqZero,
    LtZero,
    EqZero,
    NeqZero,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::LeqZero => "<=",
            Relation::LtZero => "<",
            Relation::EqZero => "=",
            Relation::NeqZero => "!=",
        }
    }

    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::LeqZero => !value.is_positive(),
            Relation::LtZero => value.is_negative(),
            Relation::EqZero => value.is_zero(),
            Relation::NeqZero => !value.is_zero(),
        }
    }
}

/// `term rel 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub term: LinearTerm,
    pub rel: Relation,
}

impl Literal {
    pub fn new(term: LinearTerm, rel: Relation) -> Self {
        Literal { term, rel }
    }

    pub fn leq(term: LinearTerm) -> Self {
        Self::new(term, Relation::LeqZero)
    }

    pub fn lt(term: LinearTerm) -> Self {
        Self::new(term, Relation::LtZero)
    }

    pub fn eq(term: LinearTerm) -> Self {
        Self::new(term, Relation::EqZero)
    }

    pub fn neq(term: LinearTerm) -> Self {
        Self::new(term, Relation::NeqZero)
    }

    /// `lhs rel rhs`, folded into `(lhs - rhs) rel 0`.
    pub fn compare(lhs: &LinearTerm, rel: Relation, rhs: &LinearTerm) -> Self {
        Self::new(lhs - rhs, rel)
    }

    pub fn eval(&self, x: &Point) -> Result<bool> {
        Ok(self.rel.holds(&self.term.eval(x)?))
    }

    /// Truth value when the term is constant.
    pub fn constant_value(&self) -> Option<bool> {
        self.term
            .is_constant()
            .then(|| self.rel.holds(self.term.constant_part()))
    }

    /// not(t <= 0) = (-t < 0), not(t < 0) = (-t <= 0), not(t = 0) = (t != 0),
    /// not(t != 0) = (t = 0).
    pub fn negate(&self) -> Literal {
        match self.rel {
            Relation::LeqZero => Literal::lt(-&self.term),
            Relation::LtZero => Literal::leq(-&self.term),
            Relation::EqZero => Literal::neq(self.term.clone()),
            Relation::NeqZero => Literal::eq(self.term.clone()),
        }
    }

    /// Equivalent literal with a primitive integer term; for `=` and `!=`
    /// the leading coefficient is made positive as well.
    pub fn normalized(&self) -> Literal {
        let mut term = self.term.primitive();
        if matches!(self.rel, Relation::EqZero | Relation::NeqZero) && term.leading_sign() < 0 {
            term = -term;
        }
        Literal::new(term, self.rel)
    }

    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Literal {
        Literal::new(self.term.rename(map), self.rel)
    }

    pub fn substitute(&self, v: &VarId, replacement: &LinearTerm) -> Literal {
        Literal::new(self.term.substitute(v, replacement), self.rel)
    }
}

/// Disjunction; the empty clause is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Clause(pub Vec<Literal>);

/// Conjunction of clauses; the empty formula is true.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CnfFormula(pub Vec<Clause>);

/// Conjunction of literals; the empty cell is true.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DnfCell(pub Vec<Literal>);

/// Disjunction of cells; the empty formula is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DnfFormula(pub Vec<DnfCell>);

impl Clause {
    pub fn unit(l: Literal) -> Self {
        Clause(vec![l])
    }

    pub fn eval(&self, x: &Point) -> Result<bool> {
        for l in &self.0 {
            if l.eval(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl DnfCell {
    pub fn eval(&self, x: &Point) -> Result<bool> {
        for l in &self.0 {
            if !l.eval(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl CnfFormula {
    pub fn truth() -> Self {
        CnfFormula(Vec::new())
    }

    pub fn units(literals: impl IntoIterator<Item = Literal>) -> Self {
        CnfFormula(literals.into_iter().map(Clause::unit).collect())
    }

    pub fn eval(&self, x: &Point) -> Result<bool> {
        for c in &self.0 {
            if !c.eval(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.0.iter().flat_map(|c| c.0.iter())
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for l in self.literals() {
            l.term.collect_vars(&mut out);
        }
        out
    }

    pub fn and(&self, other: &CnfFormula) -> CnfFormula {
        let mut clauses = self.0.clone();
        clauses.extend(other.0.iter().cloned());
        CnfFormula(clauses)
    }

    /// `not self` as a DNF (one cell per clause).
    pub fn negate(&self) -> DnfFormula {
        DnfFormula(
            self.0
                .iter()
                .map(|c| DnfCell(c.0.iter().map(Literal::negate).collect()))
                .collect(),
        )
    }

    pub fn map_literals(&self, mut f: impl FnMut(&Literal) -> Literal) -> CnfFormula {
        CnfFormula(
            self.0
                .iter()
                .map(|c| Clause(c.0.iter().map(&mut f).collect()))
                .collect(),
        )
    }
}

impl DnfFormula {
    pub fn falsity() -> Self {
        DnfFormula(Vec::new())
    }

    pub fn eval(&self, x: &Point) -> Result<bool> {
        for c in &self.0 {
            if c.eval(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.0.iter().flat_map(|c| c.0.iter())
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for l in self.literals() {
            l.term.collect_vars(&mut out);
        }
        out
    }

    /// `not self` as a CNF (one clause per cell).
    pub fn negate(&self) -> CnfFormula {
        CnfFormula(
            self.0
                .iter()
                .map(|c| Clause(c.0.iter().map(Literal::negate).collect()))
                .collect(),
        )
    }

    pub fn map_literals(&self, mut f: impl FnMut(&Literal) -> Literal) -> DnfFormula {
        DnfFormula(
            self.0
                .iter()
                .map(|c| DnfCell(c.0.iter().map(&mut f).collect()))
                .collect(),
        )
    }
}

/// A quantifier-free formula in either normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Cnf(CnfFormula),
    Dnf(DnfFormula),
}

impl Formula {
    pub fn eval(&self, x: &Point) -> Result<bool> {
        match self {
            Formula::Cnf(f) => f.eval(x),
            Formula::Dnf(f) => f.eval(x),
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        match self {
            Formula::Cnf(f) => f.vars(),
            Formula::Dnf(f) => f.vars(),
        }
    }

    pub fn literals(&self) -> Box<dyn Iterator<Item = &Literal> + '_> {
        match self {
            Formula::Cnf(f) => Box::new(f.literals()),
            Formula::Dnf(f) => Box::new(f.literals()),
        }
    }

    pub fn negate(&self) -> Formula {
        match self {
            Formula::Cnf(f) => Formula::Dnf(f.negate()),
            Formula::Dnf(f) => Formula::Cnf(f.negate()),
        }
    }

    pub fn map_literals(&self, f: impl FnMut(&Literal) -> Literal) -> Formula {
        match self {
            Formula::Cnf(g) => Formula::Cnf(g.map_literals(f)),
            Formula::Dnf(g) => Formula::Dnf(g.map_literals(f)),
        }
    }

    pub fn substitute(&self, v: &VarId, replacement: &LinearTerm) -> Formula {
        self.map_literals(|l| l.substitute(v, replacement))
    }

    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Formula {
        self.map_literals(|l| l.rename(map))
    }

    /// Conjunction with extra literals, keeping the normal form.
    pub fn and_literals(&self, extra: &[Literal]) -> Formula {
        match self {
            Formula::Cnf(f) => {
                let mut g = f.clone();
                g.0.extend(extra.iter().cloned().map(Clause::unit));
                Formula::Cnf(g)
            }
            Formula::Dnf(f) => Formula::Dnf(DnfFormula(
                f.0.iter()
                    .map(|c| DnfCell(c.0.iter().chain(extra).cloned().collect()))
                    .collect(),
            )),
        }
    }
}

impl From<CnfFormula> for Formula {
    fn from(f: CnfFormula) -> Self {
        Formula::Cnf(f)
    }
}

impl From<DnfFormula> for Formula {
    fn from(f: DnfFormula) -> Self {
        Formula::Dnf(f)
    }
}

/// `exists prefix. matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifiedFormula {
    pub prefix: Vec<VarId>,
    pub matrix: Formula,
}

impl QuantifiedFormula {
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        let mut vars = self.matrix.vars();
        for v in &self.prefix {
            vars.remove(v);
        }
        vars
    }
}

pub fn eval_formula(f: &Formula, x: &Point) -> Result<bool> {
    f.eval(x)
}

/// Assignment of rationals to variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Point(BTreeMap<VarId, Rational>);

impl Point {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &VarId) -> Option<&Rational> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: VarId, value: Rational) {
        self.0.insert(v, value);
    }

    pub fn contains(&self, v: &VarId) -> bool {
        self.0.contains_key(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Rational)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Assigns zero to every variable of `vars` that has no value yet.
    pub fn complete<'a>(&mut self, vars: impl IntoIterator<Item = &'a VarId>) {
        for v in vars {
            self.0.entry(v.clone()).or_insert_with(Rational::zero);
        }
    }

    /// Keeps only the variables in `vars`.
    pub fn restrict(&self, vars: &BTreeSet<VarId>) -> Point {
        Point(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, r)| (v.clone(), r.clone()))
                .collect(),
        )
    }

    /// `self + t * (other - self)`, over the union of both variable sets
    /// (missing coordinates read as zero).
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        let zero = Rational::zero();
        let vars: BTreeSet<&VarId> = self.0.keys().chain(other.0.keys()).collect();
        Point(
            vars.into_iter()
                .map(|v| {
                    let a = self.0.get(v).unwrap_or(&zero);
                    let b = other.0.get(v).unwrap_or(&zero);
                    (v.clone(), a + t * (b - a))
                })
                .collect(),
        )
    }
}

impl FromIterator<(VarId, Rational)> for Point {
    fn from_iter<I: IntoIterator<Item = (VarId, Rational)>>(iter: I) -> Self {
        Point(iter.into_iter().collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, r)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}={}", v, Frac(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::var::VarPool;

    #[test]
    fn clause_semantics() {
        let mut pool = VarPool::new();
        let x = pool.var("x");
        let at0 = Point::from_iter([(x.clone(), int(0))]);
        let c = Clause(vec![
            Literal::leq(LinearTerm::var(&x)),
            Literal::neq(LinearTerm::var(&x)),
        ]);
        assert!(c.eval(&at0).unwrap());
        let d = Clause::unit(Literal::neq(LinearTerm::var(&x)));
        assert!(!d.eval(&at0).unwrap());
    }

    #[test]
    fn empty_forms() {
        let p = Point::new();
        assert!(!Clause::default().eval(&p).unwrap());
        assert!(CnfFormula::default().eval(&p).unwrap());
        assert!(DnfCell::default().eval(&p).unwrap());
        assert!(!DnfFormula::default().eval(&p).unwrap());
    }

    #[test]
    fn negation_flips_truth() {
        let mut pool = VarPool::new();
        let x = pool.var("x");
        for rel in [Relation::LeqZero, Relation::LtZero, Relation::EqZero, Relation::NeqZero] {
            let l = Literal::new(LinearTerm::var(&x), rel);
            for v in -2..=2 {
                let p = Point::from_iter([(x.clone(), int(v))]);
                assert_ne!(l.eval(&p).unwrap(), l.negate().eval(&p).unwrap());
            }
        }
    }

    #[test]
    fn point_display() {
        let mut pool = VarPool::new();
        let (x, y) = (pool.var("x"), pool.var("y"));
        let p = Point::from_iter([(y, int(0)), (x, crate::rational::rat(1, 2))]);
        assert_eq!(p.to_string(), "x=1/2 y=0/1");
    }
}
