//! Exact linear programming over [`LinearTerm`] systems.
//!
//! Feasibility with strict rows uses a single extra variable `eps`: every
//! `t < 0` becomes `t + eps <= 0`, `eps <= 1` is added and `eps` is maximised;
//! the strict system is feasible iff the optimum is positive. Every returned
//! certificate is re-evaluated against the input before it leaves this module.

mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Literal, Point, Relation};
use crate::rational::{int, Rational};
use crate::term::LinearTerm;
use crate::var::VarId;
use simplex::{DenseLp, DenseOutcome};

/// `{x | weak <= 0, strict < 0, equalities = 0}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polyhedron {
    pub weak: Vec<LinearTerm>,
    pub strict: Vec<LinearTerm>,
    pub equalities: Vec<LinearTerm>,
}

impl Polyhedron {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weak(weak: impl IntoIterator<Item = LinearTerm>) -> Self {
        Polyhedron {
            weak: weak.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn is_closed(&self) -> bool {
        self.strict.is_empty()
    }

    /// Adds a `<=`, `<` or `=` literal. Returns `false` for `!=`, which a
    /// polyhedron cannot hold.
    pub fn push_literal(&mut self, l: &Literal) -> bool {
        match l.rel {
            Relation::LeqZero => self.weak.push(l.term.clone()),
            Relation::LtZero => self.strict.push(l.term.clone()),
            Relation::EqZero => self.equalities.push(l.term.clone()),
            Relation::NeqZero => return false,
        }
        true
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for t in self.weak.iter().chain(&self.strict).chain(&self.equalities) {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        for t in &self.weak {
            if t.eval(x)?.is_positive() {
                return Ok(false);
            }
        }
        for t in &self.strict {
            if !t.eval(x)?.is_negative() {
                return Ok(false);
            }
        }
        for t in &self.equalities {
            if !t.eval(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Closure of a nonempty polyhedron: strict rows become weak.
    pub fn weakened(&self) -> Polyhedron {
        let mut weak = self.weak.clone();
        weak.extend(self.strict.iter().cloned());
        Polyhedron {
            weak,
            strict: Vec::new(),
            equalities: self.equalities.clone(),
        }
    }

    /// Weak rows plus both directions of every equality.
    pub fn weak_rows(&self) -> Vec<LinearTerm> {
        let mut rows = self.weak.clone();
        for e in &self.equalities {
            rows.push(e.clone());
            rows.push(-e);
        }
        rows
    }

    pub fn as_literals(&self) -> Vec<Literal> {
        self.weak
            .iter()
            .map(|t| Literal::leq(t.clone()))
            .chain(self.strict.iter().map(|t| Literal::lt(t.clone())))
            .chain(self.equalities.iter().map(|t| Literal::eq(t.clone())))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Feasible(Point),
    Optimum {
        value: Rational,
        witness: Point,
    },
    Unbounded {
        witness: Point,
        ray: BTreeMap<VarId, Rational>,
    },
}

struct Columns {
    vars: Vec<VarId>,
    index: BTreeMap<VarId, usize>,
}

impl Columns {
    fn new(vars: BTreeSet<VarId>) -> Self {
        let vars: Vec<VarId> = vars.into_iter().collect();
        let index = vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Columns { vars, index }
    }

    fn width(&self) -> usize {
        self.vars.len()
    }

    /// `t <= 0` as `(a, b)` with `a.x <= b`, over `width` columns.
    fn row(&self, t: &LinearTerm, width: usize) -> (Vec<Rational>, Rational) {
        let mut a = vec![Rational::zero(); width];
        for (v, c) in t.coeffs() {
            a[self.index[v]] = c.clone();
        }
        (a, -t.constant_part())
    }

    fn point(&self, x: &[Rational]) -> Point {
        self.vars.iter().cloned().zip(x.iter().cloned()).collect()
    }
}

fn dense(p: &Polyhedron, cols: &Columns, width: usize) -> DenseLp {
    DenseLp {
        n: width,
        le: p.weak.iter().map(|t| cols.row(t, width)).collect(),
        eq: p.equalities.iter().map(|t| cols.row(t, width)).collect(),
    }
}

fn verified(p: &Polyhedron, x: Point) -> Point {
    assert!(
        p.contains(&x).expect("witness assigns every variable"),
        "internal error: LP witness {x} fails re-verification"
    );
    x
}

/// Decides `P != {}` and returns an exact rational point of `P`.
pub fn lp_feasible(p: &Polyhedron) -> Option<Point> {
    let cols = Columns::new(p.vars());
    let n = cols.width();
    if p.strict.is_empty() {
        return match simplex::solve(&dense(p, &cols, n), None) {
            DenseOutcome::Optimal(x) => Some(verified(p, cols.point(&x))),
            DenseOutcome::Infeasible => None,
            DenseOutcome::Unbounded(..) => unreachable!("no objective"),
        };
    }
    // eps-lift with eps in column n
    let width = n + 1;
    let mut lp = dense(p, &cols, width);
    for t in &p.strict {
        let (mut a, b) = cols.row(t, width);
        a[n] = Rational::one();
        lp.le.push((a, b));
    }
    let mut cap = vec![Rational::zero(); width];
    cap[n] = Rational::one();
    lp.le.push((cap.clone(), Rational::one()));
    match simplex::solve(&lp, Some(&cap)) {
        DenseOutcome::Optimal(x) if x[n].is_positive() => Some(verified(p, cols.point(&x[..n]))),
        DenseOutcome::Optimal(_) | DenseOutcome::Infeasible => None,
        DenseOutcome::Unbounded(..) => unreachable!("eps is capped at one"),
    }
}

/// Maximises `c` over a closed polyhedron.
pub fn lp_optimize(c: &LinearTerm, p: &Polyhedron) -> Result<LpOutcome> {
    if !p.strict.is_empty() {
        return Err(Error::StrictNotSupported);
    }
    let mut vars = p.vars();
    c.collect_vars(&mut vars);
    let cols = Columns::new(vars);
    let n = cols.width();
    let lp = dense(p, &cols, n);
    let (objective, _) = cols.row(c, n);
    Ok(match simplex::solve(&lp, Some(&objective)) {
        DenseOutcome::Infeasible => LpOutcome::Infeasible,
        DenseOutcome::Optimal(x) => {
            let witness = verified(p, cols.point(&x));
            let value = c.eval(&witness).expect("objective variables are columns");
            LpOutcome::Optimum { value, witness }
        }
        DenseOutcome::Unbounded(x, r) => {
            let witness = verified(p, cols.point(&x));
            let ray: BTreeMap<VarId, Rational> =
                cols.vars.iter().cloned().zip(r).filter(|(_, v)| !v.is_zero()).collect();
            verify_ray(p, c, &ray);
            LpOutcome::Unbounded { witness, ray }
        }
    })
}

fn directional(t: &LinearTerm, ray: &BTreeMap<VarId, Rational>) -> Rational {
    t.coeffs()
        .iter()
        .filter_map(|(v, c)| ray.get(v).map(|r| c * r))
        .fold(Rational::zero(), |a, b| a + b)
}

fn verify_ray(p: &Polyhedron, c: &LinearTerm, ray: &BTreeMap<VarId, Rational>) {
    let ok = p.weak.iter().all(|t| !directional(t, ray).is_positive())
        && p.equalities.iter().all(|t| directional(t, ray).is_zero())
        && directional(c, ray).is_positive();
    assert!(ok, "internal error: unbounded ray fails re-verification");
}

/// Whether `t = 0` on all of the (closed, nonempty) polyhedron.
pub fn entails_zero(p: &Polyhedron, t: &LinearTerm) -> Result<bool> {
    if !p.strict.is_empty() {
        return Err(Error::StrictNotSupported);
    }
    let at_most_zero = |obj: &LinearTerm| -> Result<bool> {
        match lp_optimize(obj, p)? {
            LpOutcome::Infeasible => Err(Error::EmptyInput("polyhedron is infeasible")),
            LpOutcome::Optimum { value, .. } => Ok(!value.is_positive()),
            LpOutcome::Unbounded { .. } => Ok(false),
            LpOutcome::Feasible(_) => unreachable!(),
        }
    };
    Ok(at_most_zero(t)? && at_most_zero(&-t)?)
}

/// A rational point satisfying every literal of a conjunction, including
/// disequalities, or `None` if the conjunction is unsatisfiable.
///
/// The polyhedral part `P` is solved first. For each disequality `p_i != 0`
/// a point `x_i` of `P` with `p_i(x_i) != 0` is found (none exists iff `P`
/// lies in the hyperplane). The points are then blended as
/// `x(t) = sum_j t^j x_j / sum_j t^j`; `p_i(x(t)) * sum_j t^j` is a nonzero
/// polynomial in `t` of degree at most `k`, so some `t` in `1..=k*k+1`
/// avoids every hyperplane while convexity keeps `x(t)` inside `P`.
pub fn cell_witness(literals: &[Literal]) -> Option<Point> {
    let mut p = Polyhedron::new();
    let mut neqs: Vec<&LinearTerm> = Vec::new();
    for l in literals {
        if !p.push_literal(l) {
            match l.constant_value() {
                Some(true) => {}
                Some(false) => return None,
                None => neqs.push(&l.term),
            }
        }
    }
    let mut all_vars = p.vars();
    for t in &neqs {
        t.collect_vars(&mut all_vars);
    }
    let mut base = lp_feasible(&p)?;
    base.complete(&all_vars);
    let nonzero_at = |x: &Point, t: &LinearTerm| !t.eval(x).expect("complete point").is_zero();
    if neqs.iter().all(|t| nonzero_at(&base, t)) {
        return Some(base);
    }
    let mut points = vec![base];
    for t in &neqs {
        if nonzero_at(&points[0], t) {
            points.push(points[0].clone());
            continue;
        }
        let mut found = None;
        for side in [(*t).clone(), -*t] {
            let mut q = p.clone();
            q.strict.push(side);
            if let Some(mut x) = lp_feasible(&q) {
                x.complete(&all_vars);
                found = Some(x);
                break;
            }
        }
        points.push(found?);
    }
    let k = neqs.len() as i64;
    for step in 1..=(k * k + 1) {
        let t = int(step);
        let mut weights = Vec::with_capacity(points.len());
        let mut w = Rational::one();
        for _ in 0..points.len() {
            weights.push(w.clone());
            w *= &t;
        }
        let total: Rational = weights.iter().fold(Rational::zero(), |a, b| a + b);
        let x: Point = all_vars
            .iter()
            .map(|v| {
                let s = points
                    .iter()
                    .zip(&weights)
                    .fold(Rational::zero(), |acc, (pt, w)| acc + w * pt.get(v).expect("complete"));
                (v.clone(), s / &total)
            })
            .collect();
        if neqs.iter().all(|t| nonzero_at(&x, t)) {
            for l in literals {
                assert!(
                    l.eval(&x).expect("complete"),
                    "internal error: cell witness {x} fails {l:?}"
                );
            }
            return Some(x);
        }
    }
    unreachable!("a nonzero polynomial of degree <= k has at most k roots")
}
