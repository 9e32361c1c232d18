//! Closures, envelopes, convex unions, one-dimensional decompositions and
//! essential-convexity verdicts.

mod unary;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

pub use unary::{decompose_unary, segment_profile, Endpoint, Piece, SegmentProfile, UnaryDecomposition};

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, DnfFormula, Formula, Literal, Point, Relation};
use crate::lp::{cell_witness, lp_feasible, lp_optimize, LpOutcome, Polyhedron};
use crate::qe::{equivalent, find_model, standard_definition, to_dnf, Group};
use crate::rational::{int, Rational};
use crate::solver::{recognize_horn_dlr, HornDlrFormula};
use crate::term::LinearTerm;
use crate::var::VarId;
use crate::Limits;

/// Closed polyhedra whose union is the closure of the set defined by `f`.
/// Each cell is split along its disequalities; pieces with no points are
/// dropped before their strict rows are weakened.
pub fn closure_dnf(f: &DnfFormula) -> Vec<Polyhedron> {
    let mut out: Vec<Polyhedron> = Vec::new();
    for cell in &f.0 {
        let mut branches = vec![Polyhedron::new()];
        for l in &cell.0 {
            let l = l.normalized();
            match l.constant_value() {
                Some(true) => continue,
                Some(false) => {
                    branches.clear();
                    break;
                }
                None => {}
            }
            if l.rel == Relation::NeqZero {
                let mut next = Vec::with_capacity(branches.len() * 2);
                for b in branches {
                    let mut below = b.clone();
                    below.strict.push(l.term.clone());
                    let mut above = b;
                    above.strict.push(-&l.term);
                    next.push(below);
                    next.push(above);
                }
                branches = next;
            } else {
                for b in &mut branches {
                    b.push_literal(&l);
                }
            }
        }
        for b in branches {
            if lp_feasible(&b).is_none() {
                continue;
            }
            let closed = Polyhedron::from_weak(b.weakened().weak_rows());
            if !out.contains(&closed) {
                out.push(closed);
            }
        }
    }
    out
}

fn row_key(t: &LinearTerm) -> LinearTerm {
    t.primitive()
}

/// Keeps, from each polyhedron, the rows valid on every other one.
pub fn envelope(ps: &[Polyhedron]) -> Result<Polyhedron> {
    if ps.is_empty() {
        return Err(Error::EmptyInput("envelope of an empty list"));
    }
    let mut kept: Vec<LinearTerm> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (i, p) in ps.iter().enumerate() {
        'rows: for r in p.weak_rows() {
            let key = row_key(&r);
            if key.is_constant() && !key.constant_part().is_positive() {
                continue;
            }
            if seen.contains(&format!("{key:?}")) {
                continue;
            }
            for (j, other) in ps.iter().enumerate() {
                if i == j {
                    continue;
                }
                match lp_optimize(&r, other)? {
                    LpOutcome::Optimum { value, .. } if !value.is_positive() => {}
                    LpOutcome::Infeasible => return Err(Error::EmptyInput("envelope member has no points")),
                    _ => continue 'rows,
                }
            }
            seen.insert(format!("{key:?}"));
            kept.push(key);
        }
    }
    Ok(Polyhedron::from_weak(kept))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexUnion {
    Convex,
    /// A point of the envelope outside every member.
    NotConvex(Point),
}

impl ConvexUnion {
    pub fn is_convex(&self) -> bool {
        matches!(self, ConvexUnion::Convex)
    }
}

/// Decides whether a union of closed polyhedra is convex by searching the
/// envelope for a point outside every member.
pub fn is_convex_union(ps: &[Polyhedron], limits: &Limits) -> Result<ConvexUnion> {
    let env = envelope(ps)?;
    let mut groups: Vec<Group> = vec![vec![env.weak_rows().into_iter().map(Literal::leq).collect()]];
    for p in ps {
        groups.push(p.weak_rows().into_iter().map(|r| vec![Literal::lt(-r)]).collect());
    }
    let Some(mut x) = find_model(&groups, limits.cells, "convex-union test")? else {
        return Ok(ConvexUnion::Convex);
    };
    let mut vars = env.vars();
    for p in ps {
        vars.extend(p.vars());
    }
    x.complete(&vars);
    let outside_all = ps.iter().all(|p| !p.contains(&x).expect("complete point"));
    assert!(
        env.contains(&x).expect("complete point") && outside_all,
        "internal error: convex-union counterexample fails re-verification"
    );
    Ok(ConvexUnion::NotConvex(x))
}

/// What the witness search looked at before giving up.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchReport {
    pub cells: usize,
    pub hyperplanes: usize,
    pub candidates: usize,
    pub pairs: usize,
    /// Vertex enumeration was skipped or the candidate list was cut.
    pub truncated: bool,
    /// Whether the closure is a convex set; `Some(false)` rules out
    /// essential convexity without producing a witness pair.
    pub closure_convex: Option<bool>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cells={} hyperplanes={} candidates={} pairs={} truncated={}",
            self.cells, self.hyperplanes, self.candidates, self.pairs, self.truncated
        )?;
        match self.closure_convex {
            Some(b) => write!(f, " closure-convex={b}"),
            None => f.write_str(" closure-convex=unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexityVerdict {
    /// A Horn-DLR formula equivalent to the input.
    EssentiallyConvex(HornDlrFormula),
    /// `p` and `q` are in the set while `p + t (q - p)` is not, for every
    /// `t` in `excluded`.
    NotEssentiallyConvex {
        p: Point,
        q: Point,
        excluded: Piece,
    },
    Unknown(SearchReport),
}

/// Largest number of hyperplane subsets tried during vertex enumeration.
pub const VERTEX_SUBSETS: usize = 20_000;
/// Largest number of candidate points paired up by the witness search.
pub const MAX_CANDIDATES: usize = 160;

/// Re-checks a non-convexity certificate: both endpoints in the set and the
/// whole interval outside it.
pub fn verify_excluded(f: &Formula, p: &Point, q: &Point, excluded: &Piece) -> Result<bool> {
    if excluded.is_point() || excluded.length().is_none() || !f.eval(p)? || !f.eval(q)? {
        return Ok(false);
    }
    let profile = segment_profile(f, p, q)?;
    Ok(profile.outside.iter().any(|o| o.covers(excluded)))
}

pub fn essential_convexity_check(f: &CnfFormula, limits: &Limits) -> Result<ConvexityVerdict> {
    let input = Formula::Cnf(f.clone());
    let standard = standard_definition(f, limits)?;
    if let Ok(h) = recognize_horn_dlr(&standard.cnf) {
        return certified_convex(h, &input, limits);
    }
    let vars = f.vars();
    let verdict = if vars.len() == 1 {
        let var = vars.iter().next().expect("one variable");
        unary_verdict(&input, var, limits)?
    } else {
        witness_search(f, &vars, limits)?
    };
    if let ConvexityVerdict::NotEssentiallyConvex { p, q, excluded } = &verdict {
        assert!(
            verify_excluded(&input, p, q, excluded)?,
            "internal error: non-convexity witness fails re-verification"
        );
    }
    Ok(verdict)
}

fn certified_convex(h: HornDlrFormula, input: &Formula, limits: &Limits) -> Result<ConvexityVerdict> {
    let eq = equivalent(&Formula::Cnf(h.cnf().clone()), input, limits)?;
    assert!(
        eq.holds(),
        "internal error: Horn certificate is not equivalent to the input"
    );
    Ok(ConvexityVerdict::EssentiallyConvex(h))
}

fn unary_verdict(input: &Formula, var: &VarId, limits: &Limits) -> Result<ConvexityVerdict> {
    let d = decompose_unary(input, var)?;
    let x = LinearTerm::var(var);
    if d.hull_defect_is_finite() {
        let mut clauses: Vec<Clause> = Vec::new();
        match (d.pieces.first(), d.pieces.last()) {
            (Some(first), Some(last)) => {
                match &first.lo {
                    Endpoint::Closed(a) | Endpoint::Open(a) => {
                        let below = &LinearTerm::constant(a.clone()) - &x;
                        clauses.push(Clause::unit(Literal::leq(below.primitive())));
                        if !first.lo.is_closed() {
                            clauses.push(Clause::unit(Literal::neq(below.primitive())));
                        }
                    }
                    _ => {}
                }
                match &last.hi {
                    Endpoint::Closed(b) | Endpoint::Open(b) => {
                        let above = &x - &LinearTerm::constant(b.clone());
                        clauses.push(Clause::unit(Literal::leq(above.primitive())));
                        if !last.hi.is_closed() {
                            clauses.push(Clause::unit(Literal::neq(above.primitive())));
                        }
                    }
                    _ => {}
                }
                for g in d.gaps() {
                    let hole = g.lo.value().expect("point gap").clone();
                    let t = &x - &LinearTerm::constant(hole);
                    clauses.push(Clause::unit(Literal::neq(t.primitive())));
                }
            }
            _ => clauses.push(Clause(Vec::new())),
        }
        let h = recognize_horn_dlr(&CnfFormula(clauses)).expect("unit clauses are Horn-DLR");
        return certified_convex(h, input, limits);
    }
    let gap_index = d
        .gaps()
        .iter()
        .position(|g| !g.is_point())
        .expect("an interval gap exists");
    let near = |piece: &Piece, toward_right: bool| -> Rational {
        let end = if toward_right { &piece.hi } else { &piece.lo };
        match end {
            Endpoint::Closed(r) => r.clone(),
            _ => piece.sample(),
        }
    };
    let p = Point::from_iter([(var.clone(), near(&d.pieces[gap_index], true))]);
    let q = Point::from_iter([(var.clone(), near(&d.pieces[gap_index + 1], false))]);
    let profile = segment_profile(input, &p, &q)?;
    let excluded = profile
        .excluded_intervals()
        .next()
        .expect("the gap lies between p and q")
        .clone();
    Ok(ConvexityVerdict::NotEssentiallyConvex { p, q, excluded })
}

/// Literal hyperplanes, up to scaling, as primitive terms with positive
/// leading coefficient.
fn hyperplanes(f: &CnfFormula) -> Vec<LinearTerm> {
    let mut out: Vec<LinearTerm> = Vec::new();
    for l in f.literals() {
        if l.term.is_constant() {
            continue;
        }
        let mut t = l.term.primitive();
        if t.leading_sign() < 0 {
            t = -t;
        }
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn box_radius(f: &CnfFormula, n: usize) -> Rational {
    let mut max_const = Rational::zero();
    let mut max_coef = Rational::zero();
    for l in f.literals() {
        max_const = max_const.max(l.term.constant_part().abs());
        for c in l.term.coeffs().values() {
            max_coef = max_coef.clone().max(c.abs());
        }
    }
    let one = Rational::one();
    one.clone() + int(n as i64) * (one.clone() + max_const) * (one + max_coef)
}

fn binomial_exceeds(n: usize, k: usize, cap: usize) -> bool {
    let mut acc: u128 = 1;
    for i in 0..k.min(n) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return true;
        }
    }
    k > n
}

/// Unique solution of the square system `rows * x = rhs`, if any.
fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &rows[col][col];
            let pivot_row = rows[col].clone();
            for (cell, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                *cell -= &factor * p;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &rows[i][i]).collect())
}

/// Vertices of the arrangement of `planes` inside the box `[-m, m]^n`.
fn arrangement_vertices(planes: &[LinearTerm], vars: &[VarId], m: &Rational) -> Vec<Point> {
    let n = vars.len();
    let mut out: Vec<Point> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if n == 0 || planes.len() < n {
        return out;
    }
    loop {
        let rows = idx
            .iter()
            .map(|&i| vars.iter().map(|v| planes[i].coeff(v)).collect())
            .collect();
        let rhs = idx.iter().map(|&i| -planes[i].constant_part()).collect();
        if let Some(sol) = solve_square(rows, rhs) {
            if sol.iter().all(|s| s.abs() <= *m) {
                let pt: Point = vars.iter().cloned().zip(sol).collect();
                if !out.contains(&pt) {
                    out.push(pt);
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < planes.len() - n + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of the closed polygon `p ∩ [-bound, bound]^2` in the plane of
/// `x` and `y`, counter-clockwise from the lowest-leftmost one.
pub fn polygon_vertices(p: &Polyhedron, x: &VarId, y: &VarId, bound: &Rational) -> Result<Vec<Point>> {
    if let Some(other) = p.vars().into_iter().find(|v| v != x && v != y) {
        return Err(Error::InvalidArgument(format!(
            "polygon mentions a third variable `{other}`"
        )));
    }
    let mut rows = p.weak_rows();
    for v in [x, y] {
        rows.push(LinearTerm::var(v) - LinearTerm::constant(bound.clone()));
        rows.push(-LinearTerm::var(v) - LinearTerm::constant(bound.clone()));
    }
    let clipped = Polyhedron::from_weak(rows.clone());
    let axes = [x.clone(), y.clone()];
    let mut pts: Vec<Point> = arrangement_vertices(&rows, &axes, bound)
        .into_iter()
        .filter(|pt| clipped.contains(pt).expect("complete point"))
        .collect();
    let key = |pt: &Point| (pt.get(y).expect("y").clone(), pt.get(x).expect("x").clone());
    pts.sort_by_key(key);
    let Some(origin) = pts.first().cloned() else {
        return Ok(pts);
    };
    let rel = |pt: &Point| {
        (
            pt.get(x).expect("x") - origin.get(x).expect("x"),
            pt.get(y).expect("y") - origin.get(y).expect("y"),
        )
    };
    let mut rest = pts.split_off(1);
    // All other vertices lie in the upper half-plane around the origin, so
    // the cross product orders them by angle; ties go by distance.
    rest.sort_by(|a, b| {
        let (ax, ay) = rel(a);
        let (bx, by) = rel(b);
        let cross = &ax * &by - &ay * &bx;
        (Rational::zero().cmp(&cross)).then_with(|| (ax.abs() + ay.abs()).cmp(&(bx.abs() + by.abs())))
    });
    pts.extend(rest);
    Ok(pts)
}

fn witness_search(f: &CnfFormula, vars: &BTreeSet<VarId>, limits: &Limits) -> Result<ConvexityVerdict> {
    let input = Formula::Cnf(f.clone());
    let dnf = to_dnf(f, limits)?;
    let var_list: Vec<VarId> = vars.iter().cloned().collect();
    let mut report = SearchReport {
        cells: dnf.0.len(),
        ..SearchReport::default()
    };

    let mut samples: Vec<Point> = Vec::new();
    for cell in &dnf.0 {
        if let Some(mut x) = cell_witness(&cell.0) {
            x.complete(vars);
            if !samples.contains(&x) {
                samples.push(x);
            }
        }
    }

    let m = box_radius(f, vars.len());
    let mut planes = hyperplanes(f);
    for v in &var_list {
        planes.push(LinearTerm::var(v) - LinearTerm::constant(m.clone()));
        planes.push(LinearTerm::var(v) + LinearTerm::constant(m.clone()));
    }
    report.hyperplanes = planes.len();
    let vertices = if binomial_exceeds(planes.len(), var_list.len(), VERTEX_SUBSETS) {
        report.truncated = true;
        Vec::new()
    } else {
        arrangement_vertices(&planes, &var_list, &m)
    };

    let mut candidates = samples.clone();
    let nudge = Rational::new(1.into(), 64.into());
    for v in &vertices {
        if input.eval(v)? {
            candidates.push(v.clone());
            continue;
        }
        for s in &samples {
            let w = v.lerp(s, &nudge);
            if input.eval(&w)? {
                candidates.push(w);
            }
        }
    }
    let mut unique: Vec<Point> = Vec::new();
    for c in candidates {
        if !unique.contains(&c) {
            unique.push(c);
        }
    }
    if unique.len() > MAX_CANDIDATES {
        report.truncated = true;
        unique.truncate(MAX_CANDIDATES);
    }
    report.candidates = unique.len();

    for i in 0..unique.len() {
        for j in i + 1..unique.len() {
            report.pairs += 1;
            let profile = segment_profile(&input, &unique[i], &unique[j])?;
            let excluded = profile.excluded_intervals().next().cloned();
            if let Some(excluded) = excluded {
                return Ok(ConvexityVerdict::NotEssentiallyConvex {
                    p: unique[i].clone(),
                    q: unique[j].clone(),
                    excluded,
                });
            }
        }
    }

    let closure = closure_dnf(&dnf);
    report.closure_convex = if closure.is_empty() {
        Some(true)
    } else {
        Some(is_convex_union(&closure, limits)?.is_convex())
    };
    Ok(ConvexityVerdict::Unknown(report))
}
