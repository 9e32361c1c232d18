//! Test-only oracles written independently of the library's simplex and
//! search code, plus seeded random instance generators.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dlrkit::reductions::Atom;
use dlrkit::{Clause, CnfFormula, LinearTerm, Literal, Point, Rational, Relation, VarId, VarPool};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn vars(pool: &mut VarPool, n: usize) -> Vec<VarId> {
    (0..n).map(|i| pool.var(&format!("x{i}"))).collect()
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin feasibility oracle.

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: BTreeMap<VarId, Rational>,
    constant: Rational,
    strict: bool,
}

fn row_of(t: &LinearTerm, strict: bool) -> Row {
    Row {
        coeffs: t.coeffs().clone(),
        constant: t.constant_part().clone(),
        strict,
    }
}

/// Scale so the largest absolute value among coefficients and constant is 1.
fn normalize(mut r: Row) -> Row {
    let m = r
        .coeffs
        .values()
        .chain(std::iter::once(&r.constant))
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    if !m.is_zero() {
        for c in r.coeffs.values_mut() {
            *c = &*c / &m;
        }
        r.constant = &r.constant / &m;
    }
    r
}

/// Whether `rows` (each `t <= 0` or `t < 0`) has a real solution.
fn fm_rows(mut rows: Vec<Row>) -> bool {
    loop {
        let mut constant_rows = Vec::new();
        rows.retain(|r| {
            if r.coeffs.is_empty() {
                constant_rows.push(r.clone());
                false
            } else {
                true
            }
        });
        for r in &constant_rows {
            let bad = if r.strict {
                !r.constant.is_negative()
            } else {
                r.constant.is_positive()
            };
            if bad {
                return false;
            }
        }
        let Some(v) = rows.iter().flat_map(|r| r.coeffs.keys()).min().cloned() else {
            return true;
        };
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            match r.coeffs.get(&v).map(|c| c.is_positive()) {
                Some(true) => pos.push(r),
                Some(false) => neg.push(r),
                None => rest.push(r),
            }
        }
        for p in &pos {
            for n in &neg {
                let a = p.coeffs[&v].clone();
                let b = -n.coeffs[&v].clone();
                let mut coeffs = BTreeMap::new();
                for (k, c) in &p.coeffs {
                    *coeffs.entry(k.clone()).or_insert_with(Rational::zero) += c / &a;
                }
                for (k, c) in &n.coeffs {
                    *coeffs.entry(k.clone()).or_insert_with(Rational::zero) += c / &b;
                }
                coeffs.retain(|_, c| !c.is_zero());
                let row = normalize(Row {
                    coeffs,
                    constant: &p.constant / &a + &n.constant / &b,
                    strict: p.strict || n.strict,
                });
                if !rest.contains(&row) {
                    rest.push(row);
                }
            }
        }
        rows = rest;
    }
}

/// Feasibility of a conjunction of `<=`, `<` and `=` literals. `!=` literals
/// are split into both strict sides.
pub fn fm_feasible(lits: &[Literal]) -> bool {
    let mut rows = Vec::new();
    let mut splits = Vec::new();
    for l in lits {
        match l.rel {
            Relation::LeqZero => rows.push(row_of(&l.term, false)),
            Relation::LtZero => rows.push(row_of(&l.term, true)),
            Relation::EqZero => {
                rows.push(row_of(&l.term, false));
                rows.push(row_of(&-&l.term, false));
            }
            Relation::NeqZero => splits.push(l.term.clone()),
        }
    }
    fn go(rows: &mut Vec<Row>, splits: &[LinearTerm]) -> bool {
        let Some((t, more)) = splits.split_first() else {
            return fm_rows(rows.clone());
        };
        for side in [t.clone(), -t] {
            rows.push(row_of(&side, true));
            let ok = fm_rows(rows.clone()) && go(rows, more);
            rows.pop();
            if ok {
                return true;
            }
        }
        false
    }
    go(&mut rows, &splits)
}

/// CNF satisfiability by picking one literal per clause, pruning each
/// partial selection with Fourier-Motzkin.
pub fn fm_sat(f: &CnfFormula) -> bool {
    fn go(clauses: &[Clause], chosen: &mut Vec<Literal>) -> bool {
        let Some((c, more)) = clauses.split_first() else {
            return true;
        };
        for l in &c.0 {
            chosen.push(l.clone());
            let ok = fm_feasible(chosen) && go(more, chosen);
            chosen.pop();
            if ok {
                return true;
            }
        }
        false
    }
    go(&f.0, &mut Vec::new())
}

// ---------------------------------------------------------------------------
// Atom evaluation by propagation.

/// Solves every `plus`/`one` atom for its single unknown until nothing
/// changes, then checks all atoms. `None` when some variable stays unknown.
pub fn propagate_atoms(atoms: &[Atom], pinned: &BTreeMap<VarId, Rational>) -> Option<bool> {
    let mut val: BTreeMap<VarId, Rational> = pinned.clone();
    loop {
        let mut changed = false;
        for a in atoms {
            match a {
                Atom::One(x) if !val.contains_key(x) => {
                    val.insert(x.clone(), Rational::one());
                    changed = true;
                }
                Atom::Plus(x, y, z) => {
                    if x == y && y == z && !val.contains_key(x) {
                        val.insert(x.clone(), Rational::zero());
                        changed = true;
                        continue;
                    }
                    let (gx, gy, gz) = (val.get(x).cloned(), val.get(y).cloned(), val.get(z).cloned());
                    let (k, v) = match (gx, gy, gz) {
                        (Some(a), Some(b), None) => (z, a + b),
                        (Some(a), None, Some(c)) if x != y => (y, c - a),
                        (None, Some(b), Some(c)) if x != y => (x, c - b),
                        (None, None, Some(c)) if x == y => (x, c / int(2)),
                        _ => continue,
                    };
                    val.insert(k.clone(), v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let get = |v: &VarId| val.get(v);
    let mut ok = true;
    for a in atoms {
        match a {
            Atom::One(x) => ok &= *get(x)? == Rational::one(),
            Atom::Plus(x, y, z) => ok &= get(x)? + get(y)? == *get(z)?,
            Atom::Leq(x, y) => ok &= get(x)? <= get(y)?,
            Atom::Rel(_) => return None,
        }
    }
    Some(ok)
}

// ---------------------------------------------------------------------------
// Random generators.

pub fn random_term(r: &mut impl Rng, xs: &[VarId], coef: i64, constant: i64) -> LinearTerm {
    loop {
        let mut t = LinearTerm::constant(int(r.gen_range(-constant..=constant)));
        for x in xs {
            if r.gen_bool(0.6) {
                t.add_coeff(x, int(r.gen_range(-coef..=coef)));
            }
        }
        if !t.is_constant() {
            return t;
        }
    }
}

pub fn random_literal(r: &mut impl Rng, xs: &[VarId], rels: &[Relation]) -> Literal {
    let rel = rels[r.gen_range(0..rels.len())];
    Literal::new(random_term(r, xs, 3, 3), rel)
}

/// Sparse term over one or two of `xs`.
pub fn random_sparse_term(r: &mut impl Rng, xs: &[VarId]) -> LinearTerm {
    let mut t = LinearTerm::constant(int(r.gen_range(-3..=3)));
    let k = r.gen_range(1..=2.min(xs.len()));
    for _ in 0..k {
        let x = &xs[r.gen_range(0..xs.len())];
        let mut c = 0;
        while c == 0 {
            c = r.gen_range(-3..=3);
        }
        t.add_coeff(x, int(c));
    }
    if t.is_constant() {
        t.add_coeff(&xs[0], int(1));
    }
    t
}

/// At most one `<=` literal per clause, the rest `!=`; about half of the
/// clauses are units. Later literals often reuse or oppose earlier `<=`
/// terms so that pinned hyperplanes and empty cells are common.
pub fn random_horn(r: &mut impl Rng, xs: &[VarId], max_clauses: usize) -> CnfFormula {
    let n = r.gen_range(1..=max_clauses);
    let mut clauses = Vec::new();
    let mut seen: Vec<LinearTerm> = Vec::new();
    for _ in 0..n {
        let mut c = Vec::new();
        let unit = r.gen_bool(0.5);
        if r.gen_bool(0.7) {
            let t = if !seen.is_empty() && r.gen_bool(0.4) {
                let prev = &seen[r.gen_range(0..seen.len())];
                &(-prev) + &LinearTerm::constant(int(r.gen_range(-1..=1)))
            } else {
                random_sparse_term(r, xs)
            };
            seen.push(t.clone());
            c.push(Literal::leq(t));
        }
        let neqs = match (unit, c.is_empty()) {
            (true, true) => 1,
            (true, false) => 0,
            (false, true) => r.gen_range(2..=3),
            (false, false) => r.gen_range(1..=2),
        };
        for _ in 0..neqs {
            let t = if !seen.is_empty() && r.gen_bool(0.5) {
                seen[r.gen_range(0..seen.len())].clone()
            } else {
                random_sparse_term(r, xs)
            };
            c.push(Literal::neq(t));
        }
        clauses.push(Clause(c));
    }
    CnfFormula(clauses)
}

pub fn random_cnf(
    r: &mut impl Rng,
    xs: &[VarId],
    max_clauses: usize,
    max_width: usize,
    rels: &[Relation],
) -> CnfFormula {
    let n = r.gen_range(1..=max_clauses);
    CnfFormula(
        (0..n)
            .map(|_| {
                let w = r.gen_range(1..=max_width);
                Clause((0..w).map(|_| random_literal(r, xs, rels)).collect())
            })
            .collect(),
    )
}

pub fn random_rational(r: &mut impl Rng, range: i64, den: i64) -> Rational {
    let d = r.gen_range(1..=den);
    rat(r.gen_range(-range * d..=range * d), d)
}

pub fn random_point(r: &mut impl Rng, xs: &[VarId], range: i64, den: i64) -> Point {
    xs.iter().map(|x| (x.clone(), random_rational(r, range, den))).collect()
}

pub const ALL_RELATIONS: [Relation; 4] = [Relation::LeqZero, Relation::LtZero, Relation::EqZero, Relation::NeqZero];

/// Horn-DLR input for objective tests: a few `<=` units, some made strict
/// by a matching disequality, plus random Horn clauses.
pub fn random_glp_formula(r: &mut impl Rng, xs: &[VarId]) -> CnfFormula {
    let mut clauses = Vec::new();
    for _ in 0..r.gen_range(1..=4) {
        let t = random_term(r, xs, 3, 4);
        if r.gen_bool(0.4) {
            clauses.push(Clause::unit(Literal::neq(t.clone())));
        }
        clauses.push(Clause::unit(Literal::leq(t)));
    }
    clauses.extend(random_horn(r, xs, 3).0);
    CnfFormula(clauses)
}

/// `f` plus unit literals.
pub fn with_units(f: &CnfFormula, lits: impl IntoIterator<Item = Literal>) -> CnfFormula {
    let mut g = f.clone();
    g.0.extend(lits.into_iter().map(Clause::unit));
    g
}

/// A nonempty convex polygon: an integer box, sometimes cut by a diagonal
/// half-plane through its centre. All rows weak.
pub fn random_polygon(r: &mut impl Rng, x: &VarId, y: &VarId) -> Vec<Literal> {
    let (a, b) = (r.gen_range(-4..=3), r.gen_range(-4..=3));
    let (w, h) = (r.gen_range(1..=3), r.gen_range(1..=3));
    let vx = LinearTerm::var(x);
    let vy = LinearTerm::var(y);
    let c = |k: i64| LinearTerm::constant(int(k));
    let mut lits = vec![
        Literal::leq(&c(a) - &vx),
        Literal::leq(&vx - &c(a + w)),
        Literal::leq(&c(b) - &vy),
        Literal::leq(&vy - &c(b + h)),
    ];
    if r.gen_bool(0.5) {
        // sx*(2x - 2a - w) + sy*(2y - 2b - h) <= k keeps the centre for k >= 0.
        let (sx, sy) = (
            if r.gen_bool(0.5) { 1 } else { -1 },
            if r.gen_bool(0.5) { 1 } else { -1 },
        );
        let k = r.gen_range(0..=2);
        let cx = vx.scale(&int(2 * sx)) - LinearTerm::constant(int(sx * (2 * a + w)));
        let cy = vy.scale(&int(2 * sy)) - LinearTerm::constant(int(sy * (2 * b + h)));
        lits.push(Literal::leq(cx + cy - LinearTerm::constant(int(k))));
    }
    lits
}

/// Rational points of a polygon by rejection sampling on a grid.
pub fn sample_in(r: &mut impl Rng, lits: &[Literal], x: &VarId, y: &VarId, n: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for _ in 0..n * 200 {
        if out.len() == n {
            break;
        }
        let p: Point = [
            (x.clone(), random_rational(r, 8, 16)),
            (y.clone(), random_rational(r, 8, 16)),
        ]
        .into_iter()
        .collect();
        if lits.iter().all(|l| l.eval(&p).unwrap()) {
            out.push(p);
        }
    }
    out
}

/// Two or three polygons: independent ones, a box cut into adjacent
/// slabs (convex union), or a box together with a sub-box.
pub fn random_union(r: &mut impl Rng, x: &VarId, y: &VarId) -> Vec<Vec<Literal>> {
    let c = |k: i64| LinearTerm::constant(int(k));
    let rect = |a: i64, b: i64, w: i64, h: i64| -> Vec<Literal> {
        let vx = LinearTerm::var(x);
        let vy = LinearTerm::var(y);
        vec![
            Literal::leq(&c(a) - &vx),
            Literal::leq(&vx - &c(a + w)),
            Literal::leq(&c(b) - &vy),
            Literal::leq(&vy - &c(b + h)),
        ]
    };
    let k = r.gen_range(2..=3);
    match r.gen_range(0..3) {
        0 => (0..k).map(|_| random_polygon(r, x, y)).collect(),
        1 => {
            let (a, b, h) = (r.gen_range(-4..=0), r.gen_range(-4..=0), r.gen_range(1..=3));
            let mut start = a;
            (0..k)
                .map(|_| {
                    let w = r.gen_range(1..=2);
                    // Overlap or touch the previous slab.
                    let s = start - r.gen_range(0..=1).min(start - a);
                    start += w;
                    rect(s, b, start - s, h)
                })
                .collect()
        }
        _ => {
            let (a, b) = (r.gen_range(-4..=0), r.gen_range(-4..=0));
            let outer = rect(a, b, 4, 4);
            let inner = rect(a + r.gen_range(0..=2), b + r.gen_range(0..=2), 2, 2);
            let mut v = vec![outer, inner];
            if k == 3 {
                v.push(random_polygon(r, x, y));
            }
            v
        }
    }
}

/// Total bit length of the numerators and denominators of an equation.
pub fn input_bits(coeffs: &BTreeMap<VarId, Rational>, rhs: &Rational) -> u64 {
    coeffs
        .values()
        .chain(std::iter::once(rhs))
        .map(|c| c.numer().bits().max(1) + c.denom().bits())
        .sum()
}

/// A rational with numerator and denominator of at most `bits` bits.
pub fn random_bits_rational(r: &mut impl Rng, bits: u32) -> Rational {
    let lim = (1i64 << bits) - 1;
    rat(r.gen_range(-lim..=lim), r.gen_range(1..=lim))
}

/// Every positive instance with the given variable names and clause count,
/// up to reordering inside clauses and of clauses.
pub fn all_one_in_three(names: &[&str], max_clauses: usize) -> Vec<Vec<[String; 3]>> {
    let mut triples = Vec::new();
    for a in 0..names.len() {
        for b in a..names.len() {
            for c in b..names.len() {
                triples.push([names[a].to_string(), names[b].to_string(), names[c].to_string()]);
            }
        }
    }
    let mut out: Vec<Vec<[String; 3]>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_clauses {
        let mut next = Vec::new();
        for f in &frontier {
            let start = f.last().copied().unwrap_or(0);
            for t in start..triples.len() {
                let mut g = f.clone();
                g.push(t);
                out.push(g.iter().map(|&i| triples[i].clone()).collect());
                next.push(g);
            }
        }
        frontier = next;
    }
    out
}
