//! Dense two-phase primal simplex over exact rationals.
//!
//! Variables are free. Equalities are eliminated by exact Gaussian
//! substitution first; the remaining `a.x <= b` rows go through a textbook
//! tableau with split columns `x = x+ - x-`. Bland's rule (lowest column
//! index enters, lowest basic index breaks ratio ties) rules out cycling.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, Default)]
pub(crate) struct DenseLp {
    pub n: usize,
    /// `a.x <= b`
    pub le: Vec<(Vec<Rational>, Rational)>,
    /// `a.x = b`
    pub eq: Vec<(Vec<Rational>, Rational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum DenseOutcome {
    Infeasible,
    Optimal(Vec<Rational>),
    /// A feasible point and a direction along which the objective grows
    /// without bound.
    Unbounded(Vec<Rational>, Vec<Rational>),
}

/// `x_var = constant + sum(coeffs[k] * x_k)`.
struct Elimination {
    var: usize,
    coeffs: Vec<Rational>,
    constant: Rational,
}

/// Maximises `objective . x` (or only finds a feasible point when `None`).
pub(crate) fn solve(lp: &DenseLp, objective: Option<&[Rational]>) -> DenseOutcome {
    let n = lp.n;
    let mut le: Vec<(Vec<Rational>, Rational)> = lp.le.clone();
    let mut eq: Vec<(Vec<Rational>, Rational)> = lp.eq.clone();
    let mut obj: Option<Vec<Rational>> = objective.map(|c| c.to_vec());
    let mut elims: Vec<Elimination> = Vec::new();

    // Presolve: eliminate equalities one at a time.
    while let Some((a, b)) = eq.pop() {
        let Some(j) = a.iter().position(|c| !c.is_zero()) else {
            if b.is_zero() {
                continue;
            }
            return DenseOutcome::Infeasible;
        };
        // x_j = b/a_j - sum_{k != j} (a_k/a_j) x_k
        let pivot = a[j].clone();
        let mut coeffs: Vec<Rational> = a.iter().map(|c| -(c / &pivot)).collect();
        coeffs[j] = Rational::zero();
        let constant = &b / &pivot;
        let substitute = |row: &mut Vec<Rational>, rhs: &mut Rational| {
            let k = std::mem::replace(&mut row[j], Rational::zero());
            if k.is_zero() {
                return;
            }
            for (r, c) in row.iter_mut().zip(&coeffs) {
                if !c.is_zero() {
                    *r += &k * c;
                }
            }
            *rhs -= &k * &constant;
        };
        for (row, rhs) in eq.iter_mut().chain(le.iter_mut()) {
            substitute(row, rhs);
        }
        if let Some(c) = obj.as_mut() {
            let mut dummy = Rational::zero();
            substitute(c, &mut dummy);
        }
        elims.push(Elimination {
            var: j,
            coeffs,
            constant,
        });
    }

    let outcome = tableau_solve(n, &le, obj.as_deref());
    let back = |mut x: Vec<Rational>, homogeneous: bool| {
        for e in elims.iter().rev() {
            let mut v = if homogeneous {
                Rational::zero()
            } else {
                e.constant.clone()
            };
            for (c, xv) in e.coeffs.iter().zip(&x) {
                if !c.is_zero() {
                    v += c * xv;
                }
            }
            x[e.var] = v;
        }
        x
    };
    match outcome {
        DenseOutcome::Infeasible => DenseOutcome::Infeasible,
        DenseOutcome::Optimal(x) => DenseOutcome::Optimal(back(x, false)),
        DenseOutcome::Unbounded(x, r) => DenseOutcome::Unbounded(back(x, false), back(r, true)),
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry holds the current objective value.
    obj: Vec<Rational>,
    ncols: usize,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let k = row[c].clone();
            if k.is_zero() {
                return;
            }
            for (v, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *v -= &k * pr;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Runs primal simplex (maximisation) on columns `< allowed`.
    fn run(&mut self, allowed: usize) -> Step {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Step::Optimal;
            };
            let rhs = self.ncols;
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Step::Unbounded(enter),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rows[i][self.ncols].clone();
        }
        v
    }
}

fn tableau_solve(n: usize, le: &[(Vec<Rational>, Rational)], objective: Option<&[Rational]>) -> DenseOutcome {
    let m = le.len();
    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let needs_art: Vec<usize> = (0..m).filter(|&i| le[i].1.is_negative()).collect();
    let ncols = art0 + needs_art.len();

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_iter = 0;
    for (i, (a, b)) in le.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        let flip = b.is_negative();
        for (k, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = if flip { -c } else { c.clone() };
            row[2 * k + 1] = -&c;
            row[2 * k] = c;
        }
        row[slack0 + i] = if flip { -Rational::one() } else { Rational::one() };
        row[ncols] = if flip { -b } else { b.clone() };
        if flip {
            row[art0 + art_iter] = Rational::one();
            basis.push(art0 + art_iter);
            art_iter += 1;
        } else {
            basis.push(slack0 + i);
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        basis,
        obj: vec![Rational::zero(); ncols + 1],
        ncols,
    };

    if !needs_art.is_empty() {
        // maximise -sum(artificials)
        for j in art0..ncols {
            t.obj[j] = Rational::one();
        }
        for i in 0..t.rows.len() {
            if t.basis[i] >= art0 {
                let row = t.rows[i].clone();
                for (o, r) in t.obj.iter_mut().zip(&row) {
                    if !r.is_zero() {
                        *o -= r;
                    }
                }
            }
        }
        match t.run(ncols) {
            Step::Optimal => {}
            Step::Unbounded(_) => unreachable!("phase one objective is bounded by zero"),
        }
        if t.obj[ncols].is_negative() {
            return DenseOutcome::Infeasible;
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                match (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let extract =
        |values: &[Rational]| -> Vec<Rational> { (0..n).map(|k| &values[2 * k] - &values[2 * k + 1]).collect() };

    let Some(c) = objective else {
        return DenseOutcome::Optimal(extract(&t.column_values()));
    };

    t.obj = vec![Rational::zero(); ncols + 1];
    for (k, ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        t.obj[2 * k] = -ck;
        t.obj[2 * k + 1] = ck.clone();
    }
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        let k = t.obj[b].clone();
        if k.is_zero() {
            continue;
        }
        let row = t.rows[i].clone();
        for (o, r) in t.obj.iter_mut().zip(&row) {
            if !r.is_zero() {
                *o -= &k * r;
            }
        }
    }

    match t.run(art0) {
        Step::Optimal => DenseOutcome::Optimal(extract(&t.column_values())),
        Step::Unbounded(enter) => {
            let mut dir = vec![Rational::zero(); ncols];
            dir[enter] = Rational::one();
            for (i, &b) in t.basis.iter().enumerate() {
                dir[b] = -&t.rows[i][enter];
            }
            DenseOutcome::Unbounded(extract(&t.column_values()), extract(&dir))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn row(a: &[i64], b: i64) -> (Vec<Rational>, Rational) {
        (a.iter().map(|&v| int(v)).collect(), int(b))
    }

    #[test]
    fn bounded_maximum() {
        // max x + y, x <= 1, y <= 2
        let lp = DenseLp {
            n: 2,
            le: vec![row(&[1, 0], 1), row(&[0, 1], 2)],
            eq: vec![],
        };
        assert_eq!(
            solve(&lp, Some(&[int(1), int(1)])),
            DenseOutcome::Optimal(vec![int(1), int(2)])
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = DenseLp {
            n: 1,
            le: vec![row(&[1], 0), row(&[-1], -1)],
            eq: vec![],
        };
        assert_eq!(solve(&lp, None), DenseOutcome::Infeasible);
        let lp = DenseLp {
            n: 1,
            le: vec![row(&[-1], 0)],
            eq: vec![],
        };
        match solve(&lp, Some(&[int(1)])) {
            DenseOutcome::Unbounded(_, r) => assert!(r[0].is_positive()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equalities_are_substituted() {
        // x + y = 1, x - y = 0 -> x = y = 1/2
        let lp = DenseLp {
            n: 2,
            le: vec![],
            eq: vec![row(&[1, 1], 1), row(&[1, -1], 0)],
        };
        let half = crate::rational::rat(1, 2);
        assert_eq!(solve(&lp, None), DenseOutcome::Optimal(vec![half.clone(), half]));
        let lp = DenseLp {
            n: 1,
            le: vec![],
            eq: vec![row(&[1], 1), row(&[2], 1)],
        };
        assert_eq!(solve(&lp, None), DenseOutcome::Infeasible);
    }
}
