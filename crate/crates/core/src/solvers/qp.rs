//! Primal active-set method for convex quadratic programs.

use thiserror::Error;

use crate::linalg::{self, Lu, Mat};
use crate::scalar::Real;

use super::lp::{solve_lp, LpError, LpProblem, LpStatus};

const ACTIVE_TOL: f64 = 1e-9;
const MULTIPLIER_TOL: f64 = 1e-10;
const PSD_FLOOR: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpError {
    #[error("objective matrix is not positive semidefinite")]
    NotConvex,
    #[error("constraints are infeasible")]
    Infeasible,
    #[error("objective is unbounded below on the feasible set")]
    Unbounded,
    #[error("active set did not converge within {0} iterations")]
    MaxIterations(usize),
    #[error("objective matrix is {rows}x{cols}, expected {n}x{n}")]
    Dimension { rows: usize, cols: usize, n: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// `minimize 1/2 x'Qx + c'x` subject to the constraints of `constraints`
/// (whose own objective is ignored).
#[derive(Clone, Debug)]
pub struct QpProblem<T> {
    pub q: Mat<T>,
    pub c: Vec<T>,
    pub constraints: LpProblem<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
    pub iterations: usize,
}

impl<T: Real> QpProblem<T> {
    pub fn new(q: Mat<T>, c: Vec<T>) -> Self {
        let n = c.len();
        Self {
            q,
            c,
            constraints: LpProblem::new(vec![T::zero(); n]),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self, x: &[T]) -> T {
        let qx = self.q.mul_vec(x);
        T::half() * linalg::dot(x, &qx) + linalg::dot(&self.c, x)
    }

    pub fn add_le(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.constraints.add_le(row, rhs);
        self
    }

    pub fn add_eq(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.constraints.add_eq(row, rhs);
        self
    }

    pub fn set_bounds(&mut self, j: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.constraints.set_bounds(j, lower, upper);
        self
    }
}

/// Inequalities `a x <= b` including bound rows.
fn inequality_rows<T: Real>(p: &LpProblem<T>) -> Vec<(Vec<T>, T)> {
    let n = p.num_vars();
    let mut rows = p.le.clone();
    for (j, &(lo, hi)) in p.bounds.iter().enumerate() {
        if let Some(lo) = lo {
            let mut r = vec![T::zero(); n];
            r[j] = -T::one();
            rows.push((r, -lo));
        }
        if let Some(hi) = hi {
            let mut r = vec![T::zero(); n];
            r[j] = T::one();
            rows.push((r, hi));
        }
    }
    rows
}

/// Solves the equality-constrained step problem; returns the step and the
/// multipliers of the working rows.
fn kkt_step<T: Real>(q: &Mat<T>, g: &[T], work: &[&[T]]) -> (Vec<T>, Vec<T>) {
    let n = g.len();
    let k = work.len();
    let build = |reg: T| {
        let mut kkt = Mat::zeros(n + k, n + k);
        for i in 0..n {
            for j in 0..n {
                kkt[(i, j)] = q[(i, j)];
            }
            kkt[(i, i)] += reg;
        }
        for (w, row) in work.iter().enumerate() {
            for j in 0..n {
                kkt[(n + w, j)] = row[j];
                kkt[(j, n + w)] = row[j];
            }
            kkt[(n + w, n + w)] = -reg;
        }
        kkt
    };
    let mut rhs: Vec<T> = g.iter().map(|&v| -v).collect();
    rhs.extend(std::iter::repeat(T::zero()).take(k));
    let scale = q.max_abs().max(T::one());
    let lu = Lu::new(&build(T::zero()), T::c(1e-13))
        .or_else(|| Lu::new(&build(scale * T::c(1e-10)), T::c(1e-16)));
    let sol = match lu {
        Some(lu) => lu.solve(&rhs),
        None => vec![T::zero(); n + k],
    };
    (sol[..n].to_vec(), sol[n..].to_vec())
}

pub fn solve_qp<T: Real>(p: &QpProblem<T>) -> Result<QpSolution<T>, QpError> {
    let n = p.num_vars();
    if p.q.rows() != n || p.q.cols() != n {
        return Err(QpError::Dimension {
            rows: p.q.rows(),
            cols: p.q.cols(),
            n,
        });
    }
    let sym = p.q.add(&p.q.transpose()).scale(T::half());
    if !linalg::is_psd(&sym, T::c(PSD_FLOOR)) {
        return Err(QpError::NotConvex);
    }

    let mut x = match solve_lp(&p.constraints)? {
        LpStatus::Optimal { x, .. } => x,
        LpStatus::Infeasible => return Err(QpError::Infeasible),
        LpStatus::Unbounded => unreachable!("zero objective cannot be unbounded"),
    };

    let ineq = inequality_rows(&p.constraints);
    let eqs: Vec<&[T]> = p.constraints.eq.iter().map(|(a, _)| a.as_slice()).collect();
    let mut active: Vec<usize> = Vec::new();
    let limit = 20 * (n + ineq.len()) + 200;
    let scale = sym.max_abs().max(linalg::norm_inf(&p.c)).max(T::one());
    let big = T::c(1e9) * scale.max(linalg::norm_inf(&x)).max(T::one());

    for iter in 0..limit {
        let qx = sym.mul_vec(&x);
        let g: Vec<T> = qx.iter().zip(&p.c).map(|(&a, &b)| a + b).collect();
        let mut work: Vec<&[T]> = eqs.clone();
        work.extend(active.iter().map(|&i| ineq[i].0.as_slice()));
        let (step, lambda) = kkt_step(&sym, &g, &work);

        let step_norm = linalg::norm_inf(&step);
        if step_norm <= T::c(1e-12) * (T::one() + linalg::norm_inf(&x)) {
            // Stationary on the working set: drop the most negative
            // inequality multiplier, if any.
            let worst = active
                .iter()
                .enumerate()
                .map(|(w, &i)| (w, i, lambda[eqs.len() + w]))
                .min_by(|a, b| a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal));
            match worst {
                Some((w, _, l)) if l < -T::c(MULTIPLIER_TOL) * scale => {
                    active.remove(w);
                }
                _ => {
                    let objective = p.objective(&x);
                    return Ok(QpSolution {
                        x,
                        objective,
                        iterations: iter,
                    });
                }
            }
            continue;
        }

        let mut alpha = T::one();
        let mut blocking = None;
        for (i, (a, b)) in ineq.iter().enumerate() {
            if active.contains(&i) {
                continue;
            }
            let ap = linalg::dot(a, &step);
            if ap > T::c(ACTIVE_TOL) * linalg::norm_inf(a) * step_norm {
                let slack = (*b - linalg::dot(a, &x)).max(T::zero());
                let t = slack / ap;
                if t < alpha {
                    alpha = t;
                    blocking = Some(i);
                }
            }
        }
        if blocking.is_none() && step_norm > big {
            return Err(QpError::Unbounded);
        }
        linalg::axpy(alpha, &step, &mut x);
        if let Some(i) = blocking {
            active.push(i);
        }
    }
    Err(QpError::MaxIterations(limit))
}
