//! Dense two-phase simplex with Bland's rule.

use thiserror::Error;

use crate::linalg;
use crate::scalar::Real;

/// Phase-one objective above which the problem is declared infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-8;
const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;
const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("simplex did not terminate within {0} pivots")]
    CycleLimit(usize),
    #[error("constraint row has {got} coefficients, expected {expected}")]
    Dimension { expected: usize, got: usize },
}

/// `minimize c . x` subject to `A_le x <= b_le`, `A_eq x = b_eq` and
/// per-variable bounds. Variables are free unless bounded.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<T> {
    pub c: Vec<T>,
    pub le: Vec<(Vec<T>, T)>,
    pub eq: Vec<(Vec<T>, T)>,
    pub bounds: Vec<(Option<T>, Option<T>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus<T> {
    Optimal { x: Vec<T>, objective: T },
    Infeasible,
    Unbounded,
}

impl<T> LpStatus<T> {
    pub fn optimal(self) -> Option<(Vec<T>, T)> {
        match self {
            LpStatus::Optimal { x, objective } => Some((x, objective)),
            _ => None,
        }
    }
}

impl<T: Real> LpProblem<T> {
    pub fn new(c: Vec<T>) -> Self {
        let n = c.len();
        Self {
            c,
            le: Vec::new(),
            eq: Vec::new(),
            bounds: vec![(None, None); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn add_le(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.le.push((row, rhs));
        self
    }

    pub fn add_ge(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.le.push((row.into_iter().map(|v| -v).collect(), -rhs));
        self
    }

    pub fn add_eq(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.eq.push((row, rhs));
        self
    }

    pub fn set_bounds(&mut self, j: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.bounds[j] = (lower, upper);
        self
    }

    pub fn objective(&self, x: &[T]) -> T {
        linalg::dot(&self.c, x)
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (a, b) in &self.le {
            worst = worst.max(linalg::dot(a, x) - *b);
        }
        for (a, b) in &self.eq {
            worst = worst.max((linalg::dot(a, x) - *b).abs());
        }
        for (xj, &(lo, hi)) in x.iter().zip(&self.bounds) {
            if let Some(lo) = lo {
                worst = worst.max(lo - *xj);
            }
            if let Some(hi) = hi {
                worst = worst.max(*xj - hi);
            }
        }
        worst
    }

    fn check(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        for (a, _) in self.le.iter().chain(&self.eq) {
            if a.len() != n {
                return Err(LpError::Dimension {
                    expected: n,
                    got: a.len(),
                });
            }
        }
        Ok(())
    }
}

/// How an original variable is expressed in nonnegative tableau columns.
#[derive(Clone, Copy, Debug)]
enum VarMap<T> {
    /// `x = shift + y`
    Shift(usize, T),
    /// `x = shift - y`
    Reflect(usize, T),
    /// `x = y+ - y-`
    Split(usize, usize),
}

struct Tableau<T> {
    /// `m` constraint rows then the objective row; last column is the rhs.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    width: usize,
}

impl<T: Real> Tableau<T> {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != T::zero() {
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = T::zero();
            }
        }
        self.basis[r] = c;
    }

    /// Installs `cost` as the objective row, priced out against the basis.
    fn set_cost(&mut self, cost: &[T]) {
        let m = self.m();
        let mut z = vec![T::zero(); self.width + 1];
        z[..cost.len()].copy_from_slice(cost);
        for i in 0..m {
            let cb = cost.get(self.basis[i]).copied().unwrap_or(T::zero());
            if cb != T::zero() {
                for (zv, &tv) in z.iter_mut().zip(&self.t[i]) {
                    *zv -= cb * tv;
                }
            }
        }
        self.t[m] = z;
    }

    /// Bland's rule iterations. `Ok(false)` means unbounded.
    fn run(&mut self, allowed: &[bool], pivots: &mut usize, limit: usize) -> Result<bool, LpError> {
        let m = self.m();
        let ptol = T::c(PIVOT_TOL);
        let ctol = T::c(COST_TOL);
        loop {
            let entering = (0..self.width).find(|&j| allowed[j] && self.t[m][j] < -ctol);
            let Some(c) = entering else {
                return Ok(true);
            };
            // Harris two-pass ratio test: bound the step with a small
            // feasibility slack, then take the largest pivot under it.
            let rhs = |i: usize| self.t[i][self.width].max(T::zero());
            let mut bound: Option<T> = None;
            for i in 0..m {
                let a = self.t[i][c];
                if a > ptol {
                    let r = (rhs(i) + T::c(RATIO_SLACK)) / a;
                    bound = Some(bound.map_or(r, |b: T| b.min(r)));
                }
            }
            let Some(bound) = bound else {
                return Ok(false);
            };
            let mut leave: Option<usize> = None;
            for i in 0..m {
                let a = self.t[i][c];
                if a > ptol && rhs(i) / a <= bound {
                    leave = match leave {
                        Some(l) if self.t[l][c] > a || (self.t[l][c] == a && self.basis[l] < self.basis[i]) => Some(l),
                        _ => Some(i),
                    };
                }
            }
            let Some(r) = leave else {
                return Ok(false);
            };
            *pivots += 1;
            if *pivots > limit {
                return Err(LpError::CycleLimit(limit));
            }
            self.pivot(r, c);
            for i in 0..m {
                let b = &mut self.t[i][self.width];
                if *b < T::zero() {
                    *b = T::zero();
                }
            }
        }
    }
}

pub fn solve_lp<T: Real>(p: &LpProblem<T>) -> Result<LpStatus<T>, LpError> {
    p.check()?;
    let n = p.num_vars();

    // Map bounded/free variables onto nonnegative columns; finite upper
    // bounds on shifted variables become extra rows.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut extra_rows: Vec<(usize, T)> = Vec::new();
    for &(lo, hi) in &p.bounds {
        match (lo, hi) {
            (Some(l), Some(h)) if l > h => return Ok(LpStatus::Infeasible),
            (Some(l), h) => {
                maps.push(VarMap::Shift(ncols, l));
                if let Some(h) = h {
                    extra_rows.push((ncols, h - l));
                }
                ncols += 1;
            }
            (None, Some(h)) => {
                maps.push(VarMap::Reflect(ncols, h));
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split(ncols, ncols + 1));
                ncols += 2;
            }
        }
    }

    // Each row: coefficients over y, rhs, and whether it carries a slack.
    let translate = |a: &[T], b: T| -> (Vec<T>, T) {
        let mut row = vec![T::zero(); ncols];
        let mut rhs = b;
        for (j, &aj) in a.iter().enumerate() {
            match maps[j] {
                VarMap::Shift(k, s) => {
                    row[k] += aj;
                    rhs -= aj * s;
                }
                VarMap::Reflect(k, s) => {
                    row[k] -= aj;
                    rhs -= aj * s;
                }
                VarMap::Split(k, l) => {
                    row[k] += aj;
                    row[l] -= aj;
                }
            }
        }
        (row, rhs)
    };
    let mut rows: Vec<(Vec<T>, T, bool)> = Vec::new();
    for (a, b) in &p.le {
        let (r, rhs) = translate(a, *b);
        rows.push((r, rhs, true));
    }
    for &(k, ub) in &extra_rows {
        let mut r = vec![T::zero(); ncols];
        r[k] = T::one();
        rows.push((r, ub, true));
    }
    for (a, b) in &p.eq {
        let (r, rhs) = translate(a, *b);
        rows.push((r, rhs, false));
    }

    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.2).count();
    // Columns: y (ncols), slacks (nslack), artificials (m).
    let art0 = ncols + nslack;
    let width = art0 + m;
    let mut t = vec![vec![T::zero(); width + 1]; m + 1];
    let mut basis = vec![0; m];
    let mut slack = ncols;
    for (i, (r, rhs, has_slack)) in rows.iter().enumerate() {
        let rn = linalg::norm_inf(r);
        let scale = if rn > T::zero() {
            rn
        } else {
            rhs.abs().max(T::one())
        };
        let sign = if *rhs < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        for j in 0..ncols {
            t[i][j] = sign * r[j] / scale;
        }
        if *has_slack {
            t[i][slack] = sign / scale;
            slack += 1;
        }
        t[i][width] = sign * *rhs / scale;
        t[i][art0 + i] = T::one();
        basis[i] = art0 + i;
    }
    let mut tab = Tableau { t, basis, width };
    let limit = 100 * (m + width) + 1000;
    let mut pivots = 0;

    // Phase one: minimize the sum of artificials.
    let mut cost1 = vec![T::zero(); width];
    for c in cost1.iter_mut().skip(art0) {
        *c = T::one();
    }
    tab.set_cost(&cost1);
    let all = vec![true; width];
    tab.run(&all, &mut pivots, limit)?;
    let infeas = tab
        .basis
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b >= art0)
        .fold(T::zero(), |acc, (i, _)| acc + tab.t[i][width]);
    if infeas > T::c(FEASIBILITY_TOL) {
        return Ok(LpStatus::Infeasible);
    }

    // Drive remaining artificials out of the basis or drop redundant rows.
    let mut i = 0;
    while i < tab.m() {
        if tab.basis[i] >= art0 {
            let col = (0..art0)
                .filter(|&j| tab.t[i][j].abs() > T::c(1e-9))
                .max_by(|&a, &b| {
                    tab.t[i][a]
                        .abs()
                        .partial_cmp(&tab.t[i][b].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            match col {
                Some(c) => tab.pivot(i, c),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase two.
    let mut cost2 = vec![T::zero(); width];
    for (j, &cj) in p.c.iter().enumerate() {
        match maps[j] {
            VarMap::Shift(k, _) => cost2[k] += cj,
            VarMap::Reflect(k, _) => cost2[k] -= cj,
            VarMap::Split(k, l) => {
                cost2[k] += cj;
                cost2[l] -= cj;
            }
        }
    }
    tab.set_cost(&cost2);
    let allowed: Vec<bool> = (0..width).map(|j| j < art0).collect();
    if !tab.run(&allowed, &mut pivots, limit)? {
        return Ok(LpStatus::Unbounded);
    }

    let mut y = vec![T::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.t[i][tab.width].max(T::zero());
    }
    let x: Vec<T> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift(k, s) => s + y[k],
            VarMap::Reflect(k, s) => s - y[k],
            VarMap::Split(k, l) => y[k] - y[l],
        })
        .collect();
    let objective = p.objective(&x);
    Ok(LpStatus::Optimal { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0.
        let mut lp = LpProblem::<f64>::new(vec![-3.0, -5.0]);
        lp.add_le(vec![1.0, 0.0], 4.0)
            .add_le(vec![0.0, 2.0], 12.0)
            .add_le(vec![3.0, 2.0], 18.0)
            .set_bounds(0, Some(0.0), None)
            .set_bounds(1, Some(0.0), None);
        let (x, obj) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
        assert!((obj + 36.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LpProblem::<f64>::new(vec![1.0]);
        lp.add_le(vec![1.0], -1.0).set_bounds(0, Some(0.0), None);
        assert_eq!(solve_lp(&lp).unwrap(), LpStatus::Infeasible);

        let mut lp = LpProblem::<f64>::new(vec![-1.0, 0.0]);
        lp.add_le(vec![0.0, 1.0], 1.0);
        assert_eq!(solve_lp(&lp).unwrap(), LpStatus::Unbounded);
    }

    #[test]
    fn free_and_reflected_variables() {
        // min x - y with x >= -2 (free below via upper), y <= 3, x + y = 0.
        let mut lp = LpProblem::<f64>::new(vec![1.0, -1.0]);
        lp.add_eq(vec![1.0, 1.0], 0.0)
            .add_ge(vec![1.0, 0.0], -2.0)
            .set_bounds(1, None, Some(3.0));
        let (x, obj) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((x[0] + 2.0).abs() < 1e-9 && (x[1] - 2.0).abs() < 1e-9);
        assert!((obj + 4.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LpProblem::<f64>::new(vec![1.0, 1.0]);
        lp.add_eq(vec![1.0, 1.0], 1.0)
            .add_eq(vec![2.0, 2.0], 2.0)
            .set_bounds(0, Some(0.0), Some(1.0))
            .set_bounds(1, Some(0.0), Some(1.0));
        let (_, obj) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((obj - 1.0).abs() < 1e-9);
    }

    #[test]
    fn crossed_bounds() {
        let mut lp = LpProblem::<f64>::new(vec![1.0]);
        lp.set_bounds(0, Some(1.0), Some(0.0));
        assert_eq!(solve_lp(&lp).unwrap(), LpStatus::Infeasible);
    }
}
