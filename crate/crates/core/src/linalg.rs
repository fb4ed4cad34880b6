//! Small dense linear algebra: a row-major matrix plus the handful of
//! factorizations the solvers and polyhedral routines need.

use std::ops::{Index, IndexMut};

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_iter().map(<[T]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        self.row_iter().map(|r| dot(r, x)).collect()
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = out.row_mut(i);
                for (d, &o) in dst.iter_mut().zip(orow) {
                    *d += a * o;
                }
            }
        }
        out
    }

    /// Appends the rows of `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        if self.rows == 0 {
            return other.clone();
        }
        if other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn push_row(&mut self, row: &[T]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |m, &v| if v.abs() > m { v.abs() } else { m })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn norm_inf<T: Real>(a: &[T]) -> T {
    a.iter()
        .fold(T::zero(), |m, &v| if v.abs() > m { v.abs() } else { m })
}

/// `y += alpha * x`
#[inline]
pub fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Numerical rank by Gaussian elimination with complete pivoting; pivots
/// smaller than `rel_tol` times the largest entry count as zero.
pub fn rank<T: Real>(m: &Mat<T>, rel_tol: T) -> usize {
    let scale = m.max_abs();
    if scale == T::zero() {
        return 0;
    }
    let thresh = rel_tol * scale;
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    let mut col_used = vec![false; cols];
    while r < rows.min(cols) {
        let mut best = (T::zero(), 0, 0);
        for i in r..rows {
            for (j, used) in col_used.iter().enumerate() {
                if !used && a[(i, j)].abs() > best.0 {
                    best = (a[(i, j)].abs(), i, j);
                }
            }
        }
        if best.0 <= thresh {
            break;
        }
        let (_, pi, pj) = best;
        swap_rows(&mut a, r, pi);
        col_used[pj] = true;
        let p = a[(r, pj)];
        for i in r + 1..rows {
            let f = a[(i, pj)] / p;
            if f != T::zero() {
                for j in 0..cols {
                    let v = a[(r, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

fn swap_rows<T: Real>(a: &mut Mat<T>, i: usize, j: usize) {
    if i != j {
        for c in 0..a.cols() {
            let tmp = a[(i, c)];
            a[(i, c)] = a[(j, c)];
            a[(j, c)] = tmp;
        }
    }
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Mat<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Returns `None` when a pivot falls below `rel_tol` times the largest
    /// entry.
    pub fn new(m: &Mat<T>, rel_tol: T) -> Option<Self> {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let thresh = rel_tol * m.max_abs().max(T::min_positive_value());
        for k in 0..n {
            let (pi, pv) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, T::zero()), |b, c| if c.1 > b.1 { c } else { b });
            if pv <= thresh {
                return None;
            }
            swap_rows(&mut lu, k, pi);
            perm.swap(k, pi);
            let p = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / p;
                lu[(i, k)] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= f * v;
                    }
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.perm.len();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = self.lu[(i, j)] * x[j];
                x[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = self.lu[(i, j)] * x[j];
                x[i] -= v;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solves the square system `m x = b`, or `None` if numerically singular.
pub fn solve<T: Real>(m: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    Lu::new(m, T::c(1e-14)).map(|lu| lu.solve(b))
}

/// Solution set of `e x = rhs` as `x = particular + basis * y`.
#[derive(Clone, Debug)]
pub struct AffineSolution<T> {
    pub particular: Vec<T>,
    /// Columns span the null space of `e`; orthonormal.
    pub basis: Mat<T>,
}

/// Reduces `e x = rhs` with complete pivoting. Returns `None` if the system
/// is inconsistent beyond `rel_tol` (relative to the row scale).
pub fn solve_affine<T: Real>(e: &Mat<T>, rhs: &[T], rel_tol: T) -> Option<AffineSolution<T>> {
    let n = e.cols();
    let m = e.rows();
    // Row-equilibrate so the pivot threshold is meaningful per row.
    let mut a = e.clone();
    let mut b = rhs.to_vec();
    for i in 0..m {
        let s = norm_inf(a.row(i));
        if s > T::zero() {
            for v in a.row_mut(i) {
                *v /= s;
            }
            b[i] /= s;
        } else if b[i].abs() > rel_tol {
            return None;
        }
    }
    let thresh = rel_tol;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut col_used = vec![false; n];
    let mut r = 0;
    while r < m {
        let mut best = (T::zero(), 0, 0);
        for i in r..m {
            for (j, used) in col_used.iter().enumerate() {
                if !used && a[(i, j)].abs() > best.0 {
                    best = (a[(i, j)].abs(), i, j);
                }
            }
        }
        if best.0 <= thresh {
            break;
        }
        let (_, pi, pj) = best;
        swap_rows(&mut a, r, pi);
        b.swap(r, pi);
        col_used[pj] = true;
        let p = a[(r, pj)];
        for v in a.row_mut(r) {
            *v /= p;
        }
        b[r] /= p;
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = a[(i, pj)];
            if f != T::zero() {
                for j in 0..n {
                    let v = a[(r, j)];
                    a[(i, j)] -= f * v;
                }
                let br = b[r];
                b[i] -= f * br;
            }
        }
        pivots.push((r, pj));
        r += 1;
    }
    if (r..m).any(|i| b[i].abs() > T::c(1e3) * thresh) {
        return None;
    }
    let mut particular = vec![T::zero(); n];
    for &(row, col) in &pivots {
        particular[col] = b[row];
    }
    let free: Vec<usize> = (0..n).filter(|&j| !col_used[j]).collect();
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![T::zero(); n];
        v[f] = T::one();
        for &(row, col) in &pivots {
            v[col] = -a[(row, f)];
        }
        cols.push(v);
    }
    let cols = gram_schmidt(cols, T::c(1e-12));
    let basis = Mat::from_fn(n, cols.len(), |i, j| cols[j][i]);
    // Project the particular solution off the null space: minimal norm.
    let mut particular = particular;
    for c in &cols {
        let d = dot(&particular, c);
        axpy(-d, c, &mut particular);
    }
    Some(AffineSolution { particular, basis })
}

/// Modified Gram-Schmidt; drops vectors that become numerically dependent.
pub fn gram_schmidt<T: Real>(vectors: Vec<Vec<T>>, tol: T) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        let n0 = norm(&v);
        for _ in 0..2 {
            for q in &out {
                let d = dot(&v, q);
                axpy(-d, q, &mut v);
            }
        }
        let n = norm(&v);
        if n > tol * n0.max(T::one()) {
            for x in v.iter_mut() {
                *x /= n;
            }
            out.push(v);
        }
    }
    out
}

/// True when the smallest eigenvalue of the symmetric matrix `q` is at
/// least `-floor`, tested by a Cholesky factorization of `q + floor I`.
pub fn is_psd<T: Real>(q: &Mat<T>, floor: T) -> bool {
    let n = q.rows();
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = q[(j, j)] + floor;
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= T::zero() {
            return false;
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = q[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    true
}
