//! Exhaustive vertex and extreme-ray enumeration for small pointed
//! polyhedra. Used as an independent check on the double description code.

use crate::linalg::{self, Mat};
use crate::scalar::Real;

use super::{normalize, HRep, PolyhedronError, VRep, MEMBERSHIP_TOL, RANK_TOL};

pub const BRUTE_FORCE_MAX_DIM: usize = 8;
pub const BRUTE_FORCE_MAX_ROWS: usize = 20;

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn push_unique<T: Real>(set: &mut Vec<Vec<T>>, p: Vec<T>, tol: T) {
    if !set
        .iter()
        .any(|q| q.iter().zip(&p).all(|(&a, &b)| (a - b).abs() <= tol))
    {
        set.push(p);
    }
}

/// Vertices from every nonsingular `d`-subset of active constraints and
/// extreme rays from every rank `d - 1` subset. Only pointed polyhedra are
/// represented faithfully.
pub fn brute_force_vertices<T: Real>(h: &HRep<T>) -> Result<VRep<T>, PolyhedronError> {
    let d = h.dim();
    let m = h.ineq.rows();
    if d > BRUTE_FORCE_MAX_DIM || m > BRUTE_FORCE_MAX_ROWS {
        return Err(PolyhedronError::ScaleLimit { dim: d, rows: m });
    }
    let tol = T::c(MEMBERSHIP_TOL);
    let rank_tol = T::c(RANK_TOL);
    let ne = h.eq.rows();
    let eq_rank = if ne == 0 {
        0
    } else {
        linalg::rank(&h.eq, rank_tol)
    };
    let eq_rows: Vec<Vec<T>> = h.eq.to_rows();

    let mut vertices: Vec<Vec<T>> = Vec::new();
    if !h.is_conic() && d >= eq_rank {
        combinations(m, d - eq_rank, |s| {
            let mut rows = eq_rows.clone();
            let mut rhs = h.eq_rhs.clone();
            for &i in s {
                rows.push(h.ineq.row(i).to_vec());
                rhs.push(h.ineq_rhs[i]);
            }
            if rows.is_empty() {
                return;
            }
            let sys = Mat::from_rows(&rows);
            if linalg::rank(&sys, rank_tol) != d {
                return;
            }
            if let Some(sol) = linalg::solve_affine(&sys, &rhs, rank_tol) {
                if sol.basis.cols() == 0 && h.contains(&sol.particular, tol) {
                    push_unique(&mut vertices, sol.particular, T::c(1e-8));
                }
            }
        });
        if vertices.is_empty() {
            return Ok(VRep::empty(d));
        }
    }

    let mut rays: Vec<Vec<T>> = Vec::new();
    if d > eq_rank {
        combinations(m, d - 1 - eq_rank, |s| {
            let mut rows = eq_rows.clone();
            for &i in s {
                rows.push(h.ineq.row(i).to_vec());
            }
            let sys = if rows.is_empty() {
                Mat::zeros(0, d)
            } else {
                Mat::from_rows(&rows)
            };
            if sys.rows() > 0 && linalg::rank(&sys, rank_tol) != d - 1 {
                return;
            }
            if sys.rows() == 0 && d != 1 {
                return;
            }
            let null = if sys.rows() == 0 {
                vec![T::one()]
            } else {
                match linalg::solve_affine(&sys, &vec![T::zero(); sys.rows()], rank_tol) {
                    Some(sol) if sol.basis.cols() == 1 => sol.basis.column(0),
                    _ => return,
                }
            };
            for sign in [T::one(), -T::one()] {
                let r: Vec<T> = normalize(null.iter().map(|&x| x * sign).collect());
                if h.max_ray_violation(&r) <= tol {
                    push_unique(&mut rays, r, T::c(1e-8));
                }
            }
        });
    }

    Ok(if h.is_conic() {
        VRep::cone(rays, d)
    } else {
        VRep::new(vertices, rays, d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        let mut n = 0;
        combinations(6, 3, |_| n += 1);
        assert_eq!(n, 20);
        let mut n = 0;
        combinations(4, 0, |s| {
            assert!(s.is_empty());
            n += 1
        });
        assert_eq!(n, 1);
    }

    #[test]
    fn square() {
        let h = HRep::from_inequalities(
            Mat::from_rows(&[
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ]),
            vec![1.0; 4],
        );
        let v = brute_force_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.rays.is_empty());
    }

    #[test]
    fn scale_limit() {
        let h = HRep::<f64>::from_inequalities(Mat::zeros(21, 2), vec![0.0; 21]);
        assert!(matches!(
            brute_force_vertices(&h),
            Err(PolyhedronError::ScaleLimit { .. })
        ));
    }
}
