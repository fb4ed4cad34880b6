//! Double description method on homogeneous cones `{x : A x >= 0}`.

use crate::linalg::{self, Mat};
use crate::scalar::Real;

use super::{normalize, HRep, PolyhedronError, VRep, RANK_TOL};

/// Knobs for the double description conversions.
#[derive(Clone, Debug)]
pub struct DdOptions {
    /// Eliminate equalities before iterating (otherwise each equality is
    /// processed as a pair of opposite inequalities).
    pub reduce_equalities: bool,
    /// Abort with `IterationLimit` once the intermediate generator count
    /// exceeds this.
    pub max_rays: usize,
    /// Abort with `IterationLimit` after this many candidate pairs.
    pub max_pairs: u64,
    /// Sign tolerance for `a . r` with unit rows and unit rays.
    pub zero_tol: f64,
}

impl Default for DdOptions {
    fn default() -> Self {
        Self {
            reduce_equalities: true,
            max_rays: 50_000,
            max_pairs: 2_000_000_000,
            zero_tol: 1e-9,
        }
    }
}

/// Minimal generators of `{x : A x >= 0}`: `cone(rays) + span(lines)`.
#[derive(Clone, Debug)]
pub struct ConeGenerators<T> {
    pub rays: Vec<Vec<T>>,
    pub lines: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Self) -> Self {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count_and(&self, other: &Self) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits & (1 << b) != 0)
                .map(move |b| w * 64 + b)
        })
    }
}

struct Ray<T> {
    v: Vec<T>,
    zero: BitSet,
}

fn lex_cmp<T: Real>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Generators of `{x : rows x >= 0}`. Rows are processed in the given
/// order after the optional `first` rows (kept in front).
pub fn dd_cone<T: Real>(
    rows: &Mat<T>,
    first: usize,
    opts: &DdOptions,
) -> Result<ConeGenerators<T>, PolyhedronError> {
    let d = rows.cols();
    let m = rows.rows();
    let tol = T::c(opts.zero_tol);

    let unit_rows: Vec<Vec<T>> = rows.row_iter().map(|r| normalize(r.to_vec())).collect();
    let mut order: Vec<usize> = (first..m).collect();
    order.sort_by(|&i, &j| lex_cmp(&unit_rows[i], &unit_rows[j]));
    let order: Vec<usize> = (0..first.min(m)).chain(order).collect();

    let mut lines: Vec<Vec<T>> = (0..d)
        .map(|i| {
            let mut e = vec![T::zero(); d];
            e[i] = T::one();
            e
        })
        .collect();
    let mut rays: Vec<Ray<T>> = Vec::new();
    let mut processed: Vec<usize> = Vec::new();
    let mut pairs: u64 = 0;

    for &k in &order {
        let a = &unit_rows[k];
        if linalg::norm_inf(a) == T::zero() {
            processed.push(k);
            continue;
        }

        // Lineality first: the row cuts a line into a ray.
        let pivot = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (i, linalg::dot(a, l)))
            .max_by(|x, y| {
                x.1.abs()
                    .partial_cmp(&y.1.abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        if let Some((pi, s)) = pivot.filter(|p| p.1.abs() > tol) {
            let mut l = lines.swap_remove(pi);
            let mut s = s;
            if s < T::zero() {
                l.iter_mut().for_each(|x| *x = -*x);
                s = -s;
            }
            for other in lines.iter_mut() {
                let t = linalg::dot(a, other) / s;
                linalg::axpy(-t, &l, other);
                *other = normalize(std::mem::take(other));
            }
            for r in rays.iter_mut() {
                let t = linalg::dot(a, &r.v) / s;
                linalg::axpy(-t, &l, &mut r.v);
                r.v = normalize(std::mem::take(&mut r.v));
                r.zero.insert(k);
            }
            let mut zero = BitSet::new(m);
            for &p in &processed {
                zero.insert(p);
            }
            rays.push(Ray { v: l, zero });
            processed.push(k);
            continue;
        }

        let vals: Vec<T> = rays.iter().map(|r| linalg::dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > tol).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < -tol).collect();

        let mut fresh: Vec<Ray<T>> = Vec::new();
        if !pos.is_empty() && !neg.is_empty() {
            // Two rays bound a 2-face when their common zero set has rank
            // d - lin - 2.
            let target = d.saturating_sub(lines.len() + 2);
            // Zero sets packed contiguously for the blocker scan.
            let words = rays.first().map_or(1, |r| r.zero.0.len());
            let packed: Vec<u64> = rays.iter().flat_map(|r| r.zero.0.iter().copied()).collect();
            for &p in &pos {
                for &n in &neg {
                    pairs += 1;
                    if pairs > opts.max_pairs {
                        return Err(PolyhedronError::IterationLimit(rays.len() + fresh.len()));
                    }
                    if rays[p].zero.count_and(&rays[n].zero) < target {
                        continue;
                    }
                    let common = rays[p].zero.and(&rays[n].zero);
                    let c = &common.0;
                    let blocked = if words == 1 {
                        let c = c[0];
                        packed
                            .iter()
                            .enumerate()
                            .any(|(i, &z)| z & c == c && i != p && i != n)
                    } else {
                        packed.chunks_exact(words).enumerate().any(|(i, z)| {
                            z.iter().zip(c).all(|(x, y)| x & y == *y) && i != p && i != n
                        })
                    };
                    if blocked {
                        continue;
                    }
                    if target > 0 {
                        let sub: Vec<Vec<T>> =
                            common.iter().map(|i| unit_rows[i].clone()).collect();
                        let sub = Mat::from_rows(&sub);
                        // Lineality directions are orthogonal to every
                        // processed row, so the rank is taken in full space.
                        if linalg::rank(&sub, T::c(RANK_TOL)) != target {
                            continue;
                        }
                    }
                    let (sp, sn) = (vals[p], vals[n]);
                    let mut v: Vec<T> = rays[n].v.iter().map(|&x| x * sp).collect();
                    linalg::axpy(-sn, &rays[p].v, &mut v);
                    let mut zero = common;
                    zero.insert(k);
                    fresh.push(Ray {
                        v: normalize(v),
                        zero,
                    });
                    if rays.len() + fresh.len() > opts.max_rays {
                        return Err(PolyhedronError::IterationLimit(opts.max_rays));
                    }
                }
            }
        }

        let mut next: Vec<Ray<T>> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i] < -tol {
                continue;
            }
            if vals[i] <= tol {
                r.zero.insert(k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
        processed.push(k);
    }

    Ok(ConeGenerators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lines,
    })
}

pub(super) fn hrep_to_vrep_inner<T: Real>(
    h: &HRep<T>,
    conic: bool,
    opts: &DdOptions,
) -> Result<VRep<T>, PolyhedronError> {
    let d = h.dim();
    let eq_pairs = if opts.reduce_equalities {
        0
    } else {
        h.eq.rows()
    };
    if conic {
        let mut rows: Vec<Vec<T>> = h
            .ineq
            .row_iter()
            .map(|r| r.iter().map(|&x| -x).collect())
            .collect();
        for i in 0..eq_pairs {
            rows.push(h.eq.row(i).to_vec());
            rows.push(h.eq.row(i).iter().map(|&x| -x).collect());
        }
        let rows = if rows.is_empty() {
            Mat::zeros(0, d)
        } else {
            Mat::from_rows(&rows)
        };
        let g = dd_cone(&rows, 0, opts)?;
        let mut out = g.rays;
        for l in g.lines {
            out.push(l.iter().map(|&x| -x).collect());
            out.push(l);
        }
        return Ok(VRep::cone(out, d));
    }

    // Homogenize: a x <= b becomes b x0 - a x >= 0, with x0 >= 0 first.
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(1 + h.ineq.rows() + 2 * eq_pairs);
    let mut x0 = vec![T::zero(); d + 1];
    x0[0] = T::one();
    rows.push(x0);
    for i in 0..h.ineq.rows() {
        let mut r = vec![h.ineq_rhs[i]];
        r.extend(h.ineq.row(i).iter().map(|&x| -x));
        rows.push(r);
    }
    for i in 0..eq_pairs {
        let mut r = vec![h.eq_rhs[i]];
        r.extend(h.eq.row(i).iter().map(|&x| -x));
        rows.push(r.iter().map(|&x| -x).collect());
        rows.push(r);
    }
    let g = dd_cone(&Mat::from_rows(&rows), 1, opts)?;
    let tol = T::c(opts.zero_tol);

    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in g.rays {
        if r[0] > tol {
            vertices.push(r[1..].iter().map(|&x| x / r[0]).collect());
        } else {
            rays.push(normalize(r[1..].to_vec()));
        }
    }
    for l in g.lines {
        let dir = normalize(l[1..].to_vec());
        rays.push(dir.iter().map(|&x| -x).collect());
        rays.push(dir);
    }
    if vertices.is_empty() {
        return Ok(VRep::empty(d));
    }
    Ok(VRep::new(vertices, rays, d))
}

pub(super) fn vrep_to_hrep_inner<T: Real>(
    v: &VRep<T>,
    opts: &DdOptions,
) -> Result<HRep<T>, PolyhedronError> {
    let d = v.dim();
    let tol = T::c(opts.zero_tol);
    if v.conic {
        // Dual cone {y : r . y >= 0}; its rays y give facets -y . x <= 0.
        if v.rays.is_empty() {
            return Ok(
                HRep::cone(Mat::zeros(0, d)).with_equalities(Mat::identity(d), vec![T::zero(); d])
            );
        }
        let g = dd_cone(&Mat::from_rows(&v.rays), 0, opts)?;
        let ineq: Vec<Vec<T>> = g
            .rays
            .iter()
            .map(|y| normalize(y.iter().map(|&x| -x).collect()))
            .collect();
        let eq: Vec<Vec<T>> = g.lines.into_iter().map(normalize).collect();
        let ineq_m = if ineq.is_empty() {
            Mat::zeros(0, d)
        } else {
            Mat::from_rows(&ineq)
        };
        let eq_m = if eq.is_empty() {
            Mat::zeros(0, d)
        } else {
            Mat::from_rows(&eq)
        };
        let ne = eq.len();
        return Ok(HRep::cone(ineq_m).with_equalities(eq_m, vec![T::zero(); ne]));
    }
    if v.vertices.is_empty() {
        return Err(PolyhedronError::EmptyInput);
    }

    // Dual: (y0, y) with y0 + y . v >= 0 and y . r >= 0.
    let mut gens: Vec<Vec<T>> = Vec::with_capacity(v.vertices.len() + v.rays.len());
    for p in &v.vertices {
        let mut g = vec![T::one()];
        g.extend_from_slice(p);
        gens.push(g);
    }
    for r in &v.rays {
        let mut g = vec![T::zero()];
        g.extend_from_slice(r);
        gens.push(g);
    }
    let g = dd_cone(&Mat::from_rows(&gens), 0, opts)?;

    let mut ineq = Vec::new();
    let mut rhs = Vec::new();
    for y in g.rays {
        let n = linalg::norm(&y[1..]);
        if n <= tol {
            // y0 >= 0: trivially valid.
            continue;
        }
        ineq.push(y[1..].iter().map(|&x| -x / n).collect::<Vec<T>>());
        rhs.push(y[0] / n);
    }
    let mut eq = Vec::new();
    let mut eq_rhs = Vec::new();
    for l in g.lines {
        let n = linalg::norm(&l[1..]);
        if n <= tol {
            continue;
        }
        eq.push(l[1..].iter().map(|&x| x / n).collect::<Vec<T>>());
        eq_rhs.push(-l[0] / n);
    }
    let ineq_m = if ineq.is_empty() {
        Mat::zeros(0, d)
    } else {
        Mat::from_rows(&ineq)
    };
    let eq_m = if eq.is_empty() {
        Mat::zeros(0, d)
    } else {
        Mat::from_rows(&eq)
    };
    Ok(HRep::from_inequalities(ineq_m, rhs).with_equalities(eq_m, eq_rhs))
}
