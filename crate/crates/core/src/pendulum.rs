//! Linear pendulum modes (inverted below the plane, non-inverted above),
//! their exact discretization, ZMP trajectory generation along a segment
//! and COM integration.

use thiserror::Error;

use crate::contacts::ContactScene;
use crate::geom::{Vec3, VirtualPlane};
use crate::linalg::Mat;
use crate::scalar::Real;
use crate::solvers::{solve_qp, QpError, QpProblem};
use crate::support_areas::{
    pendular_support_area_dd, AreaError, SupportArea, MIN_PLANE_SEPARATION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PendulumError {
    #[error("plane is {0:e} m from the centre of mass; the pendulum is degenerate")]
    DegeneratePlane(f64),
    #[error("gravity must be positive, got {0}")]
    NonPositiveGravity(f64),
    #[error("invalid trajectory problem: {0}")]
    InvalidProblem(&'static str),
    #[error("trajectory constraints are infeasible")]
    Infeasible,
    #[error("no plane up to {cap} m from the COM contains the segment")]
    NoFeasiblePlane { cap: f64 },
    #[error("QP solver failed: {0}")]
    Solver(QpError),
    #[error(transparent)]
    Area(#[from] AreaError),
}

impl From<QpError> for PendulumError {
    fn from(e: QpError) -> Self {
        match e {
            QpError::Infeasible => PendulumError::Infeasible,
            e => PendulumError::Solver(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PendulumKind {
    /// Plane below the COM: the ZMP repels the COM.
    Inverted,
    /// Plane above the COM: the ZMP attracts it.
    NonInverted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PendulumMode<T> {
    pub kind: PendulumKind,
    pub omega: T,
    /// `|d_G - d_Z|`.
    pub height: T,
}

impl<T: Real> PendulumMode<T> {
    /// `+1` for inverted, `-1` for non-inverted: `eta'' = sign w^2 (eta - gamma)`.
    pub fn sign(&self) -> T {
        match self.kind {
            PendulumKind::Inverted => T::one(),
            PendulumKind::NonInverted => -T::one(),
        }
    }
}

pub fn make_mode<T: Real>(d_g: T, d_z: T, g: T) -> Result<PendulumMode<T>, PendulumError> {
    if !(g > T::zero()) {
        return Err(PendulumError::NonPositiveGravity(g.to_f64_lossy()));
    }
    let h = (d_g - d_z).abs();
    if !(h >= T::c(MIN_PLANE_SEPARATION)) {
        return Err(PendulumError::DegeneratePlane(h.to_f64_lossy()));
    }
    let kind = if d_z < d_g {
        PendulumKind::Inverted
    } else {
        PendulumKind::NonInverted
    };
    Ok(PendulumMode {
        kind,
        omega: (g / h).sqrt(),
        height: h,
    })
}

/// Residual of the COM/ZMP relation
/// `p''_G = g + n.(p''_G - g)/(d_G - d_Z) (G - Z) + n x L'_G / (m (d_G - d_Z))`
/// for a candidate ZMP `z` on `plane`.
pub fn com_zmp_relation<T: Real>(
    p_g: Vec3<T>,
    acc: Vec3<T>,
    l_dot: Vec3<T>,
    z: Vec3<T>,
    mass: T,
    gravity: Vec3<T>,
    plane: &VirtualPlane<T>,
) -> Result<Vec3<T>, PendulumError> {
    let n = plane.normal();
    let h = plane.height_of(p_g) - plane.offset();
    if h.abs() < T::c(MIN_PLANE_SEPARATION) {
        return Err(PendulumError::DegeneratePlane(h.to_f64_lossy()));
    }
    let rhs = gravity + (p_g - z) * (n.dot(acc - gravity) / h) + n.cross(l_dot) / (mass * h);
    Ok(acc - rhs)
}

/// Exact zero-order-hold discretization of `eta'' = s w^2 (eta - gamma)`
/// over `dt`: `x_{k+1} = a x_k + b gamma_k` with `x = (eta, eta')`.
pub fn discretize<T: Real>(mode: &PendulumMode<T>, dt: T) -> ([[T; 2]; 2], [T; 2]) {
    let w = mode.omega;
    let wt = w * dt;
    match mode.kind {
        PendulumKind::NonInverted => {
            let (s, c) = wt.sin_cos();
            ([[c, s / w], [-w * s, c]], [T::one() - c, w * s])
        }
        PendulumKind::Inverted => {
            let (s, c) = (wt.sinh(), wt.cosh());
            ([[c, s / w], [w * s, c]], [T::one() - c, -w * s])
        }
    }
}

fn step<T: Real>(a: &[[T; 2]; 2], b: &[T; 2], x: [T; 2], u: T) -> [T; 2] {
    [
        a[0][0] * x[0] + a[0][1] * x[1] + b[0] * u,
        a[1][0] * x[0] + a[1][1] * x[1] + b[1] * u,
    ]
}

/// Applies the discrete dynamics to `gamma` from the rest state at 0.
pub fn simulate_discrete<T: Real>(mode: &PendulumMode<T>, dt: T, gamma: &[T]) -> Vec<[T; 2]> {
    let (a, b) = discretize(mode, dt);
    let mut xs = vec![[T::zero(); 2]];
    for &g in gamma {
        let x = step(&a, &b, *xs.last().unwrap(), g);
        xs.push(x);
    }
    xs
}

pub const DEFAULT_DAMPING: f64 = 0.1;
pub const DEFAULT_W1: f64 = 1.0;
pub const DEFAULT_W2: f64 = 100.0;

/// Moving the COM from `p0` to `p1` (same height) while the ZMP slides
/// along their projection on the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajProblem<T> {
    pub p0: Vec3<T>,
    pub p1: Vec3<T>,
    pub steps: usize,
    pub dt: T,
    pub plane: VirtualPlane<T>,
    pub gravity: T,
    pub w1: T,
    pub w2: T,
    pub damping: T,
}

impl<T: Real> TrajProblem<T> {
    /// Default weights and damping.
    pub fn new(
        p0: Vec3<T>,
        p1: Vec3<T>,
        steps: usize,
        dt: T,
        plane: VirtualPlane<T>,
        gravity: T,
    ) -> Self {
        Self {
            p0,
            p1,
            steps,
            dt,
            plane,
            gravity,
            w1: T::c(DEFAULT_W1),
            w2: T::c(DEFAULT_W2),
            damping: T::c(DEFAULT_DAMPING),
        }
    }

    pub fn mode(&self) -> Result<PendulumMode<T>, PendulumError> {
        make_mode(
            self.plane.normal().dot(self.p0),
            self.plane.offset(),
            self.gravity,
        )
    }

    fn validate(&self) -> Result<PendulumMode<T>, PendulumError> {
        if self.steps < 2 {
            return Err(PendulumError::InvalidProblem(
                "at least two steps are required",
            ));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(PendulumError::InvalidProblem(
                "step duration must be positive",
            ));
        }
        if !(self.w1 >= T::zero() && self.w2 >= T::zero()) {
            return Err(PendulumError::InvalidProblem("weights must be nonnegative"));
        }
        if !self.p0.is_finite() || !self.p1.is_finite() {
            return Err(PendulumError::InvalidProblem("endpoints must be finite"));
        }
        let n = self.plane.normal();
        let scale = T::one() + self.p0.max_abs().max(self.p1.max_abs());
        if n.dot(self.p1 - self.p0).abs() > T::c(1e-9) * scale {
            return Err(PendulumError::InvalidProblem(
                "endpoints must be at the same height",
            ));
        }
        self.mode()
    }

    /// ZMP on the plane below (or above) a COM position.
    pub fn zmp_of(&self, p: Vec3<T>) -> Vec3<T> {
        let n = self.plane.normal();
        p - n * (self.plane.height_of(p) - self.plane.offset())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySolution<T> {
    pub p0: Vec3<T>,
    pub p1: Vec3<T>,
    pub plane: VirtualPlane<T>,
    pub dt: T,
    /// ZMP commands, one per step.
    pub gamma: Vec<T>,
    /// `eta_0 ..= eta_K`.
    pub eta: Vec<T>,
    pub eta_dot: Vec<T>,
    pub com: Vec<Vec3<T>>,
    pub zmp: Vec<Vec3<T>>,
    pub damping: T,
    pub objective: T,
}

impl<T: Real> TrajectorySolution<T> {
    pub fn steps(&self) -> usize {
        self.gamma.len()
    }
}

/// Objective `w1/K sum (eta_k - gamma_k)^2 + w2 sum (gamma_k - gamma_{k-1})^2`.
pub fn trajectory_cost<T: Real>(p: &TrajProblem<T>, mode: &PendulumMode<T>, gamma: &[T]) -> T {
    let xs = simulate_discrete(mode, p.dt, gamma);
    let k = T::c(gamma.len() as f64);
    let c1 = gamma
        .iter()
        .zip(&xs)
        .map(|(&g, x)| (x[0] - g) * (x[0] - g))
        .fold(T::zero(), |a, b| a + b)
        / k;
    let c2 = gamma
        .windows(2)
        .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
        .fold(T::zero(), |a, b| a + b);
    p.w1 * c1 + p.w2 * c2
}

fn finish<T: Real>(
    p: &TrajProblem<T>,
    gamma: Vec<T>,
    states: Vec<[T; 2]>,
    objective: T,
) -> TrajectorySolution<T> {
    let d = p.p1 - p.p0;
    let (q0, q1) = (p.zmp_of(p.p0), p.zmp_of(p.p1));
    TrajectorySolution {
        p0: p.p0,
        p1: p.p1,
        plane: p.plane,
        dt: p.dt,
        com: states.iter().map(|x| p.p0 + d * x[0]).collect(),
        zmp: gamma.iter().map(|&g| q0 + (q1 - q0) * g).collect(),
        eta: states.iter().map(|x| x[0]).collect(),
        eta_dot: states.iter().map(|x| x[1]).collect(),
        gamma,
        damping: p.damping,
        objective,
    }
}

pub fn generate_trajectory<T: Real>(
    p: &TrajProblem<T>,
) -> Result<TrajectorySolution<T>, PendulumError> {
    let mode = p.validate()?;
    let k = p.steps;
    if (p.p1 - p.p0).norm() <= T::c(1e-12) {
        // Nothing to travel: COM and ZMP stay put.
        let gamma = vec![T::one(); k];
        let states = vec![[T::one(), T::zero()]; k + 1];
        return Ok(finish(p, gamma, states, T::zero()));
    }

    // psi[j] maps gamma to the state x_j.
    let (a, b) = discretize(&mode, p.dt);
    let mut psi: Vec<[Vec<T>; 2]> = vec![[vec![T::zero(); k], vec![T::zero(); k]]];
    for j in 0..k {
        let prev = &psi[j];
        let mut next = [vec![T::zero(); k], vec![T::zero(); k]];
        for i in 0..k {
            next[0][i] = a[0][0] * prev[0][i] + a[0][1] * prev[1][i];
            next[1][i] = a[1][0] * prev[0][i] + a[1][1] * prev[1][i];
        }
        next[0][j] += b[0];
        next[1][j] += b[1];
        psi.push(next);
    }

    let kf = T::c(k as f64);
    let mut q = Mat::zeros(k, k);
    let two = T::two();
    for j in 0..k {
        // eta_j - gamma_j
        let mut row = psi[j][0].clone();
        row[j] -= T::one();
        let wgt = two * p.w1 / kf;
        for r in 0..k {
            if row[r] == T::zero() {
                continue;
            }
            for c in 0..k {
                q[(r, c)] += wgt * row[r] * row[c];
            }
        }
    }
    for j in 1..k {
        let wgt = two * p.w2;
        q[(j, j)] += wgt;
        q[(j - 1, j - 1)] += wgt;
        q[(j, j - 1)] -= wgt;
        q[(j - 1, j)] -= wgt;
    }

    let mut qp = QpProblem::new(q, vec![T::zero(); k]);
    for j in 0..k {
        qp.set_bounds(j, Some(T::zero()), Some(T::one()));
    }
    qp.add_eq(psi[k][0].clone(), T::one());
    qp.add_eq(psi[k][1].clone(), T::zero());
    let mut last = vec![T::zero(); k];
    last[k - 1] = T::one();
    qp.add_eq(last, T::one());

    let sol = solve_qp(&qp)?;
    let gamma: Vec<T> = sol
        .x
        .iter()
        .map(|&g| g.max(T::zero()).min(T::one()))
        .collect();
    let states: Vec<[T; 2]> = psi
        .iter()
        .map(|m| {
            [
                crate::linalg::dot(&m[0], &gamma),
                crate::linalg::dot(&m[1], &gamma),
            ]
        })
        .collect();
    let objective = trajectory_cost(p, &mode, &gamma);
    Ok(finish(p, gamma, states, objective))
}

/// RK4 sub-steps per trajectory step.
pub const INTEGRATION_SUBSTEPS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComSamples<T> {
    pub t: Vec<T>,
    pub pos: Vec<Vec3<T>>,
    pub vel: Vec<Vec3<T>>,
    pub acc: Vec<Vec3<T>>,
    /// ZMP held during the sub-step that starts at each sample.
    pub zmp: Vec<Vec3<T>>,
}

impl<T: Real> ComSamples<T> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Horizontal pendulum dynamics with damping `-2 zeta w v`; the velocity
/// along `n` is left untouched.
fn lpm_acc<T: Real>(
    mode: &PendulumMode<T>,
    n: Vec3<T>,
    zeta: T,
    p: Vec3<T>,
    v: Vec3<T>,
    z: Vec3<T>,
) -> Vec3<T> {
    let w = mode.omega;
    let perp = |u: Vec3<T>| u - n * n.dot(u);
    perp(p - z) * (mode.sign() * w * w) - perp(v) * (T::two() * zeta * w)
}

/// Integrates the pendulum with the ZMP held at `zmps[i]` during
/// `[i dt, (i+1) dt)`, using `substeps` RK4 steps per interval.
#[allow(clippy::too_many_arguments)]
pub fn simulate_lpm<T: Real>(
    mode: &PendulumMode<T>,
    n: Vec3<T>,
    p0: Vec3<T>,
    v0: Vec3<T>,
    zmps: &[Vec3<T>],
    dt: T,
    substeps: usize,
    zeta: T,
) -> ComSamples<T> {
    let substeps = substeps.max(1);
    let h = dt / T::c(substeps as f64);
    let mut out = ComSamples {
        t: Vec::new(),
        pos: Vec::new(),
        vel: Vec::new(),
        acc: Vec::new(),
        zmp: Vec::new(),
    };
    let (mut p, mut v) = (p0, v0);
    let mut t = T::zero();
    let f = |p: Vec3<T>, v: Vec3<T>, z: Vec3<T>| lpm_acc(mode, n, zeta, p, v, z);
    for (i, &z) in zmps.iter().enumerate() {
        for s in 0..substeps {
            out.t.push(t);
            out.pos.push(p);
            out.vel.push(v);
            out.acc.push(f(p, v, z));
            out.zmp.push(z);
            let (k1p, k1v) = (v, f(p, v, z));
            let (k2p, k2v) = (
                v + k1v * (h / T::two()),
                f(p + k1p * (h / T::two()), v + k1v * (h / T::two()), z),
            );
            let (k3p, k3v) = (
                v + k2v * (h / T::two()),
                f(p + k2p * (h / T::two()), v + k2v * (h / T::two()), z),
            );
            let (k4p, k4v) = (v + k3v * h, f(p + k3p * h, v + k3v * h, z));
            let six = T::c(6.0);
            p = p + (k1p + k2p * T::two() + k3p * T::two() + k4p) * (h / six);
            v = v + (k1v + k2v * T::two() + k3v * T::two() + k4v) * (h / six);
            t = dt * T::c(i as f64) + h * T::c((s + 1) as f64);
        }
    }
    let z = zmps.last().copied().unwrap_or(p);
    out.t.push(t);
    out.pos.push(p);
    out.vel.push(v);
    out.acc.push(f(p, v, z));
    out.zmp.push(z);
    out
}

/// Integrates the COM under the piecewise-constant ZMP of `sol`, starting
/// at rest at `p0`.
pub fn integrate_com<T: Real>(
    sol: &TrajectorySolution<T>,
    mode: &PendulumMode<T>,
    zeta: T,
) -> ComSamples<T> {
    simulate_lpm(
        mode,
        sol.plane.normal(),
        sol.p0,
        Vec3::zero(),
        &sol.zmp,
        sol.dt,
        INTEGRATION_SUBSTEPS,
        zeta,
    )
}

/// Orbital energy `|v|^2/2 - s w^2 |G - Z|^2 / 2` of the horizontal motion,
/// conserved when the ZMP is fixed and there is no damping.
pub fn pendulum_energy<T: Real>(
    mode: &PendulumMode<T>,
    n: Vec3<T>,
    p: Vec3<T>,
    v: Vec3<T>,
    z: Vec3<T>,
) -> T {
    let perp = |u: Vec3<T>| u - n * n.dot(u);
    let (r, u) = (perp(p - z), perp(v));
    T::half() * u.dot(u) - mode.sign() * T::half() * mode.omega * mode.omega * r.dot(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StanceOptions<T> {
    pub growth: T,
    /// Largest distance from the COM to the plane.
    pub cap: T,
    /// Required distance from the ZMP segment to the area boundary.
    pub margin: T,
    pub steps: usize,
    pub dt: T,
}

impl<T: Real> Default for StanceOptions<T> {
    fn default() -> Self {
        Self {
            growth: T::c(1.5),
            cap: T::c(5.0),
            margin: T::c(0.01),
            steps: 100,
            dt: T::c(0.01),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StancePlan<T> {
    pub d_z: T,
    pub problem: TrajProblem<T>,
    pub start_area: SupportArea<T>,
    pub end_area: SupportArea<T>,
    /// Distance from the segment to each area's boundary.
    pub start_margin: T,
    pub end_margin: T,
    /// Every plane offset tried, in order.
    pub tried: Vec<T>,
}

fn segment_margin<T: Real>(area: &SupportArea<T>, a: Vec3<T>, b: Vec3<T>) -> T {
    let sa = area.shape.signed_distance(area.plane.to_plane(a));
    let sb = area.shape.signed_distance(area.plane.to_plane(b));
    -sa.max(sb)
}

/// Moves the horizontal plane away from the COM (by `growth` each time)
/// until the pendular areas at both endpoints contain the ZMP segment with
/// the requested margin.
pub fn plan_stance_transition<T: Real>(
    start: &ContactScene<T>,
    end: &ContactScene<T>,
    p_start: Vec3<T>,
    p_end: Vec3<T>,
    d_z_init: T,
    opts: &StanceOptions<T>,
) -> Result<StancePlan<T>, PendulumError> {
    let z_g = p_start.z;
    let mut h = d_z_init - z_g;
    if h.abs() < T::c(MIN_PLANE_SEPARATION) {
        return Err(PendulumError::DegeneratePlane(h.to_f64_lossy()));
    }
    if !(opts.growth > T::one()) {
        return Err(PendulumError::InvalidProblem(
            "plane growth factor must exceed 1",
        ));
    }
    let mut s0 = start.clone();
    s0.com = p_start;
    let mut s1 = end.clone();
    s1.com = p_end;
    let mut tried = Vec::new();
    while h.abs() <= opts.cap {
        let d_z = z_g + h;
        tried.push(d_z);
        let plane = VirtualPlane::horizontal(d_z);
        let areas = pendular_support_area_dd(&s0, &plane)
            .and_then(|a| Ok((a, pendular_support_area_dd(&s1, &plane)?)));
        match areas {
            Ok((a0, a1)) => {
                let mut problem = TrajProblem::new(
                    p_start,
                    p_end,
                    opts.steps,
                    opts.dt,
                    plane,
                    start.gravity_norm(),
                );
                let (q0, q1) = (problem.zmp_of(p_start), problem.zmp_of(p_end));
                let (m0, m1) = (segment_margin(&a0, q0, q1), segment_margin(&a1, q0, q1));
                if m0 >= opts.margin && m1 >= opts.margin {
                    problem.steps = opts.steps;
                    return Ok(StancePlan {
                        d_z,
                        problem,
                        start_area: a0,
                        end_area: a1,
                        start_margin: m0,
                        end_margin: m1,
                        tried,
                    });
                }
            }
            Err(AreaError::EmptyArea) => {}
            Err(e) => return Err(e.into()),
        }
        h = h * opts.growth;
    }
    Err(PendulumError::NoFeasiblePlane {
        cap: opts.cap.to_f64_lossy(),
    })
}
