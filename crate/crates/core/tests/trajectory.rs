use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zmp_core::geom::{Vec3, VirtualPlane};
use zmp_core::pendulum::*;

fn table3(p1: Vec3<f64>) -> TrajProblem<f64> {
    let p0 = Vec3::new(0.0, 0.0, 0.8);
    TrajProblem::new(p0, p1, 100, 0.01, VirtualPlane::horizontal(1.8), 9.81)
}

#[test]
fn table3_terminal_constraints_and_residual() {
    let p = table3(Vec3::new(0.3, 0.0, 0.8));
    let t = Instant::now();
    let s = generate_trajectory(&p).unwrap();
    assert!(t.elapsed().as_secs_f64() < 1.0);
    assert_eq!(s.gamma.len(), 100);
    assert!((s.eta[100] - 1.0).abs() <= 1e-6);
    assert!(s.eta_dot[100].abs() <= 1e-6);
    assert!((s.gamma[99] - 1.0).abs() <= 1e-9);
    assert!(s.gamma.iter().all(|&g| (0.0..=1.0).contains(&g)));
    let xs = simulate_discrete(&p.mode().unwrap(), p.dt, &s.gamma);
    for (k, x) in xs.iter().enumerate() {
        assert!((x[0] - s.eta[k]).abs() < 1e-9 && (x[1] - s.eta_dot[k]).abs() < 1e-9);
    }
}

#[test]
fn qp_optimality_under_feasible_perturbations() {
    let p = table3(Vec3::new(0.2, -0.1, 0.8));
    let mode = p.mode().unwrap();
    let s = generate_trajectory(&p).unwrap();
    let base = trajectory_cost(&p, &mode, &s.gamma);
    let k = s.gamma.len();
    let psi_last: Vec<[f64; 2]> = (0..k)
        .map(|j| {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            *simulate_discrete(&mode, p.dt, &e).last().unwrap()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        // Random direction projected onto the null space of the terminal
        // equalities and the free (inactive) coordinates.
        let free: Vec<usize> = (0..k - 1)
            .filter(|&j| s.gamma[j] > 1e-6 && s.gamma[j] < 1.0 - 1e-6)
            .collect();
        let mut d = vec![0.0; k];
        for &j in &free {
            d[j] = rng.gen_range(-1.0..1.0);
        }
        let rows: Vec<Vec<f64>> = (0..2)
            .map(|r| free.iter().map(|&j| psi_last[j][r]).collect())
            .collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for r in rows {
            let mut r = r;
            for b in &basis {
                let c: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                basis.push(r.iter().map(|x| x / n).collect());
            }
        }
        let mut df: Vec<f64> = free.iter().map(|&j| d[j]).collect();
        for b in &basis {
            let c: f64 = df.iter().zip(b).map(|(x, y)| x * y).sum();
            df.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = df.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if n == 0.0 {
            continue;
        }
        let mut g = s.gamma.clone();
        for (i, &j) in free.iter().enumerate() {
            g[j] += 1e-3 * df[i] / n;
        }
        if g.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            continue;
        }
        assert!(trajectory_cost(&p, &mode, &g) >= base - 1e-9);
    }
}

#[test]
fn integrated_com_follows_lnpm_and_lands_on_target() {
    let p = table3(Vec3::new(0.3, 0.1, 0.8));
    let mode = p.mode().unwrap();
    let s = generate_trajectory(&p).unwrap();
    let c = integrate_com(&s, &mode, 0.0);
    let g = Vec3::new(0.0, 0.0, -9.81);
    for i in 0..c.len() {
        let r = com_zmp_relation(
            c.pos[i],
            c.acc[i],
            Vec3::zero(),
            c.zmp[i],
            30.0,
            g,
            &p.plane,
        )
        .unwrap();
        assert!(r.norm() < 1e-6);
    }
    // Step boundaries agree with the exact discrete flow.
    for (k, &eta) in s.eta.iter().enumerate() {
        let q = c.pos[k * INTEGRATION_SUBSTEPS];
        assert!((q - (p.p0 + (p.p1 - p.p0) * eta)).norm() < 1e-9);
    }
    assert!((*c.pos.last().unwrap() - p.p1).norm() < 1e-3);
}

#[test]
fn damped_integration_settles_on_target() {
    let p = table3(Vec3::new(0.3, 0.0, 0.8));
    let mode = p.mode().unwrap();
    let s = generate_trajectory(&p).unwrap();
    let mut zmps = s.zmp.clone();
    // Hold the final ZMP for 25 s (decay rate zeta w is about 0.31 / s).
    zmps.extend(std::iter::repeat(*s.zmp.last().unwrap()).take(2500));
    let c = simulate_lpm(
        &mode,
        Vec3::e_z(),
        p.p0,
        Vec3::zero(),
        &zmps,
        p.dt,
        INTEGRATION_SUBSTEPS,
        DEFAULT_DAMPING,
    );
    let last = *c.pos.last().unwrap();
    assert!((last - p.p1).norm() < 1e-3);
    // Overshoot stays bounded (about 10% of the segment with zeta = 0.1).
    let d = p.p1 - p.p0;
    let max_eta = c
        .pos
        .iter()
        .map(|q| (*q - p.p0).dot(d) / d.dot(d))
        .fold(0.0, f64::max);
    assert!(max_eta < 1.2, "{max_eta}");
}

#[test]
fn fixed_zmp_energy_over_ten_seconds() {
    let mode = make_mode::<f64>(0.8, 1.8, 9.81).unwrap();
    let z = Vec3::new(0.0, 0.0, 1.8);
    let zmps = vec![z; 1000];
    let c = simulate_lpm(
        &mode,
        Vec3::e_z(),
        Vec3::new(0.1, 0.0, 0.8),
        Vec3::new(0.0, 0.3, 0.0),
        &zmps,
        0.01,
        10,
        0.0,
    );
    let e0 = pendulum_energy(&mode, Vec3::e_z(), c.pos[0], c.vel[0], z);
    let drift = c
        .pos
        .iter()
        .zip(&c.vel)
        .map(|(p, v)| (pendulum_energy(&mode, Vec3::e_z(), *p, *v, z) - e0).abs())
        .fold(0.0, f64::max);
    assert!(drift < 1e-6, "{drift}");
    // No divergence: the orbit radius stays within its initial envelope.
    let r_max = c
        .pos
        .iter()
        .map(|p| Vec3::new(p.x, p.y, 0.0).norm())
        .fold(0.0, f64::max);
    assert!(r_max <= 0.1 + 1e-6);
}
