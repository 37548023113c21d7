mod common;

use std::f64::consts::PI;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reinhardt_core::control::{control_matrix, ControlPoint};
use reinhardt_core::dynamics::{constant_control_solution, BangBangSchedule, ExtendedState};
use reinhardt_core::extremals::*;
use reinhardt_core::halfplane::{phi, phi_inv};
use reinhardt_core::sl2::{GroupMatrix, TracelessMatrix};
use reinhardt_core::Complex;

fn cross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

#[test]
fn single_segment_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for v in 0..3 {
        let s = random_state(&mut rng);
        let sched = BangBangSchedule::new(vec![(v, 0.05)]).unwrap();
        let Ok(traj) = bang_bang_run(&s.x, &sched, Some((s.l1, s.lr)), 10) else {
            continue;
        };
        let zu = control_matrix(&ControlPoint::vertex(v));
        for (t, st) in traj.times.iter().zip(&traj.states) {
            let cf =
                constant_control_solution(&ExtendedState::from_costates(s.x, s.l1, s.lr), &zu, *t)
                    .unwrap();
            assert!(st.max_abs_diff(&cf) < 1e-12);
        }
    }
}

#[test]
fn switching_is_continuous() {
    let x0 = phi(reinhardt_core::halfplane::HalfPlanePoint::new(0.0, 0.9).unwrap());
    let sched = BangBangSchedule::new(vec![(2, 0.1), (0, 0.1), (1, 0.1)]).unwrap();
    let traj = bang_bang_run(&x0, &sched, None, 50).unwrap();
    for w in traj.times.windows(2) {
        assert!(w[1] > w[0]);
    }
    let step = traj
        .states
        .windows(2)
        .map(|w| w[0].x.trace_form(&w[0].x) - w[1].x.trace_form(&w[1].x))
        .fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(step < 1e-12);
    let jumps = traj
        .states
        .windows(2)
        .map(|w| (w[1].x - w[0].x).max_abs())
        .fold(0.0f64, f64::max);
    assert!(jumps < 0.05);
}

#[test]
fn vertex_one_segment_is_a_straight_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tested = 0;
    while tested < 20 {
        let z = star_point(&mut rng, 0.1);
        let sched = BangBangSchedule::new(vec![(1, rng.gen_range(0.02..0.2))]).unwrap();
        let Ok(traj) = bang_bang_run(&phi(z), &sched, None, 20) else {
            continue;
        };
        let pts: Vec<(f64, f64)> = traj
            .states
            .iter()
            .map(|s| {
                let p = phi_inv(&s.x).unwrap();
                (p.x, p.y)
            })
            .collect();
        let (a, b) = (pts[0], *pts.last().unwrap());
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        for p in &pts {
            assert!(cross(a, b, *p).abs() / len.max(1e-300) < 1e-9);
        }
        tested += 1;
    }
}

#[test]
fn schedules_are_validated() {
    assert!(BangBangSchedule::new(vec![]).is_err());
    assert!(BangBangSchedule::new(vec![(3, 1.0)]).is_err());
    assert!(BangBangSchedule::new(vec![(0, 0.0)]).is_err());
    assert!(BangBangSchedule::new(vec![(0, f64::NAN)]).is_err());
    let s = BangBangSchedule::new(vec![(0, 0.5), (2, 0.25)]).unwrap();
    assert_eq!(s.total(), 0.75);
    assert_eq!(s.breakpoints(), vec![0.0, 0.5, 0.75]);
    assert_eq!(s.vertex_at(0.6), 2);
    // Star violation at the start is rejected.
    let bad = TracelessMatrix::new(1.0, 0.0, 0.0);
    assert!(bang_bang_run(&bad, &s, None, 4).is_err());
    assert!(octagon_shoot(0, 10).is_err());
}

#[test]
fn circle_extremal_summary() {
    let c = circle_extremal(1000).unwrap();
    assert!((c.density - PI / 12f64.sqrt()).abs() < 1e-9);
    assert!((c.density - 0.906_899_682_117_108_9).abs() < 1e-12);
    assert!((c.t_final - PI / 3.0).abs() < 1e-15);
    assert!(
        c.trajectory
            .final_state()
            .g
            .sub(&GroupMatrix::r())
            .max_abs()
            < 1e-12
    );
    assert!(c.transversality.max() < 1e-12);
    assert!((c.trajectory.cost() - PI).abs() < 1e-12);
    for rec in &c.trajectory.controls {
        assert!(rec.hamiltonian.abs() < 1e-14);
    }
    let s = c.trajectory.states[0];
    assert_eq!(s.x, TracelessMatrix::J);
    assert!((s.l1 - TracelessMatrix::J.scale(-1.5)).max_abs() < 1e-15);
    assert_eq!(s.lr, TracelessMatrix::ZERO);
}

#[test]
fn circle_boundary_is_the_unit_disk() {
    let c = circle_extremal(10_000).unwrap();
    let b = reconstruct_boundary(&c.trajectory, 0).unwrap();
    assert!(b.closed);
    assert!(b.closure_residual < 1e-12);
    assert!((b.area - PI).abs() < 1e-6, "{}", b.area);
    for p in &b.polygon {
        assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-12);
    }
    for s in &b.samples {
        assert!(s.residuals().max() < 1e-12);
    }
}

#[test]
fn octagon_k1() {
    let sol = octagon_shoot(1, 400).unwrap();
    let target = smoothed_octagon_density();
    assert!((target - 0.902414).abs() < 1e-6);
    assert!(
        (sol.density - target).abs() < 1e-3,
        "{} {}",
        sol.density,
        target
    );
    assert!(sol.transversality.max() < 1e-6);
    assert!(sol.max_hamiltonian < 1e-6);
    assert!(sol.costate_residual < 1e-6);
    assert_eq!(sol.schedule.segments.len(), 4);
    // Off the switching times the scheduled vertex is the maximizer.
    assert!(sol.max_maximality_gap < 1e-9, "{}", sol.max_maximality_gap);
    assert_eq!(sol.edge_samples, 0);
    // The end point is R^-1 applied to the start in the half-plane.
    let z0 = Complex::new(0.0, sol.y0);
    let want = GroupMatrix::r().inverse().mobius(z0).unwrap();
    let zf = phi_inv(&sol.trajectory.final_state().x).unwrap();
    assert!((zf.x - want.re).abs() < 1e-6 && (zf.y - want.im).abs() < 1e-6);
}

#[test]
fn octagon_boundary_area_matches_cost() {
    let sol = octagon_shoot(1, 2000).unwrap();
    let b = reconstruct_boundary(&sol.trajectory, 0).unwrap();
    assert!(b.closed, "{}", b.closure_residual);
    let cost = sol.trajectory.cost();
    assert!(((b.area - cost) / cost).abs() < 1e-4, "{} {}", b.area, cost);
    for s in &b.samples {
        assert!(s.residuals().max() < 1e-9);
    }
}

#[test]
fn higher_gons_shrink_toward_i() {
    let d: Vec<f64> = (1..=3)
        .map(|k| octagon_shoot(k, 100).unwrap())
        .map(|s| {
            assert!(s.transversality.max() < 1e-6);
            assert!(s.max_hamiltonian < 1e-6);
            s.max_distance_to_i
        })
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn escape_curvature_on_random_star_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let zu = control_matrix(&ControlPoint::vertex(2));
    for _ in 0..1000 {
        let x = phi(star_point(&mut rng, 1e-3));
        let xdot = zu.scale(1.0 / zu.trace_form(&x)).commutator(&x);
        let v = state_curvatures(&x, &xdot);
        let e = escape_curvature(&x);
        assert!(e > 0.0);
        assert!(v[0].abs() < 1e-10 && v[1].abs() < 1e-10);
        assert!((v[2] - e).abs() < 1e-10 * (1.0 + e));
    }
}

#[test]
fn hypotrochoid_wedge_and_sum() {
    for (rr, r, rho) in [(1.0, 0.3, 1.0), (0.2, 1.5, 0.25), (2.0, -0.7, 1.0 / 7.0)] {
        for i in 0..1000 {
            let t = 20.0 * i as f64 / 1000.0;
            let m = hypotrochoid_multicurve(rr, r, rho, t).unwrap();
            let res = m.residuals();
            assert!(res.wedge < 1e-12 && res.sum < 1e-12 && res.antipodal < 1e-12);
            let (s0, s2) = (m.points[0], m.points[2]);
            // Im(conj(s0) s2) is the wedge.
            let im = s0[0] * s2[1] - s0[1] * s2[0];
            assert!((im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
    }
    assert!(hypotrochoid_multicurve(1.0, -1.0, 1.0, 0.0).is_err());
}

#[test]
fn period_shift_permutes_even_points() {
    for rho in [1.0, 0.25, 1.0 / 7.0] {
        let shift = hypotrochoid_period_shift(rho);
        for i in 0..200 {
            let t = 0.037 * i as f64;
            let a = hypotrochoid_multicurve(1.3, 0.4, rho, t + shift).unwrap();
            let b = hypotrochoid_multicurve(1.3, 0.4, rho, t).unwrap();
            for j in 0..3 {
                let (p, q) = (a.points[2 * j], b.points[(2 * j + 2) % 6]);
                assert!((p[0] - q[0]).abs() < 1e-10 && (p[1] - q[1]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn standard_hypotrochoid_renders_closed() {
    let (rr, r, rho) = hypotrochoid_from_standard(2.855, 2.498, -10.0).unwrap();
    let turns = 2.498 / gcd_turns(2.855, 2.498);
    let curve = hypotrochoid_curve(rr, r, rho, turns, 20_000).unwrap();
    let (a, b) = (curve[0], *curve.last().unwrap());
    assert!(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() < 1e-6);
    assert!(curve.iter().all(|p| p[0].is_finite() && p[1].is_finite()));
    assert!(hypotrochoid_from_standard(1.0, 0.0, 1.0).is_err());
}

/// Number of turns of the rolling circle after which the curve closes, in units of the rolling radius.
fn gcd_turns(a: f64, b: f64) -> f64 {
    let (mut p, mut q) = ((a * 1000.0).round() as u64, (b * 1000.0).round() as u64);
    while q != 0 {
        (p, q) = (q, p % q);
    }
    p as f64 / 1000.0
}

#[test]
fn circle_points() {
    let p = circle_point(2.0, PI / 2.0);
    assert!(p[0].abs() < 1e-15 && (p[1] - 2.0).abs() < 1e-15);
}
