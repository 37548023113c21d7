use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reinhardt_core::control::{boundary_control_matrix, ControlSetSpec};
use reinhardt_core::dynamics::{
    self, integrate, reinhardt_field, ExtendedState, IntegratorConfig, Policy,
};
use reinhardt_core::fuller::*;
use reinhardt_core::sl2::GroupMatrix;
use reinhardt_core::Complex;

fn rc<R: Rng>(rng: &mut R, r: f64) -> Complex {
    Complex::from_polar(rng.gen_range(0.0..r), rng.gen_range(0.0..2.0 * PI))
}

fn random_hyperboloid<R: Rng>(rng: &mut R, r: f64) -> HyperboloidState {
    HyperboloidState {
        w: rc(rng, r),
        b: rc(rng, r),
        c: rc(rng, r),
        d: rng.gen_range(0.5..4.0),
    }
}

fn random_fuller<R: Rng>(rng: &mut R, n: usize, gamma: Complex) -> FullerState {
    FullerState::new(
        (0..n)
            .map(|_| rc(rng, 2.0) + Complex::new(0.1, 0.0))
            .collect(),
        gamma,
    )
    .unwrap()
}

fn max_diff(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn hyperboloid_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let h = random_hyperboloid(&mut rng, 1.5);
        let s = from_hyperboloid(&h, GroupMatrix::IDENTITY);
        assert!((s.x.det() - 1.0).abs() < 1e-10);
        assert!((s.l1.det() - h.d).abs() < 1e-10 * (1.0 + h.d));
        assert!(s.lr.trace_form(&s.x).abs() < 1e-10);
        let back = to_hyperboloid(&s).unwrap();
        assert!(
            (back.w - h.w).abs() < 1e-10
                && (back.b - h.b).abs() < 1e-10
                && (back.c - h.c).abs() < 1e-10
        );
        assert!((back.d - h.d).abs() < 1e-10);
    }
}

#[test]
fn singular_locus_and_branches() {
    let h = to_hyperboloid(&ExtendedState::singular_locus()).unwrap();
    assert_eq!(
        (h.w, h.b, h.c),
        (Complex::ZERO, Complex::ZERO, Complex::ZERO)
    );
    assert!((h.d - 9.0 / 4.0).abs() < 1e-15);
    assert_eq!(
        HyperboloidState::singular_locus().x(),
        reinhardt_core::TracelessMatrix::J
    );
    let mut s = ExtendedState::singular_locus();
    s.l1 = reinhardt_core::TracelessMatrix::H;
    assert!(to_hyperboloid(&s).is_err());
    s.l1 = reinhardt_core::TracelessMatrix::ZERO;
    assert!(to_hyperboloid(&s).is_err());
    s.l1 = reinhardt_core::TracelessMatrix::J.scale(1.5);
    assert!(to_hyperboloid(&s).is_err());
}

#[test]
fn hyperboloid_field_matches_lifted_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in [
        ControlSetSpec::circumscribed(),
        ControlSetSpec::inscribed(),
        ControlSetSpec::disk(0.8).unwrap(),
    ] {
        for _ in 0..300 {
            let h = random_hyperboloid(&mut rng, 0.4);
            let z = Complex::cis(rng.gen_range(0.0..2.0 * PI));
            let Ok(hd) = hyperboloid_field(&h, &spec, z) else {
                continue;
            };
            let s = from_hyperboloid(&h, GroupMatrix::IDENTITY);
            let f = reinhardt_field(&s, &boundary_control_matrix(&spec, z)).unwrap();
            let w = f.x.to_su11().p;
            let b = f.l1.to_su11().p.scale(1.0 / h.d.sqrt());
            let c = f.lr.to_su11().p;
            assert!((w - hd.w).abs() < 1e-8, "{w:?} {:?}", hd.w);
            assert!((b - hd.b).abs() < 1e-8);
            assert!((c - hd.c).abs() < 1e-8, "{c:?} {:?}", hd.c);
            let hh = hyperboloid_hamiltonian(&h, &spec, z).unwrap();
            let direct =
                reinhardt_core::control::hamiltonian(&s, &boundary_control_matrix(&spec, z))
                    .unwrap();
            assert!((hh - direct).abs() < 1e-10 * (1.0 + direct.abs()));
        }
    }
}

#[test]
fn star_violation_in_hyperboloid_coordinates() {
    let spec = ControlSetSpec::circumscribed();
    let h = HyperboloidState {
        w: Complex::new(0.9, 0.0),
        ..HyperboloidState::singular_locus()
    };
    assert!(hyperboloid_field(&h, &spec, Complex::ONE).is_err());
    assert!(mu(h.w, spec.beta1(), Complex::ONE) < 0.0);
}

#[test]
fn b_equation_by_hand() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = ControlSetSpec::inscribed();
    for _ in 0..1000 {
        let h = random_hyperboloid(&mut rng, 0.5);
        let z = Complex::cis(rng.gen_range(0.0..2.0 * PI));
        let hd = hyperboloid_field(&h, &spec, z).unwrap();
        // b' = 2i([b] w + [w] b) in real coordinates.
        let bw = (1.0 + h.w.re * h.w.re + h.w.im * h.w.im).sqrt();
        let bb = (1.0 + h.b.re * h.b.re + h.b.im * h.b.im).sqrt();
        let re = bb * h.w.re + bw * h.b.re;
        let im = bb * h.w.im + bw * h.b.im;
        assert!((hd.b.re + 2.0 * im).abs() < 1e-14 && (hd.b.im - 2.0 * re).abs() < 1e-14);
    }
}

#[test]
fn leading_w_velocity_near_the_singular_locus() {
    let spec = ControlSetSpec::circumscribed();
    let b1 = spec.beta1();
    for k in 0..12 {
        let c = Complex::from_polar(1e-6, 0.5 * k as f64);
        let h = HyperboloidState {
            c,
            ..HyperboloidState::singular_locus()
        };
        let z = optimal_zstar(&h, &spec).unwrap();
        let wd = hyperboloid_field(&h, &spec, z).unwrap().w;
        let want = (Complex::I * c).scale(-b1 / c.abs());
        assert!((wd - want).abs() < 1e-6, "{wd:?} {want:?}");
    }
}

#[test]
fn angular_momentum_is_conserved_in_hyperboloid_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spec = ControlSetSpec::circumscribed();
    let cfg = IntegratorConfig {
        record_every: 100,
        ..IntegratorConfig::default()
    };
    let mut runs = 0;
    while runs < 3 {
        let mut h = random_hyperboloid(&mut rng, 0.1);
        h.d = 2.25;
        let s0 = from_hyperboloid(&h, GroupMatrix::IDENTITY);
        assert!((hyperboloid_angular_momentum(&h) - dynamics::angular_momentum(&s0)).abs() < 1e-12);
        let traj = integrate(&s0, &Policy::ClosedLoop(spec), 1.0, &cfg).unwrap();
        if traj.exit != dynamics::Exit::Completed {
            continue;
        }
        let a0 = hyperboloid_angular_momentum(&h);
        for s in &traj.states {
            let a = hyperboloid_angular_momentum(&to_hyperboloid(s).unwrap());
            assert!((a - a0).abs() < 1e-8, "{}", a - a0);
        }
        runs += 1;
    }
}

#[test]
fn truncation_error_vanishes_along_the_spiral() {
    let spec = ControlSetSpec::circumscribed();
    let b1 = spec.beta1();
    let mut ratios = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let f = log_spiral(eps, SpiralDirection::Outward, 0.0).unwrap();
        let h = hyperboloid_from_fuller(&[f.z[0], f.z[1], f.z[2]], b1);
        let z = h.c.scale(1.0 / h.c.abs());
        let full = hyperboloid_field(&h, &spec, z).unwrap();
        let trunc = truncated_field(&h, b1).unwrap();
        // Leading orders: c' ~ eps^2, b' ~ eps, w' ~ 1.
        ratios.push([
            (full.c - trunc.c).abs() / eps.powi(2),
            (full.b - trunc.b).abs() / eps,
            (full.w - trunc.w).abs(),
        ]);
    }
    for k in 0..3 {
        assert!(
            ratios[0][k] > ratios[1][k] && ratios[1][k] > ratios[2][k],
            "{ratios:?}"
        );
        assert!(ratios[2][k] < 1e-3, "{ratios:?}");
    }
}

#[test]
fn fuller_coordinates_map_truncated_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b1 = 2.0;
    for _ in 0..100 {
        let f = random_fuller(&mut rng, 3, -Complex::I);
        let h = hyperboloid_from_fuller(&[f.z[0], f.z[1], f.z[2]], b1);
        let t = truncated_field(&h, b1).unwrap();
        let d = fuller_field(&f).unwrap();
        assert!((t.w - d[0].scale(b1)).abs() < 1e-12);
        assert!((t.b - (Complex::I * d[1]).scale(2.0 * b1)).abs() < 1e-12);
        assert!((t.c - d[2].scale(6.0 * b1)).abs() < 1e-12);
    }
}

#[test]
fn log_spirals_solve_the_fuller_system() {
    for dir in [SpiralDirection::Outward, SpiralDirection::Inward] {
        for i in 1..=100 {
            let t = 0.02 * i as f64;
            let f = log_spiral(t, dir, 2.5).unwrap();
            let lhs = log_spiral_derivative(t, dir, 2.5).unwrap();
            let rhs = fuller_field(&f).unwrap();
            assert!(max_diff(&lhs, &rhs) < 1e-12);
            assert!(hamiltonian_c(&f.z).abs() < 1e-12);
            assert!(angular_momentum_c(&f.z).abs() < 1e-12);
        }
    }
    assert!(log_spiral(0.0, SpiralDirection::Outward, 0.0).is_err());
    assert!(log_spiral(3.0, SpiralDirection::Inward, 2.5).is_err());
}

#[test]
fn spiral_winding_is_scale_free() {
    for t in [1e-6, 1e-3, 0.1, 1.0] {
        assert!((spiral_winding(t).unwrap() - 2f64.ln() / (2.0 * PI)).abs() < 1e-15);
        // Phase of z3 at 2t relative to t, from the closed form.
        let a = log_spiral(t, SpiralDirection::Outward, 0.0).unwrap().z[2];
        let b = log_spiral(2.0 * t, SpiralDirection::Outward, 0.0)
            .unwrap()
            .z[2];
        let turn = -(b * a.conj()).arg() / (2.0 * PI);
        assert!((turn - spiral_winding(t).unwrap()).abs() < 1e-12);
    }
    assert!(spiral_winding(0.0).is_err());
}

#[test]
fn fuller_invariants_under_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let f0 = random_fuller(&mut rng, 3, -Complex::I);
        let path = integrate_fuller(&f0, 0.0, 1.0, 1e-3).unwrap();
        let (h0, a0) = (hamiltonian_c(&f0.z), angular_momentum_c(&f0.z));
        for (_, f) in &path {
            assert!((hamiltonian_c(&f.z) - h0).abs() < 1e-9);
            assert!((angular_momentum_c(&f.z) - a0).abs() < 1e-9);
        }
    }
}

#[test]
fn scaling_maps_solutions_to_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let f0 = random_fuller(&mut rng, 3, -Complex::I);
        let (theta, r) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.5..2.0));
        let t = 0.5;
        let a = integrate_fuller(&f0, 0.0, t, 1e-4)
            .unwrap()
            .pop()
            .unwrap()
            .1
            .scaled(theta, r);
        let b = integrate_fuller(&f0.scaled(theta, r), 0.0, r * t, 1e-4)
            .unwrap()
            .pop()
            .unwrap()
            .1;
        assert!(max_diff(&a.z, &b.z) < 1e-8);
    }
}

#[test]
fn time_reversal_is_an_involution_of_the_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let f0 = random_fuller(&mut rng, 3, -Complex::I);
        assert_eq!(f0.time_reversed().time_reversed(), f0);
        let t = 0.5;
        let a = integrate_fuller(&f0, 0.0, t, 1e-4)
            .unwrap()
            .pop()
            .unwrap()
            .1
            .time_reversed();
        let b = integrate_fuller(&f0.time_reversed(), 0.0, -t, 1e-4)
            .unwrap()
            .pop()
            .unwrap()
            .1;
        assert!(max_diff(&a.z, &b.z) < 1e-8);
    }
}

#[test]
fn length_n_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=5 {
        let ipn = [Complex::ONE, Complex::I, -Complex::ONE, -Complex::I][n % 4];
        for sgn in [1.0, -1.0] {
            let gamma = ipn.scale(sgn);
            let f0 = random_fuller(&mut rng, n, gamma);
            let path = integrate_fuller(&f0, 0.0, 1.0, 1e-3).unwrap();
            let (h0, a0) = (hamiltonian_n(&f0), angular_momentum_n(&f0));
            for (_, f) in &path {
                assert!((hamiltonian_n(f) - h0).abs() < 1e-9, "n={n}");
                assert!((angular_momentum_n(f) - a0).abs() < 1e-9, "n={n}");
            }
        }
    }
    assert!(FullerState::new(vec![Complex::ONE], Complex::I).is_err());
    assert!(FullerState::new(vec![Complex::ONE; 2], Complex::new(2.0, 0.0)).is_err());
}

#[test]
fn length_three_matches_the_reinhardt_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let f = random_fuller(&mut rng, 3, -Complex::I);
        assert!((hamiltonian_n(&f) - 2.0 * hamiltonian_c(&f.z)).abs() < 1e-12);
        assert!((angular_momentum_n(&f) - angular_momentum_c(&f.z)).abs() < 1e-12);
    }
}

#[test]
fn bracket_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = |z: &[Complex]| hamiltonian_c(z);
    let a = |z: &[Complex]| angular_momentum_c(z);
    let q = |z: &[Complex]| z[0].re * z[2].im + z[1].norm_sqr() * z[0].im;
    for _ in 0..100 {
        let f = random_fuller(&mut rng, 3, -Complex::I);
        assert!(poisson_bracket_c(&h, &a, &f.z).abs() < 1e-6);
        assert!(poisson_bracket_c(&q, &q, &f.z).abs() < 1e-6);
        assert!((poisson_bracket_c(&q, &h, &f.z) + poisson_bracket_c(&h, &q, &f.z)).abs() < 1e-6);
        // {F, H} is the derivative of F along the flow.
        let along = differential(&q, &f.z, &fuller_field(&f).unwrap());
        assert!((poisson_bracket_c(&q, &h, &f.z) - along).abs() < 1e-6 * (1.0 + along.abs()));
        let hv = hamiltonian_vector_field(&h, &f.z);
        assert!(max_diff(&hv, &fuller_field(&f).unwrap()) < 1e-6);
        for _ in 0..5 {
            let v: Vec<Complex> = (0..3).map(|_| rc(&mut rng, 1.0)).collect();
            assert!((omega_c(&hv, &v) - differential(&h, &f.z, &v)).abs() < 1e-6);
        }
    }
}

#[test]
fn valuation_of_synthetic_and_spiral_series() {
    let ts: Vec<f64> = (0..40).map(|i| 1e-4 * 1.25f64.powi(i)).collect();
    for p in 1..=3 {
        let fit =
            valuation_fit(&ts.iter().map(|&t| (t, 3.0 * t.powi(p))).collect::<Vec<_>>()).unwrap();
        assert!((fit.slope - p as f64).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }
    for k in 0..3 {
        let series: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                (
                    t,
                    log_spiral(t, SpiralDirection::Outward, 0.0).unwrap().z[k].abs(),
                )
            })
            .collect();
        let fit = valuation_fit(&series).unwrap();
        assert!((fit.slope - (k + 1) as f64).abs() < 1e-9);
    }
    assert!(valuation_fit(&[(1.0, 1.0); 5]).is_err());
    let mut bad: Vec<(f64, f64)> = ts.iter().map(|&t| (t, t)).collect();
    bad[3].1 = 0.0;
    assert!(valuation_fit(&bad).is_err());
}

#[test]
fn near_singular_valuations() {
    let r = near_singular_experiment(&ControlSetSpec::circumscribed(), 0.01, 0.5, 1e-6).unwrap();
    assert_eq!(r.exit, dynamics::Exit::Completed);
    for (k, s) in r.slopes.iter().enumerate() {
        assert!((s - (k + 1) as f64).abs() < 0.2, "{:?}", r.slopes);
    }
    assert!(near_singular_experiment(&ControlSetSpec::circumscribed(), 0.01, 1.5, 1e-6).is_err());
}

proptest! {
    #[test]
    fn spiral_scaling_invariance(t in 0.01..3.0f64, r in 0.2..5.0f64) {
        // Scaling by r (with the phase r^-i) carries the spiral at t to the spiral at r t.
        let f = log_spiral(t, SpiralDirection::Outward, 0.0).unwrap();
        let g = log_spiral(r * t, SpiralDirection::Outward, 0.0).unwrap();
        let s = f.scaled(-r.ln(), r);
        prop_assert!(max_diff(&s.z, &g.z) < 1e-12 * (1.0 + r.powi(3) * t.powi(3)));
    }
}
