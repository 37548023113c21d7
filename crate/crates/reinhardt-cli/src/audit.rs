//! The numbered acceptance criteria, evaluated as data so `check` and the
//! test suite print the same table.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reinhardt_core::control::{
    control_matrix, disk_hamiltonian, maximize, maximize_disk, sweep_argmax, ControlPoint,
    ControlSetSpec,
};
use reinhardt_core::dynamics::{
    constant_control_solution, disk_star_margin, integrate, integrate_abnormal, uvw, Exit,
    ExtendedState, IntegratorConfig, Policy, Trajectory,
};
use reinhardt_core::extremals::{
    circle_extremal, hypotrochoid_multicurve, hypotrochoid_period_shift, octagon_shoot,
    smoothed_octagon_density,
};
use reinhardt_core::fuller::{
    angular_momentum_c, fuller_field, hamiltonian_c, integrate_fuller, log_spiral,
    log_spiral_derivative, near_singular_experiment, poisson_bracket_c, valuation_fit, FullerState,
    SpiralDirection,
};
use reinhardt_core::halfplane::{
    exclusion_bound, phi, region_polynomials, star_membership, triangle_areas, HalfPlanePoint,
};
use reinhardt_core::sl2::{cayley_conjugate, exp_traceless, mat_mul, GroupMatrix, TracelessMatrix};
use reinhardt_core::Complex;
use serde::Serialize;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// One measured quantity against its bound.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Exploratory checks are reported but do not fail their criterion.
    pub blocking: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
            blocking: true,
        }
    }

    /// A yes/no property, reported as `0` (holds) or `1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::le(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn exploratory(mut self) -> Self {
        self.blocking = false;
        self
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Set when the computation itself failed.
    pub error: Option<String>,
    pub seconds: f64,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed || !c.blocking)
    }

    /// `PASS  3 closed form vs RK4  [max error 2.1e-9 <= 1e-6]`.
    pub fn line(&self) -> String {
        let mut parts: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                let mark = match (c.passed, c.blocking) {
                    (true, _) => "",
                    (false, true) => " FAILED",
                    (false, false) => " (exploratory, not met)",
                };
                format!("{} {:.3e} <= {:.0e}{mark}", c.name, c.value, c.tolerance)
            })
            .collect();
        if let Some(e) = &self.error {
            parts.push(format!("error: {e}"));
        }
        format!(
            "{} {:>2} {:<28} [{}] ({:.2}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            parts.join("; "),
            self.seconds
        )
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "circle extremal"),
    (2, "smoothed octagon (k = 1)"),
    (3, "closed form vs RK4"),
    (4, "conservation suite"),
    (5, "optimal-control oracle"),
    (6, "Fuller exactness"),
    (7, "valuation fit"),
    (8, "geometry identities"),
    (9, "algebraic identities"),
    (10, "abnormal inscribed system"),
    (11, "hypotrochoid"),
];

type Outcome = Result<Vec<Check>, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs criterion `id` (1..=11) with a deterministic seed.
pub fn run_criterion(id: u8, seed: u64) -> Criterion {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(id as u64));
    let start = Instant::now();
    let out: Outcome = match id {
        1 => circle(),
        2 => octagon(),
        3 => closed_form(&mut rng),
        4 => conservation(&mut rng),
        5 => disk_oracle(&mut rng),
        6 => fuller_exactness(&mut rng),
        7 => valuations(),
        8 => geometry(&mut rng),
        9 => algebra(&mut rng),
        10 => abnormal(&mut rng),
        11 => hypotrochoid(),
        _ => Err(format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut checks, error) = match out {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e)),
    };
    match id {
        1 => checks.push(Check::le("runtime s", seconds, 1.0)),
        2 => checks.push(Check::le("runtime s", seconds, 60.0)),
        _ => {}
    }
    Criterion {
        id,
        title,
        checks,
        error,
        seconds,
    }
}

/// All criteria, one worker thread each; results come back in order.
pub fn run_all(seed: u64, parallel: bool) -> Vec<Criterion> {
    if !parallel {
        return CRITERIA.iter().map(|c| run_criterion(c.0, seed)).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|c| s.spawn(move || run_criterion(c.0, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion worker panicked"))
            .collect()
    })
}

fn star_point<R: Rng>(rng: &mut R, margin: f64) -> HalfPlanePoint {
    loop {
        let x = rng.gen_range(-1.0 / SQRT3..1.0 / SQRT3);
        let y = rng.gen_range(0.3..2.5);
        let z = HalfPlanePoint::new(x, y).expect("y > 0");
        if star_membership(z).margins.iter().all(|&m| m > margin) {
            return z;
        }
    }
}

fn random_matrix<R: Rng>(rng: &mut R, scale: f64) -> TracelessMatrix {
    TracelessMatrix::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn perp(x: &TracelessMatrix, l: TracelessMatrix) -> TracelessMatrix {
    l - x.scale(l.trace_form(x) / x.trace_form(x))
}

fn random_state<R: Rng>(rng: &mut R) -> ExtendedState {
    let x = phi(star_point(rng, 0.05));
    let l1 = random_matrix(rng, 2.0);
    let lr = perp(&x, random_matrix(rng, 1.0));
    ExtendedState::from_costates(x, l1, lr)
}

fn random_control<R: Rng>(rng: &mut R) -> ControlPoint {
    let w: [f64; 3] = [
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..1.0),
    ];
    let s = w[0] + w[1] + w[2];
    ControlPoint::new(w[0] / s, w[1] / s, 1.0 - w[0] / s - w[1] / s).expect("normalized")
}

/// Admissible state and control whose constant-control run on `[0, 1]` stays in the star domain.
fn admissible_run<R: Rng>(rng: &mut R) -> (ExtendedState, ControlPoint, Trajectory) {
    let cfg = IntegratorConfig {
        record_every: 1000,
        ..IntegratorConfig::default()
    };
    loop {
        let s = random_state(rng);
        let u = random_control(rng);
        if let Ok(tr) = integrate(&s, &Policy::Constant(u), 1.0, &cfg) {
            if tr.exit == Exit::Completed {
                return (s, u, tr);
            }
        }
    }
}

/// State near the singular locus with zero maximized Hamiltonian.
fn near_singular_state<R: Rng>(
    rng: &mut R,
    spec: &ControlSetSpec,
) -> Result<ExtendedState, String> {
    let z = HalfPlanePoint::new(rng.gen_range(-0.05..0.05), 1.0 + rng.gen_range(-0.05..0.05))
        .map_err(err)?;
    let x = phi(z);
    let l1 = TracelessMatrix::J.scale(-1.5) + random_matrix(rng, 0.05);
    let lr = perp(&x, random_matrix(rng, 0.05));
    let mut s = ExtendedState::from_costates(x, l1, lr);
    let h = maximize(&s, spec).map_err(err)?.value;
    s.l1 += x.scale(h / 2.0);
    Ok(s)
}

fn circle() -> Outcome {
    let c = circle_extremal(1000).map_err(err)?;
    let g = c
        .trajectory
        .final_state()
        .g
        .sub(&GroupMatrix::r())
        .max_abs();
    Ok(vec![
        Check::le(
            "|density - pi/sqrt12|",
            (c.density - PI / 12f64.sqrt()).abs(),
            1e-9,
        ),
        Check::le("|g(pi/3) - R|", g, 1e-12),
    ])
}

fn octagon() -> Outcome {
    let sol = octagon_shoot(1, 400).map_err(err)?;
    let mut checks = vec![
        Check::le(
            "|density - target|",
            (sol.density - smoothed_octagon_density()).abs(),
            1e-3,
        ),
        Check::le("transversality", sol.transversality.max(), 1e-6),
        Check::le("max |H|", sol.max_hamiltonian, 1e-6),
    ];
    // The contingency property: k = 1, 2, 3 shrink toward i.
    let d: Result<Vec<f64>, String> = (1..=3)
        .map(|k| {
            octagon_shoot(k, 100)
                .map(|s| s.max_distance_to_i)
                .map_err(err)
        })
        .collect();
    let d = d?;
    checks
        .push(Check::holds("shrink toward i for k=1..3", d[0] > d[1] && d[1] > d[2]).exploratory());
    Ok(checks)
}

fn closed_form<R: Rng>(rng: &mut R) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (s, u, tr) = admissible_run(rng);
        let zu = control_matrix(&u);
        for (t, st) in tr.times.iter().zip(&tr.states) {
            let exact = constant_control_solution(&s, &zu, *t).map_err(err)?;
            worst = worst.max(exact.max_abs_diff(st));
        }
    }
    Ok(vec![Check::le("max componentwise error", worst, 1e-6)])
}

fn conservation<R: Rng>(rng: &mut R) -> Outcome {
    let (mut det_x, mut pairing, mut det_l1, mut ang) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let (_, _, tr) = admissible_run(rng);
        det_x = det_x.max(tr.drift.det_x);
        pairing = pairing.max(tr.drift.pairing);
        det_l1 = det_l1.max(tr.drift.det_l1);
    }
    let spec = ControlSetSpec::circumscribed();
    let cfg = IntegratorConfig {
        record_every: 100,
        ..IntegratorConfig::default()
    };
    for _ in 0..3 {
        let s = near_singular_state(rng, &spec)?;
        let tr = integrate(&s, &Policy::ClosedLoop(spec), 1.0, &cfg).map_err(err)?;
        ang = ang.max(tr.drift.angular_momentum / tr.final_time().max(1.0));
        det_x = det_x.max(tr.drift.det_x);
        det_l1 = det_l1.max(tr.drift.det_l1);
    }
    Ok(vec![
        Check::le("det X drift", det_x, 1e-8),
        Check::le("<X,Z_u> drift", pairing, 1e-8),
        Check::le("angular momentum drift (U_C)", ang, 1e-7),
        Check::le("det L1 drift", det_l1, 1e-8),
    ])
}

fn disk_oracle<R: Rng>(rng: &mut R) -> Outcome {
    let spec = ControlSetSpec::circumscribed();
    let n = 10_000;
    let step = 2.0 * PI / n as f64;
    let (mut deficit, mut misses) = (f64::NEG_INFINITY, 0usize);
    for _ in 0..100 {
        let s = loop {
            let s = random_state(rng);
            if disk_star_margin(&s.x, &spec) > 0.05 {
                break s;
            }
        };
        let opt = maximize_disk(&s, &spec).map_err(err)?;
        let z = opt.angle.ok_or("maximizer returned no angle")?;
        let zs = sweep_argmax(&s, &spec, n).map_err(err)?;
        let hs = disk_hamiltonian(&s, &spec, zs).map_err(err)?;
        deficit = deficit.max(hs - opt.value);
        let gap = (z.scale(1.0 / z.abs()) - zs).abs();
        if gap > step * 1.01 && (opt.value - hs).abs() > 1e-10 {
            misses += 1;
        }
    }
    Ok(vec![
        Check::le("sweep max - root value", deficit, 1e-8),
        Check::le("argmax off by > 1 grid step", misses as f64, 0.0),
    ])
}

fn fuller_exactness<R: Rng>(rng: &mut R) -> Outcome {
    let (mut res, mut inv) = (0.0f64, 0.0f64);
    for i in 1..=100 {
        let t = 0.03 * i as f64;
        let f = log_spiral(t, SpiralDirection::Outward, 0.0).map_err(err)?;
        let lhs = log_spiral_derivative(t, SpiralDirection::Outward, 0.0).map_err(err)?;
        let rhs = fuller_field(&f).map_err(err)?;
        res = res.max(
            lhs.iter()
                .zip(&rhs)
                .map(|(a, b)| (*a - *b).abs())
                .fold(0.0, f64::max),
        );
        inv = inv
            .max(hamiltonian_c(&f.z).abs())
            .max(angular_momentum_c(&f.z).abs());
    }
    let random_z = |rng: &mut R| -> Vec<Complex> {
        (0..3)
            .map(|_| Complex::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..2.0 * PI)))
            .collect()
    };
    let mut drift = 0.0f64;
    for _ in 0..10 {
        let f0 = FullerState::reinhardt(Complex::ZERO, Complex::ZERO, Complex::ONE);
        let f0 = FullerState {
            z: random_z(rng),
            ..f0
        };
        let path = integrate_fuller(&f0, 0.0, 1.0, 1e-3).map_err(err)?;
        let (h0, a0) = (hamiltonian_c(&f0.z), angular_momentum_c(&f0.z));
        for (_, f) in &path {
            drift = drift
                .max((hamiltonian_c(&f.z) - h0).abs())
                .max((angular_momentum_c(&f.z) - a0).abs());
        }
    }
    let h = |z: &[Complex]| hamiltonian_c(z);
    let a = |z: &[Complex]| angular_momentum_c(z);
    let mut br = 0.0f64;
    for _ in 0..100 {
        br = br.max(poisson_bracket_c(&h, &a, &random_z(rng)).abs());
    }
    Ok(vec![
        Check::le("spiral ODE residual", res, 1e-12),
        Check::le("spiral |H_c|, |A_c|", inv, 1e-12),
        Check::le("H_c/A_c drift per unit time", drift, 1e-9),
        Check::le("|{H_c, A_c}_c|", br, 1e-6),
    ])
}

fn valuations() -> Outcome {
    let ts: Vec<f64> = (0..40).map(|i| 1e-4 * 1.25f64.powi(i)).collect();
    let mut spiral = 0.0f64;
    for k in 0..3 {
        let series: Result<Vec<(f64, f64)>, String> = ts
            .iter()
            .map(|&t| {
                log_spiral(t, SpiralDirection::Outward, 0.0)
                    .map(|f| (t, f.z[k].abs()))
                    .map_err(err)
            })
            .collect();
        let fit = valuation_fit(&series?).map_err(err)?;
        spiral = spiral.max((fit.slope - (k + 1) as f64).abs());
    }
    let mut checks = vec![Check::le("spiral slopes vs (1,2,3)", spiral, 1e-9)];
    match near_singular_experiment(&ControlSetSpec::circumscribed(), 0.01, 0.5, 1e-6) {
        Ok(r) => {
            let dev = r
                .slopes
                .iter()
                .enumerate()
                .map(|(k, s)| (s - (k + 1) as f64).abs())
                .fold(0.0, f64::max);
            let name = format!(
                "near-singular slopes ({:.3}, {:.3}, {:.3})",
                r.slopes[0], r.slopes[1], r.slopes[2]
            );
            checks.push(Check::le(name, dev, 0.2).exploratory());
        }
        Err(e) => checks.push(
            Check::le(format!("near-singular run failed: {e}"), f64::INFINITY, 0.2).exploratory(),
        ),
    }
    Ok(checks)
}

fn any_star_point<R: Rng>(rng: &mut R) -> HalfPlanePoint {
    loop {
        let x = rng.gen_range(-1.0 / SQRT3..1.0 / SQRT3);
        let y = rng.gen_range(0.0..4.0);
        if let Ok(z) = HalfPlanePoint::new(x, y) {
            if star_membership(z).inside {
                return z;
            }
        }
    }
}

fn geometry<R: Rng>(rng: &mut R) -> Outcome {
    let mut sum = 0.0f64;
    for _ in 0..10_000 {
        let (t, _) = triangle_areas(any_star_point(rng));
        sum = sum.max((t[0] + t[1] + t[2] - SQRT3 / 4.0).abs());
    }
    let mut hits = 0usize;
    for _ in 0..1_000_000 {
        let h = region_polynomials(any_star_point(rng));
        if h[0] >= 0.0 && h[1] >= 0.0 && h[2] >= 0.0 {
            hits += 1;
        }
    }
    let (mut limit, mut monotone, mut last) = (0.0f64, true, f64::INFINITY);
    for y in [10.0, 100.0, 1000.0] {
        let e = exclusion_bound(HalfPlanePoint::new(0.0, y).map_err(err)?).map_err(err)?;
        let area_err = ((e.areas[0] + e.areas[2]) / SQRT3 - 0.25).abs();
        monotone &= area_err < last;
        last = area_err;
        limit = limit
            .max(area_err * y / 10.0)
            .max((e.value - 1.0).abs() * y / 10.0);
    }
    Ok(vec![
        Check::le("|T0+T1+T2 - sqrt3/4|", sum, 1e-12),
        Check::le("triple overlap hits in 1e6", hits as f64, 0.0),
        Check::le("exclusion limit error * y/10", limit, 1.0),
        Check::holds("area-sum error monotone in y", monotone),
    ])
}

fn algebra<R: Rng>(rng: &mut R) -> Outcome {
    let (mut form, mut jacobi, mut quotient, mut brack, mut anti, mut dbl, mut cayley, mut group) = (
        0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64,
    );
    for _ in 0..1000 {
        let [a, b, c, d] = [(); 4].map(|_| random_matrix(rng, 1.0));
        form = form
            .max((a.trace_form(&b) - b.trace_form(&a)).abs())
            .max((a.trace_form(&b.commutator(&c)) - a.commutator(&b).trace_form(&c)).abs());
        let j = a.commutator(&b).commutator(&c)
            + b.commutator(&c).commutator(&a)
            + c.commutator(&a).commutator(&b);
        jacobi = jacobi.max(j.max_abs());
        let lhs = a.trace_form(&c) * b.trace_form(&d) - b.trace_form(&c) * a.trace_form(&d);
        quotient = quotient.max((lhs + 0.5 * a.commutator(&b).trace_form(&c.commutator(&d))).abs());
        // <[A,B],[C,D]> = -2 <A,C><B,D> once <B,C> = 0.
        let bo = b - c.scale(b.trace_form(&c) / c.trace_form(&c));
        if c.trace_form(&c).abs() > 1e-2 {
            let l = a.commutator(&bo).trace_form(&c.commutator(&d));
            brack =
                brack.max((l + 2.0 * a.trace_form(&c) * bo.trace_form(&d)).abs() / (1.0 + l.abs()));
        }
        let (ab, ba) = (a.mul_matrix(&b), b.mul_matrix(&a));
        let t = a.trace_form(&b);
        anti = anti
            .max((ab[0][0] + ba[0][0] - t).abs())
            .max((ab[1][1] + ba[1][1] - t).abs())
            .max((ab[0][1] + ba[0][1]).abs())
            .max((ab[1][0] + ba[1][0]).abs());
        let l2 = b.commutator(&a).commutator(&a).to_array();
        let aba = mat_mul(&ab, &a.to_array());
        let bm = b.to_array();
        for i in 0..2 {
            for k in 0..2 {
                dbl = dbl.max((l2[i][k] + 2.0 * a.det() * bm[i][k] + 2.0 * aba[i][k]).abs());
            }
        }
        cayley = cayley
            .max((cayley_conjugate(&a).trace_form(&cayley_conjugate(&b)) - t).abs())
            .max((cayley_conjugate(&a).det() - a.det()).abs());
        let (s, u) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let g = exp_traceless(&a, s + u).sub(&exp_traceless(&a, s).mul(&exp_traceless(&a, u)));
        group = group.max(g.max_abs());
    }
    Ok(vec![
        Check::le("form symmetric/ad-invariant", form, 1e-12),
        Check::le("Jacobi", jacobi, 1e-12),
        Check::le("trace quotient (-1/2)", quotient, 1e-12),
        Check::le("bracket product (-2, corrected sign)", brack, 1e-12),
        Check::le("anticommutator", anti, 1e-12),
        Check::le("double bracket", dbl, 1e-12),
        Check::le("Cayley form/det", cayley, 1e-12),
        Check::le("exp group law", group, 1e-12),
    ])
}

fn abnormal<R: Rng>(rng: &mut R) -> Outcome {
    let step = 1e-3;
    let (mut second, mut consts) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let x = phi(star_point(rng, 0.05));
        let lr = perp(&x, random_matrix(rng, 1.0));
        let w = (2.0 * lr.trace_form(&lr)).sqrt();
        let l1 = x.scale(w / 4.0) + perp(&x, random_matrix(rng, 1.0));
        let k = l1 + lr;
        let path = integrate_abnormal(&x, &lr, &k, 1.0, step).map_err(err)?;
        let q: Result<Vec<_>, String> = path
            .iter()
            .map(|(_, x, lr)| uvw(x, lr, &k).map_err(err))
            .collect();
        let q = q?;
        for i in 1..q.len() - 1 {
            second = second.max((q[i + 1].v - 2.0 * q[i].v + q[i - 1].v).abs() / (step * step));
        }
        for e in &q {
            consts = consts
                .max((e.c_k - q[0].c_k).abs())
                .max((e.c_r - q[0].c_r).abs());
        }
    }
    Ok(vec![
        Check::le("|v''| / step^2", second, 1e-6),
        Check::le("c_K, c_R drift", consts, 1e-9),
    ])
}

fn hypotrochoid() -> Outcome {
    let mut wedge = 0.0f64;
    for (rr, r, rho) in [(1.0, 0.3, 1.0), (0.2, 1.5, 0.25), (2.0, -0.7, 1.0 / 7.0)] {
        for i in 0..1000 {
            let m = hypotrochoid_multicurve(rr, r, rho, 0.02 * i as f64).map_err(err)?;
            let res = m.residuals();
            wedge = wedge.max(res.wedge);
        }
    }
    let mut shift = 0.0f64;
    for rho in [1.0, 0.25, 1.0 / 7.0] {
        let d = hypotrochoid_period_shift(rho);
        for i in 0..200 {
            let t = 0.037 * i as f64;
            let a = hypotrochoid_multicurve(1.3, 0.4, rho, t + d).map_err(err)?;
            let b = hypotrochoid_multicurve(1.3, 0.4, rho, t).map_err(err)?;
            for j in 0..3 {
                let (p, q) = (a.points[2 * j], b.points[(2 * j + 2) % 6]);
                shift = shift.max((p[0] - q[0]).abs()).max((p[1] - q[1]).abs());
            }
        }
    }
    Ok(vec![
        Check::le("wedge - sqrt3/2", wedge, 1e-12),
        Check::le("period shift", shift, 1e-10),
    ])
}
