//! Candidate optimizers: bang-bang runs, the circle, smoothed `(6k+2)`-gons,
//! boundary reconstruction and hypotrochoid multi-curves.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::control::{self, ControlPoint};
use crate::dynamics::{
    self, constant_control_cost, constant_control_solution, BangBangSchedule, ControlRecord,
    ExtendedState, Trajectory, Transversality,
};
use crate::halfplane::{self, hexagon_point, polygon_area, HalfPlanePoint};
use crate::math::{abs, cos, find_root, sin, sqrt, Complex, PI, SQRT3};
use crate::sl2::{exp_traceless, GroupMatrix, TracelessMatrix};
use crate::{Error, Result};

/// Runs a vertex schedule segment by segment with the closed-form solution.
///
/// Without `costate0` both costates start at zero. Every segment is sampled
/// at `samples_per_segment` interior points plus its end point.
pub fn bang_bang_run(
    x0: &TracelessMatrix,
    schedule: &BangBangSchedule,
    costate0: Option<(TracelessMatrix, TracelessMatrix)>,
    samples_per_segment: usize,
) -> Result<Trajectory> {
    if !halfplane::satisfies_star_conditions(x0) {
        return Err(Error::StarViolation {
            pairing: halfplane::vertex_pairings(x0)
                .iter()
                .copied()
                .fold(f64::MIN, f64::max),
        });
    }
    let (l1, lr) = costate0.unwrap_or((TracelessMatrix::ZERO, TracelessMatrix::ZERO));
    let mut start = ExtendedState::from_costates(*x0, l1, lr);
    let n = samples_per_segment.max(1);
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        controls: Vec::new(),
        costs: Vec::new(),
        drift: Default::default(),
        exit: dynamics::Exit::Completed,
    };
    let (mut t0, mut cost0) = (0.0, 0.0);
    for (idx, &(v, dur)) in schedule.segments.iter().enumerate() {
        let u = ControlPoint::vertex(v);
        let zu = control::control_matrix(&u);
        let first = if idx == 0 { 0 } else { 1 };
        let mut prev_tau = 0.0;
        let mut cost = cost0;
        for i in first..=n {
            let tau = dur * i as f64 / n as f64;
            let s = constant_control_solution(&start, &zu, tau)?;
            if halfplane::vertex_pairings(&s.x).iter().any(|&p| !(p < 0.0)) {
                return Err(Error::StarExit { t: t0 + tau });
            }
            if tau > prev_tau {
                let xs = constant_control_solution(&start, &zu, prev_tau)?.x;
                cost += constant_control_cost(&xs, &zu, tau - prev_tau)?;
            }
            prev_tau = tau;
            let rec = ControlRecord {
                u,
                zu,
                hamiltonian: control::hamiltonian(&s, &zu)?,
            };
            traj.push(t0 + tau, s, rec, cost);
        }
        start = *traj.states.last().unwrap();
        // Restart the closed form from the switching state.
        start.g = start.g.renormalize();
        t0 += dur;
        cost0 = cost;
    }
    traj.recompute_drift();
    Ok(traj)
}

/// The circle extremal together with its summary numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleExtremal {
    pub trajectory: Trajectory,
    pub t_final: f64,
    pub density: f64,
    pub transversality: Transversality,
}

/// Constant center control from the singular locus over `[0, pi/3]`.
pub fn circle_extremal(samples: usize) -> Result<CircleExtremal> {
    let s0 = ExtendedState::singular_locus();
    let u = ControlPoint::center();
    let zu = control::control_matrix(&u);
    let t_final = PI / 3.0;
    let n = samples.max(1);
    let mut traj = Trajectory {
        times: Vec::with_capacity(n + 1),
        states: Vec::with_capacity(n + 1),
        controls: Vec::with_capacity(n + 1),
        costs: Vec::with_capacity(n + 1),
        drift: Default::default(),
        exit: dynamics::Exit::Completed,
    };
    for i in 0..=n {
        let t = t_final * i as f64 / n as f64;
        let mut s = s0;
        s.g = exp_traceless(&TracelessMatrix::J, t);
        let rec = ControlRecord {
            u,
            zu,
            hamiltonian: control::hamiltonian(&s, &zu)?,
        };
        traj.push(t, s, rec, 3.0 * t);
    }
    traj.recompute_drift();
    let transversality = dynamics::transversality(&s0, traj.final_state());
    Ok(CircleExtremal {
        density: traj.cost() / sqrt(12.0),
        trajectory: traj,
        t_final,
        transversality,
    })
}

/// `(8 - sqrt32 - ln 2)/(sqrt8 - 1)`.
pub fn smoothed_octagon_density() -> f64 {
    (8.0 - sqrt(32.0) - crate::math::ln(2.0)) / (sqrt(8.0) - 1.0)
}

/// Output of the `(6k+2)`-gon shooting solver.
#[derive(Clone, Debug, PartialEq)]
pub struct OctagonSolution {
    pub k: usize,
    pub schedule: BangBangSchedule,
    /// Initial point `i y0` on the symmetry axis.
    pub y0: f64,
    pub x0: TracelessMatrix,
    pub side_time: f64,
    pub l1: TracelessMatrix,
    pub lr: TracelessMatrix,
    pub trajectory: Trajectory,
    pub density: f64,
    pub transversality: Transversality,
    /// Largest `|H|` of the active control along the trajectory.
    pub max_hamiltonian: f64,
    /// Largest `H(other vertex) - H(active vertex)` away from switching times.
    pub max_maximality_gap: f64,
    /// Samples (away from switches) where two vertices tie for the maximum.
    pub edge_samples: usize,
    /// Largest Euclidean distance from `i` of the half-plane trajectory.
    pub max_distance_to_i: f64,
    /// Residual of the linear costate system.
    pub costate_residual: f64,
}

/// Vertex used on side `i` of the symmetric schedule.
fn side_vertex(i: usize) -> usize {
    (2 + i) % 3
}

/// Schedule with `3k + 1` equal sides of length `tau`.
pub fn octagon_schedule(k: usize, tau: f64) -> Result<BangBangSchedule> {
    BangBangSchedule::new((0..3 * k + 1).map(|i| (side_vertex(i), tau)).collect())
}

fn axis_state(y0: f64) -> Result<TracelessMatrix> {
    Ok(halfplane::phi(HalfPlanePoint::new(0.0, y0)?))
}

/// Time for the vertex-2 arc from `i y0` to reach the real part of `R^-1 (i y0)`.
pub fn octagon_side_time(y0: f64) -> Option<f64> {
    let x0 = axis_state(y0).ok()?;
    let target = GroupMatrix::r()
        .inverse()
        .mobius(Complex::new(0.0, y0))
        .ok()?;
    let zu = control::control_matrix(&ControlPoint::vertex(2));
    let xz = x0.trace_form(&zu);
    if !(xz < 0.0) {
        return None;
    }
    let p = zu.scale(1.0 / xz);
    let f = |t: f64| -> Option<f64> {
        let x = exp_traceless(&p, t).adjoint(&x0);
        if x.c <= 0.0 {
            return None;
        }
        Some(x.a / x.c - target.re)
    };
    let h = 1e-3;
    let mut a = 1e-6;
    let mut fa = f(a)?;
    while a < 3.0 {
        let b = a + h;
        let fb = f(b)?;
        if fa * fb < 0.0 {
            return find_root(|t| f(t).unwrap_or(f64::NAN), a, b, 1e-15).ok();
        }
        a = b;
        fa = fb;
    }
    None
}

struct ShotEnd {
    g: GroupMatrix,
    x: TracelessMatrix,
    x0: TracelessMatrix,
}

fn shoot(y0: f64, tau: f64, sides: usize) -> Result<ShotEnd> {
    let x0 = axis_state(y0)?;
    let mut x = x0;
    let mut g = GroupMatrix::IDENTITY;
    for i in 0..sides {
        let zu = control::control_matrix(&ControlPoint::vertex(side_vertex(i)));
        let xz = x.trace_form(&zu);
        if !(xz < 0.0) {
            return Err(Error::StarViolation { pairing: xz });
        }
        let p = zu.scale(1.0 / xz);
        let h = exp_traceless(&(x + p), tau).mul(&exp_traceless(&p, -tau));
        g = g.mul(&h);
        x = exp_traceless(&p, tau).adjoint(&x);
    }
    Ok(ShotEnd { g, x, x0 })
}

fn shooting_residual(y0: f64, tau: f64, sides: usize) -> Result<[f64; 7]> {
    let e = shoot(y0, tau, sides)?;
    let r = GroupMatrix::r();
    let dx = e.x - r.adjoint_inv(&e.x0);
    let dg = e.g.sub(&r).to_vec4();
    Ok([dx.a, dx.b, dx.c, dg[0], dg[1], dg[2], dg[3]])
}

fn norm7(r: &[f64; 7]) -> f64 {
    sqrt(r.iter().map(|v| v * v).sum())
}

/// Scans `y0` down from the singular point for a root of `tr g(t_f) - 1` with `g(t_f) = R`.
fn seed_octagon(sides: usize) -> Result<(f64, f64)> {
    let trace_gap = |y0: f64| -> Option<f64> {
        let tau = octagon_side_time(y0)?;
        shoot(y0, tau, sides).ok().map(|e| e.g.trace() - 1.0)
    };
    let mut y = 0.999;
    let mut fy = trace_gap(y);
    let mut best = f64::INFINITY;
    while y > 0.58 {
        let yn = y - 1e-3;
        let fn_ = trace_gap(yn);
        if let (Some(a), Some(b)) = (fy, fn_) {
            if a * b < 0.0 {
                if let Ok(root) = find_root(|t| trace_gap(t).unwrap_or(f64::NAN), yn, y, 1e-15) {
                    if let Some(tau) = octagon_side_time(root) {
                        let res = norm7(&shooting_residual(root, tau, sides)?);
                        best = best.min(res);
                        if res < 1e-6 {
                            return Ok((root, tau));
                        }
                    }
                }
            }
        }
        y = yn;
        fy = fn_;
    }
    Err(Error::NonConvergence {
        iterations: 420,
        residual: best,
    })
}

/// Damped Gauss-Newton on `(y0, tau)` with forward-difference Jacobian.
fn polish_octagon(mut y0: f64, mut tau: f64, sides: usize) -> Result<(f64, f64, f64)> {
    const FD: f64 = 1e-7;
    let mut r = shooting_residual(y0, tau, sides)?;
    let mut nr = norm7(&r);
    for _ in 0..50 {
        if nr < 1e-14 {
            break;
        }
        let ry = shooting_residual(y0 + FD, tau, sides)?;
        let rt = shooting_residual(y0, tau + FD, sides)?;
        let jac = DMatrix::from_fn(7, 2, |i, j| {
            if j == 0 {
                (ry[i] - r[i]) / FD
            } else {
                (rt[i] - r[i]) / FD
            }
        });
        let rhs = DVector::from_iterator(7, r.iter().map(|v| -v));
        let step = jac
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|_| Error::Singular("shooting Jacobian"))?;
        let mut lam = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let (yn, tn) = (y0 + lam * step[0], tau + lam * step[1]);
            if let Ok(rn) = shooting_residual(yn, tn, sides) {
                let n = norm7(&rn);
                if n < nr {
                    y0 = yn;
                    tau = tn;
                    r = rn;
                    nr = n;
                    improved = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if nr > 1e-9 {
        return Err(Error::NonConvergence {
            iterations: 50,
            residual: nr,
        });
    }
    Ok((y0, tau, nr))
}

/// Gram-Schmidt basis of the trace-form complement of `x`.
pub fn perp_basis(x: &TracelessMatrix) -> [TracelessMatrix; 2] {
    let xx = x.trace_form(x);
    let mut out: Vec<TracelessMatrix> = Vec::with_capacity(2);
    for e in [
        TracelessMatrix::new(1.0, 0.0, 0.0),
        TracelessMatrix::new(0.0, 1.0, 0.0),
        TracelessMatrix::new(0.0, 0.0, 1.0),
    ] {
        let mut c = e - x.scale(e.trace_form(x) / xx);
        for b in &out {
            c = c - b.scale(c.trace_form(b) / b.trace_form(b));
        }
        if sqrt(abs(c.trace_form(&c))) > 1e-8 && out.len() < 2 {
            out.push(c);
        }
    }
    [out[0], out[1]]
}

/// Costate conditions for a given `(L1(0), L_R(0))`: `H(0) = 0`, one switching
/// condition per side, and `L_R(t_f) = R^-1 L_R(0) R`. Affine in the unknowns.
fn costate_conditions(
    x0: &TracelessMatrix,
    sched: &BangBangSchedule,
    l1: TracelessMatrix,
    lr: TracelessMatrix,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(sched.segments.len() + 4);
    let mut s = ExtendedState::from_costates(*x0, l1, lr);
    let z_first = control::control_matrix(&ControlPoint::vertex(sched.segments[0].0));
    out.push(control::hamiltonian(&s, &z_first)?);
    let mut prev = (sched.segments[0].0 + 2) % 3;
    for &(v, dur) in &sched.segments {
        let za = control::control_matrix(&ControlPoint::vertex(prev));
        let zb = control::control_matrix(&ControlPoint::vertex(v));
        let pa = za.scale(1.0 / s.x.trace_form(&za));
        let pb = zb.scale(1.0 / s.x.trace_form(&zb));
        out.push(s.lr.trace_form(&(pa - pb)));
        s = constant_control_solution(&s, &zb, dur)?;
        prev = v;
    }
    let d = s.lr - GroupMatrix::r().adjoint_inv(&lr);
    out.extend_from_slice(&[d.a, d.b, d.c]);
    Ok(out)
}

/// Least-squares costate for a shot trajectory; returns `(L1, L_R, residual)`.
pub fn solve_costate(
    x0: &TracelessMatrix,
    sched: &BangBangSchedule,
) -> Result<(TracelessMatrix, TracelessMatrix, f64)> {
    let basis = perp_basis(x0);
    let z = TracelessMatrix::ZERO;
    let base = costate_conditions(x0, sched, z, z)?;
    let m = base.len();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(5);
    for j in 0..3 {
        let mut v = [0.0; 3];
        v[j] = 1.0;
        cols.push(costate_conditions(
            x0,
            sched,
            TracelessMatrix::from_vec3(v),
            z,
        )?);
    }
    for b in basis {
        cols.push(costate_conditions(x0, sched, z, b)?);
    }
    let a = DMatrix::from_fn(m, 5, |i, j| cols[j][i] - base[i]);
    let rhs = DVector::from_iterator(m, base.iter().map(|v| -v));
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|_| Error::Singular("costate system"))?;
    let resid = (&a * &sol - &rhs).amax();
    let l1 = TracelessMatrix::new(sol[0], sol[1], sol[2]);
    let lr = basis[0].scale(sol[3]) + basis[1].scale(sol[4]);
    Ok((l1, lr, resid))
}

/// Shoots the smoothed `(6k+2)`-gon and evaluates it as a Pontryagin extremal.
pub fn octagon_shoot(k: usize, samples_per_segment: usize) -> Result<OctagonSolution> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive"));
    }
    let sides = 3 * k + 1;
    let (y_seed, tau_seed) = seed_octagon(sides)?;
    let (y0, tau, _) = polish_octagon(y_seed, tau_seed, sides)?;
    let schedule = octagon_schedule(k, tau)?;
    let x0 = axis_state(y0)?;
    let (l1, lr, costate_residual) = solve_costate(&x0, &schedule)?;
    let trajectory = bang_bang_run(&x0, &schedule, Some((l1, lr)), samples_per_segment)?;
    let s0 = trajectory.states[0];
    let transversality = dynamics::transversality(&s0, trajectory.final_state());
    let breakpoints = schedule.breakpoints();
    let near_switch = |t: f64| breakpoints.iter().any(|&b| abs(t - b) < 1e-9);
    let (mut max_h, mut gap, mut edge) = (0.0f64, f64::NEG_INFINITY, 0usize);
    let mut max_dist = 0.0f64;
    for ((t, s), c) in trajectory
        .times
        .iter()
        .zip(&trajectory.states)
        .zip(&trajectory.controls)
    {
        max_h = max_h.max(abs(c.hamiltonian));
        let z = halfplane::phi_inv(&s.x)?;
        max_dist = max_dist.max(sqrt(z.x * z.x + (z.y - 1.0) * (z.y - 1.0)));
        if near_switch(*t) {
            continue;
        }
        let opt = control::maximize_simplex(s)?;
        for j in 0..3 {
            let zj = control::control_matrix(&ControlPoint::vertex(j));
            if zj != c.zu {
                gap = gap.max(control::hamiltonian(s, &zj)? - c.hamiltonian);
            }
        }
        if opt.singular {
            edge += 1;
        }
    }
    Ok(OctagonSolution {
        k,
        density: trajectory.cost() / sqrt(12.0),
        schedule,
        y0,
        x0,
        side_time: tau,
        l1,
        lr,
        trajectory,
        transversality,
        max_hamiltonian: max_h,
        max_maximality_gap: gap,
        edge_samples: edge,
        max_distance_to_i: max_dist,
        costate_residual,
    })
}

/// Six boundary points `sigma_0 .. sigma_5` at parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiCurveSample {
    pub t: f64,
    pub points: [[f64; 2]; 6],
}

/// Residuals of the multi-point identities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MultiPointResiduals {
    /// `max |sigma_j + sigma_{j+2} + sigma_{j+4}|`.
    pub sum: f64,
    /// `max |sigma_j + sigma_{j+3}|`.
    pub antipodal: f64,
    /// `max |sigma_j ^ sigma_{j+2} - sqrt3/2|`.
    pub wedge: f64,
}

impl MultiPointResiduals {
    pub fn max(&self) -> f64 {
        self.sum.max(self.antipodal).max(self.wedge)
    }
}

fn wedge(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl MultiCurveSample {
    pub fn from_group(t: f64, g: &GroupMatrix) -> Self {
        let mut points = [[0.0; 2]; 6];
        for (j, p) in points.iter_mut().enumerate() {
            *p = g.apply(hexagon_point(j));
        }
        MultiCurveSample { t, points }
    }

    pub fn residuals(&self) -> MultiPointResiduals {
        let p = &self.points;
        let mut r = MultiPointResiduals::default();
        for j in 0..6 {
            let (a, b, c) = (p[j], p[(j + 2) % 6], p[(j + 4) % 6]);
            r.sum = r
                .sum
                .max(abs(a[0] + b[0] + c[0]).max(abs(a[1] + b[1] + c[1])));
            let d = p[(j + 3) % 6];
            r.antipodal = r.antipodal.max(abs(a[0] + d[0]).max(abs(a[1] + d[1])));
            r.wedge = r.wedge.max(abs(wedge(a, b) - SQRT3 / 2.0));
        }
        r
    }
}

/// Boundary of the disc traced by a trajectory over one period.
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub samples: Vec<MultiCurveSample>,
    /// Closed polygon `sigma_0` over `[0, 3 t_f]` followed by `-sigma_0`.
    pub polygon: Vec<[f64; 2]>,
    /// Shoelace area of `polygon`.
    pub area: f64,
    /// `max_j |sigma_j(3 t_f) - sigma_{j+3}(0)|`.
    pub closure_residual: f64,
    pub closed: bool,
}

pub const CLOSURE_TOLERANCE: f64 = 1e-6;

/// Rebuilds `sigma_j(t) = g(t) e*_j` and extends it with `g(t + t_f) = g(t) R`.
pub fn reconstruct_boundary(traj: &Trajectory, samples_per_segment: usize) -> Result<Boundary> {
    if traj.len() < 2 {
        return Err(Error::InvalidInput("trajectory needs at least two samples"));
    }
    let n = traj.len();
    let stride = (n - 1).checked_div(samples_per_segment).unwrap_or(1).max(1);
    let mut idx: Vec<usize> = (0..n - 1).step_by(stride).collect();
    idx.push(n - 1);
    let samples: Vec<MultiCurveSample> = idx
        .iter()
        .map(|&i| MultiCurveSample::from_group(traj.times[i], &traj.states[i].g))
        .collect();
    let mut polygon = Vec::with_capacity(6 * samples.len());
    for j in 0..6 {
        for s in &samples[..samples.len() - 1] {
            polygon.push(s.points[j]);
        }
    }
    let g0 = traj.states[0].g;
    let r2 = GroupMatrix::r().mul(&GroupMatrix::r());
    let gf = traj.final_state().g.mul(&r2);
    let mut closure = 0.0f64;
    for j in 0..6 {
        let a = gf.apply(hexagon_point(j));
        let b = g0.apply(hexagon_point(j + 3));
        closure = closure.max(abs(a[0] - b[0])).max(abs(a[1] - b[1]));
    }
    Ok(Boundary {
        area: polygon_area(&polygon),
        samples,
        polygon,
        closure_residual: closure,
        closed: closure <= CLOSURE_TOLERANCE,
    })
}

/// State-dependent curvatures `v_j = e*_{2j} ^ (X + X^-1 X') e*_{2j}` for `j = 0, 1, 2`.
pub fn state_curvatures(x: &TracelessMatrix, xdot: &TracelessMatrix) -> [f64; 3] {
    // X^-1 = -X / det X for traceless X.
    let d = x.det();
    let xi = x.scale(-1.0 / d).mul_matrix(xdot);
    let xa = x.to_array();
    let m = [
        [xa[0][0] + xi[0][0], xa[0][1] + xi[0][1]],
        [xa[1][0] + xi[1][0], xa[1][1] + xi[1][1]],
    ];
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let e = hexagon_point(2 * j);
        let me = [
            m[0][0] * e[0] + m[0][1] * e[1],
            m[1][0] * e[0] + m[1][1] * e[1],
        ];
        *o = wedge(e, me);
    }
    out
}

/// `3/(sqrt3 a + c)`: the curvature left when the other two vanish.
pub fn escape_curvature(x: &TracelessMatrix) -> f64 {
    3.0 / (SQRT3 * x.a + x.c)
}

const ZETA: Complex = Complex::new(-0.5, 0.866_025_403_784_438_6);

fn zeta_pow(j: i64) -> Complex {
    match j.rem_euclid(3) {
        0 => Complex::ONE,
        1 => ZETA,
        _ => ZETA.conj(),
    }
}

fn raw_even(rr: f64, r: f64, rho: f64, theta: f64, j: i64) -> Complex {
    Complex::cis(theta).scale(rr) * zeta_pow(j) + Complex::cis(-rho * theta).scale(r) * zeta_pow(-j)
}

/// Hypotrochoid multi-point `sigma_{2j} = R e^{i t} zeta^j + r e^{-i rho t} zeta^{-j}`,
/// rescaled so the wedge is `sqrt3/2`.
///
/// When `R^2 < r^2` the orientation is reversed (`sigma_{2j}(t) -> s sigma_{-2j}(-t)`)
/// so the wedge stays positive.
pub fn hypotrochoid_multicurve(rr: f64, r: f64, rho: f64, t: f64) -> Result<MultiCurveSample> {
    let gap = rr * rr - r * r;
    if !(abs(gap) > 1e-12 * (rr * rr + r * r).max(1e-300)) {
        return Err(Error::Singular(
            "hypotrochoid with |r| = |R| has zero wedge",
        ));
    }
    let s = 1.0 / sqrt(abs(gap));
    let even = |j: i64| -> Complex {
        if gap > 0.0 {
            raw_even(rr, r, rho, t, j).scale(s)
        } else {
            raw_even(rr, r, rho, -t, -j).scale(s)
        }
    };
    let e = [even(0), even(1), even(2)];
    let mut points = [[0.0; 2]; 6];
    for j in 0..3 {
        points[2 * j] = [e[j].re, e[j].im];
        // sigma_{2j+1} = -sigma_{2j+4}
        let o = e[(j + 2) % 3];
        points[2 * j + 1] = [-o.re, -o.im];
    }
    Ok(MultiCurveSample { t, points })
}

/// `(R, r, rho)` for the hypotrochoid with fixed radius `R1`, rolling radius `r1` and pen offset `d1`.
pub fn hypotrochoid_from_standard(big_r1: f64, r1: f64, d1: f64) -> Result<(f64, f64, f64)> {
    if r1 == 0.0 {
        return Err(Error::InvalidInput("rolling radius must be nonzero"));
    }
    Ok((big_r1 - r1, d1, (big_r1 - r1) / r1))
}

/// Shift `2 pi / (3 rho)` of the period-shift identity.
pub fn hypotrochoid_period_shift(rho: f64) -> f64 {
    2.0 * PI / (3.0 * rho)
}

/// Samples `sigma_0` of a hypotrochoid over `[0, turns * 2 pi]`.
pub fn hypotrochoid_curve(
    rr: f64,
    r: f64,
    rho: f64,
    turns: f64,
    n: usize,
) -> Result<Vec<[f64; 2]>> {
    let mut out = vec![[0.0; 2]; n + 1];
    for (i, p) in out.iter_mut().enumerate() {
        let t = 2.0 * PI * turns * i as f64 / n as f64;
        *p = hypotrochoid_multicurve(rr, r, rho, t)?.points[0];
    }
    Ok(out)
}

/// Point on the circle of radius `rad`; used to draw reference discs.
pub fn circle_point(rad: f64, theta: f64) -> [f64; 2] {
    [rad * cos(theta), rad * sin(theta)]
}
