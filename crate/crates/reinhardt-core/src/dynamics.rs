//! The lifted state/costate flow, its integration and closed-form solutions.

use alloc::vec::Vec;

use crate::control::{self, ControlPoint, ControlSetKind, ControlSetSpec};
use crate::halfplane;
use crate::math::{abs, ceil, gauss_legendre, sqrt};
use crate::ode::{Dopri5, OdeSystem, Rk4};
use crate::sl2::{exp_traceless, GroupMatrix, TracelessMatrix};
use crate::{Error, Result};

/// One point `(g, X, L1, L_R, lambda)` of a lifted trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedState {
    pub g: GroupMatrix,
    pub x: TracelessMatrix,
    pub l1: TracelessMatrix,
    pub lr: TracelessMatrix,
    pub lambda_cost: f64,
}

impl ExtendedState {
    pub fn new(
        g: GroupMatrix,
        x: TracelessMatrix,
        l1: TracelessMatrix,
        lr: TracelessMatrix,
        lambda_cost: f64,
    ) -> Self {
        ExtendedState {
            g,
            x,
            l1,
            lr,
            lambda_cost,
        }
    }

    /// `(I, J, (3/2) lambda J, 0)` with `lambda = -1`.
    pub fn singular_locus() -> Self {
        ExtendedState::new(
            GroupMatrix::IDENTITY,
            TracelessMatrix::J,
            TracelessMatrix::J.scale(-1.5),
            TracelessMatrix::ZERO,
            -1.0,
        )
    }

    /// State at `g = I` with costates `L1`, `L_R` and `lambda = -1`.
    pub fn from_costates(x: TracelessMatrix, l1: TracelessMatrix, lr: TracelessMatrix) -> Self {
        ExtendedState::new(GroupMatrix::IDENTITY, x, l1, lr, -1.0)
    }

    pub fn to_vec(&self) -> [f64; 13] {
        let g = self.g.to_vec4();
        [
            g[0], g[1], g[2], g[3], self.x.a, self.x.b, self.x.c, self.l1.a, self.l1.b, self.l1.c,
            self.lr.a, self.lr.b, self.lr.c,
        ]
    }

    pub fn from_slice(v: &[f64], lambda_cost: f64) -> Self {
        ExtendedState::new(
            GroupMatrix::new(v[0], v[1], v[2], v[3]),
            TracelessMatrix::new(v[4], v[5], v[6]),
            TracelessMatrix::new(v[7], v[8], v[9]),
            TracelessMatrix::new(v[10], v[11], v[12]),
            lambda_cost,
        )
    }

    /// Rescales `X` and `g` to unit determinant and projects `L_R` onto `X`-perp.
    pub fn renormalize(&self) -> Self {
        let mut s = *self;
        let d = s.x.det();
        if d > 0.0 {
            s.x = s.x.scale(1.0 / sqrt(d));
        }
        s.g = s.g.renormalize();
        let xx = s.x.trace_form(&s.x);
        if xx != 0.0 {
            s.lr = s.lr - s.x.scale(s.lr.trace_form(&s.x) / xx);
        }
        s
    }

    pub fn max_abs_diff(&self, o: &ExtendedState) -> f64 {
        let a = self.to_vec();
        let b = o.to_vec();
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| abs(p - q))
            .fold(0.0, f64::max)
    }
}

/// Time derivative of an [`ExtendedState`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateDerivative {
    pub g: GroupMatrix,
    pub x: TracelessMatrix,
    pub l1: TracelessMatrix,
    pub lr: TracelessMatrix,
}

/// `(gX, [P, X], [L1, X], [P, L_R] - (<L_R, Z>/<X, Z>)[P, X] + [-L1 + (3/2) lambda J, X])`
/// with `P = Z / <Z, X>`.
pub fn reinhardt_field(s: &ExtendedState, zu: &TracelessMatrix) -> Result<StateDerivative> {
    let xz = s.x.trace_form(zu);
    if !(xz < 0.0) || abs(xz) < 1e-14 {
        return Err(Error::StarViolation { pairing: xz });
    }
    let p = zu.scale(1.0 / xz);
    let px = p.commutator(&s.x);
    let k = s.lr.trace_form(zu) / xz;
    let m = -s.l1 + TracelessMatrix::J.scale(1.5 * s.lambda_cost);
    Ok(StateDerivative {
        g: s.g.mul_algebra(&s.x),
        x: px,
        l1: s.l1.commutator(&s.x),
        lr: p.commutator(&s.lr) - px.scale(k) + m.commutator(&s.x),
    })
}

/// Running cost `-(3/2) <J, X>`.
pub fn cost_rate(x: &TracelessMatrix) -> f64 {
    -1.5 * TracelessMatrix::J.trace_form(x)
}

/// Noether quantity `<J, L1 + L_R>`.
pub fn angular_momentum(s: &ExtendedState) -> f64 {
    TracelessMatrix::J.trace_form(&(s.l1 + s.lr))
}

/// Piecewise-constant vertex controls `(vertex, duration)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BangBangSchedule {
    pub segments: Vec<(usize, f64)>,
}

impl BangBangSchedule {
    pub fn new(segments: Vec<(usize, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("empty schedule"));
        }
        for &(v, d) in &segments {
            if v > 2 || !(d > 0.0) {
                return Err(Error::InvalidInput(
                    "schedule needs vertices 0..=2 and positive durations",
                ));
            }
        }
        Ok(BangBangSchedule { segments })
    }

    pub fn total(&self) -> f64 {
        self.segments.iter().map(|s| s.1).sum()
    }

    /// Switching times including `0` and the final time.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut t = 0.0;
        out.push(t);
        for s in &self.segments {
            t += s.1;
            out.push(t);
        }
        out
    }

    pub fn vertex_at(&self, t: f64) -> usize {
        let mut acc = 0.0;
        for s in &self.segments {
            acc += s.1;
            if t < acc {
                return s.0;
            }
        }
        self.segments.last().map(|s| s.0).unwrap_or(0)
    }
}

/// How the control is chosen along an integration.
#[derive(Clone, Debug, PartialEq)]
pub enum Policy {
    Constant(ControlPoint),
    Schedule(BangBangSchedule),
    /// Re-maximizes the Hamiltonian at every field evaluation.
    ClosedLoop(ControlSetSpec),
}

impl Policy {
    fn control_at(&self, s: &ExtendedState, t: f64) -> Result<(ControlPoint, TracelessMatrix)> {
        match self {
            Policy::Constant(u) => Ok((*u, control::control_matrix(u))),
            Policy::Schedule(sch) => {
                let u = ControlPoint::vertex(sch.vertex_at(t));
                Ok((u, control::control_matrix(&u)))
            }
            Policy::ClosedLoop(spec) => {
                let opt = control::maximize(s, spec)?;
                Ok((opt.point, opt.matrix(spec)))
            }
        }
    }

    fn star_ok(&self, x: &TracelessMatrix) -> bool {
        match self {
            Policy::ClosedLoop(spec) if spec.kind == ControlSetKind::Disk => {
                disk_star_margin(x, spec) > 0.0
            }
            _ => halfplane::vertex_pairings(x).iter().all(|&p| p < 0.0),
        }
    }
}

/// `min_z -<X, Z(z)>/(2 alpha)` over the disk boundary; positive inside the star domain.
pub fn disk_star_margin(x: &TracelessMatrix, spec: &ControlSetSpec) -> f64 {
    let s = x.to_su11();
    s.delta - spec.beta1() * s.p.abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rk45,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub method: Method,
    pub renormalize_every: usize,
    /// Local error tolerance for the adaptive method.
    pub tol: f64,
    /// Keep every n-th step in the trajectory record.
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-4,
            method: Method::Rk4,
            renormalize_every: 100,
            tol: 1e-10,
            record_every: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlRecord {
    pub u: ControlPoint,
    pub zu: TracelessMatrix,
    pub hamiltonian: f64,
}

/// Largest deviations from the initial values seen along a run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DriftReport {
    pub det_x: f64,
    pub lr_dot_x: f64,
    pub hamiltonian: f64,
    pub angular_momentum: f64,
    pub det_l1: f64,
    /// `<X, Z_u>`, meaningful for constant controls.
    pub pairing: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exit {
    Completed,
    /// Left the star domain at time `t`.
    StarExit {
        t: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ExtendedState>,
    pub controls: Vec<ControlRecord>,
    /// Accumulated cost at each sample.
    pub costs: Vec<f64>,
    pub drift: DriftReport,
    pub exit: Exit,
}

impl Trajectory {
    pub fn cost(&self) -> f64 {
        self.costs.last().copied().unwrap_or(0.0)
    }

    pub fn final_state(&self) -> &ExtendedState {
        self.states
            .last()
            .expect("trajectory has at least one state")
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn empty() -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            controls: Vec::new(),
            costs: Vec::new(),
            drift: DriftReport::default(),
            exit: Exit::Completed,
        }
    }

    pub(crate) fn push(&mut self, t: f64, s: ExtendedState, c: ControlRecord, cost: f64) {
        self.times.push(t);
        self.states.push(s);
        self.controls.push(c);
        self.costs.push(cost);
    }

    /// Recomputes the drift report from the stored samples.
    pub fn recompute_drift(&mut self) {
        let Some(s0) = self.states.first() else {
            return;
        };
        let c0 = self.controls[0];
        let (dx0, dl0, a0) = (s0.x.det(), s0.l1.det(), angular_momentum(s0));
        let p0 = s0.x.trace_form(&c0.zu);
        let h0 = c0.hamiltonian;
        let mut d = DriftReport::default();
        for (s, c) in self.states.iter().zip(self.controls.iter()) {
            d.det_x = d.det_x.max(abs(s.x.det() - dx0));
            d.lr_dot_x = d.lr_dot_x.max(abs(s.lr.trace_form(&s.x)));
            d.hamiltonian = d.hamiltonian.max(abs(c.hamiltonian - h0));
            d.angular_momentum = d.angular_momentum.max(abs(angular_momentum(s) - a0));
            d.det_l1 = d.det_l1.max(abs(s.l1.det() - dl0));
            d.pairing = d.pairing.max(abs(s.x.trace_form(&c.zu) - p0));
        }
        self.drift = d;
    }
}

struct FlowSystem<'a> {
    policy: &'a Policy,
    lambda_cost: f64,
    t_offset: f64,
}

impl OdeSystem for FlowSystem<'_> {
    fn dim(&self) -> usize {
        14
    }

    fn eval(&mut self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let s = ExtendedState::from_slice(y, self.lambda_cost);
        let (_, zu) = self.policy.control_at(&s, t + self.t_offset)?;
        let d = reinhardt_field(&s, &zu)?;
        write_derivative(&d, &s.x, dy);
        Ok(())
    }
}

fn write_derivative(d: &StateDerivative, x: &TracelessMatrix, dy: &mut [f64]) {
    let g = d.g.to_vec4();
    dy[..4].copy_from_slice(&g);
    dy[4..7].copy_from_slice(&d.x.to_vec3());
    dy[7..10].copy_from_slice(&d.l1.to_vec3());
    dy[10..13].copy_from_slice(&d.lr.to_vec3());
    dy[13] = cost_rate(x);
}

fn record(policy: &Policy, s: &ExtendedState, t: f64) -> Result<ControlRecord> {
    let (u, zu) = policy.control_at(s, t)?;
    Ok(ControlRecord {
        u,
        zu,
        hamiltonian: control::hamiltonian(s, &zu)?,
    })
}

fn pack(s: &ExtendedState, cost: f64) -> [f64; 14] {
    let v = s.to_vec();
    let mut y = [0.0; 14];
    y[..13].copy_from_slice(&v);
    y[13] = cost;
    y
}

/// Integrates the lifted flow on `[0, t_end]`, recording samples, cost and drift.
///
/// Leaving the star domain ends the run early with [`Exit::StarExit`].
pub fn integrate(
    s0: &ExtendedState,
    policy: &Policy,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidInput("t_end must be positive"));
    }
    if !(cfg.step > 0.0) {
        return Err(Error::InvalidInput("step must be positive"));
    }
    let mut traj = Trajectory::empty();
    traj.push(0.0, *s0, record(policy, s0, 0.0)?, 0.0);
    let mut pieces = Vec::new();
    match policy {
        Policy::Schedule(sch) => {
            let bp = sch.breakpoints();
            for w in bp.windows(2) {
                if w[0] >= t_end {
                    break;
                }
                pieces.push((w[0], w[1].min(t_end)));
            }
            if *bp.last().unwrap() < t_end {
                pieces.push((*bp.last().unwrap(), t_end));
            }
        }
        _ => pieces.push((0.0, t_end)),
    }
    let mut y = pack(s0, 0.0);
    let mut steps_since_renorm = 0usize;
    let mut step_count = 0usize;
    // Last state known to be admissible, recorded at the end if it was skipped.
    let mut last_good = (0.0, y);
    'pieces: for (a, b) in pieces {
        // Within a schedule piece the vertex is fixed; evaluate it at the midpoint.
        let piece_policy = match policy {
            Policy::Schedule(sch) => {
                Policy::Constant(ControlPoint::vertex(sch.vertex_at(0.5 * (a + b))))
            }
            p => p.clone(),
        };
        let mut sys = FlowSystem {
            policy: &piece_policy,
            lambda_cost: s0.lambda_cost,
            t_offset: 0.0,
        };
        let mut t = a;
        match cfg.method {
            Method::Rk4 => {
                let n = ceil((b - a) / cfg.step - 1e-9).max(1.0) as usize;
                let h = (b - a) / n as f64;
                let mut rk = Rk4::new(14);
                let switching = matches!(piece_policy, Policy::ClosedLoop(spec) if spec.kind == ControlSetKind::Simplex);
                for k in 0..n {
                    let mut trial = y;
                    let stepped = if switching {
                        simplex_switching_step(&mut rk, t, &mut trial, h, s0.lambda_cost)
                    } else {
                        rk.step(&mut sys, t, &mut trial, h)
                    };
                    if let Err(e) = stepped {
                        if matches!(e, Error::StarViolation { .. }) {
                            traj.exit = Exit::StarExit { t };
                            break 'pieces;
                        }
                        return Err(e);
                    }
                    t = if k + 1 == n {
                        b
                    } else {
                        a + h * (k + 1) as f64
                    };
                    y = trial;
                    if !accept_step(
                        &mut y,
                        &mut traj,
                        &piece_policy,
                        s0.lambda_cost,
                        t,
                        cfg,
                        &mut steps_since_renorm,
                        &mut step_count,
                    )? {
                        break 'pieces;
                    }
                    last_good = (t, y);
                }
            }
            Method::Rk45 => {
                let mut dp = Dopri5::new(14, cfg.tol);
                let mut h = cfg.step.min(b - a);
                while t < b - 1e-15 {
                    let hs = h.min(b - t);
                    let mut trial = y;
                    let (ok, hn) = match dp.try_step(&mut sys, t, &mut trial, hs) {
                        Ok(r) => r,
                        Err(Error::StarViolation { .. }) => (false, 0.5 * hs),
                        Err(e) => return Err(e),
                    };
                    if ok {
                        t = if hs == b - t { b } else { t + hs };
                        y = trial;
                        if !accept_step(
                            &mut y,
                            &mut traj,
                            &piece_policy,
                            s0.lambda_cost,
                            t,
                            cfg,
                            &mut steps_since_renorm,
                            &mut step_count,
                        )? {
                            break 'pieces;
                        }
                        last_good = (t, y);
                    } else if hn < dp.h_min {
                        traj.exit = Exit::StarExit { t };
                        break 'pieces;
                    }
                    h = hn;
                }
            }
        }
    }
    let (tg, yg) = last_good;
    if tg > *traj.times.last().unwrap() {
        let s = ExtendedState::from_slice(&yg, s0.lambda_cost);
        if let Ok(r) = record(policy, &s, tg) {
            traj.push(tg, s, r, yg[13]);
        }
    }
    traj.recompute_drift();
    Ok(traj)
}

fn frozen_step(
    rk: &mut Rk4,
    vertex: usize,
    lambda_cost: f64,
    t: f64,
    y: &mut [f64; 14],
    h: f64,
) -> Result<()> {
    let policy = Policy::Constant(ControlPoint::vertex(vertex));
    let mut sys = FlowSystem {
        policy: &policy,
        lambda_cost,
        t_offset: 0.0,
    };
    rk.step(&mut sys, t, y, h)
}

fn vertex_hamiltonian(y: &[f64; 14], lambda_cost: f64, vertex: usize) -> Result<f64> {
    let s = ExtendedState::from_slice(y, lambda_cost);
    control::hamiltonian(&s, &control::control_matrix(&ControlPoint::vertex(vertex)))
}

/// One closed-loop simplex step with the vertex frozen at its start value; a
/// change of maximizing vertex inside the step is located by root finding on
/// `H_old - H_new` and the step is split there.
fn simplex_switching_step(
    rk: &mut Rk4,
    t: f64,
    y: &mut [f64; 14],
    h: f64,
    lambda_cost: f64,
) -> Result<()> {
    let start = *y;
    let s = ExtendedState::from_slice(&start, lambda_cost);
    let v0 = control::maximize_simplex(&s)?.vertex.unwrap_or(0);
    let mut end = start;
    frozen_step(rk, v0, lambda_cost, t, &mut end, h)?;
    let v1 = control::maximize_simplex(&ExtendedState::from_slice(&end, lambda_cost))?
        .vertex
        .unwrap_or(v0);
    if v1 == v0 {
        *y = end;
        return Ok(());
    }
    let mut failure = None;
    let mut gap = |tau: f64| -> f64 {
        let mut z = start;
        let r = frozen_step(rk, v0, lambda_cost, t, &mut z, tau).and_then(|_| {
            Ok(vertex_hamiltonian(&z, lambda_cost, v0)? - vertex_hamiltonian(&z, lambda_cost, v1)?)
        });
        match r {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let tau = if gap(0.0) <= 0.0 {
        0.0
    } else if gap(h) >= 0.0 {
        // Tie at the end of the step: no switch inside it.
        h
    } else {
        crate::math::find_root(&mut gap, 0.0, h, 1e-15 * (1.0 + abs(t)))?
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let mut mid = start;
    if tau > 0.0 {
        frozen_step(rk, v0, lambda_cost, t, &mut mid, tau)?;
    }
    if h - tau > 0.0 {
        frozen_step(rk, v1, lambda_cost, t + tau, &mut mid, h - tau)?;
    }
    *y = mid;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn accept_step(
    y: &mut [f64; 14],
    traj: &mut Trajectory,
    policy: &Policy,
    lambda_cost: f64,
    t: f64,
    cfg: &IntegratorConfig,
    since: &mut usize,
    count: &mut usize,
) -> Result<bool> {
    let mut s = ExtendedState::from_slice(&y[..], lambda_cost);
    *since += 1;
    *count += 1;
    if cfg.renormalize_every > 0 && *since >= cfg.renormalize_every {
        s = s.renormalize();
        let cost = y[13];
        *y = pack(&s, cost);
        *since = 0;
    }
    if !policy.star_ok(&s.x) {
        traj.exit = Exit::StarExit { t };
        return Ok(false);
    }
    if (*count).is_multiple_of(cfg.record_every.max(1)) {
        match record(policy, &s, t) {
            Ok(r) => traj.push(t, s, r, y[13]),
            Err(Error::StarViolation { .. }) => {
                traj.exit = Exit::StarExit { t };
                return Ok(false);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Flows from `t0` to `t1` (either direction) with fixed RK4 steps and no renormalization.
pub fn propagate(
    s0: &ExtendedState,
    policy: &Policy,
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<ExtendedState> {
    let mut sys = FlowSystem {
        policy,
        lambda_cost: s0.lambda_cost,
        t_offset: 0.0,
    };
    let mut y = pack(s0, 0.0);
    crate::ode::integrate_rk4(&mut sys, t0, t1, &mut y, step, |_, _| Ok(true))?;
    Ok(ExtendedState::from_slice(&y, s0.lambda_cost))
}

/// Negated field, so that integrating it forward retraces the flow backward.
pub fn reversed_field(s: &ExtendedState, zu: &TracelessMatrix) -> Result<StateDerivative> {
    let d = reinhardt_field(s, zu)?;
    Ok(StateDerivative {
        g: d.g.scale(-1.0),
        x: -d.x,
        l1: -d.l1,
        lr: -d.lr,
    })
}

const GL_NODES: usize = 32;

fn check_star(x0: &TracelessMatrix, zu: &TracelessMatrix) -> Result<f64> {
    let xz = x0.trace_form(zu);
    if !(xz < 0.0) || abs(xz) < 1e-14 {
        return Err(Error::StarViolation { pairing: xz });
    }
    Ok(xz)
}

/// Closed-form solution for a constant control matrix.
///
/// `g` and `X` come from matrix exponentials, `L1` from the coadjoint orbit,
/// and `L_R = Ad_{exp(tP)} S(t)` with `S` evaluated by Gauss-Legendre
/// quadrature (32 nodes per unit interval).
pub fn constant_control_solution(
    s0: &ExtendedState,
    zu: &TracelessMatrix,
    t: f64,
) -> Result<ExtendedState> {
    let xz = check_star(&s0.x, zu)?;
    let p = zu.scale(1.0 / xz);
    let x0 = s0.x;
    let ep = exp_traceless(&p, t);
    let x = ep.adjoint(&x0);
    let h = exp_traceless(&(x0 + p), t).mul(&exp_traceless(&p, -t));
    let l1 = h.adjoint_inv(&s0.l1);
    let s = s_integral(s0, &p, t);
    Ok(ExtendedState::new(
        s0.g.mul(&h),
        x,
        l1,
        ep.adjoint(&s),
        s0.lambda_cost,
    ))
}

/// `N(s) = Ad_{exp(-sP)}(-L1(s) + (3/2) lambda J)`.
fn n_of(s0: &ExtendedState, p: &TracelessMatrix, s: f64) -> TracelessMatrix {
    let l1 = exp_traceless(&(s0.x + *p), -s).adjoint(&s0.l1);
    let j = exp_traceless(p, -s).adjoint(&TracelessMatrix::J);
    -l1 + j.scale(1.5 * s0.lambda_cost)
}

/// `S(t) = L_R(0) - t <P, L_R(0)> [P, X0] + int_0^t [N, X0] - (t - s)<N, [X0, P]>[P, X0] ds`.
fn s_integral(s0: &ExtendedState, p: &TracelessMatrix, t: f64) -> TracelessMatrix {
    let x0 = s0.x;
    let px0 = p.commutator(&x0);
    let x0p = -px0;
    let l0 = s0.lr.trace_form(p);
    let mut acc = s0.lr - px0.scale(t * l0);
    if t != 0.0 {
        let rule = gauss_legendre(GL_NODES);
        let panels = ceil(abs(t)).max(1.0) as usize;
        let hp = t / panels as f64;
        let mut sum = TracelessMatrix::ZERO;
        for k in 0..panels {
            let mid = hp * (k as f64 + 0.5);
            for &(xi, w) in &rule {
                let s = mid + 0.5 * hp * xi;
                let n = n_of(s0, p, s);
                let term = n.commutator(&x0) - px0.scale((t - s) * n.trace_form(&x0p));
                sum += term.scale(w);
            }
        }
        acc += sum.scale(0.5 * hp);
    }
    acc
}

/// `S(t)` for the given initial state and control (exposed for the affine-offset check).
pub fn constant_control_s(
    s0: &ExtendedState,
    zu: &TracelessMatrix,
    t: f64,
) -> Result<TracelessMatrix> {
    let xz = check_star(&s0.x, zu)?;
    Ok(s_integral(s0, &zu.scale(1.0 / xz), t))
}

/// Cost `-(3/2) int_0^t <J, X>` along a constant-control arc.
pub fn constant_control_cost(x0: &TracelessMatrix, zu: &TracelessMatrix, t: f64) -> Result<f64> {
    let xz = check_star(x0, zu)?;
    let p = zu.scale(1.0 / xz);
    let rule = gauss_legendre(GL_NODES);
    let panels = ceil(abs(t) * 4.0).max(1.0) as usize;
    Ok(crate::math::integrate_gl(
        |s| cost_rate(&exp_traceless(&p, s).adjoint(x0)),
        0.0,
        t,
        &rule,
        panels,
    ))
}

/// Endpoint residuals of the periodicity-modulo-`R` conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Transversality {
    /// `max |g(t_f) - R|`.
    pub g: f64,
    /// `max |X(t_f) - R^-1 X0 R|`.
    pub x: f64,
    /// `max |L_R(t_f) - R^-1 L_R(0) R|`.
    pub lr: f64,
}

impl Transversality {
    pub fn max(&self) -> f64 {
        self.g.max(self.x).max(self.lr)
    }
}

pub fn transversality(s0: &ExtendedState, sf: &ExtendedState) -> Transversality {
    let r = GroupMatrix::r();
    let target_g = s0.g.mul(&r);
    Transversality {
        g: sf.g.sub(&target_g).max_abs(),
        x: (sf.x - r.adjoint_inv(&s0.x)).max_abs(),
        lr: (sf.lr - r.adjoint_inv(&s0.lr)).max_abs(),
    }
}

/// Invariants of the abnormal inscribed-disk system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Uvw {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    /// `<K, K>`.
    pub c_k: f64,
    /// `<L_R, L_R> - 2 <K, L_R>`.
    pub c_r: f64,
}

fn abnormal_w(lr: &TracelessMatrix) -> Result<f64> {
    let q = lr.trace_form(lr);
    if !(q > 1e-24) {
        return Err(Error::Singular("abnormal system needs <L_R, L_R> > 0"));
    }
    Ok(sqrt(2.0 * q))
}

/// `X' = -[L_R, X]/w`, `L_R' = [L_R - K, X]` with `w = sqrt(2 <L_R, L_R>)`.
pub fn abnormal_inscribed_field(
    x: &TracelessMatrix,
    lr: &TracelessMatrix,
    k: &TracelessMatrix,
) -> Result<(TracelessMatrix, TracelessMatrix)> {
    let w = abnormal_w(lr)?;
    Ok((-lr.commutator(x).scale(1.0 / w), (*lr - *k).commutator(x)))
}

pub fn uvw(x: &TracelessMatrix, lr: &TracelessMatrix, k: &TracelessMatrix) -> Result<Uvw> {
    let w = abnormal_w(lr)?;
    Ok(Uvw {
        u: x.trace_form(k),
        v: lr.commutator(x).trace_form(k),
        w,
        c_k: k.trace_form(k),
        c_r: lr.trace_form(lr) - 2.0 * k.trace_form(lr),
    })
}

/// Integrates the abnormal system with fixed RK4 steps, returning `(t, X, L_R)` samples.
pub fn integrate_abnormal(
    x0: &TracelessMatrix,
    lr0: &TracelessMatrix,
    k: &TracelessMatrix,
    t_end: f64,
    step: f64,
) -> Result<Vec<(f64, TracelessMatrix, TracelessMatrix)>> {
    let kk = *k;
    let mut sys = (6usize, move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let x = TracelessMatrix::new(y[0], y[1], y[2]);
        let lr = TracelessMatrix::new(y[3], y[4], y[5]);
        let (dx, dl) = abnormal_inscribed_field(&x, &lr, &kk)?;
        dy[..3].copy_from_slice(&dx.to_vec3());
        dy[3..].copy_from_slice(&dl.to_vec3());
        Ok(())
    });
    let mut y = [x0.a, x0.b, x0.c, lr0.a, lr0.b, lr0.c];
    let mut out = Vec::new();
    out.push((0.0, *x0, *lr0));
    crate::ode::integrate_rk4(&mut sys, 0.0, t_end, &mut y, step, |t, y| {
        out.push((
            t,
            TracelessMatrix::new(y[0], y[1], y[2]),
            TracelessMatrix::new(y[3], y[4], y[5]),
        ));
        Ok(true)
    })?;
    Ok(out)
}
