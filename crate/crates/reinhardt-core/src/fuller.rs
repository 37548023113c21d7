//! Near the singular locus: hyperboloid coordinates, the truncated Fuller
//! system, its Hamiltonian structure, log-spirals and valuation fits.

use alloc::vec::Vec;

use crate::control::{self, ControlSetSpec};
use crate::dynamics::{self, ExtendedState, IntegratorConfig, Policy};
use crate::math::{abs, ln, sqrt, Complex};
use crate::ode::{integrate_rk4, OdeSystem};
use crate::sl2::{GroupMatrix, Su11Matrix, TracelessMatrix};
use crate::{Error, Result};

/// `[w] = sqrt(1 + |w|^2)`.
pub fn bracket(w: Complex) -> f64 {
    sqrt(1.0 + w.norm_sqr())
}

/// `R(u, v) = Re(conj(u) v)`.
pub fn real_pair(u: Complex, v: Complex) -> f64 {
    u.real_dot(v)
}

/// Complex coordinates of `(X, L1, L_R)` near the singular locus.
///
/// `X ~ ([w], w)`, `L1 ~ (-sqrt(d)[b], sqrt(d) b)`, `L_R ~ (R(c, w)/[w], c)`
/// in `su(1,1)` form `(delta, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperboloidState {
    pub w: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: f64,
}

impl HyperboloidState {
    pub fn singular_locus() -> Self {
        HyperboloidState {
            w: Complex::ZERO,
            b: Complex::ZERO,
            c: Complex::ZERO,
            d: 2.25,
        }
    }

    pub fn x(&self) -> TracelessMatrix {
        Su11Matrix::new(bracket(self.w), self.w).to_traceless()
    }

    pub fn l1(&self) -> TracelessMatrix {
        let sd = sqrt(self.d);
        Su11Matrix::new(-sd * bracket(self.b), self.b.scale(sd)).to_traceless()
    }

    pub fn lr(&self) -> TracelessMatrix {
        Su11Matrix::new(real_pair(self.c, self.w) / bracket(self.w), self.c).to_traceless()
    }
}

/// Reads `(w, b, c, d)` off a state with `det X = 1`, `det L1 > 0` and `L_R` in `X`-perp.
pub fn to_hyperboloid(s: &ExtendedState) -> Result<HyperboloidState> {
    let x = s.x.to_su11();
    if !(x.delta > 0.0) {
        return Err(Error::Domain(
            "X must lie on the upper sheet of the hyperboloid",
        ));
    }
    let d = s.l1.det();
    if !(d > 0.0) {
        return Err(Error::UnsupportedBranch("only det L1 > 0 is supported"));
    }
    let l1 = s.l1.to_su11();
    if !(l1.delta < 0.0) {
        return Err(Error::UnsupportedBranch("L1 must lie on the lower sheet"));
    }
    Ok(HyperboloidState {
        w: x.p,
        b: l1.p.scale(1.0 / sqrt(d)),
        c: s.lr.to_su11().p,
        d,
    })
}

/// Rebuilds the extended state with the given `g` and `lambda = -1`.
pub fn from_hyperboloid(h: &HyperboloidState, g: GroupMatrix) -> ExtendedState {
    ExtendedState::new(g, h.x(), h.l1(), h.lr(), -1.0)
}

/// `mu(w, z) = [w] - beta1 R(w, z)`.
pub fn mu(w: Complex, beta1: f64, zstar: Complex) -> f64 {
    bracket(w) - beta1 * real_pair(w, zstar)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperboloidDerivative {
    pub w: Complex,
    pub b: Complex,
    pub c: Complex,
}

/// `(w', b', c')` for the boundary control `zstar` of a disk control set (`lambda = -1`).
pub fn hyperboloid_field(
    h: &HyperboloidState,
    spec: &ControlSetSpec,
    zstar: Complex,
) -> Result<HyperboloidDerivative> {
    let b1 = spec.beta1();
    let m = mu(h.w, b1, zstar);
    if !(m > 0.0) {
        return Err(Error::StarViolation { pairing: -m });
    }
    let (w, b, c) = (h.w, h.b, h.c);
    let (bw, bb, sd) = (bracket(w), bracket(b), sqrt(h.d));
    let i = Complex::I;
    let rcw = real_pair(c, w);
    let b_dot = i * (w.scale(bb) + b.scale(bw)).scale(2.0);
    let w_dot = (i * (w - zstar.scale(b1 * bw))).scale(1.0 / m);
    let m2 = bw * m * m;
    let t1 =
        (i * (c.scale(-bw) + zstar.scale(b1 * rcw))).scale((-bw + b1 * real_pair(w, zstar)) / m2);
    let t2 = (i * (zstar.scale(b1 * bw) - w)).scale((-rcw + b1 * bw * real_pair(c, zstar)) / m2);
    let t3 = i * (w.scale(2.0 * bb * sd - 3.0) + b.scale(2.0 * sd * bw));
    Ok(HyperboloidDerivative {
        w: w_dot,
        b: b_dot,
        c: t1 - t2 - t3,
    })
}

/// `2 sqrt(d) R(w, b) + (2 sqrt(d)[b] - 3)[w] - R(w - beta1 [w] z, c) / (mu [w])`.
pub fn hyperboloid_hamiltonian(
    h: &HyperboloidState,
    spec: &ControlSetSpec,
    zstar: Complex,
) -> Result<f64> {
    let b1 = spec.beta1();
    let m = mu(h.w, b1, zstar);
    if !(m > 0.0) {
        return Err(Error::StarViolation { pairing: -m });
    }
    let (bw, sd) = (bracket(h.w), sqrt(h.d));
    Ok(
        2.0 * sd * real_pair(h.w, h.b) + (2.0 * sd * bracket(h.b) - 3.0) * bw
            - real_pair(h.w - zstar.scale(b1 * bw), h.c) / (m * bw),
    )
}

/// `2 sqrt(d)[b] - 2 R(w, c)/[w]`, equal to `<J, L1 + L_R>`.
pub fn hyperboloid_angular_momentum(h: &HyperboloidState) -> f64 {
    2.0 * sqrt(h.d) * bracket(h.b) - 2.0 * real_pair(h.w, h.c) / bracket(h.w)
}

/// Leading-order field near the singular locus:
/// `c' = -3 i b`, `b' = 2 i w`, `w' = -i beta1 c/|c|`.
pub fn truncated_field(h: &HyperboloidState, beta1: f64) -> Result<HyperboloidDerivative> {
    let r = h.c.abs();
    if r == 0.0 {
        return Err(Error::Singular("c = 0"));
    }
    let i = Complex::I;
    Ok(HyperboloidDerivative {
        w: (i * h.c).scale(-beta1 / r),
        b: (i * h.w).scale(2.0),
        c: (i * h.b).scale(-3.0),
    })
}

/// Hyperboloid point for Fuller coordinates `(z1, z2, z3)`:
/// `w = beta1 z1`, `b = 2 i beta1 z2`, `c = 6 beta1 z3`, `d = 9/4`.
pub fn hyperboloid_from_fuller(z: &[Complex; 3], beta1: f64) -> HyperboloidState {
    HyperboloidState {
        w: z[0].scale(beta1),
        b: (Complex::I * z[1]).scale(2.0 * beta1),
        c: z[2].scale(6.0 * beta1),
        d: 2.25,
    }
}

/// Chain `z_n' = z_{n-1}, ..., z_2' = z_1, z_1' = gamma z_n/|z_n|`.
///
/// `z[0]` holds `z_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FullerState {
    pub z: Vec<Complex>,
    pub gamma: Complex,
}

impl FullerState {
    pub fn new(z: Vec<Complex>, gamma: Complex) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::InvalidInput("a Fuller chain needs n >= 2"));
        }
        if abs(gamma.abs() - 1.0) > 1e-12 {
            return Err(Error::InvalidInput("|gamma| must be 1"));
        }
        Ok(FullerState { z, gamma })
    }

    /// The Reinhardt truncation: `n = 3`, `gamma = -i`.
    pub fn reinhardt(z1: Complex, z2: Complex, z3: Complex) -> Self {
        FullerState {
            z: alloc::vec![z1, z2, z3],
            gamma: -Complex::I,
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.z.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_reals(v: &[f64], gamma: Complex) -> Self {
        FullerState {
            z: v.chunks(2).map(|p| Complex::new(p[0], p[1])).collect(),
            gamma,
        }
    }

    /// `z_k -> r^k e^{i theta} z_k`, which maps `z(t)` to a solution at time `r t`.
    pub fn scaled(&self, theta: f64, r: f64) -> Self {
        let rot = Complex::cis(theta);
        let mut rk = 1.0;
        let z = self
            .z
            .iter()
            .map(|&c| {
                rk *= r;
                (rot * c).scale(rk)
            })
            .collect();
        FullerState {
            z,
            gamma: self.gamma,
        }
    }

    /// `(z1, z2, z3) -> (conj z1, -conj z2, conj z3)`; pairs with `t -> -t`.
    pub fn time_reversed(&self) -> Self {
        let z = self
            .z
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.conj() } else { c.conj() })
            .collect();
        FullerState {
            z,
            gamma: self.gamma,
        }
    }
}

pub fn fuller_field(f: &FullerState) -> Result<Vec<Complex>> {
    let n = f.n();
    let zn = f.z[n - 1];
    let r = zn.abs();
    if r == 0.0 {
        return Err(Error::Singular("z_n = 0"));
    }
    let mut out = Vec::with_capacity(n);
    out.push(f.gamma * zn.scale(1.0 / r));
    out.extend_from_slice(&f.z[..n - 1]);
    Ok(out)
}

/// `H_c = Im(conj(z2) z1) + |z3|`.
pub fn hamiltonian_c(z: &[Complex]) -> f64 {
    (z[1].conj() * z[0]).im + z[2].abs()
}

/// `A_c = |z2|^2 - 2 Re(conj(z1) z3)`.
pub fn angular_momentum_c(z: &[Complex]) -> f64 {
    z[1].norm_sqr() - 2.0 * z[0].real_dot(z[2])
}

fn i_pow(n: usize) -> Complex {
    match n % 4 {
        0 => Complex::ONE,
        1 => Complex::I,
        2 => -Complex::ONE,
        _ => -Complex::I,
    }
}

fn sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `H_n = sum_{j=1}^{n-1} (-1)^j Re(conj(z_j) i^n z_{n-j}) + 2 (gamma/i^n) |z_n|`.
pub fn hamiltonian_n(f: &FullerState) -> f64 {
    let n = f.n();
    let ipn = i_pow(n);
    let mut h = 0.0;
    for j in 1..n {
        h += sign(j) * (f.z[j - 1].conj() * ipn * f.z[n - j - 1]).re;
    }
    let g = f.gamma * ipn.conj();
    h + 2.0 * g.re * f.z[n - 1].abs()
}

/// `A_n = sum_{j=1}^{n} (-1)^j Re(conj(i^{n+1} z_j) z_{n-j+1})`.
pub fn angular_momentum_n(f: &FullerState) -> f64 {
    let n = f.n();
    let ip = i_pow(n + 1);
    let mut a = 0.0;
    for j in 1..=n {
        a += sign(j) * (ip * f.z[j - 1]).real_dot(f.z[n - j]);
    }
    a
}

/// Outward or inward log-spiral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpiralDirection {
    Outward,
    Inward,
}

/// Outward: `z3 = t^{3-i}/10`, `z2 = (3-i) t^{2-i}/10`, `z1 = (2-i)(3-i) t^{1-i}/10`.
/// Inward: the time reversal of the outward spiral at `T - t`.
pub fn log_spiral(t: f64, direction: SpiralDirection, t_end: f64) -> Result<FullerState> {
    let s = match direction {
        SpiralDirection::Outward => t,
        SpiralDirection::Inward => {
            if !(t < t_end) {
                return Err(Error::Domain("inward spiral needs 0 < t < T"));
            }
            t_end - t
        }
    };
    if !(s > 0.0) || (direction == SpiralDirection::Outward && !(t > 0.0)) {
        return Err(Error::Domain("log-spiral needs positive time"));
    }
    let a3 = Complex::new(0.1, 0.0);
    let a2 = Complex::new(3.0, -1.0).scale(0.1);
    let a1 = Complex::new(2.0, -1.0) * Complex::new(3.0, -1.0).scale(0.1);
    let z3 = a3 * Complex::real_pow(s, Complex::new(3.0, -1.0))?;
    let z2 = a2 * Complex::real_pow(s, Complex::new(2.0, -1.0))?;
    let z1 = a1 * Complex::real_pow(s, Complex::new(1.0, -1.0))?;
    let out = FullerState::reinhardt(z1, z2, z3);
    Ok(match direction {
        SpiralDirection::Outward => out,
        SpiralDirection::Inward => out.time_reversed(),
    })
}

/// Time derivative of [`log_spiral`] from the closed form.
pub fn log_spiral_derivative(
    t: f64,
    direction: SpiralDirection,
    t_end: f64,
) -> Result<Vec<Complex>> {
    let (s, sgn) = match direction {
        SpiralDirection::Outward => (t, 1.0),
        SpiralDirection::Inward => (t_end - t, -1.0),
    };
    if !(s > 0.0) {
        return Err(Error::Domain("log-spiral needs positive time"));
    }
    let e3 = Complex::new(3.0, -1.0);
    let e2 = Complex::new(2.0, -1.0);
    let e1 = Complex::new(1.0, -1.0);
    let d3 = e3.scale(0.1) * Complex::real_pow(s, Complex::new(2.0, -1.0))?;
    let d2 = (e3 * e2).scale(0.1) * Complex::real_pow(s, Complex::new(1.0, -1.0))?;
    let d1 = (e3 * e2 * e1).scale(0.1) * Complex::real_pow(s, Complex::new(0.0, -1.0))?;
    let mut v = alloc::vec![d1, d2, d3];
    if direction == SpiralDirection::Inward {
        // d/dt of sign_k conj(z_k(T - t)) is -sign_k conj(z_k'(T - t)).
        for (k, c) in v.iter_mut().enumerate() {
            let s_k = if k % 2 == 1 { -1.0 } else { 1.0 };
            *c = c.conj().scale(sgn * s_k);
        }
    }
    Ok(v)
}

/// Rotations of the control phase `z3/|z3|` over `[t, 2t]`; equals `ln 2 / (2 pi)`.
pub fn spiral_winding(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("winding needs t > 0"));
    }
    // arg t^{-i} = -ln t, unwrapped.
    Ok((ln(2.0 * t) - ln(t)) / (2.0 * crate::math::PI))
}

/// Scalar function on `C^n`, evaluated on the `z` vector.
pub trait ComplexField {
    fn value(&self, z: &[Complex]) -> f64;
}

impl<F: Fn(&[Complex]) -> f64> ComplexField for F {
    fn value(&self, z: &[Complex]) -> f64 {
        self(z)
    }
}

/// Wirtinger derivatives `(d/dz_j, d/dconj(z_j))` by central differences with `h = 1e-6 (1 + |z_j|)`.
pub fn wirtinger<F: ComplexField + ?Sized>(f: &F, z: &[Complex]) -> Vec<(Complex, Complex)> {
    let mut out = Vec::with_capacity(z.len());
    let mut p = z.to_vec();
    for j in 0..z.len() {
        let h = 1e-6 * (1.0 + z[j].abs());
        let orig = p[j];
        p[j] = orig + Complex::new(h, 0.0);
        let fp = f.value(&p);
        p[j] = orig - Complex::new(h, 0.0);
        let fm = f.value(&p);
        let dx = (fp - fm) / (2.0 * h);
        p[j] = orig + Complex::new(0.0, h);
        let fp = f.value(&p);
        p[j] = orig - Complex::new(0.0, h);
        let fm = f.value(&p);
        let dy = (fp - fm) / (2.0 * h);
        p[j] = orig;
        out.push((
            Complex::new(0.5 * dx, -0.5 * dy),
            Complex::new(0.5 * dx, 0.5 * dy),
        ));
    }
    out
}

/// `{A, B}_c = sum_j (2/i)(-1)^{j+1} (dA/dz_j dB/dconj(z_{n+1-j}) - dA/dconj(z_{n+1-j}) dB/dz_j)`.
pub fn poisson_bracket_c<A: ComplexField + ?Sized, B: ComplexField + ?Sized>(
    a: &A,
    b: &B,
    z: &[Complex],
) -> f64 {
    let n = z.len();
    let da = wirtinger(a, z);
    let db = wirtinger(b, z);
    let two_over_i = Complex::new(0.0, -2.0);
    let mut acc = Complex::ZERO;
    for j in 1..=n {
        let k = n + 1 - j;
        let term = da[j - 1].0 * db[k - 1].1 - da[k - 1].1 * db[j - 1].0;
        acc += (two_over_i * term).scale(sign(j + 1));
    }
    acc.re
}

/// `z_j' = 2 i (-1)^j dG/dconj(z_{n+1-j})`.
pub fn hamiltonian_vector_field<G: ComplexField + ?Sized>(g: &G, z: &[Complex]) -> Vec<Complex> {
    let n = z.len();
    let dg = wirtinger(g, z);
    (1..=n)
        .map(|j| (Complex::I * dg[n - j].1).scale(2.0 * sign(j)))
        .collect()
}

/// `omega_c(a, b) = sum_j (-1)^j/(2i) (a_j conj(b_{n+1-j}) - conj(a_{n+1-j}) b_j)`.
pub fn omega_c(a: &[Complex], b: &[Complex]) -> f64 {
    let n = a.len();
    let inv_2i = Complex::new(0.0, -0.5);
    let mut acc = Complex::ZERO;
    for j in 1..=n {
        let k = n + 1 - j;
        let term = a[j - 1] * b[k - 1].conj() - a[k - 1].conj() * b[j - 1];
        acc += (inv_2i * term).scale(sign(j));
    }
    acc.re
}

/// `dG(v) = 2 Re sum_j v_j dG/dz_j`.
pub fn differential<G: ComplexField + ?Sized>(g: &G, z: &[Complex], v: &[Complex]) -> f64 {
    let dg = wirtinger(g, z);
    2.0 * dg.iter().zip(v).map(|(d, vj)| (d.0 * *vj).re).sum::<f64>()
}

struct FullerSystem {
    gamma: Complex,
    n: usize,
}

impl OdeSystem for FullerSystem {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn eval(&mut self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let f = FullerState::from_reals(y, self.gamma);
        let d = fuller_field(&f)?;
        for (k, c) in d.iter().enumerate() {
            dy[2 * k] = c.re;
            dy[2 * k + 1] = c.im;
        }
        Ok(())
    }
}

/// RK4 samples of the Fuller chain from `t0` to `t1` (either direction).
pub fn integrate_fuller(
    f0: &FullerState,
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<Vec<(f64, FullerState)>> {
    let mut sys = FullerSystem {
        gamma: f0.gamma,
        n: f0.n(),
    };
    let mut y = f0.to_reals();
    let mut out = Vec::new();
    out.push((t0, f0.clone()));
    let gamma = f0.gamma;
    integrate_rk4(&mut sys, t0, t1, &mut y, step, |t, y| {
        out.push((t, FullerState::from_reals(y, gamma)));
        Ok(true)
    })?;
    Ok(out)
}

/// Least-squares fit of `log m = slope log t + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValuationFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn valuation_fit(series: &[(f64, f64)]) -> Result<ValuationFit> {
    if series.len() < 10 {
        return Err(Error::InvalidInput(
            "valuation fit needs at least 10 samples",
        ));
    }
    if series.iter().any(|&(t, m)| !(t > 0.0) || !(m > 0.0)) {
        return Err(Error::InvalidInput(
            "valuation fit needs positive times and magnitudes",
        ));
    }
    let n = series.len() as f64;
    let pts: Vec<(f64, f64)> = series.iter().map(|&(t, m)| (ln(t), ln(m))).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("valuation fit needs distinct times"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - slope * p.0 - intercept;
            e * e
        })
        .sum();
    Ok(ValuationFit {
        slope,
        intercept,
        residual: sqrt(rss / n),
    })
}

/// Outcome of running the full system from a scaled inward spiral.
#[derive(Clone, Debug, PartialEq)]
pub struct NearSingularReport {
    /// Slopes for `|w|`, `|b|`, `|c|` against time to the spiral's arrival.
    pub slopes: [f64; 3],
    pub fits: [ValuationFit; 3],
    /// `(T - t, |w|, |b|, |c|)` samples used in the fit.
    pub samples: Vec<[f64; 4]>,
    pub exit: dynamics::Exit,
    /// Drift of the angular momentum along the run.
    pub angular_momentum_drift: f64,
}

/// Seeds the full closed-loop system on the inward spiral that reaches the
/// singular locus at time `t_arrive`, integrates until `fraction * t_arrive`,
/// and fits growth orders of `|w|, |b|, |c|` against the remaining time.
pub fn near_singular_experiment(
    spec: &ControlSetSpec,
    t_arrive: f64,
    fraction: f64,
    step: f64,
) -> Result<NearSingularReport> {
    if !(t_arrive > 0.0) || !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidInput(
            "need t_arrive > 0 and 0 < fraction < 1",
        ));
    }
    let spiral = log_spiral(0.0, SpiralDirection::Inward, t_arrive)?;
    let z = [spiral.z[0], spiral.z[1], spiral.z[2]];
    let mut h = hyperboloid_from_fuller(&z, spec.beta1());
    // H is affine in sqrt(d); pick d so the seed satisfies H = 0.
    for _ in 0..3 {
        let zs = optimal_zstar(&h, spec)?;
        let (bw, bb) = (bracket(h.w), bracket(h.b));
        let q =
            real_pair(h.w - zs.scale(spec.beta1() * bw), h.c) / (mu(h.w, spec.beta1(), zs) * bw);
        let sd = (3.0 * bw + q) / (2.0 * real_pair(h.w, h.b) + 2.0 * bb * bw);
        if !(sd > 0.0) {
            return Err(Error::Domain("spiral seed has no d > 0 with H = 0"));
        }
        h.d = sd * sd;
    }
    let s0 = from_hyperboloid(&h, GroupMatrix::IDENTITY);
    let cfg = IntegratorConfig {
        step,
        renormalize_every: 100,
        ..IntegratorConfig::default()
    };
    let traj = dynamics::integrate(&s0, &Policy::ClosedLoop(*spec), fraction * t_arrive, &cfg)?;
    let mut samples = Vec::with_capacity(traj.len());
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let rem = t_arrive - t;
        if let Ok(hs) = to_hyperboloid(s) {
            let m = [hs.w.abs(), hs.b.abs(), hs.c.abs()];
            if rem > 0.0 && m.iter().all(|&v| v > 0.0) {
                samples.push([rem, m[0], m[1], m[2]]);
            }
        }
    }
    let fit = |k: usize| valuation_fit(&samples.iter().map(|r| (r[0], r[k])).collect::<Vec<_>>());
    let fits = [fit(1)?, fit(2)?, fit(3)?];
    Ok(NearSingularReport {
        slopes: [fits[0].slope, fits[1].slope, fits[2].slope],
        fits,
        samples,
        exit: traj.exit,
        angular_momentum_drift: traj.drift.angular_momentum,
    })
}

/// The boundary control maximizing the Hamiltonian at a hyperboloid point.
pub fn optimal_zstar(h: &HyperboloidState, spec: &ControlSetSpec) -> Result<Complex> {
    let s = from_hyperboloid(h, GroupMatrix::IDENTITY);
    control::maximize_disk(&s, spec)?
        .angle
        .ok_or(Error::Singular(
            "disk maximization returned no boundary angle",
        ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_locus_coordinates() {
        let h = to_hyperboloid(&ExtendedState::singular_locus()).unwrap();
        assert!(h.w.abs() < 1e-15 && h.b.abs() < 1e-15 && h.c.abs() < 1e-15);
        assert!((h.d - 2.25).abs() < 1e-15);
    }

    #[test]
    fn log_spiral_is_a_solution() {
        for &t in &[0.1, 0.5, 2.0] {
            let f = log_spiral(t, SpiralDirection::Outward, 0.0).unwrap();
            let lhs = log_spiral_derivative(t, SpiralDirection::Outward, 0.0).unwrap();
            let rhs = fuller_field(&f).unwrap();
            for k in 0..3 {
                assert!((lhs[k] - rhs[k]).abs() < 1e-12);
            }
            assert!(hamiltonian_c(&f.z).abs() < 1e-12);
            assert!(angular_momentum_c(&f.z).abs() < 1e-12);
        }
    }
}
