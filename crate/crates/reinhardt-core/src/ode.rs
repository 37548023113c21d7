//! Explicit Runge-Kutta steppers over flat state vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, pow, sqrt};
use crate::{Error, Result};

/// Right-hand side `dy = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn eval(&mut self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()>;
}

impl<F> OdeSystem for (usize, F)
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&mut self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        (self.1)(t, y, dy)
    }
}

/// Scratch space for the classical fourth-order method.
pub struct Rk4 {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(n: usize) -> Self {
        Rk4 {
            k: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            tmp: vec![0.0; n],
        }
    }

    /// Advances `y` from `t` to `t + h` in place.
    pub fn step<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &mut S,
        t: f64,
        y: &mut [f64],
        h: f64,
    ) -> Result<()> {
        let n = y.len();
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        sys.eval(t, y, k1)?;
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        sys.eval(t + 0.5 * h, tmp, k2)?;
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        sys.eval(t + 0.5 * h, tmp, k3)?;
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        sys.eval(t + h, tmp, k4)?;
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(())
    }
}

const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dormand-Prince 5(4) with a standard step-size controller.
pub struct Dopri5 {
    k: Vec<Vec<f64>>,
    tmp: Vec<f64>,
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
}

impl Dopri5 {
    pub fn new(n: usize, tol: f64) -> Self {
        Dopri5 {
            k: (0..7).map(|_| vec![0.0; n]).collect(),
            tmp: vec![0.0; n],
            rtol: tol,
            atol: tol,
            h_min: 1e-14,
        }
    }

    /// Attempts one step of size `h`; returns `(accepted, suggested_h)`.
    pub fn try_step<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &mut S,
        t: f64,
        y: &mut [f64],
        h: f64,
    ) -> Result<(bool, f64)> {
        let n = y.len();
        sys.eval(t, y, &mut self.k[0])?;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for j in 0..s {
                    acc += h * DP_A[s][j] * self.k[j][i];
                }
                self.tmp[i] = acc;
            }
            sys.eval(t + DP_C[s] * h, &self.tmp, &mut self.k[s])?;
        }
        let mut err = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for s in 0..7 {
                e += DP_E[s] * self.k[s][i];
            }
            let sc = self.atol + self.rtol * abs(y[i]).max(abs(self.tmp[i]));
            let r = h * e / sc;
            err += r * r;
        }
        let err = sqrt(err / n as f64);
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * pow(err, -0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            // Stage 7 is evaluated at the fifth-order solution (FSAL).
            y.copy_from_slice(&self.tmp);
            Ok((true, h * factor))
        } else {
            if abs(h) * factor.min(0.9) < self.h_min {
                return Err(Error::StepUnderflow { t });
            }
            Ok((false, h * factor.min(0.9)))
        }
    }
}

/// Integrates with fixed RK4 steps from `t0` to `t1`, calling `observe` after each step.
pub fn integrate_rk4<S, O>(
    sys: &mut S,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    h: f64,
    mut observe: O,
) -> Result<()>
where
    S: OdeSystem + ?Sized,
    O: FnMut(f64, &mut [f64]) -> Result<bool>,
{
    let n_steps = crate::math::ceil(abs(t1 - t0) / h - 1e-9).max(1.0) as usize;
    let h = (t1 - t0) / n_steps as f64;
    let mut rk = Rk4::new(y.len());
    for k in 0..n_steps {
        let t = t0 + h * k as f64;
        rk.step(sys, t, y, h)?;
        if !observe(t0 + h * (k + 1) as f64, y)? {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk4_harmonic_oscillator() {
        let mut sys = (2usize, |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        });
        let mut y = [1.0, 0.0];
        integrate_rk4(&mut sys, 0.0, 1.0, &mut y, 1e-3, |_, _| Ok(true)).unwrap();
        assert!((y[0] - 1f64.cos()).abs() < 1e-12);
        assert!((y[1] + 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn dopri_exponential() {
        let mut sys = (1usize, |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[0];
            Ok(())
        });
        let mut dp = Dopri5::new(1, 1e-12);
        let (mut t, mut h) = (0.0f64, 0.1f64);
        let mut y = [1.0];
        while t < 1.0 {
            let step = h.min(1.0 - t);
            let mut trial = y;
            let (ok, hn) = dp.try_step(&mut sys, t, &mut trial, step).unwrap();
            if ok {
                y = trial;
                t += step;
            }
            h = hn;
        }
        assert!((y[0] - 1f64.exp()).abs() < 1e-10);
    }
}
