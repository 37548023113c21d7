//! Scalar helpers over `libm` and a small complex number type.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::{Error, Result};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;
pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}
#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}
#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Complex number with total arithmetic; division is checked.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Complex::new(r * cos(theta), r * sin(theta))
    }

    /// `e^{i theta}`.
    pub fn cis(theta: f64) -> Self {
        Complex::from_polar(1.0, theta)
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        hypot(self.re, self.im)
    }

    pub fn arg(self) -> f64 {
        atan2(self.im, self.re)
    }

    pub fn scale(self, s: f64) -> Self {
        Complex::new(self.re * s, self.im * s)
    }

    /// Multiplication by `i`.
    pub fn mul_i(self) -> Self {
        Complex::new(-self.im, self.re)
    }

    pub fn checked_div(self, rhs: Complex) -> Result<Complex> {
        let d = rhs.norm_sqr();
        if d == 0.0 || !d.is_finite() {
            return Err(Error::DivisionByZero);
        }
        Ok(Complex::new(
            (self.re * rhs.re + self.im * rhs.im) / d,
            (self.im * rhs.re - self.re * rhs.im) / d,
        ))
    }

    pub fn recip(self) -> Result<Complex> {
        Complex::ONE.checked_div(self)
    }

    pub fn exp(self) -> Self {
        Complex::from_polar(exp(self.re), self.im)
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        let r = self.abs();
        let re = sqrt(0.5 * (r + self.re));
        let im = sqrt(0.5 * (r - self.re));
        Complex::new(re, if self.im < 0.0 { -im } else { im })
    }

    /// `t^{p + i q}` for real `t > 0`, via `t^p e^{i q ln t}`.
    pub fn real_pow(t: f64, exponent: Complex) -> Result<Complex> {
        if !(t > 0.0) {
            return Err(Error::Domain("real_pow needs t > 0"));
        }
        let l = ln(t);
        Ok(Complex::from_polar(exp(exponent.re * l), exponent.im * l))
    }

    /// `Re(conj(self) * other)`, the real sesquilinear pairing.
    pub fn real_dot(self, other: Complex) -> f64 {
        self.re * other.re + self.im * other.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for Complex {
    type Output = Complex;
    fn mul(self, rhs: f64) -> Complex {
        self.scale(rhs)
    }
}

impl Mul<Complex> for f64 {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        rhs.scale(self)
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> alloc::vec::Vec<(f64, f64)> {
    let mut out = alloc::vec::Vec::with_capacity(n);
    for i in 0..n {
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if abs(dx) < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Integrates `f` over `[a, b]` with `nodes`-point Gauss-Legendre on `panels` panels.
pub fn integrate_gl<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rule: &[(f64, f64)],
    panels: usize,
) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        for &(x, w) in rule {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// Brent's method on a bracketing interval `[a, b]`.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 || !(fa.is_finite() && fb.is_finite()) {
        return Err(crate::Error::InvalidInput("root is not bracketed"));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if abs(fc) < abs(fb) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * abs(b) + 0.5 * tol;
        let m = 0.5 * (c - b);
        if abs(m) <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if abs(e) >= tol1 && abs(fa) > abs(fb) {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - abs(tol1 * q)).min(abs(e * q)) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if abs(d) > tol1 {
            d
        } else if m > 0.0 {
            tol1
        } else {
            -tol1
        };
        fb = f(b);
    }
    Err(crate::Error::NonConvergence {
        iterations: 200,
        residual: abs(fb),
    })
}
