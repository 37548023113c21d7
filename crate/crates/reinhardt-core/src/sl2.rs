//! Closed-form linear algebra on `sl2(R)`, `SL2(R)` and `su(1,1)`.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::math::{abs, cos, cosh, sin, sinh, sqrt, Complex, PI};

/// `[[a, b], [c, -a]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TracelessMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TracelessMatrix {
    pub const ZERO: TracelessMatrix = TracelessMatrix::new(0.0, 0.0, 0.0);
    /// Infinitesimal rotation `[[0, -1], [1, 0]]`.
    pub const J: TracelessMatrix = TracelessMatrix::new(0.0, -1.0, 1.0);
    /// `diag(1, -1)`.
    pub const H: TracelessMatrix = TracelessMatrix::new(1.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        TracelessMatrix { a, b, c }
    }

    pub fn det(&self) -> f64 {
        -self.a * self.a - self.b * self.c
    }

    /// `tr(AB)`.
    pub fn trace_form(&self, o: &TracelessMatrix) -> f64 {
        2.0 * self.a * o.a + self.b * o.c + self.c * o.b
    }

    /// `AB - BA`.
    pub fn commutator(&self, o: &TracelessMatrix) -> TracelessMatrix {
        TracelessMatrix::new(
            self.b * o.c - self.c * o.b,
            2.0 * (self.a * o.b - self.b * o.a),
            2.0 * (self.c * o.a - self.a * o.c),
        )
    }

    /// Plain matrix product, which is not traceless in general.
    pub fn mul_matrix(&self, o: &TracelessMatrix) -> [[f64; 2]; 2] {
        mat_mul(&self.to_array(), &o.to_array())
    }

    pub fn to_array(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, -self.a]]
    }

    /// Traceless part of an arbitrary 2x2 matrix.
    pub fn from_array(m: &[[f64; 2]; 2]) -> Self {
        TracelessMatrix::new(0.5 * (m[0][0] - m[1][1]), m[0][1], m[1][0])
    }

    pub fn scale(&self, s: f64) -> Self {
        TracelessMatrix::new(self.a * s, self.b * s, self.c * s)
    }

    /// Euclidean norm of the entries.
    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        2.0 * self.a * self.a + self.b * self.b + self.c * self.c
    }

    pub fn max_abs(&self) -> f64 {
        abs(self.a).max(abs(self.b)).max(abs(self.c))
    }

    pub fn to_vec3(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_vec3(v: [f64; 3]) -> Self {
        TracelessMatrix::new(v[0], v[1], v[2])
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    /// Gradient with respect to the trace form of a function with coordinate
    /// partials `(d/da, d/db, d/dc)`.
    pub fn from_coordinate_gradient(da: f64, db: f64, dc: f64) -> Self {
        TracelessMatrix::new(0.5 * da, dc, db)
    }

    /// Image in `so(2,1)` under the exceptional isomorphism.
    pub fn so21(&self) -> [[f64; 3]; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        [
            [0.0, b - c, b + c],
            [c - b, 0.0, -2.0 * a],
            [b + c, -2.0 * a, 0.0],
        ]
    }

    pub fn to_su11(&self) -> Su11Matrix {
        Su11Matrix::from_traceless(self)
    }
}

impl Add for TracelessMatrix {
    type Output = TracelessMatrix;
    fn add(self, o: TracelessMatrix) -> TracelessMatrix {
        TracelessMatrix::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl AddAssign for TracelessMatrix {
    fn add_assign(&mut self, o: TracelessMatrix) {
        *self = *self + o;
    }
}

impl Sub for TracelessMatrix {
    type Output = TracelessMatrix;
    fn sub(self, o: TracelessMatrix) -> TracelessMatrix {
        TracelessMatrix::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl Neg for TracelessMatrix {
    type Output = TracelessMatrix;
    fn neg(self) -> TracelessMatrix {
        self.scale(-1.0)
    }
}

impl Mul<f64> for TracelessMatrix {
    type Output = TracelessMatrix;
    fn mul(self, s: f64) -> TracelessMatrix {
        self.scale(s)
    }
}

impl Mul<TracelessMatrix> for f64 {
    type Output = TracelessMatrix;
    fn mul(self, m: TracelessMatrix) -> TracelessMatrix {
        m.scale(self)
    }
}

pub fn trace_form(a: &TracelessMatrix, b: &TracelessMatrix) -> f64 {
    a.trace_form(b)
}

pub fn commutator(a: &TracelessMatrix, b: &TracelessMatrix) -> TracelessMatrix {
    a.commutator(b)
}

pub fn mat_mul(p: &[[f64; 2]; 2], q: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            p[0][0] * q[0][0] + p[0][1] * q[1][0],
            p[0][0] * q[0][1] + p[0][1] * q[1][1],
        ],
        [
            p[1][0] * q[0][0] + p[1][1] * q[1][0],
            p[1][0] * q[0][1] + p[1][1] * q[1][1],
        ],
    ]
}

/// A 2x2 real matrix used for elements of `SL2(R)`.
///
/// Arithmetic helpers that leave the group (such as `gX` for the tangent
/// vector `g'`) reuse this record; `renormalize` pushes drifted values back.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Default for GroupMatrix {
    fn default() -> Self {
        GroupMatrix::IDENTITY
    }
}

impl GroupMatrix {
    pub const IDENTITY: GroupMatrix = GroupMatrix::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: GroupMatrix = GroupMatrix::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        GroupMatrix { m11, m12, m21, m22 }
    }

    /// Rotation by angle `theta`, i.e. `exp(J theta)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (sin(theta), cos(theta));
        GroupMatrix::new(c, -s, s, c)
    }

    /// `R = exp(J pi/3)`.
    pub fn r() -> Self {
        GroupMatrix::new(
            0.5,
            -0.5 * crate::math::SQRT3,
            0.5 * crate::math::SQRT3,
            0.5,
        )
    }

    pub fn from_array(m: [[f64; 2]; 2]) -> Self {
        GroupMatrix::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn to_array(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn mul(&self, o: &GroupMatrix) -> GroupMatrix {
        GroupMatrix::from_array(mat_mul(&self.to_array(), &o.to_array()))
    }

    /// `gX`.
    pub fn mul_algebra(&self, x: &TracelessMatrix) -> GroupMatrix {
        GroupMatrix::from_array(mat_mul(&self.to_array(), &x.to_array()))
    }

    /// Inverse assuming unit determinant (adjugate).
    pub fn inverse(&self) -> GroupMatrix {
        GroupMatrix::new(self.m22, -self.m12, -self.m21, self.m11)
    }

    /// `g X g^-1`.
    pub fn adjoint(&self, x: &TracelessMatrix) -> TracelessMatrix {
        let gx = mat_mul(&self.to_array(), &x.to_array());
        TracelessMatrix::from_array(&mat_mul(&gx, &self.inverse().to_array()))
    }

    /// `g^-1 X g`.
    pub fn adjoint_inv(&self, x: &TracelessMatrix) -> TracelessMatrix {
        self.inverse().adjoint(x)
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    /// Mobius action on the upper half-plane.
    pub fn mobius(&self, z: Complex) -> crate::Result<Complex> {
        (Complex::new(self.m11, 0.0) * z + Complex::new(self.m12, 0.0))
            .checked_div(Complex::new(self.m21, 0.0) * z + Complex::new(self.m22, 0.0))
    }

    pub fn scale(&self, s: f64) -> GroupMatrix {
        GroupMatrix::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    pub fn add(&self, o: &GroupMatrix) -> GroupMatrix {
        GroupMatrix::new(
            self.m11 + o.m11,
            self.m12 + o.m12,
            self.m21 + o.m21,
            self.m22 + o.m22,
        )
    }

    pub fn sub(&self, o: &GroupMatrix) -> GroupMatrix {
        self.add(&o.scale(-1.0))
    }

    /// Rescales to unit determinant; a no-op for non-positive determinants.
    pub fn renormalize(&self) -> GroupMatrix {
        let d = self.det();
        if d > 0.0 {
            self.scale(1.0 / sqrt(d))
        } else {
            *self
        }
    }

    pub fn max_abs(&self) -> f64 {
        abs(self.m11)
            .max(abs(self.m12))
            .max(abs(self.m21))
            .max(abs(self.m22))
    }

    pub fn to_vec4(&self) -> [f64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn from_vec4(v: [f64; 4]) -> Self {
        GroupMatrix::new(v[0], v[1], v[2], v[3])
    }
}

/// Coefficients `(C, S)` with `exp(tX) = C I + S X`.
fn exp_coefficients(x: &TracelessMatrix, t: f64) -> (f64, f64) {
    let r = x.det();
    let n2 = x.norm_sqr();
    if n2 == 0.0 || abs(r) < 1e-12 * n2 {
        // Series in q = -r t^2, summed until the terms are negligible.
        let q = -r * t * t;
        let (mut c, mut s) = (1.0, 1.0);
        let (mut tc, mut ts) = (1.0, 1.0);
        for k in 1..40 {
            let kf = k as f64;
            tc *= q / ((2.0 * kf - 1.0) * (2.0 * kf));
            ts *= q / ((2.0 * kf) * (2.0 * kf + 1.0));
            c += tc;
            s += ts;
            if abs(tc) < 1e-18 && abs(ts) < 1e-18 {
                break;
            }
        }
        (c, s * t)
    } else if r < 0.0 {
        let w = sqrt(-r);
        (cosh(t * w), sinh(t * w) / w)
    } else {
        let w = sqrt(r);
        (cos(t * w), sin(t * w) / w)
    }
}

/// `exp(tX)` in closed form.
pub fn exp_traceless(x: &TracelessMatrix, t: f64) -> GroupMatrix {
    let (c, s) = exp_coefficients(x, t);
    GroupMatrix::new(c + s * x.a, s * x.b, s * x.c, c - s * x.a)
}

/// Element of `su(1,1)`: `[[-i delta, p], [conj(p), i delta]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Su11Matrix {
    pub delta: f64,
    pub p: Complex,
}

impl Su11Matrix {
    pub const fn new(delta: f64, p: Complex) -> Self {
        Su11Matrix { delta, p }
    }

    /// `C^-1 A C` with `C = (1/sqrt 2) [[1, i], [i, 1]]`.
    pub fn from_traceless(m: &TracelessMatrix) -> Self {
        Su11Matrix::new(0.5 * (m.c - m.b), Complex::new(0.5 * (m.b + m.c), m.a))
    }

    pub fn to_traceless(&self) -> TracelessMatrix {
        TracelessMatrix::new(self.p.im, self.p.re - self.delta, self.p.re + self.delta)
    }

    pub fn det(&self) -> f64 {
        self.delta * self.delta - self.p.norm_sqr()
    }

    pub fn trace_form(&self, o: &Su11Matrix) -> f64 {
        -2.0 * self.delta * o.delta + 2.0 * self.p.real_dot(o.p)
    }

    pub fn commutator(&self, o: &Su11Matrix) -> Su11Matrix {
        let delta = -2.0 * (self.p * o.p.conj()).im;
        let p = (self.p.scale(o.delta) - o.p.scale(self.delta))
            .mul_i()
            .scale(2.0);
        Su11Matrix::new(delta, p)
    }

    /// Entries `[[m11, m12], [m21, m22]]` as complex numbers.
    pub fn entries(&self) -> [[Complex; 2]; 2] {
        [
            [Complex::new(0.0, -self.delta), self.p],
            [self.p.conj(), Complex::new(0.0, self.delta)],
        ]
    }

    pub fn scale(&self, s: f64) -> Self {
        Su11Matrix::new(self.delta * s, self.p.scale(s))
    }
}

/// The Cayley conjugation `A -> C^-1 A C`.
pub fn cayley_conjugate(a: &TracelessMatrix) -> Su11Matrix {
    Su11Matrix::from_traceless(a)
}

/// Inverse of [`cayley_conjugate`].
pub fn cayley_inverse(s: &Su11Matrix) -> TracelessMatrix {
    s.to_traceless()
}

/// Angle of the rotation `R`.
pub const R_ANGLE: f64 = PI / 3.0;
