//! Control sets, the control matrix `Z_u`, and Hamiltonian maximization.

use crate::dynamics::ExtendedState;
use crate::math::{abs, sqrt, Complex, SQRT3};
use crate::sl2::{Su11Matrix, TracelessMatrix};
use crate::{Error, Result};

/// Barycentric control `(u0, u1, u2)` with `u0 + u1 + u2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlPoint {
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
}

impl ControlPoint {
    pub fn new(u0: f64, u1: f64, u2: f64) -> Result<Self> {
        if abs(u0 + u1 + u2 - 1.0) > 1e-12 {
            return Err(Error::InvalidInput("controls must sum to one"));
        }
        Ok(ControlPoint { u0, u1, u2 })
    }

    pub fn vertex(j: usize) -> Self {
        match j % 3 {
            0 => ControlPoint {
                u0: 1.0,
                u1: 0.0,
                u2: 0.0,
            },
            1 => ControlPoint {
                u0: 0.0,
                u1: 1.0,
                u2: 0.0,
            },
            _ => ControlPoint {
                u0: 0.0,
                u1: 0.0,
                u2: 1.0,
            },
        }
    }

    pub fn center() -> Self {
        let t = 1.0 / 3.0;
        ControlPoint {
            u0: t,
            u1: t,
            u2: t,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u0, self.u1, self.u2]
    }

    pub fn radius_sqr(&self) -> f64 {
        self.u0 * self.u0 + self.u1 * self.u1 + self.u2 * self.u2
    }

    /// Coordinate in the plane of the simplex, centred at the barycentre:
    /// `(u0 - 1/3) + i (u1 - u2)/sqrt3`.
    pub fn plane_coordinate(&self) -> Complex {
        Complex::new(self.u0 - 1.0 / 3.0, (self.u1 - self.u2) / SQRT3)
    }

    pub fn from_plane_coordinate(xi: Complex) -> Self {
        let u0 = 1.0 / 3.0 + xi.re;
        let s = 2.0 / 3.0 - xi.re;
        let d = SQRT3 * xi.im;
        ControlPoint {
            u0,
            u1: 0.5 * (s + d),
            u2: 0.5 * (s - d),
        }
    }
}

/// `Z_u`, chosen so that `u_j = e*_{2j} ^ Z_u e*_{2j}`.
pub fn control_matrix(u: &ControlPoint) -> TracelessMatrix {
    TracelessMatrix::new(
        (u.u1 - u.u2) / SQRT3,
        (u.u0 - 2.0 * u.u1 - 2.0 * u.u2) / 3.0,
        u.u0,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlSetKind {
    Simplex,
    Disk,
}

/// A control set together with its `su(1,1)` parameters.
///
/// For a disk `U_r = {u : u0^2 + u1^2 + u2^2 <= r2}` in the simplex plane,
/// `alpha = 1/3` and `beta = (2/3) sqrt((3 r2 - 1)/2)`, the Euclidean radius
/// of the disk in the plane coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlSetSpec {
    pub kind: ControlSetKind,
    pub r2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ControlSetSpec {
    pub fn simplex() -> Self {
        ControlSetSpec {
            kind: ControlSetKind::Simplex,
            r2: 1.0,
            alpha: 1.0 / 3.0,
            beta: 2.0 / 3.0,
        }
    }

    pub fn disk(r2: f64) -> Result<Self> {
        if !(r2 >= 1.0 / 3.0 - 1e-15) || !r2.is_finite() {
            return Err(Error::InvalidInput("disk needs r^2 >= 1/3"));
        }
        Ok(ControlSetSpec {
            kind: ControlSetKind::Disk,
            r2,
            alpha: 1.0 / 3.0,
            beta: disk_beta(r2),
        })
    }

    /// Circumscribing disk through the simplex vertices.
    pub fn circumscribed() -> Self {
        ControlSetSpec::disk(1.0).unwrap()
    }

    /// Disk inscribed in the simplex.
    pub fn inscribed() -> Self {
        ControlSetSpec::disk(0.5).unwrap()
    }

    /// The single point `(1/3, 1/3, 1/3)`.
    pub fn center() -> Self {
        ControlSetSpec::disk(1.0 / 3.0).unwrap()
    }

    pub fn beta1(&self) -> f64 {
        self.beta / self.alpha
    }
}

pub fn disk_beta(r2: f64) -> f64 {
    (2.0 / 3.0) * sqrt(((3.0 * r2 - 1.0) / 2.0).max(0.0))
}

/// `[[-i alpha, beta z], [beta conj(z), i alpha]]` for `|z| = 1`.
pub fn control_matrix_su11(spec: &ControlSetSpec, z: Complex) -> Result<Su11Matrix> {
    if abs(z.abs() - 1.0) > 1e-12 {
        return Err(Error::InvalidInput("boundary control needs |z| = 1"));
    }
    Ok(Su11Matrix::new(spec.alpha, z.scale(spec.beta)))
}

/// Real form of the boundary control matrix at angle `z`.
pub fn boundary_control_matrix(spec: &ControlSetSpec, z: Complex) -> TracelessMatrix {
    Su11Matrix::new(spec.alpha, z.scale(spec.beta)).to_traceless()
}

/// Barycentric point on the disk boundary at angle `z`.
pub fn boundary_control_point(spec: &ControlSetSpec, z: Complex) -> ControlPoint {
    ControlPoint::from_plane_coordinate(z.scale(spec.beta))
}

/// `<L1 - (3/2) lambda J, X> - <L_R, Z> / <X, Z>`.
pub fn hamiltonian(s: &ExtendedState, zu: &TracelessMatrix) -> Result<f64> {
    let xz = s.x.trace_form(zu);
    if abs(xz) < 1e-14 {
        return Err(Error::StarViolation { pairing: xz });
    }
    Ok(base_hamiltonian(s) - s.lr.trace_form(zu) / xz)
}

/// The control-independent part `<L1 - (3/2) lambda J, X>`.
pub fn base_hamiltonian(s: &ExtendedState) -> f64 {
    (s.l1 - TracelessMatrix::J.scale(1.5 * s.lambda_cost)).trace_form(&s.x)
}

/// Result of Hamiltonian maximization over a control set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalControl {
    pub point: ControlPoint,
    /// Boundary angle for disk control sets.
    pub angle: Option<Complex>,
    /// Vertex index for the simplex.
    pub vertex: Option<usize>,
    /// Hamiltonian at the optimum.
    pub value: f64,
    /// The maximizer is not unique.
    pub singular: bool,
    /// Residual of the Noether constraint at a disk optimum.
    pub constraint_residual: f64,
}

impl OptimalControl {
    pub fn matrix(&self, spec: &ControlSetSpec) -> TracelessMatrix {
        match self.angle {
            Some(z) if spec.kind == ControlSetKind::Disk => boundary_control_matrix(spec, z),
            _ => control_matrix(&self.point),
        }
    }
}

pub const TIE_TOLERANCE: f64 = 1e-9;

/// Maximizes the Hamiltonian over the simplex; the optimum sits at a vertex.
pub fn maximize_simplex(s: &ExtendedState) -> Result<OptimalControl> {
    let mut h = [0.0; 3];
    for (j, v) in h.iter_mut().enumerate() {
        *v = hamiltonian(s, &control_matrix(&ControlPoint::vertex(j)))?;
    }
    let mut best = 0;
    for j in 1..3 {
        if h[j] > h[best] {
            best = j;
        }
    }
    let mut sorted = h;
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    let scale = abs(sorted[0]).max(abs(sorted[1])).max(1.0);
    let tie = sorted[0] - sorted[1] <= TIE_TOLERANCE * scale;
    let degenerate = s.lr.max_abs() <= 1e-12 * (1.0 + s.l1.max_abs());
    Ok(OptimalControl {
        point: ControlPoint::vertex(best),
        angle: None,
        vertex: Some(best),
        value: h[best],
        singular: tie || degenerate,
        constraint_residual: 0.0,
    })
}

/// `D = beta^2 L11^2 + alpha^2 L21 L12` for `L` in `su(1,1)` form; real-valued.
pub fn augmented_determinant(l: &Su11Matrix, alpha: f64, beta: f64) -> f64 {
    alpha * alpha * l.p.norm_sqr() - beta * beta * l.delta * l.delta
}

/// Roots `(z+, z-)` of `alpha L21 z^2 - 2 i beta L11 z + alpha L12 = 0` with `L = [X, L_R]`.
pub fn quadratic_roots(s: &ExtendedState, spec: &ControlSetSpec) -> Result<(Complex, Complex)> {
    let l = s.x.commutator(&s.lr).to_su11();
    let lead = l.p.conj().scale(spec.alpha);
    if lead.abs() <= 1e-14 * (1.0 + abs(l.delta)) {
        return Err(Error::Singular(
            "leading coefficient of the control quadratic vanishes",
        ));
    }
    let d = augmented_determinant(&l, spec.alpha, spec.beta).max(0.0);
    // i (beta L11 +- sqrt D) with L11 = -i delta
    let num_plus = Complex::new(spec.beta * l.delta, sqrt(d));
    let num_minus = Complex::new(spec.beta * l.delta, -sqrt(d));
    Ok((num_plus.checked_div(lead)?, num_minus.checked_div(lead)?))
}

/// Hamiltonian at the boundary angle `z` of a disk control set.
pub fn disk_hamiltonian(s: &ExtendedState, spec: &ControlSetSpec, z: Complex) -> Result<f64> {
    hamiltonian(s, &boundary_control_matrix(spec, z))
}

/// Residual of `<Z, L> = <Z, Z>/<Z, J> <J, L>` with `L = [X, L_R]`.
pub fn noether_residual(s: &ExtendedState, zu: &TracelessMatrix) -> f64 {
    let l = s.x.commutator(&s.lr);
    let j = TracelessMatrix::J;
    let lhs = zu.trace_form(&l);
    let rhs = zu.trace_form(zu) / zu.trace_form(&j) * j.trace_form(&l);
    abs(lhs - rhs) / (1.0 + l.max_abs())
}

/// Maximizes the Hamiltonian over the boundary of a disk control set through
/// the control quadratic, taking the root with `+sqrt(D)`.
pub fn maximize_disk(s: &ExtendedState, spec: &ControlSetSpec) -> Result<OptimalControl> {
    if spec.kind != ControlSetKind::Disk {
        return Err(Error::InvalidInput(
            "maximize_disk needs a disk control set",
        ));
    }
    if spec.beta <= 1e-15 {
        let zu = control_matrix(&ControlPoint::center());
        return Ok(OptimalControl {
            point: ControlPoint::center(),
            angle: None,
            vertex: None,
            value: hamiltonian(s, &zu)?,
            singular: true,
            constraint_residual: 0.0,
        });
    }
    let l = s.x.commutator(&s.lr);
    let root = if l.max_abs() <= 1e-13 {
        None
    } else {
        match quadratic_roots(s, spec) {
            Ok((zp, _)) => Some(zp.scale(1.0 / zp.abs())),
            Err(Error::Singular(_)) => None,
            Err(e) => return Err(e),
        }
    };
    // Without a usable root the Hamiltonian is flat or the quadratic degenerates; sweep instead.
    let (z, singular) = match root {
        Some(z) => {
            let lsu = l.to_su11();
            let d = augmented_determinant(&lsu, spec.alpha, spec.beta);
            (z, d <= 1e-14 * lsu.p.norm_sqr() * spec.alpha * spec.alpha)
        }
        None => (sweep_argmax(s, spec, 4096)?, true),
    };
    let zu = boundary_control_matrix(spec, z);
    Ok(OptimalControl {
        point: boundary_control_point(spec, z),
        angle: Some(z),
        vertex: None,
        value: hamiltonian(s, &zu)?,
        singular,
        constraint_residual: if root.is_some() {
            noether_residual(s, &zu)
        } else {
            0.0
        },
    })
}

/// Boundary angle maximizing the Hamiltonian over `n` equally spaced samples.
pub fn sweep_argmax(s: &ExtendedState, spec: &ControlSetSpec, n: usize) -> Result<Complex> {
    let mut best = (f64::NEG_INFINITY, Complex::ONE);
    for k in 0..n {
        let z = Complex::cis(2.0 * crate::math::PI * k as f64 / n as f64);
        let h = disk_hamiltonian(s, spec, z)?;
        if h > best.0 {
            best = (h, z);
        }
    }
    Ok(best.1)
}

/// Optimal control for a control set of either kind.
pub fn maximize(s: &ExtendedState, spec: &ControlSetSpec) -> Result<OptimalControl> {
    match spec.kind {
        ControlSetKind::Simplex => maximize_simplex(s),
        ControlSetKind::Disk => maximize_disk(s, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_matrix_examples() {
        let c = control_matrix(&ControlPoint::center());
        let j3 = TracelessMatrix::J.scale(1.0 / 3.0);
        assert!((c - j3).max_abs() < 1e-16);
        let v = control_matrix(&ControlPoint::vertex(0));
        assert_eq!(v, TracelessMatrix::new(0.0, 1.0 / 3.0, 1.0));
        assert!((v.det() + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn table_rows() {
        let c = ControlSetSpec::circumscribed();
        assert!((c.beta - 2.0 / 3.0).abs() < 1e-15);
        let i = ControlSetSpec::inscribed();
        assert!((i.beta - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(ControlSetSpec::center().beta, 0.0);
        // Plane radius of a vertex equals beta of the circumscribed disk.
        let xi = ControlPoint::vertex(1).plane_coordinate();
        assert!((xi.abs() - c.beta).abs() < 1e-15);
        // Inscribed radius: distance from the barycentre to the midpoint of an edge.
        let mid = ControlPoint::new(0.5, 0.5, 0.0).unwrap().plane_coordinate();
        assert!((mid.abs() - i.beta).abs() < 1e-15);
    }

    #[test]
    fn det_of_su11_control() {
        let c = ControlSetSpec::circumscribed();
        let z = control_matrix_su11(&c, Complex::ONE).unwrap();
        assert!((z.det() + 1.0 / 3.0).abs() < 1e-15);
        let i = ControlSetSpec::inscribed();
        let z = control_matrix_su11(&i, Complex::cis(0.3)).unwrap();
        assert!(z.det().abs() < 1e-15);
        assert!(control_matrix_su11(&i, Complex::new(1.1, 0.0)).is_err());
    }
}
