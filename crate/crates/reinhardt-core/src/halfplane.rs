//! The upper half-plane model of the adjoint orbit of `J`.

use crate::control::{control_matrix, ControlPoint};
use crate::math::{abs, hypot, sqrt, Complex, SQRT3};
use crate::sl2::TracelessMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain("half-plane point needs y > 0"));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn from_complex(z: Complex) -> Result<Self> {
        HalfPlanePoint::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex {
        Complex::new(self.x, self.y)
    }
}

/// `nu1 dx + nu2 dy`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Covector {
    pub nu1: f64,
    pub nu2: f64,
}

impl Covector {
    pub fn pair(&self, v: (f64, f64)) -> f64 {
        self.nu1 * v.0 + self.nu2 * v.1
    }
}

/// `X_z = [[x/y, -(x^2+y^2)/y], [1/y, -x/y]]`.
pub fn phi(z: HalfPlanePoint) -> TracelessMatrix {
    let (x, y) = (z.x, z.y);
    TracelessMatrix::new(x / y, -(x * x + y * y) / y, 1.0 / y)
}

/// Inverse of [`phi`]. Matrices with positive determinant are first scaled to
/// determinant one.
pub fn phi_inv(m: &TracelessMatrix) -> Result<HalfPlanePoint> {
    let d = m.det();
    if !(d > 0.0) {
        return Err(Error::Domain("phi_inv needs det > 0"));
    }
    let s = sqrt(d);
    let (a, c) = (m.a / s, m.c / s);
    if !(c > 0.0) {
        return Err(Error::Domain("phi_inv needs a positive lower-left entry"));
    }
    HalfPlanePoint::new(a / c, 1.0 / c)
}

/// Coset representative `W` with `[W, X_z] = dPhi(v)`.
pub fn tangent_push(z: HalfPlanePoint, v: (f64, f64)) -> TracelessMatrix {
    let (x, y) = (z.x, z.y);
    let (k1, k2) = v;
    TracelessMatrix::new(k2 / (2.0 * y), (y * k1 - k2 * x) / y, 0.0)
}

/// Tangent vector represented by the coset `[W]`; multiples of `X_z` map to zero.
pub fn tangent_pull(z: HalfPlanePoint, w: &TracelessMatrix) -> (f64, f64) {
    let (x, y) = (z.x, z.y);
    let (a, b, c) = (w.a, w.b, w.c);
    (
        b + 2.0 * a * x - c * x * x + c * y * y,
        2.0 * y * (a - c * x),
    )
}

/// Differential of `phi`: `dPhi_z(v) = [push(z, v), X_z]`.
pub fn tangent_map(z: HalfPlanePoint, v: (f64, f64)) -> TracelessMatrix {
    tangent_push(z, v).commutator(&phi(z))
}

/// `nu = T*Phi(-L)` for a costate `L` in `X`-perp, paired with tangent cosets:
/// `nu(v) = <-L, push(z, v)>`. For `L = [W, X]` this is `<W, dX(v)>`.
pub fn cotangent_pull(z: HalfPlanePoint, l: &TracelessMatrix) -> Covector {
    let m = -*l;
    Covector {
        nu1: m.trace_form(&tangent_push(z, (1.0, 0.0))),
        nu2: m.trace_form(&tangent_push(z, (0.0, 1.0))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarMembership {
    pub inside: bool,
    /// `x + 1/sqrt3`, `1/sqrt3 - x`, `x^2 + y^2 - 1/3`; all positive inside.
    pub margins: [f64; 3],
}

pub fn star_membership(z: HalfPlanePoint) -> StarMembership {
    let s = 1.0 / SQRT3;
    let margins = [z.x + s, s - z.x, z.x * z.x + z.y * z.y - 1.0 / 3.0];
    StarMembership {
        inside: margins.iter().all(|&m| m > 0.0),
        margins,
    }
}

/// Star conditions on a matrix: `sqrt3 |a| < c` and `3b + c < 0`.
pub fn satisfies_star_conditions(x: &TracelessMatrix) -> bool {
    SQRT3 * abs(x.a) < x.c && 3.0 * x.b + x.c < 0.0
}

/// `<Z(e_j), X>` for the three simplex vertices.
pub fn vertex_pairings(x: &TracelessMatrix) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        *o = control_matrix(&ControlPoint::vertex(j)).trace_form(x);
    }
    out
}

/// `e*_j = (cos(j pi/3), sin(j pi/3))`.
pub fn hexagon_point(j: usize) -> [f64; 2] {
    const H: f64 = 0.866_025_403_784_438_6;
    match j % 6 {
        0 => [1.0, 0.0],
        1 => [0.5, H],
        2 => [-0.5, H],
        3 => [-1.0, 0.0],
        4 => [-0.5, -H],
        _ => [0.5, -H],
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexagonFrame {
    /// `P0, P1, P2`; the other three vertices are their negatives.
    pub p: [[f64; 2]; 3],
    /// `Q0, Q1, Q2`.
    pub q: [[f64; 2]; 3],
    /// Closed-form areas `T0, T1, T2`.
    pub t: [f64; 3],
    /// Closed-form areas `A0, A1, A2`.
    pub a: [f64; 3],
    /// Shoelace areas of the same triangles from the line intersections.
    pub t_geometric: [f64; 3],
    pub a_geometric: [f64; 3],
}

impl HexagonFrame {
    pub fn vertices(&self) -> [[f64; 2]; 6] {
        let p = self.p;
        [
            p[0],
            p[1],
            p[2],
            [-p[0][0], -p[0][1]],
            [-p[1][0], -p[1][1]],
            [-p[2][0], -p[2][1]],
        ]
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices())
    }

    /// Largest disagreement between closed-form and geometric areas.
    pub fn cross_check(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            m = m.max(abs(self.t[i] - self.t_geometric[i]));
            m = m.max(abs(self.a[i] - self.a_geometric[i]));
        }
        m
    }
}

/// `(alpha, beta, gamma)` of the triangle-area formulas.
pub fn area_parameters(z: HalfPlanePoint) -> (f64, f64, f64) {
    let (x, y) = (z.x, z.y);
    (
        (1.0 + SQRT3 * x) / y,
        (1.0 - SQRT3 * x) / y,
        (3.0 * x * x + 3.0 * y * y - 1.0) / (2.0 * y),
    )
}

pub fn triangle_areas(z: HalfPlanePoint) -> ([f64; 3], [f64; 3]) {
    let (al, be, ga) = area_parameters(z);
    let k = 4.0 * SQRT3;
    (
        [al * ga / k, al * be / k, be * ga / k],
        [al * al / SQRT3, be * be / SQRT3, ga * ga / SQRT3],
    )
}

fn line_intersection(p: [f64; 2], d: [f64; 2], q: [f64; 2], e: [f64; 2]) -> Result<[f64; 2]> {
    // p + s d = q + u e
    let det = -d[0] * e[1] + d[1] * e[0];
    if abs(det) < 1e-10 * hypot(d[0], d[1]) * hypot(e[0], e[1]) {
        return Err(Error::Singular("parallel tangent lines"));
    }
    let r = [q[0] - p[0], q[1] - p[1]];
    let s = (-r[0] * e[1] + r[1] * e[0]) / det;
    Ok([p[0] + s * d[0], p[1] + s * d[1]])
}

pub fn triangle_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

/// Signed shoelace area of a closed polygon.
pub fn polygon_area(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        s += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * s
}

/// Critical hexagon built from the six tangent lines `e*_j + s X e*_j`.
pub fn hexagon_from_point(z: HalfPlanePoint) -> Result<HexagonFrame> {
    if !star_membership(z).inside {
        return Err(Error::Domain("hexagon needs a point of the star domain"));
    }
    let x = phi(z);
    let g = crate::sl2::GroupMatrix::from_array(x.to_array());
    let lines: [([f64; 2], [f64; 2]); 6] = core::array::from_fn(|k| {
        let e = hexagon_point(k);
        (e, g.apply(e))
    });
    let meet = |i: usize, j: usize| {
        let (p, d) = lines[i % 6];
        let (q, e) = lines[j % 6];
        line_intersection(p, d, q, e)
    };
    let p = [meet(0, 1)?, meet(1, 2)?, meet(2, 3)?];
    let q = [meet(0, 2)?, meet(1, 3)?, meet(2, 4)?];
    let e = |j| hexagon_point(j);
    let p3 = [-p[0][0], -p[0][1]];
    let t_geometric = [
        triangle_area(e(0), p[0], e(1)),
        triangle_area(e(1), p[1], e(2)),
        triangle_area(e(2), p[2], e(3)),
    ];
    let a_geometric = [
        triangle_area(p[0], q[0], p[1]),
        triangle_area(p[1], q[1], p[2]),
        triangle_area(p[2], q[2], p3),
    ];
    let (t, a) = triangle_areas(z);
    Ok(HexagonFrame {
        p,
        q,
        t,
        a,
        t_geometric,
        a_geometric,
    })
}

/// The three region polynomials `h0, h1, h2`.
pub fn region_polynomials(z: HalfPlanePoint) -> [f64; 3] {
    let (x, y) = (z.x, z.y);
    let (x2, y2) = (x * x, y * y);
    [
        3.0 * x2 * x + 3.0 * x * y2 - 7.0 * SQRT3 * x2 + SQRT3 * y2 + 15.0 * x - 3.0 * SQRT3,
        -3.0 * x2 * x2 - 3.0 * y2 * y2 - 6.0 * x2 * y2 + x2 + 2.0 * y2,
        -3.0 * x2 * x - 3.0 * x * y2 - 7.0 * SQRT3 * x2 + SQRT3 * y2 - 15.0 * x - 3.0 * SQRT3,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExclusionBound {
    pub value: f64,
    /// Membership in `h0, h1, h2`.
    pub regions: [bool; 3],
    /// `area_i` before the indicator is applied.
    pub areas: [f64; 3],
}

/// Packing-density lower bound `3/4 + sum_{z in h_i} area_i / sqrt3`, with
/// `area_i = T_i - sqrt(A_{i+1} T_i)`.
pub fn exclusion_bound(z: HalfPlanePoint) -> Result<ExclusionBound> {
    if !star_membership(z).inside {
        return Err(Error::Domain(
            "exclusion bound needs a point of the star domain",
        ));
    }
    let (t, a) = triangle_areas(z);
    let h = region_polynomials(z);
    let regions = [h[0] >= 0.0, h[1] >= 0.0, h[2] >= 0.0];
    let areas: [f64; 3] = core::array::from_fn(|i| t[i] - sqrt(a[(i + 1) % 3] * t[i]));
    let mut value = 0.75;
    for i in 0..3 {
        if regions[i] {
            value += areas[i] / SQRT3;
        }
    }
    Ok(ExclusionBound {
        value: value.clamp(0.0, 1.0),
        regions,
        areas,
    })
}

/// Region membership from the area inequality `T_i >= A_{i+1}`.
pub fn region_by_areas(z: HalfPlanePoint) -> [bool; 3] {
    let (t, a) = triangle_areas(z);
    core::array::from_fn(|i| t[i] >= a[(i + 1) % 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        let j = phi(HalfPlanePoint::new(0.0, 1.0).unwrap());
        assert_eq!(j, TracelessMatrix::J);
        let m = phi(HalfPlanePoint::new(1.0, 2.0).unwrap());
        assert_eq!(m, TracelessMatrix::new(0.5, -2.5, 0.5));
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn pull_of_j_at_i_is_zero() {
        // b + 2ax - cx^2 + cy^2 = -1 + 0 - 0 + 1 and 2y(a - cx) = 0 at a=0, b=-1, c=1, z=i.
        let z = HalfPlanePoint::new(0.0, 1.0).unwrap();
        assert_eq!(tangent_pull(z, &TracelessMatrix::J), (0.0, 0.0));
    }

    #[test]
    fn star_examples() {
        let p = |x, y| star_membership(HalfPlanePoint::new(x, y).unwrap()).inside;
        assert!(p(0.0, 1.0));
        assert!(!p(0.6, 0.1));
        assert!(!p(0.0, 0.5));
    }

    #[test]
    fn hexagon_at_i() {
        let h = hexagon_from_point(HalfPlanePoint::new(0.0, 1.0).unwrap()).unwrap();
        for i in 0..3 {
            assert!((h.t[i] - 1.0 / (4.0 * SQRT3)).abs() < 1e-15);
            assert!((h.a[i] - 1.0 / SQRT3).abs() < 1e-15);
        }
        assert!(h.cross_check() < 1e-14);
        assert!((h.area() - 12f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn exclusion_at_i() {
        let z = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let h = region_polynomials(z);
        assert!(h.iter().all(|&v| v < 0.0));
        let e = exclusion_bound(z).unwrap();
        assert_eq!(e.regions, [false; 3]);
        assert_eq!(e.value, 0.75);
    }
}
