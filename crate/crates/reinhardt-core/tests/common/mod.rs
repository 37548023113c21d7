#![allow(dead_code)]

use rand::Rng;
use reinhardt_core::control::{ControlPoint, ControlSetSpec};
use reinhardt_core::dynamics::disk_star_margin;
use reinhardt_core::dynamics::ExtendedState;
use reinhardt_core::halfplane::{phi, star_membership, HalfPlanePoint};
use reinhardt_core::sl2::TracelessMatrix;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Point of the star domain kept away from the boundary by `margin`.
pub fn star_point<R: Rng>(rng: &mut R, margin: f64) -> HalfPlanePoint {
    loop {
        let x = rng.gen_range(-1.0 / SQRT3..1.0 / SQRT3);
        let y = rng.gen_range(0.3..2.5);
        let z = HalfPlanePoint::new(x, y).unwrap();
        if star_membership(z).margins.iter().all(|&m| m > margin) {
            return z;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, scale: f64) -> TracelessMatrix {
    TracelessMatrix::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

/// `L_R` with its `X` component removed.
pub fn perp(x: &TracelessMatrix, l: TracelessMatrix) -> TracelessMatrix {
    l - x.scale(l.trace_form(x) / x.trace_form(x))
}

/// Admissible state: `X = phi(z)` in the star domain, `L_R` orthogonal to `X`, `lambda = -1`.
pub fn random_state<R: Rng>(rng: &mut R) -> ExtendedState {
    let x = phi(star_point(rng, 0.05));
    let l1 = random_matrix(rng, 2.0);
    let lr = perp(&x, random_matrix(rng, 1.0));
    ExtendedState::from_costates(x, l1, lr)
}

pub fn random_control<R: Rng>(rng: &mut R) -> ControlPoint {
    let w: [f64; 3] = [
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..1.0),
    ];
    let s = w[0] + w[1] + w[2];
    ControlPoint::new(w[0] / s, w[1] / s, 1.0 - w[0] / s - w[1] / s).unwrap()
}

/// Admissible state whose `X` also satisfies the star condition of a disk control set.
pub fn random_disk_state<R: Rng>(rng: &mut R, spec: &ControlSetSpec) -> ExtendedState {
    loop {
        let s = random_state(rng);
        if disk_star_margin(&s.x, spec) > 0.05 {
            return s;
        }
    }
}
