//! Numerical kernel for the Reinhardt optimal control problem.
//!
//! The state of a centrally symmetric convex disc is carried by a curve
//! `g(t)` in `SL2(R)` with `g' = gX`, where `X` lives on the adjoint orbit of
//! `J` (identified with the upper half-plane). The cost is the area of the disc.
//! This crate provides the Lie algebra kernel, the half-plane picture, control
//! sets and Hamiltonian maximization, the lifted state/costate flow, extremal
//! construction, and the near-singular Fuller system.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod control;
pub mod dynamics;
pub mod extremals;
pub mod fuller;
pub mod halfplane;
pub mod math;
pub mod ode;
pub mod sl2;

pub use math::Complex;
pub use sl2::{GroupMatrix, Su11Matrix, TracelessMatrix};

use core::fmt;

/// Errors reported by the kernel.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// `<X, Z_u>` is not negative, so the field denominator degenerates.
    StarViolation { pairing: f64 },
    /// Complex division by a zero modulus.
    DivisionByZero,
    /// The operation is undefined at (or too close to) a singular point.
    Singular(&'static str),
    /// A branch the kernel deliberately does not handle.
    UnsupportedBranch(&'static str),
    /// A trajectory left the star domain at time `t`.
    StarExit { t: f64 },
    /// An iterative solver gave up.
    NonConvergence { iterations: usize, residual: f64 },
    /// The adaptive integrator could not meet its tolerance.
    StepUnderflow { t: f64 },
    /// Malformed input data.
    InvalidInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::StarViolation { pairing } => {
                write!(f, "star condition violated: <X, Z_u> = {pairing:e}")
            }
            Error::DivisionByZero => write!(f, "division by zero modulus"),
            Error::Singular(m) => write!(f, "singular: {m}"),
            Error::UnsupportedBranch(m) => write!(f, "unsupported branch: {m}"),
            Error::StarExit { t } => write!(f, "left the star domain at t = {t}"),
            Error::NonConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual:e})"
            ),
            Error::StepUnderflow { t } => write!(f, "step size underflow at t = {t}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
