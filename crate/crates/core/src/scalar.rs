//! Floating-point scalar abstraction for the numeric side of the crate.
//!
//! Everything exact (group tables, cyclotomic integers, character tables)
//! works over plain integers; the numeric machinery (Jacobi eigensolver,
//! transition matrices, shape checks) is generic over [`Real`] so it can be
//! instantiated at `f32` or `f64`. The crate root exposes `f64` aliases,
//! which is what the CLI and the reports use.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for constants and tolerances.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    fn pi() -> Self {
        Self::from_f64_lossy(std::f64::consts::PI)
    }

    fn two_pi() -> Self {
        Self::from_f64_lossy(std::f64::consts::TAU)
    }
}

impl Real for f32 {}
impl Real for f64 {}
