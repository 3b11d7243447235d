//! Scalar abstraction shared by the channel algebra, the information measures
//! and the feasibility solver.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the finite-alphabet algebra is generic over.
///
/// The tolerances are per-type: a row of `f32` entries cannot be expected to
/// sum to one within `1e-9`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Row-sum / total-mass tolerance accepted at construction.
    fn stochastic_tol() -> Self;

    /// Default feasibility tolerance for the structure tests.
    fn feasibility_tol() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f64 {
    fn stochastic_tol() -> Self {
        1e-9
    }
    fn feasibility_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn stochastic_tol() -> Self {
        1e-5
    }
    fn feasibility_tol() -> Self {
        1e-4
    }
}
