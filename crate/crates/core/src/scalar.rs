//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point type the simulator can run on.
///
/// Each implementation carries its own tolerance table. The `f64` values are
/// the reference thresholds; the `f32` table is scaled to single precision so
/// the same code paths stay meaningful there.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Relative singular-value threshold for numerical rank.
    const RANK_TOL: Self;
    /// Looser rank threshold used when sweeping phase grids.
    const SCAN_RANK_TOL: Self;
    /// Norms at or below this are treated as a vanishing vector.
    const NULL_NORM: Self;
    /// Minimum modulus for an amplitude to serve as the canonical phase pivot.
    const PIVOT_FLOOR: Self;
    /// Allowed deviation of a state norm from one.
    const UNIT_NORM_TOL: Self;
    /// Allowed deviation from Hermitian symmetry.
    const HERMITIAN_TOL: Self;
    /// Relative off-diagonal Frobenius norm at which Jacobi sweeps stop.
    const JACOBI_TOL: Self;
    /// Orthogonality tolerance for counterexample construction.
    const ORTHO_TOL: Self;
    /// Bound on the residual of a linear-dependence witness.
    const RESIDUAL_TOL: Self;
    /// Allowed deviation of a Born distribution from total probability one.
    const PROBABILITY_SUM_TOL: Self;

    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion used for hashing and reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f64 {
    const RANK_TOL: Self = 1e-9;
    const SCAN_RANK_TOL: Self = 1e-6;
    const NULL_NORM: Self = 1e-10;
    const PIVOT_FLOOR: Self = 1e-10;
    const UNIT_NORM_TOL: Self = 1e-12;
    const HERMITIAN_TOL: Self = 1e-12;
    const JACOBI_TOL: Self = 1e-14;
    const ORTHO_TOL: Self = 1e-10;
    const RESIDUAL_TOL: Self = 1e-8;
    const PROBABILITY_SUM_TOL: Self = 1e-9;
}

impl Real for f32 {
    const RANK_TOL: Self = 1e-4;
    const SCAN_RANK_TOL: Self = 1e-3;
    const NULL_NORM: Self = 1e-5;
    const PIVOT_FLOOR: Self = 1e-5;
    const UNIT_NORM_TOL: Self = 1e-5;
    const HERMITIAN_TOL: Self = 1e-5;
    const JACOBI_TOL: Self = 1e-6;
    const ORTHO_TOL: Self = 1e-5;
    const RESIDUAL_TOL: Self = 1e-3;
    const PROBABILITY_SUM_TOL: Self = 1e-4;
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let tau = T::two_pi();
    let mut r = theta % tau;
    if r < T::zero() {
        r += tau;
    }
    // `x % tau + tau` can round up to exactly tau for tiny negative x.
    if r >= tau {
        r = T::zero();
    }
    r
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}
