//! Floating-point scalar abstraction for the simulation kernels.
//!
//! Every kernel in this crate is written against [`Scalar`] so the same code
//! runs in `f32` or `f64`. The per-type tolerance constants encode how tight
//! the exactness gates can be made for that precision; the `f64` values are
//! the ones the acceptance contract is stated in.

use num_complex::Complex;

/// Floating-point scalar usable for amplitudes and probabilities.
pub trait Scalar:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::Signed
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Allowed deviation of squared norms and weight sums from 1.
    const NORM_TOL: Self;
    /// Allowed deviation for probability sums and cross-engine comparisons.
    const PROB_TOL: Self;
    /// Probabilities below this are clamped to exactly zero on output.
    const PROB_CLAMP: Self;
    /// Normalization-gate threshold for closed-form evaluations; exceeding it
    /// means the formula itself was transcribed wrong, not a rounding issue.
    const FORMULA_GATE: Self;

    /// Lossless-enough conversion from a register size or counter.
    fn from_count(n: usize) -> Self {
        num_traits::FromPrimitive::from_usize(n).expect("count representable in scalar type")
    }
}

macro_rules! impl_scalar {
    ($t:ty, $norm:expr, $prob:expr, $clamp:expr, $gate:expr) => {
        impl Scalar for $t {
            const NORM_TOL: Self = $norm;
            const PROB_TOL: Self = $prob;
            const PROB_CLAMP: Self = $clamp;
            const FORMULA_GATE: Self = $gate;
        }
    };
}

impl_scalar!(f64, 1e-12, 1e-10, 1e-12, 1e-8);
impl_scalar!(f32, 1e-5, 1e-4, 1e-6, 1e-3);

/// Complex amplitude over a [`Scalar`].
pub type Amp<T> = Complex<T>;

/// Unit root `e^{2*pi*i*k/den}` for integer `k`, exact in the table sense.
pub fn unit_root<T: Scalar>(k: u64, den: u64) -> Amp<T> {
    let theta = T::from_f64(2.0).unwrap() * T::PI() * T::from_u64(k % den).unwrap()
        / T::from_u64(den).unwrap();
    Complex::from_polar(T::one(), theta)
}

/// Table of all `den` unit roots, indexed by exponent.
pub fn unit_root_table<T: Scalar>(den: u64) -> Vec<Amp<T>> {
    (0..den).map(|k| unit_root(k, den)).collect()
}
