//! The scalar abstraction shared by every numerical routine.
//!
//! All grids, multipliers and norms are generic over a real floating point
//! type. In practice this is `f64` (the crate root exports `f64` aliases),
//! but `f32` works for quick exploratory runs.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Complex numbers over a [`Real`] scalar.
pub type Complex<T> = rustfft::num_complex::Complex<T>;

/// Real scalar usable for FFT-based spectral computations.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + std::iter::Sum
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an index or count into this scalar.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Lossy conversion back to `f64` (for reporting).
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `2^n` for a possibly negative exponent.
#[inline]
pub fn pow2<T: Real>(n: i32) -> T {
    T::lit(2.0).powi(n)
}

/// Squared modulus of a complex number.
#[inline]
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// `i^m` as a complex number.
#[inline]
pub fn i_pow<T: Real>(m: usize) -> Complex<T> {
    match m % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// `n!` as a scalar.
pub fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

/// Binomial coefficient as a scalar.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| {
        acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1)
    })
}

/// Deterministic pairwise (tree) summation.
///
/// The reduction order depends only on the slice length, so repeated runs
/// produce bit-identical results regardless of threading elsewhere.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `ℓ^q` norm of non-negative terms, computed relative to the largest term.
///
/// Scaling by the maximum keeps the computation overflow-free and makes the
/// monotonicity `‖a‖_{q₀} ≥ ‖a‖_{q₁}` for `q₀ ≤ q₁` hold in floating point:
/// every scaled term lies in `[0, 1]`, so raising to a larger power never
/// increases it.
pub fn lq_norm<T: Real>(terms: &[T], q: crate::norms::Exponent<T>) -> T {
    let max = terms.iter().fold(T::zero(), |m, &t| m.max(t));
    match q {
        crate::norms::Exponent::Infinity => max,
        crate::norms::Exponent::Finite(q) => {
            if max == T::zero() {
                return T::zero();
            }
            let scaled: Vec<T> = terms.iter().map(|&t| (t / max).powf(q)).collect();
            max * pairwise_sum(&scaled).powf(T::one() / q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Exponent;

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(binomial::<f64>(6, 2), 15.0);
        assert_eq!(binomial::<f64>(3, 5), 0.0);
    }

    #[test]
    fn i_pow_cycles() {
        let z: Complex<f64> = i_pow(3);
        assert_eq!(z, Complex::new(0.0, -1.0));
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }

    #[test]
    fn lq_norm_monotone_in_q() {
        let a = [0.3, 1.7, 0.0, 2.2, 0.9];
        let n1 = lq_norm(&a, Exponent::Finite(1.0));
        let n2 = lq_norm(&a, Exponent::Finite(2.0));
        let ni = lq_norm(&a, Exponent::Infinity);
        assert!((n1 - 5.1).abs() < 1e-14);
        assert!(n1 >= n2 && n2 >= ni);
        assert_eq!(ni, 2.2);
    }
}
