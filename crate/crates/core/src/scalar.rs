//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// All spectral data and every derived quantity is generic over this trait.
/// Tolerances quoted in the documentation assume `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer count into the working scalar.
#[inline]
pub fn from_count<S: Real>(n: u64) -> S {
    S::from_u64(n).expect("count representable in scalar type")
}

/// `ln(e^a - e^b)` for `a > b`, without forming either exponential.
#[inline]
pub fn ln_diff_exp<S: Real>(a: S, b: S) -> S {
    if b == S::neg_infinity() {
        return a;
    }
    a + (-(b - a).exp_m1()).ln()
}

/// `ln(e^a + e^b)`.
#[inline]
pub fn ln_add_exp<S: Real>(a: S, b: S) -> S {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == S::neg_infinity() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 + e^v)`, stable for large `v`.
#[inline]
pub fn ln_1p_exp<S: Real>(v: S) -> S {
    if v > lit(35.0) {
        v + (-v).exp()
    } else {
        v.exp().ln_1p()
    }
}

/// `ln Σ e^{v_i}`; returns `-∞` for an empty input.
pub fn ln_sum_exp<S: Real>(values: &[S]) -> S {
    let hi = values.iter().copied().fold(S::neg_infinity(), S::max);
    if hi == S::neg_infinity() || hi == S::infinity() {
        return hi;
    }
    let mut acc = crate::numeric::CompensatedSum::new();
    for &v in values {
        acc.add((v - hi).exp());
    }
    hi + acc.value().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_helpers() {
        let a: f64 = 3.0;
        let b: f64 = 1.0;
        assert!((ln_diff_exp(a, b) - (a.exp() - b.exp()).ln()).abs() < 1e-14);
        assert!((ln_add_exp(a, b) - (a.exp() + b.exp()).ln()).abs() < 1e-14);
        assert_eq!(ln_diff_exp(a, f64::NEG_INFINITY), a);
        assert!((ln_1p_exp(800.0_f64) - 800.0).abs() < 1e-12);
        assert!((ln_1p_exp(0.0_f64) - 2f64.ln()).abs() < 1e-15);
        let v = [1000.0_f64, 1000.0 + 2f64.ln()];
        assert!((ln_sum_exp(&v) - (1000.0 + 3f64.ln())).abs() < 1e-12);
        assert_eq!(ln_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
    }
}
