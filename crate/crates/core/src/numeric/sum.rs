//! Compensated (Neumaier) summation.
//!
//! Reductions in this crate always run sequentially in a fixed order, so sums
//! are bit-reproducible regardless of how the terms were produced.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<S: Real> {
    sum: S,
    compensation: S,
}

impl<S: Real> CompensatedSum<S> {
    pub fn new() -> Self {
        Self {
            sum: S::zero(),
            compensation: S::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: S) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> S {
        self.sum + self.compensation
    }
}

impl<S: Real> Extend<S> for CompensatedSum<S> {
    fn extend<I: IntoIterator<Item = S>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator.
pub fn sum<S: Real, I: IntoIterator<Item = S>>(iter: I) -> S {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let terms = [1.0_f64, 1e100, 1.0, -1e100];
        assert_eq!(sum(terms), 2.0);
        let naive: f64 = terms.iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn harmonic_partial_sum_matches_reverse_order() {
        let fwd = sum((1..=100_000).map(|n| 1.0_f64 / n as f64));
        let rev = sum((1..=100_000).rev().map(|n| 1.0_f64 / n as f64));
        assert!((fwd - rev).abs() <= 1e-15 * fwd);
    }
}
