//! Piecewise-constant functions on `[0, ∞)` stored in the log domain.
//!
//! Piece `i` covers `(t_{i-1}, t_i]` with `t_0 = 0`.  Both abscissae and
//! values are kept as natural logarithms, so magnitudes such as `2^{-490000}`
//! remain representable.

use crate::error::{Error, InputCode, Result};
use crate::numeric::{CompensatedSum, HeatPowerTerm, PowerTerm, SmoothTerm, Summed};
use crate::scalar::{ln_add_exp, ln_diff_exp, lit, Real};

/// Continuous decay `c·(t + h)^{-α}` on `(t_k, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousTail<S> {
    pub coefficient: S,
    pub shift: S,
    pub exponent: S,
}

impl<S: Real> ContinuousTail<S> {
    /// `ln(c·(t + h)^{-α})` at `ln t`.
    pub fn ln_value(&self, ln_t: S) -> S {
        self.coefficient.ln() - self.exponent * ln_add_exp(ln_t, self.shift.ln())
    }

    /// `∫_{t_a}^{t_b} c (t + h)^{-α} dt`.
    fn integral(&self, ln_a: S, ln_b: S, power: S) -> S {
        let term = PowerTerm {
            coefficient: (power * self.coefficient.ln()).exp(),
            exponent: self.exponent * power,
        };
        let ln_h = self.shift.ln();
        let lo = ln_add_exp(ln_a, ln_h);
        let hi = if ln_b.is_infinite() {
            S::infinity()
        } else {
            ln_add_exp(ln_b, ln_h)
        };
        if hi <= lo {
            return S::zero();
        }
        term.integral(lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<S> {
    log_breakpoints: Vec<S>,
    log_values: Vec<S>,
    beyond_last: S,
    tail: Option<ContinuousTail<S>>,
    truncated: bool,
    rearranged: bool,
    /// `prefix[i] = ∫_0^{t_i}`.
    prefix: Vec<S>,
}

impl<S: Real> StepFunction<S> {
    /// Builds from plain values.
    pub fn new(log_breakpoints: Vec<S>, values: Vec<S>, beyond_last: S) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::input(InputCode::NonFinite, Some(i + 1), "value is not finite"));
            }
            if v < S::zero() {
                return Err(Error::input(InputCode::Negative, Some(i + 1), "value is negative"));
            }
        }
        let logs = values.iter().map(|v| v.ln()).collect();
        Self::from_log_values(log_breakpoints, logs, beyond_last)
    }

    /// Builds from log values (`-∞` encodes zero).
    pub fn from_log_values(log_breakpoints: Vec<S>, log_values: Vec<S>, beyond_last: S) -> Result<Self> {
        if log_breakpoints.len() != log_values.len() {
            return Err(Error::input(
                InputCode::Schema,
                None,
                format!(
                    "{} breakpoints but {} values",
                    log_breakpoints.len(),
                    log_values.len()
                ),
            ));
        }
        for (i, &b) in log_breakpoints.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::input(InputCode::NonFinite, Some(i + 1), "breakpoint is not finite"));
            }
            if i > 0 && b <= log_breakpoints[i - 1] {
                return Err(Error::input(
                    InputCode::Breakpoints,
                    Some(i + 1),
                    "breakpoints must be strictly increasing",
                ));
            }
        }
        for (i, &v) in log_values.iter().enumerate() {
            if v.is_nan() || v == S::infinity() {
                return Err(Error::input(InputCode::NonFinite, Some(i + 1), "value is not finite"));
            }
        }
        if !beyond_last.is_finite() {
            return Err(Error::input(InputCode::NonFinite, None, "beyond_last is not finite"));
        }
        if beyond_last < S::zero() {
            return Err(Error::input(InputCode::Negative, None, "beyond_last is negative"));
        }
        let mut f = StepFunction {
            log_breakpoints,
            log_values,
            beyond_last,
            tail: None,
            truncated: false,
            rearranged: false,
            prefix: Vec::new(),
        };
        f.refresh();
        Ok(f)
    }

    /// Unit-length pieces `(i-1, i]` with the given values.
    pub fn from_unit_pieces(values: &[S]) -> Result<Self> {
        let bps = (1..=values.len()).map(|i| lit::<S>(i as f64).ln()).collect();
        Self::new(bps, values.to_vec(), S::zero())
    }

    /// Pieces of the given lengths, starting at 0.
    pub fn from_lengths(values: &[S], lengths: &[S]) -> Result<Self> {
        if values.len() != lengths.len() {
            return Err(Error::input(InputCode::Schema, None, "values and lengths differ in size"));
        }
        let mut acc = CompensatedSum::new();
        let mut bps = Vec::with_capacity(lengths.len());
        for (i, &l) in lengths.iter().enumerate() {
            if !(l > S::zero()) || !l.is_finite() {
                return Err(Error::input(InputCode::Breakpoints, Some(i + 1), "piece length must be positive"));
            }
            acc.add(l);
            bps.push(acc.value().ln());
        }
        Self::new(bps, values.to_vec(), S::zero())
    }

    /// Replaces the constant beyond the last breakpoint by `c·(t + h)^{-α}`.
    pub fn with_tail(mut self, tail: ContinuousTail<S>) -> Result<Self> {
        let ok = [tail.coefficient, tail.shift, tail.exponent].iter().all(|v| v.is_finite())
            && tail.coefficient > S::zero()
            && tail.exponent > S::zero()
            && tail.shift >= S::zero();
        if !ok {
            return Err(Error::input(InputCode::Parameter, None, "invalid continuous tail"));
        }
        if self.beyond_last != S::zero() {
            return Err(Error::input(InputCode::Schema, None, "a tail requires beyond_last = 0"));
        }
        if self.log_breakpoints.is_empty() && tail.shift == S::zero() {
            return Err(Error::input(InputCode::Parameter, None, "a tail starting at 0 needs a positive shift"));
        }
        self.tail = Some(tail);
        self.refresh();
        Ok(self)
    }

    /// Marks the end of the data as an observation horizon rather than true support.
    pub fn mark_truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    fn refresh(&mut self) {
        let mut acc = CompensatedSum::new();
        let mut prefix = Vec::with_capacity(self.log_breakpoints.len() + 1);
        prefix.push(S::zero());
        for i in 0..self.log_breakpoints.len() {
            acc.add(self.piece_integral(i));
            prefix.push(acc.value());
        }
        self.prefix = prefix;
        let monotone = self.log_values.windows(2).all(|w| w[1] <= w[0]);
        let end_ok = match &self.tail {
            Some(t) => match self.log_values.last() {
                Some(&last) => t.ln_value(self.ln_end()) <= last,
                None => true,
            },
            None => self.beyond_last == S::zero(),
        };
        self.rearranged = monotone && end_ok;
    }

    pub fn len(&self) -> usize {
        self.log_breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_breakpoints.is_empty()
    }

    pub fn log_breakpoints(&self) -> &[S] {
        &self.log_breakpoints
    }

    pub fn log_values(&self) -> &[S] {
        &self.log_values
    }

    pub fn values(&self) -> Vec<S> {
        self.log_values.iter().map(|v| v.exp()).collect()
    }

    pub fn beyond_last(&self) -> S {
        self.beyond_last
    }

    pub fn tail(&self) -> Option<&ContinuousTail<S>> {
        self.tail.as_ref()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Non-increasing with nothing but a decaying tail past the last piece.
    pub fn is_rearranged(&self) -> bool {
        self.rearranged
    }

    /// `ln t_k`, or `-∞` without pieces.
    pub fn ln_end(&self) -> S {
        self.log_breakpoints.last().copied().unwrap_or_else(S::neg_infinity)
    }

    /// `ln t_{i}` for 0-based piece `i`'s left end.
    pub(crate) fn ln_left(&self, i: usize) -> S {
        if i == 0 {
            S::neg_infinity()
        } else {
            self.log_breakpoints[i - 1]
        }
    }

    /// `ln` of the length of piece `i`.
    pub fn ln_length(&self, i: usize) -> S {
        ln_diff_exp(self.log_breakpoints[i], self.ln_left(i))
    }

    fn piece_integral(&self, i: usize) -> S {
        if self.log_values[i] == S::neg_infinity() {
            return S::zero();
        }
        (self.log_values[i] + self.ln_length(i)).exp()
    }

    /// Index of the piece containing `t`, or `len()` past the last breakpoint.
    pub(crate) fn piece_of(&self, ln_t: S) -> usize {
        self.log_breakpoints.partition_point(|&b| b < ln_t)
    }

    /// `ln f(t)`.
    pub fn ln_value_at(&self, ln_t: S) -> S {
        let i = self.piece_of(ln_t);
        if i < self.len() {
            return self.log_values[i];
        }
        match &self.tail {
            Some(t) => t.ln_value(ln_t),
            None => self.beyond_last.ln(),
        }
    }

    /// Right limit `ln f(t+)`.
    pub fn ln_right_limit(&self, ln_t: S) -> S {
        let i = self.log_breakpoints.partition_point(|&b| b <= ln_t);
        if i < self.len() {
            return self.log_values[i];
        }
        match &self.tail {
            Some(t) => t.ln_value(ln_t),
            None => self.beyond_last.ln(),
        }
    }

    pub fn value_at(&self, t: S) -> S {
        self.ln_value_at(t.ln()).exp()
    }

    /// `∫_0^t f` for `t = e^{ln_t}`, possibly `+∞`.
    pub fn partial_integral_ln(&self, ln_t: S) -> S {
        if ln_t == S::neg_infinity() {
            return S::zero();
        }
        let i = self.piece_of(ln_t);
        if i < self.len() {
            let lv = self.log_values[i];
            let part = if lv == S::neg_infinity() {
                S::zero()
            } else {
                (lv + ln_diff_exp(ln_t, self.ln_left(i))).exp()
            };
            return self.prefix[i] + part;
        }
        let base = self.prefix[self.len()];
        let end = self.ln_end();
        if ln_t <= end {
            return base;
        }
        match &self.tail {
            Some(t) => base + t.integral(end, ln_t, S::one()),
            None if self.beyond_last == S::zero() => base,
            None if ln_t.is_infinite() => S::infinity(),
            None => base + (self.beyond_last.ln() + ln_diff_exp(ln_t, end)).exp(),
        }
    }

    pub fn partial_integral(&self, t: S) -> S {
        self.partial_integral_ln(t.ln())
    }

    /// `∫_0^∞ f`.
    pub fn total(&self) -> S {
        self.partial_integral_ln(S::infinity())
    }

    /// `ln |{f > e^{ln_level}}|`, `-∞` for an empty set and `+∞` for infinite measure.
    pub fn ln_distribution(&self, ln_level: S) -> S {
        if self.beyond_last > S::zero() && self.beyond_last.ln() > ln_level {
            return S::infinity();
        }
        let mut tail_part = S::neg_infinity();
        if let Some(t) = &self.tail {
            // c (s + h)^{-α} > y  ⟺  s < (c/y)^{1/α} - h
            let reach = (t.coefficient.ln() - ln_level) / t.exponent;
            let ln_h = t.shift.ln();
            let stop = if reach > ln_h {
                ln_diff_exp(reach, ln_h)
            } else {
                S::neg_infinity()
            };
            let end = self.ln_end();
            if stop > end {
                tail_part = ln_diff_exp(stop, end);
            }
        }
        if self.rearranged {
            let j = self.log_values.partition_point(|&v| v > ln_level);
            let head = if j == 0 {
                S::neg_infinity()
            } else {
                self.log_breakpoints[j - 1]
            };
            return ln_add_exp(head, tail_part);
        }
        let mut lens: Vec<S> = (0..self.len())
            .filter(|&i| self.log_values[i] > ln_level)
            .map(|i| self.ln_length(i))
            .collect();
        lens.push(tail_part);
        crate::scalar::ln_sum_exp(&lens)
    }

    /// `∫ f^s` over `[0, ∞)` with an error estimate (exact for pure step data).
    pub fn power_integral(&self, s: S, margin: S) -> Result<Summed<S>> {
        if !(s > S::zero()) || !s.is_finite() {
            return Err(Error::Domain(format!("power integral needs a finite s > 0, got {s}")));
        }
        if self.beyond_last > S::zero() {
            return Err(Error::Divergent {
                s: s.to_f64().unwrap_or(f64::NAN),
                abscissa: f64::INFINITY,
            });
        }
        let mut acc = CompensatedSum::new();
        for i in 0..self.len() {
            let lv = self.log_values[i];
            if lv != S::neg_infinity() {
                acc.add((s * lv + self.ln_length(i)).exp());
            }
        }
        if let Some(t) = &self.tail {
            let abscissa = S::one() / t.exponent;
            if s - abscissa < margin {
                return Err(Error::Divergent {
                    s: s.to_f64().unwrap_or(f64::NAN),
                    abscissa: abscissa.to_f64().unwrap_or(f64::NAN),
                });
            }
            acc.add(t.integral(self.ln_end(), S::infinity(), s));
        }
        Ok(Summed {
            value: acc.value(),
            error: S::zero(),
        })
    }

    /// `∫ exp(-t f^{-q})` over the support of `f`.
    pub fn heat_integral(&self, q: S, ln_t: S) -> Summed<S> {
        let floor = lit::<S>(-700.0);
        let mut acc = CompensatedSum::new();
        let mut dropped = S::zero();
        for i in 0..self.len() {
            let lv = self.log_values[i];
            if lv == S::neg_infinity() {
                continue;
            }
            let e = -(ln_t - q * lv).exp();
            if e < floor {
                dropped = dropped + (floor + self.ln_length(i)).exp();
            } else {
                acc.add((e + self.ln_length(i)).exp());
            }
        }
        if self.beyond_last > S::zero() {
            return Summed {
                value: S::infinity(),
                error: S::zero(),
            };
        }
        if let Some(t) = &self.tail {
            // ∫_M^∞ exp(-k y^{qα}) dy with y = s + h
            let term = HeatPowerTerm {
                ln_rate: ln_t - q * t.coefficient.ln(),
                power: q * t.exponent,
            };
            let lo = ln_add_exp(self.ln_end(), t.shift.ln());
            acc.add(term.integral(lo, S::infinity()));
        }
        Summed {
            value: acc.value(),
            error: dropped,
        }
    }

    fn map_logs(&self, f: impl Fn(S) -> S, tail: Option<ContinuousTail<S>>, beyond: S) -> Result<Self> {
        let logs = self.log_values.iter().map(|&v| if v == S::neg_infinity() { v } else { f(v) }).collect();
        let mut out = Self::from_log_values(self.log_breakpoints.clone(), logs, beyond)?;
        if let Some(t) = tail {
            out = out.with_tail(t)?;
        }
        out.truncated = self.truncated;
        Ok(out)
    }

    /// Pointwise power `f^p`, exact in the log domain.
    pub fn powf(&self, p: S) -> Result<Self> {
        if !(p > S::zero()) || !p.is_finite() {
            return Err(Error::Domain(format!("power must be finite and positive, got {p}")));
        }
        let tail = self.tail.map(|t| ContinuousTail {
            coefficient: t.coefficient.powf(p),
            shift: t.shift,
            exponent: t.exponent * p,
        });
        self.map_logs(|v| v * p, tail, self.beyond_last.powf(p))
    }

    /// `c·f` for `c > 0`.
    pub fn scale(&self, c: S) -> Result<Self> {
        if !(c > S::zero()) || !c.is_finite() {
            return Err(Error::Domain(format!("scale must be finite and positive, got {c}")));
        }
        let ln_c = c.ln();
        let tail = self.tail.map(|t| ContinuousTail {
            coefficient: t.coefficient * c,
            ..t
        });
        self.map_logs(|v| v + ln_c, tail, self.beyond_last * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_pieces_integrals() {
        let f = StepFunction::from_unit_pieces(&[3.0_f64, 2.0, 1.0]).unwrap();
        assert!(f.is_rearranged());
        assert!((f.partial_integral(2.0) - 5.0).abs() < 1e-15);
        assert!((f.partial_integral(2.5) - 5.5).abs() < 1e-15);
        assert!((f.partial_integral(100.0) - 6.0).abs() < 1e-15);
        assert!((f.value_at(1.0) - 3.0).abs() < 1e-15);
        assert!((f.value_at(1.5) - 2.0).abs() < 1e-15);
        assert!((f.ln_right_limit(0.0).exp() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn distribution_levels() {
        let f = StepFunction::from_unit_pieces(&[3.0_f64, 2.0, 1.0]).unwrap();
        let lam = |y: f64| f.ln_distribution(y.ln()).exp();
        assert!((lam(0.5) - 3.0).abs() < 1e-14);
        assert!((lam(1.5) - 2.0).abs() < 1e-14);
        assert!((lam(2.5) - 1.0).abs() < 1e-14);
        assert_eq!(lam(3.5), 0.0);
        let g = StepFunction::from_unit_pieces(&[1.0_f64, 3.0, 2.0]).unwrap();
        assert!(!g.is_rearranged());
        assert!((g.ln_distribution(1.5f64.ln()).exp() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn continuous_tail_integrals() {
        // 1/(1+t) from 0: ∫_0^t = ln(1+t)
        let f = StepFunction::from_log_values(vec![], vec![], 0.0_f64)
            .unwrap()
            .with_tail(ContinuousTail {
                coefficient: 1.0,
                shift: 1.0,
                exponent: 1.0,
            })
            .unwrap();
        assert!(f.is_rearranged());
        for &t in &[0.5_f64, 1.0, 10.0, 1e6] {
            assert!((f.partial_integral(t) - t.ln_1p()).abs() < 1e-12);
        }
        assert!((f.partial_integral_ln(1000.0) - 1000.0).abs() < 1e-9);
        assert!((f.ln_distribution(0.25f64.ln()).exp() - 3.0).abs() < 1e-12);
        // ∫ (1+t)^{-2} = 1
        assert!((f.power_integral(2.0, 1e-8).unwrap().value - 1.0).abs() < 1e-14);
        assert!(f.power_integral(1.0, 1e-8).is_err());
    }

    #[test]
    fn huge_breakpoints_stay_finite() {
        let ln2 = 2f64.ln();
        let f = StepFunction::from_log_values(
            vec![900.0 * ln2],
            vec![-900.0 * ln2],
            0.0,
        )
        .unwrap();
        assert!((f.total() - 1.0).abs() < 1e-12);
        assert!((f.partial_integral_ln(899.0 * ln2) - 0.5f64.powi(1)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            StepFunction::new(vec![0.0_f64, 0.0], vec![1.0, 1.0], 0.0).unwrap_err().index(),
            Some(2)
        );
        assert!(StepFunction::new(vec![0.0_f64], vec![f64::NAN], 0.0).is_err());
        assert!(StepFunction::new(vec![0.0_f64], vec![-1.0], 0.0).is_err());
    }
}
