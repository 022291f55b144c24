//! A single view over discrete and continuous singular-value data.

use crate::error::Result;
use crate::numeric::Summed;
use crate::rearrange::ops::decreasing_rearrangement;
use crate::rearrange::spectrum::{Count, Spectrum, SpectrumTail, EXACT_LIMIT};
use crate::rearrange::step::StepFunction;
use crate::scalar::{from_count, lit, Real};

/// Largest `ln t` visited when sampling analytic tails.
pub(crate) const SAMPLE_LN_MAX: f64 = 700.0;
const SAMPLES_PER_DECADE: f64 = 32.0;

/// Asymptotic size `coefficient · t^exponent · (ln t)^log_power` as `t → ∞`.
/// For oscillating data the coefficient is the limsup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth<S> {
    pub coefficient: S,
    pub exponent: S,
    pub log_power: S,
}

impl<S: Real> Growth<S> {
    pub fn constant(c: S) -> Self {
        Growth {
            coefficient: c,
            exponent: S::zero(),
            log_power: S::zero(),
        }
    }

    /// `lim sup self / other`.
    pub fn ratio_limit(&self, other: &Growth<S>) -> S {
        if self.coefficient == S::zero() {
            return S::zero();
        }
        if other.coefficient == S::zero() {
            return S::infinity();
        }
        let by_exp = self.exponent.partial_cmp(&other.exponent);
        let by_log = self.log_power.partial_cmp(&other.log_power);
        use std::cmp::Ordering::*;
        match (by_exp, by_log) {
            (Some(Greater), _) | (Some(Equal), Some(Greater)) => S::infinity(),
            (Some(Equal), Some(Equal)) => self.coefficient / other.coefficient,
            _ => S::zero(),
        }
    }
}

/// Singular values `μ_t` of a positive compact operator.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularValues<S> {
    Sequence(Spectrum<S>),
    Function(StepFunction<S>),
}

impl<S: Real> From<Spectrum<S>> for SingularValues<S> {
    fn from(s: Spectrum<S>) -> Self {
        SingularValues::Sequence(s)
    }
}

impl<S: Real> SingularValues<S> {
    /// Wraps a step function, rearranging it first when needed.
    pub fn function(f: StepFunction<S>) -> Result<Self> {
        if f.is_rearranged() {
            Ok(SingularValues::Function(f))
        } else {
            Ok(SingularValues::Function(decreasing_rearrangement(&f)?))
        }
    }

    pub fn name(&self) -> &str {
        match self {
            SingularValues::Sequence(s) => s.name(),
            SingularValues::Function(_) => "step",
        }
    }

    /// `∫_0^t μ`.
    pub fn partial_integral_ln(&self, ln_t: S) -> S {
        match self {
            SingularValues::Sequence(s) => s.partial_integral_ln(ln_t),
            SingularValues::Function(f) => f.partial_integral_ln(ln_t),
        }
    }

    pub fn partial_integral(&self, t: S) -> S {
        self.partial_integral_ln(t.ln())
    }

    /// `ln μ_t` (value on the piece containing `t`).
    pub fn ln_value_at(&self, ln_t: S) -> S {
        match self {
            SingularValues::Sequence(s) => s.ln_value_at(ln_t),
            SingularValues::Function(f) => f.ln_value_at(ln_t),
        }
    }

    /// `ln μ` just after 0.
    pub fn ln_first_value(&self) -> S {
        match self {
            SingularValues::Sequence(s) => s.ln_mu(1),
            SingularValues::Function(f) => f.ln_right_limit(S::neg_infinity()),
        }
    }

    /// `ln λ_a`, the log-measure of `{μ > a}`.
    pub fn ln_distribution(&self, ln_a: S) -> S {
        match self {
            SingularValues::Sequence(s) => s.count_above(ln_a).ln(),
            SingularValues::Function(f) => f.ln_distribution(ln_a),
        }
    }

    /// `∫_0^{λ_a} μ`: the sum of singular values strictly above `a`.
    pub fn truncated_trace_ln(&self, ln_a: S) -> S {
        match self {
            SingularValues::Sequence(s) => s.partial_sum(s.count_above(ln_a)).value,
            SingularValues::Function(f) => f.partial_integral_ln(f.ln_distribution(ln_a)),
        }
    }

    pub fn truncated_trace(&self, a: S) -> S {
        self.truncated_trace_ln(a.ln())
    }

    /// `∫ μ^s` (`Σ μ_n^s` for sequences).
    pub fn power_integral(&self, s: S, margin: S) -> Result<Summed<S>> {
        match self {
            SingularValues::Sequence(sp) => sp.power_sum(s, margin),
            SingularValues::Function(f) => f.power_integral(s, margin),
        }
    }

    /// `∫ exp(-t μ^{-q})` over the support of `μ` (kernel excluded).
    pub fn heat_trace_ln(&self, q: S, ln_t: S) -> Summed<S> {
        match self {
            SingularValues::Sequence(s) => s.heat_sum(q, ln_t),
            SingularValues::Function(f) => f.heat_integral(q, ln_t),
        }
    }

    pub fn powf(&self, p: S) -> Result<Self> {
        if p == S::one() {
            return Ok(self.clone());
        }
        Ok(match self {
            SingularValues::Sequence(s) => SingularValues::Sequence(s.powf(p)?),
            SingularValues::Function(f) => SingularValues::Function(f.powf(p)?),
        })
    }

    pub fn scale(&self, c: S) -> Result<Self> {
        Ok(match self {
            SingularValues::Sequence(s) => SingularValues::Sequence(s.scale(c)?),
            SingularValues::Function(f) => SingularValues::Function(f.scale(c)?),
        })
    }

    /// Infimum of the exponents `s` with `∫ μ^s < ∞` (ignoring truncation).
    pub fn abscissa(&self) -> S {
        match self {
            SingularValues::Sequence(s) => s.abscissa(),
            SingularValues::Function(f) => {
                if f.beyond_last() > S::zero() {
                    S::infinity()
                } else {
                    f.tail().map(|t| S::one() / t.exponent).unwrap_or_else(S::zero)
                }
            }
        }
    }

    /// `ln` of the data horizon when the data was cut off there.
    pub fn truncation_horizon(&self) -> Option<S> {
        match self {
            SingularValues::Function(f) if f.is_truncated() && f.tail().is_none() => Some(f.ln_end()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SingularValues::Sequence(s) => s.is_zero(),
            SingularValues::Function(f) => {
                f.tail().is_none() && f.beyond_last() == S::zero() && f.log_values().iter().all(|&v| v == S::neg_infinity())
            }
        }
    }

    /// Has an analytic tail extending to infinity.
    pub fn has_tail(&self) -> bool {
        match self {
            SingularValues::Sequence(s) => s.tail().is_some(),
            SingularValues::Function(f) => f.tail().is_some() || f.beyond_last() > S::zero(),
        }
    }

    /// `ln t` where the explicit pieces end and analytic behaviour starts.
    pub fn ln_tail_start(&self) -> S {
        match self {
            SingularValues::Sequence(s) => from_count::<S>(s.tail_start() - 1).ln(),
            SingularValues::Function(f) => f.ln_end(),
        }
    }

    /// Kinks of `t ↦ ∫_0^t μ` among the explicit pieces, with the value of the
    /// piece ending there: `(ln t_i, ln μ on the piece)`.
    pub fn kinks(&self) -> Vec<(S, S)> {
        match self {
            SingularValues::Sequence(s) => s
                .head()
                .iter()
                .enumerate()
                .map(|(i, &v)| (from_count::<S>(i as u64 + 1).ln(), v.ln()))
                .collect(),
            SingularValues::Function(f) => f
                .log_breakpoints()
                .iter()
                .copied()
                .zip(f.log_values().iter().copied())
                .collect(),
        }
    }

    /// Geometric sample of `ln t` over the analytic tail, at kinks where they exist.
    pub fn tail_samples(&self) -> Vec<S> {
        if !self.has_tail() {
            return Vec::new();
        }
        let start = self.ln_tail_start().max(S::zero());
        let step = lit::<S>(std::f64::consts::LN_10 / SAMPLES_PER_DECADE);
        let integral = matches!(self, SingularValues::Sequence(_));
        let mut out = Vec::new();
        let mut u = start + step;
        let max = lit::<S>(SAMPLE_LN_MAX);
        let mut last_n = 0u64;
        while u <= max {
            if integral && u < lit(EXACT_LIMIT.ln()) {
                let n = u.exp().round().to_u64().unwrap_or(0);
                if n > last_n {
                    out.push(from_count::<S>(n).ln());
                    last_n = n;
                }
            } else {
                out.push(u);
            }
            u = u + step;
        }
        out
    }

    /// Growth of `t ↦ ∫_0^t μ`.
    pub fn integral_growth(&self) -> Growth<S> {
        let power = |c: S, a: S, total: &dyn Fn() -> S| {
            if a < S::one() {
                Growth {
                    coefficient: c / (S::one() - a),
                    exponent: S::one() - a,
                    log_power: S::zero(),
                }
            } else if a == S::one() {
                Growth {
                    coefficient: c,
                    exponent: S::zero(),
                    log_power: S::one(),
                }
            } else {
                Growth::constant(total())
            }
        };
        match self {
            SingularValues::Sequence(s) => match s.tail() {
                None => Growth::constant(s.total()),
                Some(SpectrumTail::Power {
                    coefficient,
                    exponent,
                }) => power(*coefficient, *exponent, &|| s.total()),
                Some(SpectrumTail::LogOscillating(o)) => {
                    let peak = o.coefficient * (o.offset + o.amplitude.abs() * lit(std::f64::consts::FRAC_1_SQRT_2));
                    if o.exponent == S::one() {
                        Growth {
                            coefficient: peak,
                            exponent: S::zero(),
                            log_power: S::one(),
                        }
                    } else if o.exponent < S::one() {
                        let c = (o.coefficient * (o.offset + o.amplitude.abs())).powf(o.exponent);
                        Growth {
                            coefficient: c / (S::one() - o.exponent),
                            exponent: S::one() - o.exponent,
                            log_power: S::zero(),
                        }
                    } else {
                        Growth::constant(s.total())
                    }
                }
            },
            SingularValues::Function(f) => {
                if f.beyond_last() > S::zero() {
                    return Growth {
                        coefficient: f.beyond_last(),
                        exponent: S::one(),
                        log_power: S::zero(),
                    };
                }
                match f.tail() {
                    Some(t) => power(t.coefficient, t.exponent, &|| f.total()),
                    None => Growth::constant(f.total()),
                }
            }
        }
    }

    /// Growth of `t ↦ t·μ_t`.
    pub fn product_growth(&self) -> Growth<S> {
        let power = |c: S, a: S| Growth {
            coefficient: c,
            exponent: S::one() - a,
            log_power: S::zero(),
        };
        match self {
            SingularValues::Sequence(s) => match s.tail() {
                None => Growth::constant(S::zero()),
                Some(SpectrumTail::Power {
                    coefficient,
                    exponent,
                }) => power(*coefficient, *exponent),
                Some(SpectrumTail::LogOscillating(o)) => {
                    let c = (o.coefficient * (o.offset + o.amplitude.abs())).powf(o.exponent);
                    power(c, o.exponent)
                }
            },
            SingularValues::Function(f) => {
                if f.beyond_last() > S::zero() {
                    return power(f.beyond_last(), S::zero());
                }
                match f.tail() {
                    Some(t) => power(t.coefficient, t.exponent),
                    None => Growth::constant(S::zero()),
                }
            }
        }
    }

    /// Number of singular values above `a` as a [`Count`], for sequences.
    pub fn count_above(&self, ln_a: S) -> Option<Count<S>> {
        match self {
            SingularValues::Sequence(s) => Some(s.count_above(ln_a)),
            SingularValues::Function(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> SingularValues<f64> {
        Spectrum::new("h", vec![1.0, 0.5], Some(SpectrumTail::power(1.0, 1.0)))
            .unwrap()
            .into()
    }

    #[test]
    fn truncated_trace_harmonic() {
        let h = harmonic();
        let v = h.truncated_trace(1.0 / 10.5);
        assert!((v - 2.928_968_253_968_254).abs() < 1e-14);
        assert_eq!(h.truncated_trace(1.0), 0.0);
        assert_eq!(h.truncated_trace(2.0), 0.0);
    }

    #[test]
    fn truncated_trace_is_partial_integral_at_distribution() {
        let h = harmonic();
        for &a in &[0.3, 0.01, 1e-5, 1e-12] {
            let lam = h.ln_distribution(f64::ln(a));
            let lhs = h.truncated_trace(a);
            let rhs = h.partial_integral_ln(lam);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }
    }

    #[test]
    fn growth_ratios() {
        let h = harmonic();
        let g = h.integral_growth();
        let log = Growth {
            coefficient: 1.0,
            exponent: 0.0,
            log_power: 1.0,
        };
        assert_eq!(g.ratio_limit(&log), 1.0);
        assert_eq!(Growth::constant(3.0).ratio_limit(&log), 0.0);
        assert_eq!(log.ratio_limit(&Growth::constant(3.0)), f64::INFINITY);
    }

    #[test]
    fn tail_samples_are_integer_positions() {
        let s = harmonic().tail_samples();
        assert!(s.len() > 100);
        for w in s.windows(2).take(50) {
            assert!(w[1] > w[0]);
            let n = w[0].exp();
            assert!((n - n.round()).abs() < 1e-9);
        }
    }
}
