//! Euler–Maclaurin summation of smooth, eventually monotone terms.
//!
//! Terms are addressed through `y = ln x` so that upper limits far beyond the
//! floating point range (e.g. `x = e^{400000}`) can be handled without ever
//! materialising `x`.

use crate::numeric::special::{gamma, gamma_q};
use crate::numeric::sum::CompensatedSum;
use crate::scalar::{from_count, lit, Real};

/// Smooth summand `f(x)`, evaluated through `y = ln x`.
pub trait SmoothTerm<S: Real>: Sync {
    fn value(&self, y: S) -> S;
    /// `f'(x)` at `x = e^y`.
    fn d1(&self, y: S) -> S;
    /// `f'''(x)` at `x = e^y`.
    fn d3(&self, y: S) -> S;
    /// `∫_{e^{y_lo}}^{e^{y_hi}} f(x) dx`; `y_hi = +∞` for the full tail.
    fn integral(&self, y_lo: S, y_hi: S) -> S;
}

/// Upper limit of a sum over integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper<S> {
    Infinite,
    /// Last index included.
    Index(u64),
    /// Sum "up to" `e^{ln_b}`, where `e^{ln_b}` is too large for sub-unit
    /// bookkeeping to matter.
    Continuum(S),
}

/// Result of a summation with its truncation error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summed<S> {
    pub value: S,
    pub error: S,
}

/// `Σ_{n=start}^{upper} f(n)`: `direct` terms are summed explicitly, the rest by
/// Euler–Maclaurin with the `B₂` and `B₄` corrections.  The reported error is
/// the magnitude of the last correction applied.
pub fn em_sum<S: Real, T: SmoothTerm<S> + ?Sized>(
    term: &T,
    start: u64,
    upper: Upper<S>,
    direct: u64,
) -> Summed<S> {
    let direct = direct.max(1);
    let last_direct = match upper {
        Upper::Index(last) => {
            if last < start {
                return Summed {
                    value: S::zero(),
                    error: S::zero(),
                };
            }
            last.min(start + direct - 1)
        }
        _ => start + direct - 1,
    };
    let mut acc = CompensatedSum::new();
    for n in start..=last_direct {
        acc.add(term.value(from_count::<S>(n).ln()));
    }
    let m = last_direct + 1;
    let y_m = from_count::<S>(m).ln();
    let y_b = match upper {
        Upper::Infinite => S::infinity(),
        Upper::Index(last) if last < m => {
            return Summed {
                value: acc.value(),
                error: S::zero(),
            }
        }
        Upper::Index(last) => from_count::<S>(last).ln(),
        Upper::Continuum(ln_b) if ln_b <= y_m => {
            return Summed {
                value: acc.value(),
                error: S::zero(),
            }
        }
        Upper::Continuum(ln_b) => ln_b,
    };
    let at_b = |g: &dyn Fn(S) -> S| if y_b.is_infinite() { S::zero() } else { g(y_b) };
    let f_m = term.value(y_m);
    let f_b = at_b(&|y| term.value(y));
    acc.add(term.integral(y_m, y_b));
    acc.add((f_m + f_b) * lit(0.5));
    let d1 = at_b(&|y| term.d1(y)) - term.d1(y_m);
    acc.add(d1 / lit(12.0));
    let d3 = at_b(&|y| term.d3(y)) - term.d3(y_m);
    let c4 = -d3 / lit(720.0);
    acc.add(c4);
    Summed {
        value: acc.value(),
        error: c4.abs(),
    }
}

/// `c · x^{-s}`.
#[derive(Debug, Clone, Copy)]
pub struct PowerTerm<S> {
    pub coefficient: S,
    pub exponent: S,
}

impl<S: Real> SmoothTerm<S> for PowerTerm<S> {
    fn value(&self, y: S) -> S {
        self.coefficient * (-self.exponent * y).exp()
    }

    fn d1(&self, y: S) -> S {
        -self.exponent * self.coefficient * (-(self.exponent + S::one()) * y).exp()
    }

    fn d3(&self, y: S) -> S {
        let s = self.exponent;
        -s * (s + S::one()) * (s + lit(2.0)) * self.coefficient * (-(s + lit(3.0)) * y).exp()
    }

    fn integral(&self, y_lo: S, y_hi: S) -> S {
        let delta = S::one() - self.exponent;
        if y_hi.is_infinite() {
            if delta >= S::zero() {
                return S::infinity();
            }
            return self.coefficient * (delta * y_lo).exp() / -delta;
        }
        let span = y_hi - y_lo;
        if delta == S::zero() {
            return self.coefficient * span;
        }
        self.coefficient * (delta * y_lo).exp() * (delta * span).exp_m1() / delta
    }
}

/// `exp(-k x^γ)` with `ln k` given, the summand of a heat trace over a power tail.
#[derive(Debug, Clone, Copy)]
pub struct HeatPowerTerm<S> {
    pub ln_rate: S,
    pub power: S,
}

impl<S: Real> HeatPowerTerm<S> {
    fn h(&self, y: S) -> S {
        (self.ln_rate + self.power * y).exp()
    }
}

impl<S: Real> SmoothTerm<S> for HeatPowerTerm<S> {
    fn value(&self, y: S) -> S {
        (-self.h(y)).exp()
    }

    fn d1(&self, y: S) -> S {
        let h = self.h(y);
        -self.power * h * (-y).exp() * (-h).exp()
    }

    fn d3(&self, y: S) -> S {
        let g = self.power;
        let h = self.h(y);
        let inv = (-y).exp();
        let h1 = g * h * inv;
        let h2 = g * (g - S::one()) * h * inv * inv;
        let h3 = g * (g - S::one()) * (g - lit(2.0)) * h * inv * inv * inv;
        (-h1 * h1 * h1 + lit::<S>(3.0) * h1 * h2 - h3) * (-h).exp()
    }

    fn integral(&self, y_lo: S, y_hi: S) -> S {
        debug_assert!(y_hi.is_infinite());
        // ∫_m^∞ exp(-k x^γ) dx = k^{-1/γ} Γ(1/γ) Q(1/γ, k m^γ) / γ
        let a = S::one() / self.power;
        let g = gamma(a).unwrap_or(S::nan());
        (-self.ln_rate * a).exp() * g * gamma_q(a, self.h(y_lo)) / self.power
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASEL: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

    #[test]
    fn basel_sum() {
        let t = PowerTerm {
            coefficient: 1.0_f64,
            exponent: 2.0,
        };
        let s = em_sum(&t, 1, Upper::Infinite, 64);
        assert!((s.value - BASEL).abs() < 1e-13);
        assert!(s.error < 1e-10);
    }

    #[test]
    fn zeta_three_halves() {
        let t = PowerTerm {
            coefficient: 1.0_f64,
            exponent: 1.5,
        };
        let s = em_sum(&t, 1, Upper::Infinite, 64);
        assert!((s.value - 2.612_375_348_685_488).abs() < 1e-12);
    }

    #[test]
    fn harmonic_partial_sums() {
        let t = PowerTerm {
            coefficient: 1.0_f64,
            exponent: 1.0,
        };
        let n = 1_000_000u64;
        let direct: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        let s = em_sum(&t, 1, Upper::Index(n), 64);
        assert!((s.value - direct).abs() < 1e-11);
        let short = em_sum(&t, 1, Upper::Index(10), 64);
        assert!((short.value - 2.928_968_253_968_254).abs() < 1e-14);
        // H_N - ln N -> γ
        let big = em_sum(&t, 1, Upper::Continuum(1000.0), 64);
        assert!((big.value - 1000.0 - 0.577_215_664_901_532_9).abs() < 1e-10);
    }

    #[test]
    fn gaussian_heat_sum() {
        // Σ_{n≥1} e^{-n²/λ²} = λ√π/2 - 1/2 + O(e^{-π²λ²})
        for &lambda in &[10.0_f64, 1000.0, 1e6] {
            let t = HeatPowerTerm {
                ln_rate: -2.0 * f64::ln(lambda),
                power: 2.0,
            };
            let s = em_sum(&t, 1, Upper::Infinite, 64);
            let want = lambda * std::f64::consts::PI.sqrt() / 2.0 - 0.5;
            assert!(((s.value - want) / want).abs() < 1e-12, "λ = {lambda}");
        }
    }

    #[test]
    fn geometric_heat_sum() {
        // Σ_{n≥1} e^{-n t} = 1/(e^t - 1)
        for &t in &[1e-6_f64, 1e-3, 0.5, 3.0] {
            let term = HeatPowerTerm {
                ln_rate: t.ln(),
                power: 1.0,
            };
            let s = em_sum(&term, 1, Upper::Infinite, 64);
            let want = 1.0 / t.exp_m1();
            assert!(((s.value - want) / want).abs() < 1e-11, "t = {t}");
        }
    }
}
