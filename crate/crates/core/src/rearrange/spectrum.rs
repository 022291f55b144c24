//! Discrete singular-value sequences: an explicit head plus an analytic tail.

use crate::error::{Error, InputCode, Result};
use crate::numeric::{em_sum, CompensatedSum, HeatPowerTerm, PowerTerm, Summed, Upper};
use crate::rearrange::tail::{OscHeatTerm, OscPowerTerm, Oscillation};
use crate::scalar::{from_count, lit, Real};

/// Terms summed explicitly before Euler–Maclaurin takes over.
const DIRECT_POWER: u64 = 64;
const DIRECT_OSCILLATING: u64 = 1000;

/// Largest count handled with integer bookkeeping; beyond it positions are
/// treated as a continuum.
pub(crate) const EXACT_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52

/// Analytic continuation of the head, starting at index `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumTail<S> {
    /// `μ_n = c·n^{-α}`.
    Power { coefficient: S, exponent: S },
    /// `μ_n = (c·(a + b·sin(ln ln n))/n)^e`.
    LogOscillating(Oscillation<S>),
}

impl<S: Real> SpectrumTail<S> {
    pub fn power(coefficient: S, exponent: S) -> Self {
        SpectrumTail::Power {
            coefficient,
            exponent,
        }
    }

    /// `ln μ(e^y)`.
    pub fn ln_value(&self, y: S) -> S {
        match *self {
            SpectrumTail::Power {
                coefficient,
                exponent,
            } => coefficient.ln() - exponent * y,
            SpectrumTail::LogOscillating(osc) => osc.ln_value(y),
        }
    }

    /// Abscissa of convergence of `Σ μ_n^s`.
    pub fn abscissa(&self) -> S {
        match *self {
            SpectrumTail::Power { exponent, .. } => S::one() / exponent,
            SpectrumTail::LogOscillating(osc) => S::one() / osc.exponent,
        }
    }

    fn powf(&self, p: S) -> Self {
        match *self {
            SpectrumTail::Power {
                coefficient,
                exponent,
            } => SpectrumTail::Power {
                coefficient: coefficient.powf(p),
                exponent: exponent * p,
            },
            SpectrumTail::LogOscillating(osc) => SpectrumTail::LogOscillating(Oscillation {
                exponent: osc.exponent * p,
                ..osc
            }),
        }
    }

    fn scale(&self, c: S) -> Self {
        match *self {
            SpectrumTail::Power {
                coefficient,
                exponent,
            } => SpectrumTail::Power {
                coefficient: coefficient * c,
                exponent,
            },
            SpectrumTail::LogOscillating(osc) => SpectrumTail::LogOscillating(Oscillation {
                coefficient: osc.coefficient * c.powf(S::one() / osc.exponent),
                ..osc
            }),
        }
    }

    fn validate(&self, start: u64) -> Result<()> {
        let bad = |msg: &str| Err(Error::input(InputCode::Parameter, None, msg.to_string()));
        match *self {
            SpectrumTail::Power {
                coefficient,
                exponent,
            } => {
                if !coefficient.is_finite() || !exponent.is_finite() {
                    return Err(Error::input(InputCode::NonFinite, None, "tail parameters must be finite"));
                }
                if coefficient <= S::zero() || exponent <= S::zero() {
                    return bad("tail coefficient and exponent must be positive");
                }
            }
            SpectrumTail::LogOscillating(osc) => {
                let all = [osc.coefficient, osc.offset, osc.amplitude, osc.exponent];
                if all.iter().any(|v| !v.is_finite()) {
                    return Err(Error::input(InputCode::NonFinite, None, "tail parameters must be finite"));
                }
                if osc.coefficient <= S::zero() || osc.exponent <= S::zero() {
                    return bad("tail coefficient and exponent must be positive");
                }
                if start < 3 {
                    return bad("oscillating tail must start at index 3 or later");
                }
                // monotone decay needs a - |b| > |b| / ln(start)
                let b = osc.amplitude.abs();
                let ln_start = from_count::<S>(start).ln();
                if osc.offset - b - b / ln_start <= S::zero() {
                    return bad("oscillating tail is not monotone from its start index");
                }
            }
        }
        Ok(())
    }
}

/// Position on the index axis: an exact count or, past `2^52`, `ln` of a count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Count<S> {
    Exact(u64),
    Continuum(S),
}

impl<S: Real> Count<S> {
    pub fn ln(&self) -> S {
        match *self {
            Count::Exact(0) => S::neg_infinity(),
            Count::Exact(n) => from_count::<S>(n).ln(),
            Count::Continuum(l) => l,
        }
    }
}

/// Non-increasing singular values `μ_1 ≥ μ_2 ≥ …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<S> {
    name: String,
    head: Vec<S>,
    tail: Option<SpectrumTail<S>>,
    prefix: Vec<S>,
}

impl<S: Real> Spectrum<S> {
    pub fn new(name: impl Into<String>, head: Vec<S>, tail: Option<SpectrumTail<S>>) -> Result<Self> {
        for (i, &v) in head.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::input(InputCode::NonFinite, Some(i + 1), format!("μ_{} is not finite", i + 1)));
            }
            if v < S::zero() {
                return Err(Error::input(InputCode::Negative, Some(i + 1), format!("μ_{} is negative", i + 1)));
            }
            if i > 0 && v > head[i - 1] {
                return Err(Error::input(
                    InputCode::NonMonotone,
                    Some(i + 1),
                    format!("μ_{} = {} exceeds μ_{} = {}", i + 1, v, i, head[i - 1]),
                ));
            }
        }
        let start = head.len() as u64 + 1;
        if let Some(t) = &tail {
            t.validate(start)?;
            if let Some(&last) = head.last() {
                let next = t.ln_value(from_count::<S>(start).ln()).exp();
                if last < next {
                    return Err(Error::input(
                        InputCode::TailContinuity,
                        Some(head.len()),
                        format!("μ_{} = {} is below the tail value {} at index {}", head.len(), last, next, start),
                    ));
                }
            }
        }
        let mut prefix = Vec::with_capacity(head.len() + 1);
        let mut acc = CompensatedSum::new();
        prefix.push(S::zero());
        for &v in &head {
            acc.add(v);
            prefix.push(acc.value());
        }
        Ok(Spectrum {
            name: name.into(),
            head,
            tail,
            prefix,
        })
    }

    /// Finite-rank spectrum.
    pub fn finite(name: impl Into<String>, head: Vec<S>) -> Result<Self> {
        Self::new(name, head, None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn head(&self) -> &[S] {
        &self.head
    }

    pub fn tail(&self) -> Option<&SpectrumTail<S>> {
        self.tail.as_ref()
    }

    /// Index of the first tail term.
    pub fn tail_start(&self) -> u64 {
        self.head.len() as u64 + 1
    }

    pub fn is_zero(&self) -> bool {
        self.tail.is_none() && self.head.iter().all(|&v| v == S::zero())
    }

    /// `ln μ_n` (1-based).
    pub fn ln_mu(&self, n: u64) -> S {
        debug_assert!(n >= 1);
        let n_us = n as usize;
        if n_us <= self.head.len() {
            return self.head[n_us - 1].ln();
        }
        match &self.tail {
            Some(t) => t.ln_value(from_count::<S>(n).ln()),
            None => S::neg_infinity(),
        }
    }

    pub fn mu(&self, n: u64) -> S {
        self.ln_mu(n).exp()
    }

    /// `ln μ` at continuous position `t`; `μ_n` occupies `(n-1, n]`.
    pub fn ln_value_at(&self, ln_t: S) -> S {
        if ln_t < lit(EXACT_LIMIT.ln()) {
            let t = ln_t.exp();
            let n = t.ceil().to_u64().unwrap_or(1).max(1);
            self.ln_mu(n)
        } else {
            match &self.tail {
                Some(tail) => tail.ln_value(ln_t),
                None => S::neg_infinity(),
            }
        }
    }

    /// Number of singular values strictly above `e^{ln_level}`.
    pub fn count_above(&self, ln_level: S) -> Count<S> {
        let level = ln_level.exp();
        let in_head = self.head.partition_point(|&v| v > level);
        if in_head < self.head.len() {
            return Count::Exact(in_head as u64);
        }
        let n0 = self.tail_start();
        let tail = match &self.tail {
            Some(t) => *t,
            None => return Count::Exact(in_head as u64),
        };
        let y0 = from_count::<S>(n0).ln();
        if tail.ln_value(y0) <= ln_level {
            return Count::Exact(n0 - 1);
        }
        let bound = match tail {
            SpectrumTail::Power {
                coefficient,
                exponent,
            } => (coefficient.ln() - ln_level) / exponent,
            SpectrumTail::LogOscillating(osc) => osc.solve_level(ln_level, y0),
        };
        if bound < lit(EXACT_LIMIT.ln()) {
            let mut n = bound.exp().ceil().to_u64().unwrap_or(n0).max(n0);
            while n > n0 && tail.ln_value(from_count::<S>(n).ln()) <= ln_level {
                n -= 1;
            }
            while tail.ln_value(from_count::<S>(n + 1).ln()) > ln_level {
                n += 1;
            }
            Count::Exact(n)
        } else {
            Count::Continuum(bound)
        }
    }

    fn tail_sum(&self, upper: Upper<S>) -> Summed<S> {
        let start = self.tail_start();
        match self.tail {
            None => Summed {
                value: S::zero(),
                error: S::zero(),
            },
            Some(SpectrumTail::Power {
                coefficient,
                exponent,
            }) => em_sum(
                &PowerTerm {
                    coefficient,
                    exponent,
                },
                start,
                upper,
                DIRECT_POWER,
            ),
            Some(SpectrumTail::LogOscillating(osc)) => em_sum(
                &OscPowerTerm {
                    shape: osc,
                    power: S::one(),
                },
                start,
                upper,
                DIRECT_OSCILLATING,
            ),
        }
    }

    /// `Σ_{n=1}^{upper} μ_n`.
    pub fn partial_sum(&self, upper: Count<S>) -> Summed<S> {
        let n_head = self.head.len() as u64;
        let head_total = self.prefix[self.head.len()];
        match upper {
            Count::Exact(k) if k <= n_head => Summed {
                value: self.prefix[k as usize],
                error: S::zero(),
            },
            Count::Exact(k) => {
                let t = self.tail_sum(Upper::Index(k));
                Summed {
                    value: head_total + t.value,
                    error: t.error,
                }
            }
            Count::Continuum(l) => {
                let t = self.tail_sum(Upper::Continuum(l));
                Summed {
                    value: head_total + t.value,
                    error: t.error,
                }
            }
        }
    }

    /// `Σ_n μ_n`, infinite unless the tail is summable.
    pub fn total(&self) -> S {
        let head_total = self.prefix[self.head.len()];
        match &self.tail {
            None => head_total,
            Some(t) if t.abscissa() >= S::one() => S::infinity(),
            Some(_) => head_total + self.tail_sum(Upper::Infinite).value,
        }
    }

    /// `∫_0^t μ` with `μ_n` spread over `(n-1, n]`.
    pub fn partial_integral_ln(&self, ln_t: S) -> S {
        if ln_t == S::neg_infinity() {
            return S::zero();
        }
        if ln_t == S::infinity() {
            return self.total();
        }
        if ln_t < lit(EXACT_LIMIT.ln()) {
            let t = ln_t.exp();
            let k = t.floor();
            let frac = t - k;
            let k = k.to_u64().unwrap_or(0);
            let whole = self.partial_sum(Count::Exact(k)).value;
            if frac > S::zero() {
                whole + frac * self.mu(k + 1)
            } else {
                whole
            }
        } else if self.tail.is_none() {
            self.prefix[self.head.len()]
        } else {
            self.partial_sum(Count::Continuum(ln_t)).value
        }
    }

    /// `Σ μ_n^s` for `s > 0`.
    pub fn power_sum(&self, s: S, margin: S) -> Result<Summed<S>> {
        if !(s > S::zero()) || !s.is_finite() {
            return Err(Error::Domain(format!("power sum needs a finite s > 0, got {s}")));
        }
        let mut acc = CompensatedSum::new();
        for &v in &self.head {
            if v > S::zero() {
                acc.add(v.powf(s));
            }
        }
        let tail = match self.tail {
            None => Summed {
                value: S::zero(),
                error: S::zero(),
            },
            Some(t) => {
                let abscissa = t.abscissa();
                if s - abscissa < margin {
                    return Err(Error::Divergent {
                        s: s.to_f64().unwrap_or(f64::NAN),
                        abscissa: abscissa.to_f64().unwrap_or(f64::NAN),
                    });
                }
                let start = self.tail_start();
                match t {
                    SpectrumTail::Power {
                        coefficient,
                        exponent,
                    } => em_sum(
                        &PowerTerm {
                            coefficient: (s * coefficient.ln()).exp(),
                            exponent: exponent * s,
                        },
                        start,
                        Upper::Infinite,
                        DIRECT_POWER,
                    ),
                    SpectrumTail::LogOscillating(osc) => em_sum(
                        &OscPowerTerm { shape: osc, power: s },
                        start,
                        Upper::Infinite,
                        DIRECT_OSCILLATING,
                    ),
                }
            }
        };
        acc.add(tail.value);
        Ok(Summed {
            value: acc.value(),
            error: tail.error,
        })
    }

    /// `Σ exp(-t·μ_n^{-q})` over non-zero singular values.
    pub fn heat_sum(&self, q: S, ln_t: S) -> Summed<S> {
        let floor = lit::<S>(-700.0);
        let mut acc = CompensatedSum::new();
        let mut dropped = 0usize;
        for &v in &self.head {
            if v > S::zero() {
                let e = -(ln_t - q * v.ln()).exp();
                if e < floor {
                    dropped += 1;
                } else {
                    acc.add(e.exp());
                }
            }
        }
        let start = self.tail_start();
        let tail = match self.tail {
            None => Summed {
                value: S::zero(),
                error: S::zero(),
            },
            Some(SpectrumTail::Power {
                coefficient,
                exponent,
            }) => em_sum(
                &HeatPowerTerm {
                    ln_rate: ln_t - q * coefficient.ln(),
                    power: q * exponent,
                },
                start,
                Upper::Infinite,
                DIRECT_POWER,
            ),
            Some(SpectrumTail::LogOscillating(osc)) => em_sum(
                &OscHeatTerm { shape: osc, ln_t, q },
                start,
                Upper::Infinite,
                DIRECT_OSCILLATING,
            ),
        };
        acc.add(tail.value);
        Summed {
            value: acc.value(),
            error: tail.error + lit::<S>(dropped as f64) * floor.exp(),
        }
    }

    /// Pointwise power `μ_n^p`.
    pub fn powf(&self, p: S) -> Result<Self> {
        if !(p > S::zero()) || !p.is_finite() {
            return Err(Error::Domain(format!("power must be finite and positive, got {p}")));
        }
        let head = self.head.iter().map(|&v| if v > S::zero() { (p * v.ln()).exp() } else { v }).collect();
        Self::new(self.name.clone(), head, self.tail.map(|t| t.powf(p)))
    }

    /// `c·μ` for `c > 0`.
    pub fn scale(&self, c: S) -> Result<Self> {
        if !(c > S::zero()) || !c.is_finite() {
            return Err(Error::Domain(format!("scale must be finite and positive, got {c}")));
        }
        let head = self.head.iter().map(|&v| v * c).collect();
        Self::new(self.name.clone(), head, self.tail.map(|t| t.scale(c)))
    }

    pub fn abscissa(&self) -> S {
        self.tail.map(|t| t.abscissa()).unwrap_or_else(S::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(head: usize) -> Spectrum<f64> {
        let h = (1..=head).map(|n| 1.0 / n as f64).collect();
        Spectrum::new("harmonic", h, Some(SpectrumTail::power(1.0, 1.0))).unwrap()
    }

    #[test]
    fn rejects_bad_heads() {
        let e = Spectrum::finite("x", vec![3.0, 2.0, 2.5]).unwrap_err();
        assert_eq!(e.code(), Some(InputCode::NonMonotone));
        assert_eq!(e.index(), Some(3));
        let e = Spectrum::finite("x", vec![1.0, -1.0]).unwrap_err();
        assert_eq!(e.code(), Some(InputCode::Negative));
        let e = Spectrum::new(
            "x",
            vec![1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.25, 0.2],
            Some(SpectrumTail::power(1.0, 0.5)),
        )
        .unwrap_err();
        assert_eq!(e.code(), Some(InputCode::TailContinuity));
        assert_eq!(e.index(), Some(10));
    }

    #[test]
    fn counts_above_level() {
        let h = harmonic(5);
        // μ_n = 1/n > 1/10.5  ⟺  n ≤ 10
        assert_eq!(h.count_above((1.0f64 / 10.5).ln()), Count::Exact(10));
        assert_eq!(h.count_above(0.0), Count::Exact(0));
        assert_eq!(h.count_above((0.1f64).ln()), Count::Exact(9));
        match h.count_above(-100.0) {
            Count::Continuum(l) => assert!((l - 100.0).abs() < 1e-12),
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn partial_integral_bridges_pieces() {
        let h = harmonic(3);
        assert!((h.partial_integral_ln(2f64.ln()) - 1.5).abs() < 1e-15);
        assert!((h.partial_integral_ln(2.5f64.ln()) - (1.5 + 0.5 / 3.0)).abs() < 1e-15);
        let direct = crate::numeric::sum((1..=1000).map(|n| 1.0 / n as f64));
        assert!((h.partial_integral_ln(1000f64.ln()) - direct).abs() < 1e-12);
    }

    #[test]
    fn power_sum_and_divergence() {
        let h = harmonic(10);
        let z2 = h.power_sum(2.0, 1e-8).unwrap();
        assert!((z2.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert!(matches!(h.power_sum(1.0, 1e-8), Err(Error::Divergent { .. })));
        let single = Spectrum::finite("one", vec![3.0]).unwrap();
        assert_eq!(single.power_sum(2.0, 1e-8).unwrap().value, 9.0);
    }

    #[test]
    fn heat_sum_single_value() {
        let single = Spectrum::finite("one", vec![1.0f64]).unwrap();
        assert!((single.heat_sum(2.0, 0.0).value - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn powf_maps_tail() {
        let root: Spectrum<f64> = Spectrum::new("p2", vec![], Some(SpectrumTail::power(1.0, 0.5))).unwrap();
        let sq = root.powf(2.0).unwrap();
        assert!((sq.mu(7) - 1.0 / 7.0).abs() < 1e-15);
    }
}
