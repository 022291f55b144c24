//! Marcinkiewicz norms, the `F_ψ` quasinorm and fundamental functions.
//!
//! On a piece where `μ` is constant, `t ↦ ∫_0^t μ` is affine; an affine
//! function over a concave `ψ` is quasi-convex, so its supremum over the piece
//! sits at an endpoint.  The same holds for `t·μ_t/ψ(t)`, which is
//! non-decreasing on every piece.  Suprema over explicit data are therefore
//! exact; analytic tails are sampled and closed by their limit at infinity.

use crate::rearrange::{Growth, SingularValues};
use crate::scalar::{lit, Real};
use crate::spaces::psi::{PsiFunction, PsiKind};

/// A supremum with where it was attained.
#[derive(Debug, Clone, PartialEq)]
pub struct Supremum<S> {
    pub value: S,
    /// `ln t` of the maximiser; `-∞` for the limit at `0⁺`, `+∞` for the limit at infinity.
    pub ln_witness: S,
    /// The ratio at each explicit breakpoint, as `(ln t, ratio)`.
    pub witnesses: Vec<(S, S)>,
    /// Set when the data was cut off while the ratio was still climbing.
    pub diverging: bool,
}

/// Kinks inspected before declaring a truncated supremum divergent.
const DIVERGENCE_RUN: usize = 8;

#[derive(Clone, Copy, PartialEq)]
enum Ratio {
    /// `∫_0^t μ / w(t)`.
    Integral,
    /// `t·μ_t / w(t)`.
    Product,
}

struct Denominator<'a, S> {
    ln_w: &'a dyn Fn(S) -> S,
    growth: Growth<S>,
}

fn ln_ratio_at<S: Real>(x: &SingularValues<S>, kind: Ratio, den: &Denominator<'_, S>, ln_t: S) -> S {
    let ln_num = match kind {
        Ratio::Integral => x.partial_integral_ln(ln_t).ln(),
        Ratio::Product => ln_t + x.ln_value_at(ln_t),
    };
    if ln_num == S::neg_infinity() {
        return S::neg_infinity();
    }
    ln_num - (den.ln_w)(ln_t)
}

fn supremum<S: Real>(
    x: &SingularValues<S>,
    kind: Ratio,
    den: &Denominator<'_, S>,
    at_zero: S,
    ln_lo: Option<S>,
) -> Supremum<S> {
    let mut best = S::neg_infinity();
    let mut arg = S::neg_infinity();
    let consider = |ln_t: S, value: S, best: &mut S, arg: &mut S| {
        if value > *best || value.is_nan() {
            *best = if value.is_nan() { S::infinity() } else { value };
            *arg = ln_t;
        }
    };
    match ln_lo {
        None => consider(S::neg_infinity(), at_zero, &mut best, &mut arg),
        Some(lo) => consider(lo, ln_ratio_at(x, kind, den, lo).exp(), &mut best, &mut arg),
    }
    let lo = ln_lo.unwrap_or_else(S::neg_infinity);
    let mut witnesses = Vec::new();
    for (ln_t, _) in x.kinks() {
        if ln_t < lo {
            continue;
        }
        let r = ln_ratio_at(x, kind, den, ln_t).exp();
        witnesses.push((ln_t, r));
        consider(ln_t, r, &mut best, &mut arg);
    }
    let mut samples = x.tail_samples();
    if let SingularValues::Function(f) = x {
        if f.tail().is_some() && f.ln_end() < S::zero() {
            let step = lit::<S>(std::f64::consts::LN_10 / 32.0);
            let mut u = f.ln_end().max(lit(-30.0));
            while u < S::zero() {
                samples.push(u);
                u = u + step;
            }
        }
    }
    for ln_t in samples {
        if ln_t >= lo {
            consider(ln_t, ln_ratio_at(x, kind, den, ln_t).exp(), &mut best, &mut arg);
        }
    }
    if x.has_tail() {
        let g = match kind {
            Ratio::Integral => x.integral_growth(),
            Ratio::Product => x.product_growth(),
        };
        consider(S::infinity(), g.ratio_limit(&den.growth), &mut best, &mut arg);
    }
    if best == S::neg_infinity() {
        best = S::zero();
    }
    let mut diverging = false;
    if x.truncation_horizon().is_some() && witnesses.len() > 2 {
        let n = witnesses.len();
        let run = DIVERGENCE_RUN.min(n - 1);
        let climbing = witnesses[n - 1 - run..].windows(2).all(|w| w[1].1 > w[0].1);
        if climbing && arg == witnesses[n - 1].0 {
            diverging = true;
            best = S::infinity();
        }
    }
    Supremum {
        value: best,
        ln_witness: arg,
        witnesses,
        diverging,
    }
}

fn psi_denominator<S: Real>(psi: &PsiFunction<S>) -> (impl Fn(S) -> S + '_, Growth<S>) {
    (move |u: S| psi.ln_value(u), psi.growth())
}

/// `v_1 / ψ'(0⁺)`, the limit at `0⁺` shared by both ratios.
fn limit_at_zero<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>) -> S {
    let v = x.ln_first_value().exp();
    if v == S::zero() {
        S::zero()
    } else {
        v / psi.slope_at_zero()
    }
}

/// `a(x, t) = (1/ψ(t)) ∫_0^t x*`, at `t = e^{ln_t}`.
pub fn weighted_mean_ln<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>, ln_t: S) -> S {
    let i = x.partial_integral_ln(ln_t);
    if i == S::zero() {
        return S::zero();
    }
    (i.ln() - psi.ln_value(ln_t)).exp()
}

pub fn weighted_mean<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>, t: S) -> S {
    weighted_mean_ln(x, psi, t.ln())
}

/// `‖x‖_{M(ψ)} = sup_{t>0} a(x, t)`.
pub fn marcinkiewicz_norm<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>) -> Supremum<S> {
    let (ln_w, growth) = psi_denominator(psi);
    let den = Denominator { ln_w: &ln_w, growth };
    supremum(x, Ratio::Integral, &den, limit_at_zero(x, psi), None)
}

/// `sup_{t ≥ e^{ln_lo}} a(x, t)`.
pub fn marcinkiewicz_norm_from<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>, ln_lo: S) -> Supremum<S> {
    let (ln_w, growth) = psi_denominator(psi);
    let den = Denominator { ln_w: &ln_w, growth };
    supremum(x, Ratio::Integral, &den, S::zero(), Some(ln_lo))
}

/// `sup_{u ≥ 1} (1/ln(1+u)) ∫_0^u x*`, the normalisation that skips `[0, 1]`.
pub fn log_average_norm<S: Real>(x: &SingularValues<S>) -> Supremum<S> {
    marcinkiewicz_norm_from(x, &PsiFunction::log1p(), S::zero())
}

/// `F_ψ(x) = sup_{t>0} t·x*(t)/ψ(t)`.
pub fn quasinorm_f<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>) -> Supremum<S> {
    let (ln_w, growth) = psi_denominator(psi);
    let den = Denominator { ln_w: &ln_w, growth };
    supremum(x, Ratio::Product, &den, limit_at_zero(x, psi), None)
}

/// `sup_s s·μ_s`, finite exactly on the small ideal.
pub fn small_ideal_constant<S: Real>(x: &SingularValues<S>) -> Supremum<S> {
    let ln_w = |_: S| S::zero();
    let den = Denominator {
        ln_w: &ln_w,
        growth: Growth::constant(S::one()),
    };
    supremum(x, Ratio::Product, &den, S::zero(), None)
}

/// `φ(t) = ‖χ_{[0,t)}‖_{M(ψ)} = sup_s min(s, t)/ψ(s)`.
///
/// For concave `ψ` both `s/ψ(s)` (for `s ≤ t`) and `t/ψ(s)` (for `s ≥ t`) peak at
/// `s = t`.  Without concavity near the origin (`log²`) the supremum is infinite.
pub fn fundamental_function<S: Real>(psi: &PsiFunction<S>, t: S) -> S {
    if !(t > S::zero()) {
        return S::zero();
    }
    if matches!(psi.kind(), PsiKind::LogSq) {
        return S::infinity();
    }
    (t.ln() - psi.ln_value(t.ln())).exp()
}

/// Fundamental function of the `p`-convexification, `φ(t)^{1/p}`.
pub fn fundamental_function_convexified<S: Real>(psi: &PsiFunction<S>, t: S, p: S) -> S {
    fundamental_function(psi, t).powf(S::one() / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::{ContinuousTail, Spectrum, SpectrumTail, StepFunction};
    use std::f64::consts::LN_2;

    fn small() -> SingularValues<f64> {
        let f = StepFunction::from_log_values(vec![], vec![], 0.0)
            .unwrap()
            .with_tail(ContinuousTail {
                coefficient: 1.0,
                shift: 1.0,
                exponent: 1.0,
            })
            .unwrap();
        SingularValues::function(f).unwrap()
    }

    fn indicator() -> SingularValues<f64> {
        SingularValues::function(StepFunction::new(vec![0.0], vec![1.0], 0.0).unwrap()).unwrap()
    }

    fn harmonic() -> SingularValues<f64> {
        Spectrum::new("h", vec![1.0], Some(SpectrumTail::power(1.0, 1.0))).unwrap().into()
    }

    #[test]
    fn weighted_means() {
        let psi = PsiFunction::psi1();
        for &t in &[1.0, 7.5, 1e6] {
            assert!((weighted_mean(&small(), &psi, t) - 1.0).abs() < 1e-12);
        }
        let gamma = 0.577_215_664_901_532_9;
        let v = weighted_mean(&harmonic(), &psi, 1e6);
        let oracle = (1e6f64.ln() + gamma + 0.5e-6) / 1e6f64.ln_1p();
        assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
        assert!((v - 1.0418).abs() < 1e-4);
    }

    #[test]
    fn norms_of_catalog_members() {
        let psi = PsiFunction::psi1();
        let n = marcinkiewicz_norm(&small(), &psi);
        assert!((n.value - 1.0 / LN_2).abs() < 1e-12);
        assert_eq!(n.ln_witness, f64::NEG_INFINITY);
        let n = marcinkiewicz_norm(&indicator(), &psi);
        assert!((n.value - 1.0 / LN_2).abs() < 1e-12);
        let zero = SingularValues::from(Spectrum::finite("0", vec![0.0, 0.0]).unwrap());
        assert_eq!(marcinkiewicz_norm(&zero, &psi).value, 0.0);
        assert_eq!(quasinorm_f(&zero, &psi).value, 0.0);
    }

    #[test]
    fn quasinorms() {
        let f = quasinorm_f(&small(), &PsiFunction::identity());
        assert!((f.value - 1.0).abs() < 1e-12);
        let f = quasinorm_f(&indicator(), &PsiFunction::psi1());
        assert!((f.value - 1.0 / LN_2).abs() < 1e-12);
        let c = small_ideal_constant(&harmonic());
        assert!((c.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fundamental_functions() {
        assert_eq!(fundamental_function(&PsiFunction::<f64>::identity(), 3.0), 1.0);
        let psi = PsiFunction::psi1();
        for &t in &[1e3, 1e8, 1e15] {
            let r = fundamental_function(&psi, t) / (t / f64::ln_1p(t));
            assert!((r - 1.0).abs() < 1e-12);
        }
        let e1 = std::f64::consts::E - 1.0;
        let v = fundamental_function_convexified(&PsiFunction::log1p(), e1, 2.0);
        assert!((v - 1.3108).abs() < 1e-4);
        assert_eq!(fundamental_function(&PsiFunction::<f64>::log_sq(), 2.0), f64::INFINITY);
    }
}
