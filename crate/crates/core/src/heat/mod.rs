//! Heat traces `τ(e^{-t T^{-q}})`, their profiles and the `Γ`-factor identity
//! linking them to zeta limits and Dixmier traces.

pub mod asymptotic;
pub mod karamata;

use rayon::prelude::*;

use crate::error::{Error, InputCode, Result};
use crate::means::{dixmier_estimate, limit_estimate, DixmierConfig, Domain, LimitConfig, LimitEstimate, Model, SampledFunction};
use crate::numeric::Summed;
use crate::rearrange::SingularValues;
use crate::scalar::{lit, Real};
use crate::spaces::PsiFunction;
use crate::zeta::{zeta_limit, ZetaConfig};

pub use crate::numeric::gamma;
pub use crate::spaces::small_ideal_constant;
pub use asymptotic::{heat_asymptotic_fit, HeatFit, HeatFitConfig};
pub use karamata::{karamata_limit, karamata_transform, BetaFunction, KaramataConfig, KaramataReport};

/// `Σ exp(-t μ_n^{-q})` (kernel excluded) at `t = e^{ln_t}`.
pub fn heat_trace_ln<S: Real>(x: &SingularValues<S>, q: S, ln_t: S) -> Result<Summed<S>> {
    if !(q > S::zero()) || !q.is_finite() {
        return Err(Error::input(InputCode::Parameter, None, format!("heat trace needs q > 0, got {q}")));
    }
    if !ln_t.is_finite() {
        return Err(Error::input(InputCode::Parameter, None, "heat trace needs 0 < t < inf"));
    }
    Ok(x.heat_trace_ln(q, ln_t))
}

pub fn heat_trace<S: Real>(x: &SingularValues<S>, q: S, t: S) -> Result<Summed<S>> {
    if !(t > S::zero()) {
        return Err(Error::input(InputCode::Parameter, None, format!("heat trace needs t > 0, got {t}")));
    }
    heat_trace_ln(x, q, t.ln())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatConfig<S> {
    /// `ln λ` grid.
    pub ln_lambda: Vec<S>,
    pub limit: LimitConfig<S>,
    /// On truncated data, `λ` is kept small enough that the smallest stored
    /// value contributes less than `e^{-cutoff}`.
    pub cutoff: S,
}

/// Two points per octave from 2 to `2^24`.
pub fn default_lambda_grid<S: Real>() -> Vec<S> {
    (2..=48).map(|k| S::LN_2() * lit::<S>(k as f64 / 2.0)).collect()
}

impl<S: Real> Default for HeatConfig<S> {
    fn default() -> Self {
        HeatConfig {
            ln_lambda: default_lambda_grid(),
            limit: LimitConfig::new(Model::Inverse).with_fraction(lit(0.4)),
            cutoff: lit::<S>(30.0).ln(),
        }
    }
}

impl<S: Real> HeatConfig<S> {
    pub fn with_tol(mut self, tol: S) -> Self {
        self.limit.tol = tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatProfile<S> {
    pub p: S,
    pub q: S,
    pub ln_lambda: Vec<S>,
    /// `F(λ) = λ^{-1} τ(exp(-T^{-q} λ^{-q/p}))`.
    pub values: Vec<S>,
    pub errors: Vec<S>,
}

pub fn heat_profile<S: Real>(x: &SingularValues<S>, p: S, q: S, cfg: &HeatConfig<S>) -> Result<HeatProfile<S>> {
    if !(p > S::zero()) || !p.is_finite() {
        return Err(Error::input(InputCode::Parameter, None, format!("heat profile needs p > 0, got {p}")));
    }
    let mut grid = cfg.ln_lambda.clone();
    if let (Some(_), SingularValues::Function(f)) = (x.truncation_horizon(), x) {
        if let Some(&lv) = f.log_values().iter().rev().find(|v| v.is_finite()) {
            let cap = -(p / q) * (cfg.cutoff + q * lv);
            grid.retain(|&l| l <= cap);
        }
    }
    let rows: Vec<Result<(S, S)>> = grid
        .par_iter()
        .map(|&l| {
            let h = heat_trace_ln(x, q, -(q / p) * l)?;
            let inv = (-l).exp();
            Ok((inv * h.value, inv * h.error))
        })
        .collect();
    let mut values = Vec::with_capacity(rows.len());
    let mut errors = Vec::with_capacity(rows.len());
    for r in rows {
        let (v, e) = r?;
        values.push(v);
        errors.push(e);
    }
    Ok(HeatProfile {
        p,
        q,
        ln_lambda: grid,
        values,
        errors,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem51Report<S> {
    /// `lim F(λ)` as `λ → ∞`.
    pub heat: LimitEstimate<S>,
    pub profile: HeatProfile<S>,
    /// `(p/q) Γ(p/q)`.
    pub gamma_factor: S,
    /// `(1/q) Γ(p/q) · lim (1/r) ζ(p + 1/r)`.
    pub zeta: Option<LimitEstimate<S>>,
    /// `(p/q) Γ(p/q) · τ_ω(x^p)` with `ψ₁`.
    pub dixmier: Option<LimitEstimate<S>>,
    pub max_distance: S,
    pub band_only: bool,
    pub pass: bool,
    pub notes: Vec<String>,
}

pub fn heat_profile_limit<S: Real>(
    x: &SingularValues<S>,
    p: S,
    q: S,
    hcfg: &HeatConfig<S>,
    zcfg: &ZetaConfig<S>,
    dcfg: &DixmierConfig<S>,
) -> Result<Theorem51Report<S>> {
    if !(p >= S::one()) {
        return Err(Error::input(InputCode::Parameter, None, format!("heat profile limit needs p >= 1, got {p}")));
    }
    let profile = heat_profile(x, p, q, hcfg)?;
    let curve = SampledFunction::new(Domain::HalfLine, profile.ln_lambda.clone(), profile.values.clone())?;
    let heat = limit_estimate(&curve, &hcfg.limit)?;
    let gamma_pq = gamma(p / q)?;
    let gamma_factor = p / q * gamma_pq;
    let mut notes = Vec::new();
    let zeta = match zeta_limit(x, p, zcfg) {
        Ok(z) => Some(z.estimate.scaled(gamma_pq / q)),
        Err(e) => {
            notes.push(format!("zeta side unavailable: {e}"));
            None
        }
    };
    let dixmier = match x.powf(p).and_then(|xp| dixmier_estimate(&xp, &PsiFunction::psi1(), dcfg)) {
        Ok(d) => Some(d.scaled(gamma_factor)),
        Err(e) => {
            notes.push(format!("Dixmier side unavailable: {e}"));
            None
        }
    };
    let mut max_distance = S::zero();
    let mut band_only = !heat.converged;
    let mut tol = hcfg.limit.tol;
    for other in zeta.iter().chain(dixmier.iter()) {
        max_distance = max_distance.max(heat.distance(other));
        band_only |= !other.converged;
        tol = tol.max(other.tol);
    }
    if let (Some(z), Some(d)) = (&zeta, &dixmier) {
        max_distance = max_distance.max(z.distance(d));
    }
    let pass = (zeta.is_some() || dixmier.is_some()) && max_distance <= tol + hcfg.limit.tol;
    Ok(Theorem51Report {
        heat,
        profile,
        gamma_factor,
        zeta,
        dixmier,
        max_distance,
        band_only,
        pass,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::{Spectrum, SpectrumTail};

    fn power(alpha: f64) -> SingularValues<f64> {
        Spectrum::new("p", vec![1.0], Some(SpectrumTail::power(1.0, alpha))).unwrap().into()
    }

    #[test]
    fn traces() {
        let one: SingularValues<f64> = Spectrum::finite("one", vec![1.0]).unwrap().into();
        let v = heat_trace(&one, 2.0, 1.0).unwrap().value;
        assert!((v - (-1.0f64).exp()).abs() < 1e-16);
        let direct: f64 = (1..10).map(|n| (-(n * n) as f64).exp()).sum();
        let v = heat_trace(&power(1.0), 2.0, 1.0).unwrap().value;
        assert!((v - direct).abs() < 1e-14 && (v - 0.386_319).abs() < 1e-6);
        let with_zero: SingularValues<f64> = Spectrum::finite("z", vec![1.0, 0.0]).unwrap().into();
        assert_eq!(heat_trace(&with_zero, 2.0, 1.0).unwrap().value, heat_trace(&one, 2.0, 1.0).unwrap().value);
        assert!(heat_trace(&one, 0.0, 1.0).is_err());
        assert!(heat_trace(&one, 2.0, 0.0).is_err());
    }

    #[test]
    fn gamma_factor_for_harmonic() {
        let r = heat_profile_limit(
            &power(1.0),
            1.0,
            2.0,
            &HeatConfig::default(),
            &ZetaConfig::default(),
            &DixmierConfig::default(),
        )
        .unwrap();
        let half_sqrt_pi = std::f64::consts::PI.sqrt() / 2.0;
        assert!((r.heat.value.unwrap() - half_sqrt_pi).abs() < 1e-3, "{:?}", r.heat.value);
        assert!(r.pass, "{r:?}");
    }
}
