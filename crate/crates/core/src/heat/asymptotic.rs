//! Small-`t` power law of the heat trace and the residue it predicts.

use crate::error::{Error, Result};
use crate::means::{dixmier_estimate, DixmierConfig, LimitEstimate};
use crate::numeric::{gamma, least_squares};
use crate::rearrange::SingularValues;
use crate::scalar::{lit, Real};
use crate::spaces::PsiFunction;
use crate::zeta::{residue_estimate, ZetaConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct HeatFitConfig<S> {
    /// `t = 2^{-k}` for `k` in this range.
    pub k_min: u32,
    pub k_max: u32,
    pub q: S,
    /// Fraction of the (small-`t` end of the) grid used for the fit.
    pub fit_fraction: S,
    /// Largest accepted residual of the log-log fit.
    pub max_residual: S,
    /// `p̂` is snapped to the nearest half-integer when this close to it.
    pub snap: S,
    pub zeta: ZetaConfig<S>,
    pub dixmier: DixmierConfig<S>,
}

impl<S: Real> Default for HeatFitConfig<S> {
    fn default() -> Self {
        HeatFitConfig {
            k_min: 4,
            k_max: 16,
            q: lit(2.0),
            fit_fraction: lit(0.4),
            max_residual: lit(0.01),
            snap: lit(0.02),
            zeta: ZetaConfig::default(),
            dixmier: DixmierConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatFit<S> {
    pub accepted: bool,
    /// `C` in `τ(e^{-t T^{-q}}) ≈ C t^{-p/q}`, refitted with the snapped exponent.
    pub c: S,
    /// Raw fitted exponent.
    pub p_hat: S,
    /// Exponent used for the cross-checks.
    pub p_used: S,
    /// Largest absolute residual of the log-log fit.
    pub residual: S,
    /// `q C / Γ(p/q)`.
    pub predicted_residue: Option<S>,
    pub residue: Option<LimitEstimate<S>>,
    /// `p · τ_ω(x^p)` with `ψ₁`.
    pub dixmier: Option<LimitEstimate<S>>,
    pub notes: Vec<String>,
}

fn snap<S: Real>(p: S, within: S) -> S {
    let two = lit::<S>(2.0);
    let near = (p * two).round() / two;
    if (p - near).abs() <= within {
        near
    } else {
        p
    }
}

pub fn heat_asymptotic_fit<S: Real>(x: &SingularValues<S>, cfg: &HeatFitConfig<S>) -> Result<HeatFit<S>> {
    if cfg.k_max <= cfg.k_min + 2 {
        return Err(Error::GridTooShort("heat fit needs at least three grid points".into()));
    }
    let mut ln_t = Vec::new();
    let mut ln_tau = Vec::new();
    for k in cfg.k_min..=cfg.k_max {
        let l = -S::LN_2() * lit::<S>(k as f64);
        let h = super::heat_trace_ln(x, cfg.q, l)?;
        if !(h.value > S::zero()) {
            continue;
        }
        ln_t.push(l);
        ln_tau.push(h.value.ln());
    }
    let total = S::from_usize(ln_t.len()).unwrap();
    let take = (total * cfg.fit_fraction).ceil().to_usize().unwrap_or(0).max(3);
    let mut notes = Vec::new();
    if ln_t.len() < take {
        notes.push("heat trace vanishes on the grid".to_string());
        return Ok(rejected(notes));
    }
    let start = ln_t.len() - take;
    let (xs, ys) = (&ln_t[start..], &ln_tau[start..]);
    let coef = least_squares(&[vec![S::one(); take], xs.to_vec()], ys)
        .ok_or_else(|| Error::Domain("singular heat fit".into()))?;
    let p_hat = -coef[1] * cfg.q;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(&a, &b)| (b - coef[0] - coef[1] * a).abs())
        .fold(S::zero(), S::max);
    if p_hat < lit(0.05) || residual > cfg.max_residual {
        notes.push(format!("no power law: exponent {p_hat}, residual {residual}"));
        let mut fit = rejected(notes);
        fit.p_hat = p_hat;
        fit.residual = residual;
        fit.c = coef[0].exp();
        return Ok(fit);
    }
    let p_used = snap(p_hat, cfg.snap);
    // with the exponent fixed the intercept is the mean of ln τ + (p/q) ln t
    let ln_c = xs
        .iter()
        .zip(ys)
        .map(|(&a, &b)| b + p_used / cfg.q * a)
        .fold(S::zero(), |s, v| s + v)
        / S::from_usize(take).unwrap();
    let c = ln_c.exp();
    let predicted_residue = Some(cfg.q * c / gamma(p_used / cfg.q)?);
    let residue = match residue_estimate(x, p_used, &cfg.zeta) {
        Ok(r) => Some(r.estimate),
        Err(e) => {
            notes.push(format!("residue unavailable: {e}"));
            None
        }
    };
    let dixmier = match x
        .powf(p_used)
        .and_then(|xp| dixmier_estimate(&xp, &PsiFunction::psi1(), &cfg.dixmier))
    {
        Ok(d) => Some(d.scaled(p_used)),
        Err(e) => {
            notes.push(format!("Dixmier side unavailable: {e}"));
            None
        }
    };
    Ok(HeatFit {
        accepted: true,
        c,
        p_hat,
        p_used,
        residual,
        predicted_residue,
        residue,
        dixmier,
        notes,
    })
}

fn rejected<S: Real>(notes: Vec<String>) -> HeatFit<S> {
    HeatFit {
        accepted: false,
        c: S::nan(),
        p_hat: S::nan(),
        p_used: S::nan(),
        residual: S::nan(),
        predicted_residue: None,
        residue: None,
        dixmier: None,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::{Spectrum, SpectrumTail};

    fn power(alpha: f64) -> SingularValues<f64> {
        Spectrum::new("p", vec![1.0], Some(SpectrumTail::power(1.0, alpha))).unwrap().into()
    }

    #[test]
    fn harmonic_gaussian_sum() {
        let f = heat_asymptotic_fit(&power(1.0), &HeatFitConfig::default()).unwrap();
        assert!(f.accepted);
        assert!((f.p_hat - 1.0).abs() < 0.02, "{}", f.p_hat);
        let c = std::f64::consts::PI.sqrt() / 2.0;
        assert!((f.c / c - 1.0).abs() < 0.02, "{}", f.c);
        let r = f.predicted_residue.unwrap();
        assert!((r - 1.0).abs() < 0.02, "{r}");
        assert!((f.residue.unwrap().value.unwrap() - r).abs() < 0.02);
    }

    #[test]
    fn exponential_sum() {
        let f = heat_asymptotic_fit(&power(0.5), &HeatFitConfig::default()).unwrap();
        assert!(f.accepted && f.p_used == 2.0);
        assert!((f.predicted_residue.unwrap() - 2.0).abs() < 0.04);
    }

    #[test]
    fn single_value_is_rejected() {
        let one: SingularValues<f64> = Spectrum::finite("one", vec![1.0]).unwrap().into();
        let f = heat_asymptotic_fit(&one, &HeatFitConfig::default()).unwrap();
        assert!(!f.accepted && f.predicted_residue.is_none());
    }
}
