//! Zeta functions `ζ(s) = Σ μ_n^s` and the limits `(1/r) ζ(p + 1/r)` as `r → ∞`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::means::{dixmier_estimate, limit_estimate, DixmierConfig, Domain, LimitConfig, LimitEstimate, Model, SampledFunction};
use crate::numeric::Summed;
use crate::rearrange::SingularValues;
use crate::scalar::{lit, Real};
use crate::spaces::{marcinkiewicz_norm, PsiFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaConfig<S> {
    pub r_grid: Vec<S>,
    /// Required gap between `s` and the abscissa of convergence.
    pub margin: S,
    /// On truncated data only `r ≤ ln t_end / (horizon_factor·p)` is used.
    pub horizon_factor: S,
    pub limit: LimitConfig<S>,
}

/// 19 points, geometric from 2 to `2^20`.
pub fn default_r_grid<S: Real>() -> Vec<S> {
    (0..19)
        .map(|k| lit::<S>(2.0) * lit::<S>(2.0).powf(lit::<S>(19.0 * k as f64 / 18.0)))
        .collect()
}

impl<S: Real> Default for ZetaConfig<S> {
    fn default() -> Self {
        ZetaConfig {
            r_grid: default_r_grid(),
            margin: lit(1e-8),
            horizon_factor: lit(10.0),
            limit: LimitConfig::new(Model::Inverse),
        }
    }
}

impl<S: Real> ZetaConfig<S> {
    pub fn with_tol(mut self, tol: S) -> Self {
        self.limit.tol = tol;
        self
    }
}

/// `ζ(s)` with its summation error.
pub fn zeta_value<S: Real>(x: &SingularValues<S>, s: S, margin: S) -> Result<Summed<S>> {
    x.power_integral(s, margin)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaCurve<S> {
    pub p: S,
    pub r_grid: Vec<S>,
    /// `(1/r) ζ(p + 1/r)`.
    pub values: Vec<S>,
    pub errors: Vec<S>,
}

impl<S: Real> ZetaCurve<S> {
    fn sampled(&self) -> Result<SampledFunction<S>> {
        SampledFunction::new(
            Domain::HalfLine,
            self.r_grid.iter().map(|r| r.ln()).collect(),
            self.values.clone(),
        )
    }
}

fn usable_grid<S: Real>(x: &SingularValues<S>, p: S, cfg: &ZetaConfig<S>) -> Vec<S> {
    let mut grid = cfg.r_grid.clone();
    if let Some(ln_end) = x.truncation_horizon() {
        let cap = ln_end / (cfg.horizon_factor * p);
        grid.retain(|&r| r <= cap);
    }
    grid
}

/// `(1/r) ζ(p + 1/r)` over the configured `r` grid.
pub fn zeta_curve<S: Real>(x: &SingularValues<S>, p: S, cfg: &ZetaConfig<S>) -> Result<ZetaCurve<S>> {
    if !(p > S::zero()) || !p.is_finite() {
        return Err(Error::Domain(format!("zeta limits need p > 0, got {p}")));
    }
    let r_grid = usable_grid(x, p, cfg);
    let points: Vec<Result<(S, S)>> = r_grid
        .par_iter()
        .map(|&r| {
            let inv = S::one() / r;
            let z = zeta_value(x, p + inv, cfg.margin)?;
            Ok((inv * z.value, inv * z.error))
        })
        .collect();
    let mut values = Vec::with_capacity(points.len());
    let mut errors = Vec::with_capacity(points.len());
    for pt in points {
        let (v, e) = pt?;
        values.push(v);
        errors.push(e);
    }
    Ok(ZetaCurve {
        p,
        r_grid,
        values,
        errors,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaLimit<S> {
    pub estimate: LimitEstimate<S>,
    pub curve: ZetaCurve<S>,
    /// `‖x‖_{M(ψ₁)}`, computed when the limit converged at `p = 1`.
    pub psi1_norm: Option<S>,
}

/// `lim_{r→∞} (1/r) ζ(p + 1/r)` as a limit band in `r`.
pub fn zeta_limit<S: Real>(x: &SingularValues<S>, p: S, cfg: &ZetaConfig<S>) -> Result<ZetaLimit<S>> {
    let curve = zeta_curve(x, p, cfg)?;
    let estimate = limit_estimate(&curve.sampled()?, &cfg.limit)?;
    let psi1_norm = if estimate.converged && p == S::one() {
        Some(marcinkiewicz_norm(x, &PsiFunction::psi1()).value)
    } else {
        None
    };
    Ok(ZetaLimit {
        estimate,
        curve,
        psi1_norm,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueEstimate<S> {
    pub estimate: LimitEstimate<S>,
    /// `s = p + 1/r`.
    pub s_grid: Vec<S>,
    /// `(s - p) ζ(s)`, with `s - p` taken as the exact factor `1/r`.
    pub values: Vec<S>,
}

/// `lim_{s↓p} (s - p) ζ(s)`, sampled at `s = p + 1/r`.
pub fn residue_estimate<S: Real>(x: &SingularValues<S>, p: S, cfg: &ZetaConfig<S>) -> Result<ResidueEstimate<S>> {
    let z = zeta_limit(x, p, cfg)?;
    Ok(ResidueEstimate {
        s_grid: z.curve.r_grid.iter().map(|&r| p + S::one() / r).collect(),
        values: z.curve.values.clone(),
        estimate: z.estimate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem47Report<S> {
    pub zeta: ZetaLimit<S>,
    /// `p · τ_ω(x^p)` with `ψ₁`.
    pub dixmier: LimitEstimate<S>,
    pub distance: S,
    /// Neither side converged to a value, so only the bands were compared.
    pub band_only: bool,
    pub pass: bool,
    /// Largest relative gap in `(1/r) ζ_x(p + 1/r) = p (1/(pr)) ζ_{x^p}(1 + 1/(pr))`.
    pub convexification_error: S,
}

/// Compares the zeta limit with `p` times the Dixmier trace of `x^p`.
pub fn theorem47_check<S: Real>(
    x: &SingularValues<S>,
    p: S,
    zcfg: &ZetaConfig<S>,
    dcfg: &DixmierConfig<S>,
) -> Result<Theorem47Report<S>> {
    let zeta = zeta_limit(x, p, zcfg)?;
    let xp = x.powf(p)?;
    let dixmier = dixmier_estimate(&xp, &PsiFunction::psi1(), dcfg)?.scaled(p);
    let distance = zeta.estimate.distance(&dixmier);
    let band_only = !(zeta.estimate.converged && dixmier.converged);
    let pass = distance <= zcfg.limit.tol + p * dcfg.limit.tol;

    let rows: Vec<Result<S>> = zeta
        .curve
        .r_grid
        .par_iter()
        .zip(zeta.curve.values.par_iter())
        .map(|(&r, &lhs)| {
            let inv = S::one() / (p * r);
            let rhs = p * inv * zeta_value(&xp, S::one() + inv, zcfg.margin)?.value;
            Ok(if lhs == rhs { S::zero() } else { ((lhs - rhs) / lhs.abs().max(rhs.abs())).abs() })
        })
        .collect();
    let mut convexification_error = S::zero();
    for r in rows {
        convexification_error = convexification_error.max(r?);
    }
    Ok(Theorem47Report {
        zeta,
        dixmier,
        distance,
        band_only,
        pass,
        convexification_error,
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
    fn values() {
        let basel = zeta_value(&power(1.0), 2.0, 1e-8).unwrap();
        assert!((basel.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-8);
        let single: SingularValues<f64> = Spectrum::finite("one", vec![3.0]).unwrap().into();
        assert_eq!(zeta_value(&single, 2.0, 1e-8).unwrap().value, 9.0);
        let z32 = zeta_value(&power(0.5), 3.0, 1e-8).unwrap();
        assert!((z32.value - 2.612_375_348_685_488).abs() < 1e-8);
        match zeta_value(&power(1.0), 1.0, 1e-8) {
            Err(Error::Divergent { abscissa, .. }) => assert_eq!(abscissa, 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_shape() {
        let g = default_r_grid::<f64>();
        assert_eq!(g.len(), 19);
        assert!((g[0] - 2.0).abs() < 1e-15 && (g[18] - 2f64.powi(20)).abs() < 1e-6);
    }

    #[test]
    fn limits_and_residues() {
        let cfg = ZetaConfig::default();
        let h = zeta_limit(&power(1.0), 1.0, &cfg).unwrap();
        assert!((h.estimate.value.unwrap() - 1.0).abs() < 1e-3);
        assert!(h.psi1_norm.unwrap().is_finite());
        let two = zeta_limit(&power(0.5), 2.0, &cfg).unwrap();
        assert!((two.estimate.value.unwrap() - 2.0).abs() < 1e-3);
        let res = residue_estimate(&power(0.5), 2.0, &cfg).unwrap();
        assert_eq!(res.values, two.curve.values);
        assert_eq!(res.estimate, two.estimate);
    }

    #[test]
    fn finite_support_check_passes() {
        let x: SingularValues<f64> = Spectrum::finite("f", vec![0.5, 0.25]).unwrap().into();
        let r = theorem47_check(&x, 1.0, &ZetaConfig::default(), &DixmierConfig::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.zeta.estimate.value.unwrap().abs() < 1e-3);
    }
}
