//! Limit bands: the numerical stand-in for an invariant mean at infinity.
//!
//! The tail of a sampled curve is smoothed by up to `max_iterations` Cesàro
//! means `M` and fitted by `a + b·φ` plus the start-up terms `ln^j x / x` that
//! each `M` introduces.  A fit counts when its residuals, widened by how far
//! the intercept moves once the newest quarter of the window is dropped, stay
//! inside `tol`; its intercept is then the value.  Otherwise only a band is
//! reported: the raw tail range, joined with the best fit's extrapolation
//! when the tail is monotone.

use crate::error::{Error, Result};
use crate::means::sampled::{apply_transform, Domain, SampledFunction, Transform};
use crate::numeric::least_squares;
use crate::scalar::{lit, Real};

/// Correction term `φ` of the fitted model `a + b·φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `φ = 1/ln t`.
    InverseLog,
    /// `φ = 1/t`.
    Inverse,
    /// `φ = t^{-κ}` with `κ` searched on a grid.
    FreePower,
    /// No correction.
    Constant,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::InverseLog => "a + b/ln t",
            Model::Inverse => "a + b/t",
            Model::FreePower => "a + b*t^-k",
            Model::Constant => "a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConfig<S> {
    /// Fraction of the grid (in the model's natural scale) used as the tail.
    pub tail_fraction: S,
    pub tol: S,
    pub max_iterations: usize,
    pub model: Model,
    /// Minimal tail length in decades of `t`.
    pub min_decades: S,
}

impl<S: Real> LimitConfig<S> {
    pub fn new(model: Model) -> Self {
        LimitConfig {
            tail_fraction: lit(0.5),
            tol: lit(1e-3),
            max_iterations: 3,
            model,
            min_decades: lit(2.0),
        }
    }

    pub fn with_tol(mut self, tol: S) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_fraction(mut self, f: S) -> Self {
        self.tail_fraction = f;
        self
    }
}

impl<S: Real> Default for LimitConfig<S> {
    fn default() -> Self {
        Self::new(Model::InverseLog)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate<S> {
    /// Present iff `converged`.
    pub value: Option<S>,
    pub liminf: S,
    pub limsup: S,
    pub converged: bool,
    /// Fitted model, including the Cesàro level and any searched exponent.
    pub model: String,
    /// Number of `M` applications behind the reported fit.
    pub level: usize,
    /// Spread of the fit residuals over the tail window, widened by the
    /// intercept drift when the window is shortened.
    pub residual: S,
    pub tol: S,
    /// The curve that was analysed, as `(ln t, value)`.
    pub samples: Vec<(S, S)>,
}

impl<S: Real> LimitEstimate<S> {
    pub fn band(&self) -> (S, S) {
        (self.liminf, self.limsup)
    }

    pub fn width(&self) -> S {
        self.limsup - self.liminf
    }

    /// Point estimate: the value when converged, else the band midpoint.
    pub fn center(&self) -> S {
        self.value.unwrap_or_else(|| (self.liminf + self.limsup) * lit(0.5))
    }

    /// Multiplies value, band and samples by `c ≥ 0`.
    pub fn scaled(&self, c: S) -> Self {
        LimitEstimate {
            value: self.value.map(|v| v * c),
            liminf: self.liminf * c,
            limsup: self.limsup * c,
            residual: self.residual * c,
            tol: self.tol * c,
            samples: self.samples.iter().map(|&(x, v)| (x, v * c)).collect(),
            model: self.model.clone(),
            ..*self
        }
    }

    /// `|v - w|` when both converged, otherwise the gap between the bands.
    pub fn distance(&self, other: &Self) -> S {
        match (self.value, other.value) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => (other.liminf - self.limsup).max(self.liminf - other.limsup).max(S::zero()),
        }
    }
}

const KAPPA_STEP: f64 = 0.05;
const KAPPA_MAX: f64 = 3.0;

struct Fit<S> {
    intercept: S,
    lo: S,
    hi: S,
    kappa: Option<S>,
}

fn fit_window<S: Real>(ys: &[S], start: usize, end: usize, columns: &[Vec<S>]) -> Option<(S, S, S)> {
    let cols: Vec<Vec<S>> = columns.iter().map(|c| c[start..end].to_vec()).collect();
    let y = &ys[start..end];
    let coef = least_squares(&cols, y)?;
    let mut lo = S::infinity();
    let mut hi = S::neg_infinity();
    for i in 0..y.len() {
        let model = cols.iter().zip(&coef).fold(S::zero(), |acc, (c, &k)| acc + c[i] * k);
        let r = y[i] - model;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if !coef[0].is_finite() {
        return None;
    }
    Some((coef[0], lo, hi))
}

fn iterate_m<S: Real>(f: SampledFunction<S>, times: usize) -> Result<SampledFunction<S>> {
    let mut out = f;
    for _ in 0..times {
        out = apply_transform(&out, Transform::M)?;
    }
    Ok(out)
}

/// First index of the tail window on the abscissae `xs` (all `> 0` for `InverseLog`).
fn window_start<S: Real>(xs: &[S], cfg: &LimitConfig<S>, basis: usize) -> Result<usize> {
    let n = xs.len();
    let decades = cfg.min_decades * S::LN_10();
    if n < basis + 2 || xs[n - 1] - xs[0] < decades {
        return Err(Error::GridTooShort(format!(
            "need {} decades of tail and {} points",
            cfg.min_decades,
            basis + 2
        )));
    }
    let w = |x: S| if cfg.model == Model::InverseLog { x.ln() } else { x };
    let (w_lo, w_hi) = (w(xs[0]), w(xs[n - 1]));
    let cut = w_hi - cfg.tail_fraction * (w_hi - w_lo);
    let mut start = xs.partition_point(|&x| w(x) < cut).min(n - 1);
    if xs[n - 1] - xs[start] < decades {
        start = xs.partition_point(|&x| x <= xs[n - 1] - decades).saturating_sub(1);
    }
    Ok(start.min(n - (basis + 2)))
}

/// Limit band of `g(t)` as `t → ∞` for `g` sampled against `ln t`.
pub fn limit_estimate<S: Real>(g: &SampledFunction<S>, cfg: &LimitConfig<S>) -> Result<LimitEstimate<S>> {
    if g.domain() != Domain::HalfLine {
        return Err(Error::Domain("limit_estimate needs a curve on the half-line".into()));
    }
    let keep = if cfg.model == Model::InverseLog {
        g.abscissae().partition_point(|&x| x <= S::zero())
    } else {
        0
    };
    let base = SampledFunction::new(
        Domain::HalfLine,
        g.abscissae()[keep..].to_vec(),
        g.values()[keep..].to_vec(),
    )?;
    let samples: Vec<(S, S)> = g.abscissae().iter().copied().zip(g.values().iter().copied()).collect();

    let raw_start = window_start(base.abscissae(), cfg, 2)?;
    let raw = &base.values()[raw_start..];
    let raw_lo = raw.iter().copied().fold(S::infinity(), S::min);
    let raw_hi = raw.iter().copied().fold(S::neg_infinity(), S::max);

    let kappas: Vec<Option<S>> = match cfg.model {
        Model::FreePower => {
            let steps = (KAPPA_MAX / KAPPA_STEP).round() as usize;
            (1..=steps).map(|k| Some(lit::<S>(KAPPA_STEP * k as f64))).collect()
        }
        _ => vec![None],
    };
    let phi = |x: S, kappa: Option<S>| match cfg.model {
        Model::InverseLog => S::one() / x,
        Model::Inverse => (-x).exp(),
        Model::FreePower => (-kappa.unwrap_or_else(S::one) * x).exp(),
        Model::Constant => S::zero(),
    };

    let mut best_residual = S::infinity();
    // extrapolated range of the best fit, merged into a band-only answer
    let mut best_range: Option<(S, S)> = None;
    for level in 0..=cfg.max_iterations {
        let curve = iterate_m(base.clone(), level)?;
        let xs = curve.abscissae();
        let basis = 1 + usize::from(cfg.model != Model::Constant) + level;
        let start = match window_start(xs, cfg, basis) {
            Ok(s) => s,
            Err(_) => break,
        };
        let mut best: Option<Fit<S>> = None;
        for &kappa in &kappas {
            let mut columns = vec![vec![S::one(); xs.len()]];
            if cfg.model != Model::Constant {
                let p = SampledFunction::new(
                    Domain::HalfLine,
                    base.abscissae().to_vec(),
                    base.abscissae().iter().map(|&x| phi(x, kappa)).collect(),
                )?;
                columns.push(iterate_m(p, level)?.values().to_vec());
            }
            for j in 0..level {
                columns.push(xs.iter().map(|&x| x.ln().powi(j as i32) / x).collect());
            }
            let n = xs.len();
            if let Some((a, mut lo, mut hi)) = fit_window(curve.values(), start, n, &columns) {
                // refit without the last quarter: a moving intercept is extrapolation error
                let end = n - (n - start) / 4;
                if end - start >= basis + 2 {
                    if let Some((b, _, _)) = fit_window(curve.values(), start, end, &columns) {
                        let drift = (b - a).abs();
                        lo = lo - drift;
                        hi = hi + drift;
                    }
                }
                if best.as_ref().map_or(true, |b| hi - lo < b.hi - b.lo) {
                    best = Some(Fit {
                        intercept: a,
                        lo,
                        hi,
                        kappa,
                    });
                }
            }
        }
        let Some(fit) = best else { continue };
        if fit.hi - fit.lo < best_residual {
            best_residual = fit.hi - fit.lo;
            best_range = Some((fit.intercept + fit.lo, fit.intercept + fit.hi));
        }
        if fit.hi - fit.lo <= cfg.tol {
            let mut model = format!("{} after M^{level}", cfg.model.name());
            if let Some(k) = fit.kappa {
                model.push_str(&format!(", k = {k}"));
            }
            return Ok(LimitEstimate {
                value: Some(fit.intercept),
                liminf: fit.intercept + fit.lo,
                limsup: fit.intercept + fit.hi,
                converged: true,
                model,
                level,
                residual: fit.hi - fit.lo,
                tol: cfg.tol,
                samples,
            });
        }
    }
    // a monotone tail has its limit outside the observed range, so the fit's
    // extrapolation belongs in the band; an oscillating one keeps the raw range
    let monotone = raw.windows(2).all(|w| w[1] >= w[0]) || raw.windows(2).all(|w| w[1] <= w[0]);
    let (liminf, limsup) = match best_range {
        Some((lo, hi)) if monotone => (raw_lo.min(lo), raw_hi.max(hi)),
        _ => (raw_lo, raw_hi),
    };
    Ok(LimitEstimate {
        value: None,
        liminf,
        limsup,
        converged: false,
        model: format!("{} (no level within tolerance)", cfg.model.name()),
        level: cfg.max_iterations,
        residual: best_residual,
        tol: cfg.tol,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_grid(n: usize, x_lo: f64, x_hi: f64) -> Vec<f64> {
        let (a, b) = (x_lo.ln(), x_hi.ln());
        (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
    }

    #[test]
    fn constants_converge_exactly() {
        let g = SampledFunction::from_fn_ln(log_grid(200, 1.0, 40.0), |_| 3.25).unwrap();
        let e = limit_estimate(&g, &LimitConfig::default()).unwrap();
        assert!(e.converged);
        assert!((e.value.unwrap() - 3.25).abs() < 1e-12);
        assert!(e.width() < 1e-12);
    }

    #[test]
    fn harmonic_profile() {
        let gamma = 0.577_215_664_901_532_9;
        let g = SampledFunction::from_fn_ln(log_grid(300, 1.0, 40.0), |x| 1.0 + gamma / x).unwrap();
        let e = limit_estimate(&g, &LimitConfig::default()).unwrap();
        assert!(e.converged && e.level == 0);
        assert!((e.value.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oscillation_is_not_a_limit() {
        let g = SampledFunction::from_fn_ln(log_grid(2000, 1.0, 8.0e5), |x| {
            let w = x.ln();
            2.0 + (w.sin() - w.cos()) / 2.0
        })
        .unwrap();
        let e = limit_estimate(&g, &LimitConfig::default()).unwrap();
        assert!(!e.converged && e.value.is_none());
        let half = std::f64::consts::SQRT_2 / 2.0;
        assert!((e.liminf - (2.0 - half)).abs() < 1e-3, "{}", e.liminf);
        assert!((e.limsup - (2.0 + half)).abs() < 1e-3, "{}", e.limsup);
    }

    #[test]
    fn inverse_and_power_models() {
        let xs: Vec<f64> = (0..19).map(|k| (2.0f64 * 2f64.powf(19.0 * k as f64 / 18.0)).ln()).collect();
        let g = SampledFunction::from_fn_ln(xs.clone(), |x| 2.0 - 0.7 * (-x).exp()).unwrap();
        let e = limit_estimate(&g, &LimitConfig::new(Model::Inverse)).unwrap();
        assert!((e.value.unwrap() - 2.0).abs() < 1e-12);
        let g = SampledFunction::from_fn_ln(xs, |x| 1.0 + 0.886 * (-0.5 * x).exp()).unwrap();
        let e = limit_estimate(&g, &LimitConfig::new(Model::FreePower)).unwrap();
        assert!((e.value.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn short_grids_fail() {
        let g = SampledFunction::from_fn_ln(vec![1.0, 1.5, 2.0, 2.5, 3.0], |_| 1.0).unwrap();
        assert!(matches!(
            limit_estimate(&g, &LimitConfig::default()),
            Err(Error::GridTooShort(_))
        ));
        let line = SampledFunction::new(Domain::Line, vec![1.0, 20.0], vec![1.0, 1.0]).unwrap();
        assert!(limit_estimate(&line, &LimitConfig::default()).is_err());
    }
}
