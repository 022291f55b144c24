//! Dixmier-trace averages `a(x, t)` and their limit bands.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::means::limit::{limit_estimate, LimitConfig, LimitEstimate};
use crate::means::sampled::SampledFunction;
use crate::rearrange::{SingularValues, SpectrumTail};
use crate::scalar::{lit, Real};
use crate::spaces::{default_psi_diagnostics, marcinkiewicz_norm_from, weighted_mean_ln, PsiFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DixmierConfig<S> {
    /// `ln t` of the last grid point; chosen from the data when absent.
    pub horizon: Option<S>,
    pub points: usize,
    pub limit: LimitConfig<S>,
}

impl<S: Real> Default for DixmierConfig<S> {
    fn default() -> Self {
        DixmierConfig {
            horizon: None,
            points: 512,
            limit: LimitConfig::default(),
        }
    }
}

impl<S: Real> DixmierConfig<S> {
    pub fn with_tol(mut self, tol: S) -> Self {
        self.limit.tol = tol;
        self
    }
}

const DEFAULT_HORIZON: f64 = 40.0;
const MAX_TAIL_HORIZON: f64 = 400.0;
/// Points placed before each breakpoint, `0.1` apart in `ln t`.
const REFINE_POINTS: usize = 80;
const REFINE_STEP: f64 = 0.1;

/// `ln t` where the average is followed up to.
pub fn horizon<S: Real>(x: &SingularValues<S>, cfg: &DixmierConfig<S>) -> S {
    if let Some(h) = cfg.horizon {
        return h;
    }
    let base = lit::<S>(DEFAULT_HORIZON);
    if let Some(end) = x.truncation_horizon() {
        return end;
    }
    match x {
        SingularValues::Sequence(s) => match s.tail() {
            // the oscillation has period 2π in ln ln t; follow two of them
            Some(SpectrumTail::LogOscillating(_)) => base.max(lit::<S>(4.0 * std::f64::consts::PI + 1.0).exp()),
            // a summable tail leaves a remainder ~ t^{1-α}; wait until it is below e^{-60}
            Some(SpectrumTail::Power { exponent, .. }) if *exponent > S::one() => {
                base.max((lit::<S>(60.0) / (*exponent - S::one())).min(lit(MAX_TAIL_HORIZON)))
            }
            _ => base,
        },
        SingularValues::Function(f) => {
            let end = f.ln_end();
            if end.is_finite() && end + end > base {
                end + end
            } else {
                base
            }
        }
    }
}

/// `ln t` grid from `e` to `e^{horizon}`, uniform in `ln ln t`, refined before
/// each of the `jumps` (given in `ln t`).
pub fn dixmier_grid<S: Real>(horizon: S, points: usize, jumps: &[S]) -> Vec<S> {
    let one = S::one();
    let top = horizon.max(one + one);
    let span = top.ln();
    let n = points.max(2);
    let mut grid: Vec<S> = (0..n)
        .map(|i| (span * S::from_usize(i).unwrap() / S::from_usize(n - 1).unwrap()).exp())
        .collect();
    for &b in jumps {
        if !(b > one) || b > top {
            continue;
        }
        for j in 0..=REFINE_POINTS {
            let p = b - lit::<S>(REFINE_STEP * j as f64);
            if p < one {
                break;
            }
            grid.push(p);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    grid.dedup();
    grid
}

fn step_kinks<S: Real>(x: &SingularValues<S>) -> Vec<S> {
    match x {
        SingularValues::Function(f) => f.log_breakpoints().to_vec(),
        SingularValues::Sequence(_) => Vec::new(),
    }
}

/// Jump points of `t ↦ τ(x χ_{(1/t, ∞)}(x))`, at `t = 1/μ`.
fn level_kinks<S: Real>(x: &SingularValues<S>) -> Vec<S> {
    match x {
        SingularValues::Function(f) => f
            .log_values()
            .iter()
            .filter(|v| v.is_finite())
            .map(|&v| -v)
            .collect(),
        SingularValues::Sequence(_) => Vec::new(),
    }
}

fn sample<S: Real>(grid: Vec<S>, f: impl Fn(S) -> S + Sync) -> Result<SampledFunction<S>> {
    let values: Vec<S> = grid.par_iter().map(|&u| f(u)).collect();
    SampledFunction::new(crate::means::Domain::HalfLine, grid, values)
}

/// `t ↦ a(x, t)` on `grid` (given in `ln t`).
pub fn weighted_mean_curve<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>, grid: Vec<S>) -> Result<SampledFunction<S>> {
    sample(grid, |u| weighted_mean_ln(x, psi, u))
}

fn require_membership<S: Real>(x: &SingularValues<S>, psi: &PsiFunction<S>) -> Result<()> {
    let sup = marcinkiewicz_norm_from(x, psi, S::zero());
    if sup.value.is_finite() {
        Ok(())
    } else {
        Err(Error::NotAdmissible(format!(
            "the average a(x, t) is unbounded for {} (x is not in M(psi))",
            psi.label()
        )))
    }
}

/// `τ_ω(x) = ω-lim a(x, t)`, as a limit band.
pub fn dixmier_estimate<S: Real>(
    x: &SingularValues<S>,
    psi: &PsiFunction<S>,
    cfg: &DixmierConfig<S>,
) -> Result<LimitEstimate<S>> {
    require_membership(x, psi)?;
    let grid = dixmier_grid(horizon(x, cfg), cfg.points, &step_kinks(x));
    limit_estimate(&weighted_mean_curve(x, psi, grid)?, &cfg.limit)
}

/// Band of `(1/ln u) ∫_0^u x*` as `u → ∞`.
pub fn log_average_estimate<S: Real>(x: &SingularValues<S>, cfg: &DixmierConfig<S>) -> Result<LimitEstimate<S>> {
    let grid = dixmier_grid(horizon(x, cfg), cfg.points, &step_kinks(x));
    let curve = sample(grid, |u| {
        let i = x.partial_integral_ln(u);
        if i == S::zero() {
            S::zero()
        } else {
            (i.ln() - u.ln()).exp()
        }
    })?;
    limit_estimate(&curve, &cfg.limit)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripleReport<S> {
    /// `(1/ψ(t)) ∫_0^t μ`.
    pub weighted_mean: LimitEstimate<S>,
    /// `(1/ψ(t)) τ(x χ_{(1/t,∞)}(x))`.
    pub truncated: LimitEstimate<S>,
    /// `(1/ψ(t)) τ(x χ_{(1/t,1)}(x))`.
    pub windowed: LimitEstimate<S>,
    /// Largest pairwise [`LimitEstimate::distance`].
    pub max_band_distance: S,
    pub flags_agree: bool,
}

/// The three equivalent expressions for `τ_ω`, evaluated side by side.
///
/// `ψ` must double to one at infinity and satisfy `A(β) < ∞` for some `β > 1`.
pub fn prop_equivalence_triple<S: Real>(
    x: &SingularValues<S>,
    psi: &PsiFunction<S>,
    cfg: &DixmierConfig<S>,
) -> Result<TripleReport<S>> {
    let diag = default_psi_diagnostics(psi)?;
    if !diag.doubles_to_one(lit(1e-3)) {
        return Err(Error::Hypothesis(format!(
            "{}: psi(2t)/psi(t) does not tend to 1 (estimate {:?})",
            psi.label(),
            diag.doubling.value
        )));
    }
    if !diag.satisfies_a() {
        return Err(Error::Hypothesis(format!("{}: A(beta) is infinite for every sampled beta", psi.label())));
    }
    require_membership(x, psi)?;
    let h = horizon(x, cfg);
    let mean_grid = dixmier_grid(h, cfg.points, &step_kinks(x));
    let level_grid = dixmier_grid(h, cfg.points, &level_kinks(x));
    let at_one = x.truncated_trace_ln(S::zero());
    let over_psi = move |v: S, u: S| if v == S::zero() { S::zero() } else { (v.ln() - psi.ln_value(u)).exp() };
    let (first, rest) = rayon::join(
        || weighted_mean_curve(x, psi, mean_grid).and_then(|c| limit_estimate(&c, &cfg.limit)),
        || {
            let second = sample(level_grid.clone(), |u| over_psi(x.truncated_trace_ln(-u), u))
                .and_then(|c| limit_estimate(&c, &cfg.limit));
            let third = sample(level_grid, |u| over_psi((x.truncated_trace_ln(-u) - at_one).max(S::zero()), u))
                .and_then(|c| limit_estimate(&c, &cfg.limit));
            (second, third)
        },
    );
    let (weighted_mean, truncated, windowed) = (first?, rest.0?, rest.1?);
    let max_band_distance = weighted_mean
        .distance(&truncated)
        .max(weighted_mean.distance(&windowed))
        .max(truncated.distance(&windowed));
    let flags_agree = weighted_mean.converged == truncated.converged && truncated.converged == windowed.converged;
    Ok(TripleReport {
        weighted_mean,
        truncated,
        windowed,
        max_band_distance,
        flags_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::Spectrum;

    fn harmonic() -> SingularValues<f64> {
        Spectrum::new("h", vec![1.0], Some(SpectrumTail::power(1.0, 1.0))).unwrap().into()
    }

    #[test]
    fn harmonic_dixmier_trace_is_one() {
        let e = dixmier_estimate(&harmonic(), &PsiFunction::psi1(), &DixmierConfig::default()).unwrap();
        assert!(e.converged);
        assert!((e.value.unwrap() - 1.0).abs() < 1e-3, "{:?}", e.value);
    }

    #[test]
    fn finite_support_has_zero_trace() {
        let x: SingularValues<f64> = Spectrum::finite("f", vec![2.0, 1.0, 0.5]).unwrap().into();
        let t = prop_equivalence_triple(&x, &PsiFunction::psi1(), &DixmierConfig::default()).unwrap();
        for e in [&t.weighted_mean, &t.truncated, &t.windowed] {
            assert!(e.converged);
            assert!(e.value.unwrap().abs() < 1e-3);
        }
    }

    #[test]
    fn psi_p_is_rejected_by_the_triple() {
        let r = prop_equivalence_triple(&harmonic(), &PsiFunction::psi_p(2.0).unwrap(), &DixmierConfig::default());
        assert!(matches!(r, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn grid_is_refined_before_jumps() {
        let g = dixmier_grid(100.0f64, 64, &[50.0]);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(g.iter().any(|&u| (u - 49.9).abs() < 1e-12));
        assert!((g[0] - 1.0).abs() < 1e-15 && (g[g.len() - 1] - 100.0).abs() < 1e-9);
    }
}
