//! The `Z_1` and `Z_q` seminorms, as limits of `s·∫ x^{1+s}` when `s ↓ 0`.

use rayon::prelude::*;

use crate::error::{Error, InputCode, Result};
use crate::numeric::least_squares;
use crate::rearrange::SingularValues;
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Z1Config<S> {
    /// The grid is `s = 2^{-k}` for `k_min ≤ k ≤ k_max`.
    pub k_min: u32,
    pub k_max: u32,
    /// Required gap between `1 + s` and the abscissa of convergence.
    pub margin: S,
    /// On truncated data only `s ≥ horizon_factor / ln t_end` is used, so that
    /// the cut-off mass `t_end^{-s}` stays below `e^{-horizon_factor}`.
    pub horizon_factor: S,
    /// Only `s ≤ fit_below` enters the extrapolation (at least four points are kept).
    pub fit_below: S,
}

impl<S: Real> Default for Z1Config<S> {
    fn default() -> Self {
        Z1Config {
            k_min: 3,
            k_max: 20,
            margin: lit(1e-8),
            horizon_factor: lit(10.0),
            fit_below: lit(1.0 / 32.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeminormReport<S> {
    pub value: S,
    pub band: (S, S),
    pub s_grid: Vec<S>,
    pub samples: Vec<S>,
    /// Largest summation error over the grid, already folded into `band`.
    pub error: S,
    pub notes: Vec<String>,
}

impl<S: Real> SeminormReport<S> {
    /// Applies a non-decreasing map to value, band and samples.
    fn map(&self, f: impl Fn(S) -> S) -> Self {
        SeminormReport {
            value: f(self.value),
            band: (f(self.band.0.max(S::zero())), f(self.band.1)),
            s_grid: self.s_grid.clone(),
            samples: self.samples.iter().map(|&v| f(v)).collect(),
            error: self.error,
            notes: self.notes.clone(),
        }
    }
}

/// Value at `s = 0` of a cubic (lower degree on fewer than seven points)
/// through the samples with `s ≤ fit_below`.  The curvature matters: `s·∫ x^{1+s}`
/// carries `c^s` for a tail `c/n`, and `s·F(s)` with `F` analytic otherwise.
fn extrapolate<S: Real>(grid: &[S], samples: &[S], fit_below: S) -> Result<S> {
    let mut idx: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] <= fit_below).collect();
    if idx.len() < 4 {
        let mut by_s: Vec<usize> = (0..grid.len()).collect();
        by_s.sort_by(|&a, &b| grid[a].partial_cmp(&grid[b]).unwrap_or(std::cmp::Ordering::Equal));
        idx = by_s.into_iter().take(4).collect();
    }
    let s: Vec<S> = idx.iter().map(|&i| grid[i]).collect();
    let y: Vec<S> = idx.iter().map(|&i| samples[i]).collect();
    let degree = match s.len() {
        0..=4 => 1,
        5 | 6 => 2,
        _ => 3,
    };
    let cols: Vec<Vec<S>> = (0..=degree).map(|d| s.iter().map(|&v| v.powi(d)).collect()).collect();
    least_squares(&cols, &y)
        .map(|c| c[0])
        .ok_or_else(|| Error::GridTooShort("degenerate s grid".into()))
}

/// `‖x‖_{Z_1} = limsup_{s↓0} s·∫ x^{1+s}`, extrapolated to `s = 0`.
pub fn z1_seminorm<S: Real>(x: &SingularValues<S>, cfg: &Z1Config<S>) -> Result<SeminormReport<S>> {
    let mut notes = Vec::new();
    let mut grid: Vec<S> = (cfg.k_min..=cfg.k_max).map(|k| lit::<S>(0.5).powi(k as i32)).collect();
    if let Some(ln_end) = x.truncation_horizon() {
        let floor = cfg.horizon_factor / ln_end;
        grid.retain(|&s| s >= floor);
        notes.push(format!("truncated data: s >= {floor}"));
    }
    if grid.len() < 3 {
        return Err(Error::GridTooShort("fewer than 3 usable s values".into()));
    }
    let evaluated: Vec<Result<(S, S)>> = grid
        .par_iter()
        .map(|&s| {
            let r = x.power_integral(S::one() + s, cfg.margin).map_err(|e| match e {
                Error::Divergent { s, abscissa } => Error::NotAdmissible(format!(
                    "integral of x^{s} diverges (abscissa {abscissa})"
                )),
                other => other,
            })?;
            Ok((s * r.value, s * r.error))
        })
        .collect();
    let mut samples = Vec::with_capacity(grid.len());
    let mut error = S::zero();
    for r in evaluated {
        let (v, e) = r?;
        if !v.is_finite() {
            return Err(Error::NotAdmissible("integral of x^(1+s) is infinite".into()));
        }
        samples.push(v);
        error = error.max(e);
    }
    let value = extrapolate(&grid, &samples, cfg.fit_below)?.max(S::zero());
    let lo = samples.iter().copied().fold(value, S::min) - error;
    let hi = samples.iter().copied().fold(value, S::max) + error;
    Ok(SeminormReport {
        value,
        band: (lo.max(S::zero()), hi),
        s_grid: grid,
        samples,
        error,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZpReport<S> {
    pub q: S,
    /// `‖x^q‖_{Z_1}`.
    pub z1_of_power: SeminormReport<S>,
    /// `‖x‖⁺_{Z_q} = ‖x^q‖_{Z_1}^{1/q}`.
    pub plus: SeminormReport<S>,
    /// `‖x‖_{Z_q} = (q·‖x^q‖_{Z_1})^{1/q}`.
    pub standard: SeminormReport<S>,
    /// `standard / plus = q^{1/q}`.
    pub ratio: S,
}

pub fn zp_seminorm<S: Real>(x: &SingularValues<S>, q: S, cfg: &Z1Config<S>) -> Result<ZpReport<S>> {
    if !(q >= S::one()) || !q.is_finite() {
        return Err(Error::input(InputCode::Parameter, None, format!("zp needs q >= 1, got {q}")));
    }
    let z = z1_seminorm(&x.powf(q)?, cfg)?;
    let inv = S::one() / q;
    let plus = if q == S::one() { z.clone() } else { z.map(|v| v.powf(inv)) };
    let standard = if q == S::one() { z.clone() } else { z.map(|v| (q * v).powf(inv)) };
    Ok(ZpReport {
        q,
        z1_of_power: z,
        plus,
        standard,
        ratio: q.powf(inv),
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
    fn riemann_residue() {
        let r = z1_seminorm(&power(1.0), &Z1Config::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-3, "{}", r.value);
        assert!(r.band.0 <= r.value && r.value <= r.band.1);
        // s·ζ(1+s) at s = 2^-7 ≈ 0.0078: 1 + γ s + …
        let s7 = r.samples[4];
        assert!((s7 - (1.0 + 0.577_215_7 * 0.0078125)).abs() < 1e-4);
    }

    #[test]
    fn finite_support_is_null() {
        let x: SingularValues<f64> = Spectrum::finite("f", vec![3.0, 2.0, 1.0]).unwrap().into();
        let r = z1_seminorm(&x, &Z1Config::default()).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn zp_reductions() {
        let cfg = Z1Config::default();
        let h = power(1.0);
        let a = z1_seminorm(&h, &cfg).unwrap();
        let b = zp_seminorm(&h, 1.0, &cfg).unwrap();
        assert_eq!(a, b.plus);
        assert_eq!(a, b.standard);
        let r = zp_seminorm(&power(0.5), 2.0, &cfg).unwrap();
        assert!((r.plus.value - 1.0).abs() < 1e-3);
        assert!((r.standard.value - 2f64.sqrt()).abs() < 2e-3);
        assert!(zp_seminorm(&h, 0.5, &cfg).is_err());
    }

    #[test]
    fn slow_decay_is_not_admissible() {
        assert!(matches!(
            z1_seminorm(&power(0.5), &Z1Config::default()),
            Err(Error::NotAdmissible(_))
        ));
    }
}
