//! The Laplace–Stieltjes transform `h(r) = ∫ e^{-t/r} dβ(t)` and the classical
//! Karamata comparison of `h(r)/r` with `β(t)/t`.

use crate::error::{Error, Result};
use crate::means::{limit_estimate, Domain, LimitConfig, LimitEstimate, Model, SampledFunction};
use crate::numeric::CompensatedSum;
use crate::rearrange::{Count, SingularValues};
use crate::scalar::{from_count, lit, Real};

/// `e^{-t/r}` drops below `10^{-12}` once `t/r` exceeds this.
pub const MIN_SPAN: f64 = 27.64;

const MAX_JUMPS: u64 = 10_000_000;

/// Non-decreasing `β` on `[0, U]` with `β(0) = 0`, linear between knots.
/// A repeated abscissa marks a jump.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaFunction<S> {
    knots: Vec<(S, S)>,
}

impl<S: Real> BetaFunction<S> {
    pub fn new(knots: Vec<(S, S)>) -> Result<Self> {
        if knots.len() < 2 || knots[0] != (S::zero(), S::zero()) {
            return Err(Error::Domain("beta needs knots starting at (0, 0)".into()));
        }
        for w in knots.windows(2) {
            let ((t0, b0), (t1, b1)) = (w[0], w[1]);
            if !t1.is_finite() || !b1.is_finite() || t1 < t0 || b1 < b0 {
                return Err(Error::Domain("beta knots must be finite and non-decreasing".into()));
            }
        }
        if !(knots[knots.len() - 1].0 > S::zero()) {
            return Err(Error::Domain("beta needs a positive domain".into()));
        }
        Ok(BetaFunction { knots })
    }

    /// Samples `f` at 0 and at `n` geometric points from `lo` to `upper`.
    pub fn from_fn(f: impl Fn(S) -> S, lo: S, upper: S, n: usize) -> Result<Self> {
        let (a, b) = (lo.ln(), upper.ln());
        let mut knots = vec![(S::zero(), S::zero())];
        for i in 0..n {
            let t = (a + (b - a) * S::from_usize(i).unwrap() / S::from_usize(n - 1).unwrap()).exp();
            knots.push((t, f(t)));
        }
        Self::new(knots)
    }

    /// `β(t) = |{s : μ_s^{-p} ≤ t}|` on `[0, upper]`.
    pub fn counting(x: &SingularValues<S>, p: S, upper: S) -> Result<Self> {
        let ln_level = -upper.ln() / p;
        let mut knots = vec![(S::zero(), S::zero())];
        let mut count = S::zero();
        match x {
            SingularValues::Sequence(s) => {
                let n_max = match s.count_above(ln_level) {
                    Count::Exact(n) if n <= MAX_JUMPS => n,
                    _ => return Err(Error::Domain("counting function would need too many jumps".into())),
                };
                for n in 1..=n_max {
                    let ln_mu = s.ln_mu(n);
                    if ln_mu == S::neg_infinity() {
                        break;
                    }
                    let t = (-p * ln_mu).exp();
                    knots.push((t, count));
                    count = from_count(n);
                    knots.push((t, count));
                }
            }
            SingularValues::Function(f) => {
                if f.tail().is_some() || f.beyond_last() > S::zero() {
                    return Err(Error::Domain("counting function needs finitely many pieces".into()));
                }
                for i in 0..f.len() {
                    let lv = f.log_values()[i];
                    if lv == S::neg_infinity() || lv < ln_level {
                        break;
                    }
                    let t = (-p * lv).exp();
                    knots.push((t, count));
                    count = count + f.ln_length(i).exp();
                    knots.push((t, count));
                }
            }
        }
        knots.push((upper, count));
        Self::new(knots)
    }

    pub fn knots(&self) -> &[(S, S)] {
        &self.knots
    }

    pub fn upper(&self) -> S {
        self.knots[self.knots.len() - 1].0
    }

    /// `β(t)` (right-continuous at jumps), `None` beyond the domain.
    pub fn value(&self, t: S) -> Option<S> {
        if t < S::zero() || t > self.upper() {
            return None;
        }
        let i = self.knots.partition_point(|&(k, _)| k <= t);
        if i >= self.knots.len() {
            return Some(self.knots[self.knots.len() - 1].1);
        }
        let (t0, b0) = self.knots[i - 1];
        let (t1, b1) = self.knots[i];
        Some(b0 + (b1 - b0) * (t - t0) / (t1 - t0))
    }
}

/// `h(r)/r` with `h(r) = ∫_0^∞ e^{-t/r} dβ(t)`, integrated exactly for the
/// piecewise-linear `β`.
pub fn karamata_transform<S: Real>(beta: &BetaFunction<S>, r: S) -> Result<S> {
    if !(r > S::zero()) {
        return Err(Error::Domain(format!("karamata transform needs r > 0, got {r}")));
    }
    // the relative slack absorbs the rounding of r = exp(ln r)
    if beta.upper() / r < lit(MIN_SPAN * (1.0 - 1e-12)) {
        return Err(Error::GridTooShort(format!(
            "beta is known up to {} but r = {r} needs {}",
            beta.upper(),
            r * lit(MIN_SPAN)
        )));
    }
    let mut acc = CompensatedSum::new();
    for w in beta.knots.windows(2) {
        let ((t0, b0), (t1, b1)) = (w[0], w[1]);
        let rise = b1 - b0;
        if rise == S::zero() {
            continue;
        }
        let decay = (-t0 / r).exp();
        if t1 == t0 {
            acc.add(decay * rise / r);
        } else {
            // ∫ e^{-t/r} m dt / r = m e^{-t0/r} (1 - e^{-Δ/r})
            let slope = rise / (t1 - t0);
            acc.add(slope * decay * -(-(t1 - t0) / r).exp_m1());
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaramataConfig<S> {
    pub r_min: S,
    pub points: usize,
    pub limit: LimitConfig<S>,
}

impl<S: Real> Default for KaramataConfig<S> {
    fn default() -> Self {
        KaramataConfig {
            r_min: S::one(),
            points: 40,
            limit: LimitConfig::new(Model::FreePower),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaramataReport<S> {
    /// `h(r)/r` as `r → ∞`.
    pub transform: LimitEstimate<S>,
    /// `β(t)/t` as `t → ∞`.
    pub direct: LimitEstimate<S>,
    pub difference: S,
}

pub fn karamata_limit<S: Real>(beta: &BetaFunction<S>, cfg: &KaramataConfig<S>) -> Result<KaramataReport<S>> {
    let r_max = beta.upper() / lit(MIN_SPAN);
    if r_max <= cfg.r_min {
        return Err(Error::GridTooShort("beta domain too short for the r grid".into()));
    }
    let (a, b) = (cfg.r_min.ln(), r_max.ln());
    let n = cfg.points.max(4);
    let grid: Vec<S> = (0..n)
        .map(|i| a + (b - a) * S::from_usize(i).unwrap() / S::from_usize(n - 1).unwrap())
        .collect();
    let mut h = Vec::with_capacity(n);
    for &l in &grid {
        h.push(karamata_transform(beta, l.exp())?);
    }
    let transform = limit_estimate(&SampledFunction::new(Domain::HalfLine, grid.clone(), h)?, &cfg.limit)?;
    // same abscissae shifted to the end of β's domain
    let shift = beta.upper().ln() - b;
    let t_grid: Vec<S> = grid.iter().map(|&l| l + shift).collect();
    let ratios: Vec<S> = t_grid
        .iter()
        .map(|&l| beta.value(l.exp().min(beta.upper())).unwrap_or_else(S::zero) / l.exp())
        .collect();
    let direct = limit_estimate(&SampledFunction::new(Domain::HalfLine, t_grid, ratios)?, &cfg.limit)?;
    let difference = transform.distance(&direct);
    Ok(KaramataReport {
        transform,
        direct,
        difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::{Spectrum, SpectrumTail};

    #[test]
    fn linear_beta_is_exact() {
        let b = BetaFunction::new(vec![(0.0, 0.0), (1e6, 3e6)]).unwrap();
        for &r in &[1.0f64, 100.0, 3e4] {
            assert!((karamata_transform(&b, r).unwrap() - 3.0).abs() < 1e-8);
        }
        assert!(karamata_transform(&b, 1e5).is_err());
    }

    #[test]
    fn jumps_are_stieltjes_masses() {
        // β = floor(t): h(r)/r = 1/(r (e^{1/r} - 1))
        let h: SingularValues<f64> = Spectrum::new("h", vec![1.0], Some(SpectrumTail::power(1.0, 1.0)))
            .unwrap()
            .into();
        let b = BetaFunction::counting(&h, 1.0, 5e4).unwrap();
        assert_eq!(b.value(3.5), Some(3.0));
        assert_eq!(b.value(4.0), Some(4.0));
        for &r in &[2.0, 50.0, 1000.0] {
            let exact = 1.0 / (r * (1.0 / r as f64).exp_m1());
            assert!((karamata_transform(&b, r).unwrap() - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn square_root_correction_extrapolates() {
        let b = BetaFunction::from_fn(|t: f64| t + t.sqrt(), 1e-6, 1e12, 20_000).unwrap();
        let r = 400.0f64;
        let oracle = 1.0 + (std::f64::consts::PI.sqrt() / 2.0) / r.sqrt();
        assert!((karamata_transform(&b, r).unwrap() - oracle).abs() < 1e-6);
        let rep = karamata_limit(&b, &KaramataConfig::default()).unwrap();
        assert!((rep.transform.value.unwrap() - 1.0).abs() < 1e-3, "{:?}", rep.transform);
    }
}
