//! Sampled functions on `ℝ` and on `ℝ*₊`, and the transforms acting on them.
//!
//! A function on the multiplicative half-line is stored against `ln t`, so
//! `L` and `L⁻¹` only relabel the domain.

use crate::error::{Error, Result};
use crate::numeric::cumulative_trapezoid;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `ℝ`, abscissa `u`.
    Line,
    /// `ℝ*₊`, abscissa `ln t`.
    HalfLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<S> {
    domain: Domain,
    abscissae: Vec<S>,
    values: Vec<S>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform<S> {
    /// `H(f)(u) = (1/u) ∫_0^u f`.
    H,
    /// `M(g)(t) = (1/ln t) ∫_1^t g(s) ds/s`.
    M,
    /// `D_a(f)(x) = f(x/a)`.
    Dilate(S),
    /// `T_b(f)(x) = f(x + b)`.
    Translate(S),
    /// `P^a(g)(t) = g(t^a)`.
    Power(S),
    /// `L(f) = f ∘ ln`.
    L,
    /// `L⁻¹(g) = g ∘ exp`.
    LInverse,
}

impl<S: Real> SampledFunction<S> {
    pub fn new(domain: Domain, abscissae: Vec<S>, values: Vec<S>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(Error::Domain("abscissae and values differ in length".into()));
        }
        if abscissae.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("abscissae must increase strictly".into()));
        }
        if abscissae.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Domain("samples must be finite".into()));
        }
        Ok(SampledFunction {
            domain,
            abscissae,
            values,
        })
    }

    /// Samples `g` at `t = e^{x}` for each `x` in `ln_t`.
    pub fn from_fn_ln(ln_t: Vec<S>, g: impl Fn(S) -> S) -> Result<Self> {
        let values = ln_t.iter().map(|&x| g(x)).collect();
        Self::new(Domain::HalfLine, ln_t, values)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn abscissae(&self) -> &[S] {
        &self.abscissae
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Linear interpolation in the abscissa; `None` outside the grid.
    pub fn interpolate(&self, x: S) -> Option<S> {
        let a = &self.abscissae;
        if a.is_empty() || x < a[0] || x > a[a.len() - 1] {
            return None;
        }
        let i = a.partition_point(|&v| v < x);
        if a[i] == x {
            return Some(self.values[i]);
        }
        let (x0, x1) = (a[i - 1], a[i]);
        let w = (x - x0) / (x1 - x0);
        Some(self.values[i - 1] + w * (self.values[i] - self.values[i - 1]))
    }

    /// Resamples at `x ↦ map(x)` and keeps the points that land inside the grid.
    fn resample(&self, map: impl Fn(S) -> S) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for &x in &self.abscissae {
            if let Some(v) = self.interpolate(map(x)) {
                xs.push(x);
                vs.push(v);
            }
        }
        Self::new(self.domain, xs, vs)
    }
}

/// Running mean `(1/x) ∫_0^x f` on the stored grid, for `x > 0`.  Before the
/// first sample the function is held at its first value.
fn running_mean<S: Real>(xs: &[S], vs: &[S]) -> (Vec<S>, Vec<S>) {
    let start = xs.partition_point(|&x| x < S::zero());
    let (mut gx, mut gv) = (Vec::with_capacity(xs.len() + 1), Vec::with_capacity(xs.len() + 1));
    if start == xs.len() {
        return (Vec::new(), Vec::new());
    }
    // value at 0: interpolate when the grid straddles it, otherwise hold
    let v0 = if start > 0 {
        let (x0, x1) = (xs[start - 1], xs[start]);
        vs[start - 1] + (vs[start] - vs[start - 1]) * (-x0) / (x1 - x0)
    } else {
        vs[0]
    };
    if xs[start] > S::zero() {
        gx.push(S::zero());
        gv.push(v0);
    }
    gx.extend_from_slice(&xs[start..]);
    gv.extend_from_slice(&vs[start..]);
    let cum = cumulative_trapezoid(&gx, &gv);
    let mut ox = Vec::with_capacity(gx.len());
    let mut ov = Vec::with_capacity(gx.len());
    for i in 0..gx.len() {
        if gx[i] > S::zero() {
            ox.push(gx[i]);
            ov.push(cum[i] / gx[i]);
        }
    }
    (ox, ov)
}

pub fn apply_transform<S: Real>(f: &SampledFunction<S>, op: Transform<S>) -> Result<SampledFunction<S>> {
    let need = |d: Domain, name: &str| {
        if f.domain == d {
            Ok(())
        } else {
            Err(Error::Domain(format!("{name} is not defined on {:?}", f.domain)))
        }
    };
    match op {
        Transform::H => {
            need(Domain::Line, "H")?;
            let (x, v) = running_mean(&f.abscissae, &f.values);
            SampledFunction::new(Domain::Line, x, v)
        }
        Transform::M => {
            need(Domain::HalfLine, "M")?;
            let (x, v) = running_mean(&f.abscissae, &f.values);
            SampledFunction::new(Domain::HalfLine, x, v)
        }
        Transform::Dilate(a) => {
            if !(a > S::zero()) {
                return Err(Error::Domain("dilation needs a > 0".into()));
            }
            match f.domain {
                Domain::Line => f.resample(|x| x / a),
                Domain::HalfLine => f.resample(|x| x - a.ln()),
            }
        }
        Transform::Translate(b) => {
            need(Domain::Line, "T_b")?;
            f.resample(|x| x + b)
        }
        Transform::Power(a) => {
            need(Domain::HalfLine, "P^a")?;
            if !(a > S::zero()) {
                return Err(Error::Domain("P^a needs a > 0".into()));
            }
            f.resample(|x| x * a)
        }
        Transform::L => {
            need(Domain::Line, "L")?;
            SampledFunction::new(Domain::HalfLine, f.abscissae.clone(), f.values.clone())
        }
        Transform::LInverse => {
            need(Domain::HalfLine, "L⁻¹")?;
            SampledFunction::new(Domain::Line, f.abscissae.clone(), f.values.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn means_fix_constants() {
        let line = SampledFunction::new(Domain::Line, grid(50, -2.0, 8.0), vec![2.5; 50]).unwrap();
        let h = apply_transform(&line, Transform::H).unwrap();
        assert!(h.values().iter().all(|&v| (v - 2.5).abs() < 1e-14));
        assert!(h.abscissae()[0] > 0.0);
        let half = SampledFunction::new(Domain::HalfLine, grid(50, 0.5, 8.0), vec![-1.0; 50]).unwrap();
        let m = apply_transform(&half, Transform::M).unwrap();
        assert!(m.values().iter().all(|&v| (v + 1.0).abs() < 1e-14));
    }

    #[test]
    fn m_matches_closed_form() {
        // g(t) = 1/(1 + ln t): M(g)(t) = ln(1 + ln t)/ln t
        let xs = grid(20_001, 0.0, 3.0 * std::f64::consts::LN_10);
        let g = SampledFunction::from_fn_ln(xs, |x| 1.0 / (1.0 + x)).unwrap();
        let m = apply_transform(&g, Transform::M).unwrap();
        let worst = m
            .abscissae()
            .iter()
            .zip(m.values())
            .map(|(&x, &v)| (v - x.ln_1p() / x).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "{worst}");
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let line = SampledFunction::new(Domain::Line, grid(5, 0.0, 1.0), vec![1.0; 5]).unwrap();
        assert!(apply_transform(&line, Transform::M).is_err());
        assert!(apply_transform(&line, Transform::Power(2.0)).is_err());
        let half = apply_transform(&line, Transform::L).unwrap();
        assert!(apply_transform(&half, Transform::H).is_err());
        assert!(apply_transform(&half, Transform::Translate(1.0)).is_err());
    }

    #[test]
    fn shifts_and_dilations() {
        let xs = grid(101, 0.0, 10.0);
        let f = SampledFunction::new(Domain::Line, xs.clone(), xs.iter().map(|x| 2.0 * x).collect()).unwrap();
        let t = apply_transform(&f, Transform::Translate(1.0)).unwrap();
        assert_eq!(t.len(), 91);
        assert!((t.values()[0] - 2.0).abs() < 1e-12);
        let d = apply_transform(&f, Transform::Dilate(2.0)).unwrap();
        assert!((d.interpolate(4.0).unwrap() - 4.0).abs() < 1e-12);
        let g = SampledFunction::from_fn_ln(xs, |x| x).unwrap();
        let p = apply_transform(&g, Transform::Power(0.5)).unwrap();
        assert!((p.interpolate(6.0).unwrap() - 3.0).abs() < 1e-12);
    }
}
