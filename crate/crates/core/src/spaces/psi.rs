//! Normalizing functions `ψ`: concave, `ψ(0) = 0`, unbounded.

use crate::error::{Error, InputCode, Result};
use crate::rearrange::Growth;
use crate::scalar::{lit, ln_1p_exp, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum PsiKind<S> {
    /// `t·ln 2` on `[0, 1]`, `ln(1 + t)` after.
    Psi1,
    /// `t` on `[0, 1]`, `t^{1-1/p}` after.
    PsiP(S),
    /// `ln²(1 + t)`; not concave near the origin.
    LogSq,
    /// `ln(1 + t)`.
    Log1p,
    /// `t`.
    Identity,
    /// Piecewise linear through `(0, 0)` and the given knots, extended with the last slope.
    Custom(Vec<(S, S)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunction<S> {
    kind: PsiKind<S>,
}

impl<S: Real> PsiFunction<S> {
    pub fn psi1() -> Self {
        PsiFunction { kind: PsiKind::Psi1 }
    }

    pub fn psi_p(p: S) -> Result<Self> {
        if !(p > S::one()) || !p.is_finite() {
            return Err(Error::input(InputCode::Parameter, None, format!("psi_p needs p > 1, got {p}")));
        }
        Ok(PsiFunction { kind: PsiKind::PsiP(p) })
    }

    pub fn log_sq() -> Self {
        PsiFunction { kind: PsiKind::LogSq }
    }

    pub fn log1p() -> Self {
        PsiFunction { kind: PsiKind::Log1p }
    }

    pub fn identity() -> Self {
        PsiFunction {
            kind: PsiKind::Identity,
        }
    }

    /// Concave piecewise-linear `ψ` through `(0,0)` and `knots` (increasing `t`).
    pub fn custom(knots: Vec<(S, S)>) -> Result<Self> {
        let bad = |i: usize, m: &str| Err(Error::input(InputCode::Parameter, Some(i + 1), m.to_string()));
        if knots.is_empty() {
            return bad(0, "custom psi needs at least one knot");
        }
        let mut prev = (S::zero(), S::zero());
        let mut prev_slope = S::infinity();
        for (i, &(t, y)) in knots.iter().enumerate() {
            if !t.is_finite() || !y.is_finite() {
                return bad(i, "knot is not finite");
            }
            if t <= prev.0 {
                return bad(i, "knot abscissae must increase from 0");
            }
            let slope = (y - prev.1) / (t - prev.0);
            if slope < S::zero() {
                return bad(i, "psi must be non-decreasing");
            }
            if slope > prev_slope {
                return bad(i, "psi must be concave");
            }
            prev = (t, y);
            prev_slope = slope;
        }
        if !(prev_slope > S::zero()) {
            return bad(knots.len() - 1, "the last slope must be positive so that psi is unbounded");
        }
        Ok(PsiFunction {
            kind: PsiKind::Custom(knots),
        })
    }

    pub fn kind(&self) -> &PsiKind<S> {
        &self.kind
    }

    /// Short label, e.g. `psi_p:2`.
    pub fn label(&self) -> String {
        match &self.kind {
            PsiKind::Psi1 => "psi1".into(),
            PsiKind::PsiP(p) => format!("psi_p:{p}"),
            PsiKind::LogSq => "log2".into(),
            PsiKind::Log1p => "log1p".into(),
            PsiKind::Identity => "identity".into(),
            PsiKind::Custom(k) => format!("custom[{} knots]", k.len()),
        }
    }

    fn custom_slope(knots: &[(S, S)], i: usize) -> S {
        let (t0, y0) = if i == 0 { (S::zero(), S::zero()) } else { knots[i - 1] };
        let (t1, y1) = knots[i];
        (y1 - y0) / (t1 - t0)
    }

    pub fn value(&self, t: S) -> S {
        if t <= S::zero() {
            return S::zero();
        }
        match &self.kind {
            PsiKind::Psi1 => {
                if t <= S::one() {
                    t * S::LN_2()
                } else {
                    t.ln_1p()
                }
            }
            PsiKind::PsiP(p) => {
                if t <= S::one() {
                    t
                } else {
                    t.powf(S::one() - S::one() / *p)
                }
            }
            PsiKind::LogSq => t.ln_1p().powi(2),
            PsiKind::Log1p => t.ln_1p(),
            PsiKind::Identity => t,
            PsiKind::Custom(knots) => {
                let i = knots.partition_point(|&(k, _)| k < t);
                let i = i.min(knots.len() - 1);
                let (t1, y1) = knots[i];
                y1 + Self::custom_slope(knots, i) * (t - t1)
            }
        }
    }

    /// `ln ψ(e^u)`.
    pub fn ln_value(&self, u: S) -> S {
        if u == S::neg_infinity() {
            return S::neg_infinity();
        }
        match &self.kind {
            PsiKind::Psi1 => {
                if u <= S::zero() {
                    S::LN_2().ln() + u
                } else {
                    ln_1p_exp(u).ln()
                }
            }
            PsiKind::PsiP(p) => {
                if u <= S::zero() {
                    u
                } else {
                    (S::one() - S::one() / *p) * u
                }
            }
            PsiKind::LogSq => lit::<S>(2.0) * ln_1p_exp(u).ln(),
            PsiKind::Log1p => ln_1p_exp(u).ln(),
            PsiKind::Identity => u,
            PsiKind::Custom(knots) => {
                if u > lit(600.0) {
                    let last = knots.len() - 1;
                    let (tk, yk) = knots[last];
                    let s = Self::custom_slope(knots, last);
                    // ψ = s·t + (y_k - s·t_k)
                    return s.ln() + u + ((yk - s * tk) / s * (-u).exp()).ln_1p();
                }
                self.value(u.exp()).ln()
            }
        }
    }

    /// `ψ'(0+)`.
    pub fn slope_at_zero(&self) -> S {
        match &self.kind {
            PsiKind::Psi1 => S::LN_2(),
            PsiKind::PsiP(_) | PsiKind::Log1p | PsiKind::Identity => S::one(),
            PsiKind::LogSq => S::zero(),
            PsiKind::Custom(knots) => Self::custom_slope(knots, 0),
        }
    }

    pub fn is_concave(&self) -> bool {
        !matches!(self.kind, PsiKind::LogSq)
    }

    /// Growth of `ψ(t)` as `t → ∞`.
    pub fn growth(&self) -> Growth<S> {
        let g = |c: S, e: S, l: S| Growth {
            coefficient: c,
            exponent: e,
            log_power: l,
        };
        match &self.kind {
            PsiKind::Psi1 | PsiKind::Log1p => g(S::one(), S::zero(), S::one()),
            PsiKind::PsiP(p) => g(S::one(), S::one() - S::one() / *p, S::zero()),
            PsiKind::LogSq => g(S::one(), S::zero(), lit(2.0)),
            PsiKind::Identity => g(S::one(), S::one(), S::zero()),
            PsiKind::Custom(knots) => g(Self::custom_slope(knots, knots.len() - 1), S::one(), S::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        let p1 = PsiFunction::<f64>::psi1();
        assert!((p1.value(1.0) - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((p1.value(3.0) - 4f64.ln()).abs() < 1e-16);
        let p2 = PsiFunction::psi_p(2.0).unwrap();
        assert_eq!(p2.value(4.0), 2.0);
        let sq = PsiFunction::<f64>::log_sq();
        assert!((sq.value(std::f64::consts::E - 1.0) - 1.0).abs() < 1e-15);
        assert!(PsiFunction::psi_p(1.0).is_err());
        assert!(PsiFunction::psi_p(0.5).is_err());
    }

    #[test]
    fn log_domain_agrees() {
        let all = [
            PsiFunction::<f64>::psi1(),
            PsiFunction::psi_p(3.0).unwrap(),
            PsiFunction::log_sq(),
            PsiFunction::log1p(),
            PsiFunction::identity(),
            PsiFunction::custom(vec![(1.0, 2.0), (3.0, 3.0)]).unwrap(),
        ];
        for psi in &all {
            for &u in &[-20.0, -1.0, 0.0, 0.3, 5.0, 30.0] {
                let direct = psi.value(f64::exp(u)).ln();
                assert!((psi.ln_value(u) - direct).abs() < 1e-12, "{} at {u}", psi.label());
            }
        }
        assert!((PsiFunction::<f64>::psi1().ln_value(1000.0) - 1000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn custom_validation() {
        assert!(PsiFunction::custom(vec![(1.0_f64, 1.0), (2.0, 3.0)]).is_err());
        assert!(PsiFunction::custom(vec![(1.0_f64, 1.0), (2.0, 1.0)]).is_err());
        assert!(PsiFunction::custom(vec![(1.0_f64, -1.0)]).is_err());
        let c = PsiFunction::custom(vec![(1.0_f64, 2.0), (3.0, 3.0)]).unwrap();
        assert_eq!(c.value(0.5), 1.0);
        assert_eq!(c.value(5.0), 4.0);
    }
}
