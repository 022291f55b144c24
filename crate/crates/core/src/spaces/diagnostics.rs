//! Growth conditions on `ψ`: the doubling limit, `A(β)` and `ψ(t) < C t^α`.

use crate::error::Result;
use crate::means::{limit_estimate, LimitConfig, LimitEstimate, Model, SampledFunction};
use crate::rearrange::Growth;
use crate::scalar::{lit, Real};
use crate::spaces::psi::PsiFunction;

/// A sampled supremum `sup_t r(t)` for one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupPoint<S> {
    pub parameter: S,
    pub value: S,
    /// `ln t` of the maximiser, `+∞` when approached at infinity.
    pub ln_witness: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiDiagnostics<S> {
    /// `ψ(2t)/ψ(t)` as `t → ∞`.
    pub doubling: LimitEstimate<S>,
    /// `β ↦ A(β) = sup_t ψ(t^β)/ψ(t)`.
    pub a_curve: Vec<SupPoint<S>>,
    /// `α ↦ C(α) = sup_t ψ(t)/t^α`.
    pub power_bound: Vec<SupPoint<S>>,
}

impl<S: Real> PsiDiagnostics<S> {
    /// The doubling limit is 1 within `tol`.
    pub fn doubles_to_one(&self, tol: S) -> bool {
        self.doubling.value.map_or(false, |v| (v - S::one()).abs() <= tol)
    }

    /// `A(β) < ∞` for some sampled `β`.
    pub fn satisfies_a(&self) -> bool {
        self.a_curve.iter().any(|p| p.value.is_finite())
    }
}

pub const DEFAULT_BETAS: [f64; 5] = [1.01, 1.1, 1.5, 2.0, 3.0];
pub const DEFAULT_ALPHAS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

const SUP_RANGE: f64 = 200.0;
const SUP_STEP: f64 = 0.05;

fn sampled_sup<S: Real>(parameter: S, ratio: impl Fn(S) -> S, at_infinity: S) -> SupPoint<S> {
    let n = (2.0 * SUP_RANGE / SUP_STEP).round() as usize;
    let mut best = SupPoint {
        parameter,
        value: S::neg_infinity(),
        ln_witness: S::neg_infinity(),
    };
    for i in 0..=n {
        let u = lit::<S>(-SUP_RANGE + SUP_STEP * i as f64);
        let v = ratio(u);
        if v > best.value {
            best.value = v;
            best.ln_witness = u;
        }
    }
    if at_infinity >= best.value {
        best.value = at_infinity;
        best.ln_witness = S::infinity();
    }
    best
}

pub fn psi_diagnostics<S: Real>(psi: &PsiFunction<S>, betas: &[S], alphas: &[S]) -> Result<PsiDiagnostics<S>> {
    // uniform in ln ln t, from ln t = 1/2 to 10^5
    let n = 400;
    let (a, b) = (lit::<S>(0.5).ln(), lit::<S>(1e5).ln());
    let grid: Vec<S> = (0..n)
        .map(|i| (a + (b - a) * S::from_usize(i).unwrap() / S::from_usize(n - 1).unwrap()).exp())
        .collect();
    let curve = SampledFunction::from_fn_ln(grid, |u| (psi.ln_value(u + S::LN_2()) - psi.ln_value(u)).exp())?;
    let doubling = limit_estimate(&curve, &LimitConfig::new(Model::InverseLog))?;

    let growth = psi.growth();
    let a_curve = betas
        .iter()
        .map(|&beta| {
            let at_inf = if growth.exponent > S::zero() {
                S::infinity()
            } else {
                beta.powf(growth.log_power)
            };
            sampled_sup(beta, |u| (psi.ln_value(beta * u) - psi.ln_value(u)).exp(), at_inf)
        })
        .collect();
    let power_bound = alphas
        .iter()
        .map(|&alpha| {
            let t_alpha = Growth {
                coefficient: S::one(),
                exponent: alpha,
                log_power: S::zero(),
            };
            sampled_sup(alpha, |u| (psi.ln_value(u) - alpha * u).exp(), growth.ratio_limit(&t_alpha))
        })
        .collect();
    Ok(PsiDiagnostics {
        doubling,
        a_curve,
        power_bound,
    })
}

pub fn default_psi_diagnostics<S: Real>(psi: &PsiFunction<S>) -> Result<PsiDiagnostics<S>> {
    let betas: Vec<S> = DEFAULT_BETAS.iter().map(|&b| lit(b)).collect();
    let alphas: Vec<S> = DEFAULT_ALPHAS.iter().map(|&a| lit(a)).collect();
    psi_diagnostics(psi, &betas, &alphas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi1_doubles_to_one() {
        let d = default_psi_diagnostics(&PsiFunction::<f64>::psi1()).unwrap();
        assert!(d.doubles_to_one(1e-3), "{:?}", d.doubling.value);
        assert!(d.satisfies_a());
        // ln(1 + t^β)/ln(1 + t) climbs to β
        for p in &d.a_curve {
            assert!((p.value - p.parameter).abs() < 1e-9);
        }
        assert!(d.power_bound.iter().all(|p| p.value.is_finite()));
    }

    #[test]
    fn psi_p_fails_doubling() {
        let d = default_psi_diagnostics(&PsiFunction::psi_p(2.0).unwrap()).unwrap();
        let v = d.doubling.value.unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-9);
        assert!(!d.doubles_to_one(1e-3));
        assert!(!d.satisfies_a());
        assert!(d.power_bound[0].value.is_infinite());
        assert!(d.power_bound[4].value.is_finite());
    }

    #[test]
    fn log_sq_doubles_to_one() {
        let d = default_psi_diagnostics(&PsiFunction::<f64>::log_sq()).unwrap();
        assert!(d.doubles_to_one(1e-3), "{:?}", d.doubling);
        assert!(d.satisfies_a());
    }
}
