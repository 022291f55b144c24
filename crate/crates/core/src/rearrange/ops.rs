//! Rearrangement, distribution functions and submajorization on step functions.

use crate::error::{Error, InputCode, Result};
use crate::rearrange::step::{ContinuousTail, StepFunction};
use crate::scalar::{ln_add_exp, ln_diff_exp, lit, Real};

/// `t ↦ λ_t`, right-continuous and non-increasing.
///
/// With `w_1 < … < w_m` the distinct positive values of `f`, `λ` equals
/// `measures[j]` on `[w_j, w_{j+1})` (`w_0 = 0`) and vanishes from `w_m` on,
/// plus the contribution of a continuous tail when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionCurve<S> {
    ln_levels: Vec<S>,
    ln_measures: Vec<S>,
    tail: Option<(ContinuousTail<S>, S)>,
}

impl<S: Real> DistributionCurve<S> {
    pub fn ln_levels(&self) -> &[S] {
        &self.ln_levels
    }

    pub fn ln_measures(&self) -> &[S] {
        &self.ln_measures
    }

    /// `ln λ_y` at `ln y`.
    pub fn ln_at(&self, ln_y: S) -> S {
        let j = self.ln_levels.partition_point(|&w| w <= ln_y);
        let step = if j < self.ln_measures.len() {
            self.ln_measures[j]
        } else {
            S::neg_infinity()
        };
        match &self.tail {
            None => step,
            Some((t, ln_end)) => {
                let reach = (t.coefficient.ln() - ln_y) / t.exponent;
                let ln_h = t.shift.ln();
                if reach <= ln_h {
                    return step;
                }
                let stop = ln_diff_exp(reach, ln_h);
                if stop <= *ln_end {
                    step
                } else {
                    ln_add_exp(step, ln_diff_exp(stop, *ln_end))
                }
            }
        }
    }

    pub fn at(&self, y: S) -> S {
        self.ln_at(y.ln()).exp()
    }
}

fn check_finite_pieces<S: Real>(f: &StepFunction<S>) -> Result<()> {
    if f.beyond_last() != S::zero() {
        return Err(Error::NotAdmissible(
            "rearrangement needs beyond_last = 0".to_string(),
        ));
    }
    Ok(())
}

/// Non-increasing, equimeasurable rearrangement `f*`.
///
/// Ties keep their original order; equal adjacent values are merged and
/// zero pieces dropped.
pub fn decreasing_rearrangement<S: Real>(f: &StepFunction<S>) -> Result<StepFunction<S>> {
    check_finite_pieces(f)?;
    if let Some(t) = f.tail() {
        let min = f.log_values().iter().copied().fold(S::infinity(), S::min);
        if t.ln_value(f.ln_end()) > min {
            return Err(Error::NotAdmissible(
                "tail exceeds some piece value; rearrangement would move the tail".to_string(),
            ));
        }
    }
    let mut order: Vec<usize> = (0..f.len()).filter(|&i| f.log_values()[i] != S::neg_infinity()).collect();
    // stable sort keeps the original order among ties
    order.sort_by(|&a, &b| {
        f.log_values()[b]
            .partial_cmp(&f.log_values()[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut bps: Vec<S> = Vec::with_capacity(order.len());
    let mut vals: Vec<S> = Vec::with_capacity(order.len());
    let mut ln_acc = S::neg_infinity();
    for &i in &order {
        ln_acc = ln_add_exp(ln_acc, f.ln_length(i));
        let v = f.log_values()[i];
        if vals.last() == Some(&v) {
            *bps.last_mut().expect("paired with vals") = ln_acc;
        } else {
            bps.push(ln_acc);
            vals.push(v);
        }
    }
    let mut out = StepFunction::from_log_values(bps, vals, S::zero())?;
    if let Some(t) = f.tail() {
        // pieces fill [0, t_k] exactly, so the tail keeps its position
        out = out.with_tail(*t)?;
    }
    Ok(if f.is_truncated() { out.mark_truncated() } else { out })
}

/// The distribution function `λ_t = |{f > t}|`.
pub fn distribution_function<S: Real>(f: &StepFunction<S>) -> Result<DistributionCurve<S>> {
    check_finite_pieces(f)?;
    let mut levels: Vec<S> = f.log_values().iter().copied().filter(|&v| v != S::neg_infinity()).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    levels.dedup();
    let mut measures = Vec::with_capacity(levels.len());
    // λ on [w_j, w_{j+1}) is the measure of the pieces with value > w_j
    for j in 0..levels.len() {
        let threshold = if j == 0 { S::neg_infinity() } else { levels[j - 1] };
        let lens: Vec<S> = (0..f.len())
            .filter(|&i| f.log_values()[i] > threshold)
            .map(|i| f.ln_length(i))
            .collect();
        measures.push(crate::scalar::ln_sum_exp(&lens));
    }
    Ok(DistributionCurve {
        ln_levels: levels,
        ln_measures: measures,
        tail: f.tail().map(|t| (*t, f.ln_end())),
    })
}

/// Generalized inverse `μ_s = inf{t ≥ 0 : λ_t ≤ s}` as a step function.
pub fn mu_from_distribution<S: Real>(lambda: &DistributionCurve<S>) -> Result<StepFunction<S>> {
    let m = lambda.ln_levels.len();
    let mut bps = Vec::with_capacity(m);
    let mut vals = Vec::with_capacity(m);
    for j in (0..m).rev() {
        bps.push(lambda.ln_measures[j]);
        vals.push(lambda.ln_levels[j]);
    }
    let out = StepFunction::from_log_values(bps, vals, S::zero())?;
    match &lambda.tail {
        Some((t, _)) => out.with_tail(*t),
        None => Ok(out),
    }
}

/// Outcome of a submajorization test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Submajorization<S> {
    pub holds: bool,
    /// `ln t` where `∫_0^t x* - ∫_0^t y*` is largest.
    pub ln_witness: S,
    /// That largest difference.
    pub worst_gap: S,
}

/// `x ≺≺ y`: `∫_0^t x* ≤ ∫_0^t y*` for all `t`.
///
/// Both partial integrals are piecewise linear between merged breakpoints, so
/// checking the kinks and the behaviour past the last one is exact.
pub fn submajorization_leq<S: Real>(x: &StepFunction<S>, y: &StepFunction<S>) -> Result<Submajorization<S>> {
    let xs = decreasing_rearrangement(x)?;
    let ys = decreasing_rearrangement(y)?;
    let mut points: Vec<S> = xs.log_breakpoints().iter().chain(ys.log_breakpoints()).copied().collect();
    if xs.tail().is_some() || ys.tail().is_some() {
        let start = xs.ln_end().max(ys.ln_end()).max(S::zero());
        let mut u = start;
        let step = lit::<S>(std::f64::consts::LN_10 / 64.0);
        while u < lit(700.0) {
            u = u + step;
            points.push(u);
        }
    }
    points.push(S::infinity());
    points.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    points.dedup();
    let mut worst = S::neg_infinity();
    let mut witness = S::neg_infinity();
    let mut holds = true;
    for &p in &points {
        let a = xs.partial_integral_ln(p);
        let b = ys.partial_integral_ln(p);
        let gap = a - b;
        let slack = lit::<S>(64.0) * S::epsilon() * a.abs().max(b.abs());
        if gap > worst {
            worst = gap;
            witness = p;
        }
        if gap > slack && !(a.is_infinite() && b.is_infinite()) {
            holds = false;
        }
    }
    Ok(Submajorization {
        holds,
        ln_witness: witness,
        worst_gap: worst,
    })
}

/// Pointwise product on the merged breakpoint grid.
pub fn pointwise_product<S: Real>(f: &StepFunction<S>, g: &StepFunction<S>) -> Result<StepFunction<S>> {
    let mut points: Vec<S> = f.log_breakpoints().iter().chain(g.log_breakpoints()).copied().collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    points.dedup();
    let vals: Vec<S> = points
        .iter()
        .map(|&p| {
            let (a, b) = (f.ln_value_at(p), g.ln_value_at(p));
            if a == S::neg_infinity() || b == S::neg_infinity() {
                S::neg_infinity()
            } else {
                a + b
            }
        })
        .collect();
    let f_inf = f.tail().is_some() || f.beyond_last() > S::zero();
    let g_inf = g.tail().is_some() || g.beyond_last() > S::zero();
    let beyond = if f.tail().is_some() || g.tail().is_some() {
        if f_inf && g_inf {
            return Err(Error::input(
                InputCode::Parameter,
                None,
                "product of two functions with continuous tails is not a step function",
            ));
        }
        S::zero()
    } else {
        f.beyond_last() * g.beyond_last()
    };
    StepFunction::from_log_values(points, vals, beyond)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: &[f64]) -> StepFunction<f64> {
        StepFunction::from_unit_pieces(v).unwrap()
    }

    #[test]
    fn sorts_unit_pieces() {
        let r = decreasing_rearrangement(&unit(&[3.0, 1.0, 2.0])).unwrap();
        let v = r.values();
        assert_eq!(v.len(), 3);
        assert!((v[0] - 3.0).abs() < 1e-15 && (v[1] - 2.0).abs() < 1e-15 && (v[2] - 1.0).abs() < 1e-15);
        assert!((r.log_breakpoints()[2].exp() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn indicator_moves_to_origin() {
        let f = StepFunction::new(vec![2f64.ln(), 5f64.ln()], vec![0.0, 1.0], 0.0).unwrap();
        let r = decreasing_rearrangement(&f).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.log_breakpoints()[0].exp() - 3.0).abs() < 1e-14);
        let lam = distribution_function(&f).unwrap();
        assert!((lam.at(0.5) - 3.0).abs() < 1e-14);
        assert_eq!(lam.at(1.0), 0.0);
        let mu = mu_from_distribution(&lam).unwrap();
        assert!((mu.total() - 3.0).abs() < 1e-14);
        assert!((mu.value_at(2.9) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_distribution_gives_zero() {
        let f = unit(&[0.0, 0.0]);
        let lam = distribution_function(&f).unwrap();
        assert_eq!(lam.at(0.0), 0.0);
        let mu = mu_from_distribution(&lam).unwrap();
        assert!(mu.is_empty());
        assert_eq!(mu.total(), 0.0);
    }

    #[test]
    fn submajorization_examples() {
        let x = unit(&[2.0, 0.0]);
        let y = unit(&[1.0, 1.0]);
        let r = submajorization_leq(&x, &y).unwrap();
        assert!(!r.holds);
        assert!((r.ln_witness.exp() - 1.0).abs() < 1e-14);
        assert!(submajorization_leq(&y, &x).unwrap().holds);
        assert!(submajorization_leq(&x, &x).unwrap().holds);
    }

    #[test]
    fn products() {
        let p = pointwise_product(&unit(&[3.0, 2.0]), &unit(&[1.0, 2.0])).unwrap();
        let v = p.values();
        assert!((v[0] - 3.0).abs() < 1e-15 && (v[1] - 4.0).abs() < 1e-15);
        let z = pointwise_product(&unit(&[3.0, 2.0]), &unit(&[0.0, 0.0])).unwrap();
        assert_eq!(z.total(), 0.0);
        let ind = StepFunction::new(vec![1.5f64.ln()], vec![1.0], 0.0).unwrap();
        let cut = pointwise_product(&unit(&[3.0, 2.0]), &ind).unwrap();
        assert!((cut.total() - 4.0).abs() < 1e-14);
    }
}
