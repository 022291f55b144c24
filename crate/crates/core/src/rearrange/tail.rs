//! Summands for the log-oscillating tail `μ_n = (c·(a + b·sin(ln ln n))/n)^e`.
//!
//! Derivatives are assembled from `G = ln f` in the variable `y = ln x`, with
//! `G'` in closed form and higher derivatives by central differences of `G'`.

use crate::numeric::{gauss_legendre, SmoothTerm};
use crate::scalar::{lit, Real};

/// Shape parameters of the oscillating tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation<S> {
    pub coefficient: S,
    pub offset: S,
    pub amplitude: S,
    pub exponent: S,
}

impl<S: Real> Oscillation<S> {
    /// `ln(a + b sin(ln y))`.
    fn ln_profile(&self, y: S) -> S {
        (self.offset + self.amplitude * y.ln().sin()).ln()
    }

    /// `d/dy ln(a + b sin(ln y))`.
    fn d_ln_profile(&self, y: S) -> S {
        let w = y.ln();
        self.amplitude * w.cos() / (y * (self.offset + self.amplitude * w.sin()))
    }

    /// `ln μ(x)` at `y = ln x`.
    pub fn ln_value(&self, y: S) -> S {
        self.exponent * (self.coefficient.ln() + self.ln_profile(y) - y)
    }

    /// `d/dy ln μ`.
    pub fn d_ln_value(&self, y: S) -> S {
        self.exponent * (self.d_ln_profile(y) - S::one())
    }

    /// Largest `y` with `ln μ(e^y) > level`, searched above `y_lo`.
    pub fn solve_level(&self, ln_level: S, y_lo: S) -> S {
        let e = self.exponent;
        let spread = (self.offset + self.amplitude.abs()).ln();
        let mut hi = self.coefficient.ln() + spread - ln_level / e + S::one();
        let mut lo = y_lo;
        if hi <= lo {
            return lo;
        }
        if self.ln_value(hi) > ln_level {
            hi = hi + hi.abs() + S::one();
        }
        for _ in 0..200 {
            let mid = (lo + hi) * lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.ln_value(mid) > ln_level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// `(x, G'(y))`-based derivatives of `f = e^G` with respect to `x = e^y`.
fn x_derivatives<S: Real>(g: S, d1: impl Fn(S) -> S, y: S) -> (S, S) {
    let h = lit::<S>(1e-3) * y.abs().max(S::one());
    let gp = d1(y);
    let gp_hi = d1(y + h);
    let gp_lo = d1(y - h);
    let gpp = (gp_hi - gp_lo) / (h + h);
    let gppp = (gp_hi - gp - gp + gp_lo) / (h * h);
    let f = g.exp();
    // D = d/dy;  Dg = g G',  D²g = g (G'' + G'²),  D³g = g (G''' + 3 G' G'' + G'³)
    let dg1 = f * gp;
    let dg2 = f * (gpp + gp * gp);
    let dg3 = f * (gppp + lit::<S>(3.0) * gp * gpp + gp * gp * gp);
    let inv = (-y).exp();
    let fx1 = inv * dg1;
    let fx3 = inv * inv * inv * (dg3 - lit::<S>(3.0) * dg2 + dg1 + dg1);
    (fx1, fx3)
}

/// `μ(x)^s` over the oscillating tail.
#[derive(Debug, Clone, Copy)]
pub struct OscPowerTerm<S> {
    pub shape: Oscillation<S>,
    pub power: S,
}

impl<S: Real> OscPowerTerm<S> {
    fn ln_f(&self, y: S) -> S {
        self.power * self.shape.ln_value(y)
    }

    fn d_ln_f(&self, y: S) -> S {
        self.power * self.shape.d_ln_value(y)
    }

    /// Closed-form antiderivative, valid when the combined exponent is 1.
    fn antiderivative(&self, y: S) -> S {
        let w = y.ln();
        let half = lit::<S>(0.5);
        self.shape.coefficient
            * (self.shape.offset * y + self.shape.amplitude * y * (w.sin() - w.cos()) * half)
    }
}

impl<S: Real> SmoothTerm<S> for OscPowerTerm<S> {
    fn value(&self, y: S) -> S {
        self.ln_f(y).exp()
    }

    fn d1(&self, y: S) -> S {
        x_derivatives(self.ln_f(y), |v| self.d_ln_f(v), y).0
    }

    fn d3(&self, y: S) -> S {
        x_derivatives(self.ln_f(y), |v| self.d_ln_f(v), y).1
    }

    fn integral(&self, y_lo: S, y_hi: S) -> S {
        let total = self.power * self.shape.exponent;
        if total == S::one() && y_hi.is_finite() {
            return self.antiderivative(y_hi) - self.antiderivative(y_lo);
        }
        if y_hi.is_infinite() && total <= S::one() {
            return S::infinity();
        }
        // substitute w = ln y = ln ln x; dx = e^{y + w} dw
        let w_lo = y_lo.ln();
        let w_hi = if y_hi.is_finite() {
            y_hi.ln()
        } else {
            (lit::<S>(800.0) / (total - S::one())).ln().max(w_lo + S::one())
        };
        let panels = ((w_hi - w_lo) / lit(0.1)).ceil().to_usize().unwrap_or(1).max(1);
        gauss_legendre(
            |w: S| {
                let y = w.exp();
                (self.ln_f(y) + y + w).exp()
            },
            w_lo,
            w_hi,
            panels,
        )
    }
}

/// `exp(-t·μ(x)^{-q})` over the oscillating tail.
#[derive(Debug, Clone, Copy)]
pub struct OscHeatTerm<S> {
    pub shape: Oscillation<S>,
    pub ln_t: S,
    pub q: S,
}

impl<S: Real> OscHeatTerm<S> {
    fn h(&self, y: S) -> S {
        (self.ln_t - self.q * self.shape.ln_value(y)).exp()
    }

    fn d_ln_f(&self, y: S) -> S {
        self.h(y) * self.q * self.shape.d_ln_value(y)
    }
}

impl<S: Real> SmoothTerm<S> for OscHeatTerm<S> {
    fn value(&self, y: S) -> S {
        (-self.h(y)).exp()
    }

    fn d1(&self, y: S) -> S {
        x_derivatives(-self.h(y), |v| self.d_ln_f(v), y).0
    }

    fn d3(&self, y: S) -> S {
        x_derivatives(-self.h(y), |v| self.d_ln_f(v), y).1
    }

    fn integral(&self, y_lo: S, y_hi: S) -> S {
        let cutoff = lit::<S>(-750.0);
        let y_hi = if y_hi.is_finite() {
            y_hi
        } else {
            let mut step = S::one();
            let mut y = y_lo + step;
            while -self.h(y) + y > cutoff && y < lit(1e6) {
                step = step + step;
                y = y_lo + step;
            }
            y
        };
        let panels = ((y_hi - y_lo) / lit(0.02)).ceil().to_usize().unwrap_or(1).clamp(1, 200_000);
        gauss_legendre(|y: S| (-self.h(y) + y).exp(), y_lo, y_hi, panels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{em_sum, Upper};

    fn shape() -> Oscillation<f64> {
        Oscillation {
            coefficient: 1.0,
            offset: 2.0,
            amplitude: 1.0,
            exponent: 1.0,
        }
    }

    fn mu(n: f64) -> f64 {
        (2.0 + n.ln().ln().sin()) / n
    }

    #[test]
    fn partial_sum_matches_direct() {
        let t = OscPowerTerm {
            shape: shape(),
            power: 1.0,
        };
        let n = 200_000u64;
        let direct = crate::numeric::sum((4..=n).map(|k| mu(k as f64)));
        let s = em_sum(&t, 4, Upper::Index(n), 1000);
        assert!((s.value - direct).abs() < 1e-10, "{} vs {}", s.value, direct);
    }

    #[test]
    fn convergent_power_sum_matches_direct() {
        let t = OscPowerTerm {
            shape: shape(),
            power: 3.0,
        };
        let n = 200_000u64;
        let direct = crate::numeric::sum((4..=n).map(|k| mu(k as f64).powi(3)));
        let rest = em_sum(&t, n + 1, Upper::Infinite, 1000).value;
        let s = em_sum(&t, 4, Upper::Infinite, 1000);
        assert!(rest > 0.0 && rest < 27.0 / (n as f64).powi(2));
        assert!((s.value - direct - rest).abs() < 1e-13, "{}", s.value - direct - rest);
    }

    #[test]
    fn generic_quadrature_agrees_with_closed_form() {
        let t = OscPowerTerm {
            shape: shape(),
            power: 1.0,
        };
        let shifted = OscPowerTerm {
            shape: Oscillation {
                exponent: 0.5,
                ..shape()
            },
            power: 2.0,
        };
        let a = t.integral(3.0, 40.0);
        // force the quadrature path by splitting the exponent differently
        let b = {
            let w_lo = 3.0f64.ln();
            let w_hi = 40.0f64.ln();
            gauss_legendre(
                |w: f64| {
                    let y = w.exp();
                    (shifted.ln_f(y) + y + w).exp()
                },
                w_lo,
                w_hi,
                400,
            )
        };
        assert!(((a - b) / a).abs() < 1e-12);
    }

    #[test]
    fn heat_sum_matches_direct() {
        let t = OscHeatTerm {
            shape: shape(),
            ln_t: (1e-4f64).ln(),
            q: 2.0,
        };
        let direct = crate::numeric::sum((4..=100_000u64).map(|k| (-1e-4 / mu(k as f64).powi(2)).exp()));
        let s = em_sum(&t, 4, Upper::Infinite, 1000);
        assert!(((s.value - direct) / direct).abs() < 1e-10, "{} vs {}", s.value, direct);
    }

    #[test]
    fn level_solver_brackets() {
        let sh = shape();
        let level = 1e-5f64.ln();
        let y = sh.solve_level(level, 4f64.ln());
        assert!(sh.ln_value(y) > level);
        assert!(sh.ln_value(y + 1e-9) <= level + 1e-12);
    }
}
