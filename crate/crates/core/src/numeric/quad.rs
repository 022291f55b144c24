//! Composite Gauss–Legendre quadrature.

use crate::numeric::sum::CompensatedSum;
use crate::scalar::{lit, Real};

const NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// ∫_a^b f with `panels` equal 8-point Gauss–Legendre panels.
pub fn gauss_legendre<S: Real, F: Fn(S) -> S>(f: F, a: S, b: S, panels: usize) -> S {
    let panels = panels.max(1);
    let width = (b - a) / lit(panels as f64);
    let half = width * lit(0.5);
    let mut acc = CompensatedSum::new();
    for k in 0..panels {
        let mid = a + width * (lit::<S>(k as f64) + lit(0.5));
        for (&x, &w) in NODES.iter().zip(WEIGHTS.iter()) {
            let dx = half * lit(x);
            acc.add(lit::<S>(w) * half * (f(mid - dx) + f(mid + dx)));
        }
    }
    acc.value()
}

/// Trapezoid rule on arbitrary (increasing) abscissae; returns the running integral.
pub fn cumulative_trapezoid<S: Real>(x: &[S], y: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = CompensatedSum::new();
    if x.is_empty() {
        return out;
    }
    out.push(S::zero());
    for i in 1..x.len() {
        acc.add((x[i] - x[i - 1]) * (y[i] + y[i - 1]) * lit(0.5));
        out.push(acc.value());
    }
    out
}
