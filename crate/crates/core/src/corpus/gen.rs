//! Closed-form constructions of the standard examples.

use crate::error::{Error, InputCode, Result};
use crate::rearrange::{ContinuousTail, Oscillation, SingularValues, Spectrum, SpectrumTail, StepFunction};
use crate::scalar::{lit, Real};

/// Largest `n_max` for the block counterexamples (`ln 2·n²` stays small).
pub const MAX_BLOCKS: u32 = 700;

/// Head length used by [`Kind::Power`] unless given.
pub const DEFAULT_HEAD: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum Kind<S> {
    /// `μ_n = n^{-1/p}`.
    Power { p: S, head: usize },
    /// `μ_n = 1/n`.
    Harmonic,
    /// `μ_n = (2 + sin(ln ln n))/n` for `n ≥ 3`, constant before.
    Oscillating,
    /// `μ(t) = 1/(1 + t)`.
    SmallIdeal,
    /// `z(t) = 1` on `[0, 1]`, `n/2^{n²}` on `(2^{(n-1)²}, 2^{n²}]`.
    CounterexampleZ { n_max: u32 },
    /// `z^{1/p}`.
    CounterexampleX { p: S, n_max: u32 },
    Finite { values: Vec<S>, sort: bool },
}

fn parameter(msg: impl Into<String>) -> Error {
    Error::input(InputCode::Parameter, None, msg)
}

fn blocks<S: Real>(n_max: u32, p: S) -> Result<SingularValues<S>> {
    if n_max == 0 || n_max > MAX_BLOCKS {
        return Err(parameter(format!("n_max must be in 1..={MAX_BLOCKS}, got {n_max}")));
    }
    if !(p > S::zero()) || !p.is_finite() {
        return Err(parameter(format!("p must be positive, got {p}")));
    }
    let ln2 = S::LN_2();
    let mut bps = vec![S::zero()];
    let mut lvs = vec![S::zero()];
    for n in 1..=n_max {
        let nn = lit::<S>(f64::from(n));
        bps.push(ln2 * nn * nn);
        lvs.push((nn.ln() - ln2 * nn * nn) / p);
    }
    let f = StepFunction::from_log_values(bps, lvs, S::zero())?.mark_truncated();
    Ok(SingularValues::Function(f))
}

pub fn gen_spectrum<S: Real>(kind: &Kind<S>) -> Result<SingularValues<S>> {
    match kind {
        Kind::Power { p, head } => {
            let p = *p;
            if !(p > S::zero()) || !p.is_finite() {
                return Err(parameter(format!("power needs p > 0, got {p}")));
            }
            let alpha = S::one() / p;
            let h = (1..=*head).map(|n| lit::<S>(n as f64).powf(-alpha)).collect();
            Ok(Spectrum::new(format!("power({p})"), h, Some(SpectrumTail::power(S::one(), alpha)))?.into())
        }
        Kind::Harmonic => {
            let h = (1..=DEFAULT_HEAD).map(|n| S::one() / lit::<S>(n as f64)).collect();
            Ok(Spectrum::new("harmonic", h, Some(SpectrumTail::power(S::one(), S::one())))?.into())
        }
        Kind::Oscillating => {
            let shape = Oscillation {
                coefficient: S::one(),
                offset: lit(2.0),
                amplitude: S::one(),
                exponent: S::one(),
            };
            let mu3 = shape.ln_value(lit::<S>(3.0).ln()).exp();
            Ok(Spectrum::new("oscillating", vec![mu3; 3], Some(SpectrumTail::LogOscillating(shape)))?.into())
        }
        Kind::SmallIdeal => {
            let tail = ContinuousTail {
                coefficient: S::one(),
                shift: S::one(),
                exponent: S::one(),
            };
            Ok(SingularValues::Function(StepFunction::new(Vec::new(), Vec::new(), S::zero())?.with_tail(tail)?))
        }
        Kind::CounterexampleZ { n_max } => blocks(*n_max, S::one()),
        Kind::CounterexampleX { p, n_max } => blocks(*n_max, *p),
        Kind::Finite { values, sort } => {
            let mut v = values.clone();
            if *sort {
                v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
            }
            Ok(Spectrum::finite("finite", v)?.into())
        }
    }
}

fn number(field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parameter(format!("{what}: cannot parse {field:?}")))
}

fn count(field: &str, what: &str) -> Result<u32> {
    field
        .trim()
        .parse::<u32>()
        .map_err(|_| parameter(format!("{what}: cannot parse {field:?}")))
}

/// Parses `kind[:arg[:arg]]`, e.g. `power:2`, `counterexample_x:2:30`,
/// `finite:3,2,1`.  A trailing `:sort` on `finite` sorts the list.
pub fn parse_kind(spec: &str) -> Result<Kind<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let args = &parts[1..];
    let arity = |lo: usize, hi: usize| {
        if args.len() < lo || args.len() > hi {
            Err(parameter(format!("{}: expected {lo} to {hi} arguments", parts[0])))
        } else {
            Ok(())
        }
    };
    match parts[0] {
        "power" => {
            arity(1, 2)?;
            let head = match args.get(1) {
                Some(h) => count(h, "head")? as usize,
                None => DEFAULT_HEAD,
            };
            Ok(Kind::Power {
                p: number(args[0], "p")?,
                head,
            })
        }
        "harmonic" => arity(0, 0).map(|_| Kind::Harmonic),
        "oscillating" => arity(0, 0).map(|_| Kind::Oscillating),
        "small_ideal" => arity(0, 0).map(|_| Kind::SmallIdeal),
        "counterexample_z" => {
            arity(0, 1)?;
            let n_max = args.first().map(|a| count(a, "n_max")).transpose()?.unwrap_or(100);
            Ok(Kind::CounterexampleZ { n_max })
        }
        "counterexample_x" => {
            arity(1, 2)?;
            let n_max = args.get(1).map(|a| count(a, "n_max")).transpose()?.unwrap_or(100);
            Ok(Kind::CounterexampleX {
                p: number(args[0], "p")?,
                n_max,
            })
        }
        "finite" => {
            arity(1, 2)?;
            let sort = match args.get(1) {
                None => false,
                Some(&"sort") => true,
                Some(other) => return Err(parameter(format!("finite: unknown option {other:?}"))),
            };
            let values = args[0]
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| number(s, "value"))
                .collect::<Result<Vec<_>>>()?;
            Ok(Kind::Finite { values, sort })
        }
        other => Err(parameter(format!("unknown corpus kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_z_pieces() {
        let z = gen_spectrum(&Kind::<f64>::CounterexampleZ { n_max: 3 }).unwrap();
        let SingularValues::Function(f) = &z else { panic!() };
        let vals = f.values();
        let expect = [1.0, 0.5, 2.0 / 16.0, 3.0 / 512.0];
        for (a, b) in vals.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14 * b);
        }
        let ends: Vec<f64> = f.log_breakpoints().iter().map(|b| b.exp()).collect();
        for (a, b) in ends.iter().zip([1.0, 2.0, 16.0, 512.0]) {
            assert!((a - b).abs() < 1e-12 * b);
        }
        assert!(z.truncation_horizon().is_some());
    }

    #[test]
    fn z_times_breakpoint_is_n() {
        let z = gen_spectrum(&Kind::<f64>::CounterexampleZ { n_max: 700 }).unwrap();
        let SingularValues::Function(f) = &z else { panic!() };
        for n in 1..=700usize {
            let prod = f.log_values()[n] + f.log_breakpoints()[n];
            assert!((prod - (n as f64).ln()).abs() < 1e-9, "n = {n}");
        }
        assert!(gen_spectrum(&Kind::<f64>::CounterexampleZ { n_max: 701 }).is_err());
    }

    #[test]
    fn heads() {
        let SingularValues::Sequence(s) = gen_spectrum(&Kind::Power { p: 2.0f64, head: 100 }).unwrap() else {
            panic!()
        };
        assert_eq!(s.mu(1), 1.0);
        assert!((s.mu(4) - 0.5).abs() < 1e-15);
        let SingularValues::Sequence(o) = gen_spectrum(&Kind::<f64>::Oscillating).unwrap() else { panic!() };
        // (2 + sin(ln ln 3))/3 = 0.697970...
        assert!((o.mu(3) - 0.697_970).abs() < 1e-6);
        assert!((o.mu(5) - (2.0 + 5f64.ln().ln().sin()) / 5.0).abs() < 1e-15);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_kind("harmonic").unwrap(), Kind::Harmonic);
        assert_eq!(
            parse_kind("counterexample_x:2:30").unwrap(),
            Kind::CounterexampleX { p: 2.0, n_max: 30 }
        );
        assert_eq!(parse_kind("power:2").unwrap(), Kind::Power { p: 2.0, head: 100 });
        let unsorted = parse_kind("finite:3,1,2").unwrap();
        assert!(gen_spectrum(&unsorted).is_err());
        assert!(gen_spectrum(&parse_kind("finite:3,1,2:sort").unwrap()).is_ok());
        assert!(parse_kind("nope").is_err());
        assert!(parse_kind("power").is_err());
    }
}
