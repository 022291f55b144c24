//! JSON shapes shared by `analyze` and `check`.

use serde_json::{json, Value};

use crate::error::Error;
use crate::means::LimitEstimate;
use crate::numeric::Summed;
use crate::spaces::{SeminormReport, Supremum};

pub const SCHEMA: &str = "1";

/// A float as JSON; non-finite values become `"inf"`, `"-inf"` or `"nan"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn band(lo: f64, hi: f64) -> Value {
    json!([num(lo), num(hi)])
}

pub fn pairs(points: &[(f64, f64)]) -> Value {
    Value::Array(points.iter().map(|&(a, b)| json!([num(a), num(b)])).collect())
}

pub fn estimate(e: &LimitEstimate<f64>, with_samples: bool) -> Value {
    let mut v = json!({
        "value": e.value.map(num).unwrap_or(Value::Null),
        "band": band(e.liminf, e.limsup),
        "converged": e.converged,
        "model": e.model,
        "level": e.level,
        "residual": num(e.residual),
        "tol": num(e.tol),
    });
    if with_samples {
        v["samples"] = pairs(&e.samples);
    }
    v
}

pub fn supremum(s: &Supremum<f64>) -> Value {
    json!({
        "value": num(s.value),
        "ln_witness": num(s.ln_witness),
        "diverging": s.diverging,
        "witnesses": pairs(&s.witnesses),
    })
}

pub fn summed(s: &Summed<f64>) -> Value {
    json!({ "value": num(s.value), "error": num(s.error) })
}

pub fn seminorm(r: &SeminormReport<f64>) -> Value {
    json!({
        "value": num(r.value),
        "band": band(r.band.0, r.band.1),
        "error": num(r.error),
        "s_grid": r.s_grid.iter().map(|&s| num(s)).collect::<Vec<_>>(),
        "samples": r.samples.iter().map(|&s| num(s)).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

pub fn error(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string() });
    if let Some(code) = e.code() {
        v["code"] = json!(code.as_str());
    }
    if let Some(i) = e.index() {
        v["index"] = json!(i);
    }
    v
}

pub fn verdict(pass: bool, details: Value) -> Value {
    json!({ "pass": pass, "details": details })
}
