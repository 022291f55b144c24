//! `singtrace analyze`: requested quantities for one input, as a report.

use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::cli::report::{self, num};
use crate::corpus::{gen_spectrum, load, parse_kind};
use crate::error::{Error, InputCode, Result};
use crate::heat::{heat_asymptotic_fit, heat_profile_limit, HeatConfig, HeatFitConfig};
use crate::means::{dixmier_estimate, prop_equivalence_triple, DixmierConfig, LimitEstimate};
use crate::rearrange::SingularValues;
use crate::spaces::{
    log_average_norm, marcinkiewicz_norm, quasinorm_f, small_ideal_constant, z1_seminorm, zp_seminorm, PsiFunction,
    PsiKind, Z1Config,
};
use crate::zeta::{residue_estimate, theorem47_check, zeta_limit, ZetaConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    Norm,
    Quasinorm,
    Z1,
    Zp,
    Dixmier,
    ZetaLimit,
    Residue,
    HeatLimit,
    HeatFit,
    SmallIdeal,
    Triple,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Norm => "norm",
            Quantity::Quasinorm => "quasinorm",
            Quantity::Z1 => "z1",
            Quantity::Zp => "zp",
            Quantity::Dixmier => "dixmier",
            Quantity::ZetaLimit => "zeta-limit",
            Quantity::Residue => "residue",
            Quantity::HeatLimit => "heat-limit",
            Quantity::HeatFit => "heat-fit",
            Quantity::SmallIdeal => "small-ideal",
            Quantity::Triple => "triple",
        }
    }

    pub const ALL: [Quantity; 11] = [
        Quantity::Norm,
        Quantity::Quasinorm,
        Quantity::Z1,
        Quantity::Zp,
        Quantity::Dixmier,
        Quantity::ZetaLimit,
        Quantity::Residue,
        Quantity::HeatLimit,
        Quantity::HeatFit,
        Quantity::SmallIdeal,
        Quantity::Triple,
    ];
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .iter()
            .copied()
            .find(|q| q.name() == s.trim())
            .ok_or_else(|| Error::input(InputCode::Parameter, None, format!("unknown quantity {s:?}")))
    }
}

pub fn parse_quantities(list: &str) -> Result<Vec<Quantity>> {
    let mut out: Vec<Quantity> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Quantity::from_str)
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    /// Path, `-` for stdin, or `gen:<kind>[:args]`.
    pub input: String,
    /// `psi1`, `psi_p:<p>`, `log2`, `log1p`, `identity` or `custom:<file>`.
    /// Defaults to `psi_p:<p>` when `p > 1` and `psi1` otherwise.
    pub psi: Option<String>,
    pub p: f64,
    pub q: f64,
    pub quantities: Vec<Quantity>,
    pub tol: f64,
    /// `ln t` horizon for Dixmier averages.
    pub horizon: Option<f64>,
    pub format: OutputFormat,
    pub require_converged: bool,
    pub timing: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            input: String::new(),
            psi: None,
            p: 1.0,
            q: 2.0,
            quantities: Vec::new(),
            tol: 1e-3,
            horizon: None,
            format: OutputFormat::Json,
            require_converged: false,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub report: Value,
    /// Every limit estimate in the report converged.
    pub converged: bool,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::input(InputCode::Parameter, None, msg)
}

pub fn load_input(input: &str) -> Result<SingularValues<f64>> {
    match input.strip_prefix("gen:") {
        Some(spec) => gen_spectrum(&parse_kind(spec)?),
        None => Ok(load(input)?.values),
    }
}

pub fn parse_psi(spec: &str) -> Result<PsiFunction<f64>> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    match (head, arg) {
        ("psi1", None) => Ok(PsiFunction::psi1()),
        ("psi_p", Some(p)) => {
            let p: f64 = p.parse().map_err(|_| bad(format!("psi_p: cannot parse {p:?}")))?;
            PsiFunction::psi_p(p).map_err(|e| bad(e.to_string()))
        }
        ("log2", None) => Ok(PsiFunction::log_sq()),
        ("log1p", None) => Ok(PsiFunction::log1p()),
        ("identity", None) => Ok(PsiFunction::identity()),
        ("custom", Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let knots: Vec<(f64, f64)> = serde_json::from_str(&text)
                .map_err(|e| Error::input(InputCode::Schema, None, format!("{path}: {e}")))?;
            PsiFunction::custom(knots)
        }
        _ => Err(bad(format!("unknown psi {spec:?}"))),
    }
}

struct Run<'a> {
    x: &'a SingularValues<f64>,
    psi: PsiFunction<f64>,
    opts: &'a AnalyzeOptions,
    dcfg: DixmierConfig<f64>,
    zcfg: ZetaConfig<f64>,
    hcfg: HeatConfig<f64>,
    converged: bool,
}

impl Run<'_> {
    fn track(&mut self, e: &LimitEstimate<f64>) -> Value {
        self.converged &= e.converged;
        report::estimate(e, true)
    }

    /// Errors about the input itself abort the run; anything else is reported
    /// in place of the quantity.
    fn guard(&mut self, r: Result<Value>) -> Result<Value> {
        match r {
            Ok(v) => Ok(v),
            Err(e @ Error::InvalidInput { .. }) => Err(e),
            Err(e) => {
                self.converged = false;
                Ok(report::error(&e))
            }
        }
    }

    fn quantity(&mut self, q: Quantity) -> Result<Value> {
        let (x, p) = (self.x, self.opts.p);
        let r = match q {
            Quantity::Norm => Ok(json!({
                "psi": self.psi.label(),
                "marcinkiewicz": report::supremum(&marcinkiewicz_norm(x, &self.psi)),
                "log_average": report::supremum(&log_average_norm(x)),
            })),
            Quantity::Quasinorm => Ok(json!({
                "psi": self.psi.label(),
                "quasinorm": report::supremum(&quasinorm_f(x, &self.psi)),
            })),
            Quantity::Z1 => z1_seminorm(x, &Z1Config::default()).map(|r| report::seminorm(&r)),
            Quantity::Zp => zp_seminorm(x, p, &Z1Config::default()).map(|r| {
                json!({
                    "q": num(r.q),
                    "plus": report::seminorm(&r.plus),
                    "standard": report::seminorm(&r.standard),
                    "ratio": num(r.ratio),
                })
            }),
            Quantity::Dixmier => {
                let psi = self.psi.clone();
                let dcfg = self.dcfg;
                dixmier_estimate(x, &psi, &dcfg).map(|e| json!({ "psi": psi.label(), "estimate": self.track(&e) }))
            }
            Quantity::ZetaLimit => {
                let zcfg = self.zcfg.clone();
                zeta_limit(x, p, &zcfg).map(|z| {
                    json!({
                        "estimate": self.track(&z.estimate),
                        "r_grid": z.curve.r_grid.iter().map(|&r| num(r)).collect::<Vec<_>>(),
                        "errors": z.curve.errors.iter().map(|&r| num(r)).collect::<Vec<_>>(),
                        "psi1_norm": z.psi1_norm.map(num).unwrap_or(Value::Null),
                    })
                })
            }
            Quantity::Residue => {
                let zcfg = self.zcfg.clone();
                residue_estimate(x, p, &zcfg).map(|r| {
                    json!({
                        "estimate": self.track(&r.estimate),
                        "s_grid": r.s_grid.iter().map(|&s| num(s)).collect::<Vec<_>>(),
                    })
                })
            }
            Quantity::HeatLimit => {
                let (hcfg, zcfg, dcfg) = (self.hcfg.clone(), self.zcfg.clone(), self.dcfg);
                heat_profile_limit(x, p, self.opts.q, &hcfg, &zcfg, &dcfg).map(|r| {
                    let zeta = r.zeta.as_ref().map(|e| report::estimate(e, false)).unwrap_or(Value::Null);
                    let dixmier = r.dixmier.as_ref().map(|e| report::estimate(e, false)).unwrap_or(Value::Null);
                    json!({
                        "q": num(r.profile.q),
                        "estimate": self.track(&r.heat),
                        "ln_lambda": r.profile.ln_lambda.iter().map(|&v| num(v)).collect::<Vec<_>>(),
                        "errors": r.profile.errors.iter().map(|&v| num(v)).collect::<Vec<_>>(),
                        "gamma_factor": num(r.gamma_factor),
                        "zeta_side": zeta,
                        "dixmier_side": dixmier,
                        "max_distance": num(r.max_distance),
                        "band_only": r.band_only,
                        "pass": r.pass,
                        "notes": r.notes,
                    })
                })
            }
            Quantity::HeatFit => {
                let cfg = HeatFitConfig {
                    zeta: self.zcfg.clone(),
                    dixmier: self.dcfg,
                    ..HeatFitConfig::default()
                };
                heat_asymptotic_fit(x, &cfg).map(|f| {
                    json!({
                        "accepted": f.accepted,
                        "c": num(f.c),
                        "p_hat": num(f.p_hat),
                        "p_used": num(f.p_used),
                        "residual": num(f.residual),
                        "predicted_residue": f.predicted_residue.map(num).unwrap_or(Value::Null),
                        "residue": f.residue.as_ref().map(|e| report::estimate(e, false)).unwrap_or(Value::Null),
                        "dixmier": f.dixmier.as_ref().map(|e| report::estimate(e, false)).unwrap_or(Value::Null),
                        "notes": f.notes,
                    })
                })
            }
            Quantity::SmallIdeal => Ok(report::supremum(&small_ideal_constant(x))),
            Quantity::Triple => {
                let (psi, dcfg) = (self.psi.clone(), self.dcfg);
                prop_equivalence_triple(x, &psi, &dcfg).map(|t| {
                    json!({
                        "psi": psi.label(),
                        "weighted_mean": self.track(&t.weighted_mean),
                        "truncated": self.track(&t.truncated),
                        "windowed": self.track(&t.windowed),
                        "max_band_distance": num(t.max_band_distance),
                        "flags_agree": t.flags_agree,
                    })
                })
            }
        };
        self.guard(r)
    }
}

fn value_of(v: &Value, path: &[&str]) -> Option<f64> {
    let mut cur = v;
    for k in path {
        cur = cur.get(k)?;
    }
    match cur {
        Value::Number(n) => n.as_f64(),
        Value::String(s) if s == "inf" => Some(f64::INFINITY),
        _ => None,
    }
}

pub fn analyze(opts: &AnalyzeOptions) -> Result<Analysis> {
    let start = Instant::now();
    if opts.quantities.is_empty() {
        return Err(bad("no quantities requested"));
    }
    if !(opts.p > 0.0) || !opts.p.is_finite() || !(opts.q > 0.0) || !opts.q.is_finite() {
        return Err(bad("p and q must be positive"));
    }
    if !(opts.tol > 0.0) {
        return Err(bad("tol must be positive"));
    }
    let psi = match &opts.psi {
        Some(s) => parse_psi(s)?,
        None if opts.p > 1.0 => PsiFunction::psi_p(opts.p)?,
        None => PsiFunction::psi1(),
    };
    if opts.quantities.contains(&Quantity::Triple) && matches!(psi.kind(), PsiKind::PsiP(_)) {
        return Err(bad("triple needs psi(2t)/psi(t) -> 1, which psi_p does not satisfy"));
    }
    let x = load_input(&opts.input)?;
    let mut dcfg = DixmierConfig::default().with_tol(opts.tol);
    dcfg.horizon = opts.horizon;
    let mut run = Run {
        x: &x,
        psi,
        opts,
        dcfg,
        zcfg: ZetaConfig::default().with_tol(opts.tol),
        hcfg: HeatConfig::default().with_tol(opts.tol),
        converged: true,
    };
    let mut quantities = Map::new();
    for &q in &opts.quantities {
        quantities.insert(q.name().to_string(), run.quantity(q)?);
    }
    let verdicts = verdicts(&mut run, &quantities)?;
    let mut report = json!({
        "schema": report::SCHEMA,
        "input": opts.input,
        "config": {
            "psi": run.psi.label(),
            "p": num(opts.p),
            "q": num(opts.q),
            "tol": num(opts.tol),
            "horizon": opts.horizon.map(num).unwrap_or(Value::Null),
            "dixmier_points": run.dcfg.points,
            "r_grid": run.zcfg.r_grid.iter().map(|&r| num(r)).collect::<Vec<_>>(),
            "ln_lambda": run.hcfg.ln_lambda.iter().map(|&r| num(r)).collect::<Vec<_>>(),
        },
        "quantities": quantities,
        "verdicts": verdicts,
    });
    if opts.timing {
        report["timing"] = json!({ "seconds": start.elapsed().as_secs_f64() });
    }
    Ok(Analysis {
        report,
        converged: run.converged,
    })
}

/// Cross-checks implied by the requested quantities.
fn verdicts(run: &mut Run, q: &Map<String, Value>) -> Result<Value> {
    let has = |k: &str| q.contains_key(k);
    let mut out = Map::new();
    if has("zeta-limit") && has("dixmier") {
        let (zcfg, dcfg) = (run.zcfg.clone(), run.dcfg);
        let r = theorem47_check(run.x, run.opts.p, &zcfg, &dcfg).map(|r| {
            report::verdict(
                r.pass,
                json!({
                    "zeta": report::estimate(&r.zeta.estimate, false),
                    "p_times_dixmier": report::estimate(&r.dixmier, false),
                    "distance": num(r.distance),
                    "band_only": r.band_only,
                    "convexification_error": num(r.convexification_error),
                }),
            )
        });
        out.insert("thm47".into(), run.guard(r)?);
    }
    // the separation claim is about inputs whose quasinorm blows up; nothing to judge otherwise
    let qn = if has("quasinorm") { value_of(&q["quasinorm"], &["quasinorm", "value"]) } else { None };
    if has("zp") && qn.is_some_and(f64::is_infinite) {
        let zp = value_of(&q["zp"], &["plus", "value"]);
        let pass = zp.is_some_and(f64::is_finite);
        out.insert(
            "separation".into(),
            report::verdict(pass, json!({ "zp_plus": zp.map(num), "quasinorm": qn.map(num) })),
        );
    }
    if has("z1") && has("norm") {
        let z1 = value_of(&q["z1"], &["value"]);
        let nm = value_of(&q["norm"], &["marcinkiewicz", "value"]);
        let pass = matches!((z1, nm), (Some(a), Some(b)) if a <= b + 1e-6);
        out.insert("thm44".into(), report::verdict(pass, json!({ "z1": z1.map(num), "norm": nm.map(num) })));
    }
    if let Some(h) = q.get("heat-limit") {
        if let Some(pass) = h.get("pass").and_then(Value::as_bool) {
            out.insert("thm51".into(), report::verdict(pass, json!({ "max_distance": h["max_distance"] })));
        }
    }
    if let Some(t) = q.get("triple") {
        if let (Some(d), Some(agree)) = (value_of(t, &["max_band_distance"]), t.get("flags_agree").and_then(Value::as_bool)) {
            let pass = agree && d <= run.opts.tol;
            out.insert("triple".into(), report::verdict(pass, json!({ "max_band_distance": num(d), "flags_agree": agree })));
        }
    }
    if let Some(f) = q.get("heat-fit") {
        if let (Some(pred), Some(res)) = (
            value_of(f, &["predicted_residue"]),
            value_of(f, &["residue", "value"]),
        ) {
            let pass = (pred - res).abs() <= 0.02 * res.abs().max(1e-12);
            out.insert("prop52".into(), report::verdict(pass, json!({ "predicted": num(pred), "residue": num(res) })));
        }
    }
    Ok(Value::Object(out))
}

/// One row per scalar: `quantity,value,lo,hi,converged`.
pub fn to_csv(report: &Value) -> String {
    fn cell(v: Option<&Value>) -> String {
        match v {
            Some(Value::Number(n)) => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
            Some(Value::String(s)) => s.clone(),
            Some(Value::Bool(b)) => b.to_string(),
            _ => String::new(),
        }
    }
    fn rows(prefix: &str, v: &Value, out: &mut Vec<String>) {
        let Some(obj) = v.as_object() else { return };
        if obj.contains_key("band") && obj.contains_key("converged") {
            let b = obj["band"].as_array();
            out.push(format!(
                "{prefix},{},{},{},{}",
                cell(obj.get("value")),
                cell(b.and_then(|b| b.first())),
                cell(b.and_then(|b| b.get(1))),
                cell(obj.get("converged"))
            ));
            return;
        }
        if obj.contains_key("value") && !obj["value"].is_object() {
            out.push(format!("{prefix},{},,,", cell(obj.get("value"))));
            return;
        }
        for (k, child) in obj {
            if child.is_object() {
                rows(&format!("{prefix}.{k}"), child, out);
            }
        }
    }
    let mut out = vec!["quantity,value,lo,hi,converged".to_string()];
    if let Some(q) = report.get("quantities").and_then(Value::as_object) {
        for (k, v) in q {
            rows(k, v, &mut out);
        }
    }
    if let Some(v) = report.get("verdicts").and_then(Value::as_object) {
        for (k, v) in v {
            out.push(format!("verdict.{k},{},,,", cell(v.get("pass"))));
        }
    }
    out.join("\n") + "\n"
}
