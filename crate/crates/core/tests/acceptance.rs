//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use singtrace::cli::{analyze, run_suite, AnalyzeOptions, CheckOptions, Quantity, Suite};
use singtrace::corpus::{gen_spectrum, write_json, Kind, MAX_BLOCKS};
use singtrace::heat::{
    heat_asymptotic_fit, heat_profile_limit, karamata_limit, karamata_transform, BetaFunction, HeatConfig,
    HeatFitConfig, KaramataConfig,
};
use singtrace::means::{dixmier_estimate, prop_equivalence_triple, DixmierConfig};
use singtrace::spaces::{quasinorm_f, z1_seminorm, zp_seminorm, PsiFunction, Z1Config};
use singtrace::zeta::{residue_estimate, theorem47_check, ZetaConfig};
use singtrace::{Result, SingularValues64};

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        summary: summary.into(),
    })
}

fn corpus(kind: Kind<f64>) -> SingularValues64 {
    gen_spectrum(&kind).expect("corpus member")
}

/// `ζ(σ)` by Euler-Maclaurin with `N = 1000` and three Bernoulli terms.
fn riemann_zeta(sigma: f64) -> f64 {
    let n = 1000.0f64;
    let head: f64 = (1..1000).map(|k| (k as f64).powf(-sigma)).sum();
    let s = sigma;
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * n.powf(-s - 3.0)
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * n.powf(-s - 5.0)
}

fn c1_riemann_residue() -> Result<Outcome> {
    let r = z1_seminorm(&corpus(Kind::Harmonic), &Z1Config::default())?;
    let oracle_gap = r
        .s_grid
        .iter()
        .zip(&r.samples)
        .map(|(&s, &v)| ((v - s * riemann_zeta(1.0 + s)) / v).abs())
        .fold(0.0, f64::max);
    outcome(
        (r.value - 1.0).abs() <= 1e-3 && oracle_gap <= 1e-9,
        format!("z1(harmonic) = {:.9}, worst sample gap to s*zeta(1+s) {oracle_gap:.1e}", r.value),
    )
}

fn c2_zeta_equals_dixmier() -> Result<Outcome> {
    let members = [
        ("harmonic", Kind::Harmonic, 1.0, 1.0, 2e-3),
        ("power(2)", Kind::Power { p: 2.0, head: 100 }, 2.0, 2.0, 2e-3),
        ("power(3)", Kind::Power { p: 3.0, head: 100 }, 3.0, 3.0, 2e-3),
        ("counterexample_z", Kind::CounterexampleZ { n_max: MAX_BLOCKS }, 1.0, 0.5 / LN_2, 1e-2),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, kind, p, expected, tol) in members {
        let r = theorem47_check(&corpus(kind), p, &ZetaConfig::default(), &DixmierConfig::default())?;
        let z = r.zeta.estimate.center();
        let d = r.dixmier.center();
        let ok = r.distance <= 2e-3 && (z - expected).abs() <= tol && (d - expected).abs() <= tol;
        pass &= ok;
        parts.push(format!("{name}: {z:.5}/{d:.5}"));
    }
    outcome(pass, format!("zeta limit / p*Dixmier: {}", parts.join(", ")))
}

fn c3_heat_gamma_factor() -> Result<Outcome> {
    let run = |kind: Kind<f64>, p: f64, q: f64| {
        heat_profile_limit(
            &corpus(kind),
            p,
            q,
            &HeatConfig::default(),
            &ZetaConfig::default(),
            &DixmierConfig::default(),
        )
    };
    let h = run(Kind::Harmonic, 1.0, 2.0)?;
    let value = h.heat.center();
    let mut pass = h.pass && (value - PI.sqrt() / 2.0).abs() <= 1e-3 && h.zeta.is_some();
    for (p, q) in [(2.0, 2.0), (2.0, 1.0), (3.0, 2.0)] {
        let r = run(Kind::Power { p, head: 100 }, p, q)?;
        pass &= r.pass && r.zeta.is_some() && r.dixmier.is_some();
    }
    outcome(pass, format!("heat limit(harmonic, 1, 2) = {value:.6}; three-way overlap on (2,2), (2,1), (3,2)"))
}

fn c4_heat_to_residue() -> Result<Outcome> {
    let x = corpus(Kind::Harmonic);
    let f = heat_asymptotic_fit(&x, &HeatFitConfig::default())?;
    let residue = residue_estimate(&x, 1.0, &ZetaConfig::default())?.estimate.center();
    let c = PI.sqrt() / 2.0;
    let predicted = f.predicted_residue.unwrap_or(f64::NAN);
    let pass = f.accepted
        && (f.p_hat - 1.0).abs() <= 0.02
        && ((f.c - c) / c).abs() <= 0.02
        && (predicted - 1.0).abs() <= 0.02
        && ((predicted - residue) / residue).abs() <= 0.02;
    outcome(
        pass,
        format!("p_hat = {:.4}, C = {:.4}, predicted residue {predicted:.4}, residue {residue:.6}", f.p_hat, f.c),
    )
}

fn suite_outcome(suite: Suite, label: &str) -> Result<Outcome> {
    let r = run_suite(suite, &CheckOptions::default());
    outcome(
        r.pass(),
        format!("{label}: {} cases, {} violations", r.cases.len(), r.failures()),
    )
}

fn c5_z1_chain() -> Result<Outcome> {
    let r = run_suite(Suite::Thm44, &CheckOptions::default());
    outcome(
        r.pass() && r.cases.len() == 20,
        format!("z1 <= norm and log-average <= e*z1 on {} spectra, {} violations", r.cases.len(), r.failures()),
    )
}

fn c6_separation() -> Result<Outcome> {
    let start = Instant::now();
    let x = corpus(Kind::CounterexampleX { p: 2.0, n_max: 30 });
    let zp = zp_seminorm(&x, 2.0, &Z1Config::default())?;
    let q = quasinorm_f(&x, &PsiFunction::psi_p(2.0)?);
    let expected = (0.5 / LN_2).sqrt();
    // one witness per block end, each ratio sqrt(n)
    let ratios: Vec<f64> = q.witnesses.iter().map(|w| w.1).collect();
    let monotone = ratios.windows(2).all(|w| w[1] >= w[0]);
    let blocks_seen = ratios.iter().filter(|&&r| r > 1.0).count() >= 29;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = ((zp.plus.value - expected) / expected).abs() <= 0.05
        && q.value.is_infinite()
        && q.diverging
        && monotone
        && blocks_seen
        && elapsed < 1.0;
    outcome(
        pass,
        format!(
            "zp+ = {:.4} (expected {expected:.4}), quasinorm = {}, {} monotone witnesses, {elapsed:.2}s",
            zp.plus.value,
            q.value,
            ratios.len()
        ),
    )
}

fn c7_triple() -> Result<Outcome> {
    let cfg = DixmierConfig::default();
    let h = prop_equivalence_triple(&corpus(Kind::Harmonic), &PsiFunction::psi1(), &cfg)?;
    let z = prop_equivalence_triple(
        &corpus(Kind::CounterexampleZ { n_max: 100 }),
        &PsiFunction::log1p(),
        &cfg.with_tol(1e-2),
    )?;
    let suite = run_suite(Suite::Triple, &CheckOptions::default());
    let pass = h.max_band_distance <= 1e-3 && z.max_band_distance <= 1e-2 && suite.pass();
    outcome(
        pass,
        format!(
            "band distance {:.1e} (harmonic, psi1), {:.1e} (counterexample_z, log(1+t)); flags agree on {} members",
            h.max_band_distance,
            z.max_band_distance,
            suite.cases.len()
        ),
    )
}

fn c8_karamata() -> Result<Outcome> {
    let c = 3.0;
    let linear = BetaFunction::new(vec![(0.0, 0.0), (1e9, c * 1e9)])?;
    let mut worst = 0.0f64;
    for k in 0..=7 {
        worst = worst.max((karamata_transform(&linear, 10f64.powi(k))? - c).abs());
    }
    let root = BetaFunction::from_fn(|t: f64| t + t.sqrt(), 1e-6, 1e12, 20_000)?;
    let r = karamata_limit(&root, &KaramataConfig::default())?;
    let v = r.transform.value.unwrap_or(f64::NAN);
    outcome(
        worst < 1e-8 && (v - 1.0).abs() <= 1e-3,
        format!("beta = 3t error {worst:.1e}; beta = t + sqrt(t) -> {v:.6}"),
    )
}

fn c9_intertwining() -> Result<Outcome> {
    suite_outcome(Suite::Intertwine, "LHL^-1 = M over 3 decades, band and dilation checks")
}

fn c10_oscillating() -> Result<Outcome> {
    let e = dixmier_estimate(&corpus(Kind::Oscillating), &PsiFunction::psi1(), &DixmierConfig::default())?;
    let width = e.width();
    let pass = !e.converged && ((width - 2f64.sqrt()) / 2f64.sqrt()).abs() <= 0.1;
    outcome(
        pass,
        format!("converged = {}, band [{:.4}, {:.4}], width {width:.4}", e.converged, e.liminf, e.limsup),
    )
}

fn c11_properties() -> Result<Outcome> {
    let opts = CheckOptions::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for suite in [Suite::Galois, Suite::Holder, Suite::Norms] {
        let r = run_suite(suite, &opts);
        pass &= r.pass();
        parts.push(format!("{suite} {}/{}", r.cases.len() - r.failures(), r.cases.len()));
    }
    outcome(pass, parts.join(", "))
}

fn c12_determinism() -> Result<Outcome> {
    let opts = AnalyzeOptions {
        input: "gen:harmonic".into(),
        quantities: Quantity::ALL.to_vec(),
        ..AnalyzeOptions::default()
    };
    let render = || -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        write_json(&mut buf, &analyze(&opts)?.report)?;
        Ok(buf)
    };
    let (a, b) = (render()?, render()?);
    outcome(a == b, format!("two full reports of gen:harmonic, {} bytes each", a.len()))
}

fn main() -> ExitCode {
    type Criterion = fn() -> Result<Outcome>;
    let criteria: [(&str, Criterion); 12] = [
        ("Z1 seminorm of the harmonic sequence", c1_riemann_residue),
        ("zeta limit equals p times Dixmier", c2_zeta_equals_dixmier),
        ("heat Gamma factor", c3_heat_gamma_factor),
        ("heat asymptotics to residue", c4_heat_to_residue),
        ("Z1 chain on a random corpus", c5_z1_chain),
        ("Z_p against quasinorm separation", c6_separation),
        ("triple equivalence", c7_triple),
        ("Karamata transform", c8_karamata),
        ("transform intertwining", c9_intertwining),
        ("oscillating spectrum is not measurable", c10_oscillating),
        ("property suites", c11_properties),
        ("deterministic reports", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, summary) = match check() {
            Ok(o) => (o.pass, o.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {summary} ({:.2}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
