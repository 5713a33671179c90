//! Command implementations. Each returns the process exit code: 0 for
//! success, 2 for a verification verdict that failed, with operational
//! errors bubbling up as `Err` (exit 1).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;

use drh_core::catalog::{parse_label, satake_angles, CatalogLabel, LFunctionSpec};
use drh_core::dirichlet;
use drh_core::elliptic::{bsd_product_trace, rank_fit, EllipticCurve};
use drh_core::error::{DrhError, Result};
use drh_core::euler;
use drh_core::ff;
use drh_core::race;
use drh_core::report::{
    bias_csv, to_json_pretty, trace_csv, BiasSeriesJson, ConvergenceReportJson, FfReportJson,
};
use drh_core::util::geometric_checkpoints;
use drh_core::{PrimeTable, TauTable};

use crate::config::Resolved;

fn write_output(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, content)?;
    Ok(())
}

/// Prime table through the cache when a cache directory is configured.
pub fn primes_cached(limit: u64, cache_dir: Option<&Path>) -> Result<PrimeTable> {
    if let Some(dir) = cache_dir {
        let path = dir.join(format!("primes_{limit}.drhp"));
        if path.exists() {
            let table = drh_core::cache::prime_cache_decode(&drh_core::cache::read_file(&path)?)?;
            if table.limit() != limit {
                return Err(DrhError::Cache(format!(
                    "cache {} holds limit {}, expected {limit}",
                    path.display(),
                    table.limit()
                )));
            }
            return Ok(table);
        }
        let table = PrimeTable::sieve(limit)?;
        drh_core::cache::write_file(&path, &drh_core::cache::prime_cache_bytes(&table))?;
        return Ok(table);
    }
    PrimeTable::sieve(limit)
}

pub fn tau_cached(n: u64, cache_dir: Option<&Path>) -> Result<TauTable> {
    if let Some(dir) = cache_dir {
        let path = dir.join(format!("tau_{n}.drht"));
        if path.exists() {
            return drh_core::cache::tau_cache_decode(&drh_core::cache::read_file(&path)?);
        }
        let table = TauTable::build(n)?;
        drh_core::cache::write_file(&path, &drh_core::cache::tau_cache_bytes(&table))?;
        return Ok(table);
    }
    TauTable::build(n)
}

fn spec_for_label(
    label: &str,
    limit: u64,
    cache_dir: Option<&Path>,
) -> Result<(LFunctionSpec, PrimeTable)> {
    let parsed = parse_label(label)?;
    let primes = primes_cached(limit, cache_dir)?;
    let spec = match parsed {
        CatalogLabel::Zeta => LFunctionSpec::zeta(),
        CatalogLabel::Dirichlet { q, idx } => {
            LFunctionSpec::dirichlet(dirichlet::character(q, idx)?)
        }
        CatalogLabel::Delta => {
            let tau = Arc::new(tau_cached(limit, cache_dir)?);
            LFunctionSpec::delta(tau)
        }
        CatalogLabel::EllipticCurve { a, b } => {
            let curve = EllipticCurve::new(a, b)?;
            let aps = Arc::new(apcache(&curve, &primes, cache_dir)?);
            LFunctionSpec::elliptic(curve, aps, Arc::new(primes.clone()))
        }
    };
    Ok((spec, primes))
}

fn apcache(
    curve: &EllipticCurve,
    primes: &PrimeTable,
    cache_dir: Option<&Path>,
) -> Result<drh_core::elliptic::ApTable> {
    if let Some(dir) = cache_dir {
        let path = dir.join(format!("ap_{}_{}_{}.drhe", curve.a, curve.b, primes.limit()));
        if path.exists() {
            return drh_core::cache::ap_cache_decode(&drh_core::cache::read_file(&path)?);
        }
        let table = curve.ap_table(primes);
        drh_core::cache::write_file(&path, &drh_core::cache::ap_cache_bytes(&table))?;
        return Ok(table);
    }
    Ok(curve.ap_table(primes))
}

pub fn cmd_sieve(limit: u64, out: Option<PathBuf>, cfg: &Resolved) -> Result<i32> {
    let table = primes_cached(limit, cfg.cache_dir.as_deref())?;
    if let Some(path) = out {
        drh_core::cache::write_file(&path, &drh_core::cache::prime_cache_bytes(&table))?;
    }
    println!("{} primes", table.count());
    Ok(0)
}

pub fn cmd_product(
    label: &str,
    s: Complex64,
    limit: u64,
    out: Option<PathBuf>,
    cfg: &Resolved,
) -> Result<i32> {
    let (spec, primes) = spec_for_label(label, limit, cfg.cache_dir.as_deref())?;
    let cps = geometric_checkpoints(1000.min(limit), limit, cfg.checkpoints);
    let trace = euler::partial_product_trace(&spec, s, &primes, &cps)?;
    let csv = trace_csv(&trace);
    match out {
        Some(path) => write_output(&path, &csv)?,
        None => print!("{csv}"),
    }
    let last = trace.log_values.last().unwrap();
    eprintln!(
        "P({limit}, {}) = exp({} + {}i)",
        crate::config::canonical_complex(s),
        last.re,
        last.im
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_drh_verify(
    label: &str,
    s: Complex64,
    limit: u64,
    r: u32,
    target_override: Option<Complex64>,
    out: Option<PathBuf>,
    cfg: &Resolved,
) -> Result<i32> {
    let parsed = parse_label(label)?;
    // the pole case is raw data, not a verdict
    if matches!(parsed, CatalogLabel::Zeta) && (s - Complex64::new(0.5, 0.0)).norm() < 1e-12 {
        let primes = primes_cached(limit, cfg.cache_dir.as_deref())?;
        let cps = geometric_checkpoints(1000.min(limit), limit, cfg.checkpoints);
        let panel = euler::akatsuka_panel(&primes, 0.5, &cps)?;
        #[derive(serde::Serialize)]
        struct AkatsukaJson {
            label: String,
            s0: f64,
            samples: Vec<euler::AkatsukaSample>,
        }
        let json = to_json_pretty(&AkatsukaJson {
            label: "zeta".into(),
            s0: 0.5,
            samples: panel,
        })?;
        match out {
            Some(path) => write_output(&path, &json)?,
            None => print!("{json}"),
        }
        eprintln!("pole case: raw product/compensator panel emitted, no verdict");
        return Ok(0);
    }

    let (spec, primes) = spec_for_label(label, limit, cfg.cache_dir.as_deref())?;
    let l_target = match (target_override, &parsed) {
        (Some(t), _) => t,
        (None, CatalogLabel::Zeta) => {
            dirichlet::character(1, 0)?.l_value(s, r)?
        }
        (None, CatalogLabel::Dirichlet { q, idx }) => {
            let chi = dirichlet::character(*q, *idx)?;
            if chi.is_trivial() {
                return Err(DrhError::Argument(
                    "the trivial character is the pole case; use the zeta label".into(),
                ));
            }
            chi.l_value(s, r)?
        }
        (None, _) => {
            return Err(DrhError::Argument(format!(
                "no independent central evaluator for {label:?}; pass --target-re/--target-im"
            )));
        }
    };
    let nu = match &parsed {
        CatalogLabel::Dirichlet { q, idx }
            if (s - Complex64::new(0.5, 0.0)).norm() < 1e-12 =>
        {
            dirichlet::character(*q, *idx)?.nu_exponent()? as i32
        }
        _ if (s - Complex64::new(0.5, 0.0)).norm() < 1e-12 => spec.nu,
        _ => 0,
    };
    let cps = geometric_checkpoints(1000.min(limit), limit, cfg.checkpoints);
    let trace = euler::partial_product_trace(&spec, s, &primes, &cps)?;
    let report = euler::drh_normalize(trace, r, nu, l_target, cfg.tolerance)?;
    let json = to_json_pretty(&ConvergenceReportJson::from(&report))?;
    match out {
        Some(path) => write_output(&path, &json)?,
        None => print!("{json}"),
    }
    eprintln!(
        "log-avg deviation {:.4} vs tolerance {:.4}: {}",
        report.log_avg_dev,
        report.tolerance,
        if report.converged { "converged" } else { "NOT converged" }
    );
    Ok(if report.converged { 0 } else { 2 })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_race(
    q: u64,
    b: u64,
    a: u64,
    weight: f64,
    limit: u64,
    out: Option<PathBuf>,
    json_out: Option<PathBuf>,
    cfg: &Resolved,
) -> Result<i32> {
    let primes = primes_cached(limit, cfg.cache_dir.as_deref())?;
    let cps = geometric_checkpoints(1000.min(limit), limit, cfg.checkpoints);
    let mut series = race::race_series(q, b, a, weight, &primes, &cps)?;
    let fit = series.fit_loglog();
    if let Err(e) = &fit {
        eprintln!("fit skipped: {e}");
    }
    let csv = bias_csv(&series);
    if let Some(path) = &out {
        write_output(path, &csv)?;
    }
    let json = to_json_pretty(&BiasSeriesJson::new(
        &series,
        Some(race::predicted_race_slope(q)),
    ))?;
    match json_out {
        Some(path) => write_output(&path, &json)?,
        None => print!("{json}"),
    }
    Ok(0)
}

pub fn cmd_tau_bias(
    limit: u64,
    out: Option<PathBuf>,
    json_out: Option<PathBuf>,
    cfg: &Resolved,
) -> Result<i32> {
    let primes = primes_cached(limit, cfg.cache_dir.as_deref())?;
    let tau = tau_cached(limit, cfg.cache_dir.as_deref())?;
    let cps = geometric_checkpoints(1000.min(limit), limit, cfg.checkpoints);
    let mut series = tau.bias_series(&primes, &cps)?;
    if let Err(e) = series.fit_loglog() {
        eprintln!("fit skipped: {e}");
    }
    let csv = bias_csv(&series);
    if let Some(path) = &out {
        write_output(path, &csv)?;
    }
    let json = to_json_pretty(&BiasSeriesJson::new(&series, Some(0.5)))?;
    match json_out {
        Some(path) => write_output(&path, &json)?,
        None => print!("{json}"),
    }
    // Satake angles at a few sample primes as a health check
    let sample: Vec<u64> = primes.primes().iter().copied().take(3).collect();
    let _ = satake_angles(&tau, &sample)?;
    Ok(0)
}

pub fn cmd_bsd(
    a: i64,
    b: i64,
    limit: u64,
    out: Option<PathBuf>,
    json_out: Option<PathBuf>,
    cfg: &Resolved,
) -> Result<i32> {
    let curve = EllipticCurve::new(a, b)?;
    let primes = primes_cached(limit, cfg.cache_dir.as_deref())?;
    let cps = geometric_checkpoints(1000.min(limit), limit, cfg.checkpoints);
    let (trace, _) = bsd_product_trace(&curve, &primes, &cps)?;
    let (r_hat, log_c_hat, residual) = rank_fit(&trace)?;
    if let Some(path) = &out {
        write_output(path, &trace_csv(&trace))?;
    }
    #[derive(serde::Serialize)]
    struct BsdJson {
        label: String,
        r_hat: f64,
        log_c_hat: f64,
        residual: f64,
        minimality_warning: bool,
        checkpoints: Vec<u64>,
    }
    let json = to_json_pretty(&BsdJson {
        label: curve.label(),
        r_hat,
        log_c_hat,
        residual,
        minimality_warning: curve.minimality_warning(),
        checkpoints: trace.checkpoints.clone(),
    })?;
    match json_out {
        Some(path) => write_output(&path, &json)?,
        None => print!("{json}"),
    }
    eprintln!("r_hat = {r_hat:.4}, logC = {log_c_hat:.4}");
    Ok(0)
}

pub fn cmd_ff_verify(
    q: u64,
    modulus: &str,
    char_index: usize,
    d_max: u32,
    out: Option<PathBuf>,
    cfg: &Resolved,
) -> Result<i32> {
    let a = ff::FqPoly::parse(q, modulus)?;
    let chars = ff::character_group(&a)?;
    let chi = chars.get(char_index).ok_or_else(|| {
        DrhError::Argument(format!(
            "character index {char_index} out of range (group order {})",
            chars.len()
        ))
    })?;
    let mut sieve = ff::IrreducibleSieve::new(q)?;
    let counts = ff::place_class_counts(&mut sieve, &a, d_max)?;
    let report = ff::ff_drh_verify(chi, &counts, d_max, cfg.tolerance)?;
    let json = to_json_pretty(&FfReportJson::from(&report))?;
    match out {
        Some(path) => write_output(&path, &json)?,
        None => print!("{json}"),
    }
    let last = report.ratios.last().unwrap();
    eprintln!(
        "R({d_max}) = {last}; log-avg deviation {:.4}: {}",
        report.report.log_avg_dev,
        if report.report.converged { "converged" } else { "NOT converged" }
    );
    Ok(if report.report.converged { 0 } else { 2 })
}

pub fn cmd_ff_trace(q: u64, modulus: &str, char_index: usize, l_max: u32) -> Result<i32> {
    let a = ff::FqPoly::parse(q, modulus)?;
    let chars = ff::character_group(&a)?;
    let chi = chars.get(char_index).ok_or_else(|| {
        DrhError::Argument(format!(
            "character index {char_index} out of range (group order {})",
            chars.len()
        ))
    })?;
    if chi.is_trivial() {
        return Err(DrhError::Argument(
            "trace formula check needs a nontrivial character".into(),
        ));
    }
    let mut sieve = ff::IrreducibleSieve::new(q)?;
    let counts = ff::place_class_counts(&mut sieve, &a, l_max)?;
    let lp = ff::l_polynomial(chi)?;
    let residual = ff::trace_formula_check(chi, &counts, &lp, l_max)?;
    println!("max residual {residual:.3e}");
    Ok(if residual < 1e-8 { 0 } else { 2 })
}

pub fn cmd_report(input: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(input)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| DrhError::Argument(format!("invalid JSON: {e}")))?;
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/drh-report.schema.json"))
            .expect("embedded schema is valid JSON");
    let compiled = jsonschema::JSONSchema::compile(&schema)
        .expect("embedded schema compiles");
    if let Err(errors) = compiled.validate(&value) {
        for e in errors {
            eprintln!("schema violation at {}: {e}", e.instance_path);
        }
        return Err(DrhError::Argument(format!(
            "{} does not validate against the report schema",
            input.display()
        )));
    }
    // compact human summary
    let label = value.get("label").and_then(|v| v.as_str()).unwrap_or("?");
    println!("report: {label}");
    for key in [
        "r", "nu", "tail_max_dev", "log_avg_dev", "converged", "r_hat", "weight", "s0",
    ] {
        if let Some(v) = value.get(key) {
            println!("  {key} = {v}");
        }
    }
    if let Some(fit) = value.get("fit").filter(|f| !f.is_null()) {
        println!("  fit = {fit}");
    }
    println!("valid");
    Ok(0)
}
