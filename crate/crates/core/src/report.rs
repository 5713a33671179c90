//! Stable JSON and CSV emission for traces, convergence reports, and bias
//! series.
//!
//! CSV: '.' decimal separator, LF line endings, header row. Floats are
//! written with Rust's shortest round-trip formatting, so identical inputs
//! produce identical bytes. JSON field order follows struct order.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::euler::ConvergenceReport;
use crate::ff::FfVerifyReport;
use crate::race::{BiasSeries, FitResult};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckpointJson {
    pub x: u64,
    pub re_log_p: f64,
    pub im_log_p: f64,
    pub re_norm: f64,
    pub im_norm: f64,
}

/// JSON mirror of a ConvergenceReport.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReportJson {
    pub label: String,
    pub s: ComplexJson,
    pub r: u32,
    pub nu: i32,
    pub target: ComplexJson,
    pub tail_max_dev: f64,
    pub log_avg_dev: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub checkpoints: Vec<CheckpointJson>,
}

impl From<&ConvergenceReport> for ConvergenceReportJson {
    fn from(rep: &ConvergenceReport) -> Self {
        let t = &rep.trace;
        let checkpoints = t
            .checkpoints
            .iter()
            .enumerate()
            .map(|(i, &x)| CheckpointJson {
                x,
                re_log_p: t.log_values[i].re,
                im_log_p: t.log_values[i].im,
                re_norm: t.normalized.get(i).map_or(f64::NAN, |z| z.re),
                im_norm: t.normalized.get(i).map_or(f64::NAN, |z| z.im),
            })
            .collect();
        Self {
            label: t.spec_label.clone(),
            s: t.s.into(),
            r: rep.r,
            nu: rep.nu,
            target: rep.target.into(),
            tail_max_dev: rep.tail_max_dev,
            log_avg_dev: rep.log_avg_dev,
            tolerance: rep.tolerance,
            converged: rep.converged,
            checkpoints,
        }
    }
}

/// JSON mirror of a function-field verification report (adds the
/// L-polynomial and both nu readings).
#[derive(Debug, Clone, Serialize)]
pub struct FfReportJson {
    #[serde(flatten)]
    pub report: ConvergenceReportJson,
    pub l_coefficients: Vec<ComplexJson>,
    pub l_inverse_roots: Vec<ComplexJson>,
    pub nu_sqrtq: u32,
    pub nu_second_moment: u32,
    pub r_half: u32,
}

impl From<&FfVerifyReport> for FfReportJson {
    fn from(rep: &FfVerifyReport) -> Self {
        Self {
            report: (&rep.report).into(),
            l_coefficients: rep.lpolynomial.coefficients.iter().map(|&z| z.into()).collect(),
            l_inverse_roots: rep.lpolynomial.inverse_roots.iter().map(|&z| z.into()).collect(),
            nu_sqrtq: rep.nu_sqrtq,
            nu_second_moment: rep.nu_second_moment,
            r_half: rep.lpolynomial.r_half,
        }
    }
}

/// JSON mirror of a bias series with its fit and predicted-slope metadata.
#[derive(Debug, Clone, Serialize)]
pub struct BiasSeriesJson {
    pub label: String,
    pub weight: f64,
    pub fit: Option<FitResult>,
    pub predicted_slope: Option<f64>,
    pub checkpoints: Vec<u64>,
    pub values: Vec<f64>,
}

impl BiasSeriesJson {
    pub fn new(series: &BiasSeries, predicted_slope: Option<f64>) -> Self {
        Self {
            label: series.label.clone(),
            weight: series.weight,
            fit: series.fit,
            predicted_slope,
            checkpoints: series.checkpoints.clone(),
            values: series.values.clone(),
        }
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value).expect("serialization cannot fail") + "\n")
}

/// CSV of a product trace: x, re_logP, im_logP, re_norm, im_norm. For a
/// trace that was never normalized the norm columns carry the plain
/// exponentiated product (the r = 0 normalization).
pub fn trace_csv(trace: &crate::euler::ProductTrace) -> String {
    let mut out = String::from("x,re_logP,im_logP,re_norm,im_norm\n");
    for (i, &x) in trace.checkpoints.iter().enumerate() {
        let lv = trace.log_values[i];
        let n = trace.normalized.get(i).copied().unwrap_or_else(|| lv.exp());
        out.push_str(&format!("{x},{},{},{},{}\n", lv.re, lv.im, n.re, n.im));
    }
    out
}

/// CSV of a bias series: x, value, loglogx.
pub fn bias_csv(series: &BiasSeries) -> String {
    let mut out = String::from("x,value,loglogx\n");
    for (&x, &v) in series.checkpoints.iter().zip(&series.values) {
        out.push_str(&format!("{x},{v},{}\n", (x as f64).ln().ln()));
    }
    out
}
