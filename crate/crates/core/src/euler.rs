//! Checkpointed partial Euler products in the critical strip and the
//! normalization/verdict machinery of the Deep Riemann Hypothesis.
//!
//! Products are accumulated in log space only (exponentiation happens at
//! checkpoint snapshots): tens of millions of factors of modulus ~1 would
//! destroy precision multiplicatively. Accumulation is parallel over fixed
//! prime blocks of 2^16, each block summed serially and blocks combined in
//! index order, so traces are bit-identical for any worker count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::LFunctionSpec;
use crate::dirichlet::DirichletCharacter;
use crate::error::{DrhError, Result};
use crate::primes::{PrimeTable, BLOCK_SIZE};
use crate::race::BiasSeries;
use crate::util::{tail_half, Kahan, KahanComplex, EULER_GAMMA};

/// Checkpointed log-partial-product values of one L-function at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTrace {
    pub spec_label: String,
    /// evaluation point (after normalization shift)
    pub s: Complex64,
    pub checkpoints: Vec<u64>,
    /// log prod_{p <= x_i} L_p(s)^{-1}, principal branch per factor
    pub log_values: Vec<Complex64>,
    /// (log x_i)^r * P(x_i), filled in by [`drh_normalize`]
    pub normalized: Vec<Complex64>,
    pub predicted_limit: Option<Complex64>,
}

/// Verdict object for a normalized-product convergence check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub trace: ProductTrace,
    pub r: u32,
    pub nu: i32,
    /// sqrt(2)^nu * L^(r)(s) / (e^{r gamma} r!)
    pub target: Complex64,
    /// max relative deviation |normalized/target - 1| over the tail half
    pub tail_max_dev: f64,
    /// dx/x-weighted mean relative deviation over the tail half
    pub log_avg_dev: f64,
    pub tolerance: f64,
    pub converged: bool,
}

/// One accumulated block: totals plus checkpoint partials inside the block.
struct BlockSum {
    total: KahanComplex,
    partials: Vec<(usize, Complex64)>,
    max_term_modulus: f64,
    violation: Option<u64>,
}

/// Partial Euler products of `spec` at `s`, snapshotted at each checkpoint.
///
/// Errors with an integrity diagnostic naming p if any |alpha_j(p) p^{-s}|
/// reaches 1 (an axiom violation; cannot happen for Re(s) > 0 with unitary
/// parameters).
pub fn partial_product_trace(
    spec: &LFunctionSpec,
    s: Complex64,
    primes: &PrimeTable,
    checkpoints: &[u64],
) -> Result<ProductTrace> {
    let &max = checkpoints
        .last()
        .ok_or_else(|| DrhError::Argument("need at least one checkpoint".into()))?;
    if max > primes.limit() {
        return Err(DrhError::Range(format!(
            "checkpoint {max} beyond sieve limit {}",
            primes.limit()
        )));
    }
    let mut sorted = checkpoints.to_vec();
    sorted.sort_unstable();
    if sorted != checkpoints {
        return Err(DrhError::Argument("checkpoints must be ascending".into()));
    }

    let ps = primes.primes_upto(max as f64)?;
    // partition prime indices by fixed value blocks [k*2^16, (k+1)*2^16)
    let mut block_ranges: Vec<(usize, usize)> = Vec::new();
    {
        let mut start = 0usize;
        while start < ps.len() {
            let block = ps[start] / BLOCK_SIZE;
            let hi = (block + 1) * BLOCK_SIZE;
            let end = start + ps[start..].partition_point(|&p| p < hi);
            block_ranges.push((start, end));
            start = end;
        }
    }

    // assign each checkpoint to the block holding the largest prime <= x
    // (checkpoints below the first prime keep the empty-product value 0)
    let blocks: Vec<BlockSum> = block_ranges
        .par_iter()
        .enumerate()
        .map(|(bi, &(lo, hi))| {
            let mut acc = KahanComplex::new();
            let mut partials = Vec::new();
            let mut max_mod = 0.0f64;
            let mut violation = None;
            let range_lo = ps[lo];
            let range_hi = block_ranges
                .get(bi + 1)
                .map(|&(next_lo, _)| ps[next_lo])
                .unwrap_or(u64::MAX);
            let mut cp_iter = checkpoints
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x >= range_lo && x < range_hi)
                .peekable();
            for &p in &ps[lo..hi] {
                while let Some(&(ci, &x)) = cp_iter.peek() {
                    if p > x {
                        partials.push((ci, acc.total()));
                        cp_iter.next();
                    } else {
                        break;
                    }
                }
                let pf = p as f64;
                let p_minus_s = (-s * pf.ln()).exp();
                for alpha in spec.local_params(p) {
                    let t = alpha * p_minus_s;
                    let m = t.norm();
                    if m >= 1.0 {
                        violation.get_or_insert(p);
                    }
                    if m > max_mod {
                        max_mod = m;
                    }
                    // -log(1 - t), principal branch
                    acc.add(-(Complex64::new(1.0, 0.0) - t).ln());
                }
            }
            for (ci, _) in cp_iter {
                partials.push((ci, acc.total()));
            }
            BlockSum { total: acc, partials, max_term_modulus: max_mod, violation }
        })
        .collect();

    let mut log_values = vec![Complex64::new(0.0, 0.0); checkpoints.len()];
    let mut running = KahanComplex::new();
    for b in &blocks {
        if let Some(p) = b.violation {
            return Err(DrhError::Integrity(format!(
                "|alpha(p) p^{{-s}}| >= 1 at p = {p}: local axiom violated"
            )));
        }
        for &(ci, partial) in &b.partials {
            log_values[ci] = running.total() + partial;
        }
        running.merge(b.total);
    }
    debug_assert!(blocks.iter().all(|b| b.max_term_modulus < 1.0));

    Ok(ProductTrace {
        spec_label: spec.label.clone(),
        s,
        checkpoints: checkpoints.to_vec(),
        log_values,
        normalized: Vec::new(),
        predicted_limit: None,
    })
}

/// Normalize a trace per the DRH prediction and compare against the target
/// sqrt(2)^nu * l_target / (e^{r gamma} r!).
///
/// `l_target` must come from an independent evaluator (Hurwitz route,
/// polynomial derivative). Deviations are relative and measured over the
/// tail half of the checkpoints; `log_avg_dev` weights them by dx/x.
pub fn drh_normalize(
    mut trace: ProductTrace,
    r: u32,
    nu: i32,
    l_target: Complex64,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if l_target.norm() < 1e-300 {
        return Err(DrhError::Inconsistency(
            "L^(r)(s) = 0: the vanishing order r should have been larger".into(),
        ));
    }
    let r_fact: f64 = (1..=r).map(|k| k as f64).product();
    let target = 2f64.sqrt().powi(nu) * l_target / ((r as f64 * EULER_GAMMA).exp() * r_fact);
    trace.normalized = trace
        .checkpoints
        .iter()
        .zip(&trace.log_values)
        .map(|(&x, &lv)| {
            let loglog = (x as f64).ln().ln();
            (lv + Complex64::new(r as f64 * loglog, 0.0)).exp()
        })
        .collect();
    trace.predicted_limit = Some(target);

    let tail_x = tail_half(&trace.checkpoints);
    let tail_n = tail_half(&trace.normalized);
    let devs: Vec<f64> = tail_n.iter().map(|z| (z / target - 1.0).norm()).collect();
    let tail_max_dev = devs.iter().cloned().fold(0.0, f64::max);
    // trapezoid weights in log x
    let mut wsum = 0.0;
    let mut dsum = 0.0;
    for i in 0..devs.len() {
        let lx = (tail_x[i] as f64).ln();
        let prev = if i == 0 { lx } else { (tail_x[i - 1] as f64).ln() };
        let next = if i + 1 == devs.len() { lx } else { (tail_x[i + 1] as f64).ln() };
        let w = (next - prev) / 2.0;
        wsum += w;
        dsum += w * devs[i];
    }
    let log_avg_dev = if wsum > 0.0 { dsum / wsum } else { tail_max_dev };
    let converged = log_avg_dev < tolerance;
    Ok(ConvergenceReport { trace, r, nu, target, tail_max_dev, log_avg_dev, tolerance, converged })
}

/// The DRH-equivalent sum theta(x, chi) = sum_{p<=x} chi(p) log p at each
/// checkpoint (real part for complex characters). Ratios against
/// sqrt(x) log x are available via [`equivalent_sum_ratios`].
pub fn drh_equivalent_sum(
    chi: &DirichletCharacter,
    primes: &PrimeTable,
    checkpoints: &[u64],
) -> Result<BiasSeries> {
    let &max = checkpoints
        .last()
        .ok_or_else(|| DrhError::Argument("need at least one checkpoint".into()))?;
    if max > primes.limit() {
        return Err(DrhError::Range(format!(
            "checkpoint {max} beyond sieve limit {}",
            primes.limit()
        )));
    }
    let real = chi.order() <= 2;
    let mut acc = Kahan::new();
    let mut values = Vec::with_capacity(checkpoints.len());
    let mut iter = primes.primes().iter().peekable();
    for &cp in checkpoints {
        while let Some(&&p) = iter.peek() {
            if p > cp {
                break;
            }
            let logp = (p as f64).ln();
            if real {
                acc.add(chi.eval_real(p) as f64 * logp);
            } else {
                acc.add(chi.eval(p).re * logp);
            }
            iter.next();
        }
        values.push(acc.total());
    }
    Ok(BiasSeries {
        label: format!("theta(x, chi mod {})", chi.modulus()),
        weight: 0.0,
        checkpoints: checkpoints.to_vec(),
        values,
        fit: None,
    })
}

/// theta(x, chi) / (sqrt(x) log x) for each checkpoint of an equivalent-sum
/// series.
pub fn equivalent_sum_ratios(series: &BiasSeries) -> Vec<f64> {
    series
        .checkpoints
        .iter()
        .zip(&series.values)
        .map(|(&x, &v)| {
            let xf = x as f64;
            v / (xf.sqrt() * xf.ln())
        })
        .collect()
}

/// The k-decomposition of log prod_{p<=x} (1 - chi(p) p^{-1/2})^{-1} at one
/// checkpoint: lhs, the k=1 sum, the k=2 sum, and the absolutely convergent
/// k>=3 tail (summed independently, term by term).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogIdentitySample {
    pub x: u64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub k1_re: f64,
    pub k1_im: f64,
    pub k2_re: f64,
    pub k2_im: f64,
    pub tail_re: f64,
    pub tail_im: f64,
}

impl LogIdentitySample {
    pub fn residual(&self) -> f64 {
        let lhs = Complex64::new(self.lhs_re, self.lhs_im);
        let rhs = Complex64::new(
            self.k1_re + self.k2_re + self.tail_re,
            self.k1_im + self.k2_im + self.tail_im,
        );
        (lhs - rhs).norm()
    }
}

/// Decompose the central log-product of a Dirichlet character into its
/// k = 1, k = 2 and k >= 3 Euler-expansion layers, snapshotted at each
/// checkpoint. The identity lhs = k1 + k2 + tail is an algebraic fact; the
/// residual measures only accumulation error (both sides are computed by
/// different routes: complex log vs power series).
pub fn log_identity_check(
    chi: &DirichletCharacter,
    primes: &PrimeTable,
    checkpoints: &[u64],
) -> Result<Vec<LogIdentitySample>> {
    let &max = checkpoints
        .last()
        .ok_or_else(|| DrhError::Argument("need at least one checkpoint".into()))?;
    if max > primes.limit() {
        return Err(DrhError::Range(format!(
            "checkpoint {max} beyond sieve limit {}",
            primes.limit()
        )));
    }
    let mut lhs = KahanComplex::new();
    let mut k1 = KahanComplex::new();
    let mut k2 = KahanComplex::new();
    let mut tail = KahanComplex::new();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut iter = primes.primes().iter().peekable();
    for &cp in checkpoints {
        while let Some(&&p) = iter.peek() {
            if p > cp {
                break;
            }
            let v = chi.eval(p);
            if v.norm_sqr() != 0.0 {
                let t = v / (p as f64).sqrt();
                lhs.add(-(Complex64::new(1.0, 0.0) - t).ln());
                k1.add(t);
                k2.add(t * t / 2.0);
                // k >= 3 summed independently until numerically negligible
                let mut term = t * t * t;
                let mut k = 3u32;
                loop {
                    let contrib = term / k as f64;
                    if contrib.norm() < 1e-21 {
                        break;
                    }
                    tail.add(contrib);
                    term *= t;
                    k += 1;
                }
            }
            iter.next();
        }
        let l = lhs.total();
        let a = k1.total();
        let b = k2.total();
        let c = tail.total();
        out.push(LogIdentitySample {
            x: cp,
            lhs_re: l.re,
            lhs_im: l.im,
            k1_re: a.re,
            k1_im: a.im,
            k2_re: b.re,
            k2_im: b.im,
            tail_re: c.re,
            tail_im: c.im,
        });
    }
    Ok(out)
}

/// Raw data for the pole case (trivial character / zeta at the center):
/// the log partial product together with Akatsuka's compensating integral
/// and the prime-counting deviations, emitted side by side for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AkatsukaSample {
    pub x: u64,
    /// log prod_{p<=x} (1 - p^{-s0})^{-1}
    pub log_product: f64,
    /// lim_{eps->0} [ int_{1+eps}^x du/(u^{s0} log u) - log(1/eps) ]
    pub compensator: f64,
    pub psi_minus_x: f64,
    pub theta_minus_x: f64,
}

/// Zeta-at-the-center panel: product, compensator and the psi/theta
/// deviations at each checkpoint. No verdict is attached; the tolerance for
/// the pole case is not part of the normalization contract.
pub fn akatsuka_panel(
    primes: &PrimeTable,
    s0: f64,
    checkpoints: &[u64],
) -> Result<Vec<AkatsukaSample>> {
    let &max = checkpoints
        .last()
        .ok_or_else(|| DrhError::Argument("need at least one checkpoint".into()))?;
    if max > primes.limit() {
        return Err(DrhError::Range(format!(
            "checkpoint {max} beyond sieve limit {}",
            primes.limit()
        )));
    }
    let mut logp = Kahan::new();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut iter = primes.primes().iter().peekable();
    for &cp in checkpoints {
        while let Some(&&p) = iter.peek() {
            if p > cp {
                break;
            }
            logp.add(-(1.0 - (p as f64).powf(-s0)).ln());
            iter.next();
        }
        let sums = primes.summatory(cp as f64)?;
        out.push(AkatsukaSample {
            x: cp,
            log_product: logp.total(),
            compensator: crate::primes::pole_compensator(cp as f64, s0)?,
            psi_minus_x: sums.psi - cp as f64,
            theta_minus_x: sums.theta - cp as f64,
        });
    }
    Ok(out)
}
