//! Place-class counts, the trace formula check, checkpointed products over
//! places, and the function-field DRH verification.
//!
//! The counting data N_d(rho) = #{monic irreducibles v of degree d with
//! v = rho (mod A)} is everything the character sums need; it is gathered
//! once per modulus by streaming the irreducible sieve. For batches of
//! moduli the affine substitutions T -> uT + t (degree-preserving
//! bijections of monic irreducibles) transfer counts from one orbit
//! representative to the whole orbit, which keeps the all-moduli trace
//! suite inside its time budget.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::lpoly::LPolynomial;
use super::poly::{inv_mod, FqPoly};
use super::sieve::IrreducibleSieve;
use super::units::{unit_root, FfCharacter, ResidueRing};
use crate::error::{DrhError, Result};
use crate::euler::{ConvergenceReport, ProductTrace};
use crate::util::{tail_half, Kahan, KahanComplex, EULER_GAMMA};

/// Residue-class counts of monic irreducibles per degree, for one modulus.
pub struct PlaceCounts {
    pub ring: Arc<ResidueRing>,
    pub max_degree: u32,
    /// counts[d-1][ring index] over monic irreducibles of degree d
    pub counts: Vec<Vec<u64>>,
    /// total count per degree (all classes)
    pub totals: Vec<u64>,
}

impl PlaceCounts {
    pub fn modulus(&self) -> &FqPoly {
        &self.ring.modulus
    }
}

/// Count residue classes for a single modulus by streaming the sieve.
pub fn place_class_counts(
    sieve: &mut IrreducibleSieve,
    modulus: &FqPoly,
    max_degree: u32,
) -> Result<PlaceCounts> {
    let ring = Arc::new(ResidueRing::new(modulus)?);
    let mut counts = Vec::with_capacity(max_degree as usize);
    let mut totals = Vec::with_capacity(max_degree as usize);
    for d in 1..=max_degree {
        let mut row = vec![0u64; ring.size as usize];
        let mut total = 0u64;
        let r = &ring;
        sieve.visit_degree(d, |code| {
            row[r.reduce_monic_code(code, d) as usize] += 1;
            total += 1;
        })?;
        counts.push(row);
        totals.push(total);
    }
    Ok(PlaceCounts { ring, max_degree, counts, totals })
}

/// Count residue classes for many moduli at once. Moduli are grouped into
/// orbits of the affine substitutions T -> uT + t; one representative per
/// orbit is counted against the place stream (in parallel chunks), and the
/// counts transfer to every orbit member by exact class relabeling.
pub fn place_class_counts_batch(
    sieve: &mut IrreducibleSieve,
    moduli: &[FqPoly],
    max_degree: u32,
) -> Result<Vec<PlaceCounts>> {
    let q = sieve.q();
    // orbit decomposition: representative = minimal (degree, code)
    let mut rep_of: Vec<(FqPoly, u64, u64)> = Vec::with_capacity(moduli.len()); // (rep, u, t)
    let mut reps: Vec<FqPoly> = Vec::new();
    for a in moduli {
        let mut best: Option<(u64, u64, u64)> = None; // (code, u, t)
        for u in 1..q {
            for t in 0..q {
                let sub = a.affine_substitute(u, t);
                let code = sub.code();
                if best.map_or(true, |(bc, _, _)| code < bc) {
                    best = Some((code, u, t));
                }
            }
        }
        let (code, u, t) = best.unwrap();
        let rep = FqPoly::from_code(q, code, a.degree().unwrap());
        if !reps.contains(&rep) {
            reps.push(rep.clone());
        }
        rep_of.push((rep, u, t));
    }

    // count the representatives in one streaming pass per degree
    let rep_rings: Vec<Arc<ResidueRing>> = reps
        .iter()
        .map(|r| ResidueRing::new(r).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut rep_counts: Vec<Vec<Vec<u64>>> = reps
        .iter()
        .zip(&rep_rings)
        .map(|(_, ring)| vec![vec![0u64; ring.size as usize]; max_degree as usize])
        .collect();
    let rep_tables: Vec<Vec<u32>> = rep_rings.iter().map(|r| r.horner_table()).collect();
    let mut totals = vec![0u64; max_degree as usize];
    for d in 1..=max_degree {
        // gather the degree's codes once, decode each chunk's digits once,
        // then run every representative ring as a tight table-walk pass
        let mut codes: Vec<u64> = Vec::new();
        sieve.visit_degree(d, |code| codes.push(code))?;
        totals[d as usize - 1] = codes.len() as u64;
        let dl = d as usize;
        let rows: Vec<Vec<u64>> = codes
            .par_chunks(1 << 15)
            .map(|chunk| {
                let mut rows: Vec<Vec<u64>> = rep_rings
                    .iter()
                    .map(|r| vec![0u64; r.size as usize])
                    .collect();
                // digits stored high-to-low so the Horner pass streams them
                let mut digit_buf = vec![0u8; chunk.len() * dl];
                for (i, &code) in chunk.iter().enumerate() {
                    let mut c = code;
                    for j in 0..dl {
                        digit_buf[i * dl + (dl - 1 - j)] = (c % q) as u8;
                        c /= q;
                    }
                }
                for (ri, table) in rep_tables.iter().enumerate() {
                    let row = &mut rows[ri];
                    for digits in digit_buf.chunks_exact(dl) {
                        let mut idx = 1u32;
                        for &dd in digits {
                            idx = table[(idx as u64 * q + dd as u64) as usize];
                        }
                        row[idx as usize] += 1;
                    }
                }
                rows
            })
            .reduce(
                || rep_rings.iter().map(|r| vec![0u64; r.size as usize]).collect(),
                |mut acc, rows| {
                    for (a, b) in acc.iter_mut().zip(&rows) {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                    }
                    acc
                },
            );
        for (ri, row) in rows.into_iter().enumerate() {
            rep_counts[ri][d as usize - 1] = row;
        }
    }

    // transfer to each requested modulus:
    // N_d^A(rho) = N_d^REP(u^{-d} * rho(uT+t) mod REP)
    let mut out = Vec::with_capacity(moduli.len());
    for (a, (rep, u, t)) in moduli.iter().zip(&rep_of) {
        let ring = Arc::new(ResidueRing::new(a)?);
        let ri = reps.iter().position(|r| r == rep).unwrap();
        let rep_ring = &rep_rings[ri];
        // base map rho -> rho(uT+t) mod REP (no scaling yet)
        let base_map: Vec<u32> = (0..ring.size as u32)
            .map(|idx| {
                let rho = ring.to_poly(idx);
                let sub = substitute_unnormalized(&rho, *u, *t);
                rep_ring.reduce_poly(&sub)
            })
            .collect();
        // constant-scaling tables c * x in the rep ring
        let u_inv = inv_mod(*u, q);
        let mut scale_maps: HashMap<u64, Vec<u32>> = HashMap::new();
        let mut counts = Vec::with_capacity(max_degree as usize);
        for d in 1..=max_degree {
            let c = crate::util::pow_mod(u_inv, d as u64, q);
            let scale = scale_maps.entry(c).or_insert_with(|| {
                (0..rep_ring.size as u32)
                    .map(|idx| rep_ring.reduce_poly(&rep_ring.to_poly(idx).scale(c)))
                    .collect()
            });
            let row: Vec<u64> = (0..ring.size as usize)
                .map(|idx| rep_counts[ri][d as usize - 1][scale[base_map[idx] as usize] as usize])
                .collect();
            counts.push(row);
        }
        out.push(PlaceCounts { ring, max_degree, counts, totals: totals.clone() });
    }
    Ok(out)
}

/// rho(uT + t) without monic normalization (constants commute with the
/// class relabeling separately).
fn substitute_unnormalized(p: &FqPoly, u: u64, t: u64) -> FqPoly {
    let q = p.q();
    let lin = FqPoly::new(q, vec![t, u]).expect("q prime");
    let mut acc = FqPoly::zero(q);
    for &c in p.coeffs().iter().rev() {
        acc = acc.mul(&lin).add(&FqPoly::constant(q, c));
    }
    acc
}

/// Maximum over l <= ell_max of |LHS(l) - RHS(l)| where
/// LHS(l) = sum_{deg v | l} deg(v) chi(v)^{l/deg v} over places and
/// RHS(l) = -sum_j lambda_j^l over the inverse roots.
pub fn trace_formula_check(
    chi: &FfCharacter,
    counts: &PlaceCounts,
    lpoly: &LPolynomial,
    ell_max: u32,
) -> Result<f64> {
    if counts.max_degree < ell_max {
        return Err(DrhError::Argument(format!(
            "counts reach degree {} < ell_max {ell_max}",
            counts.max_degree
        )));
    }
    let ord = chi.order;
    let ring = chi.ring();
    if !Arc::ptr_eq(ring, &counts.ring) && ring.modulus != counts.ring.modulus {
        return Err(DrhError::Argument("counts/character modulus mismatch".into()));
    }
    // per degree: exponent bins over unit classes, and the unit total
    let mut bins_per_degree: Vec<Vec<i64>> = Vec::with_capacity(ell_max as usize);
    let mut unit_totals: Vec<u64> = Vec::with_capacity(ell_max as usize);
    let mut unit_classes = 0u64;
    for d in 1..=ell_max as usize {
        let mut bins = vec![0i64; ord as usize];
        let mut total = 0u64;
        let mut classes = 0u64;
        for (idx, &count) in counts.counts[d - 1].iter().enumerate() {
            if let Some(k) = chi.exponent_at(idx as u32) {
                bins[k as usize] += count as i64;
                total += count;
                classes += 1;
            }
        }
        unit_classes = classes;
        bins_per_degree.push(bins);
        unit_totals.push(total);
    }

    let mut max_residual = 0.0f64;
    for ell in 1..=ell_max {
        let mut lhs = Complex64::new(0.0, 0.0);
        for d in 1..=ell {
            if ell % d != 0 {
                continue;
            }
            let k = (ell / d) as u64 % ord;
            let sum = if k == 0 {
                // chi^k trivial on units: the exact integer total
                Complex64::new(unit_totals[d as usize - 1] as f64, 0.0)
            } else {
                // center the bins so the rounding error scales with the
                // fluctuation, not the raw counts: sum over units of a
                // nontrivial character vanishes exactly
                let bins = &bins_per_degree[d as usize - 1];
                let mean = (unit_totals[d as usize - 1] / unit_classes.max(1)) as i64;
                // classes sharing an exponent: regroup per target exponent
                let mut regrouped = vec![0i64; ord as usize];
                for (j, &b) in bins.iter().enumerate() {
                    let target = (j as u64 * k) % ord;
                    regrouped[target as usize] += b;
                }
                // subtract mean * (#classes mapping to each exponent)
                let mut class_per_exp = vec![0i64; ord as usize];
                for idx in 0..counts.ring.size as u32 {
                    if let Some(e) = chi.exponent_at(idx) {
                        class_per_exp[((e as u64 * k) % ord) as usize] += 1;
                    }
                }
                let mut acc = KahanComplex::new();
                for j in 0..ord as usize {
                    let centered = regrouped[j] - mean * class_per_exp[j];
                    if centered != 0 {
                        acc.add(centered as f64 * unit_root(j as u64, ord));
                    }
                }
                acc.total()
            };
            lhs += d as f64 * sum;
        }
        let mut rhs = Complex64::new(0.0, 0.0);
        for lambda in &lpoly.inverse_roots {
            rhs -= lambda.powu(ell);
        }
        let residual = (lhs - rhs).norm();
        if residual > max_residual {
            max_residual = residual;
        }
    }
    Ok(max_residual)
}

/// Log-space product over places of degree <= D at s, checkpointed at each
/// integer degree D = 0..=d_max. Checkpoint x-values are q^D.
pub fn ff_partial_product(
    chi: &FfCharacter,
    counts: &PlaceCounts,
    s: Complex64,
    d_max: u32,
) -> Result<ProductTrace> {
    if counts.max_degree < d_max {
        return Err(DrhError::Argument(format!(
            "counts reach degree {} < d_max {d_max}",
            counts.max_degree
        )));
    }
    let q = chi.q;
    if (d_max as f64) * (q as f64).log2() > 62.0 {
        return Err(DrhError::Capacity("q^D overflows u64 checkpoint".into()));
    }
    let ord = chi.order;
    let mut acc = KahanComplex::new();
    let mut checkpoints = Vec::with_capacity(d_max as usize + 1);
    let mut log_values = Vec::with_capacity(d_max as usize + 1);
    checkpoints.push(1u64); // D = 0: empty product
    log_values.push(Complex64::new(0.0, 0.0));
    for d in 1..=d_max {
        let nv_pow = (-(s * (d as f64) * (q as f64).ln())).exp(); // N(v)^{-s}
        for (idx, &count) in counts.counts[d as usize - 1].iter().enumerate() {
            if count == 0 {
                continue;
            }
            if let Some(k) = chi.exponent_at(idx as u32) {
                let t = unit_root(k as u64, ord) * nv_pow;
                acc.add(-(Complex64::new(1.0, 0.0) - t).ln() * count as f64);
            }
        }
        checkpoints.push(q.pow(d));
        log_values.push(acc.total());
    }
    Ok(ProductTrace {
        spec_label: format!("ff:q={q}:A={}:chi={}", chi.modulus, chi.index),
        s,
        checkpoints,
        log_values,
        normalized: Vec::new(),
        predicted_limit: None,
    })
}

/// Everything the function-field verification reports: the convergence data
/// plus the polynomial and both nu readings.
pub struct FfVerifyReport {
    pub report: ConvergenceReport,
    pub lpolynomial: LPolynomial,
    /// multiplicity of lambda = sqrt(q) (used in the target)
    pub nu_sqrtq: u32,
    /// second-moment reading m(sym^2 chi) - m(wedge^2 chi) = [chi^2 = 1];
    /// reported alongside, never asserted equal to nu_sqrtq
    pub nu_second_moment: u32,
    /// ratios R(D) of the normalized product to the target, D = 1..=d_max
    pub ratios: Vec<Complex64>,
}

/// Verify the DRH limit for a nontrivial character: computes
/// R(D) = (D log q)^r P(q^D, 1/2) / (sqrt(2)^nu L^(r)(1/2) / (e^{r gamma} r!))
/// with r = r_half and nu = nu_sqrtq read off the L-polynomial.
///
/// Refuses (integrity error) when the Weil roots are not within tolerance
/// of the pure weights {1, sqrt(q)}.
pub fn ff_drh_verify(
    chi: &FfCharacter,
    counts: &PlaceCounts,
    d_max: u32,
    tolerance: f64,
) -> Result<FfVerifyReport> {
    let lp = super::lpoly::l_polynomial(chi)?;
    if !lp.pure_weights {
        return Err(DrhError::Integrity(format!(
            "mixed-weight roots outside {{1, sqrt q}}: {:?}; verification refused",
            lp.inverse_roots
        )));
    }
    let r = lp.r_half;
    let nu = lp.nu_sqrtq as i32;
    let l_r = lp.derivative_at_center(r);
    if l_r.norm() < 1e-12 {
        return Err(DrhError::Inconsistency(format!(
            "L^({r})(1/2) = {l_r}: vanishing order r_half miscounted"
        )));
    }
    let r_fact: f64 = (1..=r).map(|k| k as f64).product();
    let target = 2f64.sqrt().powi(nu) * l_r / ((r as f64 * EULER_GAMMA).exp() * r_fact);

    let mut trace = ff_partial_product(chi, counts, Complex64::new(0.5, 0.0), d_max)?;
    trace.predicted_limit = Some(target);
    trace.normalized = trace
        .checkpoints
        .iter()
        .zip(&trace.log_values)
        .map(|(&x, &lv)| {
            if x == 1 {
                lv.exp() // D = 0: the (log x)^r normalization is skipped
            } else {
                let loglog = (x as f64).ln().ln();
                (lv + Complex64::new(r as f64 * loglog, 0.0)).exp()
            }
        })
        .collect();
    // R(D) over D >= 1 (skip the empty product)
    let ratios: Vec<Complex64> = trace.normalized.iter().skip(1).map(|z| z / target).collect();

    let tail = tail_half(&ratios);
    let devs: Vec<f64> = tail.iter().map(|z| (z - 1.0).norm()).collect();
    let tail_max_dev = devs.iter().cloned().fold(0.0, f64::max);
    let log_avg_dev = devs.iter().sum::<f64>() / devs.len().max(1) as f64;
    let converged = log_avg_dev < tolerance;
    let nu_second_moment = if !chi.is_trivial() && chi.order <= 2 { 1 } else { 0 };
    Ok(FfVerifyReport {
        report: ConvergenceReport {
            trace,
            r,
            nu,
            target,
            tail_max_dev,
            log_avg_dev,
            tolerance,
            converged,
        },
        lpolynomial: lp,
        nu_sqrtq: r,
        nu_second_moment,
        ratios,
    })
}

/// Mertens-type sums over places: T(q^D, chi) = sum_{deg v <= D}
/// chi(v)/N(v) for D = 1..=d_max (complex for complex characters). For the
/// trivial representation pass `None`; the series then also carries
/// T - log(D log q) for constant extraction.
pub struct FfMertensSeries {
    pub q: u64,
    pub degrees: Vec<u32>,
    pub values: Vec<Complex64>,
    /// T(q^D, 1) - log(D log q), present for the trivial representation
    pub centered: Option<Vec<f64>>,
}

impl FfMertensSeries {
    /// |f(D) - f(D-step)| over the tail, where f is the centered series
    /// (trivial) or the raw values (nontrivial).
    pub fn successive_differences(&self, step: usize) -> Vec<f64> {
        let vals: Vec<Complex64> = match &self.centered {
            Some(c) => c.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            None => self.values.clone(),
        };
        (step..vals.len()).map(|i| (vals[i] - vals[i - step]).norm()).collect()
    }
}

pub fn ff_mertens(
    chi: Option<&FfCharacter>,
    counts: &PlaceCounts,
    d_max: u32,
) -> Result<FfMertensSeries> {
    if counts.max_degree < d_max {
        return Err(DrhError::Argument(format!(
            "counts reach degree {} < d_max {d_max}",
            counts.max_degree
        )));
    }
    let q = counts.ring.q;
    let logq = (q as f64).ln();
    let mut acc = KahanComplex::new();
    let mut real_acc = Kahan::new();
    let mut degrees = Vec::with_capacity(d_max as usize);
    let mut values = Vec::with_capacity(d_max as usize);
    let mut centered = Vec::with_capacity(d_max as usize);
    for d in 1..=d_max {
        let nv_inv = (q as f64).powi(-(d as i32));
        match chi {
            None => {
                // all places, including those dividing the modulus
                real_acc.add(counts.totals[d as usize - 1] as f64 * nv_inv);
                acc.add(Complex64::new(counts.totals[d as usize - 1] as f64 * nv_inv, 0.0));
            }
            Some(chi) => {
                for (idx, &count) in counts.counts[d as usize - 1].iter().enumerate() {
                    if count == 0 {
                        continue;
                    }
                    if let Some(k) = chi.exponent_at(idx as u32) {
                        acc.add(unit_root(k as u64, chi.order) * (count as f64 * nv_inv));
                    }
                }
            }
        }
        degrees.push(d);
        values.push(acc.total());
        if chi.is_none() {
            centered.push(real_acc.total() - ((d as f64) * logq).ln());
        }
    }
    Ok(FfMertensSeries {
        q,
        degrees,
        values,
        centered: if chi.is_none() { Some(centered) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::units::character_group;
    use approx::assert_relative_eq;

    fn setup_f9(max_degree: u32) -> (Vec<FfCharacter>, PlaceCounts) {
        let a = FqPoly::new(3, vec![1, 0, 1]).unwrap();
        let chars = character_group(&a).unwrap();
        let mut sieve = IrreducibleSieve::new(3).unwrap();
        let counts = place_class_counts(&mut sieve, &a, max_degree).unwrap();
        (chars, counts)
    }

    #[test]
    fn trace_formula_hand_values_even_quadratic() {
        let (chars, counts) = setup_f9(4);
        let chi = &chars[4];
        let lp = super::super::lpoly::l_polynomial(chi).unwrap();
        // l = 1: chi(T) + chi(T+1) + chi(T+2) = -1 = -lambda
        // l = 2: 3 + 2*(chi-sum over irreducible quadratics) = -1
        let res = trace_formula_check(chi, &counts, &lp, 2).unwrap();
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn trace_formula_all_f9_characters() {
        let (chars, counts) = setup_f9(12);
        for chi in chars.iter().skip(1) {
            let lp = super::super::lpoly::l_polynomial(chi).unwrap();
            let res = trace_formula_check(chi, &counts, &lp, 12).unwrap();
            assert!(res < 1e-8, "chi idx {}: residual {res}", chi.index);
        }
    }

    #[test]
    fn batch_counts_match_direct_counts() {
        let mut moduli = Vec::new();
        for code in 0..9u64 {
            moduli.push(FqPoly::from_code(3, code, 2));
        }
        let mut sieve1 = IrreducibleSieve::new(3).unwrap();
        let batch = place_class_counts_batch(&mut sieve1, &moduli, 6).unwrap();
        for (a, got) in moduli.iter().zip(&batch) {
            let mut sieve2 = IrreducibleSieve::new(3).unwrap();
            let direct = place_class_counts(&mut sieve2, a, 6).unwrap();
            assert_eq!(got.counts, direct.counts, "modulus {a}");
            assert_eq!(got.totals, direct.totals);
        }
    }

    #[test]
    fn partial_product_truncation_matches_polynomial_far_right() {
        let (chars, counts) = setup_f9(10);
        let chi = &chars[4];
        let lp = super::super::lpoly::l_polynomial(chi).unwrap();
        let trace = ff_partial_product(chi, &counts, Complex64::new(2.0, 0.0), 6).unwrap();
        let value = trace.log_values.last().unwrap().exp();
        let expect = lp.eval(Complex64::new(3f64.powi(-2), 0.0));
        assert!((value - expect).norm() < 1e-4, "{value} vs {expect}");
        // empty product at D = 0
        assert_eq!(trace.log_values[0], Complex64::new(0.0, 0.0));
        // at Re(s) = 1.5 the error is dominated by the degree-10 place sum
        // (pi_10 = -24 for this character), about 24 * 3^{-15} = 1.5e-6 at
        // D = 8; two degrees later it drops well under 1e-6
        let trace = ff_partial_product(chi, &counts, Complex64::new(1.5, 0.0), 8).unwrap();
        let value = trace.log_values.last().unwrap().exp();
        let expect = lp.eval(Complex64::new(3f64.powf(-1.5), 0.0));
        assert!((value - expect).norm() < 2e-6);
        let trace = ff_partial_product(chi, &counts, Complex64::new(1.5, 0.0), 10).unwrap();
        let value = trace.log_values.last().unwrap().exp();
        assert!((value - expect).norm() < 1e-6);
    }

    #[test]
    fn drh_verify_order4_even_character_converges_fast() {
        let (chars, counts) = setup_f9(10);
        let chi = &chars[2]; // order 4, even, chi^2 = the quadratic character
        let rep = ff_drh_verify(chi, &counts, 10, 0.05).unwrap();
        assert_eq!(rep.report.r, 0);
        assert_eq!(rep.nu_sqrtq, 0);
        assert_eq!(rep.nu_second_moment, 0);
        // target = L(3^{-1/2}) = 1 - 3^{-1/2}
        assert_relative_eq!(rep.report.target.re, 1.0 - 3f64.powf(-0.5), max_relative = 1e-10);
        let last = rep.ratios.last().unwrap();
        assert!((last - 1.0).norm() < 1e-3, "R(10) = {last}");
    }

    #[test]
    fn drh_verify_order8_odd_character() {
        let (chars, counts) = setup_f9(12);
        let chi = &chars[1];
        let rep = ff_drh_verify(chi, &counts, 12, 0.1).unwrap();
        // target = L(3^{-1/2}) = 1 + (sqrt2 - i)/sqrt3
        let expect = Complex64::new(1.0 + 2f64.sqrt() / 3f64.sqrt(), -1.0 / 3f64.sqrt());
        assert!((rep.report.target - expect).norm() < 1e-10);
        assert!((rep.report.target - Complex64::new(1.81650, -0.57735)).norm() < 1e-5);
        let last = rep.ratios.last().unwrap();
        assert!((last - 1.0).norm() < 0.06, "R(12) = {last}");
    }

    #[test]
    fn drh_verify_true_quadratic_exhibits_sqrt2() {
        // the genuinely quadratic (order 2) character: chi^2 = 1 brings the
        // second-moment sqrt(2) into the limit, while nu_sqrtq = 0; the
        // ratio against the nu_sqrtq target approaches sqrt(2), not 1.
        let (chars, counts) = setup_f9(12);
        let chi = &chars[4];
        let rep = ff_drh_verify(chi, &counts, 12, 10.0).unwrap();
        assert_eq!(rep.nu_sqrtq, 0);
        assert_eq!(rep.nu_second_moment, 1);
        let last = rep.ratios.last().unwrap();
        assert!(
            (last.norm() - 2f64.sqrt()).abs() < 0.05,
            "|R(12)| = {} should be near sqrt(2)",
            last.norm()
        );
    }

    #[test]
    fn mertens_hand_values_f2() {
        let a = FqPoly::new(2, vec![1, 1]).unwrap(); // T + 1
        let mut sieve = IrreducibleSieve::new(2).unwrap();
        let counts = place_class_counts(&mut sieve, &a, 4).unwrap();
        let m = ff_mertens(None, &counts, 2).unwrap();
        // D=1: two degree-1 places, T and T+1: 2 * 2^{-1} = 1.0
        assert_relative_eq!(m.values[0].re, 1.0);
        // D=2: one irreducible quadratic: + 1/4
        assert_relative_eq!(m.values[1].re, 1.25);
    }

    #[test]
    fn mertens_nontrivial_stabilizes() {
        let (chars, counts) = setup_f9(12);
        let m = ff_mertens(Some(&chars[4]), &counts, 12).unwrap();
        let diffs = m.successive_differences(2);
        let tail = &diffs[diffs.len() - 3..];
        for d in tail {
            assert!(*d < 0.05, "diff {d}");
        }
    }
}
