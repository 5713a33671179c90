//! a_p computation for short-Weierstrass curves over Q and the original
//! Birch--Swinnerton-Dyer partial product with Goldfeld's rank-slope
//! readout.
//!
//! Good primes use a_p = -sum_x legendre(x^3 + ax + b | p) with a
//! precomputed quadratic-residue table (O(p) per prime). Bad primes count
//! nonsingular points only, which reproduces the standard local factors
//! (split/nonsplit multiplicative -> a_p = +-1, additive -> a_p = 0) on the
//! given model.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{DrhError, Result};
use crate::euler::ProductTrace;
use crate::primes::PrimeTable;
use crate::util::{fit_against_loglog, tail_half, Kahan};

/// y^2 = x^3 + ax + b with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllipticCurve {
    pub a: i64,
    pub b: i64,
}

impl EllipticCurve {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let c = Self { a, b };
        if c.discriminant() == 0 {
            return Err(DrhError::Argument(format!(
                "singular curve: disc(-16(4a^3+27b^2)) = 0 for a={a}, b={b}"
            )));
        }
        Ok(c)
    }

    /// disc = -16 (4a^3 + 27b^2).
    pub fn discriminant(&self) -> i128 {
        let a = self.a as i128;
        let b = self.b as i128;
        -16 * (4 * a * a * a + 27 * b * b)
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        let mut d = self.discriminant().unsigned_abs();
        let mut out = Vec::new();
        let mut p = 2u128;
        while p * p <= d {
            if d % p == 0 {
                out.push(p as u64);
                while d % p == 0 {
                    d /= p;
                }
            }
            p += 1;
        }
        if d > 1 {
            out.push(d as u64);
        }
        out
    }

    /// True when some prime-12th power divides the discriminant; on such
    /// models the nonsingular-count convention at that prime can differ
    /// from the minimal-model a_p.
    pub fn minimality_warning(&self) -> bool {
        let d = self.discriminant().unsigned_abs();
        self.bad_primes().iter().any(|&p| {
            let p = p as u128;
            let mut pk = 1u128;
            for _ in 0..12 {
                match pk.checked_mul(p) {
                    Some(v) => pk = v,
                    None => return false,
                }
            }
            d % pk == 0
        })
    }

    pub fn label(&self) -> String {
        format!("ec:a={}:b={}", self.a, self.b)
    }

    /// a_p at any prime. Good p: p + 1 - #E(F_p). Bad p: p - #E^ns(F_p)
    /// where #E^ns counts nonsingular affine points plus infinity.
    pub fn ap(&self, p: u64) -> i64 {
        let disc_mod = (self.discriminant().rem_euclid(p as i128)) as u64;
        if disc_mod == 0 {
            self.ap_bad(p)
        } else {
            self.ap_good(p)
        }
    }

    fn ap_good(&self, p: u64) -> i64 {
        let legendre = legendre_table(p);
        let a = self.a.rem_euclid(p as i64) as u64;
        let b = self.b.rem_euclid(p as i64) as u64;
        // incremental f(x) = x^3 + ax + b via second differences:
        // f(x+1)-f(x) = 3x^2+3x+1+a, which itself steps by 6x+6
        let mut f = b;
        let mut d1 = (1 + a) % p;
        let mut d2 = 6 % p;
        let mut sum: i64 = 0;
        for _ in 0..p {
            sum += legendre_of(&legendre, f) as i64;
            f += d1;
            if f >= p {
                f -= p;
            }
            d1 += d2;
            if d1 >= p {
                d1 -= p;
            }
            d2 += 6;
            if d2 >= p {
                d2 -= p;
            }
        }
        let ap = -sum;
        debug_assert!(
            (ap as f64).abs() <= 2.0 * (p as f64).sqrt() + 1e-9,
            "Hasse bound violated at p={p}"
        );
        ap
    }

    fn ap_bad(&self, p: u64) -> i64 {
        let a = self.a.rem_euclid(p as i64) as u64;
        let b = self.b.rem_euclid(p as i64) as u64;
        if p == 2 {
            // exhaustive over the four affine points; d/dy = 2y vanishes
            // identically, so a point is singular iff x^2 + a = 0 there
            let mut ns: i64 = 1;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    if (y * y) % 2 == (x * x * x + a * x + b) % 2 && (x * x + a) % 2 != 0 {
                        ns += 1;
                    }
                }
            }
            return 2 - ns;
        }
        // odd bad p: count affine points via the residue table, excluding
        // singular points (y = 0, f(x) = 0, 3x^2 + a = 0)
        let legendre = legendre_table(p);
        let mut nonsingular: i64 = 1; // point at infinity
        for x in 0..p {
            let x3 = mulm(mulm(x, x, p), x, p);
            let fx = (x3 + mulm(a, x, p) + b) % p;
            let dx = (3 * mulm(x, x, p) + a) % p;
            match legendre_of(&legendre, fx) {
                1 => nonsingular += 2,
                0 if dx != 0 => nonsingular += 1,
                _ => {}
            }
        }
        p as i64 - nonsingular
    }

    /// a_p for all primes in the table, in prime order (parallel map with
    /// ordered collection).
    pub fn ap_table(&self, primes: &PrimeTable) -> ApTable {
        let values: Vec<i32> = primes
            .primes()
            .par_iter()
            .map(|&p| self.ap(p) as i32)
            .collect();
        ApTable { curve: *self, limit: primes.limit(), values }
    }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Bit table of nonzero quadratic residues mod p.
fn legendre_table(p: u64) -> Vec<u64> {
    let words = (p as usize + 63) / 64;
    let mut bits = vec![0u64; words];
    if p == 2 {
        bits[0] |= 1 << 1;
        return bits;
    }
    // squares of 1..=(p-1)/2 cover all nonzero QRs
    for k in 1..=p / 2 {
        let y = mulm(k, k, p);
        bits[(y / 64) as usize] |= 1 << (y % 64);
    }
    bits
}

#[inline]
fn legendre_of(bits: &[u64], v: u64) -> i8 {
    if v == 0 {
        0
    } else if bits[(v / 64) as usize] >> (v % 64) & 1 == 1 {
        1
    } else {
        -1
    }
}

/// a_p values aligned with a `PrimeTable`'s prime order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApTable {
    pub curve: EllipticCurve,
    pub limit: u64,
    pub values: Vec<i32>,
}

impl ApTable {
    pub fn ap_at_index(&self, i: usize) -> i32 {
        self.values[i]
    }
}

/// log Prod(x, E) at each checkpoint, via the identity
/// Prod = prod_{p<=x} p / #E^ns(F_p) (equivalently the split bad/good
/// product). Returns the trace together with the split-form log values for
/// the consistency invariant.
pub fn bsd_product_trace(
    curve: &EllipticCurve,
    primes: &PrimeTable,
    checkpoints: &[u64],
) -> Result<(ProductTrace, Vec<f64>)> {
    let &max = checkpoints
        .last()
        .ok_or_else(|| DrhError::Argument("need at least one checkpoint".into()))?;
    if max > primes.limit() {
        return Err(DrhError::Range(format!(
            "checkpoint {max} beyond sieve limit {}",
            primes.limit()
        )));
    }
    let aps = curve.ap_table(primes);
    let bad = curve.bad_primes();
    let mut log_counts = Kahan::new();
    let mut log_split = Kahan::new();
    let mut log_values = Vec::with_capacity(checkpoints.len());
    let mut split_values = Vec::with_capacity(checkpoints.len());
    let mut idx = 0usize;
    let ps = primes.primes();
    for &cp in checkpoints {
        while idx < ps.len() && ps[idx] <= cp {
            let p = ps[idx];
            let pf = p as f64;
            let ap = aps.values[idx] as f64;
            let is_bad = bad.contains(&p);
            // #E^ns = p - a_p at bad p, p + 1 - a_p at good p
            let count = if is_bad { pf - ap } else { pf + 1.0 - ap };
            log_counts.add(pf.ln() - count.ln());
            let factor = if is_bad {
                1.0 - ap / pf
            } else {
                1.0 - ap / pf + 1.0 / pf
            };
            log_split.add(-factor.ln());
            idx += 1;
        }
        log_values.push(Complex64::new(log_counts.total(), 0.0));
        split_values.push(log_split.total());
    }
    let trace = ProductTrace {
        spec_label: curve.label(),
        s: Complex64::new(1.0, 0.0),
        checkpoints: checkpoints.to_vec(),
        log_values,
        normalized: Vec::new(),
        predicted_limit: None,
    };
    Ok((trace, split_values))
}

/// Least-squares readout of the Goldfeld slope: fits log Prod(x) against
/// -log log x over the tail half of the checkpoints and returns
/// (r_hat, logC_hat, rms residual).
pub fn rank_fit(trace: &ProductTrace) -> Result<(f64, f64, f64)> {
    if trace.checkpoints.len() < 8 {
        return Err(DrhError::Argument(format!(
            "rank fit needs >= 8 checkpoints, got {}",
            trace.checkpoints.len()
        )));
    }
    let lo = *trace.checkpoints.first().unwrap() as f64;
    let hi = *trace.checkpoints.last().unwrap() as f64;
    if hi < 100.0 * lo {
        return Err(DrhError::Argument(
            "rank fit needs checkpoints spanning >= 2 decades".into(),
        ));
    }
    let xs = tail_half(&trace.checkpoints);
    let ys: Vec<f64> = tail_half(&trace.log_values).iter().map(|z| z.re).collect();
    let (slope, intercept, residual) = fit_against_loglog(xs, &ys)?;
    Ok((-slope, intercept, residual))
}
