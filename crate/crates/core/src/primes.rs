//! Prime generation and the classical summatory functions.
//!
//! The sieve is segmented into fixed blocks of 2^16 integers. Blocks are
//! sieved independently (possibly in parallel) and concatenated in index
//! order, so the resulting `PrimeTable` is byte-identical regardless of the
//! worker count.

use rayon::prelude::*;

use crate::error::{DrhError, Result};
use crate::util::{adaptive_simpson, Kahan, EULER_GAMMA};

/// Fixed segmentation unit (integers per block).
pub const BLOCK_SIZE: u64 = 1 << 16;

/// Largest supported sieve limit.
pub const MAX_LIMIT: u64 = 1 << 40;

/// All primes up to an inclusive limit, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Segmented sieve of Eratosthenes up to `limit` (inclusive).
    pub fn sieve(limit: u64) -> Result<Self> {
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(DrhError::Capacity(format!(
                "sieve limit {limit} outside [2, 2^40]"
            )));
        }
        let root = (limit as f64).sqrt() as u64 + 1;
        let base = simple_odd_sieve(root.max(3));

        let nblocks = (limit / BLOCK_SIZE + 1) as usize;
        let mut chunks: Vec<Vec<u64>> = Vec::with_capacity(nblocks);
        (0..nblocks)
            .into_par_iter()
            .map(|k| sieve_block(k as u64, limit, &base))
            .collect_into_vec(&mut chunks);

        let mut primes = Vec::with_capacity(estimate_pi(limit));
        primes.push(2);
        for c in chunks {
            primes.extend_from_slice(&c);
        }
        Ok(Self { limit, primes })
    }

    pub fn from_parts(limit: u64, primes: Vec<u64>) -> Self {
        Self { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// Primes `p <= x` as a slice.
    pub fn primes_upto(&self, x: f64) -> Result<&[u64]> {
        if x > self.limit as f64 {
            return Err(DrhError::Range(format!(
                "x = {x} exceeds sieve limit {}",
                self.limit
            )));
        }
        let bound = x.floor().max(0.0) as u64;
        let n = self.primes.partition_point(|&p| p <= bound);
        Ok(&self.primes[..n])
    }

    /// theta(x), psi(x) and the Mertens sum at `x`, each accumulated with
    /// compensated summation.
    pub fn summatory(&self, x: f64) -> Result<SummatorySample> {
        let ps = self.primes_upto(x)?;
        let mut theta = Kahan::new();
        let mut mertens = Kahan::new();
        for &p in ps {
            theta.add((p as f64).ln());
            mertens.add(1.0 / p as f64);
        }
        // psi(x) = theta(x) + sum over prime powers p^k <= x, k >= 2.
        let mut psi = Kahan::new();
        psi.add(theta.total());
        let xi = x.floor() as u128;
        for &p in ps {
            let p128 = p as u128;
            if p128 * p128 > xi {
                break;
            }
            let mut pk = p128 * p128;
            let logp = (p as f64).ln();
            loop {
                psi.add(logp);
                if pk > xi / p128 {
                    break;
                }
                pk *= p128;
            }
        }
        Ok(SummatorySample {
            x,
            theta: theta.total(),
            psi: psi.total(),
            mertens: mertens.total(),
        })
    }
}

/// A snapshot of the summatory functions at a cutoff `x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SummatorySample {
    pub x: f64,
    /// theta(x) = sum of log p over p <= x.
    pub theta: f64,
    /// psi(x) = sum of log p over prime powers p^k <= x.
    pub psi: f64,
    /// sum of 1/p over p <= x.
    pub mertens: f64,
}

fn estimate_pi(limit: u64) -> usize {
    let x = limit as f64;
    ((x / x.ln()) * 1.15) as usize + 16
}

/// Plain odd-only sieve used for base primes (and as the oracle's skeleton).
fn simple_odd_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n / 2 + 1]; // index i <-> odd number 2i+1
    let mut primes = vec![2u64];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j <= n / 2 {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    for i in 1..=n / 2 {
        if !composite[i] && 2 * i + 1 <= n {
            primes.push((2 * i + 1) as u64);
        }
    }
    primes
}

/// Sieve block k, covering [k*2^16, (k+1)*2^16) clamped to `limit`.
fn sieve_block(k: u64, limit: u64, base: &[u64]) -> Vec<u64> {
    let lo = k * BLOCK_SIZE;
    let hi = ((k + 1) * BLOCK_SIZE - 1).min(limit);
    if hi < 3 {
        return (lo..=hi).filter(|&n| n == 3).collect();
    }
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        // odd base primes only
        if p * p > hi {
            break;
        }
        let mut start = p * p;
        if start < lo {
            start = lo.div_ceil(p) * p;
            if start % 2 == 0 {
                start += p;
            }
        }
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += 2 * p;
        }
    }
    let first_odd = if lo <= 3 { 3 } else { lo + 1 - (lo & 1) };
    let mut out = Vec::with_capacity(len / 8);
    let mut n = first_odd;
    while n <= hi {
        if !composite[(n - lo) as usize] {
            out.push(n);
        }
        n += 2;
    }
    out
}

/// Logarithmic integral Li(x) = PV int_0^x dt/log t, for x > 1.
///
/// Evaluated as Ei(log x) via the everywhere-convergent series
/// Ei(y) = gamma + log y + sum_{k>=1} y^k/(k*k!), which is exactly the
/// epsilon -> 0 limit of the split principal-value integral.
pub fn logarithmic_integral(x: f64) -> Result<f64> {
    if x <= 1.0 {
        return Err(DrhError::Domain(format!("Li(x) requires x > 1, got {x}")));
    }
    let y = x.ln();
    let mut sum = Kahan::new();
    sum.add(EULER_GAMMA);
    sum.add(y.ln());
    let mut term = 1.0f64;
    for k in 1..=400 {
        term *= y / k as f64;
        let contrib = term / k as f64;
        sum.add(contrib);
        if contrib.abs() < 1e-17 * sum.total().abs().max(1.0) {
            break;
        }
    }
    Ok(sum.total())
}

/// The pole-case compensating integral of the trivial character,
/// `lim_{eps->0} [ int_{1+eps}^x du/(u^s log u) - log(1/eps) ]` for real s.
///
/// Equal to `log log x + int_1^x (u^{-s} - u^{-1})/log u du`; the remaining
/// integrand is continuous at u = 1 (value 1 - s) and is integrated by
/// adaptive quadrature after the substitution u = e^v.
pub fn pole_compensator(x: f64, s: f64) -> Result<f64> {
    if x <= 1.0 {
        return Err(DrhError::Domain(format!("compensator requires x > 1, got {x}")));
    }
    let v_hi = x.ln();
    let g = move |v: f64| {
        let w = (1.0 - s) * v;
        if w.abs() < 1e-6 {
            // (e^w - 1)/v with w = (1-s) v, expanded near v = 0
            (1.0 - s) * (1.0 + w / 2.0 + w * w / 6.0)
        } else {
            w.exp_m1() / v
        }
    };
    let integral = adaptive_simpson(&g, 0.0, v_hi, 1e-12);
    Ok(v_hi.ln() + integral)
}

/// Number of monic irreducible polynomials of degree n over F_q:
/// `M_q(n) = (1/n) * sum_{d | n} mu(d) q^{n/d}`.
pub fn gauss_irreducible_count(q: u64, n: u32) -> Result<u128> {
    if !crate::util::is_prime_u64(q) {
        return Err(DrhError::Argument(format!("q = {q} is not prime")));
    }
    if n == 0 {
        return Err(DrhError::Argument("degree n must be >= 1".into()));
    }
    if (n as f64) * (q as f64).log2() > 120.0 {
        return Err(DrhError::Capacity(format!("q^n overflows 128 bits (q={q}, n={n})")));
    }
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            let mu = moebius(d);
            if mu != 0 {
                total += mu as i128 * (q as u128).pow(n / d) as i128;
            }
        }
    }
    debug_assert!(total > 0 && total % n as i128 == 0);
    Ok((total / n as i128) as u128)
}

fn moebius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}
