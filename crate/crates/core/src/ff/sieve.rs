//! Enumeration of monic irreducible polynomials over F_q by a composite-
//! marking sieve.
//!
//! Degree n is sieved by marking every product g*h with g irreducible of
//! degree a <= n/2 and h monic of degree n-a (every composite of degree n
//! has an irreducible factor of degree <= n/2). The h-enumeration walks an
//! odometer over h's coefficient digits, so each product update costs
//! O(deg g) coefficient additions instead of a full multiplication.
//! Marking is idempotent, which makes parallel marking deterministic.

use rayon::prelude::*;

use super::poly::FqPoly;
use crate::error::{DrhError, Result};
use crate::util::is_prime_u64;

/// Hard cap on q^degree for a single sieve pass (bitmap of q^d bits).
const MAX_SIEVE_SIZE: u64 = 1 << 31;
/// Cap on q^degree for collecting (rather than streaming) a degree.
const MAX_COLLECT_SIZE: u64 = 1 << 27;
/// h-spaces larger than this are split by their top digit for parallelism.
const SPLIT_THRESHOLD: u64 = 1 << 18;

/// Incremental enumerator of monic irreducibles over F_q. Low degrees are
/// stored (they drive the sieving of higher degrees); high degrees can be
/// streamed without being retained.
pub struct IrreducibleSieve {
    q: u64,
    /// stored[d-1] = ascending codes of the monic irreducibles of degree d
    stored: Vec<Vec<u64>>,
}

impl IrreducibleSieve {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(DrhError::Argument(format!("q = {q} is not prime")));
        }
        Ok(Self { q, stored: Vec::new() })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn check_capacity(&self, degree: u32, cap: u64) -> Result<()> {
        let bits = (degree as f64) * (self.q as f64).log2();
        if bits > (cap as f64).log2() + 1e-9 {
            return Err(DrhError::Capacity(format!(
                "q^d = {}^{degree} exceeds the sieve budget",
                self.q
            )));
        }
        Ok(())
    }

    fn ensure_stored(&mut self, degree: u32) -> Result<()> {
        while (self.stored.len() as u32) < degree {
            let d = self.stored.len() as u32 + 1;
            self.check_capacity(d, MAX_COLLECT_SIZE)?;
            let mut codes = Vec::new();
            self.sieve_degree(d, |code| codes.push(code))?;
            self.stored.push(codes);
        }
        Ok(())
    }

    /// Codes of all monic irreducibles of the given degree (collected).
    pub fn irreducibles(&mut self, degree: u32) -> Result<&[u64]> {
        if degree == 0 {
            return Err(DrhError::Argument("degree must be >= 1".into()));
        }
        self.check_capacity(degree, MAX_COLLECT_SIZE)?;
        self.ensure_stored(degree)?;
        Ok(&self.stored[degree as usize - 1])
    }

    /// Number of monic irreducibles of the given degree, by enumeration.
    pub fn count(&mut self, degree: u32) -> Result<u64> {
        if degree == 0 {
            return Err(DrhError::Argument("degree must be >= 1".into()));
        }
        if (degree as usize) <= self.stored.len() {
            return Ok(self.stored[degree as usize - 1].len() as u64);
        }
        self.check_capacity(degree, MAX_SIEVE_SIZE)?;
        self.ensure_stored(degree / 2)?;
        let mut n = 0u64;
        self.sieve_degree(degree, |_| n += 1)?;
        Ok(n)
    }

    /// Stream the monic irreducibles of one degree in ascending code order
    /// without retaining them.
    pub fn visit_degree(&mut self, degree: u32, mut f: impl FnMut(u64)) -> Result<()> {
        if degree == 0 {
            return Err(DrhError::Argument("degree must be >= 1".into()));
        }
        if (degree as usize) <= self.stored.len() {
            for &c in &self.stored[degree as usize - 1] {
                f(c);
            }
            return Ok(());
        }
        self.check_capacity(degree, MAX_SIEVE_SIZE)?;
        self.ensure_stored(degree / 2)?;
        self.sieve_degree(degree, f)
    }

    /// Run the composite-marking sieve for one degree and feed the
    /// surviving codes (ascending) to the callback.
    fn sieve_degree(&self, degree: u32, mut f: impl FnMut(u64)) -> Result<()> {
        let q = self.q;
        let size = q.pow(degree);
        let word_count = (size as usize + 63) / 64;

        let mut tasks: Vec<(u32, u64, Option<u64>)> = Vec::new();
        for a in 1..=degree / 2 {
            let b = degree - a;
            let split = q.pow(b) > SPLIT_THRESHOLD;
            for &g in &self.stored[a as usize - 1] {
                if split {
                    for t in 0..q {
                        tasks.push((a, g, Some(t)));
                    }
                } else {
                    tasks.push((a, g, None));
                }
            }
        }
        // each worker marks a private bitmap (atomics are contended enough
        // to dominate otherwise); the OR-merge is order-independent, so the
        // result does not depend on the worker count
        let workers = rayon::current_num_threads().max(1).min(8);
        let words: Vec<u64> = (0..workers)
            .into_par_iter()
            .map(|w| {
                let mut local = vec![0u64; word_count];
                for &(a, gcode, prefix) in tasks.iter().skip(w).step_by(workers) {
                    mark_multiples(q, degree, a, gcode, prefix, &mut local);
                }
                local
            })
            .reduce(
                || vec![0u64; word_count],
                |mut acc, local| {
                    for (a, b) in acc.iter_mut().zip(&local) {
                        *a |= b;
                    }
                    acc
                },
            );

        for (wi, w) in words.iter().enumerate() {
            let mut m = !w;
            let base = (wi as u64) * 64;
            while m != 0 {
                let bit = m.trailing_zeros() as u64;
                let code = base + bit;
                if code >= size {
                    break;
                }
                f(code);
                m &= m - 1;
            }
        }
        Ok(())
    }
}

/// Mark every monic product g * h of total degree n, where g is the fixed
/// irreducible (degree a, code gcode) and h runs over monics of degree
/// n - a, optionally with its top coefficient digit fixed to `prefix`.
fn mark_multiples(q: u64, n: u32, a: u32, gcode: u64, prefix: Option<u64>, bitmap: &mut [u64]) {
    let b = n - a;
    // g's coefficients including the leading 1
    let mut g = vec![0u64; a as usize + 1];
    {
        let mut c = gcode;
        for gi in g.iter_mut().take(a as usize) {
            *gi = c % q;
            c /= q;
        }
        g[a as usize] = 1;
    }
    let qpow: Vec<u64> = (0..n).map(|i| q.pow(i)).collect();

    // product coefficients of g * h below the leading T^n
    let mut prod = vec![0u64; n as usize];
    // h starts as T^b (+ prefix * T^{b-1})
    for k in 0..a {
        prod[(b + k) as usize] = g[k as usize];
    }
    let free = if let Some(t) = prefix {
        for k in 0..=a {
            let pos = (b - 1 + k) as usize;
            if pos < n as usize {
                prod[pos] = (prod[pos] + t * g[k as usize]) % q;
            }
        }
        b - 1
    } else {
        b
    };
    let mut code: i64 = 0;
    for (i, &c) in prod.iter().enumerate() {
        code += (c * qpow[i]) as i64;
    }
    let mut digits = vec![0u64; free as usize];
    loop {
        let idx = code as u64;
        bitmap[(idx / 64) as usize] |= 1 << (idx % 64);
        // odometer: bump h's digit j, updating prod and code by +g*T^j
        let mut j = 0usize;
        loop {
            if j == free as usize {
                return;
            }
            digits[j] += 1;
            for k in 0..=a as usize {
                let pos = j + k;
                if pos >= n as usize {
                    break;
                }
                let old = prod[pos];
                let mut new = old + g[k];
                if new >= q {
                    new -= q;
                }
                prod[pos] = new;
                code += (new as i64 - old as i64) * qpow[pos] as i64;
            }
            if digits[j] < q {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// All monic irreducibles of degree 1..=d_max as polynomials, per degree.
pub fn enumerate_monic_irreducibles(q: u64, d_max: u32) -> Result<Vec<Vec<FqPoly>>> {
    let mut sieve = IrreducibleSieve::new(q)?;
    let mut out = Vec::with_capacity(d_max as usize);
    for d in 1..=d_max {
        let codes = sieve.irreducibles(d)?;
        out.push(codes.iter().map(|&c| FqPoly::from_code(q, c, d)).collect());
    }
    Ok(out)
}
