//! Exact Ramanujan tau tables via sparse eta-power series and NTT squaring.
//!
//! Delta(z) = q prod (1-q^n)^24, so tau(n) is the coefficient of x^{n-1} in
//! prod (1-x^n)^24 = (((eta-cube series)^2)^2)^2, where Jacobi's identity
//! gives the sparse start
//!
//! ```text
//! prod_{n>=1} (1-x^n)^3 = sum_{k>=0} (-1)^k (2k+1) x^{k(k+1)/2}.
//! ```
//!
//! Three exact integer squarings (number-theoretic transforms modulo three
//! 62..64-bit primes, CRT-reconstructed into i128 with a third-modulus
//! consistency check) produce tau(1..N). Everything is exact integers, so
//! results are thread-count independent by construction.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{DrhError, Result};
use crate::primes::PrimeTable;
use crate::race::BiasSeries;
use crate::util::Kahan;

/// NTT moduli: Goldilocks (2-adicity 32) plus two 62-bit primes with
/// 2-adicity 57 and 56. The first two reconstruct values up to
/// p0*p1/2 ~ 3.8e37; the third detects any overflow of that range.
const NTT_PRIMES: [NttPrime; 3] = [
    NttPrime { p: 0xFFFF_FFFF_0000_0001, g: 7 },
    NttPrime { p: 4_179_340_454_199_820_289, g: 3 }, // 29 * 2^57 + 1
    NttPrime { p: 1_945_555_039_024_054_273, g: 5 }, // 27 * 2^56 + 1
];

#[derive(Clone, Copy)]
struct NttPrime {
    p: u64,
    g: u64,
}

/// Montgomery arithmetic mod an odd prime p < 2^64.
#[derive(Clone, Copy)]
struct Mont {
    p: u64,
    /// -p^{-1} mod 2^64
    ninv: u64,
    /// 2^128 mod p
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        // Newton iteration for p^{-1} mod 2^64
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % p as u128) as u64; // 2^64 mod p
        let r2 = ((r1 as u128 * r1 as u128) % p as u128) as u64; // 2^128 mod p
        Self { p, ninv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let (sum, carry) = t.overflowing_add(m as u128 * self.p as u128);
        let mut r = (sum >> 64) as u64;
        if carry || r >= self.p {
            r = r.wrapping_sub(self.p);
        }
        r
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// base (Montgomery form) raised to e.
    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// In-place radix-2 NTT; `root_mont` is a primitive n-th root of unity in
/// Montgomery form.
fn ntt(a: &mut [u64], m: &Mont, root_mont: u64) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let one = m.to_mont(1);
    let mut len = 2;
    while len <= n {
        // w_len = root^(n/len)
        let mut w_len = root_mont;
        let mut k = n / len;
        while k > 1 {
            w_len = m.mul(w_len, w_len);
            k >>= 1;
        }
        for start in (0..n).step_by(len) {
            let mut w = one;
            for i in 0..len / 2 {
                let u = a[start + i];
                let v = m.mul(a[start + i + len / 2], w);
                // p may be within 2^32 of 2^64, so additions must carry
                let (s, carry) = u.overflowing_add(v);
                a[start + i] = if carry || s >= m.p { s.wrapping_sub(m.p) } else { s };
                a[start + i + len / 2] = if u >= v { u - v } else { u.wrapping_sub(v).wrapping_add(m.p) };
                w = m.mul(w, w_len);
            }
        }
        len <<= 1;
    }
}

fn ntt_inverse(values: &mut [u64], m: &Mont, root_mont: u64) {
    let n = values.len() as u64;
    let inv_root = m.pow(root_mont, m.p - 2);
    ntt(values, m, inv_root);
    let n_inv = m.pow(m.to_mont(n), m.p - 2);
    for v in values.iter_mut() {
        *v = m.mul(*v, n_inv);
    }
}

fn reduce_i128(x: i128, p: u64) -> u64 {
    let r = x.rem_euclid(p as i128);
    r as u64
}

/// Conservative upper bound on log2 of any convolution coefficient.
fn conv_log2_bound(a: &[i128], b: &[i128]) -> f64 {
    let max_abs = |v: &[i128]| v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let (ma, mb) = (max_abs(a), max_abs(b));
    if ma == 0 || mb == 0 {
        return 0.0;
    }
    let la = (128 - ma.leading_zeros()) as f64;
    let lb = (128 - mb.leading_zeros()) as f64;
    la + lb + (a.len().min(b.len()) as f64).log2().ceil() + 1.0
}

/// Exact integer convolution of `a` and `b`, truncated to `out_len`.
///
/// Errors with `Overflow` (never silent wraparound) when the a-priori
/// three-prime capacity is exceeded or when the third-modulus consistency
/// check fails during reconstruction.
pub fn ntt_convolve(a: &[i128], b: &[i128], out_len: usize) -> Result<Vec<i128>> {
    if a.is_empty() || b.is_empty() || out_len > a.len() + b.len() - 1 {
        return Err(DrhError::Argument(format!(
            "out_len {out_len} exceeds full convolution length"
        )));
    }
    // product of the three moduli is ~2^186; symmetric capacity ~2^185
    if conv_log2_bound(a, b) >= 185.0 {
        return Err(DrhError::Overflow(
            "convolution coefficients may exceed three-prime CRT capacity".into(),
        ));
    }
    let size = (a.len() + b.len() - 1).next_power_of_two();
    let square = a == b;
    let residues: Vec<Vec<u64>> = NTT_PRIMES
        .par_iter()
        .map(|np| {
            let m = Mont::new(np.p);
            let root = m.pow(m.to_mont(np.g), (np.p - 1) / size as u64);
            let mut va: Vec<u64> = a.iter().map(|&x| m.to_mont(reduce_i128(x, np.p))).collect();
            va.resize(size, 0);
            ntt(&mut va, &m, root);
            if square {
                for x in va.iter_mut() {
                    *x = m.mul(*x, *x);
                }
            } else {
                let mut vb: Vec<u64> = b.iter().map(|&x| m.to_mont(reduce_i128(x, np.p))).collect();
                vb.resize(size, 0);
                ntt(&mut vb, &m, root);
                for (x, y) in va.iter_mut().zip(&vb) {
                    *x = m.mul(*x, *y);
                }
            }
            ntt_inverse(&mut va, &m, root);
            va.truncate(out_len);
            for v in va.iter_mut() {
                *v = m.from_mont(*v);
            }
            va
        })
        .collect();

    crt_reconstruct(&residues, out_len)
}

/// Garner reconstruction from the first two primes with a consistency check
/// against the third: given the a-priori three-prime bound, agreement of the
/// checked residue proves the reconstructed value is exact.
fn crt_reconstruct(residues: &[Vec<u64>], out_len: usize) -> Result<Vec<i128>> {
    let p0 = NTT_PRIMES[0].p;
    let p1 = NTT_PRIMES[1].p;
    let p2 = NTT_PRIMES[2].p;
    let p0p1 = p0 as u128 * p1 as u128;
    let inv_p0_mod_p1 = {
        let m = Mont::new(p1);
        m.from_mont(m.pow(m.to_mont(p0 % p1), p1 - 2))
    };
    let half = p0p1 / 2;
    let mut out = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let r0 = residues[0][i];
        let r1 = residues[1][i];
        let r2 = residues[2][i];
        let r0_mod_p1 = r0 % p1;
        let diff = if r1 >= r0_mod_p1 { r1 - r0_mod_p1 } else { r1 + p1 - r0_mod_p1 };
        let t = ((diff as u128 * inv_p0_mod_p1 as u128) % p1 as u128) as u64;
        let v = r0 as u128 + p0 as u128 * t as u128;
        let signed: i128 = if v > half { v as i128 - p0p1 as i128 } else { v as i128 };
        if reduce_i128(signed, p2) != r2 {
            return Err(DrhError::Overflow(format!(
                "CRT residue mismatch at coefficient {i}: value exceeds two-prime capacity"
            )));
        }
        out.push(signed);
    }
    Ok(out)
}

/// Largest N for which tau(1..N) certainly fits the i128 / CRT budget
/// (max |tau(n)| ~ 1e36 < 2^127 at n = 1e6).
pub const MAX_TAU_N: u64 = 1_000_000;

/// Exact tau(1..N) as 128-bit signed integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    n: u64,
    values: Vec<i128>,
}

impl TauTable {
    /// Build the table: sparse eta-cube series, three NTT squarings
    /// truncated to N, then the index shift from Delta's leading q.
    pub fn build(n: u64) -> Result<Self> {
        if n == 0 || n > MAX_TAU_N {
            return Err(DrhError::Capacity(format!(
                "tau table size {n} outside [1, {MAX_TAU_N}]"
            )));
        }
        let len = n as usize;
        let mut series = vec![0i128; len];
        let mut k = 0u64;
        loop {
            let idx = k * (k + 1) / 2;
            if idx >= n {
                break;
            }
            let val = (2 * k + 1) as i128;
            series[idx as usize] = if k % 2 == 0 { val } else { -val };
            k += 1;
        }
        for _ in 0..3 {
            if len == 1 {
                series = vec![series[0] * series[0]];
            } else {
                series = ntt_convolve(&series, &series, len)?;
            }
        }
        Ok(Self { n, values: series })
    }

    pub fn from_parts(n: u64, values: Vec<i128>) -> Self {
        Self { n, values }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }

    /// tau(k) for 1 <= k <= N.
    #[inline]
    pub fn tau(&self, k: u64) -> i128 {
        self.values[(k - 1) as usize]
    }

    /// Exact Deligne check |tau(p)| <= 2 p^{11/2}, i.e. tau(p)^2 <= 4 p^11.
    pub fn deligne_ok(&self, p: u64) -> bool {
        let t = BigInt::from(self.tau(p));
        let rhs = BigInt::from(4) * BigInt::from(p).pow(11);
        &t * &t <= rhs
    }

    /// Chebyshev-bias series of the tau form: partial sums of tau(p)/p^6 at
    /// each checkpoint.
    pub fn bias_series(&self, primes: &PrimeTable, checkpoints: &[u64]) -> Result<BiasSeries> {
        let &max = checkpoints
            .last()
            .ok_or_else(|| DrhError::Argument("bias series needs at least one checkpoint".into()))?;
        if max > self.n || max > primes.limit() {
            return Err(DrhError::Range(format!(
                "checkpoint {max} beyond tau table {} or sieve limit {}",
                self.n,
                primes.limit()
            )));
        }
        let mut acc = Kahan::new();
        let mut values = Vec::with_capacity(checkpoints.len());
        let mut iter = primes.primes().iter().peekable();
        for &cp in checkpoints {
            while let Some(&&p) = iter.peek() {
                if p > cp {
                    break;
                }
                let pf = p as f64;
                acc.add(self.tau(p) as f64 / pf.powi(6));
                iter.next();
            }
            values.push(acc.total());
        }
        Ok(BiasSeries {
            label: "tau-bias".into(),
            weight: 6.0,
            checkpoints: checkpoints.to_vec(),
            values,
            fit: None,
        })
    }
}
