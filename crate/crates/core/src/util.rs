//! Shared numeric utilities: compensated summation, checkpoint grids, and
//! least-squares fits against log log x.

use num_complex::Complex64;

use crate::error::{DrhError, Result};

/// Euler's constant, pinned to the value used by every normalization in the
/// crate.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Neumaier-compensated accumulator. One rounding error per `add` is captured
/// in the carry term, so 1e8-term sums keep ~15 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }

    /// Merge another accumulator; used for block-ordered reductions.
    pub fn merge(&mut self, other: Kahan) {
        self.add(other.sum);
        self.add(other.carry);
    }
}

/// Compensated accumulator for complex values (independent real/imag parts).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }

    pub fn merge(&mut self, other: KahanComplex) {
        self.re.merge(other.re);
        self.im.merge(other.im);
    }
}

/// Default checkpoint grid: `count` geometrically spaced integers from `lo`
/// to `hi` inclusive, deduplicated and ascending.
pub fn geometric_checkpoints(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    assert!(lo >= 1 && count >= 1);
    if hi <= lo {
        return vec![hi.max(1)];
    }
    let ratio = (hi as f64 / lo as f64).ln();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let t = if count == 1 { 1.0 } else { i as f64 / (count - 1) as f64 };
        let x = ((lo as f64) * (ratio * t).exp()).round() as u64;
        out.push(x.clamp(lo, hi));
    }
    out.dedup();
    out
}

/// The standard trace grid: 64 geometric points from 1e3 (or the limit, if
/// smaller) up to the limit.
pub fn default_checkpoints(limit: u64) -> Vec<u64> {
    let lo = 1000u64.min(limit);
    geometric_checkpoints(lo, limit, 64)
}

/// Ordinary least squares of `y = slope * u + intercept` where
/// `u = log log x`. Returns `(slope, intercept, rms_residual)`.
///
/// Used by every log-log drift fit in the crate (race slopes, BSD rank
/// readout). Points with x <= 1 are rejected.
pub fn fit_against_loglog(xs: &[u64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(DrhError::Argument(format!(
            "fit needs >= 2 matched points, got {} xs / {} ys",
            xs.len(),
            ys.len()
        )));
    }
    let us: Vec<f64> = xs
        .iter()
        .map(|&x| {
            if x <= 2 {
                return Err(DrhError::Argument(format!("loglog fit point x={x} <= 2")));
            }
            Ok((x as f64).ln().ln())
        })
        .collect::<Result<_>>()?;
    let n = us.len() as f64;
    let mean_u = us.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut suu = 0.0;
    let mut suy = 0.0;
    for (u, y) in us.iter().zip(ys) {
        suu += (u - mean_u) * (u - mean_u);
        suy += (u - mean_u) * (y - mean_y);
    }
    if suu < 1e-12 {
        return Err(DrhError::Fit(format!(
            "degenerate design matrix: log log x spans only {suu:.2e}"
        )));
    }
    let slope = suy / suu;
    let intercept = mean_y - slope * mean_u;
    let mut ss = 0.0;
    for (u, y) in us.iter().zip(ys) {
        let r = y - (slope * u + intercept);
        ss += r * r;
    }
    Ok((slope, intercept, (ss / n).sqrt()))
}

/// Tail half of a checkpoint list (the fitting window used throughout).
pub fn tail_half<T>(items: &[T]) -> &[T] {
    &items[items.len() / 2..]
}

/// FNV-1a 64-bit hash; used as the cache-file checksum.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + rec(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_small_terms() {
        let mut k = Kahan::new();
        k.add(1e16);
        for _ in 0..10_000 {
            k.add(1.0);
        }
        k.add(-1e16);
        assert_eq!(k.total(), 10_000.0);
    }

    #[test]
    fn checkpoints_are_ascending_and_bounded() {
        let cps = default_checkpoints(100_000_000);
        assert_eq!(cps.first(), Some(&1000));
        assert_eq!(cps.last(), Some(&100_000_000));
        assert!(cps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn loglog_fit_recovers_synthetic_line() {
        let xs: Vec<u64> = (0..16).map(|i| 1000u64 << i).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 0.5 * (x as f64).ln().ln() + 1.0).collect();
        let (slope, intercept, resid) = fit_against_loglog(&xs, &ys).unwrap();
        assert!((slope - 0.5).abs() < 1e-12);
        assert!((intercept - 1.0).abs() < 1e-12);
        assert!(resid < 1e-12);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let trial = |n: u64| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) && n >= 2;
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n={n}");
        }
        assert!(is_prime_u64(4179340454199820289));
        assert!(is_prime_u64(18446744069414584321));
    }

    #[test]
    fn simpson_integrates_exp() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 3.0, 1e-12);
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-10);
    }
}
