//! Weighted prime races pi_s(x; q, a) and log-log bias fits.
//!
//! The weighted counting function sums 1/p^s over primes p <= x in a fixed
//! residue class. At s = 1/2 the difference between a non-residue class and
//! a residue class drifts like C log log x (Chebyshev bias); the classical
//! s = 0 race is also provided as an incremental density count.

use serde::Serialize;

use crate::error::{DrhError, Result};
use crate::primes::PrimeTable;
use crate::util::{fit_against_loglog, tail_half, Kahan};

/// Result of a least-squares drift fit against log log x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

/// A checkpointed real-valued race/bias series with an optional fitted
/// drift.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasSeries {
    pub label: String,
    /// weight exponent s of the 1/p^s summand
    pub weight: f64,
    pub checkpoints: Vec<u64>,
    pub values: Vec<f64>,
    pub fit: Option<FitResult>,
}

impl BiasSeries {
    /// Least squares of the values against log log x over the tail half of
    /// the checkpoints; the result is stored in `self.fit` and returned.
    pub fn fit_loglog(&mut self) -> Result<FitResult> {
        if self.checkpoints.len() < 8 {
            return Err(DrhError::Argument(format!(
                "log-log fit needs >= 8 checkpoints, got {}",
                self.checkpoints.len()
            )));
        }
        let lo = *self.checkpoints.first().unwrap() as f64;
        let hi = *self.checkpoints.last().unwrap() as f64;
        if hi < 100.0 * lo {
            return Err(DrhError::Argument(format!(
                "log-log fit needs >= 2 decades of checkpoints ({lo}..{hi})"
            )));
        }
        let xs = tail_half(&self.checkpoints);
        let ys = tail_half(&self.values);
        let (slope, intercept, residual) = fit_against_loglog(xs, ys)?;
        let fit = FitResult { slope, intercept, residual };
        self.fit = Some(fit);
        Ok(fit)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// pi_s(x; q, a): partial sums of 1/p^s over p <= x, p = a (mod q), at each
/// checkpoint.
pub fn weighted_pi(
    q: u64,
    a: u64,
    s: f64,
    primes: &PrimeTable,
    checkpoints: &[u64],
) -> Result<BiasSeries> {
    if q == 0 || gcd(a, q) != 1 {
        return Err(DrhError::Argument(format!("gcd({a}, {q}) != 1")));
    }
    if s < 0.0 {
        return Err(DrhError::Argument(format!("weight s = {s} must be >= 0")));
    }
    race_accumulate(q, &[(a, 1.0)], s, primes, checkpoints, format!("pi_{s}(x;{q},{a})"))
}

/// Difference series pi_s(x; q, b) - pi_s(x; q, a) at each checkpoint.
/// By convention the first-named class `b` enters positively (the
/// non-residue side of a quadratic race).
pub fn race_series(
    q: u64,
    b: u64,
    a: u64,
    s: f64,
    primes: &PrimeTable,
    checkpoints: &[u64],
) -> Result<BiasSeries> {
    if q == 0 || gcd(a, q) != 1 || gcd(b, q) != 1 {
        return Err(DrhError::Argument(format!("residues must be coprime to {q}")));
    }
    if a % q == b % q {
        return Err(DrhError::Argument(format!(
            "race requires distinct classes, got {a} = {b} (mod {q})"
        )));
    }
    race_accumulate(
        q,
        &[(b, 1.0), (a, -1.0)],
        s,
        primes,
        checkpoints,
        format!("pi_{s}(x;{q},{b}) - pi_{s}(x;{q},{a})"),
    )
}

fn race_accumulate(
    q: u64,
    classes: &[(u64, f64)],
    s: f64,
    primes: &PrimeTable,
    checkpoints: &[u64],
    label: String,
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
    let mut acc = Kahan::new();
    let mut values = Vec::with_capacity(checkpoints.len());
    let mut iter = primes.primes().iter().peekable();
    for &cp in checkpoints {
        while let Some(&&p) = iter.peek() {
            if p > cp {
                break;
            }
            for &(class, sign) in classes {
                if p % q == class % q {
                    let w = if s == 0.0 { 1.0 } else { (p as f64).powf(-s) };
                    acc.add(sign * w);
                }
            }
            iter.next();
        }
        values.push(acc.total());
    }
    Ok(BiasSeries { label, weight: s, checkpoints: checkpoints.to_vec(), values, fit: None })
}

/// Fraction of integers 2 <= x <= x_max for which
/// pi(x; 4, 3) >= pi(x; 4, 1), by incremental counting. Inherently
/// sequential (prefix counts), so it always runs single-threaded.
pub fn classical_race_density(primes: &PrimeTable, x_max: u64) -> Result<f64> {
    if x_max > primes.limit() {
        return Err(DrhError::Range(format!(
            "x_max {x_max} beyond sieve limit {}",
            primes.limit()
        )));
    }
    if x_max < 2 {
        return Err(DrhError::Argument("x_max must be >= 2".into()));
    }
    let mut iter = primes.primes().iter().peekable();
    let mut c3 = 0u64;
    let mut c1 = 0u64;
    let mut good = 0u64;
    for x in 2..=x_max {
        if let Some(&&p) = iter.peek() {
            if p == x {
                match p % 4 {
                    3 => c3 += 1,
                    1 => c1 += 1,
                    _ => {}
                }
                iter.next();
            }
        }
        if c3 >= c1 {
            good += 1;
        }
    }
    Ok(good as f64 / (x_max - 1) as f64)
}

/// Predicted race slope 2^{t-1} / phi(q) for the quadratic-residue race,
/// where 2^t counts the square classes of (Z/qZ)^*. Emitted as metadata
/// only; the fitted slope is never asserted against it.
pub fn predicted_race_slope(q: u64) -> f64 {
    let mut t = 0u32;
    let mut m = q;
    let mut e2 = 0u32;
    while m % 2 == 0 {
        m /= 2;
        e2 += 1;
    }
    let mut d = 3u64;
    let mut odd = m;
    while d * d <= odd {
        if odd % d == 0 {
            t += 1;
            while odd % d == 0 {
                odd /= d;
            }
        }
        d += 2;
    }
    if odd > 1 {
        t += 1;
    }
    t += match e2 {
        0 | 1 => 0,
        2 => 1,
        _ => 2,
    };
    let phi = |mut n: u64| {
        let mut out = n;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                out -= out / p;
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out -= out / n;
        }
        out
    };
    2f64.powi(t as i32 - 1) / phi(q) as f64
}
