//! Exact L-polynomials of Dirichlet characters over F_q[T] and their Weil
//! roots.
//!
//! For nontrivial chi mod A, L(u, chi) = sum_{f monic} chi(f) u^{deg f} is a
//! polynomial of degree < deg A: the coefficient sums are computed by exact
//! integer bincount over exponent classes (each c_n is an integer
//! combination of ord-th roots of unity, converted to complex once).

use num_complex::Complex64;

use super::units::{unit_root, FfCharacter};
use crate::error::{DrhError, Result};

/// L(u) = sum c_n u^n = prod_j (1 - lambda_j u), with the inverse roots and
/// the central-point multiplicities.
#[derive(Debug, Clone)]
pub struct LPolynomial {
    pub q: u64,
    /// c_0 = 1, ..., c_m (trailing numerically-zero coefficients stripped)
    pub coefficients: Vec<Complex64>,
    /// inverse roots lambda_j (L(u) = prod (1 - lambda_j u))
    pub inverse_roots: Vec<Complex64>,
    /// multiplicity of lambda = +sqrt(q) (tolerance 1e-8 relative)
    pub nu_sqrtq: u32,
    /// order of vanishing at u = q^{-1/2} (= nu_sqrtq for this polynomial
    /// shape; kept as its own field because it is read off independently)
    pub r_half: u32,
    /// all |lambda| within 1e-8 of 1 or sqrt(q)?
    pub pure_weights: bool,
}

const ROOT_TOL: f64 = 1e-8;

impl LPolynomial {
    /// L(u) at a complex point.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    /// Exact r-th derivative with respect to s at s = 1/2, through
    /// u = q^{-s}: L(s) = sum c_n q^{-ns}, so
    /// L^(r)(1/2) = sum c_n (-n log q)^r q^{-n/2}.
    pub fn derivative_at_center(&self, r: u32) -> Complex64 {
        let logq = (self.q as f64).ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.coefficients.iter().enumerate() {
            let factor = (-(n as f64) * logq).powi(r as i32);
            acc += c * factor * (self.q as f64).powf(-(n as f64) / 2.0);
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Compute the L-polynomial of a nontrivial character by direct enumeration
/// of monic polynomials of degree n < deg A (q^n terms each), plus one
/// extra coefficient which must vanish.
pub fn l_polynomial(chi: &FfCharacter) -> Result<LPolynomial> {
    if chi.is_trivial() {
        return Err(DrhError::Argument(
            "the trivial character's L-function is the zeta factor with a pole; no L-polynomial"
                .into(),
        ));
    }
    let ring = chi.ring();
    let q = chi.q;
    let deg_a = ring.deg;
    let ord = chi.order;

    let mut coeffs: Vec<Complex64> = Vec::with_capacity(deg_a as usize + 1);
    for n in 0..=deg_a {
        // bincount by character exponent, exactly in integers
        let mut bins = vec![0i64; ord as usize];
        if n == 0 {
            bins[0] = 1; // the empty product: the monic constant 1
        } else {
            let mut idx = ring.reduce_constant(1);
            // walk monic codes incrementally: code c of degree n reduces via
            // Horner; recompute per code (q^n <= q^{deg A} is small)
            let _ = idx;
            for code in 0..q.pow(n) {
                idx = ring.reduce_monic_code(code, n);
                if let Some(k) = chi.exponent_at(idx) {
                    bins[k as usize] += 1;
                }
            }
        }
        let mut c = Complex64::new(0.0, 0.0);
        for (k, &count) in bins.iter().enumerate() {
            if count != 0 {
                c += count as f64 * unit_root(k as u64, ord);
            }
        }
        coeffs.push(c);
    }
    // the coefficient at deg A must vanish (checked, then stripped along
    // with any other trailing zeros from imprimitive characters)
    let scale = (q.pow(deg_a) as f64).max(1.0);
    if coeffs[deg_a as usize].norm() > 1e-9 * scale {
        return Err(DrhError::Integrity(format!(
            "coefficient c_{deg_a} = {} does not vanish; character table corrupt",
            coeffs[deg_a as usize]
        )));
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() < 1e-9 * scale {
        coeffs.pop();
    }

    let inverse_roots = inverse_roots(&coeffs);
    let sq = (q as f64).sqrt();
    let nu_sqrtq = inverse_roots
        .iter()
        .filter(|l| (*l - Complex64::new(sq, 0.0)).norm() <= ROOT_TOL * (1.0 + sq))
        .count() as u32;
    let pure_weights = inverse_roots
        .iter()
        .all(|l| (l.norm() - 1.0).abs() <= ROOT_TOL || (l.norm() - sq).abs() <= ROOT_TOL * sq);
    Ok(LPolynomial {
        q,
        coefficients: coeffs,
        inverse_roots,
        nu_sqrtq,
        r_half: nu_sqrtq,
        pure_weights,
    })
}

/// Inverse roots of sum c_n u^n with c_0 = 1, via Durand-Kerner iteration
/// on the reversed polynomial (the lambda_j are roots of
/// sum c_n z^{m-n} = prod (z - lambda_j)).
fn inverse_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = coeffs.len() - 1;
    if m == 0 {
        return vec![];
    }
    // monic polynomial in z with roots lambda_j: z^m + c_1 z^{m-1} + ... + c_m
    let monic: Vec<Complex64> = coeffs.to_vec();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter() {
            acc = acc * z + c;
        }
        acc
    };
    // scale estimate: max |c_n|^{1/n}
    let scale = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c.norm().powf(1.0 / n as f64))
        .fold(1.0f64, f64::max);
    let seed = Complex64::from_polar(1.0, 0.93); // not a root of unity
    let mut z: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(scale * 1.1, 0.0) * seed.powu(i as u32 + 1))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..m {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let delta = eval(z[i]) / denom;
            z[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-15 * scale.max(1.0) {
            break;
        }
    }
    // polish with a Newton step each
    let dmonic: Vec<Complex64> = monic
        .iter()
        .take(m)
        .enumerate()
        .map(|(i, c)| c * (m - i) as f64)
        .collect();
    let deval = |w: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in dmonic.iter() {
            acc = acc * w + c;
        }
        acc
    };
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = deval(*zi);
            if d.norm() > 1e-300 {
                *zi -= eval(*zi) / d;
            }
        }
    }
    // an m'-fold root is only located to eps^{1/m'} by evaluation-based
    // iterations; it is, however, a simple root of the (m'-1)-th
    // derivative, where Newton recovers machine accuracy
    let derivative = |poly: &[Complex64]| -> Vec<Complex64> {
        let deg = poly.len() - 1;
        poly.iter().take(deg).enumerate().map(|(i, c)| c * (deg - i) as f64).collect()
    };
    let horner = |w: Complex64, poly: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in poly {
            acc = acc * w + c;
        }
        acc
    };
    let mut used = vec![false; m];
    let mut clustered = Vec::with_capacity(m);
    for i in 0..m {
        if used[i] {
            continue;
        }
        let mut cluster = vec![z[i]];
        used[i] = true;
        for j in i + 1..m {
            if !used[j] && (z[j] - z[i]).norm() < 1e-4 * (1.0 + z[i].norm()) {
                cluster.push(z[j]);
                used[j] = true;
            }
        }
        let mut root = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        if cluster.len() > 1 {
            let mut dp = monic.clone();
            for _ in 1..cluster.len() {
                dp = derivative(&dp);
            }
            let ddp = derivative(&dp);
            for _ in 0..8 {
                let d = horner(root, &ddp);
                if d.norm() < 1e-300 {
                    break;
                }
                root -= horner(root, &dp) / d;
            }
        }
        for _ in 0..cluster.len() {
            clustered.push(root);
        }
    }
    let mut z = clustered;
    z.sort_by(|a, b| (b.norm(), b.re, b.im).partial_cmp(&(a.norm(), a.re, a.im)).unwrap());
    z
}
