//! Reference values of L(s, chi) via Hurwitz zeta.
//!
//! L(s, chi) = q^{-s} sum_{a=1..q} chi(a) zeta(s, a/q), with the Hurwitz zeta
//! evaluated by Euler-Maclaurin. The zeta is kept in deflated form
//! zeta*(s, a) = zeta(s, a) - 1/(s-1), which is entire; for nontrivial chi
//! the deflation terms cancel exactly (sum chi(a) = 0), so the route has no
//! pole anywhere in the strip. Derivatives are taken by trapezoidal contour
//! quadrature on a circle of radius 1/8, which is spectrally accurate for
//! analytic integrands.

use num_complex::Complex64;

use crate::dirichlet::DirichletCharacter;
use crate::error::{DrhError, Result};

/// B_{2j} for j = 1..=16.
const BERNOULLI_EVEN: [f64; 16] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
];

/// (e^w - 1) / w, stable near w = 0.
fn phi(w: Complex64) -> Complex64 {
    if w.norm() < 1e-6 {
        Complex64::new(1.0, 0.0) + w / 2.0 + w * w / 6.0 + w * w * w / 24.0
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Deflated Hurwitz zeta: zeta(s, a) - 1/(s - 1), entire in s, for 0 < a <= 1.
///
/// Euler-Maclaurin with M initial terms and up to 16 Bernoulli corrections.
pub fn hurwitz_zeta_deflated(s: Complex64, a: f64) -> Result<Complex64> {
    debug_assert!(a > 0.0 && a <= 1.0);
    let m = (48.0 + 2.0 * s.im.abs()).min(4096.0) as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..m {
        sum += (-s * Complex64::new((n as f64 + a).ln(), 0.0)).exp();
    }
    let big = m as f64 + a;
    let logb = big.ln();
    // [(M+a)^{1-s} - 1] / (s - 1) = -log(M+a) * phi((1-s) log(M+a))
    let w = (Complex64::new(1.0, 0.0) - s) * logb;
    sum += -logb * phi(w);
    let pow_minus_s = (-s * logb).exp();
    sum += 0.5 * pow_minus_s;

    // correction terms B_{2j}/(2j)! * (s)_{2j-1} * (M+a)^{-s-2j+1}
    let mut poch = s; // (s)_1
    let mut fact = 2.0f64; // (2j)!
    let mut power = pow_minus_s / big; // (M+a)^{-s-1}
    let mut last = f64::INFINITY;
    for j in 1..=16usize {
        let term = BERNOULLI_EVEN[j - 1] / fact * poch * power;
        sum += term;
        let mag = term.norm();
        if mag < 1e-18 * sum.norm().max(1e-10) {
            return Ok(sum);
        }
        if mag > last {
            return Err(DrhError::Precision(format!(
                "Euler-Maclaurin corrections diverging at j={j} for s={s}, a={a}"
            )));
        }
        last = mag;
        // advance to j+1
        poch *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
        power /= big * big;
    }
    Ok(sum)
}

/// L(s, chi) for a primitive character. The trivial character mod 1 yields
/// the Riemann zeta (with its pole at s = 1 rejected).
fn l_point(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let q = chi.modulus();
    let mut sum = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        let c = chi.eval(a);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        sum += c * hurwitz_zeta_deflated(s, a as f64 / q as f64)?;
    }
    if chi.is_trivial() {
        if (s - Complex64::new(1.0, 0.0)).norm() < 1e-8 {
            return Err(DrhError::Singularity("zeta has a pole at s = 1".into()));
        }
        sum += 1.0 / (s - 1.0);
    }
    Ok((-s * (q as f64).ln()).exp() * sum)
}

/// Number of contour nodes for derivative quadrature.
const CONTOUR_NODES: usize = 64;
/// Contour radius.
const CONTOUR_RADIUS: f64 = 0.125;

/// m-th derivative of L(s, chi) for primitive chi, m <= 3.
pub fn l_value(chi: &DirichletCharacter, s: Complex64, deriv_order: u32) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(DrhError::Argument(format!(
            "l_value requires a primitive character; conductor {} < modulus {}",
            chi.conductor(),
            chi.modulus()
        )));
    }
    if deriv_order > 3 {
        return Err(DrhError::Argument(format!(
            "derivative order {deriv_order} > 3 unsupported"
        )));
    }
    // The strip of the spec plus margin for the contour circle.
    if !(-0.5..=2.5).contains(&s.re) {
        return Err(DrhError::Domain(format!(
            "evaluation point Re(s) = {} outside (-0.5, 2.5)",
            s.re
        )));
    }
    if deriv_order == 0 {
        return l_point(chi, s);
    }
    if chi.is_trivial() && (s - Complex64::new(1.0, 0.0)).norm() <= CONTOUR_RADIUS + 1e-9 {
        return Err(DrhError::Singularity(
            "derivative contour would enclose the zeta pole at s = 1".into(),
        ));
    }
    // L^(m)(s) = m! / (N rho^m) * sum_k L(s + rho e^{i t_k}) e^{-i m t_k}
    let m = deriv_order;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CONTOUR_NODES {
        let t = 2.0 * std::f64::consts::PI * k as f64 / CONTOUR_NODES as f64;
        let node = Complex64::from_polar(CONTOUR_RADIUS, t);
        let val = l_point(chi, s + node)?;
        acc += val * Complex64::from_polar(1.0, -(m as f64) * t);
    }
    let mfact: f64 = (1..=m).map(|k| k as f64).product();
    Ok(acc * mfact / (CONTOUR_NODES as f64 * CONTOUR_RADIUS.powi(m as i32)))
}
