//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture`). Heavyweight fixtures (the 1e8 prime table,
//! the 1e6 tau table) are shared; a global gate serializes the timed
//! criteria so wall-clock budgets are meaningful even when the harness
//! runs tests on several threads.
//!
//! Canonical invocation:
//!
//! ```text
//! cargo test -p drh-core --test acceptance -- --test-threads=1 --nocapture
//! ```

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::Instant;

use num_complex::Complex64;

use drh_core::catalog::LFunctionSpec;
use drh_core::dirichlet;
use drh_core::elliptic::{bsd_product_trace, rank_fit, EllipticCurve};
use drh_core::euler;
use drh_core::ff;
use drh_core::primes::{gauss_irreducible_count, PrimeTable};
use drh_core::race;
use drh_core::tau::{ntt_convolve, TauTable};
use drh_core::util::{geometric_checkpoints, EULER_GAMMA};

fn gate() -> MutexGuard<'static, ()> {
    static GATE: OnceLock<Mutex<()>> = OnceLock::new();
    match GATE.get_or_init(|| Mutex::new(())).lock() {
        Ok(g) => g,
        Err(poisoned) => poisoned.into_inner(),
    }
}

fn primes_1e8() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::sieve(100_000_000).expect("sieve to 1e8"))
}

fn tau_1e6() -> &'static TauTable {
    static TABLE: OnceLock<TauTable> = OnceLock::new();
    TABLE.get_or_init(|| TauTable::build(1_000_000).expect("tau to 1e6"))
}

fn chi_minus_four() -> dirichlet::DirichletCharacter {
    dirichlet::enumerate_characters(4).unwrap().remove(1)
}

fn pass(n: u32, detail: &str) {
    println!("[PASS] criterion {n}: {detail}");
}

/// Criterion 1: function-field DRH for q = 3, A = T^2 + 1. The order-8 odd
/// character (index 1) satisfies |R(D) - 1| < 0.05 on D = 12..14; the even
/// order-4 character (index 2, the one whose square is the quadratic
/// character, target L(3^{-1/2}) = 1 - 3^{-1/2}) satisfies
/// |R(D) - 1| < 1e-3 from D = 10 on. Single-threaded under 60 s.
#[test]
fn acceptance_01_function_field_drh() {
    let _g = gate();
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let (odd_devs, even_devs) = pool.install(|| {
        let a = ff::FqPoly::new(3, vec![1, 0, 1]).unwrap();
        let chars = ff::character_group(&a).unwrap();
        let mut sieve = ff::IrreducibleSieve::new(3).unwrap();
        let counts = ff::place_class_counts(&mut sieve, &a, 14).unwrap();

        let odd = ff::ff_drh_verify(&chars[1], &counts, 14, 0.05).unwrap();
        assert_eq!(odd.report.r, 0);
        let expect = Complex64::new(1.0 + 2f64.sqrt() / 3f64.sqrt(), -1.0 / 3f64.sqrt());
        assert!((odd.report.target - expect).norm() < 1e-10);
        let odd_devs: Vec<f64> = (12..=14)
            .map(|d| (odd.ratios[d - 1] - 1.0).norm())
            .collect();

        let even = ff::ff_drh_verify(&chars[2], &counts, 14, 0.05).unwrap();
        assert!((even.report.target.re - (1.0 - 3f64.powf(-0.5))).abs() < 1e-10);
        assert_eq!(even.nu_sqrtq, 0);
        let even_devs: Vec<f64> = (10..=14)
            .map(|d| (even.ratios[d - 1] - 1.0).norm())
            .collect();
        (odd_devs, even_devs)
    });
    let elapsed = started.elapsed();

    for (i, dev) in odd_devs.iter().enumerate() {
        assert!(
            *dev < 0.05,
            "[FAIL] criterion 1: order-8 odd character |R({}) - 1| = {dev:.4} >= 0.05",
            12 + i
        );
    }
    for (i, dev) in even_devs.iter().enumerate() {
        assert!(
            *dev < 1e-3,
            "[FAIL] criterion 1: even order-4 character |R({}) - 1| = {dev:.2e} >= 1e-3",
            10 + i
        );
    }
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "[FAIL] criterion 1: runtime {elapsed:?} exceeds 60 s single-threaded"
    );
    pass(
        1,
        &format!(
            "odd chi: max|R-1| = {:.4} on D in [12,14]; even chi: max|R-1| = {:.2e} on D in [10,14]; {:.1} s single-threaded",
            odd_devs.iter().cloned().fold(0.0, f64::max),
            even_devs.iter().cloned().fold(0.0, f64::max),
            elapsed.as_secs_f64()
        ),
    );
}

/// Criterion 2: trace formula residual < 1e-8 for every nontrivial
/// character mod every monic A with deg A <= 3 over q in {2, 3, 5},
/// ell <= 12, in under 30 s.
#[test]
fn acceptance_02_trace_formula() {
    let _g = gate();
    let started = Instant::now();
    let mut worst = 0.0f64;
    let mut characters_checked = 0usize;
    for q in [2u64, 3, 5] {
        let mut moduli = Vec::new();
        for d in 1..=3u32 {
            for code in 0..q.pow(d) {
                moduli.push(ff::FqPoly::from_code(q, code, d));
            }
        }
        let mut sieve = ff::IrreducibleSieve::new(q).unwrap();
        let batch = ff::place_class_counts_batch(&mut sieve, &moduli, 12).unwrap();
        for (a, counts) in moduli.iter().zip(&batch) {
            for chi in ff::character_group(a).unwrap().iter().skip(1) {
                let lp = ff::l_polynomial(chi).unwrap();
                let res = ff::trace_formula_check(chi, counts, &lp, 12).unwrap();
                assert!(
                    res < 1e-8,
                    "[FAIL] criterion 2: q={q} A={a} chi idx {}: residual {res:.2e}",
                    chi.index
                );
                worst = worst.max(res);
                characters_checked += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "[FAIL] criterion 2: runtime {elapsed:?} exceeds 30 s"
    );
    pass(
        2,
        &format!(
            "{characters_checked} characters, max residual {worst:.2e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    );
}

/// Criterion 3: Mertens over function fields. The trivial series
/// T(q^D, 1) - log(D log q) Cauchy-stabilizes (successive differences
/// < 0.05 on D in [10, 14]) and nontrivial-character series stabilize to
/// constants with the same tolerance.
#[test]
fn acceptance_03_ff_mertens() {
    let _g = gate();
    let mut details = Vec::new();
    for q in [2u64, 3] {
        let a = if q == 2 {
            ff::FqPoly::new(2, vec![1, 1]).unwrap()
        } else {
            ff::FqPoly::new(3, vec![1, 0, 1]).unwrap()
        };
        let mut sieve = ff::IrreducibleSieve::new(q).unwrap();
        let counts = ff::place_class_counts(&mut sieve, &a, 14).unwrap();
        let trivial = ff::ff_mertens(None, &counts, 14).unwrap();
        let centered = trivial.centered.as_ref().unwrap();
        for d in 10..14 {
            let diff = (centered[d] - centered[d - 1]).abs();
            assert!(
                diff < 0.05,
                "[FAIL] criterion 3: trivial series q={q} |f({}) - f({})| = {diff:.4}",
                d + 1,
                d
            );
        }
        details.push(format!(
            "q={q} trivial tail diff {:.4}",
            (centered[13] - centered[12]).abs()
        ));
        if q == 3 {
            for idx in [1usize, 4] {
                let chi = &ff::character_group(&a).unwrap()[idx];
                let series = ff::ff_mertens(Some(chi), &counts, 14).unwrap();
                let diffs = series.successive_differences(1);
                for (i, diff) in diffs.iter().enumerate().skip(9) {
                    assert!(
                        *diff < 0.05,
                        "[FAIL] criterion 3: chi idx {idx} |T({}) - T({})| = {diff:.4}",
                        i + 2,
                        i + 1
                    );
                }
                details.push(format!("chi{idx} tail diff {:.4}", diffs.last().unwrap()));
            }
        }
    }
    pass(3, &details.join("; "));
}

/// Criterion 4: irreducible enumeration equals the Moebius count
/// (1/n) sum mu(d) q^{n/d} exactly for q in {2, 3, 5}, n <= 10.
#[test]
fn acceptance_04_gauss_counts() {
    let _g = gate();
    let mut total = 0u128;
    for q in [2u64, 3, 5] {
        let mut sieve = ff::IrreducibleSieve::new(q).unwrap();
        for n in 1..=10u32 {
            let enumerated = sieve.count(n).unwrap() as u128;
            let formula = gauss_irreducible_count(q, n).unwrap();
            assert_eq!(
                enumerated, formula,
                "[FAIL] criterion 4: q={q} n={n}: {enumerated} != {formula}"
            );
            total += enumerated;
        }
    }
    pass(4, &format!("counts match the Moebius formula exactly ({total} irreducibles)"));
}

/// Criterion 5: |sum_{p<=1e8} 1/p - log log 1e8 - 0.2615| < 1e-2, with the
/// segmented sieve and the sum finishing inside 60 s.
#[test]
fn acceptance_05_mertens_over_q() {
    let _g = gate();
    let started = Instant::now();
    let table = PrimeTable::sieve(100_000_000).unwrap();
    let sums = table.summatory(1e8).unwrap();
    let elapsed = started.elapsed();
    let dev = (sums.mertens - (1e8f64).ln().ln() - 0.2615).abs();
    assert!(
        dev < 1e-2,
        "[FAIL] criterion 5: Mertens deviation {dev:.4e} >= 1e-2"
    );
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "[FAIL] criterion 5: runtime {elapsed:?} exceeds 60 s"
    );
    pass(
        5,
        &format!("deviation {dev:.2e}, sieve+sum in {:.1} s", elapsed.as_secs_f64()),
    );
}

/// Criterion 6: the chi_{-4} Euler product at s = 1 is within 1 % of
/// pi/4 (independent Hurwitz evaluator) at x = 1e8, and |deviation|
/// shrinks across decades 1e4..1e8 in at least 3 of the 4 steps.
#[test]
fn acceptance_06_euler_product_at_one() {
    let _g = gate();
    let chi = chi_minus_four();
    let spec = LFunctionSpec::dirichlet(chi.clone());
    let target = chi.l_value(Complex64::new(1.0, 0.0), 0).unwrap();
    assert!((target.re - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    let decades = [10_000u64, 100_000, 1_000_000, 10_000_000, 100_000_000];
    let trace =
        euler::partial_product_trace(&spec, Complex64::new(1.0, 0.0), primes_1e8(), &decades)
            .unwrap();
    let devs: Vec<f64> = trace
        .log_values
        .iter()
        .map(|lv| (lv.exp() - target).norm())
        .collect();
    let final_rel = devs[4] / target.norm();
    assert!(
        final_rel < 0.01,
        "[FAIL] criterion 6: |P(1e8,1) - pi/4|/(pi/4) = {final_rel:.2e} >= 1 %"
    );
    let shrinking = devs.windows(2).filter(|w| w[1] < w[0]).count();
    assert!(
        shrinking >= 3,
        "[FAIL] criterion 6: |deviation| shrank in only {shrinking} of 4 decade steps: {devs:?}"
    );
    pass(
        6,
        &format!("relative deviation {final_rel:.2e} at 1e8; shrank in {shrinking}/4 steps"),
    );
}

/// Criterion 7: DRH at the center for chi_{-4}. The normalized product
/// tracks sqrt(2) L(1/2, chi_{-4}) with log-averaged relative deviation
/// < 0.15 over checkpoints in [1e6, 1e8], and the k-layer decomposition of
/// the log product holds to 1e-10 at every checkpoint.
#[test]
fn acceptance_07_drh_center_chi4() {
    let _g = gate();
    let chi = chi_minus_four();
    let spec = LFunctionSpec::dirichlet(chi.clone());
    let s = Complex64::new(0.5, 0.0);
    let l_half = chi.l_value(s, 0).unwrap();
    let cps = geometric_checkpoints(1000, 100_000_000, 64);
    let trace = euler::partial_product_trace(&spec, s, primes_1e8(), &cps).unwrap();
    let report = euler::drh_normalize(trace, 0, 1, l_half, 0.15).unwrap();
    let target = report.target;
    assert!((target.re - 2f64.sqrt() * l_half.re).abs() < 1e-12);

    // criterion window [1e6, 1e8] with dx/x (trapezoid in log x) weights
    let window: Vec<(u64, Complex64)> = report
        .trace
        .checkpoints
        .iter()
        .zip(&report.trace.normalized)
        .filter(|(&x, _)| x >= 1_000_000)
        .map(|(&x, &z)| (x, z))
        .collect();
    let mut wsum = 0.0;
    let mut dsum = 0.0;
    for i in 0..window.len() {
        let lx = (window[i].0 as f64).ln();
        let prev = if i == 0 { lx } else { (window[i - 1].0 as f64).ln() };
        let next = if i + 1 == window.len() { lx } else { (window[i + 1].0 as f64).ln() };
        let w = (next - prev) / 2.0;
        wsum += w;
        dsum += w * (window[i].1 / target - 1.0).norm();
    }
    let log_avg = dsum / wsum;
    assert!(
        log_avg < 0.15,
        "[FAIL] criterion 7: log-averaged deviation {log_avg:.4} >= 0.15"
    );

    let samples = euler::log_identity_check(&chi, primes_1e8(), &cps).unwrap();
    let worst = samples.iter().map(|s| s.residual()).fold(0.0, f64::max);
    assert!(
        worst < 1e-10,
        "[FAIL] criterion 7: k-decomposition residual {worst:.2e} >= 1e-10"
    );
    pass(
        7,
        &format!("log-avg deviation {log_avg:.4} on [1e6,1e8]; identity residual {worst:.1e}"),
    );
}

/// Naive dense O(N^2) tau oracle (also used by the unit tests): E(x) by
/// sequential factor multiplication, then E^24 by repeated truncated dense
/// multiplication, exactly in i128.
fn naive_tau_oracle(n: usize) -> Vec<i128> {
    let mut e = vec![0i128; n];
    e[0] = 1;
    for m in 1..n {
        for i in (m..n).rev() {
            e[i] -= e[i - m];
        }
    }
    let mut acc = e.clone();
    for _ in 0..23 {
        let mut next = vec![0i128; n];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in e.iter().take(n - i).enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Criterion 8: the tau engine. Exact agreement with the naive oracle at
/// 2000; tau = sigma_11 mod 691 for n <= 1e5; Deligne for p <= 1e5; NTT
/// equals schoolbook on 100 random length-512 instances; the bias-series
/// slope at 1e6 lands in [0.2, 0.8] and the series matches its golden
/// file.
#[test]
fn acceptance_08_tau_engine() {
    let _g = gate();
    let tau = tau_1e6();

    let small = TauTable::build(2000).unwrap();
    assert_eq!(
        small.values(),
        naive_tau_oracle(2000).as_slice(),
        "[FAIL] criterion 8: tau_table(2000) differs from the naive oracle"
    );

    // sigma_11 mod 691 by divisor sieve
    let n = 100_000usize;
    let mut sigma = vec![0u64; n + 1];
    for d in 1..=n {
        let dp = drh_core::util::pow_mod(d as u64 % 691, 11, 691);
        for m in (d..=n).step_by(d) {
            sigma[m] = (sigma[m] + dp) % 691;
        }
    }
    for k in 1..=n {
        assert_eq!(
            tau.tau(k as u64).rem_euclid(691) as u64,
            sigma[k],
            "[FAIL] criterion 8: tau != sigma_11 mod 691 at n = {k}"
        );
    }

    let small_primes = PrimeTable::sieve(100_000).unwrap();
    for &p in small_primes.primes() {
        assert!(tau.deligne_ok(p), "[FAIL] criterion 8: Deligne bound fails at p = {p}");
    }

    // NTT vs schoolbook on 100 random pairs
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(512);
    for case in 0..100 {
        let a: Vec<i128> = (0..512).map(|_| rng.gen_range(-1_000_000i64..=1_000_000) as i128).collect();
        let b: Vec<i128> = (0..512).map(|_| rng.gen_range(-1_000_000i64..=1_000_000) as i128).collect();
        let out_len = 1023;
        let mut oracle = vec![0i128; out_len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                oracle[i + j] += x * y;
            }
        }
        assert_eq!(
            ntt_convolve(&a, &b, out_len).unwrap(),
            oracle,
            "[FAIL] criterion 8: NTT != schoolbook on case {case}"
        );
    }

    // bias slope against the golden series
    let cps = geometric_checkpoints(1000, 1_000_000, 64);
    let mut series = tau.bias_series(primes_1e8(), &cps).unwrap();
    let fit = series.fit_loglog().unwrap();
    assert!(
        (0.2..=0.8).contains(&fit.slope),
        "[FAIL] criterion 8: tau bias slope {:.4} outside [0.2, 0.8]",
        fit.slope
    );
    let golden = include_str!("golden/tau_bias_1e6.csv");
    let mut rendered = String::from("x,value\n");
    for (&x, &v) in series.checkpoints.iter().zip(&series.values) {
        rendered.push_str(&format!("{x},{v}\n"));
    }
    assert_eq!(
        rendered, golden,
        "[FAIL] criterion 8: tau bias series deviates from the golden file"
    );
    pass(8, &format!("oracle/congruence/Deligne/NTT exact; bias slope {:.3}", fit.slope));
}

/// Criterion 9: the elliptic engine. a_p equals the O(p^2) brute-force
/// count below 200 on 10 random curves; Hasse bound to 1e5 on the catalog
/// curves; the two product forms agree to 1e-12; and the Goldfeld
/// rank-slope ordering holds at 1e5 between the rank-0 and rank-1
/// reference curves.
#[test]
fn acceptance_09_elliptic_engine() {
    let _g = gate();
    // brute-force oracle below 200
    let brute_ap = |curve: &EllipticCurve, p: u64| -> i64 {
        let a = curve.a.rem_euclid(p as i64) as u64;
        let b = curve.b.rem_euclid(p as i64) as u64;
        let bad = curve.discriminant().rem_euclid(p as i128) == 0;
        let mut affine = 0i64;
        let mut singular = 0i64;
        for x in 0..p {
            for y in 0..p {
                let lhs = (y * y) % p;
                let rhs = (((x * x % p) * x % p) + a * x % p + b) % p;
                if lhs == rhs {
                    affine += 1;
                    if (2 * y) % p == 0 && (3 * (x * x % p) + a) % p == 0 {
                        singular += 1;
                    }
                }
            }
        }
        if bad {
            p as i64 - (affine - singular + 1)
        } else {
            p as i64 + 1 - (affine + 1)
        }
    };
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let small = PrimeTable::sieve(200).unwrap();
    let mut tested = 0;
    while tested < 10 {
        let a = rng.gen_range(-30i64..=30);
        let b = rng.gen_range(-30i64..=30);
        let Ok(curve) = EllipticCurve::new(a, b) else { continue };
        tested += 1;
        for &p in small.primes() {
            assert_eq!(
                curve.ap(p),
                brute_ap(&curve, p),
                "[FAIL] criterion 9: a_p mismatch for ({a},{b}) at p={p}"
            );
        }
    }

    let primes = PrimeTable::sieve(100_000).unwrap();
    let rank0 = EllipticCurve::new(-1, 0).unwrap();
    let rank1 = EllipticCurve::new(-16, 16).unwrap();
    for curve in [&rank0, &rank1] {
        let table = curve.ap_table(&primes);
        for (i, &p) in primes.primes().iter().enumerate() {
            if curve.discriminant().rem_euclid(p as i128) != 0 {
                assert!(
                    (table.values[i] as i64).pow(2) <= 4 * p as i64,
                    "[FAIL] criterion 9: Hasse bound at p={p}"
                );
            }
        }
    }

    let cps = geometric_checkpoints(1000, 100_000, 64);
    let (t0, split0) = bsd_product_trace(&rank0, &primes, &cps).unwrap();
    let (t1, split1) = bsd_product_trace(&rank1, &primes, &cps).unwrap();
    for (t, split) in [(&t0, &split0), (&t1, &split1)] {
        for (lv, sv) in t.log_values.iter().zip(split.iter()) {
            assert!(
                (lv.re - sv).abs() < 1e-12,
                "[FAIL] criterion 9: product forms disagree: {} vs {sv}",
                lv.re
            );
        }
    }
    let (r0, _, _) = rank_fit(&t0).unwrap();
    let (r1, _, _) = rank_fit(&t1).unwrap();
    assert!(
        r0 < r1,
        "[FAIL] criterion 9: rank-slope ordering violated: {r0:.3} !< {r1:.3}"
    );
    pass(9, &format!("oracle exact below 200; r_hat ordering {r0:.3} < {r1:.3}"));
}

/// Criterion 10: the classical mod-4 race density is exactly 1.0 up to
/// 2e4, stays above 0.9 at 1e6, and the sqrt-weighted race slope at 1e8
/// lands in [0.25, 0.75] around the predicted 1/2.
#[test]
fn acceptance_10_chebyshev_race() {
    let _g = gate();
    let table = primes_1e8();
    let d_2e4 = race::classical_race_density(table, 20_000).unwrap();
    assert_eq!(
        d_2e4, 1.0,
        "[FAIL] criterion 10: density up to 2e4 is {d_2e4}, expected exactly 1.0"
    );
    let d_1e6 = race::classical_race_density(table, 1_000_000).unwrap();
    assert!(
        d_1e6 > 0.9,
        "[FAIL] criterion 10: density up to 1e6 is {d_1e6:.4} <= 0.9"
    );
    let cps = geometric_checkpoints(1000, 100_000_000, 64);
    let mut series = race::race_series(4, 3, 1, 0.5, table, &cps).unwrap();
    let fit = series.fit_loglog().unwrap();
    assert!(
        (0.25..=0.75).contains(&fit.slope),
        "[FAIL] criterion 10: race slope {:.4} outside [0.25, 0.75]",
        fit.slope
    );
    pass(
        10,
        &format!(
            "density(2e4) = 1.0, density(1e6) = {d_1e6:.4}, slope {:.3} (predicted {:.2})",
            fit.slope,
            race::predicted_race_slope(4)
        ),
    );
}

/// Euler gamma pin: the normalization constant every target uses.
#[test]
fn euler_gamma_constant_is_pinned() {
    assert_eq!(EULER_GAMMA, 0.5772156649015329);
}

/// Regenerates the golden tau bias file. Run explicitly:
/// `cargo test -p drh-core --test acceptance regenerate -- --ignored --nocapture`
#[test]
#[ignore]
fn regenerate_golden_tau_bias() {
    let tau = TauTable::build(1_000_000).unwrap();
    let primes = PrimeTable::sieve(1_000_000).unwrap();
    let cps = geometric_checkpoints(1000, 1_000_000, 64);
    let series = tau.bias_series(&primes, &cps).unwrap();
    let mut rendered = String::from("x,value\n");
    for (&x, &v) in series.checkpoints.iter().zip(&series.values) {
        rendered.push_str(&format!("{x},{v}\n"));
    }
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/tau_bias_1e6.csv");
    std::fs::write(path, rendered).unwrap();
    println!("golden file written to {path}");
}
