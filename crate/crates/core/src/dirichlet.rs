//! Exact Dirichlet character arithmetic mod q.
//!
//! Characters are stored as discrete-log exponent tables against fixed
//! generators of (Z/qZ)^*: odd prime-power components use the smallest
//! primitive root, the 2^e component (e >= 3) uses the pair (-1, 5). Values
//! are exact roots of unity (k, ord); complex numbers only appear when a sum
//! is accumulated, so multiplicativity holds exactly in integer arithmetic.

use num_complex::Complex64;

use crate::error::{DrhError, Result};
use crate::util::{mul_mod, pow_mod};

/// A character value e^{2 pi i k / ord}, kept in exact exponent form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterValue {
    pub numerator: u64,
    pub denominator: u64,
}

impl CharacterValue {
    pub fn as_complex(&self) -> Complex64 {
        let angle = 2.0 * std::f64::consts::PI * (self.numerator as f64) / (self.denominator as f64);
        // exact values on the axes keep tests and orthogonality sums clean
        match (4 * self.numerator) % (4 * self.denominator) {
            x if x == 0 => Complex64::new(1.0, 0.0),
            x if x == self.denominator => Complex64::new(0.0, 1.0),
            x if x == 2 * self.denominator => Complex64::new(-1.0, 0.0),
            x if x == 3 * self.denominator => Complex64::new(0.0, -1.0),
            _ => Complex64::from_polar(1.0, angle),
        }
    }
}

/// One CRT component of (Z/qZ)^* with its fixed generators.
#[derive(Debug, Clone)]
struct Component {
    modulus: u64,
    /// (generator, order) pairs; empty for the trivial component.
    generators: Vec<(u64, u64)>,
    /// residue mod `modulus` -> exponent vector against `generators`
    dlog: Vec<Option<Vec<u32>>>,
}

/// The structure of (Z/qZ)^*: CRT components in ascending prime order and
/// the flattened generator list used for canonical character enumeration.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    q: u64,
    components: Vec<Component>,
    /// flattened generator orders d_1, ..., d_k
    pub gen_orders: Vec<u64>,
    /// exponent of the group (lcm of generator orders); 1 for q <= 2
    pub exponent: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b).max(1);
    }
    a / gcd(a, b) * b
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Smallest primitive root modulo an odd prime power p^e.
fn smallest_primitive_root(m: u64, phi: u64) -> u64 {
    let factors = prime_factors(phi);
    'cand: for g in 2..m {
        if gcd(g, m) != 1 {
            continue;
        }
        for &f in &factors {
            if pow_mod(g, phi / f, m) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("odd prime powers always have a primitive root");
}

impl UnitGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(DrhError::Argument("modulus q must be >= 1".into()));
        }
        let mut components = Vec::new();
        for (p, e) in factorize(q) {
            let m = p.pow(e);
            let mut comp = Component {
                modulus: m,
                generators: Vec::new(),
                dlog: vec![None; m as usize],
            };
            if p == 2 {
                match e {
                    1 => {
                        comp.dlog[1] = Some(vec![]);
                    }
                    2 => {
                        comp.generators.push((3, 2));
                        comp.dlog[1] = Some(vec![0]);
                        comp.dlog[3] = Some(vec![1]);
                    }
                    _ => {
                        let half = m / 4; // order of 5 mod 2^e
                        comp.generators.push((m - 1, 2));
                        comp.generators.push((5, half));
                        for s in 0..2u64 {
                            let mut x = if s == 0 { 1 } else { m - 1 };
                            for j in 0..half {
                                comp.dlog[x as usize] = Some(vec![s as u32, j as u32]);
                                x = mul_mod(x, 5, m);
                            }
                        }
                    }
                }
            } else {
                let phi = m / p * (p - 1);
                let g = smallest_primitive_root(m, phi);
                comp.generators.push((g, phi));
                let mut x = 1u64;
                for j in 0..phi {
                    comp.dlog[x as usize] = Some(vec![j as u32]);
                    x = mul_mod(x, g, m);
                }
            }
            components.push(comp);
        }
        let gen_orders: Vec<u64> = components
            .iter()
            .flat_map(|c| c.generators.iter().map(|&(_, d)| d))
            .collect();
        let exponent = gen_orders.iter().fold(1u64, |acc, &d| lcm(acc, d));
        Ok(Self { q, components, gen_orders, exponent })
    }

    pub fn phi(&self) -> u64 {
        self.gen_orders.iter().product()
    }

    /// Discrete log of n against the flattened generators, or None when
    /// gcd(n, q) > 1.
    pub fn dlog(&self, n: u64) -> Option<Vec<u32>> {
        let n = n % self.q.max(1);
        let mut out = Vec::with_capacity(self.gen_orders.len());
        for c in &self.components {
            let r = (n % c.modulus) as usize;
            out.extend(c.dlog[r].as_ref()?.iter().copied());
        }
        Some(out)
    }
}

/// A Dirichlet character mod q in exact exponent form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    order: u64,
    conductor: u64,
    parity_kappa: u8,
    /// exponent vector c_i against the group generators (canonical identity)
    exponent_vector: Vec<u64>,
    /// residue n -> exponent k with chi(n) = e^{2 pi i k / order}; None when
    /// gcd(n, q) > 1
    exponents: Vec<Option<u32>>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Index in the canonical enumeration (lexicographic on exponent
    /// vectors).
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    /// kappa = (1 + chi(-1)) / 2.
    pub fn parity_kappa(&self) -> u8 {
        self.parity_kappa
    }

    /// chi(-1) as +1 / -1.
    pub fn chi_minus_one(&self) -> i8 {
        if self.parity_kappa == 1 {
            1
        } else {
            -1
        }
    }

    /// Exponent k of chi(n) = e^{2 pi i k / order}; None when gcd(n, q) > 1.
    #[inline]
    pub fn exponent(&self, n: u64) -> Option<u32> {
        self.exponents[(n % self.modulus) as usize]
    }

    pub fn value(&self, n: u64) -> Option<CharacterValue> {
        self.exponent(n).map(|k| CharacterValue {
            numerator: k as u64,
            denominator: self.order,
        })
    }

    /// chi(n) as a complex number (0 when gcd(n, q) > 1).
    #[inline]
    pub fn eval(&self, n: u64) -> Complex64 {
        match self.value(n) {
            Some(v) => v.as_complex(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// chi(n) for real characters, as an integer in {-1, 0, 1}.
    pub fn eval_real(&self, n: u64) -> i8 {
        debug_assert!(self.order <= 2);
        match self.exponent(n) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        }
    }

    /// The nu exponent of the sqrt(2) factor at the center: 1 when chi^2 is
    /// trivial, else 0. Degree 1, so sym^2 chi = chi^2 and the exterior
    /// square is empty.
    pub fn nu_exponent(&self) -> Result<u32> {
        if self.is_trivial() {
            return Err(DrhError::Argument(
                "nu exponent is defined for nontrivial characters only".into(),
            ));
        }
        Ok(if self.order == 2 { 1 } else { 0 })
    }

    /// L^(m)(s, chi) for a primitive character, to ~1e-10 relative accuracy.
    /// See [`crate::hurwitz`] for the evaluation strategy.
    pub fn l_value(&self, s: Complex64, deriv_order: u32) -> Result<Complex64> {
        crate::hurwitz::l_value(self, s, deriv_order)
    }
}

/// Memory guard: enumerating all characters stores q * phi(q) exponents.
const MAX_TABLE_ENTRIES: u64 = 1 << 24;

/// All phi(q) characters mod q in canonical order: lexicographic on the
/// exponent vector against the fixed generators (trivial character first).
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = UnitGroup::new(q)?;
    let phi = group.phi();
    if q * phi > MAX_TABLE_ENTRIES {
        return Err(DrhError::Capacity(format!(
            "character table for q={q} needs {} entries (cap {})",
            q * phi,
            MAX_TABLE_ENTRIES
        )));
    }
    let dlogs: Vec<Option<Vec<u32>>> = (0..q).map(|n| group.dlog(n)).collect();
    let mut out = Vec::with_capacity(phi as usize);
    let k = group.gen_orders.len();
    let mut vector = vec![0u64; k];
    for index in 0..phi {
        out.push(build_character(&group, &dlogs, index as usize, &vector));
        // odometer increment, last coordinate fastest => lexicographic order
        for i in (0..k).rev() {
            vector[i] += 1;
            if vector[i] < group.gen_orders[i] {
                break;
            }
            vector[i] = 0;
        }
    }
    Ok(out)
}

/// Single character by canonical index, without enumerating the whole dual
/// group.
pub fn character(q: u64, index: usize) -> Result<DirichletCharacter> {
    let group = UnitGroup::new(q)?;
    let phi = group.phi();
    if index as u64 >= phi {
        return Err(DrhError::Argument(format!(
            "character index {index} out of range (phi({q}) = {phi})"
        )));
    }
    let dlogs: Vec<Option<Vec<u32>>> = (0..q).map(|n| group.dlog(n)).collect();
    let mut vector = vec![0u64; group.gen_orders.len()];
    let mut rem = index as u64;
    for i in (0..group.gen_orders.len()).rev() {
        vector[i] = rem % group.gen_orders[i];
        rem /= group.gen_orders[i];
    }
    Ok(build_character(&group, &dlogs, index, &vector))
}

fn build_character(
    group: &UnitGroup,
    dlogs: &[Option<Vec<u32>>],
    index: usize,
    vector: &[u64],
) -> DirichletCharacter {
    let q = group.q;
    let big = group.exponent;
    // order = lcm_i d_i / gcd(d_i, c_i)
    let order = group
        .gen_orders
        .iter()
        .zip(vector)
        .fold(1u64, |acc, (&d, &c)| lcm(acc, d / gcd(d, c)));
    let exponents: Vec<Option<u32>> = (0..q)
        .map(|n| {
            dlogs[n as usize].as_ref().map(|xs| {
                let mut k = 0u64;
                for ((&c, &d), &x) in vector.iter().zip(&group.gen_orders).zip(xs) {
                    // contribution c * x / d in units of 1/big
                    k = (k + mul_mod(c % d, x as u64 % d, big * d) * (big / d)) % big;
                }
                // rescale from 1/big to 1/order units (exact by chi^order = 1)
                debug_assert_eq!(k * order % big, 0);
                (k * order / big % order) as u32
            })
        })
        .collect();
    let parity_kappa = if q <= 2 {
        1
    } else {
        match exponents[(q - 1) as usize] {
            Some(0) => 1,
            _ => 0,
        }
    };
    let conductor = compute_conductor(q, &exponents);
    DirichletCharacter {
        modulus: q,
        index,
        order,
        conductor,
        parity_kappa,
        exponent_vector: vector.to_vec(),
        exponents,
    }
}

/// Smallest f | q with chi trivial on the kernel of (Z/q)^* -> (Z/f)^*.
fn compute_conductor(q: u64, exponents: &[Option<u32>]) -> u64 {
    if q == 1 {
        return 1;
    }
    let mut divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
    divisors.sort_unstable();
    'outer: for &f in &divisors {
        let mut n = 1 + f;
        while n < q {
            if let Some(k) = exponents[n as usize] {
                if k != 0 {
                    continue 'outer;
                }
            }
            n += f;
        }
        return f;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn q4_has_two_characters_and_chi_minus_four() {
        let chars = enumerate_characters(4).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        let chi = &chars[1];
        assert_eq!(chi.eval_real(3), -1);
        assert_eq!(chi.eval_real(1), 1);
        assert_eq!(chi.eval(2), Complex64::new(0.0, 0.0));
        assert!(chi.is_primitive());
        assert_eq!(chi.conductor(), 4);
        assert_eq!(chi.parity_kappa(), 0); // chi(-1) = -1
    }

    #[test]
    fn q1_has_single_trivial_character() {
        let chars = enumerate_characters(1).unwrap();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_trivial());
        for n in 1..20 {
            assert_relative_eq!(chars[0].eval(n).re, 1.0);
        }
    }

    /// Brute-force oracle: all homomorphisms from the cyclic group
    /// (Z/5Z)^* = <2> to C^* are determined by the image of 2.
    #[test]
    fn q5_orders_match_homomorphism_enumeration() {
        let chars = enumerate_characters(5).unwrap();
        assert_eq!(chars.len(), 4);
        let mut orders: Vec<u64> = chars.iter().map(|c| c.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        // oracle: chi_j(2) = i^j, and every chi is one of them
        for j in 0..4u32 {
            let target = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * j as f64);
            assert!(
                chars.iter().any(|c| (c.eval(2) - target).norm() < 1e-14),
                "missing character with chi(2) = i^{j}"
            );
        }
    }

    #[test]
    fn nu_exponent_examples() {
        let chi4 = &enumerate_characters(4).unwrap()[1];
        assert_eq!(chi4.nu_exponent().unwrap(), 1);

        let chars5 = enumerate_characters(5).unwrap();
        let order4 = chars5.iter().find(|c| c.order() == 4).unwrap();
        assert_eq!(order4.nu_exponent().unwrap(), 0);

        // quadratic characters mod 8: square the exponent table and check
        // triviality directly
        let chars8 = enumerate_characters(8).unwrap();
        for chi in chars8.iter().filter(|c| c.order() == 2) {
            assert_eq!(chi.nu_exponent().unwrap(), 1);
            for n in (1..8).filter(|n| n % 2 == 1) {
                let k = chi.exponent(n).unwrap();
                assert_eq!((2 * k) % 2, 0);
            }
        }

        let trivial = &enumerate_characters(4).unwrap()[0];
        assert!(trivial.nu_exponent().is_err());
    }

    #[test]
    fn orthogonality_over_small_moduli() {
        for q in 1..=100u64 {
            let chars = enumerate_characters(q).unwrap();
            let phi = chars.len() as f64;
            let coprime: Vec<u64> = (1..=q).filter(|&n| gcd(n, q) == 1).collect();
            // sample a few (a, b) pairs rather than the full phi^2 grid
            for (i, &a) in coprime.iter().enumerate().step_by(3) {
                let b = coprime[(i * 7 + 1) % coprime.len()];
                let mut acc = Complex64::new(0.0, 0.0);
                for chi in &chars {
                    acc += chi.eval(a) * chi.eval(b).conj();
                }
                acc /= phi;
                let expect = if a % q == b % q { 1.0 } else { 0.0 };
                assert!(
                    (acc - expect).norm() < 1e-12,
                    "orthogonality failed q={q} a={a} b={b}: {acc}"
                );
            }
        }
    }

    #[test]
    fn multiplicativity_is_exact_in_exponent_arithmetic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &q in &[4u64, 5, 8, 12, 35, 72, 100] {
            let chars = enumerate_characters(q).unwrap();
            for _ in 0..(10_000 / chars.len().max(1)) {
                let m = rng.gen_range(1..10 * q);
                let n = rng.gen_range(1..10 * q);
                for chi in &chars {
                    let lhs = chi.exponent(m * n % q);
                    let rhs = match (chi.exponent(m), chi.exponent(n)) {
                        (Some(a), Some(b)) => Some(((a as u64 + b as u64) % chi.order()) as u32),
                        _ => None,
                    };
                    assert_eq!(lhs, rhs, "q={q} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn conductor_of_induced_character() {
        // mod 12, the character induced by chi_{-4} has conductor 4
        let chars = enumerate_characters(12).unwrap();
        let mut conductors: Vec<u64> = chars.iter().map(|c| c.conductor()).collect();
        conductors.sort_unstable();
        assert_eq!(conductors, vec![1, 3, 4, 12]);
    }

    #[test]
    fn character_by_index_matches_enumeration() {
        for q in [4u64, 5, 8, 60] {
            let all = enumerate_characters(q).unwrap();
            for (i, chi) in all.iter().enumerate() {
                let single = character(q, i).unwrap();
                assert_eq!(chi, &single);
            }
        }
        assert!(character(4, 2).is_err());
    }
}
