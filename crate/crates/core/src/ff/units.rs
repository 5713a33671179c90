//! The residue ring F_q[T]/A, its unit group, and the dual group of
//! characters.
//!
//! Ring elements are indexed by the base-q code of their coefficient vector
//! (degree < deg A). The unit group decomposes by CRT over the prime-power
//! factors of A; each factor splits canonically as (residue field)^* x
//! (1-units), the first part cyclic of order q^e - 1, the second a p-group
//! handled by a brute-force basis extraction. Characters are stored as
//! exact exponent tables indexed by ring code.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::poly::FqPoly;
use crate::error::{DrhError, Result};

/// Cap on the unit-group order for brute-force structure work.
const MAX_UNIT_GROUP: u64 = 1 << 20;

/// F_q[T]/A with table-based arithmetic; element = base-q code < q^{deg A}.
#[derive(Debug)]
pub struct ResidueRing {
    pub q: u64,
    pub modulus: FqPoly,
    pub deg: u32,
    pub size: u64,
    /// index of x*T mod A, per element index
    mul_t: Vec<u32>,
}

impl ResidueRing {
    pub fn new(modulus: &FqPoly) -> Result<Self> {
        let q = modulus.q();
        let deg = modulus
            .degree()
            .ok_or_else(|| DrhError::Argument("zero modulus".into()))?;
        if deg == 0 {
            return Err(DrhError::Argument("constant modulus".into()));
        }
        if !modulus.is_monic() {
            return Err(DrhError::Argument("modulus must be monic".into()));
        }
        let bits = deg as f64 * (q as f64).log2();
        if bits > 24.0 {
            return Err(DrhError::Capacity(format!(
                "residue ring q^deg = {q}^{deg} too large"
            )));
        }
        let size = q.pow(deg);
        // x * T: shift digits up; on overflow into T^deg subtract lead * A
        let a_low: Vec<u64> = {
            let mut v = modulus.coeffs().to_vec();
            v.pop(); // drop the leading 1
            v.resize(deg as usize, 0);
            v
        };
        let mut mul_t = vec![0u32; size as usize];
        let mut digits = vec![0u64; deg as usize];
        for slot in mul_t.iter_mut() {
            // digits encode the current index; x*T shifts them up and folds
            // the overflowing lead back via T^deg = -a_low
            let lead = digits[deg as usize - 1];
            let mut out = 0u64;
            for i in (0..deg as usize).rev() {
                let below = if i == 0 { 0 } else { digits[i - 1] };
                let c = (below + (q - a_low[i] * lead % q) % q) % q;
                out = out * q + c;
            }
            *slot = out as u32;
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        Ok(Self { q, modulus: modulus.clone(), deg, size, mul_t })
    }

    #[inline]
    pub fn mul_by_t(&self, idx: u32) -> u32 {
        self.mul_t[idx as usize]
    }

    /// (x*T + c) for a constant digit c: digit-0 addition after the shift.
    #[inline(always)]
    pub fn horner_step(&self, idx: u32, c: u64) -> u32 {
        let shifted = self.mul_t[idx as usize] as u64;
        let d0 = shifted % self.q;
        (shifted - d0 + (d0 + c) % self.q) as u32
    }

    /// Fused table for hot Horner loops: entry [idx * q + c] = x*T + c.
    pub fn horner_table(&self) -> Vec<u32> {
        let mut t = vec![0u32; (self.size * self.q) as usize];
        for idx in 0..self.size as u32 {
            for c in 0..self.q {
                t[(idx as u64 * self.q + c) as usize] = self.horner_step(idx, c);
            }
        }
        t
    }

    /// Reduce a monic polynomial given by (code, degree) to its ring index.
    pub fn reduce_monic_code(&self, code: u64, degree: u32) -> u32 {
        let q = self.q;
        let mut digits = [0u64; 64];
        let mut c = code;
        for d in digits.iter_mut().take(degree as usize) {
            *d = c % q;
            c /= q;
        }
        self.reduce_monic_digits(&digits[..degree as usize])
    }

    /// Reduce a monic polynomial given by its low coefficient digits
    /// (little-endian, leading 1 implicit).
    #[inline]
    pub fn reduce_monic_digits(&self, digits: &[u64]) -> u32 {
        let mut idx = self.reduce_constant(1);
        for &d in digits.iter().rev() {
            idx = self.horner_step(idx, d);
        }
        idx
    }

    pub fn reduce_constant(&self, c: u64) -> u32 {
        (c % self.q) as u32
    }

    pub fn reduce_poly(&self, p: &FqPoly) -> u32 {
        let r = p.rem(&self.modulus);
        let mut idx = 0u64;
        for &c in r.coeffs().iter().rev() {
            idx = idx * self.q + c;
        }
        idx as u32
    }

    pub fn to_poly(&self, idx: u32) -> FqPoly {
        let mut coeffs = Vec::with_capacity(self.deg as usize);
        let mut c = idx as u64;
        for _ in 0..self.deg {
            coeffs.push(c % self.q);
            c /= self.q;
        }
        FqPoly::new(self.q, coeffs).expect("q is prime")
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        // b-digit Horner: a * b = sum_i b_i (a T^i)
        let q = self.q;
        let mut digits = Vec::with_capacity(self.deg as usize);
        let mut c = b as u64;
        for _ in 0..self.deg {
            digits.push(c % q);
            c /= q;
        }
        let mut acc = 0u64;
        for &d in digits.iter().rev() {
            // acc = acc * T + d * a
            let shifted = self.mul_t[acc as usize] as u64;
            acc = self.add_scaled(shifted, a, d);
        }
        acc as u32
    }

    fn add_scaled(&self, x: u64, a: u32, scale: u64) -> u64 {
        if scale == 0 {
            return x;
        }
        let q = self.q;
        let mut out = 0u64;
        let mut px = x;
        let mut pa = a as u64;
        let mut mult = 1u64;
        for _ in 0..self.deg {
            let dx = px % q;
            let da = pa % q;
            out += (dx + da * scale) % q * mult;
            px /= q;
            pa /= q;
            mult *= q;
        }
        out
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, idx: u32) -> bool {
        !self.to_poly(idx).is_zero() && self.to_poly(idx).gcd(&self.modulus).degree() == Some(0)
    }
}

/// Monic irreducible factors of A with multiplicities, by trial division in
/// ascending (degree, code) order. Divisors found this way are irreducible
/// because all lower-degree factors were already removed.
pub fn factor_poly(a: &FqPoly) -> Result<Vec<(FqPoly, u32)>> {
    let q = a.q();
    let mut rest = a.make_monic();
    let mut out: Vec<(FqPoly, u32)> = Vec::new();
    let mut d = 1u32;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        if d * 2 > deg {
            out.push((rest.clone(), 1));
            break;
        }
        for code in 0..q.pow(d) {
            let cand = FqPoly::from_code(q, code, d);
            let mut mult = 0u32;
            while rest.rem(&cand).is_zero() {
                rest = rest.divmod(&cand).0;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
        }
        d += 1;
    }
    out.sort_by_key(|(p, _)| (p.degree().unwrap(), p.code()));
    Ok(out)
}

/// One CRT component (F_q[T]/P^m)^* with generators and dlog tables.
struct FfComponent {
    ring: ResidueRing,
    /// (generator index, order); field part first, then 1-unit basis
    generators: Vec<(u32, u64)>,
    /// element index -> exponent vector against `generators`
    dlog: HashMap<u32, Vec<u64>>,
}

/// The unit group (F_q[T]/A)^* with its CRT structure.
pub struct FfUnitGroup {
    pub ring: Arc<ResidueRing>,
    components: Vec<FfComponent>,
    pub gen_orders: Vec<u64>,
    pub order: u64,
    pub exponent: u64,
}

fn gcd64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b).max(1);
    }
    a / gcd64(a, b) * b
}

fn prime_factors64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FfUnitGroup {
    pub fn new(modulus: &FqPoly) -> Result<Self> {
        let ring = Arc::new(ResidueRing::new(modulus)?);
        let q = modulus.q();
        let factors = factor_poly(modulus)?;
        let mut components = Vec::new();
        let mut order = 1u64;
        for (p, m) in &factors {
            let pm = (0..*m).fold(FqPoly::one(q), |acc, _| acc.mul(p));
            let comp = build_component(&pm, p, *m)?;
            let u = comp.generators.iter().map(|&(_, d)| d).product::<u64>();
            order = order
                .checked_mul(u)
                .filter(|&o| o <= MAX_UNIT_GROUP)
                .ok_or_else(|| {
                    DrhError::Capacity(format!("unit group of {modulus} exceeds budget"))
                })?;
            components.push(comp);
        }
        let gen_orders: Vec<u64> = components
            .iter()
            .flat_map(|c| c.generators.iter().map(|&(_, d)| d))
            .collect();
        let exponent = gen_orders.iter().fold(1u64, |acc, &d| lcm64(acc, d));
        Ok(Self { ring, components, gen_orders, order, exponent })
    }

    /// Exponent vector of a unit against the flattened generators; None for
    /// non-units.
    pub fn dlog(&self, idx: u32) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.gen_orders.len());
        let poly = self.ring.to_poly(idx);
        for comp in &self.components {
            let local = comp.ring.reduce_poly(&poly);
            out.extend(comp.dlog.get(&local)?.iter().copied());
        }
        Some(out)
    }
}

/// Build one prime-power component (F_q[T]/P^m)^*.
fn build_component(pm: &FqPoly, p: &FqPoly, m: u32) -> Result<FfComponent> {
    let ring = ResidueRing::new(pm)?;
    let q = pm.q();
    let e = p.degree().unwrap();
    let field_order = q.pow(e) - 1;
    let kernel_order = q.pow(e * (m - 1));

    // residue-field dlog: find the smallest-index generator of
    // (F_q[T]/P)^* and tabulate its powers
    let field_ring = ResidueRing::new(p)?;
    let factors = prime_factors64(field_order);
    let field_gen = (1..field_ring.size as u32)
        .find(|&x| factors.iter().all(|&f| field_ring.pow(x, field_order / f) != 1))
        .ok_or_else(|| DrhError::Integrity("residue field has no generator".into()))?;

    // lift: g0 = lift(field_gen)^{kernel_order} has exact order q^e - 1 and
    // still generates the field part
    let lifted = ring.reduce_poly(&field_ring.to_poly(field_gen));
    let g0 = ring.pow(lifted, kernel_order);

    let mut field_dlog: HashMap<u32, u64> = HashMap::new();
    {
        let mut x = field_ring.reduce_constant(1);
        let gproj = field_ring.reduce_poly(&ring.to_poly(g0));
        for k in 0..field_order {
            field_dlog.insert(x, k);
            x = field_ring.mul(x, gproj);
        }
    }

    // 1-units kernel: elements = 1 (mod P), a p-group of order q^{e(m-1)}
    let kernel: Vec<u32> = if m == 1 {
        vec![1]
    } else {
        (0..ring.size as u32)
            .filter(|&idx| {
                let poly = ring.to_poly(idx);
                let r = poly.rem(p);
                r.degree() == Some(0) && r.coeffs()[0] == 1
            })
            .collect()
    };
    debug_assert_eq!(kernel.len() as u64, kernel_order);
    let (kernel_basis, kernel_orders, kernel_dlog) = p_group_basis(&ring, &kernel, q)?;

    let mut generators = vec![(g0, field_order)];
    generators.extend(kernel_basis.iter().zip(&kernel_orders).map(|(&g, &d)| (g, d)));

    // joint dlog for every unit of the component
    let mut dlog: HashMap<u32, Vec<u64>> = HashMap::new();
    let g0_inv = ring.pow(g0, field_order - 1);
    for idx in 0..ring.size as u32 {
        let poly = ring.to_poly(idx);
        if poly.gcd(p).degree() != Some(0) {
            continue;
        }
        let proj = field_ring.reduce_poly(&poly);
        let i = *field_dlog.get(&proj).expect("all field units are powers of the generator");
        // strip the field part; the remainder is a 1-unit
        let one_unit = ring.mul(idx, ring.pow(g0_inv, i));
        let mut vec = vec![i];
        if m > 1 {
            let kv = kernel_dlog
                .get(&one_unit)
                .ok_or_else(|| DrhError::Integrity("1-unit outside kernel span".into()))?;
            vec.extend(kv.iter().copied());
        } else {
            debug_assert_eq!(one_unit, 1);
        }
        dlog.insert(idx, vec);
    }
    Ok(FfComponent { ring, generators, dlog })
}

/// Basis extraction for a finite abelian p-group given as an element list.
/// Returns (basis, orders descending, dlog map over the whole group).
#[allow(clippy::type_complexity)]
fn p_group_basis(
    ring: &ResidueRing,
    elements: &[u32],
    p: u64,
) -> Result<(Vec<u32>, Vec<u64>, HashMap<u32, Vec<u64>>)> {
    let mut basis: Vec<u32> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    let mut span: HashMap<u32, Vec<u64>> = HashMap::new();
    span.insert(1, vec![]);
    while span.len() < elements.len() {
        // element with maximal order in the quotient by the current span
        let mut best: Option<(u32, u32)> = None; // (element, t) with x^{p^t} in span
        for &x in elements {
            if span.contains_key(&x) {
                continue;
            }
            let mut t = 1u32;
            let mut y = ring.pow(x, p);
            while !span.contains_key(&y) {
                y = ring.pow(y, p);
                t += 1;
            }
            if best.map_or(true, |(_, bt)| t > bt) {
                best = Some((x, t));
            }
        }
        let (x, t) = best.expect("span smaller than the group implies a missing element");
        let pt = p.pow(t);
        // find a complement generator in the coset x * span: some element
        // there has order exactly p^t with trivial intersection with span
        let span_elems: Vec<u32> = span.keys().copied().collect();
        let mut found = None;
        'coset: for &sp in &span_elems {
            let cand = ring.mul(x, sp);
            // order check
            let mut y = cand;
            let mut ord = 1u64;
            while y != 1 {
                y = ring.pow(y, p);
                ord *= p;
            }
            if ord != pt {
                continue;
            }
            // independence: proper powers of cand avoid span \ {1}
            let mut z = cand;
            for _ in 1..pt {
                if z == 1 || span.contains_key(&z) {
                    continue 'coset;
                }
                z = ring.mul(z, cand);
            }
            found = Some(cand);
            break;
        }
        let g = found.ok_or_else(|| {
            DrhError::Integrity("p-group basis extraction failed to find a complement".into())
        })?;
        // extend the span and every dlog vector
        let mut new_span = HashMap::with_capacity(span.len() * pt as usize);
        for (&elem, vec) in &span {
            let mut acc = elem;
            for j in 0..pt {
                let mut v = vec.clone();
                v.push(j);
                new_span.insert(acc, v);
                acc = ring.mul(acc, g);
            }
        }
        span = new_span;
        basis.push(g);
        orders.push(pt);
    }
    // pad existing dlog vectors (elements inserted before later basis
    // members already have full length by construction of the rebuild)
    Ok((basis, orders, span))
}

/// A character of (F_q[T]/A)^* in exact exponent form.
#[derive(Debug, Clone)]
pub struct FfCharacter {
    pub q: u64,
    pub modulus: FqPoly,
    pub index: usize,
    pub order: u64,
    /// trivial on the constants F_q^*?
    pub is_even: bool,
    ring: Arc<ResidueRing>,
    /// ring index -> exponent k with chi = e^{2 pi i k / order};
    /// u32::MAX marks non-units
    exponents: Vec<u32>,
}

const NON_UNIT: u32 = u32::MAX;

impl FfCharacter {
    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// chi squared is the trivial character?
    pub fn is_quadratic_or_trivial(&self) -> bool {
        self.order <= 2
    }

    #[inline]
    pub fn exponent_at(&self, ring_idx: u32) -> Option<u32> {
        let e = self.exponents[ring_idx as usize];
        if e == NON_UNIT {
            None
        } else {
            Some(e)
        }
    }

    pub fn eval_index(&self, ring_idx: u32) -> Complex64 {
        match self.exponent_at(ring_idx) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => unit_root(k as u64, self.order),
        }
    }

    pub fn eval_poly(&self, f: &FqPoly) -> Complex64 {
        self.eval_index(self.ring.reduce_poly(f))
    }
}

/// Exact root of unity e^{2 pi i k / n} with clean axis values.
pub fn unit_root(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    match (4 * k) % (4 * n) {
        x if x == 0 => Complex64::new(1.0, 0.0),
        x if x == n => Complex64::new(0.0, 1.0),
        x if x == 2 * n => Complex64::new(-1.0, 0.0),
        x if x == 3 * n => Complex64::new(0.0, -1.0),
        _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64),
    }
}

/// The full dual group of (F_q[T]/A)^* in canonical order: lexicographic on
/// exponent vectors against the component generators (trivial character
/// first).
pub fn character_group(modulus: &FqPoly) -> Result<Vec<FfCharacter>> {
    let group = FfUnitGroup::new(modulus)?;
    let ring = group.ring.clone();
    let q = modulus.q();
    // per-element dlogs, computed once
    let dlogs: Vec<Option<Vec<u64>>> = (0..ring.size as u32).map(|i| group.dlog(i)).collect();
    let k = group.gen_orders.len();
    let big = group.exponent;
    let mut out = Vec::with_capacity(group.order as usize);
    let mut vector = vec![0u64; k];
    for index in 0..group.order {
        let order = group
            .gen_orders
            .iter()
            .zip(&vector)
            .fold(1u64, |acc, (&d, &c)| lcm64(acc, d / gcd64(d, c)));
        let exponents: Vec<u32> = dlogs
            .iter()
            .map(|dl| match dl {
                None => NON_UNIT,
                Some(xs) => {
                    let mut acc = 0u64;
                    for ((&c, &d), &x) in vector.iter().zip(&group.gen_orders).zip(xs) {
                        // contribution c*x*(big/d) mod big, in 1/big units
                        acc = (acc + (c % d) * (x % d) % d * (big / d)) % big;
                    }
                    debug_assert_eq!(acc * order % big, 0);
                    (acc * order / big % order) as u32
                }
            })
            .collect();
        let is_even = (1..q).all(|c| exponents[ring.reduce_constant(c) as usize] == 0);
        out.push(FfCharacter {
            q,
            modulus: modulus.clone(),
            index: index as usize,
            order,
            is_even,
            ring: ring.clone(),
            exponents,
        });
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

#[cfg(test)]
mod tests {
    use super::*;

    fn tpoly(q: u64, coeffs: &[u64]) -> FqPoly {
        FqPoly::new(q, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn ring_tables_match_poly_arithmetic() {
        let a = tpoly(3, &[1, 0, 1]); // T^2 + 1
        let ring = ResidueRing::new(&a).unwrap();
        for x in 0..ring.size as u32 {
            let via_table = ring.mul_by_t(x);
            let oracle = ring.reduce_poly(&ring.to_poly(x).mul(&tpoly(3, &[0, 1])));
            assert_eq!(via_table, oracle, "x={x}");
            for y in 0..ring.size as u32 {
                let via = ring.mul(x, y);
                let oracle = ring.reduce_poly(&ring.to_poly(x).mul(&ring.to_poly(y)));
                assert_eq!(via, oracle, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn reduce_monic_code_agrees_with_poly_route() {
        let a = tpoly(5, &[2, 1, 1]);
        let ring = ResidueRing::new(&a).unwrap();
        for d in 1..=6u32 {
            for code in (0..5u64.pow(d)).step_by(7) {
                let p = FqPoly::from_code(5, code, d);
                assert_eq!(ring.reduce_monic_code(code, d), ring.reduce_poly(&p));
            }
        }
    }

    #[test]
    fn factorization_small_cases() {
        // T^2 (double root), T^2+1 irreducible over F3, T^2+T = T(T+1)
        let f = factor_poly(&tpoly(3, &[0, 0, 1])).unwrap();
        assert_eq!(f, vec![(tpoly(3, &[0, 1]), 2)]);
        let f = factor_poly(&tpoly(3, &[1, 0, 1])).unwrap();
        assert_eq!(f, vec![(tpoly(3, &[1, 0, 1]), 1)]);
        let f = factor_poly(&tpoly(3, &[0, 1, 1])).unwrap();
        assert_eq!(f, vec![(tpoly(3, &[0, 1]), 1), (tpoly(3, &[1, 1]), 1)]);
    }

    #[test]
    fn unit_group_f9() {
        // (F_3[T]/(T^2+1))^* = F_9^* is cyclic of order 8
        let g = FfUnitGroup::new(&tpoly(3, &[1, 0, 1])).unwrap();
        assert_eq!(g.order, 8);
        assert_eq!(g.gen_orders, vec![8]);
        // the canonical generator is the smallest-index element of order 8,
        // which is 1 + T (index 4)
        assert_eq!(g.dlog(4).unwrap(), vec![1]);
        assert_eq!(g.dlog(2).unwrap(), vec![4]); // constant 2 = g^4
        assert_eq!(g.dlog(3).unwrap(), vec![6]); // T = g^6
        assert_eq!(g.dlog(0), None);
    }

    #[test]
    fn unit_group_t_squared_mod3() {
        // (F_3[T]/T^2)^* has order 6 = C_2 x C_3
        let g = FfUnitGroup::new(&tpoly(3, &[0, 0, 1])).unwrap();
        assert_eq!(g.order, 6);
        let mut orders = g.gen_orders.clone();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3]);
    }

    #[test]
    fn unit_group_t_cubed_mod2() {
        // (F_2[T]/T^3)^*: 1-units mod T^3 over F_2 form C_4
        let g = FfUnitGroup::new(&tpoly(2, &[0, 0, 0, 1])).unwrap();
        assert_eq!(g.order, 4);
        assert_eq!(g.gen_orders.iter().product::<u64>(), 4);
        let mut orders = g.gen_orders.clone();
        orders.retain(|&d| d > 1);
        assert_eq!(orders, vec![4]);
    }

    #[test]
    fn unit_group_t_cubed_mod3() {
        // 1-units mod T^3 over F_3: elementary abelian C_3 x C_3
        let g = FfUnitGroup::new(&tpoly(3, &[0, 0, 0, 1])).unwrap();
        assert_eq!(g.order, 18); // 2 * 9
        let mut orders = g.gen_orders.clone();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3, 3]);
    }

    #[test]
    fn characters_f9_match_hand_computation() {
        let chars = character_group(&tpoly(3, &[1, 0, 1])).unwrap();
        assert_eq!(chars.len(), 8);
        assert!(chars[0].is_trivial());
        let mut orders: Vec<u64> = chars.iter().map(|c| c.order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 4, 4, 8, 8, 8, 8]);
        // index j: chi_j(g) = zeta_8^j with g = 1 + T (index 4)
        for (j, chi) in chars.iter().enumerate() {
            let v = chi.eval_index(4);
            let expect = unit_root(j as u64, 8);
            assert!((v - expect).norm() < 1e-14, "chi_{j}(g)");
        }
        // order-8 characters are odd (chi(2) = -1), the order-4 and
        // quadratic ones are even
        for chi in &chars {
            let on_2 = chi.eval_index(2);
            if chi.order == 8 {
                assert!((on_2.re + 1.0).abs() < 1e-14);
                assert!(!chi.is_even);
            } else {
                assert!((on_2.re - 1.0).abs() < 1e-14);
                assert!(chi.is_even);
            }
        }
    }

    #[test]
    fn characters_multiplicative_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for coeffs in [vec![1u64, 0, 1], vec![0, 0, 1], vec![2, 1, 0, 1]] {
            let a = tpoly(3, &coeffs);
            let chars = character_group(&a).unwrap();
            let ring = chars[0].ring.clone();
            for _ in 0..300 {
                let x = rng.gen_range(0..ring.size) as u32;
                let y = rng.gen_range(0..ring.size) as u32;
                let xy = ring.mul(x, y);
                for chi in &chars {
                    match (chi.exponent_at(x), chi.exponent_at(y)) {
                        (Some(a), Some(b)) => {
                            assert_eq!(
                                chi.exponent_at(xy),
                                Some(((a as u64 + b as u64) % chi.order) as u32)
                            );
                        }
                        _ => assert_eq!(chi.exponent_at(xy), None),
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_character_flagged_for_every_modulus() {
        for coeffs in [vec![1u64, 1], vec![1, 0, 1], vec![0, 0, 1], vec![2, 2, 1]] {
            let chars = character_group(&tpoly(3, &coeffs)).unwrap();
            assert!(chars[0].is_trivial());
            assert_eq!(chars.iter().filter(|c| c.is_trivial()).count(), 1);
        }
    }
}
