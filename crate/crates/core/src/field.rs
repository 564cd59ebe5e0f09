//! Exact arithmetic in GF(p^e) for odd prime powers.
//!
//! Elements are stored as the integer `Σ c_i p^i` of their polynomial-basis
//! coordinates, which also fixes the canonical total order on the field.
//! Multiplication goes through discrete-log tables and addition through a
//! Zech-logarithm table, both built once at construction.

use serde::Serialize;

use crate::arith::{is_prime, prime_divisors};
use crate::error::{Error, Result};

const MAX_Q: u64 = 1 << 20;
const NO_LOG: u32 = u32::MAX;

/// A field element, encoded as `Σ coeffs[i]·p^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[must_use]
    pub fn value(self) -> u32 {
        self.0
    }

    #[must_use]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SquareClass {
    Square,
    NonSquare,
    Zero,
}

/// Sizes of `(□−1)∩□`, `(□−1)∩⊠`, `(⊠−1)∩□`, `(⊠−1)∩⊠`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueShiftCounts {
    pub sq_sq: u32,
    pub sq_non: u32,
    pub non_sq: u32,
    pub non_non: u32,
}

impl ResidueShiftCounts {
    #[must_use]
    pub fn as_tuple(&self) -> (u32, u32, u32, u32) {
        (self.sq_sq, self.sq_non, self.non_sq, self.non_non)
    }

    /// Counts predicted for an odd prime power q.
    #[must_use]
    pub fn expected(q: u32) -> Self {
        let (a, b, c, d) = if q % 4 == 1 {
            ((q - 5) / 4, (q - 1) / 4, (q - 1) / 4, (q - 1) / 4)
        } else {
            ((q - 3) / 4, (q - 3) / 4, (q + 1) / 4, (q - 3) / 4)
        };
        ResidueShiftCounts { sq_sq: a, sq_non: b, non_sq: c, non_non: d }
    }
}

/// Default primitive moduli (ascending coefficients) for the non-prime fields in common use.
pub const DEFAULT_MODULI: &[(u32, &[u32])] = &[
    (9, &[2, 2, 1]),
    (25, &[2, 4, 1]),
    (27, &[1, 2, 0, 1]),
    (49, &[3, 6, 1]),
    (81, &[2, 0, 0, 2, 1]),
    (121, &[2, 7, 1]),
    (125, &[3, 3, 0, 1]),
    (169, &[2, 12, 1]),
];

/// Immutable context for GF(p^e).
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    xi: FieldElem,
    log: Vec<u32>,
    exp: Vec<FieldElem>,
    zech: Vec<u32>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Polynomial arithmetic on coordinate vectors, used only while building tables.
struct PolyMod<'a> {
    p: u32,
    modulus: &'a [u32],
}

impl PolyMod<'_> {
    fn e(&self) -> usize {
        self.modulus.len() - 1
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let e = self.e();
        let p = u64::from(self.p);
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..e].iter().enumerate() {
                let t = c * u64::from(m) % p;
                prod[k - e + i] = (prod[k - e + i] + p - t) % p;
            }
        }
        prod.truncate(e);
        prod.into_iter().map(|x| x as u32).collect()
    }

    fn pow(&self, a: &[u32], mut n: u64) -> Vec<u32> {
        let mut r = vec![0u32; self.e()];
        r[0] = 1;
        let mut b = a.to_vec();
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        r
    }
}

fn decode(p: u32, e: u32, mut v: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(v % p);
        v /= p;
    }
    out
}

fn encode(p: u32, coeffs: &[u32]) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo a monic polynomial `m` over Z_p (ascending coefficients).
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let p = u64::from(p);
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&x| u64::from(x)).collect();
    while r.len() > dm {
        let c = r.pop().unwrap_or(0);
        if c == 0 {
            continue;
        }
        let off = r.len() - dm;
        for i in 0..dm {
            let t = c * u64::from(m[i]) % p;
            r[off + i] = (r[off + i] + p - t) % p;
        }
    }
    r.into_iter().map(|x| x as u32).collect()
}

/// True iff the monic polynomial `m` of degree e has no monic factor of degree 1..=e/2.
pub fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        let count = u64::from(p).pow(d as u32);
        for v in 0..count {
            let mut f = decode(p, d as u32, v as u32);
            f.push(1);
            if poly_rem(p, m, &f).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^e). Without a modulus, the default table is used for e > 1.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let q64 = u64::from(p).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_Q {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 {
                    return Err(Error::InvalidModulus(format!("expected {} coefficients, got {}", e + 1, m.len())));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus("coefficient out of range".into()));
                }
                if m[e as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(p, m) {
                    return Err(Error::InvalidModulus("modulus is reducible".into()));
                }
                m.to_vec()
            }
            None if e == 1 => vec![0, 1],
            None => match DEFAULT_MODULI.iter().find(|(qq, _)| *qq == q) {
                Some((_, m)) => m.to_vec(),
                None => search_primitive_modulus(p, e)?,
            },
        };
        let pm = PolyMod { p, modulus: &modulus };
        let order = u64::from(q - 1);
        let primes = prime_divisors(order);
        let xi_coeffs = (1..q)
            .map(|v| decode(p, e, v))
            .find(|c| {
                let one = decode(p, e, 1);
                pm.pow(c, order) == one && primes.iter().all(|&r| pm.pow(c, order / r) != one)
            })
            .ok_or_else(|| Error::InvalidModulus("no primitive element".into()))?;
        let xi = FieldElem(encode(p, &xi_coeffs));

        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = decode(p, e, 1);
        for i in 0..n {
            let v = encode(p, &cur);
            exp.push(FieldElem(v));
            log[v as usize] = i as u32;
            cur = if e == 1 {
                vec![((u64::from(cur[0]) * u64::from(xi.0)) % u64::from(p)) as u32]
            } else {
                pm.mul(&cur, &xi_coeffs)
            };
        }
        let mut zech = vec![NO_LOG; n];
        for (i, z) in zech.iter_mut().enumerate() {
            let v = exp[i].0;
            let d0 = v % p;
            let w = v - d0 + (d0 + 1) % p;
            if w != 0 {
                *z = log[w as usize];
            }
        }
        Ok(FieldCtx { p, e, q, modulus, xi, log, exp, zech })
    }

    /// Builds GF(q) from the order alone.
    pub fn from_order(q: u64, modulus: Option<&[u32]>) -> Result<Self> {
        if q.is_multiple_of(2) {
            return Err(Error::EvenCharacteristic);
        }
        let (p, e) = crate::arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q));
        }
        Self::new(p as u32, e, modulus)
    }

    #[must_use]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[must_use]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[must_use]
    pub fn q(&self) -> u32 {
        self.q
    }
    #[must_use]
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The primitive element ξ: the least element of order q−1.
    #[must_use]
    pub fn xi(&self) -> FieldElem {
        self.xi
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    #[must_use]
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        decode(self.p, self.e, x.0)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument("bad coordinate vector".into()));
        }
        Ok(FieldElem(encode(self.p, coeffs)))
    }

    /// Image of an integer in the prime field.
    #[must_use]
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(i64::from(self.p)) as u32)
    }

    /// Discrete logarithm to base ξ, `None` for zero.
    #[must_use]
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        match self.log[x.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// ξ^n for any integer n.
    #[must_use]
    pub fn exp(&self, n: i64) -> FieldElem {
        self.exp[n.rem_euclid(i64::from(self.q - 1)) as usize]
    }

    #[must_use]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = (lb + n - la) % n;
        match self.zech[d as usize] {
            NO_LOG => FieldElem::ZERO,
            z => self.exp[((la + z) % n) as usize],
        }
    }

    #[must_use]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return a;
        }
        let n = self.q - 1;
        self.exp[((self.log[a.0 as usize] + n / 2) % n) as usize]
    }

    #[must_use]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[must_use]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = self.q - 1;
        self.exp[((self.log[a.0 as usize] + self.log[b.0 as usize]) % n) as usize]
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// Panics on zero.
    #[must_use]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "inverse of zero");
        let n = self.q - 1;
        self.exp[((n - self.log[a.0 as usize]) % n) as usize]
    }

    /// # Panics
    /// Panics if `b` is zero.
    #[must_use]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// a^n for signed n; 0^0 = 1 and 0^n = 0 for n > 0.
    ///
    /// # Panics
    /// Panics on a negative power of zero.
    #[must_use]
    pub fn pow(&self, a: FieldElem, n: i64) -> FieldElem {
        if a.0 == 0 {
            assert!(n >= 0, "negative power of zero");
            return if n == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let l = i64::from(self.log[a.0 as usize]);
        self.exp(l * n.rem_euclid(i64::from(self.q - 1)))
    }

    #[must_use]
    pub fn is_square(&self, a: FieldElem) -> SquareClass {
        match self.log(a) {
            None => SquareClass::Zero,
            Some(l) if l % 2 == 0 => SquareClass::Square,
            Some(_) => SquareClass::NonSquare,
        }
    }

    /// Canonical sign choice: true iff the discrete log of `a` is below (q−1)/2.
    #[must_use]
    pub fn in_lower_half(&self, a: FieldElem) -> bool {
        self.log(a).is_some_and(|l| l < (self.q - 1) / 2)
    }

    #[must_use]
    pub fn residue_shift_counts(&self) -> ResidueShiftCounts {
        let mut c = ResidueShiftCounts { sq_sq: 0, sq_non: 0, non_sq: 0, non_non: 0 };
        for x in self.elements().skip(1) {
            let y = self.sub(x, FieldElem::ONE);
            let from = self.is_square(x);
            match (from, self.is_square(y)) {
                (SquareClass::Square, SquareClass::Square) => c.sq_sq += 1,
                (SquareClass::Square, SquareClass::NonSquare) => c.sq_non += 1,
                (SquareClass::NonSquare, SquareClass::Square) => c.non_sq += 1,
                (SquareClass::NonSquare, SquareClass::NonSquare) => c.non_non += 1,
                _ => {}
            }
        }
        c
    }

    /// Multiplicative order of a nonzero element.
    #[must_use]
    pub fn order(&self, a: FieldElem) -> u32 {
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        n / num_integer::gcd(n, l)
    }

    /// Human-readable polynomial-basis form, e.g. `2x+1`.
    #[must_use]
    pub fn format(&self, a: FieldElem) -> String {
        if self.e == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = (0..c.len())
            .rev()
            .filter(|&i| c[i] != 0)
            .map(|i| match (i, c[i]) {
                (0, v) => v.to_string(),
                (1, 1) => "x".into(),
                (1, v) => format!("{v}x"),
                (i, 1) => format!("x^{i}"),
                (i, v) => format!("{v}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Least monic irreducible of degree e (in coefficient-encoding order) with x primitive.
fn search_primitive_modulus(p: u32, e: u32) -> Result<Vec<u32>> {
    let q = u64::from(p).pow(e);
    let order = q - 1;
    let primes = prime_divisors(order);
    for v in 0..q {
        let mut m = decode(p, e, v as u32);
        m.push(1);
        if m[0] == 0 || !is_irreducible(p, &m) {
            continue;
        }
        let pm = PolyMod { p, modulus: &m };
        let mut x = vec![0u32; e as usize];
        x[1] = 1;
        let one = decode(p, e, 1);
        if pm.pow(&x, order) == one && primes.iter().all(|&r| pm.pow(&x, order / r) != one) {
            return Ok(m);
        }
    }
    Err(Error::NoDefaultModulus(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn gf5_primitive_element() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f.xi(), FieldElem(2));
    }

    #[test]
    fn gf9_explicit_modulus() {
        let f = FieldCtx::new(3, 2, Some(&[2, 1, 1])).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        // independent oracle: repeated multiplication by x in the polynomial basis
        let mut cur = [1u32, 0];
        let mut order = 0;
        loop {
            let (c0, c1) = (cur[0], cur[1]);
            // x*(c0 + c1 x) = c0 x + c1 x^2, with x^2 = -x - 2 = 2x + 1
            cur = [(c1) % 3, (c0 + 2 * c1) % 3];
            order += 1;
            if cur == [1, 0] {
                break;
            }
        }
        assert_eq!(order, 8);
        assert_eq!(f.order(x), 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldCtx::new(2, 1, None), Err(Error::EvenCharacteristic));
        assert_eq!(FieldCtx::new(9, 1, None), Err(Error::NotPrime(9)));
        assert!(FieldCtx::new(3, 2, Some(&[1, 0, 1])).is_ok());
        assert!(matches!(FieldCtx::new(3, 2, Some(&[2, 0, 1])), Err(Error::InvalidModulus(_))));
        assert!(matches!(FieldCtx::from_order(8, None), Err(Error::EvenCharacteristic)));
        assert!(matches!(FieldCtx::from_order(15, None), Err(Error::NotPrimePower(15))));
    }

    #[test]
    fn default_moduli_are_primitive() {
        for &(q, m) in DEFAULT_MODULI {
            let f = FieldCtx::from_order(u64::from(q), None).unwrap();
            assert_eq!(f.modulus(), m);
            assert_eq!(f.xi(), FieldElem(f.p()), "x is primitive for q={q}");
        }
    }

    #[test]
    fn non_table_fields_are_found() {
        let f = FieldCtx::from_order(243, None).unwrap();
        assert_eq!(f.order(f.xi()), 242);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [3u64, 5, 7, 9, 25, 27] {
            let f = FieldCtx::from_order(q, None).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), FieldElem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in els.iter().step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn addition_matches_coordinates() {
        let f = FieldCtx::from_order(27, None).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let ca = f.coeffs(a);
                let cb = f.coeffs(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.add(a, b), f.from_coeffs(&s).unwrap());
            }
        }
    }

    #[test]
    fn primitive_element_order() {
        for q in [5u64, 7, 9, 11, 13, 25, 27, 49, 81, 121, 125, 169] {
            let f = FieldCtx::from_order(q, None).unwrap();
            let n = (q - 1) as i64;
            assert_eq!(f.pow(f.xi(), n), FieldElem::ONE);
            for d in 1..n {
                if n % d == 0 {
                    assert_ne!(f.pow(f.xi(), d), FieldElem::ONE);
                }
            }
            for x in f.elements().skip(1) {
                assert_eq!(f.exp(i64::from(f.log(x).unwrap())), x);
            }
        }
    }

    #[test]
    fn squares_match_enumeration() {
        for q in (3u64..=128).filter(|&q| q % 2 == 1 && crate::arith::prime_power(q).is_some()) {
            let f = FieldCtx::from_order(q, None).unwrap();
            let squares: HashSet<FieldElem> = f.elements().skip(1).map(|y| f.mul(y, y)).collect();
            assert_eq!(squares.len() as u64, (q - 1) / 2);
            for x in f.elements() {
                let expect = if x.is_zero() {
                    SquareClass::Zero
                } else if squares.contains(&x) {
                    SquareClass::Square
                } else {
                    SquareClass::NonSquare
                };
                assert_eq!(f.is_square(x), expect, "q={q}");
            }
        }
    }

    #[test]
    fn gf7_square_examples() {
        let f = FieldCtx::new(7, 1, None).unwrap();
        assert_eq!(f.is_square(FieldElem(2)), SquareClass::Square);
        assert_eq!(f.is_square(FieldElem(3)), SquareClass::NonSquare);
        assert_eq!(f.is_square(FieldElem(0)), SquareClass::Zero);
    }

    #[test]
    fn residue_shift_examples() {
        let t = |q| FieldCtx::from_order(q, None).unwrap().residue_shift_counts().as_tuple();
        assert_eq!(t(13), (2, 3, 3, 3));
        assert_eq!(t(7), (1, 1, 2, 1));
        assert_eq!(t(5), (0, 1, 1, 1));
        for q in [9u64, 11, 17, 19, 23, 25, 27, 29, 31, 49, 81] {
            let q32 = q as u32;
            let expect = if q % 4 == 1 {
                ((q32 - 5) / 4, (q32 - 1) / 4, (q32 - 1) / 4, (q32 - 1) / 4)
            } else {
                ((q32 - 3) / 4, (q32 - 3) / 4, (q32 + 1) / 4, (q32 - 3) / 4)
            };
            assert_eq!(t(q), expect, "q={q}");
        }
    }
}
