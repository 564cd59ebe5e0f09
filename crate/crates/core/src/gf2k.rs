//! Binary fields GF(2^k) for k ≤ 127 and the reduction of cyclotomic
//! integers modulo a prime above 2.

use crate::arith::{mult_order, prime_divisors};
use crate::error::{Error, Result};
use crate::CycInt;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 127;

/// Degree of a nonzero binary polynomial.
fn deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

/// Product of two binary polynomials modulo `f`.
pub fn poly_mulmod(a: u128, b: u128, f: u128) -> u128 {
    let k = deg(f);
    let top = 1u128 << k;
    let mut a = poly_rem(a, f);
    let mut b = poly_rem(b, f);
    let mut r = 0u128;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= f;
        }
    }
    r
}

/// Remainder of `a` modulo `f`.
pub fn poly_rem(mut a: u128, f: u128) -> u128 {
    let k = deg(f);
    while a != 0 && deg(a) >= k {
        a ^= f << (deg(a) - k);
    }
    a
}

/// Greatest common divisor of binary polynomials.
pub fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a binary polynomial of degree ≥ 1.
pub fn is_irreducible(f: u128) -> bool {
    let k = deg(f);
    if k < 1 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = 2u128;
    let mut h = vec![poly_rem(x, f)];
    for _ in 0..k {
        let last = *h.last().unwrap();
        h.push(poly_mulmod(last, last, f));
    }
    if h[k as usize] != poly_rem(x, f) {
        return false;
    }
    prime_divisors(k as u64).into_iter().all(|r| {
        let hk = h[(k as u64 / r) as usize] ^ x;
        deg(poly_gcd(f, hk)) == 0
    })
}

/// The least irreducible polynomial of degree `k` under integer encoding.
pub fn least_irreducible(k: u32) -> Result<u128> {
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("extension degree {k} unsupported")));
    }
    let top = 1u128 << k;
    let mut c = 1u128;
    loop {
        if is_irreducible(top | c) {
            return Ok(top | c);
        }
        c += 2;
    }
}

/// GF(2^k) as GF(2)[x]/(f); elements are coefficient bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2k {
    k: u32,
    modulus: u128,
}

impl Gf2k {
    pub fn new(modulus: u128) -> Result<Self> {
        if !is_irreducible(modulus) || deg(modulus) as u32 > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("{modulus:#x} is not an admissible modulus")));
        }
        Ok(Gf2k { k: deg(modulus) as u32, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Multiplicative group order 2^k − 1.
    pub fn unit_order(&self) -> u128 {
        (1u128 << self.k) - 1
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        poly_mulmod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u128, mut e: u128) -> u128 {
        let mut base = a;
        let mut r = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u128) -> Result<u128> {
        if a == 0 {
            return Err(Error::Singular);
        }
        Ok(self.pow(a, self.unit_order() - 1))
    }

    /// Multiplicative order of a nonzero element dividing `m`.
    pub fn has_order(&self, a: u128, m: u64) -> bool {
        self.pow(a, m as u128) == 1 && prime_divisors(m).into_iter().all(|r| self.pow(a, (m / r) as u128) != 1)
    }

    /// Rank of a matrix with entries in this field.
    pub fn rank(&self, rows: &[Vec<u128>]) -> usize {
        let mut m: Vec<Vec<u128>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, piv);
            let inv = self.inv(m[rank][c]).expect("pivot is nonzero");
            let prow: Vec<u128> = m[rank].iter().map(|&x| self.mul(x, inv)).collect();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let s = row[c];
                    for (x, &p) in row.iter_mut().zip(&prow).skip(c) {
                        *x ^= self.mul(s, p);
                    }
                }
            }
            m[rank] = prow;
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }
}

/// Reduction of Z[ζ_N] onto GF(2^k) at the prime determined by an exponent `j0`.
///
/// ζ_N maps to ρ^{j0}, where ρ = x is a root of the least irreducible factor
/// of Φ_M modulo 2 and M is the odd part of N. The 2-primary part of ζ_N is
/// sent to 1.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub n: u32,
    pub m: u32,
    /// 2-adic valuation of N.
    pub a: u32,
    pub j0: u32,
    pub field: Gf2k,
    powers: Vec<u128>,
}

impl Reduction {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_exponent(n, 1)
    }

    pub fn with_exponent(n: u32, j0: u32) -> Result<Self> {
        let a = n.trailing_zeros();
        let m = n >> a;
        if m < 3 {
            return Err(Error::InvalidArgument(format!("root order {n} has trivial odd part")));
        }
        if num_integer::gcd(j0, m) != 1 {
            return Err(Error::InvalidArgument(format!("exponent {j0} is not a unit mod {m}")));
        }
        let f = least_phi_factor(m)?;
        let field = Gf2k::new(f)?;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = 1u128;
        for _ in 0..m {
            powers.push(cur);
            cur = field.mul(cur, 2);
        }
        debug_assert_eq!(cur, 1);
        Ok(Reduction { n, m, a, j0, field, powers })
    }

    /// Least unit modulo the odd part of `n` outside the subgroup generated
    /// by 2, selecting a different prime above 2.
    pub fn alternate_exponent(n: u32) -> Option<u32> {
        let m = n >> n.trailing_zeros();
        if m < 3 {
            return None;
        }
        let mut two = vec![false; m as usize];
        let mut x = 1u32;
        loop {
            two[x as usize] = true;
            x = x * 2 % m;
            if x == 1 {
                break;
            }
        }
        (2..m).find(|&j| num_integer::gcd(j, m) == 1 && !two[j as usize])
    }

    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    /// Image of ζ_N^i.
    pub fn root_image(&self, i: i64) -> u128 {
        let e = (i.rem_euclid(self.n as i64) as u64 * self.j0 as u64) % self.m as u64;
        self.powers[e as usize]
    }

    pub fn reduce(&self, x: &CycInt) -> Result<u128> {
        if !self.n.is_multiple_of(x.order()) {
            return Err(Error::InvalidArgument(format!("order {} does not divide {}", x.order(), self.n)));
        }
        let lift = x.lift(self.n / x.order());
        Ok(lift.terms().filter(|(_, c)| *c % 2 != 0).fold(0u128, |acc, (i, _)| acc ^ self.root_image(i as i64)))
    }
}

/// Least irreducible factor of Φ_m modulo 2 under integer encoding.
pub fn least_phi_factor(m: u32) -> Result<u128> {
    let k = mult_order(2, m as u64) as u32;
    let big = Gf2k::new(least_irreducible(k)?)?;
    let cof = big.unit_order() / m as u128;
    let beta = (2u128..)
        .map(|a| big.pow(a, cof))
        .find(|&b| big.has_order(b, m as u64))
        .expect("cyclic group contains an element of every divisor order");
    let mut seen = vec![false; m as usize];
    let mut best: Option<u128> = None;
    for j in 1..m {
        if seen[j as usize] || num_integer::gcd(j, m) != 1 {
            continue;
        }
        // minimal polynomial of beta^j: product over its Frobenius orbit
        let mut poly: Vec<u128> = vec![1];
        let mut e = j;
        loop {
            seen[e as usize] = true;
            let r = big.pow(beta, e as u128);
            let mut next = vec![0u128; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] ^= c;
                next[i] ^= big.mul(c, r);
            }
            poly = next;
            e = e * 2 % m;
            if e == j {
                break;
            }
        }
        let mut enc = 0u128;
        for (i, &c) in poly.iter().enumerate() {
            match c {
                0 => {}
                1 => enc |= 1 << i,
                _ => return Err(Error::InvalidArgument("minimal polynomial not over GF(2)".into())),
            }
        }
        best = Some(best.map_or(enc, |b| b.min(enc)));
    }
    best.ok_or_else(|| Error::InvalidArgument(format!("no factor of cyclotomic polynomial {m}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(1).unwrap(), 0b11);
        assert_eq!(least_irreducible(2).unwrap(), 0b111);
        assert_eq!(least_irreducible(3).unwrap(), 0b1011);
        assert_eq!(least_irreducible(4).unwrap(), 0b10011);
        assert_eq!(least_irreducible(8).unwrap(), 0x11b);
        assert!(!is_irreducible(0b101));
        assert!(least_irreducible(127).is_ok());
    }

    #[test]
    fn phi_factors() {
        // Φ_15 = (x^4+x+1)(x^4+x^3+1) mod 2
        assert_eq!(least_phi_factor(15).unwrap(), 0b10011);
        // Φ_5 is irreducible mod 2
        assert_eq!(least_phi_factor(5).unwrap(), 0b11111);
        // Φ_7 = (x^3+x+1)(x^3+x^2+1)
        assert_eq!(least_phi_factor(7).unwrap(), 0b1011);
    }

    #[test]
    fn field_inverse_and_rank() {
        let f = Gf2k::new(0x11b).unwrap();
        for a in 1..256u128 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.rank(&[vec![1, 2], vec![2, f.mul(2, 2)]]), 1);
        assert_eq!(f.rank(&[vec![1, 2], vec![2, 3]]), 2);
    }

    #[test]
    fn reduction_is_multiplicative() {
        let r = Reduction::new(1092).unwrap();
        assert_eq!(r.degree(), 12);
        for i in [0i64, 1, 5, 84, 273, 500, 1091] {
            for j in [3i64, 4, 91, 364] {
                let prod = &CycInt::root(1092, i) * &CycInt::root(1092, j);
                assert_eq!(r.reduce(&prod).unwrap(), r.field.mul(r.root_image(i), r.root_image(j)));
            }
        }
        // kernel of the reduction on roots of unity is the 2-primary part
        let kernel: Vec<i64> = (0..1092).filter(|&i| r.root_image(i) == 1).collect();
        assert_eq!(kernel, vec![0, 273, 546, 819]);
        // 1 + ζ_4 lies over the prime above 2
        let s = &CycInt::one(1092) + &CycInt::root(1092, 273);
        assert_eq!(r.reduce(&s).unwrap(), 0);
    }

    #[test]
    fn alternate_exponents() {
        assert_eq!(Reduction::alternate_exponent(60), Some(7));
        assert_eq!(Reduction::alternate_exponent(40), None);
    }
}
