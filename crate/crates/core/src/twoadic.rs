//! Truncated 2-adic completion of Z[ζ_N] at the prime fixed by a [`Reduction`].
//!
//! The completion is Z_2[ζ_M][ζ_{2^a}], represented modulo 2^s as
//! GR(2^s, k)[y]/(y^h + 1) with h = 2^{a−1}. The Galois ring GR(2^s, k) is
//! (Z/2^s)[x]/(f~) where f~ is the 0/1 lift of the reduction modulus, and
//! ζ_M is sent to the Teichmüller lift of ρ^{j0}.

use crate::error::{Error, Result};
use crate::gf2k::Reduction;
use crate::CycInt;

/// Element of GR(2^s, k): coefficients of 1, x, .., x^{k−1} modulo 2^s.
type Gr = Vec<u64>;

#[derive(Clone, Debug)]
pub struct TwoAdic {
    bits: u32,
    mask: u64,
    k: usize,
    /// Exponents j < k with f_j = 1.
    low_terms: Vec<usize>,
    n: u32,
    m: u32,
    a: u32,
    j0: u32,
    /// Teichmüller lift of ρ^i for i < M.
    teich: Vec<Gr>,
}

impl TwoAdic {
    /// Ring with precision 2^bits lying over `red`.
    pub fn new(red: &Reduction, bits: u32) -> Result<Self> {
        if bits == 0 || bits > 62 {
            return Err(Error::InvalidArgument(format!("2-adic precision {bits} unsupported")));
        }
        let k = red.degree() as usize;
        let f = red.field.modulus();
        let low_terms = (0..k).filter(|&j| (f >> j) & 1 == 1).collect();
        let mut ring = TwoAdic {
            bits,
            mask: (1u64 << bits) - 1,
            k,
            low_terms,
            n: red.n,
            m: red.m,
            a: red.a,
            j0: red.j0,
            teich: Vec::new(),
        };
        let mut x = vec![0u64; k];
        if k == 1 {
            x[0] = 1;
        } else {
            x[1] = 1;
        }
        let mut t = x;
        for _ in 0..=bits {
            for _ in 0..k {
                t = ring.mul(&t, &t);
            }
        }
        let one = ring.one();
        let mut cur = one.clone();
        let mut teich = Vec::with_capacity(red.m as usize);
        for _ in 0..red.m {
            teich.push(cur.clone());
            cur = ring.mul(&cur, &t);
        }
        if cur != one {
            return Err(Error::InvalidArgument("Teichmüller lift has wrong order".into()));
        }
        ring.teich = teich;
        Ok(ring)
    }

    fn one(&self) -> Gr {
        let mut o = vec![0u64; self.k];
        o[0] = 1;
        o
    }

    fn mul(&self, u: &Gr, v: &Gr) -> Gr {
        let k = self.k;
        let mut t = vec![0u64; 2 * k - 1];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                t[i + j] = t[i + j].wrapping_add(a.wrapping_mul(b));
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = t[i] & self.mask;
            if c != 0 {
                for &j in &self.low_terms {
                    t[i - k + j] = t[i - k + j].wrapping_sub(c);
                }
            }
        }
        t.truncate(k);
        t.iter().map(|x| x & self.mask).collect()
    }

    /// Computes (x / 2^v) mod the maximal ideal, checking that the image of x
    /// is divisible by 2^v. Requires v < bits.
    pub fn divide_and_reduce(&self, x: &CycInt, v: u32) -> Result<u128> {
        if v >= self.bits {
            return Err(Error::InvalidArgument(format!("valuation {v} exceeds precision {}", self.bits)));
        }
        if !self.n.is_multiple_of(x.order()) {
            return Err(Error::InvalidArgument(format!("order {} does not divide {}", x.order(), self.n)));
        }
        let lift = x.lift(self.n / x.order());
        let two_part = 1usize << self.a;
        let h = two_part / 2;
        let mut acc = vec![vec![0u64; self.k]; h];
        for (i, c) in lift.terms() {
            let mut yp = i % two_part;
            let mut c = (*c).rem_euclid(1i64 << self.bits) as u64;
            if yp >= h {
                yp -= h;
                c = c.wrapping_neg();
            }
            let e = (i as u64 * self.j0 as u64 % self.m as u64) as usize;
            for (dst, &t) in acc[yp].iter_mut().zip(&self.teich[e]) {
                *dst = dst.wrapping_add(c.wrapping_mul(t)) & self.mask;
            }
        }
        let low = (1u64 << v) - 1;
        let mut out = 0u128;
        for coord in &acc {
            for (j, &c) in coord.iter().enumerate() {
                if c & low != 0 {
                    return Err(Error::Integrality(format!("2-adic valuation below {v}")));
                }
                if (c >> v) & 1 == 1 {
                    out ^= 1 << j;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_reduces_to_reduction() {
        let red = Reduction::new(60).unwrap();
        let ring = TwoAdic::new(&red, 5).unwrap();
        for i in 0..60 {
            let z = CycInt::root(60, i);
            assert_eq!(ring.divide_and_reduce(&z, 0).unwrap(), red.root_image(i));
        }
    }

    #[test]
    fn exact_division() {
        let red = Reduction::new(60).unwrap();
        let ring = TwoAdic::new(&red, 4).unwrap();
        // (1 + ζ_4)^2 = 2ζ_4, so dividing by 2 gives ζ_4 ↦ 1
        let s = &CycInt::one(60) + &CycInt::root(60, 15);
        let sq = &s * &s;
        assert_eq!(ring.divide_and_reduce(&sq, 1).unwrap(), 1);
        assert!(ring.divide_and_reduce(&s, 1).is_err());
        // 6ζ_3 / 2 = 3ζ_3 ↦ ρ^{20}
        let x = CycInt::root(60, 20).scale(&6);
        assert_eq!(ring.divide_and_reduce(&x, 1).unwrap(), red.root_image(20));
    }
}
