//! Exact arithmetic in Z[ζ_N], generic over the integer coefficient type.
//!
//! Elements are stored as coefficient vectors over ζ_N^0..ζ_N^{N−1}. Such a
//! vector is not unique; equality and division reduce to the power basis
//! 1, ζ, …, ζ^{φ(N)−1} modulo the cyclotomic polynomial Φ_N.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

use crate::arith::prime_divisors;
use crate::error::{Error, Result};

/// Integer types usable as coefficients.
pub trait Coeff: Clone + Debug + PartialEq + Integer + Signed + FromPrimitive + Send + Sync {}
impl<T: Clone + Debug + PartialEq + Integer + Signed + FromPrimitive + Send + Sync> Coeff for T {}

/// An element Σ c_j ζ_N^j of the N-th cyclotomic ring.
#[derive(Clone, Debug)]
pub struct Cyclotomic<T> {
    n: u32,
    c: Vec<T>,
}

/// Φ_m for squarefree m, built by Φ_{mp}(x) = Φ_m(x^p) / Φ_m(x).
fn squarefree_cyclotomic(rad: u64) -> Vec<i64> {
    let mut phi: Vec<i64> = vec![-1, 1];
    let mut m = 1u64;
    for p in prime_divisors(rad) {
        let p_us = p as usize;
        let mut num = vec![0i64; (phi.len() - 1) * p_us + 1];
        for (i, &c) in phi.iter().enumerate() {
            num[i * p_us] = c;
        }
        // exact division by the monic polynomial `phi`
        let d = phi.len() - 1;
        let mut quot = vec![0i64; num.len() - d];
        for i in (0..quot.len()).rev() {
            let c = num[i + d];
            quot[i] = c;
            for (j, &pc) in phi.iter().enumerate() {
                num[i + j] -= c * pc;
            }
        }
        debug_assert!(num.iter().all(|&x| x == 0));
        phi = quot;
        m *= p;
    }
    debug_assert_eq!(m, rad);
    phi
}

fn cached_phi(rad: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard.entry(rad).or_insert_with(|| Arc::new(squarefree_cyclotomic(rad))).clone()
}

/// Coefficients of Φ_N in ascending order.
#[must_use]
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let rad: u64 = prime_divisors(u64::from(n)).iter().product();
    let s = (u64::from(n) / rad) as usize;
    let base = cached_phi(rad);
    let mut out = vec![0i64; (base.len() - 1) * s + 1];
    for (i, &c) in base.iter().enumerate() {
        out[i * s] = c;
    }
    out
}

/// Euler's totient.
#[must_use]
pub fn totient(n: u32) -> u32 {
    prime_divisors(u64::from(n)).iter().fold(n, |acc, &p| acc / p as u32 * (p as u32 - 1))
}

fn from_i64<T: Coeff>(v: i64) -> T {
    T::from_i64(v).expect("coefficient fits")
}

impl<T: Coeff> Cyclotomic<T> {
    #[must_use]
    pub fn zero(n: u32) -> Self {
        Cyclotomic { n, c: vec![T::zero(); n as usize] }
    }

    #[must_use]
    pub fn from_int(n: u32, v: T) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = v;
        z
    }

    #[must_use]
    pub fn one(n: u32) -> Self {
        Self::from_int(n, T::one())
    }

    /// ζ_N^k for any integer k.
    #[must_use]
    pub fn root(n: u32, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[k.rem_euclid(i64::from(n)) as usize] = T::one();
        z
    }

    #[must_use]
    pub fn order(&self) -> u32 {
        self.n
    }

    /// Coefficients over ζ^0..ζ^{N−1} (not canonical).
    #[must_use]
    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    /// Indices and values of nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "mixed cyclotomic orders");
    }

    #[must_use]
    pub fn scale(&self, k: &T) -> Self {
        Cyclotomic { n: self.n, c: self.c.iter().map(|x| x.clone() * k.clone()).collect() }
    }

    /// Complex conjugate: ζ^j ↦ ζ^{−j}.
    #[must_use]
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut out = Self::zero(self.n);
        for (j, v) in self.terms() {
            out.c[(n - j) % n] = v.clone();
        }
        out
    }

    /// Coordinates in the power basis 1, ζ, …, ζ^{φ(N)−1}.
    #[must_use]
    pub fn reduced(&self) -> Vec<T> {
        let n = u64::from(self.n);
        let rad: u64 = prime_divisors(n).iter().product();
        let s = (n / rad) as usize;
        let phi = cached_phi(rad);
        let d = phi.len() - 1;
        let rad = rad as usize;
        let mut out = vec![T::zero(); d * s];
        // x^(s·m + j) = x^j · (x^s)^m, and Φ_N(x) = Φ_rad(x^s)
        let mut lane = vec![T::zero(); rad];
        for j in 0..s {
            let mut any = false;
            for (m, slot) in lane.iter_mut().enumerate() {
                *slot = self.c[s * m + j].clone();
                any |= !slot.is_zero();
            }
            if !any {
                continue;
            }
            for m in (d..rad).rev() {
                if lane[m].is_zero() {
                    continue;
                }
                let c = lane[m].clone();
                for (t, &pc) in phi.iter().enumerate() {
                    if pc != 0 {
                        lane[m - d + t] = lane[m - d + t].clone() - c.clone() * from_i64::<T>(pc);
                    }
                }
            }
            for m in 0..d {
                out[s * m + j] = lane[m].clone();
            }
        }
        out
    }

    /// The element with the given power-basis coordinates.
    #[must_use]
    pub fn from_reduced(n: u32, coords: Vec<T>) -> Self {
        let mut z = Self::zero(n);
        for (i, v) in coords.into_iter().enumerate() {
            z.c[i] = v;
        }
        z
    }

    /// Canonical representative in the power basis.
    #[must_use]
    pub fn canonical(&self) -> Self {
        Self::from_reduced(self.n, self.reduced())
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(num_traits::Zero::is_zero)
    }

    /// Exact equality in Z[ζ_N].
    #[must_use]
    pub fn equals(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// The rational integer value, if the element is one.
    #[must_use]
    pub fn as_integer(&self) -> Option<T> {
        let r = self.reduced();
        if r[1..].iter().all(num_traits::Zero::is_zero) {
            Some(r[0].clone())
        } else {
            None
        }
    }

    /// Division by an integer that must be exact in the power basis.
    pub fn div_exact(&self, d: &T) -> Result<Self> {
        let r = self.reduced();
        let mut out = Vec::with_capacity(r.len());
        for v in r {
            let (quo, rem) = v.div_rem(d);
            if !rem.is_zero() {
                return Err(Error::Integrality(format!("coefficient {v:?} not divisible by {d:?}")));
            }
            out.push(quo);
        }
        Ok(Self::from_reduced(self.n, out))
    }

    /// Image of ζ_N ↦ ζ_{N·m}^m under the inclusion into a larger ring.
    #[must_use]
    pub fn lift(&self, m: u32) -> Self {
        let mut out = Self::zero(self.n * m);
        for (j, v) in self.terms() {
            out.c[j * m as usize] = v.clone();
        }
        out
    }
}

impl<T: Coeff> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, o: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.check(o);
        Cyclotomic { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() + b.clone()).collect() }
    }
}

impl<T: Coeff> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, o: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.check(o);
        Cyclotomic { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() - b.clone()).collect() }
    }
}

impl<T: Coeff> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic { n: self.n, c: self.c.iter().map(|a| -a.clone()).collect() }
    }
}

impl<T: Coeff> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, o: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.check(o);
        let n = self.n as usize;
        let mut out = Cyclotomic::<T>::zero(self.n);
        let rhs: Vec<(usize, &T)> = o.terms().collect();
        for (i, a) in self.terms() {
            for &(j, b) in &rhs {
                let k = (i + j) % n;
                out.c[k] = out.c[k].clone() + a.clone() * b.clone();
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Coeff> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $m(self, o: Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<T: Coeff> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

/// Σ_{t=1}^{p−1} (t/p) ζ_p^t inside Z[ζ_N], p | N.
#[must_use]
pub fn quadratic_gauss_sum<T: Coeff>(n: u32, p: u32) -> Cyclotomic<T> {
    let step = i64::from(n / p);
    let mut g = Cyclotomic::zero(n);
    for t in 1..p {
        let s = crate::arith::legendre(i64::from(t), u64::from(p));
        let idx = (step * i64::from(t)) as usize;
        g.c[idx] = from_i64(s);
    }
    g
}

/// Σ of ζ_p^t over the nonzero residues (`squares = true`) or nonresidues mod p.
#[must_use]
pub fn gauss_period<T: Coeff>(n: u32, p: u32, squares: bool) -> Cyclotomic<T> {
    let step = n / p;
    let mut g = Cyclotomic::zero(n);
    for t in 1..p {
        if (crate::arith::legendre(i64::from(t), u64::from(p)) == 1) == squares {
            g.c[(step * t) as usize] = T::one();
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type C = Cyclotomic<i64>;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        for n in [84u32, 105, 1092, 312] {
            assert_eq!(cyclotomic_poly(n).len() as u32 - 1, totient(n));
        }
        // Φ_105 is the smallest with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn sum_of_primitive_roots_is_mobius() {
        // Σ_{gcd(j,n)=1} ζ^j = μ(n)
        for (n, mu) in [(12u32, 0i64), (15, 1), (30, -1), (7, -1), (84, 0), (105, -1)] {
            let mut s = C::zero(n);
            for j in 0..n {
                if num_integer::gcd(j, n) == 1 {
                    s = &s + &C::root(n, i64::from(j));
                }
            }
            assert_eq!(s.as_integer(), Some(mu), "n={n}");
        }
    }

    #[test]
    fn gauss_sum_squares() {
        for (p, pstar) in [(3u32, -3i64), (5, 5), (7, -7), (13, 13), (11, -11)] {
            let n = 4 * p;
            let g = quadratic_gauss_sum::<i64>(n, p);
            assert_eq!((&g * &g).as_integer(), Some(pstar));
            let plus = gauss_period::<i64>(n, p, true);
            let minus = gauss_period::<i64>(n, p, false);
            assert!((&plus - &minus).equals(&g));
            assert_eq!((&plus + &minus).as_integer(), Some(-1));
        }
    }

    #[test]
    fn div_exact_checks_integrality() {
        let n = 12;
        let x = &C::root(n, 1).scale(&6) + &C::from_int(n, 3);
        assert!(x.div_exact(&3).unwrap().equals(&(&C::root(n, 1).scale(&2) + &C::one(n))));
        assert!(matches!(x.div_exact(&2), Err(Error::Integrality(_))));
    }

    #[test]
    fn bigint_agrees_with_i64() {
        let n = 84;
        let a = &C::root(n, 5) + &C::root(n, 77).scale(&3);
        let b = &C::root(n, 40) - &C::from_int(n, 2);
        let prod = (&a * &b).reduced();
        let ab = Cyclotomic::<BigInt>::root(n, 5) + Cyclotomic::<BigInt>::root(n, 77).scale(&BigInt::from(3));
        let bb = Cyclotomic::<BigInt>::root(n, 40) - Cyclotomic::<BigInt>::from_int(n, BigInt::from(2));
        let big: Vec<i64> = (ab * bb).reduced().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(prod, big);
    }

    proptest! {
        #[test]
        fn ring_laws(a in prop::collection::vec(-5i64..5, 60), b in prop::collection::vec(-5i64..5, 60),
                     c in prop::collection::vec(-5i64..5, 60)) {
            let mk = |v: &Vec<i64>| Cyclotomic::<i64>::from_reduced(60, v.clone());
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert!((&(&a * &b) * &c).equals(&(&a * &(&b * &c))));
            prop_assert!((&a * &(&b + &c)).equals(&(&(&a * &b) + &(&a * &c))));
            prop_assert!((&a * &b).conj().equals(&(&a.conj() * &b.conj())));
            prop_assert!((&a * &b).canonical().equals(&(&b * &a)));
        }

        #[test]
        fn root_powers(k in 0i64..200, l in 0i64..200) {
            let n = 36;
            prop_assert!((&C::root(n, k) * &C::root(n, l)).equals(&C::root(n, k + l)));
            prop_assert!(C::root(n, k).lift(3).equals(&C::root(3 * n, 3 * k)));
        }
    }
}
