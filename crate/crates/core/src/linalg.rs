//! Dense linear algebra over GF(2) (bit-packed rows) and over prime fields.

use std::fmt;

use crate::error::{Error, Result};

const W: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(W)
}

/// A bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    #[must_use]
    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / W] >> (i % W) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        let m = 1u64 << (i % W);
        if v {
            self.words[i / W] |= m;
        } else {
            self.words[i / W] &= !m;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[must_use]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, increasing.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    #[must_use]
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense GF(2) matrix with rows packed into 64-bit words.
///
/// Bits past `cols` in the last word of each row are kept zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    #[must_use]
    pub fn all_ones(n: usize) -> Self {
        Self::ones(n, n)
    }

    #[must_use]
    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Builds a matrix from row bit vectors of equal length.
    pub fn from_rows(rows: &[BitVec], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has length {}", r.len())));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    #[must_use]
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.stride + c / W] >> (c % W) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let idx = r * self.stride + c / W;
        let m = 1u64 << (c % W);
        if v {
            self.data[idx] |= m;
        } else {
            self.data[idx] &= !m;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[must_use]
    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(r).to_vec() }
    }

    #[must_use]
    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Number of set entries.
    #[must_use]
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!("{}x{} + {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(BitMatrix { data, ..*self })
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let acc = &mut out.data[r * out.stride..(r + 1) * out.stride];
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let k = wi * W + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for (a, b) in acc.iter_mut().zip(other.row_words(k)) {
                        *a ^= b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// A^k for k ≥ 1, by repeated squaring.
    pub fn pow(&self, k: u32) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("exponent must be at least 1".into()));
        }
        let mut result: Option<BitMatrix> = None;
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(result.unwrap_or_else(|| BitMatrix::identity(self.rows)))
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix with the given rows in the given order.
    #[must_use]
    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        m
    }

    #[must_use]
    pub fn select_cols(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(self.rows, idx.len(), |r, c| self.get(r, idx[c]))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix { rows: self.rows + other.rows, data, ..*self })
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            if p != r {
                let s = self.stride;
                for w in 0..s {
                    self.data.swap(p * s + w, r * s + w);
                }
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            if p != r {
                let s = m.stride;
                for w in 0..s {
                    m.data.swap(p * s + w, r * s + w);
                }
            }
            for i in r + 1..m.rows {
                if m.get(i, c) {
                    m.xor_rows(i, r);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of {v : A·vᵀ = 0}.
    #[must_use]
    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (i, &pc) in pivots.iter().enumerate() {
                    if m.get(i, f) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Basis of the row space (nonzero rows of the reduced echelon form).
    #[must_use]
    pub fn row_space_basis(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let k = m.rref().len();
        (0..k).map(|i| m.row(i)).collect()
    }

    /// A·v for a column vector v.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::Dimension("vector length".into()));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self.row_words(r).iter().zip(v.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            out.set(r, parity % 2 == 1);
        }
        Ok(out)
    }

    /// Entries as 0/1 bytes, row-major.
    #[must_use]
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| u8::from(self.get(r, c))).collect()).collect()
    }
}

/// Dimension of the intersection of two subspaces given by spanning sets.
pub fn intersection_dim(a: &[BitVec], b: &[BitVec], n: usize) -> Result<usize> {
    let ma = BitMatrix::from_rows(a, n)?;
    let mb = BitMatrix::from_rows(b, n)?;
    let stacked = ma.vstack(&mb)?;
    Ok(ma.rank() + mb.rank() - stacked.rank())
}

/// True iff span(a) ⊆ span(b).
pub fn contained_in(a: &[BitVec], b: &[BitVec], n: usize) -> Result<bool> {
    let mb = BitMatrix::from_rows(b, n)?;
    let ma = BitMatrix::from_rows(a, n)?;
    Ok(mb.vstack(&ma)?.rank() == mb.rank())
}

/// A dense matrix over the prime field Z/p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PFMatrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl PFMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        PFMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    /// Reads a 0/1 matrix modulo p.
    #[must_use]
    pub fn from_bits(m: &BitMatrix, p: u32) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols(), p);
        for r in 0..m.rows() {
            for c in m.row(r).ones() {
                out.data[r * out.cols + c] = 1 % p;
            }
        }
        out
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn modulus(&self) -> u32 {
        self.p
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank of `a` over Z/p by row reduction with modular inverses.
pub fn pf_rank(a: &PFMatrix, p: u32) -> Result<usize> {
    if !crate::arith::is_prime(u64::from(p)) {
        return Err(Error::NotPrime(u64::from(p)));
    }
    let p64 = u64::from(p);
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<u64> = a.data.iter().map(|&x| u64::from(x) % p64).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(m[r * cols + c], p64);
        for j in c..cols {
            m[r * cols + j] = m[r * cols + j] * inv % p64;
        }
        let (head, tail) = m.split_at_mut((r + 1) * cols);
        let pivot_row = &head[r * cols..];
        for i in 0..rows - r - 1 {
            let row = &mut tail[i * cols..(i + 1) * cols];
            let f = row[c];
            if f == 0 {
                continue;
            }
            let nf = p64 - f;
            for j in c..cols {
                row[j] = (row[j] + nf * pivot_row[j]) % p64;
            }
        }
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random(rng: &mut StdRng, r: usize, c: usize) -> BitMatrix {
        BitMatrix::from_fn(r, c, |_, _| rng.gen_bool(0.5))
    }

    fn naive_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        BitMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).filter(|&k| a.get(i, k) && b.get(k, j)).count() % 2 == 1
        })
    }

    #[test]
    fn multiplication_matches_triple_loop() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random(&mut rng, 64, 64);
            let b = random(&mut rng, 64, 64);
            assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
        }
        let a = random(&mut rng, 37, 70);
        let b = random(&mut rng, 70, 129);
        assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }

    #[test]
    fn identities_and_all_ones() {
        let mut rng = StdRng::seed_from_u64(1);
        let a = random(&mut rng, 10, 10);
        assert_eq!(BitMatrix::identity(10).mul(&a).unwrap(), a);
        for n in [7usize, 8, 65, 64] {
            let j = BitMatrix::all_ones(n);
            let j2 = j.mul(&j).unwrap();
            if n % 2 == 1 {
                assert_eq!(j2, j);
            } else {
                assert_eq!(j2, BitMatrix::zeros(n, n));
            }
        }
        assert_eq!(BitMatrix::identity(10).rank(), 10);
        assert_eq!(BitMatrix::all_ones(8).rank(), 1);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let mut rng = StdRng::seed_from_u64(3);
        let a = random(&mut rng, 30, 30);
        let mut acc = a.clone();
        for k in 1..8 {
            assert_eq!(a.pow(k).unwrap(), acc);
            acc = acc.mul(&a).unwrap();
        }
        assert!(a.pow(0).is_err());
    }

    #[test]
    fn dimension_errors() {
        let a = BitMatrix::zeros(3, 4);
        assert!(a.mul(&a).is_err());
        assert!(a.add(&BitMatrix::zeros(4, 3)).is_err());
    }

    #[test]
    fn nullspace_is_annihilated_and_independent() {
        let mut rng = StdRng::seed_from_u64(11);
        for (r, c) in [(20, 50), (50, 20), (66, 66), (10, 130)] {
            let a = random(&mut rng, r, c);
            let ns = a.nullspace_basis();
            assert_eq!(a.rank() + ns.len(), c);
            for v in &ns {
                assert!(a.mul_vec(v).unwrap().is_zero());
            }
            if !ns.is_empty() {
                assert_eq!(BitMatrix::from_rows(&ns, c).unwrap().rank(), ns.len());
            }
        }
    }

    #[test]
    fn rank_is_permutation_invariant() {
        use rand::seq::SliceRandom;
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let a = BitMatrix::from_fn(40, 60, |_, _| rng.gen_bool(0.1));
            let mut rp: Vec<usize> = (0..40).collect();
            let mut cp: Vec<usize> = (0..60).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let b = a.select_rows(&rp).select_cols(&cp);
            assert_eq!(a.rank(), b.rank());
            assert_eq!(a.rank(), a.transpose().rank());
        }
    }

    #[test]
    fn gf2_rank_agrees_with_prime_rank_at_two_free_case() {
        // over Z/3 the all-ones 4x4 has rank 1, identity rank 4
        let j = PFMatrix::from_bits(&BitMatrix::all_ones(4), 3);
        assert_eq!(pf_rank(&j, 3).unwrap(), 1);
        let i = PFMatrix::from_bits(&BitMatrix::identity(4), 5);
        assert_eq!(pf_rank(&i, 5).unwrap(), 4);
        // J - I over Z/3 at n = 4: eigenvalues 3 and -1, so rank 3 mod 3
        let mut m = PFMatrix::zeros(4, 4, 3);
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, u32::from(r != c));
            }
        }
        assert_eq!(pf_rank(&m, 3).unwrap(), 3);
        assert!(pf_rank(&m, 4).is_err());
    }

    #[test]
    fn subspace_helpers() {
        let n = 5;
        let a = vec![BitVec::from_indices(n, [0, 1]), BitVec::from_indices(n, [2])];
        let b = vec![BitVec::from_indices(n, [0, 1, 2]), BitVec::from_indices(n, [3])];
        assert_eq!(intersection_dim(&a, &b, n).unwrap(), 1);
        assert!(!contained_in(&a, &b, n).unwrap());
        assert!(contained_in(&b[..1], &a, n).unwrap());
    }
}
