//! The partitioned line-point incidence matrix, the external-point matrix B
//! with its derived matrices C = B⁴+I and D = C+J, the external neighbor
//! sets, and the null-space and parity verifications built on them.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{contained_in, intersection_dim, BitMatrix, BitVec};
use crate::plane::{LineClass, PlaneCtx, PointClass};

/// The sub-matrices of A that carry a name in the block decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MatrixId {
    A,
    A22,
    A23,
    A32,
    A33,
    B,
}

impl fmt::Display for MatrixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatrixId::A => "A",
            MatrixId::A22 => "A22",
            MatrixId::A23 => "A23",
            MatrixId::A32 => "A32",
            MatrixId::A33 => "A33",
            MatrixId::B => "B",
        };
        f.write_str(s)
    }
}

impl FromStr for MatrixId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(MatrixId::A),
            "A22" => Ok(MatrixId::A22),
            "A23" => Ok(MatrixId::A23),
            "A32" => Ok(MatrixId::A32),
            "A33" => Ok(MatrixId::A33),
            "B" => Ok(MatrixId::B),
            other => Err(Error::InvalidArgument(format!("unknown matrix {other}"))),
        }
    }
}

/// A split into 3×3 blocks: rows tangent/passant/secant, columns absolute/internal/external.
#[derive(Clone, Debug)]
pub struct IncidencePartition {
    pub row_labels: [Vec<usize>; 3],
    pub col_labels: [Vec<usize>; 3],
    pub blocks: [[BitMatrix; 3]; 3],
    pub full: BitMatrix,
}

impl IncidencePartition {
    #[must_use]
    pub fn build(plane: &PlaneCtx) -> Self {
        let row_labels =
            [plane.lines_of(LineClass::Tangent), plane.lines_of(LineClass::Passant), plane.lines_of(LineClass::Secant)];
        let col_labels = [
            plane.points_of(PointClass::Absolute),
            plane.points_of(PointClass::Internal),
            plane.points_of(PointClass::External),
        ];
        let rows: Vec<usize> = row_labels.iter().flatten().copied().collect();
        let cols: Vec<usize> = col_labels.iter().flatten().copied().collect();
        let mut col_pos = vec![0usize; plane.points().len()];
        for (j, &p) in cols.iter().enumerate() {
            col_pos[p] = j;
        }
        let mut full = BitMatrix::zeros(rows.len(), cols.len());
        for (i, &l) in rows.iter().enumerate() {
            for &p in plane.points_on_line(l) {
                full.set(i, col_pos[p], true);
            }
        }
        let block = |bi: usize, bj: usize| {
            let r0: usize = row_labels[..bi].iter().map(Vec::len).sum();
            let c0: usize = col_labels[..bj].iter().map(Vec::len).sum();
            BitMatrix::from_fn(row_labels[bi].len(), col_labels[bj].len(), |r, c| full.get(r0 + r, c0 + c))
        };
        let blocks = std::array::from_fn(|i| std::array::from_fn(|j| block(i, j)));
        IncidencePartition { row_labels, col_labels, blocks, full }
    }

    /// Block A_ij with 1-based indices as in the block layout.
    #[must_use]
    pub fn block(&self, i: usize, j: usize) -> &BitMatrix {
        &self.blocks[i - 1][j - 1]
    }

    /// Reassembles the full matrix from the nine blocks.
    #[must_use]
    pub fn reassemble(&self) -> BitMatrix {
        let rows: usize = self.row_labels.iter().map(Vec::len).sum();
        let cols: usize = self.col_labels.iter().map(Vec::len).sum();
        let mut m = BitMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for bi in 0..3 {
            let mut c0 = 0;
            for bj in 0..3 {
                let b = &self.blocks[bi][bj];
                for r in 0..b.rows() {
                    for c in b.row(r).ones() {
                        m.set(r0 + r, c0 + c, true);
                    }
                }
                c0 += b.cols();
            }
            r0 += self.blocks[bi][0].rows();
        }
        m
    }
}

/// External points in canonical order with the inverse map.
#[derive(Clone, Debug)]
pub struct Externals {
    pub points: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl Externals {
    #[must_use]
    pub fn new(plane: &PlaneCtx) -> Self {
        let points = plane.points_of(PointClass::External);
        let mut pos = vec![None; plane.points().len()];
        for (i, &p) in points.iter().enumerate() {
            pos[p] = Some(i);
        }
        Externals { points, pos }
    }

    /// Ordinal of a point among the external points.
    #[must_use]
    pub fn ordinal(&self, p: usize) -> Option<usize> {
        self.pos[p]
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// B[i][j] = 1 iff P_j ∈ P_i^⊥, rows and columns in external-point order.
#[must_use]
pub fn build_b(plane: &PlaneCtx) -> BitMatrix {
    let ext = Externals::new(plane);
    let n = ext.len();
    let mut b = BitMatrix::zeros(n, n);
    for (i, &p) in ext.points.iter().enumerate() {
        for &r in plane.points_on_line(plane.polar_of_point(p)) {
            if let Some(j) = ext.ordinal(r) {
                b.set(i, j, true);
            }
        }
    }
    b
}

/// C = B⁴ + I.
pub fn build_c(plane: &PlaneCtx) -> Result<BitMatrix> {
    let b = build_b(plane);
    b.pow(4)?.add(&BitMatrix::identity(b.rows()))
}

/// D = C + J.
pub fn build_d(plane: &PlaneCtx) -> Result<BitMatrix> {
    let c = build_c(plane)?;
    c.add(&BitMatrix::all_ones(c.rows()))
}

/// External neighbor sets of a point, as vectors over the external ordinals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborSets {
    pub n_e: BitVec,
    pub t_e: BitVec,
    pub n_a: BitVec,
    pub n_prime: BitVec,
}

/// N_E(P), T_E(P), N_E(P)^a and N'_E(P) for an external point index.
pub fn neighbor_sets(plane: &PlaneCtx, ext: &Externals, p: usize) -> Result<NeighborSets> {
    let me = ext.ordinal(p).ok_or_else(|| Error::InvalidArgument("point is not external".into()))?;
    let n = ext.len();
    let q = plane.q();
    let mut n_e = BitVec::zeros(n);
    let mut t_e = BitVec::zeros(n);
    for &l in plane.lines_through_point(p) {
        let target = match plane.line_class(l) {
            LineClass::Secant => &mut n_e,
            LineClass::Tangent => &mut t_e,
            LineClass::Passant => continue,
        };
        for &r in plane.points_on_line(l) {
            if let Some(j) = ext.ordinal(r) {
                target.set(j, true);
            }
        }
    }
    n_e.set(me, q % 4 == 3);
    t_e.set(me, false);
    let mut n_a = n_e.clone();
    match q % 8 {
        1 => {
            n_a.set(me, true);
            n_a.xor_assign(&t_e);
        }
        5 => n_a.set(me, true),
        7 => {
            n_a.xor_assign(&t_e);
            n_a.set(me, false);
        }
        _ => n_a.set(me, false),
    }
    let mut n_prime = n_a.clone();
    n_prime.xor_assign(&BitVec::from_indices(n, 0..n));
    Ok(NeighborSets { n_e, t_e, n_a, n_prime })
}

/// Outcome of the power identities for B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerIdentity {
    pub b5_ok: bool,
    pub b3_eq: bool,
}

pub fn verify_power_identity(plane: &PlaneCtx) -> Result<PowerIdentity> {
    let b = build_b(plane);
    let b3 = b.pow(3)?;
    let b5 = b3.mul(&b)?.mul(&b)?;
    Ok(PowerIdentity { b5_ok: b5 == b, b3_eq: b3 == b })
}

/// Number of rows of B⁴ that differ from N_E(P) (q ≡ ±3 mod 8) or N_E(P) Δ T_E(P) (q ≡ ±1 mod 8),
/// and of rows of C that differ from N_E(P)^a.
pub fn b4_row_mismatches(plane: &PlaneCtx) -> Result<(usize, usize)> {
    let ext = Externals::new(plane);
    let b = build_b(plane);
    let b4 = b.pow(4)?;
    let c = b4.add(&BitMatrix::identity(b.rows()))?;
    let pm1 = matches!(plane.q() % 8, 1 | 7);
    let mut bad4 = 0;
    let mut bad_c = 0;
    for (i, &p) in ext.points.iter().enumerate() {
        let ns = neighbor_sets(plane, &ext, p)?;
        let mut expect = ns.n_e.clone();
        if pm1 {
            expect.xor_assign(&ns.t_e);
        }
        if b4.row(i) != expect {
            bad4 += 1;
        }
        if c.row(i) != ns.n_a {
            bad_c += 1;
        }
    }
    Ok((bad4, bad_c))
}

/// Length and GF(2) null-space dimension of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub q: u32,
    pub matrix: MatrixId,
    pub n: usize,
    pub k: usize,
    pub rank: usize,
}

/// The formula dimension of the A33 code.
#[must_use]
pub fn expected_dim_a33(q: u32) -> usize {
    let base = ((q - 1) * (q - 1) / 4) as usize;
    if q % 4 == 1 {
        base + 1
    } else {
        base - 1
    }
}

/// Matrix by identifier.
#[must_use]
pub fn matrix_by_id(plane: &PlaneCtx, part: &IncidencePartition, id: MatrixId) -> BitMatrix {
    match id {
        MatrixId::A => part.full.clone(),
        MatrixId::A22 => part.block(2, 2).clone(),
        MatrixId::A23 => part.block(2, 3).clone(),
        MatrixId::A32 => part.block(3, 2).clone(),
        MatrixId::A33 => part.block(3, 3).clone(),
        MatrixId::B => build_b(plane),
    }
}

#[must_use]
pub fn code_dim(plane: &PlaneCtx, part: &IncidencePartition, id: MatrixId) -> CodeReport {
    let m = matrix_by_id(plane, part, id);
    let rank = m.rank();
    CodeReport { q: plane.q(), matrix: id, n: m.cols(), k: m.cols() - rank, rank }
}

#[must_use]
pub fn code_dims(plane: &PlaneCtx) -> Vec<CodeReport> {
    let part = IncidencePartition::build(plane);
    [MatrixId::A22, MatrixId::A23, MatrixId::A32, MatrixId::A33]
        .into_iter()
        .map(|id| code_dim(plane, &part, id))
        .collect()
}

/// Subspace facts about Im(φ) = row space of B and Ker(φ) = null space of B.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumReport {
    pub e: usize,
    pub rank_b: usize,
    pub nullity_b: usize,
    pub im_ker_intersection: usize,
    /// Row space of C equals the null space of B.
    pub rowspace_c_is_kernel: bool,
    pub rank_d: usize,
    /// q ≡ 1 mod 4 only: Ĵ lies outside the row space of D.
    pub j_outside_rowspace_d: Option<bool>,
    /// q ≡ 1 mod 4 only: Ker = ⟨Ĵ⟩ ⊕ rowspace(D).
    pub kernel_splits: Option<bool>,
}

impl DirectSumReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.rank_b + self.nullity_b == self.e
            && self.im_ker_intersection == 0
            && self.rowspace_c_is_kernel
            && self.j_outside_rowspace_d.unwrap_or(true)
            && self.kernel_splits.unwrap_or(true)
    }
}

pub fn direct_sum_checks(plane: &PlaneCtx) -> Result<DirectSumReport> {
    let b = build_b(plane);
    let n = b.rows();
    let im = b.row_space_basis();
    let ker = b.nullspace_basis();
    let c = b.pow(4)?.add(&BitMatrix::identity(n))?;
    let d = c.add(&BitMatrix::all_ones(n))?;
    let c_rows = c.row_space_basis();
    let rowspace_c_is_kernel = c_rows.len() == ker.len() && contained_in(&c_rows, &ker, n)?;
    let d_rows = d.row_space_basis();
    let (j_out, splits) = if plane.q() % 4 == 1 {
        let j = BitVec::from_indices(n, 0..n);
        let j_out = !contained_in(std::slice::from_ref(&j), &d_rows, n)?;
        let mut span = d_rows.clone();
        span.push(j);
        let splits = j_out && d_rows.len() + 1 == ker.len() && contained_in(&span, &ker, n)?;
        (Some(j_out), Some(splits))
    } else {
        (None, None)
    };
    Ok(DirectSumReport {
        e: n,
        rank_b: im.len(),
        nullity_b: ker.len(),
        im_ker_intersection: intersection_dim(&im, &ker, n)?,
        rowspace_c_is_kernel,
        rank_d: d_rows.len(),
        j_outside_rowspace_d: j_out,
        kernel_splits: splits,
    })
}

/// Tally of one parity case: how many configurations were tested and how many broke the rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCase {
    pub lemma: String,
    pub case: String,
    pub expected: String,
    pub tested: usize,
    pub violations: usize,
}

impl ParityCase {
    fn new(lemma: &str, case: &str, expected: &str) -> Self {
        ParityCase { lemma: lemma.into(), case: case.into(), expected: expected.into(), tested: 0, violations: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.tested += 1;
        if !ok {
            self.violations += 1;
        }
    }
}

/// |Se_E(P,ℓ)| for P ∈ E, ℓ ∈ Se, P ∉ ℓ.
#[must_use]
pub fn se_e_count(plane: &PlaneCtx, p: usize, l: usize) -> usize {
    plane
        .lines_through_point(p)
        .iter()
        .filter(|&&m| plane.line_class(m) == LineClass::Secant)
        .filter(|&&m| plane.point_class(plane.meet(m, l)) == PointClass::External)
        .count()
}

/// Exhaustive parity checks of |Se_E(P,ℓ)| and |N_E(P1) ∩ N_E(P2)|.
pub fn parity_checks(plane: &PlaneCtx) -> Result<Vec<ParityCase>> {
    let q = plane.q();
    let pm1 = matches!(q % 8, 1 | 7);
    let ext = Externals::new(plane);
    let mut tangent_pos =
        ParityCase::new("intersection", "P on a tangent through the pole of l", if pm1 { "odd" } else { "even" });
    let mut other_pos = ParityCase::new("intersection", "P on a secant or passant through the pole of l", "even");
    for l in plane.lines_of(LineClass::Secant) {
        let pole = plane.polar_of_line(l);
        for &p in &ext.points {
            if p == pole || plane.points_on_line(l).contains(&p) {
                continue;
            }
            let odd = se_e_count(plane, p, l) % 2 == 1;
            if plane.line_class(plane.join(p, pole)) == LineClass::Tangent {
                tangent_pos.record(odd == pm1);
            } else {
                other_pos.record(!odd);
            }
        }
    }
    let sets: Vec<BitVec> =
        ext.points.iter().map(|&p| neighbor_sets(plane, &ext, p).map(|s| s.n_e)).collect::<Result<_>>()?;
    let mut pa = ParityCase::new("intersection2", "joining line passant", "even");
    let mut se = ParityCase::new("intersection2", "joining line secant", "odd");
    let mut t = ParityCase::new("intersection2", "joining line tangent", if pm1 { "odd" } else { "even" });
    for i in 0..ext.len() {
        for j in 0..ext.len() {
            if i == j {
                continue;
            }
            let common = sets[i].words().iter().zip(sets[j].words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            let odd = common % 2 == 1;
            match plane.line_class(plane.join(ext.points[i], ext.points[j])) {
                LineClass::Passant => pa.record(!odd),
                LineClass::Secant => se.record(odd),
                LineClass::Tangent => t.record(odd == pm1),
            }
        }
    }
    Ok(vec![tangent_pos, other_pos, pa, se, t])
}

/// MacKay alist text for a matrix.
#[must_use]
pub fn to_alist(m: &BitMatrix) -> String {
    let (rows, cols) = (m.rows(), m.cols());
    let col_sets: Vec<Vec<usize>> = (0..cols).map(|c| (0..rows).filter(|&r| m.get(r, c)).collect()).collect();
    let row_sets: Vec<Vec<usize>> = (0..rows).map(|r| m.row(r).ones().collect()).collect();
    let join = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
    let degs = |s: &[Vec<usize>]| s.iter().map(|x| x.len().to_string()).collect::<Vec<_>>().join(" ");
    let max = |s: &[Vec<usize>]| s.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("{cols} {rows}\n"));
    out.push_str(&format!("{} {}\n", max(&col_sets), max(&row_sets)));
    out.push_str(&degs(&col_sets));
    out.push('\n');
    out.push_str(&degs(&row_sets));
    out.push('\n');
    for s in &col_sets {
        out.push_str(&join(s));
        out.push('\n');
    }
    for s in &row_sets {
        out.push_str(&join(s));
        out.push('\n');
    }
    out
}

/// Parses alist text; the per-row section is checked against the per-column one.
pub fn from_alist(text: &str) -> Result<BitMatrix> {
    let bad = |m: &str| Error::Parse(m.to_string());
    let mut lines = text.lines();
    let mut nums = |what: &str| -> Result<Vec<usize>> {
        let line = lines.next().ok_or_else(|| bad(&format!("missing {what}")))?;
        line.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad number in {what}")))).collect()
    };
    let header = nums("header")?;
    let [cols, rows] = header[..] else {
        return Err(bad("header must have two numbers"));
    };
    nums("max degrees")?;
    let col_deg = nums("column degrees")?;
    let row_deg = nums("row degrees")?;
    if col_deg.len() != cols || row_deg.len() != rows {
        return Err(bad("degree list length"));
    }
    let mut m = BitMatrix::zeros(rows, cols);
    for (c, &deg) in col_deg.iter().enumerate() {
        let idx = nums("column entries")?;
        let idx: Vec<usize> = idx.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != deg {
            return Err(bad("column degree mismatch"));
        }
        for r in idx {
            if r > rows {
                return Err(bad("row index out of range"));
            }
            m.set(r - 1, c, true);
        }
    }
    for (r, &deg) in row_deg.iter().enumerate() {
        let idx = nums("row entries")?;
        let idx: Vec<usize> = idx.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != deg || idx.iter().any(|&c| c == 0 || c > cols || !m.get(r, c - 1)) {
            return Err(bad("row section disagrees with column section"));
        }
    }
    Ok(m)
}

/// Writes the alist form of a matrix to a file.
pub fn export_alist(m: &BitMatrix, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, to_alist(m)).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn plane(q: u64) -> PlaneCtx {
        PlaneCtx::build(FieldCtx::from_order(q, None).unwrap())
    }

    #[test]
    fn partition_shapes() {
        let p = plane(5);
        let part = IncidencePartition::build(&p);
        assert_eq!((part.block(3, 3).rows(), part.block(3, 3).cols()), (15, 15));
        assert_eq!((part.block(2, 2).rows(), part.block(2, 2).cols()), (10, 10));
        assert_eq!((part.block(2, 3).rows(), part.block(2, 3).cols()), (10, 15));
        assert_eq!(part.reassemble(), part.full);
        for r in 0..part.full.rows() {
            assert_eq!(part.full.row_weight(r), 6);
        }
    }

    #[test]
    fn b_is_symmetric_with_zero_diagonal() {
        for q in [5u64, 7, 9, 11, 13] {
            let p = plane(q);
            let b = build_b(&p);
            assert_eq!(b, b.transpose());
            for i in 0..b.rows() {
                assert!(!b.get(i, i));
                assert_eq!(b.row_weight(i), (q as usize - 1) / 2);
            }
        }
    }

    #[test]
    fn b_is_a33_up_to_row_permutation() {
        for q in [5u64, 7, 9] {
            let p = plane(q);
            let part = IncidencePartition::build(&p);
            let a33 = part.block(3, 3);
            let b = build_b(&p);
            let ext = Externals::new(&p);
            let perm: Vec<usize> = ext
                .points
                .iter()
                .map(|&pt| {
                    let l = p.polar_of_point(pt);
                    part.row_labels[2].iter().position(|&x| x == l).unwrap()
                })
                .collect();
            assert_eq!(a33.select_rows(&perm), b);
        }
    }

    #[test]
    fn power_identity_examples() {
        let t = |q| {
            let r = verify_power_identity(&plane(q)).unwrap();
            (r.b5_ok, r.b3_eq)
        };
        assert_eq!(t(5), (true, true));
        assert_eq!(t(7), (true, false));
        assert_eq!(t(9), (true, false));
    }

    #[test]
    fn neighbor_set_sizes() {
        for (q, size) in [(13u64, 30usize), (7, 7), (5, 2), (9, 12), (11, 21)] {
            let p = plane(q);
            let ext = Externals::new(&p);
            for &pt in &ext.points {
                let ns = neighbor_sets(&p, &ext, pt).unwrap();
                assert_eq!(ns.n_e.weight(), size, "q={q}");
            }
        }
        let p = plane(5);
        let ext = Externals::new(&p);
        let ns = neighbor_sets(&p, &ext, ext.points[0]).unwrap();
        assert_eq!(ns.n_a.weight(), 3);
        let internal = p.points_of(PointClass::Internal)[0];
        assert!(neighbor_sets(&p, &ext, internal).is_err());
    }

    #[test]
    fn b4_rows_and_c_rows() {
        for q in [5u64, 7, 9, 11, 13, 17] {
            assert_eq!(b4_row_mismatches(&plane(q)).unwrap(), (0, 0), "q={q}");
        }
    }

    #[test]
    fn c_plus_d_is_j_and_b4_rows_even() {
        for q in [5u64, 9, 13] {
            let p = plane(q);
            let c = build_c(&p).unwrap();
            let d = build_d(&p).unwrap();
            assert_eq!(c.add(&d).unwrap(), BitMatrix::all_ones(c.rows()));
            let b4 = build_b(&p).pow(4).unwrap();
            for r in 0..b4.rows() {
                assert_eq!(b4.row_weight(r) % 2, 0);
            }
        }
        let p = plane(5);
        assert_eq!(build_c(&p).unwrap().rank(), 5);
    }

    #[test]
    fn dims_examples() {
        for (q, k) in [(5u64, 5usize), (7, 8), (9, 17)] {
            let p = plane(q);
            let a33 = code_dims(&p).into_iter().find(|c| c.matrix == MatrixId::A33).unwrap();
            assert_eq!(a33.k, k);
            assert_eq!(expected_dim_a33(q as u32), k);
        }
    }

    #[test]
    fn direct_sum_examples() {
        let r = direct_sum_checks(&plane(5)).unwrap();
        assert_eq!((r.rank_b, r.nullity_b, r.im_ker_intersection), (10, 5, 0));
        assert!(r.pass());
        let r = direct_sum_checks(&plane(9)).unwrap();
        assert_eq!((r.nullity_b, r.rank_d), (17, 16));
        assert!(r.pass());
        let r = direct_sum_checks(&plane(7)).unwrap();
        assert_eq!(r.im_ker_intersection, 0);
        assert!(r.pass());
    }

    #[test]
    fn parity_examples() {
        for q in [5u64, 7, 9, 11, 13] {
            let cases = parity_checks(&plane(q)).unwrap();
            for c in &cases {
                assert_eq!(c.violations, 0, "q={q} {c:?}");
            }
        }
        let cases = parity_checks(&plane(7)).unwrap();
        assert_eq!(cases[0].expected, "odd");
        assert!(cases[0].tested > 0);
        let cases = parity_checks(&plane(11)).unwrap();
        assert_eq!(cases[4].expected, "even");
    }

    #[test]
    fn alist_round_trip() {
        let p = plane(5);
        let part = IncidencePartition::build(&p);
        let a33 = part.block(3, 3);
        let text = to_alist(a33);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("15 15"));
        assert_eq!(lines.next(), Some("2 2"));
        assert_eq!(lines.next().unwrap(), vec!["2"; 15].join(" "));
        assert_eq!(&from_alist(&text).unwrap(), a33);
        let m = BitMatrix::from_fn(3, 5, |r, c| (r + c) % 3 == 0);
        assert_eq!(from_alist(&to_alist(&m)).unwrap(), m);
        assert!(from_alist("2 2\n").is_err());
    }
}
