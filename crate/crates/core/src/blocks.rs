//! 2-blocks of H, their central idempotents over GF(2^k), the permutation
//! character on external points, and the block decomposition of Ker(φ).

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::v2;
use crate::chartable::{char_name, CharLabel, CharTable};
use crate::codes::{build_b, build_d, Externals};
use crate::error::{Error, Result};
use crate::gf2k::{Gf2k, Reduction};
use crate::group::{ActionTables, ClassLabel, GroupCtx};
use crate::linalg::BitVec;
use crate::twoadic::TwoAdic;
use crate::{CycInt, PlaneCtx};

/// Writes q∓1 = m·2^n, using q−1 when q ≡ 1 mod 4 and q+1 otherwise.
#[must_use]
pub fn two_split(q: u32) -> (u32, u32) {
    let base = if q % 4 == 1 { q - 1 } else { q + 1 };
    let n = base.trailing_zeros();
    (n, base >> n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Principal,
    DefectZero,
    /// Blocks of defect n−1.
    Intermediate,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockKind::Principal => "principal",
            BlockKind::DefectZero => "defect_zero",
            BlockKind::Intermediate => "intermediate",
        })
    }
}

impl Serialize for BlockKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Renders a GF(2^k) element: 0 and 1 in decimal, others as a hex bitmask.
#[must_use]
pub fn format_gf(a: u128) -> String {
    if a < 2 {
        a.to_string()
    } else {
        format!("{a:#x}")
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    pub id: usize,
    pub kind: BlockKind,
    /// Character positions in the table.
    pub members: Vec<usize>,
    pub defect: u32,
    /// e_B(Ĉ) per class in table order.
    pub idempotent: Vec<u128>,
}

/// Groups characters by the reductions of their central characters.
pub fn block_partition(table: &CharTable, red: &Reduction) -> Result<Vec<Vec<usize>>> {
    let sigs = (0..table.chars.len())
        .into_par_iter()
        .map(|chi| {
            (0..table.classes.len())
                .map(|c| table.omega(chi, c).and_then(|w| red.reduce(&w)))
                .collect::<Result<Vec<u128>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut keys: Vec<&Vec<u128>> = Vec::new();
    for (i, s) in sigs.iter().enumerate() {
        match keys.iter().position(|k| *k == s) {
            Some(j) => parts[j].push(i),
            None => {
                keys.push(s);
                parts.push(vec![i]);
            }
        }
    }
    Ok(parts)
}

/// v₂|H| minus the least 2-adic valuation of a member degree.
#[must_use]
pub fn defect(table: &CharTable, members: &[usize]) -> u32 {
    let top = v2(table.group_order() as u64);
    let low = members.iter().map(|&i| v2(table.chars[i].degree)).min().unwrap_or(top);
    top - low
}

/// e_B(Ĉ) = reduction of (1/|H|)·Σ_{χ∈B} χ(1)·χ(x_C⁻¹), evaluated 2-adically.
pub fn idempotent_coeffs(table: &CharTable, members: &[usize], ring: &TwoAdic) -> Result<Vec<u128>> {
    let v = v2(table.group_order() as u64);
    (0..table.classes.len())
        .map(|c| {
            let mut s = CycInt::zero(table.n);
            for &i in members {
                let ch = &table.chars[i];
                s = &s + &ch.values[c].conj().scale(&(ch.degree as i64));
            }
            // the odd part of |H| is 1 in the residue field
            ring.divide_and_reduce(&s, v)
        })
        .collect()
}

/// The 2-blocks of H with everything needed downstream.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    pub q: u32,
    pub table: CharTable,
    pub reduction: Reduction,
    pub blocks: Vec<Block>,
}

impl BlockSystem {
    pub fn build(table: CharTable) -> Result<Self> {
        let red = Reduction::new(table.n)?;
        Self::build_with(table, red)
    }

    pub fn build_with(table: CharTable, red: Reduction) -> Result<Self> {
        let ring = TwoAdic::new(&red, v2(table.group_order() as u64) + 1)?;
        let parts = block_partition(&table, &red)?;
        let trivial = table.char_position(CharLabel::Trivial);
        let blocks = parts
            .into_iter()
            .enumerate()
            .map(|(id, members)| {
                let d = defect(&table, &members);
                let kind = if members.iter().any(|&i| Some(i) == trivial) {
                    BlockKind::Principal
                } else if d == 0 {
                    BlockKind::DefectZero
                } else {
                    BlockKind::Intermediate
                };
                let idempotent = idempotent_coeffs(&table, &members, &ring)?;
                Ok(Block { id, kind, members, defect: d, idempotent })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockSystem { q: table.q, table, reduction: red, blocks })
    }

    #[must_use]
    pub fn field(&self) -> &Gf2k {
        &self.reduction.field
    }

    #[must_use]
    pub fn principal(&self) -> &Block {
        self.blocks.iter().find(|b| b.kind == BlockKind::Principal).expect("trivial character has a block")
    }

    #[must_use]
    pub fn member_names(&self, b: &Block) -> Vec<String> {
        b.members.iter().map(|&i| char_name(self.q, self.table.chars[i].label)).collect()
    }
}

/// Block sizes predicted from q∓1 = m·2^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedShape {
    pub principal: usize,
    pub defect_zero: usize,
    pub intermediate_count: usize,
    pub intermediate_size: usize,
    pub intermediate_defect: u32,
}

#[must_use]
pub fn expected_shape(q: u32) -> ExpectedShape {
    let (n, m) = two_split(q);
    ExpectedShape {
        principal: (1usize << (n - 2)) + 3,
        defect_zero: if q % 4 == 1 { (q as usize - 1) / 4 } else { (q as usize - 3) / 4 },
        intermediate_count: (m as usize - 1) / 2,
        intermediate_size: 1usize << (n - 1),
        intermediate_defect: n - 1,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub expected: ExpectedShape,
    pub principal: usize,
    pub defect_zero: usize,
    pub intermediate_sizes: Vec<usize>,
    pub intermediate_defects: Vec<u32>,
    /// Principal block holds 1, the Steinberg character, both half-degree characters, and otherwise only degree q±1.
    pub principal_members_ok: bool,
    /// Defect-0 blocks are singletons of degree q−1 (q ≡ 1 mod 4) or q+1.
    pub defect_zero_members_ok: bool,
    /// Same partition under a second prime above 2, when one exists.
    pub independent_of_prime: Option<bool>,
}

impl ShapeReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        let e = &self.expected;
        self.principal == e.principal
            && self.defect_zero == e.defect_zero
            && self.intermediate_sizes.len() == e.intermediate_count
            && self.intermediate_sizes.iter().all(|&s| s == e.intermediate_size)
            && self.intermediate_defects.iter().all(|&d| d == e.intermediate_defect)
            && self.principal_members_ok
            && self.defect_zero_members_ok
            && self.independent_of_prime != Some(false)
    }
}

pub fn shape_report(sys: &BlockSystem) -> Result<ShapeReport> {
    let q = sys.q;
    let t = &sys.table;
    let (pm_deg, d0_deg) = if q % 4 == 1 { (q as u64 + 1, q as u64 - 1) } else { (q as u64 - 1, q as u64 + 1) };
    let p = sys.principal();
    let labels: Vec<CharLabel> = p.members.iter().map(|&i| t.chars[i].label).collect();
    let principal_members_ok = [CharLabel::Trivial, CharLabel::Steinberg, CharLabel::Half(1), CharLabel::Half(2)]
        .iter()
        .all(|l| labels.contains(l))
        && p.members.iter().all(|&i| {
            let c = &t.chars[i];
            matches!(c.label, CharLabel::Trivial | CharLabel::Steinberg | CharLabel::Half(_)) || c.degree == pm_deg
        });
    let d0: Vec<&Block> = sys.blocks.iter().filter(|b| b.kind == BlockKind::DefectZero).collect();
    let defect_zero_members_ok = d0.iter().all(|b| b.members.len() == 1 && t.chars[b.members[0]].degree == d0_deg);
    let inter: Vec<&Block> = sys.blocks.iter().filter(|b| b.kind == BlockKind::Intermediate).collect();
    let independent_of_prime = match Reduction::alternate_exponent(t.n) {
        Some(j) => {
            let alt = block_partition(t, &Reduction::with_exponent(t.n, j)?)?;
            let mine: Vec<Vec<usize>> = sys.blocks.iter().map(|b| b.members.clone()).collect();
            Some(sorted(alt) == sorted(mine))
        }
        None => None,
    };
    Ok(ShapeReport {
        expected: expected_shape(q),
        principal: p.members.len(),
        defect_zero: d0.len(),
        intermediate_sizes: inter.iter().map(|b| b.members.len()).collect(),
        intermediate_defects: inter.iter().map(|b| b.defect).collect(),
        principal_members_ok,
        defect_zero_members_ok,
        independent_of_prime,
    })
}

fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for p in &mut v {
        p.sort_unstable();
    }
    v.sort();
    v
}

/// Class multiplication constants of Z(FH) modulo 2, in table class order.
#[derive(Clone, Debug)]
pub struct ClassAlgebra {
    k: usize,
    consts: Vec<u8>,
}

impl ClassAlgebra {
    /// a_{ijl} = #{x ∈ C_i : x⁻¹·z_l ∈ C_j} mod 2 for a representative z_l of C_l.
    pub fn build(group: &GroupCtx, table: &CharTable) -> Result<Self> {
        let pos: Vec<usize> = group
            .classes()
            .iter()
            .map(|c| {
                table
                    .class_position(c.label)
                    .ok_or_else(|| Error::CharTable(format!("class {} missing from table", c.label)))
            })
            .collect::<Result<_>>()?;
        let k = table.classes.len();
        let mut consts = vec![0u8; k * k * k];
        for c in group.classes() {
            let l = pos[group.class_index(c.rep)];
            for x in 0..group.order() {
                let i = pos[group.class_index(x)];
                let j = pos[group.class_index(group.mul(group.inv(x), c.rep))];
                consts[(i * k + j) * k + l] ^= 1;
            }
        }
        Ok(ClassAlgebra { k, consts })
    }

    /// Product of two central elements given by class-sum coefficients.
    #[must_use]
    pub fn mul(&self, f: &Gf2k, a: &[u128], b: &[u128]) -> Vec<u128> {
        let k = self.k;
        let mut out = vec![0u128; k];
        for (i, &ai) in a.iter().enumerate().take(k) {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(k) {
                if bj == 0 {
                    continue;
                }
                let ab = f.mul(ai, bj);
                for (l, o) in out.iter_mut().enumerate() {
                    if self.consts[(i * k + j) * k + l] == 1 {
                        *o ^= ab;
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentReport {
    pub squares_ok: bool,
    pub orthogonal_ok: bool,
    pub sum_is_one: bool,
}

impl IdempotentReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.squares_ok && self.orthogonal_ok && self.sum_is_one
    }
}

/// e_B² = e_B, e_B·e_B' = 0 and Σ e_B = 1 in the class-sum basis.
#[must_use]
pub fn verify_idempotents(sys: &BlockSystem, alg: &ClassAlgebra) -> IdempotentReport {
    let f = sys.field();
    let k = sys.table.classes.len();
    let d = sys.table.class_position(ClassLabel::D).expect("identity class");
    let squares_ok = sys.blocks.par_iter().all(|b| alg.mul(f, &b.idempotent, &b.idempotent) == b.idempotent);
    let n = sys.blocks.len();
    let orthogonal_ok = (0..n).into_par_iter().all(|i| {
        (i + 1..n).all(|j| alg.mul(f, &sys.blocks[i].idempotent, &sys.blocks[j].idempotent).iter().all(|&x| x == 0))
    });
    let mut sum = vec![0u128; k];
    for b in &sys.blocks {
        for (s, &x) in sum.iter_mut().zip(&b.idempotent) {
            *s ^= x;
        }
    }
    let sum_is_one = sum.iter().enumerate().all(|(c, &x)| x == u128::from(c == d));
    IdempotentReport { squares_ok, orthogonal_ok, sum_is_one }
}

/// One determined coefficient e_B(Ĉ) with its predicted value.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub block: usize,
    pub kind: BlockKind,
    pub class: ClassLabel,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Every coefficient whose value is forced by the block type, plus e_B(F̂⁺) = e_B(F̂⁻).
#[must_use]
pub fn expression_checks(sys: &BlockSystem) -> Vec<CoefficientCheck> {
    let one_mod4 = sys.q % 4 == 1;
    let mut out = Vec::new();
    for b in &sys.blocks {
        let value = |c: ClassLabel| b.idempotent[sys.table.class_position(c).expect("class in table")];
        for &c in &sys.table.classes {
            let expected = match (b.kind, c) {
                (BlockKind::Principal, ClassLabel::D) => Some(1),
                (_, ClassLabel::D) => Some(0),
                (_, ClassLabel::Zero) => Some(0),
                (BlockKind::Principal, ClassLabel::Pi(_)) if one_mod4 => Some(1),
                (BlockKind::Principal, ClassLabel::Theta(_)) if !one_mod4 => Some(1),
                (BlockKind::Principal, _) => None,
                (_, ClassLabel::FPlus | ClassLabel::FMinus) => Some(1),
                (BlockKind::DefectZero, ClassLabel::Theta(_)) if one_mod4 => Some(0),
                (BlockKind::DefectZero, ClassLabel::Pi(_)) if !one_mod4 => Some(0),
                (BlockKind::Intermediate, ClassLabel::Pi(_)) if one_mod4 => Some(0),
                (BlockKind::Intermediate, ClassLabel::Theta(_)) if !one_mod4 => Some(0),
                _ => None,
            };
            if let Some(e) = expected {
                let a = value(c);
                out.push(CoefficientCheck {
                    block: b.id,
                    kind: b.kind,
                    class: c,
                    expected: e.to_string(),
                    actual: format_gf(a),
                    pass: a == e,
                });
            }
        }
        let (fp, fm) = (value(ClassLabel::FPlus), value(ClassLabel::FMinus));
        out.push(CoefficientCheck {
            block: b.id,
            kind: b.kind,
            class: ClassLabel::FMinus,
            expected: format!("e(F+) = {}", format_gf(fp)),
            actual: format_gf(fm),
            pass: fp == fm,
        });
    }
    out
}

/// Element orders per class, in table class order.
pub fn class_orders(group: &GroupCtx, table: &CharTable) -> Result<Vec<u32>> {
    table
        .classes
        .iter()
        .map(|&c| {
            group
                .position_of(c)
                .map(|i| group.classes()[i].order)
                .ok_or_else(|| Error::CharTable(format!("class {c} missing from group")))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SanityReport {
    /// (block, 2-regular class, 2-singular class) triples tested.
    pub wbo_tested: usize,
    pub wbo_failures: usize,
    pub p2_expected: i64,
    pub p2_actual: Option<i64>,
}

impl SanityReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.wbo_failures == 0 && self.p2_actual == Some(self.p2_expected)
    }
}

/// Predicted sum over principal-block characters of degree q±1 at an involution.
#[must_use]
pub fn p2_expected(q: u32) -> i64 {
    match q % 8 {
        1 => -2,
        7 => 2,
        _ => 0,
    }
}

/// Weak block orthogonality and the involution sum over the principal block.
#[must_use]
pub fn block_sanity(sys: &BlockSystem, orders: &[u32]) -> SanityReport {
    let t = &sys.table;
    let k = t.classes.len();
    let mut tested = 0;
    let mut failures = 0;
    for b in &sys.blocks {
        for h in (0..k).filter(|&c| orders[c] % 2 == 1) {
            for g in (0..k).filter(|&c| orders[c].is_multiple_of(2)) {
                let mut s = CycInt::zero(t.n);
                for &i in &b.members {
                    s = &s + &(&t.chars[i].values[h] * &t.chars[i].values[g].conj());
                }
                tested += 1;
                if !s.is_zero() {
                    failures += 1;
                }
            }
        }
    }
    let deg = if sys.q % 4 == 1 { u64::from(sys.q) + 1 } else { u64::from(sys.q) - 1 };
    let zero = t.class_position(ClassLabel::Zero).expect("involution class");
    let mut s = CycInt::zero(t.n);
    for &i in &sys.principal().members {
        if t.chars[i].degree == deg {
            s = &s + &t.chars[i].values[zero];
        }
    }
    SanityReport {
        wbo_tested: tested,
        wbo_failures: failures,
        p2_expected: p2_expected(sys.q),
        p2_actual: s.as_integer(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedRow {
    pub character: String,
    pub degree: u64,
    pub multiplicity: i64,
}

/// Constituents of the permutation character on external points.
#[derive(Clone, Debug, Serialize)]
pub struct InducedReport {
    pub rows: Vec<InducedRow>,
    pub degree_sum: u64,
    pub points: u64,
    /// Multiplicities of 1, the Steinberg character, the half-degree pair and the
    /// defect-zero family match the predicted pattern, and the remaining family
    /// has the predicted number of constituents.
    pub pattern_ok: bool,
}

impl InducedReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.pattern_ok && self.degree_sum == self.points && self.rows.iter().all(|r| r.multiplicity >= 0)
    }
}

/// ⟨1↑_K^H, χ⟩ = (1/|K|)·Σ_C |K∩C|·χ(x_C) from the class profile of K.
pub fn induced_decomposition(table: &CharTable, profile: &[(ClassLabel, usize)]) -> Result<InducedReport> {
    let q = table.q;
    let order: usize = profile.iter().map(|&(_, n)| n).sum();
    let mut mults = Vec::with_capacity(table.chars.len());
    for ch in &table.chars {
        let mut s = CycInt::zero(table.n);
        for &(c, n) in profile {
            if n == 0 {
                continue;
            }
            let pos = table.class_position(c).ok_or_else(|| Error::CharTable(format!("class {c} missing")))?;
            s = &s + &ch.values[pos].scale(&(n as i64));
        }
        let total = s
            .as_integer()
            .ok_or_else(|| Error::Integrality(format!("induced inner product with {} is irrational", ch.label)))?;
        if total % order as i64 != 0 {
            return Err(Error::Integrality(format!("induced inner product with {} is not integral", ch.label)));
        }
        mults.push(total / order as i64);
    }
    let mult_of = |l: CharLabel| table.char_position(l).map_or(0, |i| mults[i]);
    let family = |deg: u64| -> Vec<i64> {
        table
            .chars
            .iter()
            .zip(&mults)
            .filter(|(c, _)| c.degree == deg && c.label != CharLabel::Steinberg)
            .map(|(_, &m)| m)
            .collect()
    };
    let (qq, r8) = (q as i64, q % 8);
    let half = match r8 {
        1 | 3 => 1,
        _ => 0,
    };
    let (steinberg, d0_family, rest_family, rest_count) = match r8 {
        1 => (2, family(q as u64 - 1), family(q as u64 + 1), (qq - 9) / 4),
        5 => (2, family(q as u64 - 1), family(q as u64 + 1), (qq - 5) / 4),
        3 => (1, family(q as u64 + 1), family(q as u64 - 1), (qq - 3) / 4),
        _ => (1, family(q as u64 + 1), family(q as u64 - 1), (qq + 1) / 4),
    };
    let pattern_ok = mult_of(CharLabel::Trivial) == 1
        && mult_of(CharLabel::Steinberg) == steinberg
        && mult_of(CharLabel::Half(1)) == half
        && mult_of(CharLabel::Half(2)) == half
        && d0_family.iter().all(|&m| m == 1)
        && rest_family.iter().sum::<i64>() == rest_count;
    let rows: Vec<InducedRow> = table
        .chars
        .iter()
        .zip(&mults)
        .map(|(c, &m)| InducedRow { character: char_name(q, c.label), degree: c.degree, multiplicity: m })
        .collect();
    let degree_sum = rows.iter().map(|r| r.degree * r.multiplicity.max(0) as u64).sum();
    Ok(InducedReport { rows, degree_sum, points: u64::from(q) * u64::from(q + 1) / 2, pattern_ok })
}

/// |Stab_H(P) ∩ C| for every class, read off the action.
pub fn stabilizer_profile(group: &GroupCtx, tables: &ActionTables, p: usize) -> Vec<(ClassLabel, usize)> {
    let mut counts = vec![0usize; group.classes().len()];
    for h in 0..group.order() {
        if tables.point(h, p) == p {
            counts[group.class_index(h)] += 1;
        }
    }
    group.classes().iter().map(|c| c.label).zip(counts).collect()
}

/// Dimensions of e_B applied to F^E and to the three code spaces.
#[derive(Clone, Debug, Serialize)]
pub struct BlockDims {
    pub block: usize,
    pub kind: BlockKind,
    pub members: Vec<String>,
    pub full: usize,
    pub kernel: usize,
    pub image: usize,
    pub image_d: usize,
    /// Σ_{χ∈B} ⟨1↑,χ⟩·χ(1).
    pub induced_degree: u64,
    pub expected_kernel: usize,
    pub expected_image_zero: bool,
    pub expected_image_d_zero: bool,
}

impl BlockDims {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.kernel == self.expected_kernel
            && self.kernel + self.image == self.full
            && (!self.expected_image_zero || self.image == 0)
            && (!self.expected_image_d_zero || self.image_d == 0)
            && (self.kind != BlockKind::DefectZero || self.full as u64 == self.induced_degree)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub q: u32,
    pub points: usize,
    pub kernel_dim: usize,
    /// Rank of B over GF(2) and over GF(2^k).
    pub rank_gf2: usize,
    pub rank_extension: usize,
    pub expected_kernel_dim: usize,
    pub blocks: Vec<BlockDims>,
}

impl ModuleReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.rank_gf2 == self.rank_extension
            && self.kernel_dim == self.expected_kernel_dim
            && self.blocks.iter().map(|b| b.full).sum::<usize>() == self.points
            && self.blocks.iter().map(|b| b.kernel).sum::<usize>() == self.kernel_dim
            && self.blocks.iter().all(BlockDims::pass)
    }
}

/// (q−1)²/4 + 1 for q ≡ 1 mod 4 and (q−1)²/4 − 1 for q ≡ 3 mod 4.
#[must_use]
pub fn expected_kernel_dim(q: u32) -> usize {
    let base = (q as usize - 1).pow(2) / 4;
    if q % 4 == 1 {
        base + 1
    } else {
        base - 1
    }
}

/// Applies each e_B to F^E, Ker(φ), Im(φ) and Im(φ₂) and records ranks over GF(2^k).
pub fn block_module_dims(
    plane: &PlaneCtx,
    group: &GroupCtx,
    tables: &ActionTables,
    sys: &BlockSystem,
    induced: &InducedReport,
) -> Result<ModuleReport> {
    let q = sys.q;
    let ext = Externals::new(plane);
    let n = ext.len();
    let b = build_b(plane);
    let d = build_d(plane)?;
    let kernel = b.nullspace_basis();
    let image = b.row_space_basis();
    let image_d = d.row_space_basis();
    let f = sys.field();
    let b_rows: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| u128::from(b.get(i, j))).collect()).collect();
    let rank_extension = f.rank(&b_rows);

    let pos: Vec<usize> =
        group.classes().iter().map(|c| sys.table.class_position(c.label).expect("class in table")).collect();
    // images of every external point under every element of H
    let orbit: Vec<Vec<usize>> = ext
        .points
        .iter()
        .map(|&p| (0..group.order()).map(|h| ext.ordinal(tables.point(h, p)).expect("H preserves E")).collect())
        .collect();
    let class_of: Vec<usize> = (0..group.order()).map(|h| pos[group.class_index(h)]).collect();

    let induced_by_name: BTreeMap<&str, u64> =
        induced.rows.iter().map(|r| (r.character.as_str(), r.degree * r.multiplicity.max(0) as u64)).collect();
    let one_mod4 = q % 4 == 1;

    let blocks = sys
        .blocks
        .par_iter()
        .map(|blk| {
            let mut m = vec![vec![0u128; n]; n];
            for (pi, row) in orbit.iter().enumerate() {
                for (h, &qi) in row.iter().enumerate() {
                    m[pi][qi] ^= blk.idempotent[class_of[h]];
                }
            }
            let apply = |basis: &[BitVec]| -> usize {
                let rows: Vec<Vec<u128>> = basis
                    .iter()
                    .map(|v| {
                        let mut out = vec![0u128; n];
                        for i in v.ones() {
                            for (o, &x) in out.iter_mut().zip(&m[i]) {
                                *o ^= x;
                            }
                        }
                        out
                    })
                    .collect();
                f.rank(&rows)
            };
            let members = sys.member_names(blk);
            let induced_degree = members.iter().map(|c| induced_by_name.get(c.as_str()).copied().unwrap_or(0)).sum();
            let expected_kernel = match blk.kind {
                BlockKind::Principal if one_mod4 => 1,
                BlockKind::DefectZero if one_mod4 => q as usize - 1,
                BlockKind::DefectZero => q as usize + 1,
                _ => 0,
            };
            BlockDims {
                block: blk.id,
                kind: blk.kind,
                members,
                full: f.rank(&m),
                kernel: apply(&kernel),
                image: apply(&image),
                image_d: apply(&image_d),
                induced_degree,
                expected_kernel,
                expected_image_zero: blk.kind == BlockKind::DefectZero,
                expected_image_d_zero: one_mod4 && blk.kind != BlockKind::DefectZero,
            }
        })
        .collect();
    Ok(ModuleReport {
        q,
        points: n,
        kernel_dim: kernel.len(),
        rank_gf2: image.len(),
        rank_extension,
        expected_kernel_dim: expected_kernel_dim(q),
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::expected_stabilizer_count;
    use crate::FieldCtx;

    fn system(q: u32) -> BlockSystem {
        BlockSystem::build(CharTable::build(q).unwrap()).unwrap()
    }

    fn counts(sys: &BlockSystem) -> (usize, usize, Vec<usize>) {
        let s = shape_report(sys).unwrap();
        assert!(s.pass(), "q={}: {s:?}", sys.q);
        (s.principal, s.defect_zero, s.intermediate_sizes)
    }

    #[test]
    fn shapes() {
        assert_eq!(counts(&system(13)), (4, 3, vec![2]));
        assert_eq!(counts(&system(11)), (4, 2, vec![2]));
        assert_eq!(counts(&system(9)), (5, 2, vec![]));
        assert_eq!(counts(&system(17)), (7, 4, vec![]));
        for q in [5, 7, 19, 23, 25, 27] {
            counts(&system(q));
        }
    }

    #[test]
    fn defects() {
        let sys = system(13);
        let mut d: Vec<(BlockKind, u32)> = sys.blocks.iter().map(|b| (b.kind, b.defect)).collect();
        d.sort();
        assert_eq!(
            d,
            vec![
                (BlockKind::Principal, 2),
                (BlockKind::DefectZero, 0),
                (BlockKind::DefectZero, 0),
                (BlockKind::DefectZero, 0),
                (BlockKind::Intermediate, 1)
            ]
        );
    }

    #[test]
    fn idempotents_and_expression() {
        for q in [5, 7, 9, 11, 13] {
            let sys = system(q);
            let g = GroupCtx::build(&FieldCtx::from_order(u64::from(q), None).unwrap()).unwrap();
            let alg = ClassAlgebra::build(&g, &sys.table).unwrap();
            let r = verify_idempotents(&sys, &alg);
            assert!(r.pass(), "q={q}: {r:?}");
            let bad: Vec<_> = expression_checks(&sys).into_iter().filter(|c| !c.pass).collect();
            assert!(bad.is_empty(), "q={q}: {bad:?}");
            let s = block_sanity(&sys, &class_orders(&g, &sys.table).unwrap());
            assert!(s.pass(), "q={q}: {s:?}");
        }
    }

    #[test]
    fn p2_values() {
        for (q, v) in [(17, -2), (13, 0), (7, 2), (11, 0), (9, -2)] {
            let sys = system(q);
            let deg = if q % 4 == 1 { q as u64 + 1 } else { q as u64 - 1 };
            let zero = sys.table.class_position(ClassLabel::Zero).unwrap();
            let s = sys
                .principal()
                .members
                .iter()
                .filter(|&&i| sys.table.chars[i].degree == deg)
                .fold(CycInt::zero(sys.table.n), |acc, &i| &acc + &sys.table.chars[i].values[zero]);
            assert_eq!(s.as_integer(), Some(v), "q={q}");
        }
    }

    fn theoretical_profile(q: u32) -> Vec<(ClassLabel, usize)> {
        crate::group::class_labels(q).into_iter().map(|c| (c, expected_stabilizer_count(q, c))).collect()
    }

    #[test]
    fn induced() {
        for q in [5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31] {
            let t = CharTable::build(q).unwrap();
            let r = induced_decomposition(&t, &theoretical_profile(q)).unwrap();
            assert!(r.pass(), "q={q}: {r:?}");
        }
        let t = CharTable::build(13).unwrap();
        let r = induced_decomposition(&t, &theoretical_profile(13)).unwrap();
        let m: BTreeMap<_, _> = r.rows.iter().map(|r| (r.character.clone(), r.multiplicity)).collect();
        assert_eq!(m["gamma"], 2);
        assert_eq!((m["beta_1"], m["beta_2"]), (0, 0));
        assert_eq!((m["chi_1"], m["chi_2"], m["chi_3"]), (1, 1, 1));
        let phi: i64 = r.rows.iter().filter(|r| r.character.starts_with("phi")).map(|r| r.multiplicity * 14).sum();
        assert_eq!(phi, 28);
        let t = CharTable::build(17).unwrap();
        let r = induced_decomposition(&t, &theoretical_profile(17)).unwrap();
        assert!(r.rows.iter().filter(|r| r.character.starts_with("beta")).all(|r| r.multiplicity == 1));
    }

    #[test]
    fn module_dims() {
        for (q, kernels) in
            [(5, vec![1, 4]), (7, vec![8]), (9, vec![1, 8, 8]), (11, vec![12, 12]), (13, vec![1, 12, 12, 12])]
        {
            let field = FieldCtx::from_order(u64::from(q), None).unwrap();
            let plane = PlaneCtx::build(field.clone());
            let g = GroupCtx::build(&field).unwrap();
            let tables = ActionTables::build(&g, &plane).unwrap();
            let sys = system(q);
            let p = Externals::new(&plane).points[0];
            let induced = induced_decomposition(&sys.table, &stabilizer_profile(&g, &tables, p)).unwrap();
            let r = block_module_dims(&plane, &g, &tables, &sys, &induced).unwrap();
            assert!(r.pass(), "q={q}: {r:?}");
            let mut k: Vec<usize> = r.blocks.iter().map(|b| b.kernel).filter(|&d| d > 0).collect();
            k.sort_unstable();
            assert_eq!(k, kernels, "q={q}");
        }
    }
}
