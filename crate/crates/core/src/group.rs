//! The conic group H ≅ PSL(2,q) and its overgroup G = H ∪ d·H ≅ PGL(2,q),
//! with d = diag(1, ξ⁻¹, ξ⁻²), acting on points and lines of the plane.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::prime_divisors;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, SquareClass};
use crate::plane::{LineClass, Mat3, PlaneCtx, PointClass};

/// Largest q for which full enumeration is allowed by default.
pub const DEFAULT_GUARD: u32 = 31;

/// A 2×2 matrix (a, b; c, d) stored row-major.
pub type Sl2 = [FieldElem; 4];

/// Conjugacy class of H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    D,
    FPlus,
    FMinus,
    Theta(u32),
    Zero,
    Pi(u32),
}

/// Conjugacy class of G restricted to H: F⁺ and F⁻ fuse into [4].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GClass {
    D,
    Four,
    Theta(u32),
    Zero,
    Pi(u32),
}

impl ClassLabel {
    #[must_use]
    pub fn g_class(self) -> GClass {
        match self {
            ClassLabel::D => GClass::D,
            ClassLabel::FPlus | ClassLabel::FMinus => GClass::Four,
            ClassLabel::Theta(l) => GClass::Theta(l),
            ClassLabel::Zero => GClass::Zero,
            ClassLabel::Pi(k) => GClass::Pi(k),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::D => f.write_str("D"),
            ClassLabel::FPlus => f.write_str("F+"),
            ClassLabel::FMinus => f.write_str("F-"),
            ClassLabel::Theta(l) => write!(f, "theta_{l}"),
            ClassLabel::Zero => f.write_str("[0]"),
            ClassLabel::Pi(k) => write!(f, "pi_{k}"),
        }
    }
}

impl fmt::Display for GClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GClass::D => f.write_str("D"),
            GClass::Four => f.write_str("[4]"),
            GClass::Theta(l) => write!(f, "theta_{l}"),
            GClass::Zero => f.write_str("[0]"),
            GClass::Pi(k) => write!(f, "pi_{k}"),
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for GClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Number of [θ] classes.
#[must_use]
pub fn theta_count(q: u32) -> u32 {
    if q % 4 == 1 {
        (q - 5) / 4
    } else {
        (q - 3) / 4
    }
}

/// Number of [π] classes.
#[must_use]
pub fn pi_count(q: u32) -> u32 {
    if q % 4 == 1 {
        (q - 1) / 4
    } else {
        (q - 3) / 4
    }
}

/// All class labels of H in table order.
#[must_use]
pub fn class_labels(q: u32) -> Vec<ClassLabel> {
    let mut v = vec![ClassLabel::D, ClassLabel::FPlus, ClassLabel::FMinus];
    v.extend((1..=theta_count(q)).map(ClassLabel::Theta));
    v.push(ClassLabel::Zero);
    v.extend((1..=pi_count(q)).map(ClassLabel::Pi));
    v
}

/// Class size as given by the character-table size row.
#[must_use]
pub fn expected_class_size(q: u32, c: ClassLabel) -> usize {
    let q = q as usize;
    match c {
        ClassLabel::D => 1,
        ClassLabel::FPlus | ClassLabel::FMinus => (q * q - 1) / 2,
        ClassLabel::Theta(_) => q * (q + 1),
        ClassLabel::Zero if q % 4 == 1 => q * (q + 1) / 2,
        ClassLabel::Zero => q * (q - 1) / 2,
        ClassLabel::Pi(_) => q * (q - 1),
    }
}

/// |H| = q(q²−1)/2.
#[must_use]
pub fn group_order(q: u32) -> usize {
    let q = q as usize;
    q * (q * q - 1) / 2
}

#[must_use]
pub fn det2(f: &FieldCtx, g: &Sl2) -> FieldElem {
    f.sub(f.mul(g[0], g[3]), f.mul(g[1], g[2]))
}

#[must_use]
pub fn mul2(f: &FieldCtx, x: &Sl2, y: &Sl2) -> Sl2 {
    [
        f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
        f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
        f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
        f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
    ]
}

/// Representative of ±g whose first nonzero entry has discrete log below (q−1)/2.
#[must_use]
pub fn normalize_pm(f: &FieldCtx, g: &Sl2) -> Sl2 {
    let lead = g.iter().copied().find(|x| !x.is_zero()).expect("nonzero matrix");
    if f.in_lower_half(lead) {
        *g
    } else {
        g.map(|x| f.neg(x))
    }
}

/// Scalar multiple of g whose first nonzero entry is 1.
#[must_use]
pub fn normalize_scalar(f: &FieldCtx, g: &Sl2) -> Sl2 {
    let lead = g.iter().copied().find(|x| !x.is_zero()).expect("nonzero matrix");
    let li = f.inv(lead);
    g.map(|x| f.mul(x, li))
}

/// The symmetric-square image τ(a,b,c,d) acting on row vectors.
#[must_use]
pub fn tau(f: &FieldCtx, g: &Sl2) -> Mat3 {
    let [a, b, c, d] = *g;
    let two = f.from_int(2);
    Mat3([
        [f.mul(a, a), f.mul(a, b), f.mul(b, b)],
        [f.mul(two, f.mul(a, c)), f.add(f.mul(a, d), f.mul(b, c)), f.mul(two, f.mul(b, d))],
        [f.mul(c, c), f.mul(c, d), f.mul(d, d)],
    ])
}

/// τ with a nonsingularity check.
pub fn tau_checked(f: &FieldCtx, g: &Sl2) -> Result<Mat3> {
    if det2(f, g).is_zero() {
        return Err(Error::Singular);
    }
    Ok(tau(f, g))
}

/// T(g) = (a+d)².
#[must_use]
pub fn trace_invariant(f: &FieldCtx, g: &Sl2) -> FieldElem {
    let t = f.add(g[0], g[3]);
    f.mul(t, t)
}

/// GF(q²) = GF(q)[x]/(x² − ξ), elements as (u, v) meaning u + v·x.
struct Quadratic<'a> {
    f: &'a FieldCtx,
}

impl Quadratic<'_> {
    fn mul(&self, a: (FieldElem, FieldElem), b: (FieldElem, FieldElem)) -> (FieldElem, FieldElem) {
        let f = self.f;
        (f.add(f.mul(a.0, b.0), f.mul(f.xi(), f.mul(a.1, b.1))), f.add(f.mul(a.0, b.1), f.mul(a.1, b.0)))
    }

    fn pow(&self, mut a: (FieldElem, FieldElem), mut n: u64) -> (FieldElem, FieldElem) {
        let mut r = (FieldElem::ONE, FieldElem::ZERO);
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            n >>= 1;
        }
        r
    }

    /// Least primitive element, scanning u + v·x by (v, u).
    fn primitive(&self) -> (FieldElem, FieldElem) {
        let q = u64::from(self.f.q());
        let order = q * q - 1;
        let primes = prime_divisors(order);
        let one = (FieldElem::ONE, FieldElem::ZERO);
        for v in self.f.elements() {
            for u in self.f.elements() {
                let a = (u, v);
                if (u, v) == (FieldElem::ZERO, FieldElem::ZERO) {
                    continue;
                }
                if primes.iter().all(|&r| self.pow(a, order / r) != one) {
                    return a;
                }
            }
        }
        unreachable!("GF(q²)* is cyclic")
    }
}

/// The values t_k = ν^k + ν^{−k}, k = 1..=pi_count, with ν of order q+1 in GF(q²).
#[must_use]
pub fn pi_traces(f: &FieldCtx) -> Vec<FieldElem> {
    let ext = Quadratic { f };
    let q = u64::from(f.q());
    let omega = ext.primitive();
    let nu = ext.pow(omega, q - 1);
    (1..=u64::from(pi_count(f.q())))
        .map(|k| {
            // ν^k has norm 1, so ν^k + ν^{−k} = 2·Re(ν^k)
            let z = ext.pow(nu, k);
            f.add(z.0, z.0)
        })
        .collect()
}

/// Class data of H.
#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub label: ClassLabel,
    pub size: usize,
    /// Element index of the canonical representative.
    pub rep: usize,
    pub order: u32,
    /// T(g) on the class.
    #[serde(skip)]
    pub t: FieldElem,
}

/// An element of H in both forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupElem {
    pub sl2: Sl2,
    pub m3: Mat3,
}

/// H ≅ PSL(2,q) with its conjugacy classes.
#[derive(Clone, Debug)]
pub struct GroupCtx {
    field: FieldCtx,
    elems: Vec<GroupElem>,
    index: HashMap<Sl2, usize>,
    class_of: Vec<usize>,
    classes: Vec<ClassInfo>,
    generators: Vec<usize>,
    coset_rep: Sl2,
}

impl GroupCtx {
    /// Enumerates H with the default guard.
    pub fn build(f: &FieldCtx) -> Result<Self> {
        Self::build_with_guard(f, DEFAULT_GUARD)
    }

    pub fn build_with_guard(f: &FieldCtx, guard: u32) -> Result<Self> {
        let q = f.q();
        if q > guard {
            return Err(Error::GroupGuard { q, guard });
        }
        let els: Vec<FieldElem> = f.elements().collect();
        let mut sl2s = Vec::with_capacity(group_order(q));
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    if a.is_zero() {
                        // a = 0 forces bc = −1
                        if !b.is_zero() && f.mul(b, c) == f.neg(FieldElem::ONE) {
                            for &d in &els {
                                let g = [a, b, c, d];
                                if normalize_pm(f, &g) == g {
                                    sl2s.push(g);
                                }
                            }
                        }
                    } else {
                        let d = f.div(f.add(FieldElem::ONE, f.mul(b, c)), a);
                        let g = [a, b, c, d];
                        if normalize_pm(f, &g) == g {
                            sl2s.push(g);
                        }
                    }
                }
            }
        }
        sl2s.sort();
        let elems: Vec<GroupElem> = sl2s.iter().map(|g| GroupElem { sl2: *g, m3: tau(f, g) }).collect();
        let index: HashMap<Sl2, usize> = sl2s.iter().enumerate().map(|(i, g)| (*g, i)).collect();

        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let mut generators = Vec::new();
        for i in 0..f.e() {
            let mut c = vec![0u32; f.e() as usize];
            c[i as usize] = 1;
            let b = f.from_coeffs(&c)?;
            generators.push(index[&normalize_pm(f, &[o, b, z, o])]);
            generators.push(index[&normalize_pm(f, &[o, z, b, o])]);
        }

        let mut ctx = GroupCtx {
            field: f.clone(),
            elems,
            index,
            class_of: Vec::new(),
            classes: Vec::new(),
            generators,
            coset_rep: [o, z, z, f.inv(f.xi())],
        };
        ctx.classify_all()?;
        Ok(ctx)
    }

    fn classify_all(&mut self) -> Result<()> {
        let f = self.field.clone();
        let q = f.q();
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let labels = class_labels(q);
        let mut reps: BTreeMap<ClassLabel, Sl2> = BTreeMap::new();
        reps.insert(ClassLabel::D, [o, z, z, o]);
        reps.insert(ClassLabel::FPlus, [o, z, o, o]);
        reps.insert(ClassLabel::FMinus, [o, z, f.xi(), o]);
        reps.insert(ClassLabel::Zero, [z, f.neg(o), o, z]);
        for l in 1..=theta_count(q) {
            let t = f.exp(i64::from(l));
            reps.insert(ClassLabel::Theta(l), [t, z, z, f.inv(t)]);
        }
        for (k, t) in pi_traces(&f).into_iter().enumerate() {
            reps.insert(ClassLabel::Pi(k as u32 + 1), [t, f.neg(o), o, z]);
        }
        let mut by_t: HashMap<FieldElem, ClassLabel> = HashMap::new();
        for (&label, g) in &reps {
            if matches!(label, ClassLabel::Theta(_) | ClassLabel::Pi(_))
                && by_t.insert(trace_invariant(&f, g), label).is_some()
            {
                return Err(Error::InvalidArgument("class invariants collide".into()));
            }
        }
        let fplus = self.conjugacy_orbit(self.index[&normalize_pm(&f, &reps[&ClassLabel::FPlus])]);
        let fminus = self.conjugacy_orbit(self.index[&normalize_pm(&f, &reps[&ClassLabel::FMinus])]);
        let four = f.from_int(4);
        let identity = self.index[&[o, z, z, o]];
        let mut class_of = vec![0usize; self.elems.len()];
        let pos: HashMap<ClassLabel, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        for (i, e) in self.elems.iter().enumerate() {
            let t = trace_invariant(&f, &e.sl2);
            let label = if i == identity {
                ClassLabel::D
            } else if t.is_zero() {
                ClassLabel::Zero
            } else if t == four {
                if fplus.contains(&i) {
                    ClassLabel::FPlus
                } else if fminus.contains(&i) {
                    ClassLabel::FMinus
                } else {
                    return Err(Error::InvalidArgument("unipotent outside F+ and F-".into()));
                }
            } else {
                *by_t.get(&t).ok_or_else(|| Error::InvalidArgument("unlabelled class invariant".into()))?
            };
            class_of[i] = pos[&label];
        }
        self.class_of = class_of;
        let mut sizes = vec![0usize; labels.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        self.classes = labels
            .iter()
            .enumerate()
            .map(|(ci, &label)| {
                let g = normalize_pm(&f, &reps[&label]);
                let rep = self.index[&g];
                ClassInfo { label, size: sizes[ci], rep, order: self.element_order(rep), t: trace_invariant(&f, &g) }
            })
            .collect();
        for c in &self.classes {
            if self.classes[self.class_of[c.rep]].label != c.label {
                return Err(Error::InvalidArgument(format!("representative of {} misplaced", c.label)));
            }
        }
        Ok(())
    }

    /// Conjugacy class of an element, by breadth-first conjugation with the generators.
    fn conjugacy_orbit(&self, start: usize) -> HashSet<usize> {
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &s in &self.generators {
                let y = self.conj(x, s);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    #[must_use]
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    #[must_use]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[must_use]
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[must_use]
    pub fn elements(&self) -> &[GroupElem] {
        &self.elems
    }

    #[must_use]
    pub fn element(&self, i: usize) -> &GroupElem {
        &self.elems[i]
    }

    /// Index of a matrix of determinant 1, or `NotInGroup`.
    pub fn index_of(&self, g: &Sl2) -> Result<usize> {
        if det2(&self.field, g) != FieldElem::ONE {
            return Err(Error::NotInGroup);
        }
        self.index.get(&normalize_pm(&self.field, g)).copied().ok_or(Error::NotInGroup)
    }

    #[must_use]
    pub fn identity(&self) -> usize {
        self.index[&[FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE]]
    }

    #[must_use]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let g = mul2(&self.field, &self.elems[a].sl2, &self.elems[b].sl2);
        self.index[&normalize_pm(&self.field, &g)]
    }

    #[must_use]
    pub fn inv(&self, a: usize) -> usize {
        let f = &self.field;
        let [a0, b0, c0, d0] = self.elems[a].sl2;
        self.index[&normalize_pm(f, &[d0, f.neg(b0), f.neg(c0), a0])]
    }

    /// s⁻¹ x s.
    #[must_use]
    pub fn conj(&self, x: usize, s: usize) -> usize {
        self.mul(self.mul(self.inv(s), x), s)
    }

    #[must_use]
    pub fn element_order(&self, a: usize) -> u32 {
        let id = self.identity();
        let mut x = a;
        let mut n = 1;
        while x != id {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Generators x(b), y(b) for b running over the polynomial basis.
    #[must_use]
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[must_use]
    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    /// Position of the class of an element in `classes()`.
    #[must_use]
    pub fn class_index(&self, i: usize) -> usize {
        self.class_of[i]
    }

    #[must_use]
    pub fn class_label(&self, i: usize) -> ClassLabel {
        self.classes[self.class_of[i]].label
    }

    /// Class of an arbitrary determinant-1 matrix.
    pub fn classify_element(&self, g: &Sl2) -> Result<ClassLabel> {
        Ok(self.class_label(self.index_of(g)?))
    }

    #[must_use]
    pub fn position_of(&self, label: ClassLabel) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// The G-classes met by H, in table order.
    #[must_use]
    pub fn g_classes(&self) -> Vec<GClass> {
        let mut v: Vec<GClass> = self.classes.iter().map(|c| c.label.g_class()).collect();
        v.dedup();
        v
    }

    /// For each H-class position, the position of its G-class in `g_classes()`.
    #[must_use]
    pub fn g_class_positions(&self) -> Vec<usize> {
        let gc = self.g_classes();
        self.classes.iter().map(|c| gc.iter().position(|&x| x == c.label.g_class()).expect("listed")).collect()
    }

    /// d⁻¹ h d for the coset representative d of G over H.
    #[must_use]
    pub fn conj_by_coset_rep(&self, h: usize) -> usize {
        let f = &self.field;
        let [a, b, c, d] = self.elems[h].sl2;
        let s = self.coset_rep[3];
        // d = diag(1, s): d⁻¹ (a b; c d) d = (a, b·s; c/s, d)
        self.index[&normalize_pm(f, &[a, f.mul(b, s), f.div(c, s), d])]
    }

    /// g⁻¹ h g for g ∈ G.
    #[must_use]
    pub fn conj_g(&self, h: usize, g: GElem) -> usize {
        if g.coset {
            self.conj(self.conj_by_coset_rep(h), g.h)
        } else {
            self.conj(h, g.h)
        }
    }

    /// 3×3 matrix of the coset representative.
    #[must_use]
    pub fn coset_rep_m3(&self) -> Mat3 {
        tau(&self.field, &self.coset_rep)
    }

    /// All elements of G.
    pub fn g_elements(&self) -> impl Iterator<Item = GElem> + '_ {
        (0..2 * self.order()).map(move |i| GElem { coset: i >= self.order(), h: i % self.order() })
    }

    /// 3×3 matrix of an element of G.
    #[must_use]
    pub fn g_matrix(&self, g: GElem) -> Mat3 {
        if g.coset {
            self.coset_rep_m3().mul(&self.field, &self.elems[g.h].m3)
        } else {
            self.elems[g.h].m3
        }
    }
}

/// An element of G: h or d·h.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GElem {
    pub coset: bool,
    pub h: usize,
}

/// Every element of PGL(2,q) as a scalar-normalized 2×2 matrix, with whether its determinant is a square.
#[must_use]
pub fn enumerate_pgl2(f: &FieldCtx) -> Vec<(Sl2, bool)> {
    let els: Vec<FieldElem> = f.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    let g = [a, b, c, d];
                    let det = det2(f, &g);
                    if det.is_zero() || normalize_scalar(f, &g) != g {
                        continue;
                    }
                    out.push((g, f.is_square(det) == SquareClass::Square));
                }
            }
        }
    }
    out
}

/// Point and line permutations of every element of H, plus those of the coset representative.
#[derive(Clone, Debug)]
pub struct ActionTables {
    n: usize,
    order: usize,
    h_points: Vec<u16>,
    h_lines: Vec<u16>,
    d_points: Vec<u16>,
    d_lines: Vec<u16>,
}

impl ActionTables {
    pub fn build(group: &GroupCtx, plane: &PlaneCtx) -> Result<Self> {
        let n = plane.points().len();
        if n > usize::from(u16::MAX) {
            return Err(Error::InvalidArgument("plane too large for action tables".into()));
        }
        let f = plane.field();
        let perms = |m: &Mat3| -> Result<(Vec<u16>, Vec<u16>)> {
            let inv = m.inverse(f)?;
            let pts = (0..n).map(|p| plane.act_point_idx(m, p) as u16).collect();
            let lns = (0..n).map(|l| plane.act_line_idx_with_inverse(&inv, l) as u16).collect();
            Ok((pts, lns))
        };
        let chunks: Vec<(Vec<u16>, Vec<u16>)> =
            group.elements().par_iter().map(|e| perms(&e.m3)).collect::<Result<_>>()?;
        let (d_points, d_lines) = perms(&group.coset_rep_m3())?;
        let mut h_points = Vec::with_capacity(n * group.order());
        let mut h_lines = Vec::with_capacity(n * group.order());
        for (p, l) in chunks {
            h_points.extend(p);
            h_lines.extend(l);
        }
        Ok(ActionTables { n, order: group.order(), h_points, h_lines, d_points, d_lines })
    }

    #[must_use]
    pub fn point(&self, h: usize, p: usize) -> usize {
        usize::from(self.h_points[h * self.n + p])
    }

    #[must_use]
    pub fn line(&self, h: usize, l: usize) -> usize {
        usize::from(self.h_lines[h * self.n + l])
    }

    #[must_use]
    pub fn g_point(&self, g: GElem, p: usize) -> usize {
        let p = if g.coset { usize::from(self.d_points[p]) } else { p };
        self.point(g.h, p)
    }

    #[must_use]
    pub fn g_line(&self, g: GElem, l: usize) -> usize {
        let l = if g.coset { usize::from(self.d_lines[l]) } else { l };
        self.line(g.h, l)
    }

    /// All elements of G.
    pub fn g_elements(&self) -> impl Iterator<Item = GElem> + '_ {
        (0..2 * self.order).map(move |i| GElem { coset: i >= self.order, h: i % self.order })
    }
}

/// Stabilizer data of one external point.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub point: usize,
    pub stab_g: usize,
    pub stab_h: usize,
    /// |Stab_H(P) ∩ C| per H-class, in table order.
    pub profile: Vec<(ClassLabel, usize)>,
}

/// |Stab_H(P) ∩ C| as stated for external points.
#[must_use]
pub fn expected_stabilizer_count(q: u32, c: ClassLabel) -> usize {
    match c {
        ClassLabel::D => 1,
        ClassLabel::Zero if q % 4 == 1 => (q as usize).div_ceil(2),
        ClassLabel::Zero => (q as usize - 1) / 2,
        ClassLabel::Theta(_) => 2,
        ClassLabel::FPlus | ClassLabel::FMinus | ClassLabel::Pi(_) => 0,
    }
}

impl StabilizerReport {
    #[must_use]
    pub fn pass(&self, q: u32) -> bool {
        self.stab_g == 2 * (q as usize - 1)
            && self.stab_h == q as usize - 1
            && self.profile.iter().all(|&(c, n)| n == expected_stabilizer_count(q, c))
    }
}

pub fn stabilizer(group: &GroupCtx, tables: &ActionTables, plane: &PlaneCtx, p: usize) -> Result<StabilizerReport> {
    if plane.point_class(p) != PointClass::External {
        return Err(Error::InvalidArgument("stabilizer requires an external point".into()));
    }
    let stab_g = tables.g_elements().filter(|&g| tables.g_point(g, p) == p).count();
    let mut counts = vec![0usize; group.classes().len()];
    for h in 0..group.order() {
        if tables.point(h, p) == p {
            counts[group.class_index(h)] += 1;
        }
    }
    Ok(StabilizerReport {
        point: p,
        stab_g,
        stab_h: counts.iter().sum(),
        profile: group.classes().iter().map(|c| c.label).zip(counts).collect(),
    })
}

/// Size of a G-orbit against the size of the set it should fill.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitRow {
    pub set: String,
    pub orbit: usize,
    pub size: usize,
}

/// Transitivity and point-stabilizer facts.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub g_orbits: Vec<OrbitRow>,
    /// External points whose stabilizer K passed every transitivity and Stab_K check.
    pub k_points_checked: usize,
    pub k_failures: usize,
    /// Orbit sizes of K on the external, internal and conic points of P^⊥ for the first external point.
    pub k_orbit_sizes_first: [usize; 3],
}

impl OrbitReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.g_orbits.iter().all(|r| r.orbit == r.size) && self.k_failures == 0
    }
}

fn orbit_of<F: Fn(GElem, usize) -> usize>(elems: &[GElem], act: F, start: usize) -> HashSet<usize> {
    elems.iter().map(|&g| act(g, start)).collect()
}

/// Checks on transitivity of G and of each K = Stab_G(P) for external P.
pub fn orbit_checks(group: &GroupCtx, tables: &ActionTables, plane: &PlaneCtx) -> Result<OrbitReport> {
    let q = plane.q() as usize;
    let all: Vec<GElem> = group.g_elements().collect();
    let mut g_orbits = Vec::new();
    for (name, set) in [
        ("E", plane.points_of(PointClass::External)),
        ("I", plane.points_of(PointClass::Internal)),
        ("O", plane.points_of(PointClass::Absolute)),
    ] {
        let orbit = orbit_of(&all, |g, p| tables.g_point(g, p), set[0]);
        let ok = orbit.iter().all(|p| set.contains(p));
        g_orbits.push(OrbitRow { set: name.into(), orbit: if ok { orbit.len() } else { 0 }, size: set.len() });
    }
    for (name, set) in [
        ("Se", plane.lines_of(LineClass::Secant)),
        ("Pa", plane.lines_of(LineClass::Passant)),
        ("T", plane.lines_of(LineClass::Tangent)),
    ] {
        let orbit = orbit_of(&all, |g, l| tables.g_line(g, l), set[0]);
        let ok = orbit.iter().all(|l| set.contains(l));
        g_orbits.push(OrbitRow { set: name.into(), orbit: if ok { orbit.len() } else { 0 }, size: set.len() });
    }

    let ext = plane.points_of(PointClass::External);
    let results: Vec<(bool, [usize; 3])> = ext
        .par_iter()
        .map(|&p| {
            let k: Vec<GElem> = all.iter().copied().filter(|&g| tables.g_point(g, p) == p).collect();
            let mut ok = k.len() == 2 * (q - 1);
            let polar = plane.polar_of_point(p);
            let on_polar = plane.points_on_line(polar);
            let mut sizes = [0usize; 3];
            for (slot, class) in
                [PointClass::External, PointClass::Internal, PointClass::Absolute].into_iter().enumerate()
            {
                let set: Vec<usize> = on_polar.iter().copied().filter(|&r| plane.point_class(r) == class).collect();
                let orbit = orbit_of(&k, |g, r| tables.g_point(g, r), set[0]);
                sizes[slot] = orbit.len();
                ok &= orbit.len() == set.len() && orbit.iter().all(|r| set.contains(r));
                for &r in &set {
                    let stab = k.iter().filter(|&&g| tables.g_point(g, r) == r).count();
                    let expect = if class == PointClass::Absolute { q - 1 } else { 4 };
                    ok &= stab == expect;
                }
            }
            ok &= k.iter().all(|&g| tables.g_line(g, polar) == polar);
            for class in [LineClass::Passant, LineClass::Secant, LineClass::Tangent] {
                let set: Vec<usize> =
                    plane.lines_through_point(p).iter().copied().filter(|&l| plane.line_class(l) == class).collect();
                let orbit = orbit_of(&k, |g, l| tables.g_line(g, l), set[0]);
                ok &= orbit.len() == set.len() && orbit.iter().all(|l| set.contains(l));
            }
            (ok, sizes)
        })
        .collect();
    Ok(OrbitReport {
        g_orbits,
        k_points_checked: results.len(),
        k_failures: results.iter().filter(|r| !r.0).count(),
        k_orbit_sizes_first: results.first().map_or([0; 3], |r| r.1),
    })
}

/// Incidence preservation and (P^⊥)^g = (P^g)^⊥ under G.
#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub exhaustive: bool,
    pub cases: usize,
    pub incidence_failures: usize,
    pub polarity_failures: usize,
}

impl EquivarianceReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.incidence_failures == 0 && self.polarity_failures == 0
    }
}

/// Checks every (g, P, ℓ) when `samples` is `None`, otherwise that many
/// triples drawn by a fixed multiplicative scramble.
#[must_use]
pub fn equivariance_checks(tables: &ActionTables, plane: &PlaneCtx, samples: Option<usize>) -> EquivarianceReport {
    let all: Vec<GElem> = tables.g_elements().collect();
    let (np, nl) = (plane.points().len(), plane.lines().len());
    let check = |g: GElem, p: usize, l: usize| -> (bool, bool) {
        let on = plane.points_on_line(l).contains(&p);
        let (pg, lg) = (tables.g_point(g, p), tables.g_line(g, l));
        let inc = on == plane.points_on_line(lg).contains(&pg);
        let pol = tables.g_line(g, plane.polar_of_point(p)) == plane.polar_of_point(pg)
            && tables.g_point(g, plane.polar_of_line(l)) == plane.polar_of_line(lg);
        (inc, pol)
    };
    let results: Vec<(bool, bool)> = match samples {
        None => all
            .par_iter()
            .flat_map_iter(|&g| (0..np).flat_map(move |p| (0..nl).map(move |l| (g, p, l))))
            .map(|(g, p, l)| check(g, p, l))
            .collect(),
        Some(n) => (0..n as u64)
            .into_par_iter()
            .map(|t| {
                let x = t.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(29) ^ t;
                let g = all[(x % all.len() as u64) as usize];
                let p = ((x >> 16) % np as u64) as usize;
                let l = ((x >> 40) % nl as u64) as usize;
                check(g, p, l)
            })
            .collect(),
    };
    EquivarianceReport {
        exhaustive: samples.is_none(),
        cases: results.len(),
        incidence_failures: results.iter().filter(|r| !r.0).count(),
        polarity_failures: results.iter().filter(|r| !r.1).count(),
    }
}

/// H_{P,Q} = {h : (P^⊥)^h is a secant through Q}, by direct definition.
#[must_use]
pub fn h_set(tables: &ActionTables, group: &GroupCtx, plane: &PlaneCtx, p: usize, q: usize) -> Vec<usize> {
    let polar = plane.polar_of_point(p);
    (0..group.order())
        .filter(|&h| {
            let l = tables.line(h, polar);
            plane.line_class(l) == LineClass::Secant && plane.lines_through_point(q).contains(&l)
        })
        .collect()
}

/// S_{P,ℓ} = {h : (P^⊥)^h = ℓ}.
#[must_use]
pub fn s_set(tables: &ActionTables, group: &GroupCtx, plane: &PlaneCtx, p: usize, l: usize) -> Vec<usize> {
    let polar = plane.polar_of_point(p);
    (0..group.order()).filter(|&h| tables.line(h, polar) == l).collect()
}

/// U_{P,W} = {h : P^h ∈ W}.
#[must_use]
pub fn u_set(tables: &ActionTables, group: &GroupCtx, p: usize, w: &[usize]) -> Vec<usize> {
    let w: HashSet<usize> = w.iter().copied().collect();
    (0..group.order()).filter(|&h| w.contains(&tables.point(h, p))).collect()
}
