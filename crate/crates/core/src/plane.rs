//! PG(2,q) with the conic X1² − X0·X2 = 0, its polarity, and the
//! three-way classifications of points and lines.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, SquareClass};

/// Homogeneous point (a0, a1, a2), first nonzero coordinate equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint(pub [FieldElem; 3]);

/// Homogeneous line [b0, b1, b2], first nonzero coordinate equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjLine(pub [FieldElem; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointClass {
    Internal,
    Absolute,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineClass {
    Passant,
    Tangent,
    Secant,
}

/// A 3×3 matrix over GF(q), acting on row vectors from the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat3(pub [[FieldElem; 3]; 3]);

impl Mat3 {
    #[must_use]
    pub fn identity() -> Self {
        let (o, z) = (FieldElem::ONE, FieldElem::ZERO);
        Mat3([[o, z, z], [z, o, z], [z, z, o]])
    }

    #[must_use]
    pub fn mul(&self, f: &FieldCtx, other: &Mat3) -> Mat3 {
        let mut out = [[FieldElem::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut s = FieldElem::ZERO;
                for k in 0..3 {
                    s = f.add(s, f.mul(self.0[i][k], other.0[k][j]));
                }
                *cell = s;
            }
        }
        Mat3(out)
    }

    #[must_use]
    pub fn det(&self, f: &FieldCtx) -> FieldElem {
        let m = &self.0;
        let t = |a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem| f.sub(f.mul(a, b), f.mul(c, d));
        let c0 = f.mul(m[0][0], t(m[1][1], m[2][2], m[1][2], m[2][1]));
        let c1 = f.mul(m[0][1], t(m[1][0], m[2][2], m[1][2], m[2][0]));
        let c2 = f.mul(m[0][2], t(m[1][0], m[2][1], m[1][1], m[2][0]));
        f.add(f.sub(c0, c1), c2)
    }

    #[must_use]
    pub fn trace(&self, f: &FieldCtx) -> FieldElem {
        f.add(f.add(self.0[0][0], self.0[1][1]), self.0[2][2])
    }

    pub fn inverse(&self, f: &FieldCtx) -> Result<Mat3> {
        let d = self.det(f);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let di = f.inv(d);
        let m = &self.0;
        let mut out = [[FieldElem::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                // cofactor of (j, i)
                let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
                let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
                let minor = f.sub(f.mul(m[r[0]][c[0]], m[r[1]][c[1]]), f.mul(m[r[0]][c[1]], m[r[1]][c[0]]));
                let signed = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
                *cell = f.mul(signed, di);
            }
        }
        Ok(Mat3(out))
    }

    /// Scales so that the first nonzero entry is 1 (projective normal form).
    #[must_use]
    pub fn normalized(&self, f: &FieldCtx) -> Mat3 {
        let lead = self.0.iter().flatten().copied().find(|x| !x.is_zero());
        match lead {
            None => *self,
            Some(l) => {
                let li = f.inv(l);
                let mut out = self.0;
                for x in out.iter_mut().flatten() {
                    *x = f.mul(*x, li);
                }
                Mat3(out)
            }
        }
    }

    /// Diagonal matrix.
    #[must_use]
    pub fn diag(a: FieldElem, b: FieldElem, c: FieldElem) -> Mat3 {
        let z = FieldElem::ZERO;
        Mat3([[a, z, z], [z, b, z], [z, z, c]])
    }
}

/// Scales a nonzero triple so its first nonzero coordinate is 1.
#[must_use]
pub fn normalize(f: &FieldCtx, t: [FieldElem; 3]) -> Option<[FieldElem; 3]> {
    let lead = t.iter().copied().find(|x| !x.is_zero())?;
    let li = f.inv(lead);
    Some([f.mul(t[0], li), f.mul(t[1], li), f.mul(t[2], li)])
}

fn dot(f: &FieldCtx, a: &[FieldElem; 3], b: &[FieldElem; 3]) -> FieldElem {
    f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
}

fn cross(f: &FieldCtx, a: &[FieldElem; 3], b: &[FieldElem; 3]) -> [FieldElem; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

/// Point/line counts per class, in the order used by the incidence tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub internal: usize,
    pub absolute: usize,
    pub external: usize,
    pub passant: usize,
    pub tangent: usize,
    pub secant: usize,
}

impl Census {
    /// Class sizes for the conic in PG(2,q).
    #[must_use]
    pub fn expected(q: u32) -> Self {
        let q = q as usize;
        Census {
            internal: q * (q - 1) / 2,
            absolute: q + 1,
            external: q * (q + 1) / 2,
            passant: q * (q - 1) / 2,
            tangent: q + 1,
            secant: q * (q + 1) / 2,
        }
    }
}

/// One row of an incidence-table verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub name: String,
    pub expected: (usize, usize, usize),
    pub objects: usize,
    pub mismatches: usize,
}

impl TableRow {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

/// The plane, its ordered points and lines, and all classification data.
#[derive(Clone, Debug)]
pub struct PlaneCtx {
    field: FieldCtx,
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
    point_index: HashMap<ProjPoint, usize>,
    line_index: HashMap<ProjLine, usize>,
    point_class: Vec<PointClass>,
    line_class: Vec<LineClass>,
    conic: Vec<usize>,
    points_on_line: Vec<Vec<usize>>,
    lines_through_point: Vec<Vec<usize>>,
    polar_of_point: Vec<usize>,
    polar_of_line: Vec<usize>,
}

fn all_normalized(f: &FieldCtx) -> Vec<[FieldElem; 3]> {
    let els: Vec<FieldElem> = f.elements().collect();
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let mut out = vec![[z, z, o]];
    for &c in &els {
        out.push([z, o, c]);
    }
    for &b in &els {
        for &c in &els {
            out.push([o, b, c]);
        }
    }
    out.sort();
    out
}

impl PlaneCtx {
    #[must_use]
    pub fn build(field: FieldCtx) -> Self {
        let f = &field;
        let triples = all_normalized(f);
        let points: Vec<ProjPoint> = triples.iter().map(|&t| ProjPoint(t)).collect();
        let lines: Vec<ProjLine> = triples.iter().map(|&t| ProjLine(t)).collect();
        let point_index: HashMap<ProjPoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let line_index: HashMap<ProjLine, usize> = lines.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let point_class: Vec<PointClass> = points.iter().map(|p| classify_point(f, p)).collect();
        let line_class: Vec<LineClass> = lines.iter().map(|l| classify_line(f, l)).collect();
        let n = points.len();
        let mut points_on_line = vec![Vec::new(); n];
        let mut lines_through_point = vec![Vec::new(); n];
        for (li, l) in lines.iter().enumerate() {
            for (pi, p) in points.iter().enumerate() {
                if dot(f, &p.0, &l.0).is_zero() {
                    points_on_line[li].push(pi);
                    lines_through_point[pi].push(li);
                }
            }
        }
        let polar_of_point: Vec<usize> = points.iter().map(|p| line_index[&polarity_point(f, p)]).collect();
        let polar_of_line: Vec<usize> = lines.iter().map(|l| point_index[&polarity_line(f, l)]).collect();
        let conic = (0..n).filter(|&i| point_class[i] == PointClass::Absolute).collect();
        PlaneCtx {
            field,
            points,
            lines,
            point_index,
            line_index,
            point_class,
            line_class,
            conic,
            points_on_line,
            lines_through_point,
            polar_of_point,
            polar_of_line,
        }
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
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    #[must_use]
    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }
    #[must_use]
    pub fn conic(&self) -> &[usize] {
        &self.conic
    }
    #[must_use]
    pub fn point_class(&self, i: usize) -> PointClass {
        self.point_class[i]
    }
    #[must_use]
    pub fn line_class(&self, i: usize) -> LineClass {
        self.line_class[i]
    }
    #[must_use]
    pub fn point_index(&self, p: &ProjPoint) -> Option<usize> {
        self.point_index.get(p).copied()
    }
    #[must_use]
    pub fn line_index(&self, l: &ProjLine) -> Option<usize> {
        self.line_index.get(l).copied()
    }
    #[must_use]
    pub fn points_on_line(&self, l: usize) -> &[usize] {
        &self.points_on_line[l]
    }
    #[must_use]
    pub fn lines_through_point(&self, p: usize) -> &[usize] {
        &self.lines_through_point[p]
    }
    /// Index of the polar line P^⊥.
    #[must_use]
    pub fn polar_of_point(&self, p: usize) -> usize {
        self.polar_of_point[p]
    }
    /// Index of the pole of a line.
    #[must_use]
    pub fn polar_of_line(&self, l: usize) -> usize {
        self.polar_of_line[l]
    }

    /// Point indices of a class, in canonical order.
    #[must_use]
    pub fn points_of(&self, c: PointClass) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.point_class[i] == c).collect()
    }

    /// Line indices of a class, in canonical order.
    #[must_use]
    pub fn lines_of(&self, c: LineClass) -> Vec<usize> {
        (0..self.lines.len()).filter(|&i| self.line_class[i] == c).collect()
    }

    #[must_use]
    pub fn census(&self) -> Census {
        let pc = |c| self.point_class.iter().filter(|&&x| x == c).count();
        let lc = |c| self.line_class.iter().filter(|&&x| x == c).count();
        Census {
            internal: pc(PointClass::Internal),
            absolute: pc(PointClass::Absolute),
            external: pc(PointClass::External),
            passant: lc(LineClass::Passant),
            tangent: lc(LineClass::Tangent),
            secant: lc(LineClass::Secant),
        }
    }

    #[must_use]
    pub fn incident(&self, p: &ProjPoint, l: &ProjLine) -> bool {
        incident(&self.field, p, l)
    }

    /// Index of the line through two distinct points.
    #[must_use]
    pub fn join(&self, a: usize, b: usize) -> usize {
        let t = cross(&self.field, &self.points[a].0, &self.points[b].0);
        let t = normalize(&self.field, t).expect("distinct points");
        self.line_index[&ProjLine(t)]
    }

    /// Index of the common point of two distinct lines.
    #[must_use]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let t = cross(&self.field, &self.lines[a].0, &self.lines[b].0);
        let t = normalize(&self.field, t).expect("distinct lines");
        self.point_index[&ProjPoint(t)]
    }

    /// Image of point index under a matrix (row-vector action).
    #[must_use]
    pub fn act_point_idx(&self, g: &Mat3, p: usize) -> usize {
        self.point_index[&act_point_unchecked(&self.field, g, &self.points[p])]
    }

    /// Image of line index given the inverse matrix of the acting element.
    #[must_use]
    pub fn act_line_idx_with_inverse(&self, g_inv: &Mat3, l: usize) -> usize {
        self.line_index[&act_line_with_inverse(&self.field, g_inv, &self.lines[l])]
    }

    /// Counts of (absolute, external, internal) points on every line, checked
    /// against the tangent/secant/passant profiles, then the dual count of
    /// (tangent, secant, passant) lines through every point.
    #[must_use]
    pub fn verify_incidence_tables(&self) -> Vec<TableRow> {
        let q = self.q() as usize;
        let mut rows = Vec::new();
        let line_expect = |c: LineClass| match c {
            LineClass::Tangent => (1, q, 0),
            LineClass::Secant => (2, (q - 1) / 2, (q - 1) / 2),
            LineClass::Passant => (0, q.div_ceil(2), q.div_ceil(2)),
        };
        for (c, name) in [
            (LineClass::Tangent, "table1_tangent"),
            (LineClass::Secant, "table1_secant"),
            (LineClass::Passant, "table1_passant"),
        ] {
            let idx = self.lines_of(c);
            let expected = line_expect(c);
            let mismatches = idx
                .iter()
                .filter(|&&l| {
                    let mut t = (0, 0, 0);
                    for &p in &self.points_on_line[l] {
                        match self.point_class[p] {
                            PointClass::Absolute => t.0 += 1,
                            PointClass::External => t.1 += 1,
                            PointClass::Internal => t.2 += 1,
                        }
                    }
                    t != expected
                })
                .count();
            rows.push(TableRow { name: name.into(), expected, objects: idx.len(), mismatches });
        }
        let point_expect = |c: PointClass| match c {
            PointClass::Absolute => (1, q, 0),
            PointClass::External => (2, (q - 1) / 2, (q - 1) / 2),
            PointClass::Internal => (0, q.div_ceil(2), q.div_ceil(2)),
        };
        for (c, name) in [
            (PointClass::Absolute, "table2_absolute"),
            (PointClass::External, "table2_external"),
            (PointClass::Internal, "table2_internal"),
        ] {
            let idx = self.points_of(c);
            let expected = point_expect(c);
            let mismatches = idx
                .iter()
                .filter(|&&p| {
                    let mut t = (0, 0, 0);
                    for &l in &self.lines_through_point[p] {
                        match self.line_class[l] {
                            LineClass::Tangent => t.0 += 1,
                            LineClass::Secant => t.1 += 1,
                            LineClass::Passant => t.2 += 1,
                        }
                    }
                    t != expected
                })
                .count();
            rows.push(TableRow { name: name.into(), expected, objects: idx.len(), mismatches });
        }
        rows
    }

    /// Class of P^⊥ ∩ ℓ for a non-conic point P on a non-tangent line ℓ.
    pub fn perp_meet_class(&self, p: usize, l: usize) -> Result<PointClass> {
        if self.point_class[p] == PointClass::Absolute {
            return Err(Error::InvalidArgument("point lies on the conic".into()));
        }
        if self.line_class[l] == LineClass::Tangent {
            return Err(Error::InvalidArgument("line is a tangent".into()));
        }
        if !self.points_on_line[l].contains(&p) {
            return Err(Error::InvalidArgument("point is not on the line".into()));
        }
        let perp = self.polar_of_point[p];
        if perp == l {
            return Err(Error::InvalidArgument("line is the polar of the point".into()));
        }
        Ok(self.point_class[self.meet(perp, l)])
    }
}

/// The class predicted for P^⊥ ∩ ℓ by the q mod 4 case table.
#[must_use]
pub fn expected_meet_class(q: u32, p: PointClass, l: LineClass) -> Option<PointClass> {
    use PointClass::{External as E, Internal as I};
    let one = q % 4 == 1;
    match (p, l) {
        (PointClass::Internal, LineClass::Passant) => Some(if one { E } else { I }),
        (PointClass::Internal, LineClass::Secant) => Some(if one { I } else { E }),
        (PointClass::External, LineClass::Passant) => Some(if one { I } else { E }),
        (PointClass::External, LineClass::Secant) => Some(if one { E } else { I }),
        _ => None,
    }
}

#[must_use]
pub fn incident(f: &FieldCtx, p: &ProjPoint, l: &ProjLine) -> bool {
    dot(f, &p.0, &l.0).is_zero()
}

#[must_use]
pub fn classify_point(f: &FieldCtx, p: &ProjPoint) -> PointClass {
    let [a0, a1, a2] = p.0;
    match f.is_square(f.sub(f.mul(a1, a1), f.mul(a0, a2))) {
        SquareClass::NonSquare => PointClass::Internal,
        SquareClass::Zero => PointClass::Absolute,
        SquareClass::Square => PointClass::External,
    }
}

#[must_use]
pub fn classify_line(f: &FieldCtx, l: &ProjLine) -> LineClass {
    let [b0, b1, b2] = l.0;
    let four = f.from_int(4);
    match f.is_square(f.sub(f.mul(b1, b1), f.mul(four, f.mul(b0, b2)))) {
        SquareClass::NonSquare => LineClass::Passant,
        SquareClass::Zero => LineClass::Tangent,
        SquareClass::Square => LineClass::Secant,
    }
}

/// (x, y, z) ↦ [z, −2y, x].
#[must_use]
pub fn polarity_point(f: &FieldCtx, p: &ProjPoint) -> ProjLine {
    let [x, y, z] = p.0;
    let t = [z, f.mul(f.from_int(-2), y), x];
    ProjLine(normalize(f, t).expect("nonzero"))
}

/// [b0, b1, b2] ↦ (b0, b1, b2)·M⁻¹ = (−2b2, b1, −2b0).
#[must_use]
pub fn polarity_line(f: &FieldCtx, l: &ProjLine) -> ProjPoint {
    let [b0, b1, b2] = l.0;
    let m2 = f.from_int(-2);
    ProjPoint(normalize(f, [f.mul(m2, b2), b1, f.mul(m2, b0)]).expect("nonzero"))
}

fn act_point_unchecked(f: &FieldCtx, g: &Mat3, p: &ProjPoint) -> ProjPoint {
    let mut out = [FieldElem::ZERO; 3];
    for (j, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            *o = f.add(*o, f.mul(p.0[i], g.0[i][j]));
        }
    }
    ProjPoint(normalize(f, out).expect("invertible action"))
}

fn act_line_with_inverse(f: &FieldCtx, g_inv: &Mat3, l: &ProjLine) -> ProjLine {
    let mut out = [FieldElem::ZERO; 3];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..3 {
            *o = f.add(*o, f.mul(g_inv.0[i][j], l.0[j]));
        }
    }
    ProjLine(normalize(f, out).expect("invertible action"))
}

/// P ↦ P·g.
pub fn act_point(f: &FieldCtx, g: &Mat3, p: &ProjPoint) -> Result<ProjPoint> {
    if g.det(f).is_zero() {
        return Err(Error::Singular);
    }
    Ok(act_point_unchecked(f, g, p))
}

/// ℓ ↦ g⁻¹·ℓᵀ.
pub fn act_line(f: &FieldCtx, g: &Mat3, l: &ProjLine) -> Result<ProjLine> {
    let inv = g.inverse(f)?;
    Ok(act_line_with_inverse(f, &inv, l))
}
