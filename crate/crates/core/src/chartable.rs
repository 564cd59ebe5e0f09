//! The ordinary character table of H ≅ PSL(2,q) with exact cyclotomic values.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{lcm, prime_power};
use crate::cyclotomic::{gauss_period, quadratic_gauss_sum};
use crate::error::{Error, Result};
use crate::group::{class_labels, expected_class_size, group_order, pi_count, theta_count, ClassLabel};
use crate::CycInt;

/// Irreducible character names. `Half(1|2)` is β₁/β₂ for q ≡ 1 mod 4 and η₁/η₂ for q ≡ 3 mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharLabel {
    Trivial,
    Steinberg,
    Half(u8),
    Chi(u32),
    Phi(u32),
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Trivial => f.write_str("1"),
            CharLabel::Steinberg => f.write_str("gamma"),
            CharLabel::Half(i) => write!(f, "half_{i}"),
            CharLabel::Chi(s) => write!(f, "chi_{s}"),
            CharLabel::Phi(r) => write!(f, "phi_{r}"),
        }
    }
}

impl Serialize for CharLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Display name that distinguishes β (q ≡ 1 mod 4) from η (q ≡ 3 mod 4).
#[must_use]
pub fn char_name(q: u32, c: CharLabel) -> String {
    match c {
        CharLabel::Half(i) if q % 4 == 1 => format!("beta_{i}"),
        CharLabel::Half(i) => format!("eta_{i}"),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug)]
pub struct Character {
    pub label: CharLabel,
    pub degree: u64,
    pub values: Vec<CycInt>,
}

#[derive(Clone, Debug)]
pub struct CharTable {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    /// Order of the root of unity ζ_N hosting every value.
    pub n: u32,
    pub classes: Vec<ClassLabel>,
    pub class_sizes: Vec<usize>,
    pub chars: Vec<Character>,
}

/// N = lcm(q−1, q+1), times p when e is odd.
#[must_use]
pub fn root_order(q: u32) -> u32 {
    let (p, e) = prime_power(u64::from(q)).expect("prime power");
    let base = lcm(u64::from(q) - 1, u64::from(q) + 1) as u32;
    if e % 2 == 1 {
        base * p as u32
    } else {
        base
    }
}

fn sign(k: u64) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// (s ± √(s·q))/2 for s = ±1 with s·q ≡ 1 mod 4; `plus` picks the sign of the root.
fn half_root(n: u32, p: u32, e: u32, s: i64, plus: bool) -> CycInt {
    if e.is_multiple_of(2) {
        let r = i64::from(p).pow(e / 2);
        let v = if plus { s + r } else { s - r };
        return CycInt::from_int(n, v / 2);
    }
    let c = i64::from(p).pow((e - 1) / 2);
    // (s + g)/2 and (s − g)/2 are Gauss periods
    let (base_plus, base_minus) = if s == 1 {
        (-gauss_period::<i64>(n, p, false), -gauss_period::<i64>(n, p, true))
    } else {
        (gauss_period::<i64>(n, p, true), gauss_period::<i64>(n, p, false))
    };
    let g = quadratic_gauss_sum::<i64>(n, p);
    let extra = g.scale(&((c - 1) / 2));
    if plus {
        &base_plus + &extra
    } else {
        &base_minus - &extra
    }
}

impl CharTable {
    /// Builds the table and verifies both orthogonality relations.
    pub fn build(q: u32) -> Result<Self> {
        let t = Self::construct(q)?;
        let report = t.verify();
        if !report.pass() {
            return Err(Error::CharTable(format!("orthogonality fails at q={q}: {report:?}")));
        }
        Ok(t)
    }

    /// Builds the table without verification.
    pub fn construct(q: u32) -> Result<Self> {
        let (p, e) = prime_power(u64::from(q)).ok_or(Error::NotPrimePower(u64::from(q)))?;
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if q < 5 {
            return Err(Error::InvalidArgument("q must be at least 5".into()));
        }
        let (p, e) = (p as u32, e);
        let n = root_order(q);
        let classes = class_labels(q);
        let class_sizes = classes.iter().map(|&c| expected_class_size(q, c)).collect();
        let one = q % 4 == 1;
        let int = |v: i64| CycInt::from_int(n, v);
        let eps = |k: i64| CycInt::root(n, k * i64::from(n / (q - 1)));
        let del = |k: i64| CycInt::root(n, k * i64::from(n / (q + 1)));
        let qi = i64::from(q);
        let mut chars = Vec::new();

        let row = |f: &dyn Fn(ClassLabel) -> CycInt| classes.iter().map(|&c| f(c)).collect::<Vec<_>>();

        chars.push(Character { label: CharLabel::Trivial, degree: 1, values: row(&|_| int(1)) });
        chars.push(Character {
            label: CharLabel::Steinberg,
            degree: u64::from(q),
            values: row(&|c| match c {
                ClassLabel::D => int(qi),
                ClassLabel::FPlus | ClassLabel::FMinus => int(0),
                ClassLabel::Theta(_) => int(1),
                ClassLabel::Zero => int(if one { 1 } else { -1 }),
                ClassLabel::Pi(_) => int(-1),
            }),
        });
        let s = if one { 1 } else { -1 };
        for (idx, plus_at_fplus) in [(1u8, true), (2u8, false)] {
            let degree = if one { q.div_ceil(2) } else { (q - 1) / 2 };
            let at_plus = half_root(n, p, e, s, plus_at_fplus);
            let at_minus = half_root(n, p, e, s, !plus_at_fplus);
            chars.push(Character {
                label: CharLabel::Half(idx),
                degree: u64::from(degree),
                values: row(&|c| match c {
                    ClassLabel::D => int(i64::from(degree)),
                    ClassLabel::FPlus => at_plus.clone(),
                    ClassLabel::FMinus => at_minus.clone(),
                    ClassLabel::Theta(l) if one => int(sign(u64::from(l))),
                    ClassLabel::Theta(_) => int(0),
                    ClassLabel::Zero if one => int(sign(u64::from((q - 1) / 4))),
                    ClassLabel::Zero => int(sign(u64::from((q + 5) / 4))),
                    ClassLabel::Pi(_) if one => int(0),
                    ClassLabel::Pi(k) => int(-sign(u64::from(k))),
                }),
            });
        }
        for sidx in 1..=pi_count(q) {
            let si = i64::from(sidx);
            chars.push(Character {
                label: CharLabel::Chi(sidx),
                degree: u64::from(q - 1),
                values: row(&|c| match c {
                    ClassLabel::D => int(qi - 1),
                    ClassLabel::FPlus | ClassLabel::FMinus => int(-1),
                    ClassLabel::Theta(_) => int(0),
                    ClassLabel::Zero if one => int(0),
                    ClassLabel::Zero => int(-2 * sign(u64::from(sidx))),
                    ClassLabel::Pi(k) => {
                        let k = i64::from(k);
                        -&(&del(2 * k * si) + &del(-2 * k * si))
                    }
                }),
            });
        }
        for r in 1..=theta_count(q) {
            let ri = i64::from(r);
            chars.push(Character {
                label: CharLabel::Phi(r),
                degree: u64::from(q + 1),
                values: row(&|c| match c {
                    ClassLabel::D => int(qi + 1),
                    ClassLabel::FPlus | ClassLabel::FMinus => int(1),
                    ClassLabel::Theta(l) => {
                        let l = i64::from(l);
                        &eps(2 * l * ri) + &eps(-2 * l * ri)
                    }
                    ClassLabel::Zero if one => int(2 * sign(u64::from(r))),
                    ClassLabel::Zero => int(0),
                    ClassLabel::Pi(_) => int(0),
                }),
            });
        }
        Ok(CharTable { q, p, e, n, classes, class_sizes, chars })
    }

    #[must_use]
    pub fn group_order(&self) -> usize {
        group_order(self.q)
    }

    #[must_use]
    pub fn class_position(&self, c: ClassLabel) -> Option<usize> {
        self.classes.iter().position(|&x| x == c)
    }

    #[must_use]
    pub fn char_position(&self, c: CharLabel) -> Option<usize> {
        self.chars.iter().position(|x| x.label == c)
    }

    /// Both orthogonality relations and the degree identity, each checked exactly.
    #[must_use]
    pub fn verify(&self) -> OrthogonalityReport {
        let h = self.group_order() as i64;
        let n = self.n;
        let k = self.classes.len();
        let mut row_failures = 0;
        for (i, a) in self.chars.iter().enumerate() {
            for (j, b) in self.chars.iter().enumerate() {
                let mut s = CycInt::zero(n);
                for c in 0..k {
                    let term = &a.values[c] * &b.values[c].conj();
                    s = &s + &term.scale(&(self.class_sizes[c] as i64));
                }
                let expect = if i == j { h } else { 0 };
                if s.as_integer() != Some(expect) {
                    row_failures += 1;
                }
            }
        }
        let mut column_failures = 0;
        for c in 0..k {
            for d in 0..k {
                let mut s = CycInt::zero(n);
                for ch in &self.chars {
                    s = &s + &(&ch.values[c] * &ch.values[d].conj());
                }
                let expect = if c == d { h / self.class_sizes[c] as i64 } else { 0 };
                if s.as_integer() != Some(expect) {
                    column_failures += 1;
                }
            }
        }
        let degree_square_sum: u64 = self.chars.iter().map(|c| c.degree * c.degree).sum();
        let degree_column_ok = self.chars.iter().all(|c| c.values[0].as_integer() == Some(c.degree as i64));
        OrthogonalityReport {
            characters: self.chars.len(),
            classes: k,
            row_failures,
            column_failures,
            degree_square_sum,
            group_order: self.group_order() as u64,
            degree_column_ok,
        }
    }

    /// ω_χ(Ĉ) = |C|·χ(x_C)/χ(1), an algebraic integer.
    pub fn omega(&self, chi: usize, class: usize) -> Result<CycInt> {
        let ch = &self.chars[chi];
        ch.values[class]
            .scale(&(self.class_sizes[class] as i64))
            .div_exact(&(ch.degree as i64))
            .map_err(|e| Error::Integrality(format!("omega of {} at {}: {e}", ch.label, self.classes[class])))
    }

    /// Rows as strings for CSV or JSON output; values in the power basis as sparse `c*z^j` sums.
    #[must_use]
    pub fn render(&self) -> Vec<Vec<String>> {
        self.chars
            .iter()
            .map(|ch| {
                let mut row = vec![char_name(self.q, ch.label), ch.degree.to_string()];
                row.extend(ch.values.iter().map(format_cyc));
                row
            })
            .collect()
    }
}

/// Human-readable power-basis form, e.g. `1 - z^3 + 2*z^7`, where z is a primitive N-th root.
#[must_use]
pub fn format_cyc(v: &CycInt) -> String {
    let r = v.reduced();
    let mut parts = Vec::new();
    for (j, &c) in r.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.abs();
        let body = match (j, mag) {
            (0, m) => m.to_string(),
            (j, 1) => format!("z^{j}"),
            (j, m) => format!("{m}*z^{j}"),
        };
        let sign = if c < 0 { "-" } else { "+" };
        parts.push((sign, body));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (sign, body)) in parts.into_iter().enumerate() {
        if i == 0 {
            if sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(if sign == "-" { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub characters: usize,
    pub classes: usize,
    pub row_failures: usize,
    pub column_failures: usize,
    pub degree_square_sum: u64,
    pub group_order: u64,
    pub degree_column_ok: bool,
}

impl OrthogonalityReport {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.characters == self.classes
            && self.row_failures == 0
            && self.column_failures == 0
            && self.degree_square_sum == self.group_order
            && self.degree_column_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(q: u32) -> Vec<u64> {
        let mut d: Vec<u64> = CharTable::build(q).unwrap().chars.iter().map(|c| c.degree).collect();
        d.sort_unstable();
        d
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degrees(13), vec![1, 7, 7, 12, 12, 12, 13, 14, 14]);
        assert_eq!(degrees(7), vec![1, 3, 3, 6, 7, 8]);
        let s: u64 = degrees(13).iter().map(|d| d * d).sum();
        assert_eq!(s, 1092);
    }

    #[test]
    fn orthogonality_all_small_q() {
        for q in [5u32, 7, 9, 11, 13, 17, 19, 23, 25, 27] {
            let t = CharTable::build(q).unwrap();
            assert!(t.verify().pass(), "q={q}");
        }
    }

    #[test]
    fn root_orders() {
        assert_eq!(root_order(13), 1092);
        assert_eq!(root_order(9), 40);
        assert_eq!(root_order(25), 312);
        assert_eq!(root_order(27), 1092);
    }

    #[test]
    fn wrong_signs_are_caught() {
        let mut t = CharTable::construct(13).unwrap();
        let pos = t.char_position(CharLabel::Half(1)).unwrap();
        let th = t.class_position(ClassLabel::Theta(1)).unwrap();
        t.chars[pos].values[th] = -&t.chars[pos].values[th];
        assert!(!t.verify().pass());
        let mut t = CharTable::construct(7).unwrap();
        let pos = t.char_position(CharLabel::Half(1)).unwrap();
        let fp = t.class_position(ClassLabel::FPlus).unwrap();
        let fm = t.class_position(ClassLabel::FMinus).unwrap();
        t.chars[pos].values[fp] = t.chars[pos].values[fm].clone();
        assert!(!t.verify().pass());
    }

    #[test]
    fn omega_examples() {
        let t = CharTable::build(13).unwrap();
        let d = t.class_position(ClassLabel::D).unwrap();
        for c in 0..t.classes.len() {
            assert_eq!(t.omega(0, c).unwrap().as_integer(), Some(t.class_sizes[c] as i64));
        }
        let g = t.char_position(CharLabel::Steinberg).unwrap();
        assert_eq!(t.omega(g, d).unwrap().as_integer(), Some(1));
        let chi = t.char_position(CharLabel::Chi(1)).unwrap();
        let pi = t.class_position(ClassLabel::Pi(1)).unwrap();
        let expect = t.chars[chi].values[pi].scale(&13);
        assert!(t.omega(chi, pi).unwrap().equals(&expect));
        for i in 0..t.chars.len() {
            for c in 0..t.classes.len() {
                t.omega(i, c).unwrap();
            }
        }
    }

    #[test]
    fn half_characters_carry_roots() {
        for q in [5u32, 13, 27] {
            let t = CharTable::build(q).unwrap();
            let b1 = t.char_position(CharLabel::Half(1)).unwrap();
            let b2 = t.char_position(CharLabel::Half(2)).unwrap();
            let fp = t.class_position(ClassLabel::FPlus).unwrap();
            let sum = &t.chars[b1].values[fp] + &t.chars[b2].values[fp];
            let diff = &t.chars[b1].values[fp] - &t.chars[b2].values[fp];
            let qstar = if q % 4 == 1 { i64::from(q) } else { -i64::from(q) };
            assert_eq!(sum.as_integer(), Some(if q % 4 == 1 { 1 } else { -1 }));
            assert_eq!((&diff * &diff).as_integer(), Some(qstar));
        }
    }
}
