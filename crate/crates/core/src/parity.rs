//! Exhaustive parity sweeps of |C ∩ H_{P,Q}| and |C ∩ U_{P,W}| over pairs of
//! external points, checked against the case tables for each q mod 4.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{neighbor_sets, Externals};
use crate::error::Result;
use crate::group::{ActionTables, GClass, GroupCtx};
use crate::linalg::BitVec;
use crate::plane::{LineClass, PlaneCtx};

/// For each external P and G-class C, the parity of #{h ∈ C : P^h = R} as a vector over external R.
#[derive(Clone, Debug)]
pub struct ParityTables {
    pub ext: Externals,
    pub classes: Vec<GClass>,
    odd: Vec<Vec<BitVec>>,
}

impl ParityTables {
    #[must_use]
    pub fn build(group: &GroupCtx, tables: &ActionTables, plane: &PlaneCtx) -> Self {
        let ext = Externals::new(plane);
        let classes = group.g_classes();
        let gpos = group.g_class_positions();
        let n = ext.len();
        let odd = ext
            .points
            .par_iter()
            .map(|&p| {
                let mut rows = vec![BitVec::zeros(n); classes.len()];
                for h in 0..group.order() {
                    let r = ext.ordinal(tables.point(h, p)).expect("H preserves E");
                    let row = &mut rows[gpos[group.class_index(h)]];
                    row.set(r, !row.get(r));
                }
                rows
            })
            .collect();
        ParityTables { ext, classes, odd }
    }

    /// Parity of |C ∩ U_{P,W}| for every G-class, P given by external ordinal.
    #[must_use]
    pub fn class_parities(&self, p: usize, w: &BitVec) -> Vec<(GClass, bool)> {
        self.classes
            .iter()
            .zip(&self.odd[p])
            .map(|(&c, row)| {
                let ones: u32 = row.words().iter().zip(w.words()).map(|(a, b)| (a & b).count_ones()).sum();
                (c, ones % 2 == 1)
            })
            .collect()
    }
}

/// Tally of one lemma case across all configurations that fall into it.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaCase {
    pub lemma: String,
    pub case: String,
    pub expected: String,
    pub tested: usize,
    pub violations: usize,
    /// Number of configurations by how many classes had odd intersection.
    pub odd_class_counts: BTreeMap<usize, usize>,
}

impl LemmaCase {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// The full parity report for one q.
#[derive(Clone, Debug, Serialize)]
pub struct ParityProfile {
    pub q: u32,
    pub cases: Vec<LemmaCase>,
}

impl ParityProfile {
    #[must_use]
    pub fn pass(&self) -> bool {
        self.cases.iter().all(LemmaCase::pass)
    }
}

type Pred = Box<dyn Fn(&[GClass]) -> bool + Send + Sync>;

struct CaseSpec {
    lemma: &'static str,
    case: &'static str,
    expected: &'static str,
    include_zero: bool,
    pred: Pred,
}

fn is_theta(c: &GClass) -> bool {
    matches!(c, GClass::Theta(_))
}

fn is_pi(c: &GClass) -> bool {
    matches!(c, GClass::Pi(_))
}

fn none() -> Pred {
    Box::new(|odd: &[GClass]| odd.is_empty())
}

type Family = fn(&GClass) -> bool;

fn only(allowed: Family, cap: Option<(Family, usize)>) -> Pred {
    Box::new(move |odd: &[GClass]| {
        odd.iter().all(allowed) && cap.is_none_or(|(fam, n)| odd.iter().filter(|c| fam(c)).count() <= n)
    })
}

fn case_spec(lemma: &'static str, case: &'static str, expected: &'static str, pred: Pred) -> CaseSpec {
    CaseSpec { lemma, case, expected, include_zero: false, pred }
}

/// Which case of each lemma a configuration belongs to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Config {
    SecantOff,
    SecantOn,
    PassantOff,
    PassantOn,
    Tangent,
}

struct Tables {
    /// Indexed by `Config as usize`: case index for the H-lemma and the U-lemma.
    h_case: [usize; 5],
    u_case: [usize; 5],
    pisq: usize,
    y3: usize,
    specs: Vec<CaseSpec>,
}

fn case_tables(q: u32) -> Tables {
    let mut specs = Vec::new();
    let mut push = |s: CaseSpec| {
        specs.push(s);
        specs.len() - 1
    };
    let d_or_pi = |c: &GClass| *c == GClass::D || is_pi(c);
    let d_or_theta = |c: &GClass| *c == GClass::D || is_theta(c);
    let just_d = |c: &GClass| *c == GClass::D;
    let (h_case, u_case);
    if q % 4 == 1 {
        let i = push(case_spec(
            "line_1",
            "(i) secant join, Q off P-perp",
            "odd classes: at most two theta",
            only(is_theta, Some((is_theta, 2))),
        ));
        let ii =
            push(case_spec("line_1", "(ii) secant join, Q on P-perp", "odd classes: at most D", only(just_d, None)));
        let iii = push(case_spec("line_1", "(iii) passant join", "all even", none()));
        let iv = push(case_spec("line_1", "(iv) tangent join", "odd classes: theta only", only(is_theta, None)));
        h_case = [i, ii, iii, iii, iv];
        let ui = push(case_spec(
            "y_1",
            "(i) passant join",
            "odd classes: D and at most one pi",
            only(d_or_pi, Some((is_pi, 1))),
        ));
        let uii = push(case_spec("y_1", "(ii) secant join", "all even", none()));
        let uiii = if q % 8 == 1 {
            push(case_spec("y_1", "(iii) tangent join", "odd classes: pi only", only(is_pi, None)))
        } else {
            push(case_spec("y_1", "(iii) tangent join", "odd classes: D or pi", only(d_or_pi, None)))
        };
        u_case = [uii, uii, ui, ui, uiii];
    } else {
        let i = push(case_spec("y_22", "(i) secant join, Q off P-perp", "all even", none()));
        let imp = push(case_spec(
            "y_22",
            "secant join, Q on P-perp",
            "no such configuration",
            Box::new(|_: &[GClass]| false),
        ));
        let ii =
            push(case_spec("y_22", "(ii) passant join, Q on P-perp", "odd classes: at most D", only(just_d, None)));
        let iii = push(case_spec(
            "y_22",
            "(iii) passant join, Q off P-perp",
            "odd classes: at most two pi",
            only(is_pi, Some((is_pi, 2))),
        ));
        let iv =
            push(case_spec("y_22", "(iv) tangent join", "odd classes: at most one pi", only(is_pi, Some((is_pi, 1)))));
        h_case = [i, imp, iii, ii, iv];
        let ui = push(case_spec(
            "y_2",
            "(i) secant join",
            "odd classes: D and at most one theta",
            only(d_or_theta, Some((is_theta, 1))),
        ));
        let uii = push(case_spec("y_2", "(ii) passant join", "all even", none()));
        let uiii = if q % 8 == 3 {
            push(case_spec("y_2", "(iii) tangent join", "odd classes: theta only", only(is_theta, None)))
        } else {
            push(case_spec("y_2", "(iii) tangent join", "odd classes: D or theta", only(d_or_theta, None)))
        };
        u_case = [ui, ui, uii, uii, uiii];
    }
    let pisq = push(case_spec("pisq", "P = Q", "all even", none()));
    let y3 = push(CaseSpec {
        lemma: "y3",
        case: "P = Q, [0] included",
        expected: "all even",
        include_zero: true,
        pred: none(),
    });
    Tables { h_case, u_case, pisq, y3, specs }
}

#[derive(Clone, Default)]
struct Tally {
    tested: usize,
    violations: usize,
    counts: BTreeMap<usize, usize>,
}

fn record(tally: &mut Tally, spec: &CaseSpec, parities: &[(GClass, bool)]) {
    let odd: Vec<GClass> =
        parities.iter().filter(|(c, odd)| *odd && (spec.include_zero || *c != GClass::Zero)).map(|(c, _)| *c).collect();
    tally.tested += 1;
    if !(spec.pred)(&odd) {
        tally.violations += 1;
    }
    *tally.counts.entry(odd.len()).or_default() += 1;
}

/// Sweeps every ordered pair of external points and every G-class.
pub fn parity_profile(plane: &PlaneCtx, pt: &ParityTables) -> Result<ParityProfile> {
    let q = plane.q();
    let t = case_tables(q);
    let ext = &pt.ext;
    let n = ext.len();
    let mut polar_sets = Vec::with_capacity(n);
    let mut u_sets = Vec::with_capacity(n);
    for &p in &ext.points {
        let on: Vec<usize> =
            plane.points_on_line(plane.polar_of_point(p)).iter().filter_map(|&r| ext.ordinal(r)).collect();
        polar_sets.push(BitVec::from_indices(n, on));
        let ns = neighbor_sets(plane, ext, p)?;
        u_sets.push(if q % 4 == 1 { ns.n_prime } else { ns.n_a });
    }
    let tallies: Vec<Vec<Tally>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut tally = vec![Tally::default(); t.specs.len()];
            let p = ext.points[i];
            for j in 0..n {
                let h_par = pt.class_parities(i, &polar_sets[j]);
                let u_par = pt.class_parities(i, &u_sets[j]);
                if i == j {
                    record(&mut tally[t.pisq], &t.specs[t.pisq], &h_par);
                    record(&mut tally[t.y3], &t.specs[t.y3], &u_par);
                    continue;
                }
                let on = polar_sets[i].get(j);
                let config = match (plane.line_class(plane.join(p, ext.points[j])), on) {
                    (LineClass::Secant, false) => Config::SecantOff,
                    (LineClass::Secant, true) => Config::SecantOn,
                    (LineClass::Passant, false) => Config::PassantOff,
                    (LineClass::Passant, true) => Config::PassantOn,
                    (LineClass::Tangent, _) => Config::Tangent,
                };
                let hc = t.h_case[config as usize];
                record(&mut tally[hc], &t.specs[hc], &h_par);
                let uc = t.u_case[config as usize];
                record(&mut tally[uc], &t.specs[uc], &u_par);
            }
            tally
        })
        .collect();
    let mut total = vec![Tally::default(); t.specs.len()];
    for per_p in tallies {
        for (acc, x) in total.iter_mut().zip(per_p) {
            acc.tested += x.tested;
            acc.violations += x.violations;
            for (k, v) in x.counts {
                *acc.counts.entry(k).or_default() += v;
            }
        }
    }
    let cases = t
        .specs
        .iter()
        .zip(total)
        .map(|(s, x)| LemmaCase {
            lemma: s.lemma.into(),
            case: s.case.into(),
            expected: s.expected.into(),
            tested: x.tested,
            violations: x.violations,
            odd_class_counts: x.counts,
        })
        .collect();
    Ok(ParityProfile { q, cases })
}
