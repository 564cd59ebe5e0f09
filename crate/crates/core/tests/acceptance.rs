use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use conic_core::blocks::{
    block_module_dims, block_sanity, class_orders, expected_kernel_dim, expression_checks, induced_decomposition,
    shape_report, stabilizer_profile, verify_idempotents, BlockKind, BlockSystem, ClassAlgebra, InducedReport,
};
use conic_core::chartable::CharTable;
use conic_core::codes::{
    build_b, direct_sum_checks, from_alist, matrix_by_id, parity_checks, to_alist, verify_power_identity, Externals,
    IncidencePartition, MatrixId,
};
use conic_core::group::{
    class_labels, equivariance_checks, expected_class_size, group_order, stabilizer, ActionTables, GroupCtx,
};
use conic_core::linalg::{pf_rank, PFMatrix};
use conic_core::parity::{parity_profile, ParityTables};
use conic_core::plane::Census;
use conic_core::{FieldCtx, PlaneCtx, PointClass};

const Q1: [u32; 5] = [5, 7, 9, 11, 13];
const Q2: [u32; 10] = [5, 7, 9, 11, 13, 17, 19, 23, 25, 27];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn plane(q: u32) -> PlaneCtx {
    PlaneCtx::build(FieldCtx::from_order(u64::from(q), None).expect("field"))
}

struct Setup {
    plane: PlaneCtx,
    group: GroupCtx,
    tables: ActionTables,
}

fn setup(q: u32) -> Setup {
    let plane = plane(q);
    let group = GroupCtx::build(plane.field()).expect("group");
    let tables = ActionTables::build(&group, &plane).expect("tables");
    Setup { plane, group, tables }
}

fn induced_for(s: &Setup, table: &CharTable) -> InducedReport {
    let p = Externals::new(&s.plane).points[0];
    induced_decomposition(table, &stabilizer_profile(&s.group, &s.tables, p)).expect("induced")
}

fn dimension_formula() -> Outcome {
    let expected = [(5, 5), (7, 8), (9, 17), (11, 24), (13, 37), (17, 65), (19, 80), (23, 120), (25, 145), (27, 168)];
    for (q, want) in expected {
        let pl = plane(q);
        let a33 = matrix_by_id(&pl, &IncidencePartition::build(&pl), MatrixId::A33);
        let nullity = a33.cols() - a33.rank();
        ensure(nullity == want, || format!("q={q}: nullity {nullity}, want {want}"))?;
    }
    Ok("nullity(A33) matches for all 10 orders".into())
}

fn power_identity() -> Outcome {
    for q in Q2 {
        let pw = verify_power_identity(&plane(q)).map_err(|e| e.to_string())?;
        ensure(pw.b5_ok, || format!("q={q}: B^5 != B"))?;
        let want = [5, 11, 13, 19, 27].contains(&q);
        ensure(pw.b3_eq == want, || format!("q={q}: B^3 == B is {}, want {want}", pw.b3_eq))?;
    }
    Ok("B^5 = B everywhere; B^3 = B exactly at 5, 11, 13, 19, 27".into())
}

fn rank_facts() -> Outcome {
    for q in Q2 {
        let pl = plane(q);
        let a = matrix_by_id(&pl, &IncidencePartition::build(&pl), MatrixId::A);
        let r = a.rank();
        ensure(r == (q * q + q) as usize, || format!("q={q}: rank_2(A) = {r}"))?;
    }
    for q in [5, 7, 9, 25, 27] {
        let pl = plane(q);
        let (p, e) = (pl.field().p(), pl.field().e());
        let part = IncidencePartition::build(&pl);
        let base = ((p * (p + 1) / 2) as usize).pow(e);
        let ra =
            pf_rank(&PFMatrix::from_bits(&matrix_by_id(&pl, &part, MatrixId::A), p), p).map_err(|e| e.to_string())?;
        let r33 =
            pf_rank(&PFMatrix::from_bits(&matrix_by_id(&pl, &part, MatrixId::A33), p), p).map_err(|e| e.to_string())?;
        ensure(ra == base + 1 && r33 == base, || format!("q={q}: rank_p(A) {ra}, rank_p(A33) {r33}, base {base}"))?;
        if q == 9 {
            ensure((ra, r33) == (37, 36), || format!("q=9: got ({ra}, {r33})"))?;
        }
    }
    Ok("2-ranks and p-ranks match".into())
}

fn census_and_tables() -> Outcome {
    for q in Q2 {
        let pl = plane(q);
        let c = pl.census();
        ensure(c == Census::expected(q), || format!("q={q}: census {c:?}"))?;
        for row in pl.verify_incidence_tables() {
            ensure(row.pass(), || format!("q={q}: {} has {} mismatches", row.name, row.mismatches))?;
        }
    }
    Ok("census and incidence profiles hold".into())
}

fn group_structure() -> Outcome {
    for q in Q1 {
        let s = setup(q);
        let g = &s.group;
        ensure(g.order() == group_order(q) && g.order() == (q * (q * q - 1) / 2) as usize, || {
            format!("q={q}: order {}", g.order())
        })?;
        ensure(g.classes().len() == class_labels(q).len(), || format!("q={q}: {} classes", g.classes().len()))?;
        for c in g.classes() {
            ensure(c.size == expected_class_size(q, c.label), || format!("q={q}: class {} size {}", c.label, c.size))?;
        }
        for p in s.plane.points_of(PointClass::External) {
            let r = stabilizer(g, &s.tables, &s.plane, p).map_err(|e| e.to_string())?;
            ensure(r.stab_g == 2 * (q as usize - 1) && r.pass(q), || format!("q={q}: stabilizer of {p}: {r:?}"))?;
        }
    }
    Ok("orders, classes and external stabilizers match".into())
}

fn parity_lemmas() -> Outcome {
    let mut cases = 0;
    for q in Q1 {
        let s = setup(q);
        let prof =
            parity_profile(&s.plane, &ParityTables::build(&s.group, &s.tables, &s.plane)).map_err(|e| e.to_string())?;
        for c in &prof.cases {
            ensure(c.pass(), || format!("q={q}: {} {} fails", c.lemma, c.case))?;
        }
        cases += prof.cases.len();
        for c in parity_checks(&s.plane).map_err(|e| e.to_string())? {
            ensure(c.violations == 0, || format!("q={q}: {} {}: {} violations", c.lemma, c.case, c.violations))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} lemma cases hold"))
}

fn direct_sums() -> Outcome {
    for q in Q2 {
        let r = direct_sum_checks(&plane(q)).map_err(|e| e.to_string())?;
        ensure(r.rank_b + r.nullity_b == r.e && r.im_ker_intersection == 0 && r.pass(), || format!("q={q}: {r:?}"))?;
        if [5, 9, 13].contains(&q) {
            ensure(r.kernel_splits == Some(true) && r.j_outside_rowspace_d == Some(true), || {
                format!("q={q}: kernel split {r:?}")
            })?;
        }
    }
    Ok("row and null spaces split; Ker(B) = <J> + row(D) at 5, 9, 13".into())
}

fn character_tables() -> Outcome {
    for q in Q1 {
        let r = CharTable::construct(q).map_err(|e| e.to_string())?.verify();
        ensure(r.pass() && r.degree_square_sum == r.group_order, || format!("q={q}: {r:?}"))?;
    }
    Ok("both orthogonality relations and the degree sum hold".into())
}

fn induced_character() -> Outcome {
    for q in Q1.into_iter().chain([17]) {
        let s = setup(q);
        let table = CharTable::build(q).map_err(|e| e.to_string())?;
        let r = induced_for(&s, &table);
        let ext = s.plane.points_of(PointClass::External).len() as u64;
        ensure(r.pass() && r.degree_sum == ext, || format!("q={q}: {r:?}"))?;
        let m: BTreeMap<&str, i64> = r.rows.iter().map(|r| (r.character.as_str(), r.multiplicity)).collect();
        if q == 13 {
            let ok = m["gamma"] == 2
                && (m["beta_1"], m["beta_2"]) == (0, 0)
                && (m["chi_1"], m["chi_2"], m["chi_3"]) == (1, 1, 1);
            ensure(ok, || format!("q=13: {m:?}"))?;
        }
        if q == 17 {
            ensure((m["beta_1"], m["beta_2"]) == (1, 1), || format!("q=17: {m:?}"))?;
        }
    }
    Ok("multiplicities match; degree sum equals |E|".into())
}

fn blocks() -> Outcome {
    for q in Q1 {
        let s = setup(q);
        let sys = BlockSystem::build(CharTable::build(q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let shape = shape_report(&sys).map_err(|e| e.to_string())?;
        ensure(shape.pass(), || format!("q={q}: {shape:?}"))?;
        let want = match q {
            13 => Some((4, 3, vec![2])),
            11 => Some((4, 2, vec![2])),
            9 => Some((5, 2, vec![])),
            _ => None,
        };
        if let Some(w) = want {
            let got = (shape.principal, shape.defect_zero, shape.intermediate_sizes.clone());
            ensure(got == w, || format!("q={q}: shape {got:?}"))?;
        }
        let alg = ClassAlgebra::build(&s.group, &sys.table).map_err(|e| e.to_string())?;
        let idem = verify_idempotents(&sys, &alg);
        ensure(idem.pass(), || format!("q={q}: {idem:?}"))?;
        for c in expression_checks(&sys) {
            ensure(c.pass, || format!("q={q}: e_B entry {c:?}"))?;
        }
        let sanity = block_sanity(&sys, &class_orders(&s.group, &sys.table).map_err(|e| e.to_string())?);
        ensure(sanity.pass(), || format!("q={q}: {sanity:?}"))?;
    }
    Ok("shapes, idempotent entries, WBO and p2 sums hold".into())
}

fn main_theorem() -> Outcome {
    for q in Q1 {
        let s = setup(q);
        let sys = BlockSystem::build(CharTable::build(q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let induced = induced_for(&s, &sys.table);
        let r = block_module_dims(&s.plane, &s.group, &s.tables, &sys, &induced).map_err(|e| e.to_string())?;
        ensure(r.pass() && r.kernel_dim == expected_kernel_dim(q), || format!("q={q}: {r:?}"))?;
        let mut dims: Vec<usize> = r.blocks.iter().map(|b| b.kernel).filter(|&d| d > 0).collect();
        dims.sort_unstable();
        let mut want = Vec::new();
        if q % 4 == 1 {
            want.push(1);
            want.extend(std::iter::repeat_n(q as usize - 1, (q as usize - 1) / 4));
        } else {
            want.extend(std::iter::repeat_n(q as usize + 1, (q as usize - 3) / 4));
        }
        ensure(dims == want, || format!("q={q}: kernel summands {dims:?}, want {want:?}"))?;
        for b in &r.blocks {
            let y4 = (!b.expected_image_zero || b.image == 0) && (!b.expected_image_d_zero || b.image_d == 0);
            ensure(y4, || format!("q={q}: block {} ({}) image {} image_d {}", b.block, b.kind, b.image, b.image_d))?;
        }
        let principal = r.blocks.iter().find(|b| b.kind == BlockKind::Principal).expect("principal block");
        ensure(q % 4 == 3 || principal.image_d == 0, || format!("q={q}: e_B0 Im(phi2) = {}", principal.image_d))?;
    }
    Ok("Ker(phi) block summands and annihilations match".into())
}

fn property_suite() -> Outcome {
    let mut cases = 0;
    for q in Q2 {
        let s = setup(q);
        let pl = &s.plane;
        let bad = (0..pl.points().len()).filter(|&p| pl.polar_of_line(pl.polar_of_point(p)) != p).count()
            + (0..pl.lines().len()).filter(|&l| pl.polar_of_point(pl.polar_of_line(l)) != l).count();
        ensure(bad == 0, || format!("q={q}: {bad} polarity failures"))?;
        let samples = (q > 9).then_some(1000);
        let eq = equivariance_checks(&s.tables, pl, samples);
        ensure(eq.pass(), || format!("q={q}: {eq:?}"))?;
        ensure(q > 9 || eq.exhaustive, || format!("q={q}: equivariance not exhaustive"))?;
        ensure(q <= 9 || eq.cases >= 1000, || format!("q={q}: only {} sampled cases", eq.cases))?;
        cases += eq.cases;
        let part = IncidencePartition::build(pl);
        for m in [build_b(pl), matrix_by_id(pl, &part, MatrixId::A33), matrix_by_id(pl, &part, MatrixId::A)] {
            let back = from_alist(&to_alist(&m)).map_err(|e| e.to_string())?;
            ensure(back == m, || format!("q={q}: alist round trip differs"))?;
        }
    }
    Ok(format!("polarity, equivariance ({cases} cases) and alist round trips hold"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("dimension formula", dimension_formula),
        ("power identity", power_identity),
        ("rank facts", rank_facts),
        ("census and incidence tables", census_and_tables),
        ("group structure", group_structure),
        ("parity lemmas", parity_lemmas),
        ("direct sums", direct_sums),
        ("character table", character_tables),
        ("induced character", induced_character),
        ("blocks", blocks),
        ("kernel block decomposition", main_theorem),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:2} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
