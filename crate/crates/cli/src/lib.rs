//! Orchestration behind the `conic-codes` binary: field selection, check
//! suites, and the JSON/CSV/alist documents each subcommand emits.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use conic_core::arith::{binomial, prime_power};
use conic_core::blocks::{
    block_module_dims, block_sanity, class_orders, expression_checks, format_gf, induced_decomposition, shape_report,
    stabilizer_profile, verify_idempotents, BlockSystem, ClassAlgebra,
};
use conic_core::chartable::CharTable;
use conic_core::codes::{
    b4_row_mismatches, code_dim, direct_sum_checks, expected_dim_a33, from_alist, matrix_by_id, parity_checks,
    to_alist, verify_power_identity, IncidencePartition, MatrixId,
};
use conic_core::field::ResidueShiftCounts;
use conic_core::group::{
    equivariance_checks, expected_class_size, group_order, orbit_checks, stabilizer, ActionTables, GroupCtx,
};
use conic_core::linalg::pf_rank;
use conic_core::parity::{parity_profile, ParityTables};
use conic_core::plane::{expected_meet_class, Census};
use conic_core::{Error, FieldCtx, LineClass, PFMatrix, PlaneCtx, PointClass};
use serde::Serialize;
use serde_json::{json, Value};

/// Largest q for which the exhaustive (g, P, ℓ) sweep is used.
const EXHAUSTIVE_EQUIVARIANCE_Q: u32 = 9;
/// Sample count for the equivariance sweep above that bound.
const EQUIVARIANCE_SAMPLES: usize = 4096;

/// Failures a command can report, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Usage(String),
    /// Internal or I/O failure: exit code 2.
    Runtime(String),
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(m) => CliError::Runtime(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Geometry,
    Matrix,
    Group,
    Blocks,
    All,
}

impl Suite {
    fn includes(self, s: Suite) -> bool {
        self == Suite::All || self == s
    }
}

/// Everything a run needs: the field, the suite, and output preferences.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub modulus: Option<Vec<u32>>,
    pub suite: Suite,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub timestamp: bool,
}

impl RunConfig {
    /// Resolves `--q` or `--p/--e` into a validated odd prime power q ≥ 5.
    pub fn new(q: Option<u32>, p: Option<u32>, e: Option<u32>, modulus: Option<Vec<u32>>) -> CliResult<Self> {
        let q = match (q, p, e) {
            (Some(q), None, None) => q,
            (None, Some(p), e) => {
                let e = e.unwrap_or(1);
                p.checked_pow(e).ok_or_else(|| CliError::Usage(format!("{p}^{e} overflows")))?
            }
            (None, None, _) => return Err(CliError::Usage("one of --q or --p is required".into())),
            _ => return Err(CliError::Usage("give either --q or --p/--e, not both".into())),
        };
        let (p, e) = prime_power(u64::from(q)).ok_or_else(|| CliError::Usage(format!("{q} is not a prime power")))?;
        if p == 2 {
            return Err(CliError::Usage(format!("q = {q} is even; only odd q is supported")));
        }
        if q < 5 {
            return Err(CliError::Usage(format!("q = {q} is too small; q ≥ 5 is required")));
        }
        Ok(RunConfig {
            q,
            p: p as u32,
            e,
            modulus,
            suite: Suite::All,
            out: None,
            threads: threads_from_env()?,
            timestamp: true,
        })
    }

    pub fn field(&self) -> CliResult<FieldCtx> {
        Ok(FieldCtx::new(self.p, self.e, self.modulus.as_deref())?)
    }
}

/// A defining polynomial given as `c0,c1,...,ce` in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<u32>);

impl FromStr for Poly {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|t| u32::from_str(t.trim()).map_err(|e| format!("bad coefficient {t:?}: {e}")))
            .collect::<std::result::Result<_, _>>()
            .map(Poly)
    }
}

/// Thread cap from CONIC_CODES_THREADS, if set.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("CONIC_CODES_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("CONIC_CODES_THREADS={v:?} is not a positive integer"))),
        },
    }
}

/// Caps rayon's global pool; without a cap rayon uses every core.
pub fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        // a second initialisation in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub suite: Suite,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    #[must_use]
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Collector {
    checks: Vec<Check>,
    timing: bool,
    started: Instant,
}

impl Collector {
    fn new(timing: bool) -> Self {
        Collector { checks: Vec::new(), timing, started: Instant::now() }
    }

    /// Restarts the clock for the next group of checks.
    fn start(&mut self) {
        self.started = Instant::now();
    }

    fn push(&mut self, name: &str, expected: impl Display, actual: impl Display, pass: bool) {
        let elapsed_ms = self.timing.then(|| self.started.elapsed().as_millis() as u64);
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
            elapsed_ms,
        });
    }

    fn eq<T: Display + PartialEq>(&mut self, name: &str, expected: T, actual: T) {
        let pass = expected == actual;
        self.push(name, expected, actual, pass);
    }
}

fn census_string(c: &Census) -> String {
    format!("I={} O={} E={} Pa={} T={} Se={}", c.internal, c.absolute, c.external, c.passant, c.tangent, c.secant)
}

fn geometry_suite(col: &mut Collector, field: &FieldCtx, plane: &PlaneCtx) {
    let q = field.q();
    col.start();
    let rs = field.residue_shift_counts();
    col.eq(
        "residue_shift_counts",
        format!("{:?}", ResidueShiftCounts::expected(q).as_tuple()),
        format!("{:?}", rs.as_tuple()),
    );
    col.eq("census", census_string(&Census::expected(q)), census_string(&plane.census()));

    col.start();
    let rows = plane.verify_incidence_tables();
    let bad: usize = rows.iter().map(|r| r.mismatches).sum();
    col.eq("incidence_tables", 0, bad);

    col.start();
    let np = plane.points().len();
    let nl = plane.lines().len();
    let involution_failures = (0..np).filter(|&p| plane.polar_of_line(plane.polar_of_point(p)) != p).count()
        + (0..nl).filter(|&l| plane.polar_of_point(plane.polar_of_line(l)) != l).count();
    col.eq("polarity_involution", 0, involution_failures);
    let mut reversal_failures = 0;
    for l in 0..nl {
        let pole = plane.polar_of_line(l);
        let on: Vec<bool> = {
            let mut v = vec![false; np];
            for &p in plane.points_on_line(l) {
                v[p] = true;
            }
            v
        };
        for (p, &inc) in on.iter().enumerate() {
            if inc != plane.points_on_line(plane.polar_of_point(p)).contains(&pole) {
                reversal_failures += 1;
            }
        }
    }
    col.eq("polarity_order_reversing", 0, reversal_failures);
    let bijection_failures = (0..np)
        .filter(|&p| {
            let want = match plane.point_class(p) {
                PointClass::Internal => LineClass::Passant,
                PointClass::External => LineClass::Secant,
                PointClass::Absolute => LineClass::Tangent,
            };
            plane.line_class(plane.polar_of_point(p)) != want
        })
        .count();
    col.eq("polarity_class_bijection", 0, bijection_failures);

    col.start();
    let mut tested = 0;
    let mut meet_failures = 0;
    for l in 0..nl {
        if plane.line_class(l) == LineClass::Tangent {
            continue;
        }
        for &p in plane.points_on_line(l) {
            if plane.point_class(p) == PointClass::Absolute || plane.polar_of_point(p) == l {
                continue;
            }
            let got = plane.perp_meet_class(p, l).ok();
            if let Some(want) = expected_meet_class(q, plane.point_class(p), plane.line_class(l)) {
                tested += 1;
                if got != Some(want) {
                    meet_failures += 1;
                }
            }
        }
    }
    col.push(
        "perp_meet_class",
        format!("0 failures in {tested}"),
        format!("{meet_failures} failures"),
        meet_failures == 0,
    );
}

fn matrix_suite(col: &mut Collector, field: &FieldCtx, plane: &PlaneCtx) -> CliResult<()> {
    let q = field.q();
    let (p, e) = (field.p(), field.e());
    col.start();
    let pw = verify_power_identity(plane)?;
    col.eq("B5_eq_B", "pass", if pw.b5_ok { "pass" } else { "fail" });
    col.eq("B3_eq_B", matches!(q % 8, 3 | 5), pw.b3_eq);
    let (bad4, bad_c) = b4_row_mismatches(plane)?;
    col.eq("B4_rows", 0, bad4);
    col.eq("C_rows", 0, bad_c);

    col.start();
    let part = IncidencePartition::build(plane);
    let a = matrix_by_id(plane, &part, MatrixId::A);
    col.eq("rank_gf2_A", (q * q + q) as usize, a.rank());
    let a33 = matrix_by_id(plane, &part, MatrixId::A33);
    let base = binomial(u64::from(p) + 1, 2).pow(e) as usize;
    col.eq("rank_p_A", base + 1, pf_rank(&PFMatrix::from_bits(&a, p), p)?);
    col.eq("rank_p_A33", base, pf_rank(&PFMatrix::from_bits(&a33, p), p)?);

    col.start();
    let dim = code_dim(plane, &part, MatrixId::A33);
    col.eq("dim_L", expected_dim_a33(q), dim.k);

    col.start();
    let ds = direct_sum_checks(plane)?;
    col.push(
        "direct_sum",
        "rank + nullity = |E|, trivial intersection, null(B) = rowspace(C)",
        format!(
            "{} + {} = {}, intersection {}, rowspace(C) = null(B): {}",
            ds.rank_b, ds.nullity_b, ds.e, ds.im_ker_intersection, ds.rowspace_c_is_kernel
        ),
        ds.pass(),
    );
    if let Some(split) = ds.kernel_splits {
        col.eq("kernel_split_J_D", true, split && ds.j_outside_rowspace_d == Some(true));
    }

    col.start();
    let parity = parity_checks(plane)?;
    let tested: usize = parity.iter().map(|c| c.tested).sum();
    let violations: usize = parity.iter().map(|c| c.violations).sum();
    col.push(
        "intersection_parities",
        format!("0 violations in {tested}"),
        format!("{violations} violations"),
        violations == 0,
    );

    col.start();
    let mut roundtrip_ok = true;
    for id in [MatrixId::A33, MatrixId::B] {
        let m = matrix_by_id(plane, &part, id);
        roundtrip_ok &= from_alist(&to_alist(&m)).map(|r| r == m).unwrap_or(false);
    }
    col.eq("alist_roundtrip", true, roundtrip_ok);
    Ok(())
}

/// H with its action on the plane.
pub struct GroupBundle {
    pub group: GroupCtx,
    pub tables: ActionTables,
}

pub fn build_group(field: &FieldCtx, plane: &PlaneCtx) -> CliResult<GroupBundle> {
    let group = GroupCtx::build(field)?;
    let tables = ActionTables::build(&group, plane)?;
    Ok(GroupBundle { group, tables })
}

fn group_suite(col: &mut Collector, field: &FieldCtx, plane: &PlaneCtx, gb: &GroupBundle) -> CliResult<()> {
    let q = field.q();
    let g = &gb.group;
    col.start();
    col.eq("group_order", group_order(q), g.order());
    let labels = conic_core::group::class_labels(q);
    col.eq("class_count", labels.len(), g.classes().len());
    let size_failures = g.classes().iter().filter(|c| c.size != expected_class_size(q, c.label)).count();
    col.eq("class_sizes", 0, size_failures);

    col.start();
    let ext = plane.points_of(PointClass::External);
    let mut stab_failures = 0;
    for &p in &ext {
        if !stabilizer(g, &gb.tables, plane, p)?.pass(q) {
            stab_failures += 1;
        }
    }
    col.push(
        "stabilizers",
        format!("0 failures in {}", ext.len()),
        format!("{stab_failures} failures"),
        stab_failures == 0,
    );
    let orbits = orbit_checks(g, &gb.tables, plane)?;
    col.eq("orbits", true, orbits.pass());

    col.start();
    let samples = (q > EXHAUSTIVE_EQUIVARIANCE_Q).then_some(EQUIVARIANCE_SAMPLES);
    let eq = equivariance_checks(&gb.tables, plane, samples);
    col.push(
        "equivariance",
        format!("0 failures in {} cases", eq.cases),
        format!("{} incidence, {} polarity failures", eq.incidence_failures, eq.polarity_failures),
        eq.pass(),
    );

    col.start();
    let pt = ParityTables::build(g, &gb.tables, plane);
    let prof = parity_profile(plane, &pt)?;
    let bad: Vec<String> = prof.cases.iter().filter(|c| !c.pass()).map(|c| format!("{} {}", c.lemma, c.case)).collect();
    col.push(
        "parity_lemmas",
        format!("{} cases hold", prof.cases.len()),
        if bad.is_empty() { format!("{} cases hold", prof.cases.len()) } else { bad.join("; ") },
        prof.pass(),
    );
    Ok(())
}

/// Everything the blocks command and suite report.
pub struct BlockAnalysis {
    pub system: BlockSystem,
    pub document: Value,
    pub pass: bool,
    pub checks: Vec<(String, String, String, bool)>,
}

pub fn analyze_blocks(plane: &PlaneCtx, gb: &GroupBundle) -> CliResult<BlockAnalysis> {
    let q = plane.q();
    let table = CharTable::build(q)?;
    let orth = table.verify();
    let system = BlockSystem::build(table)?;
    let t = &system.table;
    let shape = shape_report(&system)?;
    let alg = ClassAlgebra::build(&gb.group, t)?;
    let idem = verify_idempotents(&system, &alg);
    let expr = expression_checks(&system);
    let sanity = block_sanity(&system, &class_orders(&gb.group, t)?);
    let p0 = plane.points_of(PointClass::External)[0];
    let induced = induced_decomposition(t, &stabilizer_profile(&gb.group, &gb.tables, p0))?;
    let modules = block_module_dims(plane, &gb.group, &gb.tables, &system, &induced)?;

    let shape_str = |principal: usize, d0: usize, inter: &[usize]| {
        let inter = if inter.is_empty() {
            "none".to_string()
        } else {
            inter.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        };
        format!("principal {principal}; defect-0 {d0}; intermediate [{inter}]")
    };
    let ex = &shape.expected;
    let expr_bad = expr.iter().filter(|c| !c.pass).count();
    let kernel_dims: Vec<String> =
        modules.blocks.iter().filter(|b| b.kernel > 0).map(|b| format!("{}:{}", b.kind, b.kernel)).collect();
    let checks = vec![
        (
            "char_orthogonality".to_string(),
            "0 failures".to_string(),
            format!("{} row, {} column failures", orth.row_failures, orth.column_failures),
            orth.row_failures == 0 && orth.column_failures == 0 && orth.degree_column_ok,
        ),
        (
            "degree_square_sum".into(),
            orth.group_order.to_string(),
            orth.degree_square_sum.to_string(),
            orth.degree_square_sum == orth.group_order,
        ),
        (
            "block_shape".into(),
            shape_str(ex.principal, ex.defect_zero, &vec![ex.intermediate_size; ex.intermediate_count]),
            shape_str(shape.principal, shape.defect_zero, &shape.intermediate_sizes),
            shape.pass(),
        ),
        (
            "partition_independent_of_prime".into(),
            "same partition or no second prime".into(),
            match shape.independent_of_prime {
                Some(true) => "same partition".into(),
                Some(false) => "different partition".into(),
                None => "no second prime".into(),
            },
            shape.independent_of_prime != Some(false),
        ),
        (
            "idempotents".into(),
            "e^2 = e, e e' = 0, sum = 1".into(),
            format!("squares {}, orthogonal {}, sum {}", idem.squares_ok, idem.orthogonal_ok, idem.sum_is_one),
            idem.pass(),
        ),
        (
            "expression_entries".into(),
            format!("0 mismatches in {}", expr.len()),
            format!("{expr_bad} mismatches"),
            expr_bad == 0,
        ),
        (
            "weak_block_orthogonality".into(),
            format!("0 failures in {}", sanity.wbo_tested),
            format!("{} failures", sanity.wbo_failures),
            sanity.wbo_failures == 0,
        ),
        (
            "p2_sum".into(),
            sanity.p2_expected.to_string(),
            sanity.p2_actual.map_or("irrational".into(), |v| v.to_string()),
            sanity.p2_actual == Some(sanity.p2_expected),
        ),
        (
            "induced_decomposition".into(),
            format!("pattern holds, degree sum {}", induced.points),
            format!(
                "pattern {}, degree sum {}",
                if induced.pattern_ok { "holds" } else { "fails" },
                induced.degree_sum
            ),
            induced.pass(),
        ),
        (
            "scalar_extension_rank".into(),
            modules.rank_gf2.to_string(),
            modules.rank_extension.to_string(),
            modules.rank_gf2 == modules.rank_extension,
        ),
        (
            "ker_phi_by_block".into(),
            format!("total {}", modules.expected_kernel_dim),
            format!("total {} = {}", modules.kernel_dim, kernel_dims.join(" + ")),
            modules.pass(),
        ),
    ];
    let pass = checks.iter().all(|c| c.3);

    let class_names: Vec<String> = t.classes.iter().map(ToString::to_string).collect();
    let blocks_json: Vec<Value> = system
        .blocks
        .iter()
        .map(|b| {
            let coeffs: serde_json::Map<String, Value> =
                class_names.iter().zip(&b.idempotent).map(|(c, &v)| (c.clone(), Value::String(format_gf(v)))).collect();
            json!({
                "id": b.id,
                "kind": b.kind,
                "defect": b.defect,
                "members": system.member_names(b),
                "idempotent": coeffs,
            })
        })
        .collect();
    let document = json!({
        "q": q,
        "root_order": t.n,
        "residue_field": {
            "degree": system.reduction.degree(),
            "modulus": format!("{:#x}", system.reduction.field.modulus()),
        },
        "classes": class_names,
        "blocks": blocks_json,
        "shape": shape,
        "idempotent_checks": idem,
        "expression_checks": expr,
        "sanity": sanity,
        "induced": induced,
        "modules": modules,
        "pass": pass,
    });
    Ok(BlockAnalysis { system, document, pass, checks })
}

/// Runs the configured suite.
pub fn run_verify(cfg: &RunConfig) -> CliResult<Report> {
    let field = cfg.field()?;
    let plane = PlaneCtx::build(field.clone());
    let mut col = Collector::new(cfg.timestamp);
    if cfg.suite.includes(Suite::Geometry) {
        geometry_suite(&mut col, &field, &plane);
    }
    if cfg.suite.includes(Suite::Matrix) {
        matrix_suite(&mut col, &field, &plane)?;
    }
    if cfg.suite.includes(Suite::Group) || cfg.suite.includes(Suite::Blocks) {
        let gb = build_group(&field, &plane)?;
        if cfg.suite.includes(Suite::Group) {
            group_suite(&mut col, &field, &plane, &gb)?;
        }
        if cfg.suite.includes(Suite::Blocks) {
            col.start();
            let analysis = analyze_blocks(&plane, &gb)?;
            for (name, expected, actual, pass) in analysis.checks {
                col.push(&name, expected, actual, pass);
            }
        }
    }
    let pass = col.checks.iter().all(|c| c.pass);
    Ok(Report {
        q: cfg.q,
        p: cfg.p,
        e: cfg.e,
        suite: cfg.suite,
        timestamp: cfg.timestamp.then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        pass,
        checks: col.checks,
    })
}

/// Writes `text` to the configured path, or stdout.
pub fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", text.trim_end()).map_err(|e| CliError::Runtime(format!("stdout: {e}")))
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Serializes rows as CSV.
pub fn to_csv(rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn dims_rows(reports: &[conic_core::codes::CodeReport]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["q".into(), "matrix".into(), "n".into(), "k".into(), "rank".into()]];
    for r in reports {
        rows.push(vec![r.q.to_string(), r.matrix.to_string(), r.n.to_string(), r.k.to_string(), r.rank.to_string()]);
    }
    rows
}

/// Rows of a character table as CSV: header, class sizes, then one row per character.
#[must_use]
pub fn chartable_rows(t: &CharTable) -> Vec<Vec<String>> {
    let mut header = vec!["character".to_string(), "degree".to_string()];
    header.extend(t.classes.iter().map(ToString::to_string));
    let mut sizes = vec!["class_size".to_string(), String::new()];
    sizes.extend(t.class_sizes.iter().map(ToString::to_string));
    let mut rows = vec![header, sizes];
    rows.extend(t.render());
    rows
}

#[must_use]
pub fn chartable_json(t: &CharTable) -> Value {
    let report = t.verify();
    let chars: Vec<Value> = t
        .render()
        .into_iter()
        .map(|mut r| {
            let values: Vec<String> = r.split_off(2);
            json!({ "name": r[0], "degree": r[1].parse::<u64>().unwrap_or(0), "values": values })
        })
        .collect();
    json!({
        "q": t.q,
        "root_order": t.n,
        "root": "z = exp(2 pi i / root_order)",
        "classes": t.classes.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "class_sizes": t.class_sizes,
        "characters": chars,
        "orthogonality": report,
        "pass": report.pass(),
    })
}

#[must_use]
pub fn classify_json(plane: &PlaneCtx) -> (Value, bool) {
    let q = plane.q();
    let census = plane.census();
    let expected = Census::expected(q);
    let points: Vec<Value> = plane
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| json!({ "index": i, "coords": p.0.iter().map(|x| x.value()).collect::<Vec<_>>(), "class": plane.point_class(i) }))
        .collect();
    let lines: Vec<Value> = plane
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| json!({ "index": i, "coords": l.0.iter().map(|x| x.value()).collect::<Vec<_>>(), "class": plane.line_class(i) }))
        .collect();
    let pass = census == expected;
    (json!({ "q": q, "census": census, "expected": expected, "pass": pass, "points": points, "lines": lines }), pass)
}
