use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conic_codes::{
    analyze_blocks, build_group, chartable_json, chartable_rows, classify_json, dims_rows, emit, init_threads,
    run_verify, to_csv, to_json, CliError, CliResult, Poly, RunConfig, Suite,
};
use conic_core::chartable::CharTable;
use conic_core::codes::{code_dim, code_dims, matrix_by_id, to_alist, IncidencePartition, MatrixId};
use conic_core::group::stabilizer;
use conic_core::parity::{parity_profile, ParityTables};
use conic_core::{PlaneCtx, PointClass};
use serde_json::json;

#[derive(Parser)]
#[command(name = "conic-codes", version, about = "Incidence codes of conics in PG(2,q) and the 2-blocks of PSL(2,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order, an odd prime power ≥ 5.
    #[arg(long)]
    q: Option<u32>,
    /// Characteristic, as an alternative to --q.
    #[arg(long)]
    p: Option<u32>,
    /// Extension degree used with --p.
    #[arg(long)]
    e: Option<u32>,
    /// Defining polynomial c0,c1,..,ce in ascending order.
    #[arg(long)]
    poly: Option<Poly>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Emit JSON (the default for every command).
    #[arg(long)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum MatrixFormat {
    Alist,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report every check.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Omit the timestamp and per-check timings.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Code length and dimension of incidence submatrices.
    Dims {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        matrix: Option<MatrixId>,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Write a matrix as alist or CSV.
    Export {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value = "A33")]
        matrix: MatrixId,
        #[arg(long, value_enum, default_value = "alist")]
        format: MatrixFormat,
    },
    /// Conjugacy classes, stabilizers and parity lemmas of H.
    Group {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Include the class list.
        #[arg(long)]
        classes: bool,
        /// Run the parity-lemma sweep.
        #[arg(long)]
        parities: bool,
    },
    /// 2-blocks, idempotents and the block decomposition of Ker(φ).
    Blocks {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The ordinary character table of H.
    Chartable {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Classified points and lines of the plane.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn config(f: &FieldArgs) -> CliResult<RunConfig> {
    let cfg = RunConfig::new(f.q, f.p, f.e, f.poly.clone().map(|p| p.0))?;
    init_threads(cfg.threads);
    Ok(cfg)
}

/// Runs a command; `Ok(false)` means a verification failed.
fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Verify { field, output, suite, no_timestamp } => {
            let mut cfg = config(&field)?;
            cfg.suite = suite;
            cfg.out = output.out;
            cfg.timestamp = !no_timestamp;
            let report = run_verify(&cfg)?;
            emit(cfg.out.as_ref(), &to_json(&report)?)?;
            Ok(report.pass)
        }
        Command::Dims { field, output, matrix, format } => {
            let cfg = config(&field)?;
            let plane = PlaneCtx::build(cfg.field()?);
            let reports = match matrix {
                Some(id) => vec![code_dim(&plane, &IncidencePartition::build(&plane), id)],
                None => code_dims(&plane),
            };
            let text = match (format, matrix) {
                (TableFormat::Csv, _) => to_csv(&dims_rows(&reports))?,
                (TableFormat::Json, Some(_)) => to_json(&reports[0])?,
                (TableFormat::Json, None) => to_json(&reports)?,
            };
            emit(output.out.as_ref(), &text)?;
            Ok(true)
        }
        Command::Export { field, output, matrix, format } => {
            let cfg = config(&field)?;
            let plane = PlaneCtx::build(cfg.field()?);
            let m = matrix_by_id(&plane, &IncidencePartition::build(&plane), matrix);
            let text = match format {
                MatrixFormat::Alist => to_alist(&m),
                MatrixFormat::Csv => to_csv(
                    &m.to_dense().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect::<Vec<_>>(),
                )?,
            };
            emit(output.out.as_ref(), &text)?;
            Ok(true)
        }
        Command::Group { field, output, classes, parities } => {
            let cfg = config(&field)?;
            let f = cfg.field()?;
            let plane = PlaneCtx::build(f.clone());
            let gb = build_group(&f, &plane)?;
            let g = &gb.group;
            let ext = plane.points_of(PointClass::External);
            let stab = stabilizer(g, &gb.tables, &plane, ext[0])?;
            let mut stab_ok = true;
            for &p in &ext {
                stab_ok &= stabilizer(g, &gb.tables, &plane, p)?.pass(cfg.q);
            }
            let orbits = conic_core::group::orbit_checks(g, &gb.tables, &plane)?;
            let sizes_ok = g.classes().iter().all(|c| c.size == conic_core::group::expected_class_size(cfg.q, c.label));
            let mut pass = stab_ok && orbits.pass() && sizes_ok && g.order() == conic_core::group::group_order(cfg.q);
            let mut doc = json!({
                "q": cfg.q,
                "order": g.order(),
                "class_count": g.classes().len(),
                "class_sizes_ok": sizes_ok,
                "stabilizer_example": stab,
                "stabilizers_ok": stab_ok,
                "orbits": orbits,
            });
            if classes {
                doc["classes"] = serde_json::to_value(g.classes()).map_err(|e| CliError::Runtime(e.to_string()))?;
            }
            if parities {
                let pt = ParityTables::build(g, &gb.tables, &plane);
                let prof = parity_profile(&plane, &pt)?;
                pass &= prof.pass();
                doc["parities"] = serde_json::to_value(&prof).map_err(|e| CliError::Runtime(e.to_string()))?;
            }
            doc["pass"] = json!(pass);
            emit(output.out.as_ref(), &to_json(&doc)?)?;
            Ok(pass)
        }
        Command::Blocks { field, output } => {
            let cfg = config(&field)?;
            let f = cfg.field()?;
            let plane = PlaneCtx::build(f.clone());
            let gb = build_group(&f, &plane)?;
            let analysis = analyze_blocks(&plane, &gb)?;
            emit(output.out.as_ref(), &to_json(&analysis.document)?)?;
            Ok(analysis.pass)
        }
        Command::Chartable { field, output, format } => {
            let cfg = config(&field)?;
            let t = CharTable::construct(cfg.q)?;
            let pass = t.verify().pass();
            let text = match format {
                TableFormat::Csv => to_csv(&chartable_rows(&t))?,
                TableFormat::Json => to_json(&chartable_json(&t))?,
            };
            emit(output.out.as_ref(), &text)?;
            Ok(pass)
        }
        Command::Classify { field, output } => {
            let cfg = config(&field)?;
            let plane = PlaneCtx::build(cfg.field()?);
            let (doc, pass) = classify_json(&plane);
            emit(output.out.as_ref(), &to_json(&doc)?)?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
