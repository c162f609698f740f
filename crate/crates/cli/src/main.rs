//! `cgkit`: runs the verification suites and round-trips the file formats.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cgkit_core::bd::algebra::{AlgebraType, ReductiveAlgebra};
use cgkit_core::bd::pipeline::{cg_pipeline, run_quadruple, validate_quadruple};
use cgkit_core::bd::qmatrix::QMatrix;
use cgkit_core::bd::triple::{solve_f0, validate_triple, AdmissibleTriple, BdFile, BdQuadruple};
use cgkit_core::laurent::rat;
use cgkit_core::modp::DEFAULT_MODULUS;
use cgkit_core::qalg::{
    check_det_properties, exterior_relations, frt_relations, graded_dimension, l_functionals, psi_phi_check,
    symmetric_relations,
};
use cgkit_core::report::{witness, Check, CheckReport, CheckSet};
use cgkit_core::rmatrix::{
    build_cg, check_hecke, check_structure_identities, check_twist_suite, check_yang_baxter, describe,
    semiclassical_limit, CgParams, RMatrixFile,
};
use cgkit_core::{Error, SparseOperator};

#[derive(Parser)]
#[command(name = "cgkit", version, about = "Exact checks for Cremmer-Gervais R-matrices and Belavin-Drinfeld structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or check R-matrices.
    #[command(subcommand)]
    R(RCommand),
    /// Quadratic algebras attached to R_n.
    #[command(subcommand)]
    Qa(QaCommand),
    /// Belavin-Drinfeld structures on gl(m) and sl(m).
    #[command(subcommand)]
    Bd(BdCommand),
    /// First-order term of R_n at q = p = 1 and its classical Yang-Baxter check.
    Limit(LimitArgs),
}

#[derive(Args)]
struct Output {
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    /// Size of the built-in family member R_n.
    #[arg(long, conflicts_with = "file")]
    n: Option<usize>,
    /// Specialize to q = p^n.
    #[arg(long, conflicts_with = "file")]
    one_param: bool,
    /// Read the R-matrix from a file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RCommand {
    /// Emit an R-matrix file.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Run check suites on an R-matrix.
    Check {
        #[command(flatten)]
        source: Source,
        /// Comma-separated suites: ybe, hecke, structure, twist.
        #[arg(long, value_delimiter = ',', default_value = "ybe,hecke")]
        checks: Vec<RSuite>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RSuite {
    Ybe,
    Hecke,
    Structure,
    Twist,
}

impl RSuite {
    fn name(self) -> &'static str {
        match self {
            RSuite::Ybe => "ybe",
            RSuite::Hecke => "hecke",
            RSuite::Structure => "structure",
            RSuite::Twist => "twist",
        }
    }
}

#[derive(Args)]
struct Specialization {
    /// Prime modulus above 2^60 for specialized linear algebra.
    #[arg(long, default_value_t = DEFAULT_MODULUS)]
    modulus: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum QaCommand {
    /// Pairings of det_q with the generators, and normality of det_q.
    Det {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: Specialization,
        #[command(flatten)]
        output: Output,
    },
    /// Graded dimensions of a quadratic algebra, compared with the classical ones.
    Poincare {
        #[arg(long, value_enum)]
        algebra: QaAlgebra,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        #[command(flatten)]
        spec: Specialization,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Normality of det_q only.
    Normality {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: Specialization,
        #[command(flatten)]
        output: Output,
    },
    /// The l± functionals and the ψ/φ identities.
    Dual {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QaAlgebra {
    Lambda,
    Sym,
    Frt,
}

#[derive(Args)]
struct BdSource {
    #[arg(long, value_enum, default_value = "sl", conflicts_with = "file")]
    algebra: BdAlgebra,
    /// Matrix size m.
    #[arg(long, conflicts_with = "file")]
    rank: Option<usize>,
    #[arg(long, value_enum, conflicts_with = "file")]
    triple: Option<TripleKind>,
    /// Read the triple and optional f0 from a file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BdAlgebra {
    Sl,
    Gl,
}

#[derive(Clone, Copy, ValueEnum)]
enum TripleKind {
    Cg,
}

#[derive(Subcommand)]
enum BdCommand {
    /// Validate, build f, and run every bialgebra and quotient check.
    Run {
        #[command(flatten)]
        source: BdSource,
        /// Compare with the semiclassical limit of R_m (informational).
        #[arg(long)]
        compare: bool,
        /// Also write the quadruple that was run as a file.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check the admissibility conditions only.
    Validate {
        #[command(flatten)]
        source: BdSource,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long)]
    n: usize,
    /// Tangent direction (u_q, u_p); defaults to (n, 1).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    direction: Option<Vec<i64>>,
    #[command(flatten)]
    output: Output,
}

/// Failure to run at all, as opposed to a failing check.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_out(output: &Output, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Sorts, strips timings, writes, and returns whether every check passed.
fn finish(mut report: CheckReport, output: &Output) -> CliResult<bool> {
    report.sort();
    report.strip_timings();
    let mut text = report.to_json();
    text.push('\n');
    write_out(output, &text)?;
    Ok(report.all_pass())
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn run(command: Command) -> CliResult<bool> {
    match command {
        Command::R(RCommand::Build { source, output }) => {
            let r = load_r(&source)?;
            write_out(&output, &RMatrixFile::from_operator(&r)?.to_json())?;
            Ok(true)
        }
        Command::R(RCommand::Check { source, checks, output }) => r_check(&source, &checks, &output),
        Command::Qa(cmd) => qa(cmd),
        Command::Bd(cmd) => bd(cmd),
        Command::Limit(args) => limit(&args),
    }
}

fn load_r(source: &Source) -> CliResult<SparseOperator> {
    match (&source.file, source.n) {
        (Some(path), _) => RMatrixFile::from_json(&read_file(path)?)
            .and_then(|f| f.to_operator())
            .map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        (None, Some(n)) => Ok(build_cg(if source.one_param {
            CgParams::one_param(n)
        } else {
            CgParams::new(n)
        })?),
        (None, None) => Err(UsageError("give --n or --file".into())),
    }
}

fn source_params(source: &Source) -> Vec<(&'static str, String)> {
    match (&source.file, source.n) {
        (Some(path), _) => vec![("file", path.display().to_string())],
        (None, n) => vec![
            ("n", n.map(|n| n.to_string()).unwrap_or_default()),
            ("one_param", source.one_param.to_string()),
        ],
    }
}

fn r_check(source: &Source, suites: &[RSuite], output: &Output) -> CliResult<bool> {
    let r = load_r(source)?;
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    let mut p: BTreeMap<String, String> = source_params(source).into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    p.insert("checks".into(), names.join(","));
    let mut report = CheckReport::new("r check", p);
    report.add(CheckSet {
        checks: vec![Check::info("r", describe(&r))],
    });
    for suite in suites {
        let set = match suite {
            RSuite::Ybe => check_yang_baxter(&r)?,
            RSuite::Hecke => CheckSet {
                checks: vec![check_hecke(&r)?],
            },
            RSuite::Structure | RSuite::Twist if source.file.is_some() || source.one_param => {
                return Err(UsageError(format!(
                    "the {} suite concerns the two-parameter family; use --n without --one-param",
                    suite.name()
                )));
            }
            RSuite::Structure => check_structure_identities(r.n())?,
            RSuite::Twist => check_twist_suite(r.n())?,
        };
        report.add(set.prefixed(suite.name()));
    }
    finish(report, output)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn qa(cmd: QaCommand) -> CliResult<bool> {
    match cmd {
        QaCommand::Det { n, spec, output } => {
            let checks = check_det_properties(n, spec.modulus, spec.seed)?;
            let mut report = CheckReport::new(
                "qa det",
                params([("n", n.to_string()), ("modulus", spec.modulus.to_string()), ("seed", spec.seed.to_string())]),
            );
            report.add(checks);
            finish(report, &output)
        }
        QaCommand::Normality { n, spec, output } => {
            let checks = check_det_properties(n, spec.modulus, spec.seed)?;
            let mut report = CheckReport::new(
                "qa normality",
                params([("n", n.to_string()), ("modulus", spec.modulus.to_string()), ("seed", spec.seed.to_string())]),
            );
            report.add(CheckSet {
                checks: checks.checks.into_iter().filter(|c| c.name == "det_normal").collect(),
            });
            finish(report, &output)
        }
        QaCommand::Poincare {
            algebra,
            n,
            max_deg,
            spec,
            trials,
            output,
        } => {
            let r = build_cg(CgParams::new(n))?;
            let (name, pres, expected): (&str, _, Box<dyn Fn(usize) -> u128>) = match algebra {
                QaAlgebra::Lambda => ("lambda", exterior_relations(&r)?, Box::new(move |d| binomial(n, d))),
                QaAlgebra::Sym => ("sym", symmetric_relations(&r)?, Box::new(move |d| binomial(n + d - 1, d))),
                QaAlgebra::Frt => ("frt", frt_relations(&r)?, Box::new(move |d| binomial(n * n + d - 1, d))),
            };
            let mut set = CheckSet::new();
            for d in 1..=max_deg {
                let got = graded_dimension(&pres, d, spec.modulus, spec.seed, trials)?;
                let want = expected(d);
                let ok = got.unanimous && got.dimension as u128 == want;
                let check = if ok {
                    Check::pass(format!("degree_{d}"))
                } else {
                    Check::fail(
                        format!("degree_{d}"),
                        witness(
                            format!("degree {d}"),
                            format!("dims {:?} vs {want}", got.per_trial),
                        ),
                    )
                };
                set.push(check.with_detail(json!({ "dimension": got.dimension, "expected": want.to_string(), "per_trial": got.per_trial })));
            }
            let mut report = CheckReport::new(
                "qa poincare",
                params([
                    ("algebra", name.to_string()),
                    ("n", n.to_string()),
                    ("max_deg", max_deg.to_string()),
                    ("modulus", spec.modulus.to_string()),
                    ("seed", spec.seed.to_string()),
                    ("trials", trials.to_string()),
                ]),
            );
            report.add(set);
            finish(report, &output)
        }
        QaCommand::Dual { n, max_deg, output } => {
            let (l_checks, _) = l_functionals(n)?;
            let mut report = CheckReport::new("qa dual", params([("n", n.to_string()), ("max_deg", max_deg.to_string())]));
            report.add(l_checks.prefixed("l"));
            report.add(psi_phi_check(n, max_deg)?.prefixed("psi_phi"));
            finish(report, &output)
        }
    }
}

fn algebra_type(a: BdAlgebra) -> AlgebraType {
    match a {
        BdAlgebra::Sl => AlgebraType::Sl,
        BdAlgebra::Gl => AlgebraType::Gl,
    }
}

/// The algebra, quadruple, and report parameters selected by the flags.
/// `f0` is solved for when absent; the freedom dimension is reported.
fn load_quadruple(source: &BdSource) -> CliResult<(ReductiveAlgebra, AdmissibleTriple, Option<QMatrix>, BTreeMap<String, String>)> {
    match &source.file {
        Some(path) => {
            let file = BdFile::from_json(&read_file(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            let g = ReductiveAlgebra::build(file.kind, file.rank)?;
            let f0 = file.f0_matrix()?;
            Ok((g, file.triple(), f0, params([("file", path.display().to_string())])))
        }
        None => {
            let m = source.rank.ok_or_else(|| UsageError("give --rank or --file".into()))?;
            let kind = algebra_type(source.algebra);
            let g = ReductiveAlgebra::build(kind, m)?;
            let triple = match source.triple {
                Some(TripleKind::Cg) => AdmissibleTriple::cremmer_gervais(g.num_simple()),
                None => return Err(UsageError("give --triple or --file".into())),
            };
            Ok((
                g,
                triple,
                None,
                params([("algebra", kind.name().to_string()), ("rank", m.to_string()), ("triple", "cg".into())]),
            ))
        }
    }
}

fn bd(cmd: BdCommand) -> CliResult<bool> {
    match cmd {
        BdCommand::Run {
            source,
            compare,
            emit,
            output,
        } => {
            let (g, triple, f0, mut p) = load_quadruple(&source)?;
            p.insert("compare".into(), compare.to_string());
            let mut report = CheckReport::new("bd run", p);
            let cg_sl = source.file.is_none() && g.kind() == AlgebraType::Sl && g.m() >= 3;
            let (quad, run) = if cg_sl {
                let sol = solve_f0(&g, &triple)?;
                let quad = BdQuadruple {
                    triple,
                    f0: sol.particular,
                };
                (quad, cg_pipeline(g.m(), compare)?)
            } else {
                let (f0, freedom) = match f0 {
                    Some(f0) => (f0, None),
                    None => {
                        let sol = solve_f0(&g, &triple)?;
                        let k = sol.freedom.len();
                        (sol.particular, Some(k))
                    }
                };
                let quad = BdQuadruple { triple, f0 };
                let run = run_quadruple(&g, &quad)?;
                if let Some(k) = freedom {
                    report.add(CheckSet {
                        checks: vec![Check::info("f0_solution", json!({ "freedom": k }))],
                    });
                }
                (quad, run)
            };
            report.add(CheckSet {
                checks: vec![Check::info(
                    "summary",
                    json!({
                        "algebra": g.name(),
                        "quotient_dim": run.quotient_dim,
                        "induced_tau": run.induced.as_ref().map(|t| t.tau.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<BTreeMap<_, _>>()),
                    }),
                )],
            });
            report.add(run.checks);
            if let Some(path) = emit {
                let file = BdFile::new(g.kind(), g.m(), &quad.triple, Some(&quad.f0));
                fs::write(&path, file.to_json()).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            }
            finish(report, &output)
        }
        BdCommand::Validate { source, output } => {
            let (g, triple, f0, p) = load_quadruple(&source)?;
            let mut report = CheckReport::new("bd validate", p);
            let checks = match f0 {
                Some(f0) => validate_quadruple(&g, &BdQuadruple { triple, f0 })?,
                None => validate_triple(&g, &triple)?.prefixed("triple"),
            };
            report.add(checks);
            finish(report, &output)
        }
    }
}

fn limit(args: &LimitArgs) -> CliResult<bool> {
    let n = args.n;
    let direction = args.direction.clone().unwrap_or_else(|| vec![n as i64, 1]);
    if direction.len() != 2 {
        return Err(UsageError(format!("--direction takes two integers, got {}", direction.len())));
    }
    let r = build_cg(CgParams::new(n))?;
    let lim = semiclassical_limit(&r, &direction.iter().map(|&u| rat(u)).collect::<Vec<_>>())?;
    let entries: Vec<_> = lim
        .r
        .entries()
        .map(|(row, col, v)| json!({ "in": col, "out": row, "value": v.constant_term().to_string() }))
        .collect();
    let mut report = CheckReport::new(
        "limit",
        params([("n", n.to_string()), ("direction", format!("{},{}", direction[0], direction[1]))]),
    );
    report.add(CheckSet {
        checks: vec![lim.cybe, Check::info("classical_r", json!({ "entries": entries }))],
    });
    finish(report, &args.output)
}
