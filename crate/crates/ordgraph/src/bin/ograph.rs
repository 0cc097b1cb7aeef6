//! Command-line front end for the ordinal-graph toolkit.
//!
//! Exit codes: 0 pass/verified, 1 violation found, 2 invalid input. Output
//! is deterministic; `--json` switches to the structured report form. The
//! tool never styles output, so ORDGRAPH_COLOR=never is honored trivially.

use clap::{Parser, Subcommand, ValueEnum};
use ordgraph::boundary::{self, StarPath};
use ordgraph::conditions::{self, ConditionS};
use ordgraph::ordinal;
use ordgraph::patheng;
use ordgraph::report::{Report, Status};
use ordgraph::shift::{self, Cancellativity};
use ordgraph::starops::{self, Representation, ShiftVector};
use ordgraph::Presentation;
use std::collections::BTreeSet;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "ograph", version, about = "Exact toolkit for finitely presented ordinal graphs")]
struct Cli {
    /// Emit the structured JSON report
    #[arg(long, global = true)]
    json: bool,
    /// Check relation levels in parallel with a deterministic merge
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Regular,
    ConditionC,
    ConditionS,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrdinalOp {
    Add,
    Mul,
    Sub,
    Cmp,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathOperation {
    Normalize,
    Compose,
    Head,
    Tail,
    Divides,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepOperation {
    Verify,
    Correspondence,
    Tau,
    Pi,
}

#[derive(Subcommand)]
enum Cmd {
    /// Load a presentation file and run every structural check
    Validate { file: PathBuf },
    /// Decidable predicates: regularity table, condition (C), condition (S)
    Check {
        what: CheckKind,
        file: PathBuf,
        /// Level k for the regularity table
        #[arg(long, default_value_t = 0)]
        alpha: usize,
        /// Search bound for condition (S); defaults to 2·(atom count)+2
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Exact ordinal arithmetic on expressions like "w^w*2+w*3+2"
    Ordinal {
        op: OrdinalOp,
        a: String,
        b: String,
    },
    /// Path engine: normalize, compose, head, tail, divides
    Path {
        op: PathOperation,
        file: PathBuf,
        args: Vec<String>,
    },
    /// Enumerate boundary star paths from a vertex
    Boundary {
        file: PathBuf,
        vertex: String,
        #[arg(long, default_value_t = 1)]
        prefix: usize,
        #[arg(long, default_value_t = 1)]
        cycle: usize,
    },
    /// Cancellativity and the shift value at a level
    Shift {
        file: PathBuf,
        path: String,
        #[arg(long)]
        alpha: usize,
    },
    /// Representation checks: verify, correspondence, tau, pi
    Rep {
        op: RepOperation,
        file: PathBuf,
        /// Representation file (verify and correspondence)
        rep_file: Option<PathBuf>,
        /// Correspondence level k
        #[arg(long, default_value_t = 0)]
        alpha: usize,
        /// Comma-separated level subset for verify
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Boundary enumeration bounds for tau/pi samples
        #[arg(long, default_value_t = 2)]
        prefix: usize,
        #[arg(long, default_value_t = 2)]
        cycle: usize,
        /// Number of levels ζ for the shift representation
        #[arg(long)]
        zeta: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let report = run(&cli, command);
    if cli.json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
    std::process::exit(report.exit_code());
}

fn invalid(command: String, msg: String) -> Report {
    let mut r = Report::new(command, Status::Invalid);
    r.finding("error", msg, None);
    r
}

fn load_presentation(path: &PathBuf) -> Result<Presentation, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Presentation::load(&text).map_err(|e| e.to_string())
}

fn run(cli: &Cli, command: String) -> Report {
    match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(command, file),
        Cmd::Check {
            what,
            file,
            alpha,
            max_n,
        } => cmd_check(command, *what, file, *alpha, *max_n),
        Cmd::Ordinal { op, a, b } => cmd_ordinal(command, *op, a, b),
        Cmd::Path { op, file, args } => cmd_path(command, *op, file, args),
        Cmd::Boundary {
            file,
            vertex,
            prefix,
            cycle,
        } => cmd_boundary(command, file, vertex, *prefix, *cycle),
        Cmd::Shift { file, path, alpha } => cmd_shift(command, file, path, *alpha),
        Cmd::Rep {
            op,
            file,
            rep_file,
            alpha,
            levels,
            samples,
            seed,
            prefix,
            cycle,
            zeta,
        } => cmd_rep(
            command,
            *op,
            file,
            rep_file.as_ref(),
            *alpha,
            levels.as_deref(),
            *samples,
            *seed,
            *prefix,
            *cycle,
            *zeta,
            cli.parallel,
        ),
    }
}

fn cmd_validate(command: String, file: &PathBuf) -> Report {
    match load_presentation(file) {
        Ok(p) => {
            let vr = p.validate();
            if vr.is_ok() {
                Report::new(command, Status::Pass)
            } else {
                // load would have failed already; kept for the contract
                let mut r = Report::new(command, Status::Invalid);
                for f in vr.failures {
                    r.finding("validate", f.to_string(), None);
                }
                r
            }
        }
        Err(msg) => invalid(command, msg),
    }
}

fn cmd_check(
    command: String,
    what: CheckKind,
    file: &PathBuf,
    alpha: usize,
    max_n: Option<usize>,
) -> Report {
    let p = match load_presentation(file) {
        Ok(p) => p,
        Err(msg) => return invalid(command, msg),
    };
    match what {
        CheckKind::Regular => {
            let mut r = Report::new(command, Status::Pass);
            let mut names: Vec<_> = p.vertex_ids().collect();
            names.sort_by(|a, b| p.vertex_name(*a).cmp(p.vertex_name(*b)));
            for v in names {
                let reg = conditions::regularity(&p, v, alpha);
                r.line(format!(
                    "{}: {} row_count={}",
                    p.vertex_name(v),
                    if reg.regular { "regular" } else { "not-regular" },
                    reg.row_count
                ));
            }
            r
        }
        CheckKind::ConditionC => match conditions::condition_c(&p) {
            Ok(()) => Report::new(command, Status::Pass),
            Err(w) => {
                let mut r = Report::new(command, Status::Fail);
                let word = w
                    .word
                    .iter()
                    .map(|&g| p.gen_name(g))
                    .collect::<Vec<_>>()
                    .join(".");
                r.finding(
                    "condition-c",
                    format!("level {} atom {}", w.level, p.gen_name(w.atom)),
                    Some(word),
                );
                r
            }
        },
        CheckKind::ConditionS => {
            let n = max_n.unwrap_or_else(|| conditions::default_max_n(&p));
            match conditions::condition_s(&p, n) {
                ConditionS::VerifiedUpTo(n) => Report::new(command, Status::VerifiedUpTo(n)),
                ConditionS::Violation {
                    level,
                    component,
                    n,
                } => {
                    let mut r = Report::new(command, Status::Fail);
                    let comp = component
                        .iter()
                        .map(|&v| p.vertex_name(v))
                        .collect::<Vec<_>>()
                        .join(",");
                    r.finding(
                        "condition-s",
                        format!("level {level} component {{{comp}}} n={n}"),
                        None,
                    );
                    r
                }
            }
        }
    }
}

fn cmd_ordinal(command: String, op: OrdinalOp, a: &str, b: &str) -> Report {
    let parse = |s: &str| ordinal::parse(s).map_err(|e| e.to_string());
    let result = parse(a).and_then(|oa| {
        let ob = parse(b)?;
        Ok(match op {
            OrdinalOp::Add => oa.add(&ob).to_string(),
            OrdinalOp::Mul => oa.mul(&ob).to_string(),
            OrdinalOp::Sub => oa.left_sub(&ob).map_err(|e| e.to_string())?.to_string(),
            OrdinalOp::Cmp => match oa.cmp(&ob) {
                std::cmp::Ordering::Less => "less".to_string(),
                std::cmp::Ordering::Equal => "equal".to_string(),
                std::cmp::Ordering::Greater => "greater".to_string(),
            },
        })
    });
    match result {
        Ok(text) => {
            let mut r = Report::new(command, Status::Pass);
            r.line(text);
            r
        }
        Err(msg) => invalid(command, msg),
    }
}

fn cmd_path(command: String, op: PathOperation, file: &PathBuf, args: &[String]) -> Report {
    let p = match load_presentation(file) {
        Ok(p) => p,
        Err(msg) => return invalid(command, msg),
    };
    let need = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("expected {n} argument(s), got {}", args.len()))
        }
    };
    let result: Result<String, String> = (|| match op {
        PathOperation::Normalize => {
            need(1)?;
            let path = patheng::parse_path(&p, &args[0]).map_err(|e| e.to_string())?;
            Ok(path.display(&p))
        }
        PathOperation::Compose => {
            need(2)?;
            let a = patheng::parse_path(&p, &args[0]).map_err(|e| e.to_string())?;
            let b = patheng::parse_path(&p, &args[1]).map_err(|e| e.to_string())?;
            let c = patheng::compose(&p, &a, &b).map_err(|e| e.to_string())?;
            Ok(c.display(&p))
        }
        PathOperation::Head | PathOperation::Tail => {
            need(2)?;
            let a = patheng::parse_path(&p, &args[0]).map_err(|e| e.to_string())?;
            let beta = ordinal::parse(&args[1]).map_err(|e| e.to_string())?;
            let out = match op {
                PathOperation::Head => patheng::head(&p, &a, &beta),
                _ => patheng::tail(&p, &a, &beta),
            }
            .map_err(|e| e.to_string())?;
            Ok(out.display(&p))
        }
        PathOperation::Divides => {
            need(2)?;
            let a = patheng::parse_path(&p, &args[0]).map_err(|e| e.to_string())?;
            let b = patheng::parse_path(&p, &args[1]).map_err(|e| e.to_string())?;
            Ok(patheng::divides(&p, &a, &b).to_string())
        }
    })();
    match result {
        Ok(text) => {
            let mut r = Report::new(command, Status::Pass);
            r.line(text);
            r
        }
        Err(msg) => invalid(command, msg),
    }
}

fn cmd_boundary(
    command: String,
    file: &PathBuf,
    vertex: &str,
    prefix: usize,
    cycle: usize,
) -> Report {
    let p = match load_presentation(file) {
        Ok(p) => p,
        Err(msg) => return invalid(command, msg),
    };
    let Some(v) = p.vertex(vertex) else {
        return invalid(command, format!("unknown vertex `{vertex}`"));
    };
    let mut r = Report::new(command, Status::Pass);
    for f in boundary::enumerate_boundary(&p, v, prefix, cycle) {
        r.line(f.display(&p));
    }
    r
}

fn cmd_shift(command: String, file: &PathBuf, path: &str, alpha: usize) -> Report {
    let p = match load_presentation(file) {
        Ok(p) => p,
        Err(msg) => return invalid(command, msg),
    };
    let f = match boundary::parse_star(&p, path) {
        Ok(f) => f,
        Err(e) => return invalid(command, e.to_string()),
    };
    let mut r = Report::new(command.clone(), Status::Pass);
    match shift::is_cancellative(&p, &f, alpha) {
        Cancellativity::Cancellative => {
            r.line("cancellative: true".to_string());
            match shift::shift_v(&p, &f, alpha) {
                Ok(v) => r.line(format!("shift: {v}")),
                Err(e) => return invalid(command, e.to_string()),
            }
        }
        Cancellativity::Witness { epsilon, beta } => {
            r.line("cancellative: false".to_string());
            r.line(format!("witness: e={epsilon} b={beta}"));
        }
    }
    r
}

fn parse_levels(text: &str) -> Result<BTreeSet<usize>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_rep(
    command: String,
    op: RepOperation,
    file: &PathBuf,
    rep_file: Option<&PathBuf>,
    alpha: usize,
    levels: Option<&str>,
    samples: usize,
    seed: u64,
    prefix: usize,
    cycle: usize,
    zeta: Option<usize>,
    parallel: bool,
) -> Report {
    let p = match load_presentation(file) {
        Ok(p) => p,
        Err(msg) => return invalid(command, msg),
    };
    let load_rep = |path: Option<&PathBuf>| -> Result<Representation, String> {
        let path = path.ok_or("this operation needs a representation file")?;
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Representation::load(&text).map_err(|e| e.to_string())
    };
    match op {
        RepOperation::Verify => {
            let rep = match load_rep(rep_file) {
                Ok(rep) => rep,
                Err(msg) => return invalid(command, msg),
            };
            let selected: Option<BTreeSet<usize>> = match levels {
                Some(text) => match parse_levels(text) {
                    Ok(s) => Some(s),
                    Err(msg) => return invalid(command, msg),
                },
                None => None,
            };
            let outcome = if parallel {
                verify_ck_parallel(&p, &rep, selected.as_ref())
            } else {
                starops::verify_ck(&p, &rep, selected.as_ref()).map_err(|e| e.to_string())
            };
            match outcome {
                Ok(report) if report.is_ok() => Report::new(command, Status::Pass),
                Ok(report) => {
                    let mut r = Report::new(command, Status::Fail);
                    for f in report.failures {
                        r.finding("relation", format!("({}) {}", f.relation, f.subject), None);
                    }
                    r
                }
                Err(msg) => invalid(command, msg),
            }
        }
        RepOperation::Correspondence => {
            let rep = match load_rep(rep_file) {
                Ok(rep) => rep,
                Err(msg) => return invalid(command, msg),
            };
            let mut rng = starops::sample_rng(seed);
            let mut xs = Vec::new();
            let mut algebra = Vec::new();
            let mut gpaths = Vec::new();
            for _ in 0..samples {
                match (
                    starops::sample_x_element(&p, alpha, &rep, &mut rng),
                    starops::sample_algebra_element(&p, &rep, alpha, &mut rng),
                ) {
                    (Ok(x), Ok(a)) => {
                        xs.push(x);
                        algebra.push(a);
                        gpaths.push(starops::sample_low_path(&p, alpha, &mut rng));
                    }
                    (Err(e), _) | (_, Err(e)) => return invalid(command, e.to_string()),
                }
            }
            match starops::verify_correspondence(&p, alpha, &rep, &rep, &xs, &algebra, &gpaths) {
                Ok(report) if report.is_ok() => {
                    let mut r = Report::new(command, Status::Pass);
                    r.line(format!("checks: {}", report.checks));
                    r
                }
                Ok(report) => {
                    let mut r = Report::new(command, Status::Fail);
                    for f in report.failures {
                        r.finding("correspondence", f, None);
                    }
                    r
                }
                Err(e) => invalid(command, e.to_string()),
            }
        }
        RepOperation::Tau => {
            let samples = boundary_samples(&p, prefix, cycle);
            let report = starops::verify_tau(&p, &samples);
            finish_pointwise(command, "tau", report)
        }
        RepOperation::Pi => {
            let zeta = zeta.unwrap_or(p.max_level() + 1);
            let mut vectors = Vec::new();
            for f in boundary_samples(&p, prefix, cycle) {
                vectors.push(ShiftVector {
                    f: f.clone(),
                    n: vec![0; zeta],
                });
                vectors.push(ShiftVector {
                    f,
                    n: (0..zeta as i64).collect(),
                });
            }
            match starops::verify_pi(&p, &vectors, zeta) {
                Ok(report) => finish_pointwise(command, "pi", report),
                Err(e) => invalid(command, e.to_string()),
            }
        }
    }
}

fn boundary_samples(p: &Presentation, prefix: usize, cycle: usize) -> Vec<StarPath> {
    let mut out = Vec::new();
    for v in p.vertex_ids() {
        out.extend(boundary::enumerate_boundary(p, v, prefix, cycle));
    }
    out
}

fn finish_pointwise(command: String, check: &str, report: starops::PointwiseReport) -> Report {
    if report.is_ok() {
        let mut r = Report::new(command, Status::Pass);
        r.line(format!("checks: {}", report.checks));
        r
    } else {
        let mut r = Report::new(command, Status::Fail);
        for f in report.failures {
            r.finding(check, f, None);
        }
        r
    }
}

/// Relation families checked in parallel and merged back in family order,
/// so the report is byte-identical to the sequential run.
fn verify_ck_parallel(
    p: &Presentation,
    rep: &Representation,
    levels: Option<&BTreeSet<usize>>,
) -> Result<starops::CkReport, String> {
    let results: Vec<Result<starops::CkReport, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = starops::CkPart::ALL
            .into_iter()
            .map(|part| {
                scope.spawn(move || {
                    starops::verify_ck_part(p, rep, levels, part).map_err(|e| e.to_string())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?.failures);
    }
    Ok(starops::CkReport { failures })
}
