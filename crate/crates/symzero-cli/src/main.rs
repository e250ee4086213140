//! Command-line front end for the symzero library.
//!
//! Every computation and verification is a subcommand with machine-readable
//! output: a JSON report by default, CSV where the natural artifact is a
//! table (`eigenform`, `coeffs`, `zero-scan`, `sweep`).  Each emitted file
//! embeds the full run configuration, so an artifact identifies the run that
//! produced it without external bookkeeping.
//!
//! Exit status: 0 when every check passed, 1 when a verification ran and
//! failed, 2 on usage or precision errors.  Diagnostics go to standard error
//! as a single JSON line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use symzero::hecke_forms::{self, io as eigen_io, Eigenform, SatakeParams};
use symzero::lvalue::{self, KernelSpec};
use symzero::{archimedean, auxiliary, decomposition, sym_power, Error, Precision};

#[derive(Parser)]
#[command(name = "symzero", version, about = "Symmetric power L-function toolkit")]
struct Cli {
    /// Numeric precision: `double`, `high`, or `high:BITS`.
    #[arg(
        long,
        global = true,
        env = "SYMZERO_PRECISION",
        default_value = "double"
    )]
    precision: String,

    /// Artifact format.  CSV is available for tabular subcommands only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the artifact to this path instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Numeric comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Multiset,
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalPath {
    Smoothed,
    Euler,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hecke eigenvalues of a level-1 eigenform.
    Eigenform {
        #[arg(long)]
        weight: u32,
        /// Number of coefficients.
        #[arg(long, default_value_t = 100)]
        x: usize,
        /// Eigenform index when dim S_k > 1 (numeric path).
        #[arg(long)]
        index: Option<usize>,
        /// Emit exact integer coefficients (CSV format only).
        #[arg(long)]
        exact: bool,
        /// Import eigenvalues from a file instead of computing them.
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// Dirichlet coefficients of L(s, Sym^n f).
    Coeffs {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        #[arg(long, default_value_t = 100)]
        x: usize,
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// Rankin-Selberg decomposition checks at three levels.
    VerifyDecomp {
        #[arg(long, value_enum)]
        level: Level,
        /// Sweep bound on n (multiset level).
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        /// Sweep bound on r (multiset level).
        #[arg(long, default_value_t = 20)]
        r_max: u32,
        /// Symmetric power degree (local and global levels).
        #[arg(long)]
        n: Option<u32>,
        /// Degree offset of the second factor (local and global levels).
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        /// Prime at which the local identity is checked.
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Coefficient range for the global identity.
        #[arg(long, default_value_t = 500)]
        x: usize,
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// Positivity of the auxiliary D(s) Dirichlet coefficients.
    AuxPositivity {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        #[arg(long, default_value_t = 1000)]
        x: usize,
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// Gamma factors of the completed L-function.
    Gamma {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },

    /// Analytic conductor and its log-scale model.
    Conductor {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Evaluation point on the real axis.
        #[arg(long, default_value_t = 0.0)]
        s: f64,
    },

    /// Zero-free interval endpoint 1 - c/(n^4 log(nk)).
    ZeroFree {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },

    /// Mellin kernel: closed form against vertical-line quadrature.
    KernelCheck {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        x: f64,
        /// Quadrature height T.
        #[arg(long, default_value_t = 1e4)]
        height: f64,
        /// Initial node count for the refinement ladder.
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
    },

    /// L(1, Sym^n f) by smoothed sum and/or truncated Euler product.
    Lvalue {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        #[arg(long, default_value_t = 100_000)]
        x: usize,
        /// Required error bound; infinity disables the convergence check.
        #[arg(long, default_value_t = f64::INFINITY)]
        target: f64,
        #[arg(long, value_enum, default_value_t = EvalPath::Both)]
        path: EvalPath,
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// L(1, Sym^n f) against the lower bound C (log k)^-(2n+2+eps).
    CheckBound {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 100_000)]
        x: usize,
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// Heuristic sign scan of the smoothed series on (a, 1).
    ZeroScan {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        /// Left endpoint; defaults to the zero-free formula with the given c.
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 100_000)]
        x: usize,
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
    },

    /// Conductor / zero-free-endpoint sweep over the (n, k) grid.
    Sweep {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Largest even weight; the grid starts at k = 12.
        #[arg(long, default_value_t = 40)]
        k_max: u32,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Worker threads; the output is identical for any count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

/// Run configuration embedded in every artifact.  Worker count is excluded:
/// outputs are byte-identical for any parallelism, so it is not part of the
/// run's identity.
#[derive(Clone, Debug, Serialize)]
struct RunConfig {
    subcommand: String,
    weight: Option<u32>,
    n: Option<u32>,
    truncation: Option<usize>,
    tolerance: f64,
    precision: String,
    format: String,
    output: String,
}

enum Payload {
    Json(serde_json::Value),
    Table(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", json!({ "error": e.to_string(), "kind": "usage" }));
            return ExitCode::from(2);
        }
    };

    let precision: Precision = match cli.precision.parse() {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };

    match run(&cli, precision) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!(
                "{}",
                json!({ "error": "verification failed", "kind": "verification" })
            );
            ExitCode::from(1)
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    let (code, kind) = classify(e);
    eprintln!("{}", json!({ "error": e.to_string(), "kind": kind }));
    ExitCode::from(code)
}

/// Exit code and machine-readable kind for a library error.  Findings of
/// mathematical inconsistency are verification failures (1); everything
/// else is a usage, io, or precision problem (2).
fn classify(e: &Error) -> (u8, &'static str) {
    match e {
        Error::RamanujanViolation { .. }
        | Error::MultisetCardinality { .. }
        | Error::ImaginaryResidue { .. } => (1, "verification"),
        Error::Precision { .. }
        | Error::ConvergenceTarget { .. }
        | Error::QuadratureDivergence { .. }
        | Error::EigenvalueCollision { .. } => (2, "precision"),
        Error::Io(_) | Error::EigenFile { .. } => (2, "io"),
        _ => (2, "usage"),
    }
}

fn run(cli: &Cli, precision: Precision) -> Result<bool, Error> {
    let config = |sub: &str, weight: Option<u32>, n: Option<u32>, x: Option<usize>| RunConfig {
        subcommand: sub.into(),
        weight,
        n,
        truncation: x,
        tolerance: cli.tol,
        precision: precision.to_string(),
        format: cli.format.name().into(),
        output: cli
            .out
            .as_ref()
            .map_or_else(|| "-".into(), |p| p.display().to_string()),
    };

    let require_json = |sub: &str| -> Result<(), Error> {
        if cli.format == Format::Csv {
            return Err(Error::InvalidArgument(format!(
                "csv output is not available for `{sub}`; use --format json"
            )));
        }
        Ok(())
    };

    match &cli.cmd {
        Cmd::Eigenform {
            weight,
            x,
            index,
            exact,
            eigenvalues,
        } => {
            let cfg = config("eigenform", Some(*weight), None, Some(*x));
            let f = resolve_form(*weight, *x, *index, cli.tol, eigenvalues.as_ref())?;
            match cli.format {
                Format::Csv => {
                    let mut body = Vec::new();
                    if *exact {
                        eigen_io::write_exact(&f, &mut body)?;
                    } else {
                        eigen_io::write_lambda(&f, &mut body)?;
                    }
                    let body = String::from_utf8(body).expect("ascii table");
                    emit(&cfg, Payload::Table(body), cli.out.as_ref())?;
                }
                Format::Json => {
                    if *exact {
                        return Err(Error::InvalidArgument(
                            "exact coefficients exceed JSON number range; use --format csv"
                                .into(),
                        ));
                    }
                    let lambda: Vec<f64> = (1..=f.precision()).map(|m| f.lambda(m)).collect();
                    let report = json!({
                        "weight": f.weight(),
                        "normalized": true,
                        "lambda": lambda,
                    });
                    emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
                }
            }
            Ok(true)
        }

        Cmd::Coeffs {
            n,
            weight,
            x,
            eigenvalues,
        } => {
            let cfg = config("coeffs", Some(*weight), Some(*n), Some(*x));
            let f = resolve_form(*weight, *x, None, cli.tol, eigenvalues.as_ref())?;
            let series = sym_power::dirichlet_coeffs(*n, &f, *x)?;
            match cli.format {
                Format::Csv => {
                    let mut body = Vec::new();
                    series.write_csv(&mut body)?;
                    emit(
                        &cfg,
                        Payload::Table(String::from_utf8(body).expect("ascii table")),
                        cli.out.as_ref(),
                    )?;
                }
                Format::Json => {
                    let report = json!({
                        "label": series.label(),
                        "truncation": series.truncation(),
                        "coeffs": series.coeffs()[1..].to_vec(),
                    });
                    emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
                }
            }
            Ok(true)
        }

        Cmd::VerifyDecomp {
            level,
            n_max,
            r_max,
            n,
            r,
            weight,
            prime,
            x,
            eigenvalues,
        } => {
            require_json("verify-decomp")?;
            let need = |v: &Option<u32>, name: &str| {
                v.ok_or_else(|| {
                    Error::InvalidArgument(format!("--{name} is required at this level"))
                })
            };
            let (report, pass) = match level {
                Level::Multiset => {
                    let sweep = decomposition::verify_multiset_identity(*n_max, *r_max);
                    let pass = sweep.pass;
                    (
                        json!({ "level": "multiset", "n_max": n_max, "r_max": r_max,
                                "sweep": sweep }),
                        pass,
                    )
                }
                Level::Local => {
                    let (n, r) = (need(n, "n")?, need(r, "r")?);
                    let f = resolve_form(
                        *weight,
                        *prime as usize,
                        None,
                        cli.tol,
                        eigenvalues.as_ref(),
                    )?;
                    let sp = SatakeParams::of(&f, *prime)?;
                    let cell = decomposition::verify_local_identity(n, r, &sp, cli.tol)?;
                    let pass = cell.pass;
                    (json!({ "prime": prime, "cell": cell }), pass)
                }
                Level::Global => {
                    let (n, r) = (need(n, "n")?, need(r, "r")?);
                    let f = resolve_form(*weight, *x, None, cli.tol, eigenvalues.as_ref())?;
                    let cell = decomposition::verify_global_identity(n, r, &f, *x, cli.tol)?;
                    let pass = cell.pass;
                    (json!({ "cell": cell }), pass)
                }
            };
            let cfg = config("verify-decomp", Some(*weight), *n, Some(*x));
            emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
            Ok(pass)
        }

        Cmd::AuxPositivity {
            n,
            weight,
            x,
            eigenvalues,
        } => {
            require_json("aux-positivity")?;
            let cfg = config("aux-positivity", Some(*weight), Some(*n), Some(*x));
            let f = resolve_form(*weight, *x, None, cli.tol, eigenvalues.as_ref())?;
            let report = auxiliary::certify_positivity(*n, &f, *x, cli.tol, precision)?;
            let pass = report.pass;
            emit(
                &cfg,
                Payload::Json(serde_json::to_value(&report).expect("serializable")),
                cli.out.as_ref(),
            )?;
            Ok(pass)
        }

        Cmd::Gamma { n, k } => {
            require_json("gamma")?;
            let cfg = config("gamma", Some(*k), Some(*n), None);
            let factors = archimedean::gamma_factors(*n, *k)?;
            let degree: u32 = factors.iter().map(|g| g.degree()).sum();
            let report = json!({ "n": n, "k": k, "factors": factors, "degree": degree });
            emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
            Ok(true)
        }

        Cmd::Conductor { n, k, s } => {
            require_json("conductor")?;
            let cfg = config("conductor", Some(*k), Some(*n), None);
            let q = archimedean::analytic_conductor_at(*n, *k, *s)?;
            let log_q = if *s == 0.0 {
                archimedean::log_analytic_conductor(*n, *k)?
            } else {
                q.ln()
            };
            let (_, model) = archimedean::log_conductor_bound(*n, *k)?;
            let report = json!({
                "n": n, "k": k, "s": s,
                "q": q,
                "log_q": log_q,
                "log_model": model,
                "arithmetic_conductor": archimedean::LEVEL_ONE_ARITHMETIC_CONDUCTOR,
            });
            emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
            Ok(true)
        }

        Cmd::ZeroFree { n, k, c } => {
            require_json("zero-free")?;
            let cfg = config("zero-free", Some(*k), Some(*n), None);
            let interval = archimedean::zero_free_endpoint(*n, *k, *c)?;
            let theorem = archimedean::theorem_form_endpoint(*k, *c)?;
            let report = json!({ "interval": interval, "theorem_form_endpoint": theorem });
            emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
            Ok(true)
        }

        Cmd::KernelCheck {
            r,
            x,
            height,
            nodes,
        } => {
            require_json("kernel-check")?;
            let cfg = config("kernel-check", None, None, None);
            let spec = KernelSpec::new(*r, *x)?;
            let closed = lvalue::kernel_closed_form(&spec);
            let quad = lvalue::kernel_quadrature(&spec, *height, *nodes)?;
            let abs_error = (quad.value - closed).abs();
            let pass = abs_error <= quad.tail_bound;
            let report = json!({
                "r": r, "x": x, "height": height,
                "closed_form": closed,
                "quadrature": quad.value,
                "abs_error": abs_error,
                "tail_bound": quad.tail_bound,
                "refinement_gap": quad.refinement_gap,
                "nodes_used": quad.nodes_used,
                "pass": pass,
            });
            emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
            Ok(pass)
        }

        Cmd::Lvalue {
            n,
            weight,
            x,
            target,
            path,
            eigenvalues,
        } => {
            require_json("lvalue")?;
            let cfg = config("lvalue", Some(*weight), Some(*n), Some(*x));
            let f = resolve_form(*weight, *x, None, cli.tol, eigenvalues.as_ref())?;
            let (report, pass) = match path {
                EvalPath::Smoothed => {
                    let v = lvalue::l_value_at_1(*n, &f, *x, *target)?;
                    (json!({ "smoothed": v }), true)
                }
                EvalPath::Euler => {
                    let v = lvalue::l_value_euler(*n, &f, *x)?;
                    (json!({ "euler": v }), true)
                }
                EvalPath::Both => {
                    let s = lvalue::l_value_at_1(*n, &f, *x, *target)?;
                    let e = lvalue::l_value_euler(*n, &f, *x)?;
                    let gap = (s.value - e.value).abs();
                    let budget = s.error_bound + e.error_bound;
                    let agree = gap <= budget;
                    (
                        json!({
                            "smoothed": s, "euler": e,
                            "paths_gap": gap,
                            "combined_error": budget,
                            "paths_agree": agree,
                        }),
                        agree,
                    )
                }
            };
            emit(&cfg, Payload::Json(report), cli.out.as_ref())?;
            Ok(pass)
        }

        Cmd::CheckBound {
            n,
            weight,
            eps,
            c,
            x,
            eigenvalues,
        } => {
            require_json("check-bound")?;
            let cfg = config("check-bound", Some(*weight), Some(*n), Some(*x));
            let f = resolve_form(*weight, *x, None, cli.tol, eigenvalues.as_ref())?;
            let report = lvalue::check_bound(*n, &f, *eps, *c, *x)?;
            let pass = report.pass;
            emit(
                &cfg,
                Payload::Json(serde_json::to_value(&report).expect("serializable")),
                cli.out.as_ref(),
            )?;
            Ok(pass)
        }

        Cmd::ZeroScan {
            n,
            weight,
            a,
            c,
            steps,
            x,
            eigenvalues,
        } => {
            let cfg = config("zero-scan", Some(*weight), Some(*n), Some(*x));
            let a = match a {
                Some(a) => *a,
                None => archimedean::zero_free_endpoint(*n, *weight, *c)?.left_endpoint,
            };
            let f = resolve_form(*weight, *x, None, cli.tol, eigenvalues.as_ref())?;
            let scan = lvalue::zero_scan(*n, &f, a, *steps, *x)?;
            let pass = scan.sign_changes == 0;
            match cli.format {
                Format::Csv => {
                    let mut body = Vec::new();
                    scan.write_csv(&mut body)?;
                    emit(
                        &cfg,
                        Payload::Table(String::from_utf8(body).expect("ascii table")),
                        cli.out.as_ref(),
                    )?;
                }
                Format::Json => {
                    emit(
                        &cfg,
                        Payload::Json(serde_json::to_value(&scan).expect("serializable")),
                        cli.out.as_ref(),
                    )?;
                }
            }
            Ok(pass)
        }

        Cmd::Sweep {
            n_max,
            k_max,
            c,
            workers,
        } => {
            if *workers == 0 {
                return Err(Error::InvalidArgument("--workers must be at least 1".into()));
            }
            let cfg = config("sweep", None, Some(*n_max), None);
            let mut cells = Vec::new();
            for n in 1..=*n_max {
                let mut k = 12;
                while k <= *k_max {
                    cells.push((n, k));
                    k += 2;
                }
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(*workers)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            let mut rows = pool.install(|| {
                cells
                    .par_iter()
                    .map(|&(n, k)| archimedean::sweep_cell(n, k, *c))
                    .collect::<Result<Vec<_>, Error>>()
            })?;
            // completion order is nondeterministic under parallelism; the
            // artifact is keyed and sorted
            rows.sort_by_key(|row| (row.n, row.k));
            let text = render_sweep(&cfg, &rows, cli.format);
            write_text(&text, cli.out.as_ref())?;
            Ok(true)
        }
    }
}

/// JSON-lines (self-describing header record, then one record per cell) or
/// CSV with the config in a comment line.
fn render_sweep(cfg: &RunConfig, rows: &[archimedean::SweepRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = String::new();
            let header = json!({
                "record": "header",
                "columns": ["n", "k", "q", "log_q", "bound", "endpoint"],
                "config": cfg,
            });
            text.push_str(&header.to_string());
            text.push('\n');
            for row in rows {
                let mut v = serde_json::to_value(row).expect("serializable");
                v.as_object_mut()
                    .expect("object")
                    .insert("record".into(), "row".into());
                text.push_str(&v.to_string());
                text.push('\n');
            }
            text
        }
        Format::Csv => {
            let mut text = format!(
                "# config: {}\n",
                serde_json::to_string(cfg).expect("serializable")
            );
            text.push_str("n,k,q,log_q,bound,endpoint\n");
            for row in rows {
                text.push_str(&format!(
                    "{},{},{:e},{:e},{:e},{:.12}\n",
                    row.n, row.k, row.q, row.log_q, row.bound, row.endpoint
                ));
            }
            text
        }
    }
}

/// Loads an eigenform from a file (validating weight and precision) or
/// computes it: the exact path for one-dimensional spaces, the numeric path
/// when an index is given.
fn resolve_form(
    weight: u32,
    x: usize,
    index: Option<usize>,
    tol: f64,
    eigenvalues: Option<&PathBuf>,
) -> Result<Eigenform, Error> {
    if let Some(path) = eigenvalues {
        let file = fs::File::open(path)?;
        let f = eigen_io::read_eigenform(io::BufReader::new(file))?;
        if f.weight() != weight {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue file has weight {}, expected {weight}",
                f.weight()
            )));
        }
        if f.precision() < x {
            return Err(Error::Truncation {
                needed: x,
                available: f.precision(),
            });
        }
        return Ok(f);
    }
    match index {
        Some(idx) => hecke_forms::eigenform_numeric(weight, idx, x, tol),
        None => hecke_forms::hecke_eigenform(weight, x),
    }
}

fn emit(cfg: &RunConfig, payload: Payload, out: Option<&PathBuf>) -> Result<(), Error> {
    let text = match payload {
        Payload::Json(report) => {
            let doc = json!({ "config": cfg, "report": report });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Payload::Table(body) => format!(
            "# config: {}\n{body}",
            serde_json::to_string(cfg).expect("serializable")
        ),
    };
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
