//! The `gencore` command line.
//!
//! Every command prints one JSON document (sorted keys) and reports its
//! failure class through the exit code alone:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | the requested inverse does not exist (inconsistent system, index too large) |
//! | 3 | unreadable input or invalid arguments |
//! | 4 | numerical failure (ambiguous rank decision, no convergence) |
//! | 5 | `verify`: at least one equation fails |

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::batch;
use crate::classical::{self, AlgorithmChoice};
use crate::error::{Error, Result};
use crate::factor;
use crate::fixtures;
use crate::gencore::{self, ImCoreParams, JmCoreParams};
use crate::io::{self, MatrixText};
use crate::numfield::{Backend, Mat, Tolerance};
use crate::spectral::{self, Field};
use crate::verify::{self, DefinitionTag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_INVERSE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

pub const BACKEND_ENV: &str = "GENCORE_DEFAULT_BACKEND";

#[derive(Debug, Parser)]
#[command(name = "gencore", version, about = "Generalized matrix inverses over exact and floating complex fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an inverse and check it against its defining equations.
    Compute(ComputeArgs),
    /// Drazin index and the rank chain rk(A^0), rk(A^1), ... certifying it.
    Index(SourceArgs),
    /// Check a candidate matrix against a definition.
    Verify(VerifyArgs),
    /// List the built-in matrices.
    Fixtures,
    /// Compute one inverse for several inputs; results keep the input order.
    Batch(BatchArgs),
    /// Re-emit a matrix file in canonical form.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// mp | group | drazin | core | core-ep | dmp | im-core | jm-core
    #[arg(long)]
    pub inverse: String,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// rank-chain | core-nilpotent | hs-recursive | definition (drazin, im-core)
    #[arg(long)]
    pub algorithm: Option<AlgorithmChoice>,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// float | exact. Default: exact if any entry is written p/q, else the
    /// GENCORE_DEFAULT_BACKEND environment variable, else float.
    #[arg(long)]
    pub backend: Option<Backend>,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, allow_negative_numbers = true)]
    pub tol_rank: Option<f64>,
    /// Relative residual threshold for matrix equality.
    #[arg(long, allow_negative_numbers = true)]
    pub tol_eq: Option<f64>,
    /// Zero-eigenvalue clustering threshold.
    #[arg(long, allow_negative_numbers = true)]
    pub tol_eig: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Matrix file (JSON or CSV).
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    pub input: Option<PathBuf>,
    /// Built-in matrix name (see `fixtures`).
    #[arg(long)]
    pub fixture: Option<String>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub inverse: InverseArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Definition tag: the compute kinds plus outer | 13 | 23 | 123.
    #[arg(long)]
    pub inverse: String,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Candidate inverse X (JSON or CSV).
    #[arg(long)]
    pub candidate: PathBuf,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub inverse: InverseArgs,
    /// Matrix files; repeat the flag for several inputs.
    #[arg(long = "input", required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// json | csv
    #[arg(long, default_value = "json")]
    pub to: String,
    /// Parse as this backend; the default follows the same rule as `compute`.
    #[arg(long)]
    pub backend: Option<Backend>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) | Error::IndexTooLarge { .. } => EXIT_NO_INVERSE,
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::BackendUnsupported { .. }
        | Error::UnsupportedAlgorithm { .. } => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

/// A command's JSON result and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub code: i32,
}

fn error_json(e: &Error) -> Value {
    json!({
        "status": "error",
        "exit_code": exit_code(e),
        "error": e.to_string(),
    })
}

/// Run with process arguments (including the program name).
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let output = match &cli.command {
        Command::Compute(a) => a.source.output.clone(),
        Command::Index(a) => a.output.clone(),
        Command::Verify(a) => a.source.output.clone(),
        Command::Batch(a) => a.output.clone(),
        Command::Convert(a) => a.output.clone(),
        Command::Fixtures => None,
    };
    let (text, code) = match execute(&cli.command) {
        Ok(Outcome { json, code }) if matches!(cli.command, Command::Convert(_)) => {
            (json.as_str().unwrap_or_default().to_string(), code)
        }
        Ok(Outcome { json, code }) => (render(&json), code),
        Err(e) => {
            eprintln!("gencore: {e}");
            (render(&error_json(&e)), exit_code(&e))
        }
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("gencore: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    code
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// Execute a parsed command.
pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Compute(a) => {
            let (text, origin) = load_source(&a.source)?;
            let backend = pick_backend(a.source.numeric.backend, &text)?;
            let tol = tolerance(&a.source.numeric)?;
            let req = Request::from_args(&a.inverse)?;
            let mut out = match backend {
                Backend::Exact => compute_one(&text.to_exact(), &req, &tol),
                Backend::Float => compute_one(&text.to_float(), &req, &tol),
            };
            if let Some(obj) = out.json.as_object_mut() {
                obj.insert("input".into(), Value::String(origin));
                obj.insert("backend".into(), Value::String(backend.name().into()));
            }
            Ok(out)
        }
        Command::Index(s) => {
            let (text, origin) = load_source(s)?;
            let backend = pick_backend(s.numeric.backend, &text)?;
            let tol = tolerance(&s.numeric)?;
            let info = match backend {
                Backend::Exact => spectral::index(&text.to_exact(), &tol)?,
                Backend::Float => spectral::index(&text.to_float(), &tol)?,
            };
            Ok(Outcome {
                json: json!({
                    "status": "ok",
                    "input": origin,
                    "backend": backend.name(),
                    "k": info.k,
                    "rank_chain": info.rank_chain,
                }),
                code: EXIT_OK,
            })
        }
        Command::Verify(a) => {
            let (text, origin) = load_source(&a.source)?;
            let cand = read_matrix(&a.candidate)?;
            let backend = match a.source.numeric.backend {
                Some(b) => b,
                None if text.has_rational() || cand.has_rational() => Backend::Exact,
                None => pick_backend(None, &text)?,
            };
            let tol = tolerance(&a.source.numeric)?;
            let tag = DefinitionTag::parse(&a.inverse, a.i, a.m, a.j)?;
            let report = match backend {
                Backend::Exact => verify::verify(&text.to_exact(), &cand.to_exact(), tag, &tol)?,
                Backend::Float => verify::verify(&text.to_float(), &cand.to_float(), tag, &tol)?,
            };
            let code = if report.overall { EXIT_OK } else { EXIT_VERIFY_FAILED };
            Ok(Outcome {
                json: json!({
                    "status": if report.overall { "pass" } else { "fail" },
                    "input": origin,
                    "candidate": a.candidate.display().to_string(),
                    "backend": backend.name(),
                    "report": report.to_json(),
                }),
                code,
            })
        }
        Command::Fixtures => Ok(Outcome {
            json: json!({
                "fixtures": fixtures::FIXTURES.iter().map(|f| json!({
                    "name": f.name,
                    "provenance": f.provenance,
                    "matrix": io::json_value(&f.matrix()),
                })).collect::<Vec<_>>(),
            }),
            code: EXIT_OK,
        }),
        Command::Batch(a) => {
            let tol = tolerance(&a.numeric)?;
            let req = Request::from_args(&a.inverse)?;
            let results = batch::map(&a.inputs, |path| -> Outcome {
                let one = || -> Result<Outcome> {
                    let text = read_matrix(path)?;
                    let backend = pick_backend(a.numeric.backend, &text)?;
                    let mut out = match backend {
                        Backend::Exact => compute_one(&text.to_exact(), &req, &tol),
                        Backend::Float => compute_one(&text.to_float(), &req, &tol),
                    };
                    if let Some(obj) = out.json.as_object_mut() {
                        obj.insert("backend".into(), Value::String(backend.name().into()));
                    }
                    Ok(out)
                };
                let mut out = one().unwrap_or_else(|e| Outcome {
                    json: error_json(&e),
                    code: exit_code(&e),
                });
                if let Some(obj) = out.json.as_object_mut() {
                    obj.insert("input".into(), Value::String(path.display().to_string()));
                }
                out
            });
            // the first failing entry in input order decides the exit code
            let code = results.iter().map(|o| o.code).find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK);
            Ok(Outcome {
                json: json!({ "results": results.into_iter().map(|o| o.json).collect::<Vec<_>>() }),
                code,
            })
        }
        Command::Convert(a) => {
            let text = read_matrix(&a.input)?;
            let backend = pick_backend(a.backend, &text)?;
            let body = match (a.to.as_str(), backend) {
                ("json", Backend::Exact) => io::to_json(&text.to_exact()),
                ("json", Backend::Float) => io::to_json(&text.to_float()),
                ("csv", Backend::Exact) => io::to_csv(&text.to_exact()),
                ("csv", Backend::Float) => io::to_csv(&text.to_float()),
                (other, _) => return Err(Error::InvalidParameter(format!("unknown format '{other}'"))),
            };
            Ok(Outcome {
                json: Value::String(body),
                code: EXIT_OK,
            })
        }
    }
}

fn read_matrix(path: &Path) -> Result<MatrixText> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    io::parse_auto(&raw)
}

fn load_source(s: &SourceArgs) -> Result<(MatrixText, String)> {
    match (&s.input, &s.fixture) {
        (Some(p), _) => Ok((read_matrix(p)?, p.display().to_string())),
        (None, Some(name)) => {
            let f = fixtures::get(name).ok_or_else(|| Error::InvalidParameter(format!("unknown fixture '{name}'")))?;
            let text = io::parse_json(&io::to_json(&f.matrix()))?;
            Ok((text, format!("fixture:{name}")))
        }
        (None, None) => Err(Error::InvalidParameter("give --input or --fixture".into())),
    }
}

/// Explicit flag, then rational literals, then the environment, then float.
pub fn pick_backend(flag: Option<Backend>, text: &MatrixText) -> Result<Backend> {
    if let Some(b) = flag {
        return Ok(b);
    }
    if text.has_rational() {
        return Ok(Backend::Exact);
    }
    match std::env::var(BACKEND_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{BACKEND_ENV}='{v}' is not float or exact"))),
        _ => Ok(Backend::Float),
    }
}

fn tolerance(n: &NumericArgs) -> Result<Tolerance> {
    let mut tol = Tolerance::default();
    if let Some(r) = n.tol_rank {
        tol = tol.with_rank_rel(r);
    }
    if let Some(e) = n.tol_eq {
        tol = tol.with_eq_rel(e);
    }
    if let Some(z) = n.tol_eig {
        tol = tol.with_eig_zero_rel(z);
    }
    if !tol.is_valid() || [n.tol_rank, n.tol_eq, n.tol_eig].iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("tolerances must be finite and nonnegative".into()));
    }
    Ok(tol)
}

/// A validated `compute` request.
#[derive(Debug, Clone, Copy)]
struct Request {
    tag: DefinitionTag,
    algorithm: Option<AlgorithmChoice>,
}

impl Request {
    fn from_args(a: &InverseArgs) -> Result<Request> {
        let tag = DefinitionTag::parse(&a.inverse, a.i, a.m, a.j)?;
        match tag {
            DefinitionTag::Outer | DefinitionTag::OneThree | DefinitionTag::TwoThree | DefinitionTag::OneTwoThree => {
                return Err(Error::InvalidParameter(format!("'{}' is a verify-only tag", tag.name())));
            }
            DefinitionTag::Drazin | DefinitionTag::ImCore { .. } => {}
            _ if a.algorithm.is_some() => {
                return Err(Error::InvalidParameter(format!(
                    "--algorithm applies to drazin and im-core, not {}",
                    tag.name()
                )));
            }
            _ => {}
        }
        Ok(Request {
            tag,
            algorithm: a.algorithm,
        })
    }
}

fn compute_one<T: Field>(a: &Mat<T>, req: &Request, tol: &Tolerance) -> Outcome {
    let alg = req.algorithm.unwrap_or(AlgorithmChoice::RankChain);
    let mut head = json!({
        "inverse": req.tag.name(),
        "definition": req.tag.to_string(),
    });
    if matches!(req.tag, DefinitionTag::Drazin | DefinitionTag::ImCore { .. }) {
        head["algorithm"] = Value::String(alg.name().into());
    }
    let result: Result<std::result::Result<Mat<T>, String>> = (|| {
        Ok(Ok(match req.tag {
            DefinitionTag::MoorePenrose => factor::moore_penrose(a, tol)?,
            DefinitionTag::Group => classical::group_inverse(a, tol)?,
            DefinitionTag::Drazin => classical::drazin(a, tol, alg)?,
            DefinitionTag::Core => classical::core_inverse(a, tol)?,
            DefinitionTag::CoreEP => classical::core_ep(a, tol)?,
            DefinitionTag::DMP => classical::dmp(a, tol)?,
            DefinitionTag::ImCore { i, m } => {
                let r = gencore::im_core(a, ImCoreParams::new(i, m)?, tol, alg)?;
                match r.inverse {
                    Some(x) => x,
                    None => return Ok(Err(r.witness.unwrap_or_default())),
                }
            }
            DefinitionTag::JmCore { j, m } => {
                let r = gencore::jm_core(a, JmCoreParams::new(j, m)?, tol)?;
                match r.inverse {
                    Some(x) => x,
                    None => return Ok(Err(r.witness.unwrap_or_default())),
                }
            }
            other => return Err(Error::InvalidParameter(format!("'{}' is a verify-only tag", other.name()))),
        }))
    })();
    match result {
        Ok(Ok(x)) => {
            let report = verify::verify(a, &x, req.tag, tol);
            head["status"] = Value::String("ok".into());
            head["matrix"] = io::json_value(&x);
            let code = match &report {
                Ok(r) => {
                    head["report"] = r.to_json();
                    if r.overall {
                        EXIT_OK
                    } else {
                        EXIT_VERIFY_FAILED
                    }
                }
                Err(e) => {
                    head["report_error"] = Value::String(e.to_string());
                    exit_code(e)
                }
            };
            Outcome { json: head, code }
        }
        Ok(Err(witness)) => {
            head["status"] = Value::String("inconsistent".into());
            head["matrix"] = Value::Null;
            head["witness"] = Value::String(witness);
            Outcome {
                json: head,
                code: EXIT_NO_INVERSE,
            }
        }
        Err(e) => {
            let mut j = error_json(&e);
            if let (Some(obj), Some(h)) = (j.as_object_mut(), head.as_object()) {
                for (k, v) in h {
                    obj.insert(k.clone(), v.clone());
                }
            }
            Outcome {
                json: j,
                code: exit_code(&e),
            }
        }
    }
}
