//! `btc`: classify, decompose and certify symmetric tensors from JSON files.
//!
//! Exit codes: 0 certified PD (or plain success), 1 certified PSD,
//! 2 not certified / not B0 / inconclusive, 3 invalid input, 4 internal
//! invariant or verification failure.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btc_core::classify::{classify, first_b_violation, row_stats};
use btc_core::decompose::{decompose_b0, verify_cert};
use btc_core::spectra::{min_h_eigenvalue, sphere_min_oracle};
use btc_core::{io as doc, certify_definiteness, generate, Error, GenKind, GenSpec, SpectraOptions, SymTensor, Verdict};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

const PD: u8 = 0;
const PSD: u8 = 1;
const NOT_CERTIFIED: u8 = 2;
const INVALID: u8 = 3;
const INTERNAL: u8 = 4;

/// Corroboration beyond this margin counts as a contradiction.
const ORACLE_SLACK: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "btc", version, about = "Positivity certificates for even-order symmetric tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Tensor JSON file ("-" reads standard input).
    file: PathBuf,
    /// Absolute tolerance for the class inequalities.
    #[arg(long, env = "BTC_DEFAULT_TOL", default_value_t = 0.0)]
    tol: f64,
    /// Symmetrize dense input instead of rejecting asymmetry.
    #[arg(long)]
    symmetrize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Row statistics and class membership.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Decompose a B0 tensor into an M tensor plus partial all-one terms.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Write the certificate here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Re-check the certificate before exiting.
        #[arg(long)]
        verify: bool,
    },
    /// Certify positive (semi-)definiteness of an even-order tensor.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Also run the sphere grid (n <= 3) and the H-eigenvalue search.
        #[arg(long)]
        oracle: bool,
        /// Write the certificate here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate A x^m.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Comma-separated components of x.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
    },
    /// Generate a seeded tensor of a given class.
    Gen {
        /// B, B0, Z_dd, Z_sdd, symmetric_arbitrary or nonneg.
        #[arg(long)]
        kind: GenKind,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Estimate the smallest H-eigenvalue by multi-start descent.
    Spectra {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = btc_core::spectra::DEFAULT_MAX_ITERS)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual threshold for accepting a pair.
        #[arg(long = "residual-tol", default_value_t = btc_core::spectra::DEFAULT_RESIDUAL_TOL)]
        residual_tol: f64,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotB0 { .. } => NOT_CERTIFIED,
            ref e if e.is_input_error() => INVALID,
            _ => INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: String) -> Failure {
    Failure {
        code: INVALID,
        message,
    }
}

type Outcome = Result<u8, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load(input: &Input) -> Result<SymTensor<f64>, Failure> {
    if !(input.tol >= 0.0 && input.tol.is_finite()) {
        return Err(invalid(format!("--tol must be a finite non-negative number, got {}", input.tol)));
    }
    let text = read_text(&input.file)?;
    doc::read_tensor(&text, input.symmetrize, input.tol)
        .map_err(|e| invalid(format!("{}: {e}", input.file.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: INVALID,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn not_b0_detail(a: &SymTensor<f64>, tol: f64) -> Value {
    let rows = row_stats(a);
    match first_b_violation(&rows, a.row_len(), &tol, false) {
        Some((row, why)) => json!({ "row": row + 1, "reason": why.to_string() }),
        None => Value::Null,
    }
}

fn cmd_classify(input: &Input) -> Outcome {
    let a = load(input)?;
    print!("{}", doc::write_classification(&classify(&a, &input.tol)));
    Ok(PD)
}

fn cmd_decompose(input: &Input, output: Option<&Path>, verify: bool) -> Outcome {
    let a = load(input)?;
    let cert = decompose_b0(&a, &input.tol)?;
    if verify {
        let report = verify_cert(&a, &cert, &input.tol)?;
        if let Some(clause) = report.violation {
            return Err(Failure {
                code: INTERNAL,
                message: format!(
                    "certificate fails the {clause} clause (max deviation {:e}, tolerance {:e})",
                    report.max_deviation, report.recon_tol
                ),
            });
        }
    }
    emit(output, &doc::write_certificate(&cert))?;
    if let Some(path) = output {
        print_json(&json!({
            "certificate": path.display().to_string(),
            "steps": cert.steps.len(),
            "strict": cert.strict,
            "recon_error": cert.recon_error,
            "verified": verify,
        }));
    }
    Ok(PD)
}

fn oracle_findings(a: &SymTensor<f64>) -> Result<Value, Failure> {
    let sphere = if a.dim() <= 3 {
        let s = sphere_min_oracle(a, 180)?;
        json!({ "min_value": s.min_value, "argmin": s.argmin, "points": s.points })
    } else {
        Value::Null
    };
    let spectra = min_h_eigenvalue(a, &SpectraOptions::default())?;
    Ok(json!({
        "sphere": sphere,
        "min_h_estimate": spectra.min_h_estimate,
        "converged_count": spectra.converged_count,
        "restarts": spectra.restarts,
    }))
}

fn cmd_certify(input: &Input, oracle: bool, output: Option<&Path>) -> Outcome {
    let a = load(input)?;
    let c = certify_definiteness(&a, &input.tol)?;
    let mut report = json!({
        "verdict": c.verdict.label(),
        "order": a.order(),
        "dim": a.dim(),
        "tol": input.tol,
    });
    match &c.cert {
        Some(cert) => {
            report["steps"] = json!(cert.steps.len());
            report["strict"] = json!(cert.strict);
            if let Some(path) = output {
                emit(Some(path), &doc::write_certificate(cert))?;
                report["certificate"] = json!(path.display().to_string());
            }
        }
        None => report["not_b0"] = not_b0_detail(&a, input.tol),
    }

    let mut contradiction = false;
    if oracle {
        let findings = oracle_findings(&a)?;
        if c.verdict != Verdict::NotCertified {
            let slack = ORACLE_SLACK * a.max_abs_entry().max(1.0);
            let sphere_neg = findings["sphere"]["min_value"].as_f64().is_some_and(|v| v < -slack);
            let h_neg = findings["min_h_estimate"].as_f64().is_some_and(|v| v < -slack);
            contradiction = sphere_neg || h_neg;
        }
        report["oracle"] = findings;
        report["contradiction"] = json!(contradiction);
    }
    print_json(&report);
    if contradiction {
        return Err(Failure {
            code: INTERNAL,
            message: "oracle found a negative value for a certified tensor".into(),
        });
    }
    Ok(match c.verdict {
        Verdict::PositiveDefinite => PD,
        Verdict::PositiveSemidefinite => PSD,
        Verdict::NotCertified => NOT_CERTIFIED,
    })
}

fn cmd_eval(input: &Input, x: &[f64]) -> Outcome {
    let a = load(input)?;
    if let Some(v) = x.iter().find(|v| !v.is_finite()) {
        return Err(invalid(format!("--x contains non-finite value {v}")));
    }
    let value = a.eval_xm(x)?;
    print_json(&json!({ "value": value }));
    Ok(PD)
}

fn cmd_gen(spec: GenSpec, output: Option<&Path>) -> Outcome {
    let t = generate(&spec)?;
    let text = serde_json::to_string_pretty(
        &doc::TensorDoc::from_tensor(&t).with_metadata(json!({ "generator": spec })),
    )
    .expect("serializable")
        + "\n";
    emit(output, &text)?;
    Ok(PD)
}

fn cmd_spectra(input: &Input, opts: SpectraOptions) -> Outcome {
    let a = load(input)?;
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(invalid(format!("--residual-tol must be positive, got {}", opts.tol)));
    }
    let report = min_h_eigenvalue(&a, &opts)?;
    print!("{}", doc::write_spectrum(&report));
    Ok(if report.is_conclusive() { PD } else { NOT_CERTIFIED })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { input } => cmd_classify(&input),
        Command::Decompose {
            input,
            output,
            verify,
        } => cmd_decompose(&input, output.as_deref(), verify),
        Command::Certify {
            input,
            oracle,
            output,
        } => cmd_certify(&input, oracle, output.as_deref()),
        Command::Eval { input, x } => cmd_eval(&input, &x),
        Command::Gen {
            kind,
            order,
            dim,
            seed,
            density,
            output,
        } => cmd_gen(
            GenSpec::new(kind, order, dim, seed).with_density(density),
            output.as_deref(),
        ),
        Command::Spectra {
            input,
            restarts,
            iters,
            seed,
            residual_tol,
        } => cmd_spectra(
            &input,
            SpectraOptions {
                restarts,
                max_iters: iters,
                seed,
                tol: residual_tol,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { PD });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
