//! Command-line front end for the exact polytope toolkit.
//!
//! Every subcommand reads labeled polytopes from JSON files, runs the
//! corresponding library routine with exact rational arithmetic, and prints a
//! deterministic report envelope. Multiple input files are processed in
//! parallel, one worker per file, and the outputs are concatenated in input
//! order — byte-for-byte the same as running the files one at a time.
//!
//! Exit codes: `0` success, `1` I/O or parse failure, `2` validation failure
//! (the file is well-formed JSON but not a valid polytope description), `3`
//! verification failure (a requested certificate check did not pass).

pub mod input;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toricsmith_core::error::Error as CoreError;
use toricsmith_core::polytope::{classify, LabeledPolytope};
use toricsmith_core::{decompose, generator, gromov, reduce, shrink};

use report::{
    CenterReport, Envelope, ErrorBody, ErrorEnvelope, FuzzFailure, FuzzReport, InputMeta,
};

const TOOL: &str = "toricsmith";
const VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_LU_BOUND: u32 = 12;

/// Captured result of one invocation; the binary prints the streams and
/// exits with the code, tests compare them directly.
#[derive(Debug)]
pub struct CmdOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = TOOL, version, about = "Exact decomposition and capacity reports for labeled rational polytopes", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the file schema and classify the polytope.
    Validate(FileArgs),
    /// Run the shrinking procedure and report stages and redundancy events.
    Shrink(FileArgs),
    /// Translate the polytope so that its shrink endpoint is the origin.
    Center(FileArgs),
    /// Decompose into monotone factors and verify the decomposition.
    Decompose(FileArgs),
    /// Emit the centered-reduction certificate and verify it.
    Reduce(FileArgs),
    /// Report Gromov-width lower and upper estimates.
    Gromov(FileArgs),
    /// Run every report for each input file.
    All(FileArgs),
    /// Exercise random centered polytopes through decompose and verify.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct FileArgs {
    /// Input polytope files (JSON).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Search bound for the upper-estimate relation scan
    /// (falls back to TORICSMITH_LU_BOUND, then 12).
    #[arg(long)]
    lu_bound: Option<u32>,
    /// Skip the verification passes of decompose and reduce.
    #[arg(long)]
    no_verify: bool,
    /// Write the report to this file instead of stdout (single input only).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    /// Base seed; case `i` uses `seed + i`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random polytopes to generate.
    #[arg(long, default_value_t = 25)]
    count: u32,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Run the tool on an argument list (without the program name) and capture
/// the outcome. The binary and the test suite share this entry point.
pub fn run(args: &[&str]) -> CmdOutput {
    let mut argv = Vec::with_capacity(args.len() + 1);
    argv.push(TOOL);
    argv.extend_from_slice(args);
    match Cli::try_parse_from(argv) {
        Ok(cli) => dispatch(cli),
        Err(err) => {
            use clap::error::ErrorKind;
            let rendered = err.render().to_string();
            match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CmdOutput {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => CmdOutput {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                },
            }
        }
    }
}

fn dispatch(cli: Cli) -> CmdOutput {
    match cli.cmd {
        Cmd::Validate(a) => files_run("validate", &a),
        Cmd::Shrink(a) => files_run("shrink", &a),
        Cmd::Center(a) => files_run("center", &a),
        Cmd::Decompose(a) => files_run("decompose", &a),
        Cmd::Reduce(a) => files_run("reduce", &a),
        Cmd::Gromov(a) => files_run("gromov", &a),
        Cmd::All(a) => files_run("all", &a),
        Cmd::Fuzz(a) => run_fuzz(&a),
    }
}

fn resolve_lu_bound(flag: Option<u32>) -> u32 {
    flag.or_else(|| {
        std::env::var("TORICSMITH_LU_BOUND")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_LU_BOUND)
}

fn files_run(command: &'static str, args: &FileArgs) -> CmdOutput {
    if args.output.is_some() && args.files.len() != 1 {
        return CmdOutput {
            code: 1,
            stdout: String::new(),
            stderr: "--output requires exactly one input file\n".to_string(),
        };
    }
    let lu_bound = resolve_lu_bound(args.lu_bound);
    let results: Vec<(i32, String)> = if args.files.len() == 1 {
        vec![process_file(command, &args.files[0], args, lu_bound)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = args
                .files
                .iter()
                .map(|file| scope.spawn(move || process_file(command, file, args, lu_bound)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("file worker panicked"))
                .collect()
        })
    };
    let code = results.iter().map(|r| r.0).max().unwrap_or(0);
    let stdout: String = results.into_iter().map(|r| r.1).collect();
    if let Some(path) = &args.output {
        match std::fs::write(path, &stdout) {
            Ok(()) => CmdOutput {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => CmdOutput {
                code: 1,
                stdout: String::new(),
                stderr: format!("cannot write {}: {e}\n", path.display()),
            },
        }
    } else {
        CmdOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn basename(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn emit<T: Serialize>(envelope: &T, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(envelope).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            report::render_text(&serde_json::to_value(envelope).expect("report serializes"))
        }
    }
}

fn finish<T: Serialize>(
    command: &'static str,
    meta: InputMeta,
    report: T,
    format: Format,
    code: i32,
) -> (i32, String) {
    let envelope = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        input: Some(meta),
        report,
    };
    (code, emit(&envelope, format))
}

fn error_out(
    command: &'static str,
    meta: Option<InputMeta>,
    kind: &'static str,
    message: String,
    code: i32,
    format: Format,
) -> (i32, String) {
    let envelope = ErrorEnvelope {
        tool: TOOL,
        version: VERSION,
        command,
        input: meta,
        error: ErrorBody { kind, message },
    };
    (code, emit(&envelope, format))
}

/// `CertificateCheckFailed` means a verification pass rejected its input;
/// every other library error marks the input itself as unusable.
fn map_core_error(err: &CoreError) -> (&'static str, i32) {
    match err {
        CoreError::CertificateCheckFailed(_) => ("verification", 3),
        _ => ("validation", 2),
    }
}

fn process_file(
    command: &'static str,
    path: &Path,
    args: &FileArgs,
    lu_bound: u32,
) -> (i32, String) {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            return error_out(
                command,
                None,
                "io",
                format!("cannot read {}: {e}", path.display()),
                1,
                args.format,
            )
        }
    };
    let parsed: input::PolytopeFile = match serde_json::from_slice(&bytes) {
        Ok(p) => p,
        Err(e) => {
            return error_out(
                command,
                None,
                "parse",
                format!("{}: {e}", basename(path)),
                1,
                args.format,
            )
        }
    };
    let meta = InputMeta {
        file: basename(path),
        name: parsed.name.clone(),
        sha256: sha256_hex(&bytes),
        dim: parsed.dim,
        constraints: parsed.constraints.len(),
    };
    let polytope = match input::to_polytope(&parsed) {
        Ok(p) => p,
        Err(message) => return error_out(command, Some(meta), "validation", message, 2, args.format),
    };
    match build_output(command, &polytope, meta, args, lu_bound) {
        Ok(done) => done,
        Err((meta, core_err)) => {
            let (kind, code) = map_core_error(&core_err);
            error_out(command, Some(meta), kind, core_err.to_string(), code, args.format)
        }
    }
}

type FileResult = Result<(i32, String), (InputMeta, CoreError)>;

fn build_output(
    command: &'static str,
    p: &LabeledPolytope,
    meta: InputMeta,
    args: &FileArgs,
    lu_bound: u32,
) -> FileResult {
    macro_rules! attempt {
        ($expr:expr) => {
            match $expr {
                Ok(v) => v,
                Err(e) => return Err((meta, e)),
            }
        };
    }
    match command {
        "validate" => {
            let props = attempt!(classify(p));
            Ok(finish(command, meta, report::validate_report(&props), args.format, 0))
        }
        "shrink" => {
            let trace = attempt!(shrink::shrink_trace(p));
            Ok(finish(command, meta, report::shrink_report(&trace), args.format, 0))
        }
        "center" => {
            let (centered, shift) = attempt!(shrink::center(p));
            let rep = CenterReport {
                translation: report::rational_vec(&shift),
                polytope: report::polytope_json(&centered, meta.name.as_deref()),
            };
            Ok(finish(command, meta, rep, args.format, 0))
        }
        "decompose" => {
            let (rep, code) = attempt!(decompose_part(p, args.no_verify));
            Ok(finish(command, meta, rep, args.format, code))
        }
        "reduce" => {
            let (rep, code) = attempt!(reduce_part(p, args.no_verify));
            Ok(finish(command, meta, rep, args.format, code))
        }
        "gromov" => {
            let bounds = attempt!(gromov::width_report(p, lu_bound));
            Ok(finish(command, meta, report::gromov_report(&bounds), args.format, 0))
        }
        "all" => {
            let props = attempt!(classify(p));
            let trace = attempt!(shrink::shrink_trace(p));
            let (centered, shift) = attempt!(shrink::center(p));
            let (decompose_rep, d_code) = attempt!(decompose_part(p, args.no_verify));
            let (reduce_rep, r_code) = attempt!(reduce_part(p, args.no_verify));
            let bounds = attempt!(gromov::width_report(p, lu_bound));
            let rep = report::AllReport {
                validate: report::validate_report(&props),
                shrink: report::shrink_report(&trace),
                center: CenterReport {
                    translation: report::rational_vec(&shift),
                    polytope: report::polytope_json(&centered, meta.name.as_deref()),
                },
                decompose: decompose_rep,
                reduce: reduce_rep,
                gromov: report::gromov_report(&bounds),
            };
            Ok(finish(command, meta, rep, args.format, d_code.max(r_code)))
        }
        other => unreachable!("unknown command {other}"),
    }
}

fn decompose_part(
    p: &LabeledPolytope,
    no_verify: bool,
) -> Result<(report::DecomposeReport, i32), CoreError> {
    let plan = decompose::decomposition_plan(p)?;
    let factors = decompose::build_factors(&plan);
    let verification = if no_verify {
        None
    } else {
        Some(decompose::verify_theorem1(&plan.polytope, &factors))
    };
    let code = match &verification {
        Some(v) if !v.all_passed() => 3,
        _ => 0,
    };
    Ok((report::decompose_report(&plan, &factors, verification.as_ref()), code))
}

fn reduce_part(
    p: &LabeledPolytope,
    no_verify: bool,
) -> Result<(report::ReduceReport, i32), CoreError> {
    let cert = reduce::reduction_certificate(p)?;
    let verification = if no_verify {
        None
    } else {
        Some(reduce::verify_certificate(p, &cert))
    };
    let code = match &verification {
        Some(v) if !v.all_passed() => 3,
        _ => 0,
    };
    Ok((report::reduce_report(&cert, verification.as_ref()), code))
}

fn run_fuzz(args: &FuzzArgs) -> CmdOutput {
    let mut failures = Vec::new();
    for i in 0..args.count {
        let dim = 2 + (i as usize % 3);
        let extra = 1 + (i as usize % 2);
        let seed = args.seed.wrapping_add(u64::from(i));
        let p = generator::random_centered_polytope(dim, extra, seed);
        let outcome = fuzz_case(&p);
        if let Err(message) = outcome {
            failures.push(FuzzFailure {
                index: i,
                seed,
                dim,
                message,
            });
        }
    }
    let code = if failures.is_empty() { 0 } else { 3 };
    let passed = args.count - failures.len() as u32;
    let envelope = Envelope {
        tool: TOOL,
        version: VERSION,
        command: "fuzz",
        input: None,
        report: FuzzReport {
            seed: args.seed,
            count: args.count,
            passed,
            failures,
        },
    };
    CmdOutput {
        code,
        stdout: emit(&envelope, args.format),
        stderr: String::new(),
    }
}

fn fuzz_case(p: &LabeledPolytope) -> Result<(), String> {
    let plan = decompose::decomposition_plan(p).map_err(|e| format!("plan: {e}"))?;
    let factors = decompose::build_factors(&plan);
    let verification = decompose::verify_theorem1(&plan.polytope, &factors);
    if !verification.all_passed() {
        return Err("decomposition verification failed".to_string());
    }
    for factor in &factors {
        reduce::minkowski_weights(&factor.polytope).map_err(|e| format!("factor weights: {e}"))?;
    }
    Ok(())
}
