//! Command-line front end. [`run`] takes argv and output streams so it can be
//! driven in-process; the binary only forwards its exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::evolution::{pulse_evolve, staged_copy, PulseProfile, StagePlan};
use crate::operator::{ket_to_json, operator_from_json, operator_to_json, propagator, BasisState, Ket, Operator};
use crate::pauli::{decompose_with_threshold, format_terms, PRUNE_THRESHOLD};
use crate::synthesis::{
    cnot_hamiltonian, copy_hamiltonian_pauli, copy_hamiltonian_projector, exact_synthesis, GateSpec, Sign,
};
use crate::verify::{equal_up_to_global_phase, verify_cnot_truth_table, verify_copying, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qcopy", version, about = "Synthesize and check qubit copying Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a Hamiltonian as Operator JSON
    Synth(SynthArgs),
    /// Print the Pauli-string expansion of an operator
    Decompose {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, default_value_t = PRUNE_THRESHOLD)]
        prune: f64,
    },
    /// Exponentiate a Hamiltonian: U = exp(-i H dt)
    #[command(allow_negative_numbers = true)]
    Propagate {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate f(t) H from a basis state with RK4
    Pulse {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_enum)]
        profile: ProfileArg,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        psi0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose single-copy gates, one copy per stage
    #[command(allow_negative_numbers = true)]
    Stage {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an operator and print a report
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run the built-in acceptance checks
    Selftest {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, conflicts_with = "gamma_pi")]
    gamma: Option<f64>,
    /// gamma in units of pi
    #[arg(long)]
    gamma_pi: Option<f64>,
    #[arg(long)]
    branch: Option<i64>,
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    #[arg(long, value_enum, default_value_t = Form::Projector)]
    form: Form,
    /// +1 or -1, for --form cnot
    #[arg(long)]
    sign: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    n1: Option<i64>,
    #[arg(long)]
    n2: Option<i64>,
    #[arg(long)]
    n3: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Projector,
    Pauli,
    Cnot,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Constant,
    Sine,
    Square,
}

impl From<ProfileArg> for PulseProfile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Constant => PulseProfile::Constant,
            ProfileArg::Sine => PulseProfile::Sine,
            ProfileArg::Square => PulseProfile::Square,
        }
    }
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Copying conditions for n copies
    Copy {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        strict_phases: bool,
    },
    /// Controlled-NOT truth table
    Cnot {
        #[arg(long)]
        u: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        strict_phases: bool,
    },
    /// Equality up to a global phase
    PhaseEqual {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// Failure raised while running a subcommand, tagged with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json { .. }
            | Error::EntryCount { .. }
            | Error::InvalidBitString(_)
            | Error::InvalidSpec(_)
            | Error::InvalidSteps { .. } => EXIT_USAGE,
            _ => EXIT_FAILED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main_exit_code() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Synth(args) => {
            let h = synth(&args)?;
            emit(out, args.out.as_deref(), &operator_to_json(&h)?)
        }
        Command::Decompose { h, prune } => {
            let h = read_operator(&h)?;
            let terms = decompose_with_threshold(&h, prune)?;
            write_stdout(out, &format_terms(&terms))?;
            Ok(EXIT_OK)
        }
        Command::Propagate { h, dt, out: path } => {
            check_dt(dt)?;
            let u = propagator(&read_operator(&h)?, dt)?;
            emit(out, path.as_deref(), &operator_to_json(&u)?)
        }
        Command::Pulse {
            h,
            profile,
            dt,
            steps,
            psi0,
            out: path,
        } => {
            let h = read_operator(&h)?;
            let state: BasisState = psi0.parse()?;
            if 1usize << state.qubits() != h.dim() {
                return Err(Failure::usage(format!(
                    "--psi0 has {} qubits but the operator has dimension {}",
                    state.qubits(),
                    h.dim()
                )));
            }
            let ket = pulse_evolve(&h, profile.into(), dt, &Ket::basis(&state), steps)?;
            emit(out, path.as_deref(), &ket_to_json(&ket)?)
        }
        Command::Stage {
            n,
            gamma,
            dt,
            out: path,
        } => {
            let staged = staged_copy(&StagePlan::new(n, gamma, dt)?)?;
            emit(out, path.as_deref(), &operator_to_json(&staged.composed)?)
        }
        Command::Verify(v) => {
            let report = match v {
                VerifyCommand::Copy {
                    u,
                    n,
                    tol,
                    strict_phases,
                } => verify_copying(&read_operator(&u)?, n, tol, strict_phases)?,
                VerifyCommand::Cnot { u, tol, strict_phases } => {
                    verify_cnot_truth_table(&read_operator(&u)?, tol, strict_phases)?
                }
                VerifyCommand::PhaseEqual { a, b, tol } => {
                    equal_up_to_global_phase(&read_operator(&a)?, &read_operator(&b)?, tol)?
                }
            };
            write_stdout(out, &format!("{}\n", report.to_json()?))?;
            Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Selftest { tol } => {
            let outcomes = crate::selftest::run_all(tol);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{o}\n"));
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            text.push_str(&format!(
                "selftest: {} passed, {} failed\n",
                outcomes.len() - failed,
                failed
            ));
            write_stdout(out, &text)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn synth(args: &SynthArgs) -> std::result::Result<Operator, Failure> {
    check_dt(args.dt)?;
    let gamma = match (args.gamma, args.gamma_pi) {
        (Some(g), None) => g,
        (None, Some(x)) => x * std::f64::consts::PI,
        (None, None) => 0.0,
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    let phase_flags = [args.alpha, args.beta, args.rho].iter().any(Option::is_some)
        || [args.n1, args.n2, args.n3].iter().any(Option::is_some);
    let gamma_given = args.gamma.is_some() || args.gamma_pi.is_some();

    if !matches!(args.form, Form::Exact) && phase_flags {
        return Err(Failure::usage(
            "--alpha/--beta/--rho/--n1/--n2/--n3 only apply to --form exact",
        ));
    }
    if !matches!(args.form, Form::Cnot) && args.sign.is_some() {
        return Err(Failure::usage("--sign only applies to --form cnot"));
    }

    let h = match args.form {
        Form::Projector => copy_hamiltonian_projector(args.n, gamma, args.branch.unwrap_or(1), args.dt)?,
        Form::Pauli => {
            if args.branch.is_some_and(|b| b != 1) {
                return Err(Failure::usage("--form pauli is defined for --branch 1 only"));
            }
            copy_hamiltonian_pauli(args.n, gamma, args.dt)?
        }
        Form::Cnot => {
            if gamma_given || args.branch.is_some() || args.n != 1 {
                return Err(Failure::usage("--form cnot takes only --sign and --dt"));
            }
            let sign: Sign = args.sign.as_deref().unwrap_or("+1").parse()?;
            cnot_hamiltonian(sign, args.dt)?
        }
        Form::Exact => {
            if gamma_given || args.branch.is_some() {
                return Err(Failure::usage(
                    "--form exact takes --alpha/--beta/--rho and --n1/--n2/--n3 instead of --gamma/--branch",
                ));
            }
            let spec = GateSpec::new(args.n, args.dt)?
                .with_phases(
                    args.alpha.unwrap_or(0.0),
                    args.beta.unwrap_or(0.0),
                    args.rho.unwrap_or(0.0),
                )
                .with_branches(args.n1.unwrap_or(0), args.n2.unwrap_or(0), args.n3.unwrap_or(0));
            spec.validate()?;
            exact_synthesis(&spec)?
        }
    };
    Ok(h)
}

fn check_dt(dt: f64) -> std::result::Result<(), Failure> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Failure::usage(format!("--dt must be positive, got {dt}")))
    }
}

fn read_operator(path: &Path) -> std::result::Result<Operator, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    operator_from_json(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn write_stdout(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_FAILED,
        message: format!("write failed: {e}"),
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, json: &str) -> CliResult {
    let text = format!("{json}\n");
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: EXIT_FAILED,
            message: format!("cannot write {}: {e}", p.display()),
        })?,
        None => write_stdout(out, &text)?,
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qcopy").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_capture(&["synth", "--bogus", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn missing_subcommand_is_usage_error() {
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
    }

    #[test]
    fn gamma_flags_conflict() {
        let (code, _, _) = run_capture(&["synth", "--gamma", "0.1", "--gamma-pi", "0.5"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn negative_sign_and_gamma_parse() {
        let (code, out, _) = run_capture(&["synth", "--form", "cnot", "--sign", "-1"]);
        assert_eq!(code, EXIT_OK, "{out}");
        let (code, _, err) = run_capture(&["synth", "--gamma", "-0.3"]);
        assert_eq!(code, EXIT_OK, "{err}");
    }

    #[test]
    fn pauli_form_rejects_other_branches() {
        assert_eq!(
            run_capture(&["synth", "--form", "pauli", "--branch", "2"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn nonpositive_duration_rejected() {
        assert_eq!(run_capture(&["synth", "--dt", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["stage", "--n", "2", "--dt", "-1"]).0, EXIT_USAGE);
    }

    #[test]
    fn missing_input_file_is_usage_error() {
        let (code, _, err) = run_capture(&["decompose", "--h", "/nonexistent/h.json"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("cannot read"));
    }
}
