//! Command-line front end for `geophase`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
//! 3 degenerate state, 4 undefined total phase.

pub mod args;
pub mod format;
pub mod point;
pub mod sampling;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use geophase::{circle_distance, Analytic, OracleConfig, PhaseError};

use args::{Cli, Command, PairArgs, SingleArgs, SweepArgs, Target, VerifyArgs};
use format::fmt_num;
use point::{evaluate, Bindings, Point, Row};
use sweep::{run_sweep, write_csv, SweepRequest};
use verify::{run_verify, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_UNDEFINED: i32 = 4;

pub fn exit_code(err: &PhaseError) -> i32 {
    match err {
        PhaseError::DegenerateState { .. } => EXIT_DEGENERATE,
        PhaseError::UndefinedTotalPhase { .. } => EXIT_UNDEFINED,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let analytic = Analytic::default();
    match cli.command {
        Command::Single(a) => cmd_single(&analytic, &a, out, err),
        Command::Pair(a) => cmd_pair(&analytic, &a, out, err),
        Command::Sweep(a) => cmd_sweep(&analytic, &a, out, err),
        Command::Verify(a) => cmd_verify(&analytic, &a, out, err),
    }
}

fn fail(err: &mut dyn Write, e: &PhaseError) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

fn print_row(out: &mut dyn Write, row: &Row) {
    for (key, value) in [
        ("chi", row.chi),
        ("delta", row.delta),
        ("gamma", row.gamma),
        ("gamma_mod_2pi", row.gamma_mod_2pi),
        ("overlap_abs", row.overlap_abs),
    ] {
        if let Some(v) = value {
            let _ = writeln!(out, "{key} = {}", fmt_num(v));
        }
    }
}

fn cmd_single(analytic: &Analytic, a: &SingleArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let bindings = Bindings {
        rho_alpha: a.rho,
        phi_alpha: a.phi,
        omega1: a.omega,
        tau: a.tau,
        ..Bindings::from_state(&Default::default(), a.omega, 0.0, a.tau)
    };
    let point = match Point::build(Target::Single, &bindings) {
        Ok(p) => p,
        Err(e) => return fail(err, &e),
    };
    let (row, error) = evaluate(analytic, &point);
    print_row(out, &row);
    match error {
        Some(e) => fail(err, &e),
        None => EXIT_OK,
    }
}

fn cmd_pair(analytic: &Analytic, a: &PairArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let bindings = Bindings::from_state(&a.state, a.omega1, a.omega2, a.tau);
    let (spec, modes) = match bindings.spec(a.antipodal).and_then(|s| Ok((s, bindings.modes()?))) {
        Ok(x) => x,
        Err(e) => return fail(err, &e),
    };
    let norm_squared = match analytic.norm_squared(&spec) {
        Ok(n) => n,
        Err(e) => return fail(err, &e),
    };
    let _ = writeln!(out, "norm_squared = {}", fmt_num(norm_squared));
    let (row, error) = evaluate(analytic, &Point::Pair { spec, modes });
    print_row(out, &row);
    if let Some(e) = error {
        return fail(err, &e);
    }
    if spec.is_antipodal() {
        let gamma = row.gamma.expect("defined when evaluation succeeded");
        match analytic.antipodal_geometric_phase(&spec, &modes) {
            Ok(g) => {
                let _ = writeln!(out, "gamma_antipodal = {}", fmt_num(g));
                let d = circle_distance(gamma, g).unwrap_or(f64::NAN);
                let _ = writeln!(out, "circle_distance = {}", fmt_num(d));
            }
            Err(e) => return fail(err, &e),
        }
    }
    EXIT_OK
}

fn cmd_sweep(analytic: &Analytic, a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let request = SweepRequest {
        target: a.target,
        param: a.param,
        start: a.start,
        end: a.end,
        steps: a.steps,
        unwrap: a.unwrap,
        fixed: Bindings::from_state(&a.state, a.omega1, a.omega2, a.tau),
    };
    let output = match run_sweep(analytic, &request) {
        Ok(o) => o,
        // grid validation only fails on bad arguments
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = write_csv(&a.output, &output.csv) {
        let _ = writeln!(err, "error: cannot write {}: {e}", a.output.display());
        return EXIT_USAGE;
    }
    for w in &output.warnings {
        let _ = writeln!(
            err,
            "warning: row {} (swept value {}): {}",
            w.index,
            fmt_num(w.value),
            w.error
        );
    }
    let _ = writeln!(out, "wrote {} rows to {}", request.steps, a.output.display());
    EXIT_OK
}

fn cmd_verify(analytic: &Analytic, a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = VerifyConfig {
        seed: a.seed,
        samples: a.samples,
        tolerance: a.tolerance,
        oracle: OracleConfig {
            n_max_override: a.n_max,
            trunc_tol: a.trunc_tol,
            time_steps: a.time_steps,
            ..OracleConfig::default()
        },
    };
    match run_verify(analytic, &config) {
        Ok(report) => {
            let _ = out.write_all(report.render().as_bytes());
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
