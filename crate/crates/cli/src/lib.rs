//! Front end for `siph-core`: selects a function (gallery entry or
//! expression), runs one probe and emits a JSON or CSV report.
//!
//! [`run`] does everything except printing, so tests drive it directly.

// `!(a < b)` is used deliberately so NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod report;

use std::time::Instant;

use clap::Parser;
use serde_json::json;

pub use args::{Cli, Format, Precision};
pub use error::CliError;
pub use report::{Report, SCHEMA_VERSION};

/// Exit code for usage or configuration errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    /// Rendered report, help text or error message.
    pub output: String,
    pub report: Option<Report>,
    /// Set when the report went to `--out` instead of `output`.
    pub written_to: Option<std::path::PathBuf>,
}

impl Outcome {
    fn message(code: i32, output: String) -> Self {
        Self { code, output, report: None, written_to: None }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return Outcome::message(code, e.render().to_string());
        }
    };
    if let Ok(s) = std::env::var("SIPH_SEED") {
        match s.trim().parse::<u64>() {
            Ok(seed) => cli.global.seed = seed,
            Err(_) => return Outcome::message(EXIT_USAGE, format!("error: SIPH_SEED is not an integer: {s:?}\n")),
        }
    }
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome::message(EXIT_USAGE, format!("error: {e}\n")),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = g.threads {
            if t == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
            b = b.num_threads(t);
        }
        b.build().map_err(|e| CliError::Usage(e.to_string()))?
    };
    let config = json!({ "global": g, "args": command_args(&cli.command) });
    let mut report = Report::new(cli.command.name(), config);
    let start = Instant::now();
    pool.install(|| match g.precision {
        Precision::F64 => commands::execute::<f64>(&cli.command, g, &mut report),
        Precision::F32 => commands::execute::<f32>(&cli.command, g, &mut report),
    })?;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    let text = report.render(g.format)?;
    let code = report.exit_code();
    if let Some(path) = &g.out {
        std::fs::write(path, &text)?;
        return Ok(Outcome { code, output: String::new(), report: Some(report), written_to: Some(path.clone()) });
    }
    Ok(Outcome { code, output: text, report: Some(report), written_to: None })
}

fn command_args(cmd: &args::Command) -> serde_json::Value {
    use args::*;
    let v = match cmd {
        Command::Decompose(a) => serde_json::to_value(a),
        Command::Verify(VerifyCmd::Euler(a)) => serde_json::to_value(a),
        Command::Verify(VerifyCmd::LevelsetGrad(a)) => serde_json::to_value(a),
        Command::Verify(VerifyCmd::Saddle(a)) => serde_json::to_value(a),
        Command::Levelset(LevelsetCmd::Radii(a) | LevelsetCmd::Compact(a)) => serde_json::to_value(a),
        Command::Levelset(LevelsetCmd::Bounds(a)) => serde_json::to_value(a),
        Command::Levelset(LevelsetCmd::Negligible(a)) => serde_json::to_value(a),
        Command::Cert(CertCmd::PositiveRegion(a)) => serde_json::to_value(a),
        Command::Solve(SolveCmd::PairedLevel(a)) => serde_json::to_value(a),
        _ => Ok(json!({})),
    };
    v.unwrap_or(serde_json::Value::Null)
}
