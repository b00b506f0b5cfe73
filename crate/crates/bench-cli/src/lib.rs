//! Command-line harness for the `fastsum` kernels.
//!
//! Exit codes: 0 on success, 1 when a checked error exceeds `--tol`,
//! 2 on usage, parse or I/O errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;

use cli::{BenchCommand, Cli, Command, Common, Format};
use report::{write_csv, write_json, BenchReportRow, Report};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Tolerance(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Tolerance(m) => write!(f, "tolerance check failed: {m}"),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render().ansi());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Fmm(a) => emit_rows(commands::fmm(a)?, &a.common, a, stdout),
        Command::Fgt(a) => emit_rows(commands::fgt(a)?, &a.common, a, stdout),
        Command::Bench(BenchCommand::M2l(a)) => emit_rows(commands::bench_m2l(a)?, &a.common, a, stdout),
        Command::Bench(BenchCommand::Hermite(a)) => {
            emit_rows(commands::bench_hermite(a)?, &a.common, a, stdout)
        }
        Command::Perf(a) => {
            let r = commands::perf(a)?;
            with_output(a.out.as_deref(), stdout, |w| match a.format {
                Format::Json => {
                    let doc = serde_json::json!({
                        "config": a,
                        "chip": r.chip,
                        "peak": r.peak,
                        "occupancy": r.occupancy,
                        "shared_fit": r.shared_fit,
                        "library_version": fastsum::VERSION,
                    });
                    serde_json::to_writer_pretty(&mut *w, &doc).map_err(std::io::Error::other)?;
                    writeln!(w)
                }
                Format::Csv => {
                    let mut c = csv::Writer::from_writer(&mut *w);
                    c.write_record(["metric", "value"])?;
                    for (k, v) in r.entries() {
                        c.write_record([k, v.as_str()])?;
                    }
                    c.flush()
                }
            })
        }
    }
}

fn with_output(
    path: Option<&std::path::Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write report: {e}"));
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w).map_err(io)?;
            w.flush().map_err(io)
        }
        None => f(stdout).map_err(io),
    }
}

fn emit_rows(
    rows: Vec<BenchReportRow>,
    common: &Common,
    config: &impl serde::Serialize,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    with_output(common.out.as_deref(), stdout, |w| match common.format {
        Format::Csv => write_csv(&rows, w).map_err(std::io::Error::other),
        Format::Json => write_json(
            &Report {
                config: serde_json::to_value(config).map_err(std::io::Error::other)?,
                rows: rows.clone(),
                library_version: fastsum::VERSION.to_string(),
            },
            w,
        ),
    })?;
    if let Some(tol) = common.tol {
        let worst = rows
            .iter()
            .filter_map(|r| r.max_rel_error.map(|e| (r.terms, e)))
            .filter(|(_, e)| !(*e <= tol))
            .map(|(p, e)| format!("p={p}: {e:e} > {tol:e}"))
            .collect::<Vec<_>>();
        if !worst.is_empty() {
            return Err(CliError::Tolerance(worst.join(", ")));
        }
    }
    Ok(())
}
