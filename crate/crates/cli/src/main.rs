// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! `ergokit` command-line front end.
//!
//! Every command writes JSON (default) or CSV to standard output or to
//! `--output`. Failures print one line of JSON to standard error and exit
//! with status 1; a failing `verify` run exits with status 2.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ergokit::curve::{coherent_max, max_anti_ergotropy, max_ergotropy, min_curve};
use ergokit::ergotropy::report;
use ergokit::io::{curve_to_csv, from_json, parse_spectrum, rows_to_csv, to_json_pretty};
use ergokit::oracle::{verify_suite, CheckedReport};
use ergokit::protocols::{
    pinsker_lower_bound, qutrit_diag_optimal_unitary, qutrit_min_ergotropy, qutrit_random_unitary_channel,
    qutrit_worst_diag_optimal, qutrit_worst_rev, u_rev, worst_case_delta_e, Phases,
};
use ergokit::{DensityMatrix, DiagonalState, Mode, RandomUnitaryChannel, Spectrum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ergokit", version, about = "Energy-constrained ergotropy toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Breakpoints of the minimum ergotropy (or anti-ergotropy) curve.
    Curve {
        /// Inline JSON array or path to a JSON/CSV file.
        #[arg(long)]
        spectrum: String,
        #[arg(long, default_value = "extract")]
        mode: Mode,
    },
    /// Minimum, maximum and coherent bounds at one or more energies.
    Eval {
        #[arg(long)]
        spectrum: String,
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
        energy: Vec<f64>,
    },
    /// Ergotropy report of a state (density matrix or population vector).
    Ergotropy {
        #[arg(long)]
        spectrum: String,
        /// Inline JSON or path to a JSON file.
        #[arg(long)]
        state: String,
    },
    /// Worst-case energy change of a channel over all states at energy E.
    Protocol {
        #[arg(long)]
        spectrum: String,
        #[arg(long, allow_negative_numbers = true)]
        energy: f64,
        /// `builtin:rev`, `builtin:qutrit-opt`, `builtin:qutrit-mix`, inline JSON or a file path.
        #[arg(long)]
        channel: String,
        #[arg(long, default_value = "extract")]
        mode: Mode,
    },
    /// Qutrit curves: minimum ergotropy and the two protocols' worst cases.
    Qutrit {
        #[arg(long)]
        eps: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        /// Number of energies on [0, 2 eps].
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
    /// Run the oracle suite against the analytic modules.
    Verify {
        #[arg(long, env = "ERGOKIT_SEED", default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        spectra: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Lib(ergokit::Error),
    Io(String),
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
        }
    }
}

impl From<ergokit::Error> for CliError {
    fn from(e: ergokit::Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Command output plus whether the run counts as a success.
struct Payload {
    text: String,
    ok: bool,
}

impl Payload {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Inline JSON when the argument looks like it, otherwise a file path.
fn inline_or_file(src: &str) -> Result<String> {
    let t = src.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        Ok(src.to_string())
    } else {
        read(Path::new(src))
    }
}

fn load_spectrum(src: &str) -> Result<Spectrum> {
    Ok(parse_spectrum(&inline_or_file(src)?)?)
}

fn load_state(src: &str) -> Result<DensityMatrix> {
    let text = inline_or_file(src)?;
    if text.trim_start().starts_with('[') {
        Ok(from_json::<DiagonalState>(&text)?.to_density_matrix())
    } else {
        Ok(from_json::<DensityMatrix>(&text)?)
    }
}

/// `(eps, delta)` of a spectrum of the form `(0, (1 + delta) eps, 2 eps)`.
fn qutrit_params(spec: &Spectrum) -> Result<(f64, f64)> {
    let l = spec.levels();
    if l.len() != 3 || l[0] != 0.0 || l[2] <= 0.0 {
        return Err(CliError::Usage(format!(
            "qutrit channels need levels (0, (1+delta) eps, 2 eps), got {l:?}"
        )));
    }
    let eps = l[2] / 2.0;
    Ok((eps, l[1] / eps - 1.0))
}

fn load_channel(src: &str, spec: &Spectrum, energy: f64) -> Result<RandomUnitaryChannel> {
    let phases = Phases::default();
    match src {
        "builtin:rev" => Ok(u_rev(spec.dim()).into()),
        "builtin:qutrit-opt" => {
            let (eps, delta) = qutrit_params(spec)?;
            Ok(qutrit_diag_optimal_unitary(eps, delta, energy, &phases)?.into())
        }
        "builtin:qutrit-mix" => {
            let (eps, delta) = qutrit_params(spec)?;
            Ok(qutrit_random_unitary_channel(eps, delta, energy, &phases)?)
        }
        other if other.starts_with("builtin:") => Err(CliError::Usage(format!("unknown channel `{other}`"))),
        other => Ok(from_json(&inline_or_file(other)?)?),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(to_json_pretty(value)? + "\n")
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

#[derive(Serialize)]
struct EvalRow {
    energy: f64,
    min_ergotropy: f64,
    min_anti_ergotropy: f64,
    max_ergotropy: f64,
    max_anti_ergotropy: f64,
    coherent_max_ergotropy: f64,
    coherent_max_anti_ergotropy: f64,
    /// Undefined at the spectrum endpoints.
    pinsker_ergotropy: Option<f64>,
    pinsker_anti_ergotropy: Option<f64>,
}

fn eval_row(spec: &Spectrum, e: f64) -> Result<EvalRow> {
    let (c_erg, c_anti) = coherent_max(spec, e)?;
    let interior = spec.min() < e && e < spec.max();
    let pinsker = |mode| -> Result<Option<f64>> {
        Ok(if interior {
            Some(pinsker_lower_bound(spec, e, mode)?)
        } else {
            None
        })
    };
    Ok(EvalRow {
        energy: e,
        min_ergotropy: min_curve(spec, Mode::Extract).evaluate(e)?,
        min_anti_ergotropy: min_curve(spec, Mode::Inject).evaluate(e)?,
        max_ergotropy: max_ergotropy(spec, e)?,
        max_anti_ergotropy: max_anti_ergotropy(spec, e)?,
        coherent_max_ergotropy: c_erg,
        coherent_max_anti_ergotropy: c_anti,
        pinsker_ergotropy: pinsker(Mode::Extract)?,
        pinsker_anti_ergotropy: pinsker(Mode::Inject)?,
    })
}

#[derive(Serialize)]
struct QutritRow {
    energy: f64,
    min_ergotropy: f64,
    worst_rev: f64,
    worst_diag_optimal: f64,
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    check: &'a str,
    method: String,
    oracle_value: f64,
    analytic_value: f64,
    abs_gap: f64,
    samples_or_cells: usize,
    tolerance: f64,
    passed: bool,
}

fn verify_rows(reports: &[CheckedReport]) -> Vec<VerifyRow<'_>> {
    reports
        .iter()
        .map(|c| VerifyRow {
            check: &c.check,
            method: serde_json::to_value(c.report.method)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
            oracle_value: c.report.oracle_value,
            analytic_value: c.report.analytic_value,
            abs_gap: c.report.abs_gap,
            samples_or_cells: c.report.samples_or_cells,
            tolerance: c.tolerance,
            passed: c.passed,
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Payload> {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Curve { spectrum, mode } => {
            let spec = load_spectrum(spectrum)?;
            let curve = min_curve(&spec, *mode);
            Ok(Payload::ok(if csv {
                curve_to_csv(&curve)?
            } else {
                json(&curve)?
            }))
        }
        Command::Eval { spectrum, energy } => {
            let spec = load_spectrum(spectrum)?;
            for &e in energy {
                spec.check_energy(e)?;
            }
            let rows = energy
                .iter()
                .map(|&e| eval_row(&spec, e))
                .collect::<Result<Vec<_>>>()?;
            Ok(Payload::ok(if csv { csv_rows(&rows)? } else { json(&rows)? }))
        }
        Command::Ergotropy { spectrum, state } => {
            let spec = load_spectrum(spectrum)?;
            let rho = load_state(state)?;
            let r = report(&rho, &spec)?;
            Ok(Payload::ok(if csv { csv_rows(&[r])? } else { json(&r)? }))
        }
        Command::Protocol {
            spectrum,
            energy,
            channel,
            mode,
        } => {
            let spec = load_spectrum(spectrum)?;
            spec.check_energy(*energy)?;
            let ch = load_channel(channel, &spec, *energy)?;
            let r = worst_case_delta_e(&ch, &spec, *energy, *mode)?;
            let text = if csv {
                // the witness matrix does not fit a flat table; JSON carries it
                rows_to_csv(
                    &["energy", "value", "dual_multiplier"],
                    [vec![*energy, r.value, r.dual_multiplier]],
                )?
            } else {
                json(&r)?
            };
            Ok(Payload::ok(text))
        }
        Command::Qutrit { eps, delta, grid } => {
            if *grid < 2 {
                return Err(CliError::Usage(format!(
                    "--grid needs at least 2 points, got {grid}"
                )));
            }
            Spectrum::qutrit(*eps, *delta)?;
            let top = 2.0 * eps;
            let rows = (0..*grid)
                .map(|i| {
                    let e = top * i as f64 / (grid - 1) as f64;
                    Ok(QutritRow {
                        energy: e,
                        min_ergotropy: qutrit_min_ergotropy(*eps, *delta, e)?,
                        worst_rev: qutrit_worst_rev(*eps, *delta, e)?,
                        worst_diag_optimal: qutrit_worst_diag_optimal(*eps, *delta, e)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Payload::ok(if csv { csv_rows(&rows)? } else { json(&rows)? }))
        }
        Command::Verify { seed, spectra } => {
            let reports = verify_suite(*seed, *spectra)?;
            let ok = reports.iter().all(|c| c.passed);
            let text = if csv {
                csv_rows(&verify_rows(&reports))?
            } else {
                json(&reports)?
            };
            Ok(Payload { text, ok })
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn fail(err: &CliError) -> ExitCode {
    let line = serde_json::json!({ "error": err.kind(), "message": err.message() });
    eprintln!("{line}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            return fail(&CliError::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    let payload = match run(&cli) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    if let Err(e) = emit(cli.output.as_deref(), &payload.text) {
        return fail(&e);
    }
    if payload.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "{}",
            serde_json::json!({ "error": "verification_failed", "message": "oracle gaps exceed tolerance" })
        );
        ExitCode::from(2)
    }
}
