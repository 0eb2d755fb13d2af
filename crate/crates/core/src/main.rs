use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use branes::cli::{self, RunOptions, RunReport, StateTable};
use branes::entropy::FuzzConfig;
use branes::{Error, Limits, Result};

/// Finite-site energy functors, derivation spaces and fuzzy entropy.
#[derive(Parser)]
#[command(name = "branes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(clap::Args)]
struct Flags {
    /// Seed added to every sample configuration.
    #[arg(long, global = true, env = "BRANES_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true, env = "BRANES_MAX_DIM")]
    max_dim: Option<usize>,
    #[arg(long, global = true, env = "BRANES_CARRIER_CAP")]
    carrier_cap: Option<usize>,
    #[arg(long, global = true, env = "BRANES_QUAD_PANELS")]
    quad_panels: Option<usize>,
    #[arg(long, global = true, env = "BRANES_TOLERANCE")]
    tolerance: Option<f64>,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "BRANES_JOBS", default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, env = "BRANES_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include per-check wall-clock times (breaks byte-determinism).
    #[arg(long, global = true, env = "BRANES_TIMINGS")]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario.
    Run { file: PathBuf },
    /// Sharp and fuzzy entropy of a state table.
    Entropy {
        file: PathBuf,
        /// Per-state CSV instead of the structured report.
        #[arg(long)]
        csv: bool,
    },
    /// Run only the uncertainty checks of a scenario.
    Uncertainty { file: PathBuf },
    /// Print the check catalog.
    ListChecks,
    /// Print the JSON schemas of the input formats.
    Schema,
}

impl Flags {
    fn apply(&self, limits: &mut Limits) {
        if let Some(d) = self.max_dim {
            limits.max_dim = d;
        }
        if let Some(c) = self.carrier_cap {
            limits.carrier_cap = c;
        }
        if let Some(p) = self.quad_panels {
            limits.quad_panels = p;
        }
        if let Some(t) = self.tolerance {
            limits.tolerance = t;
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn emit_report(out: &mut String, report: &RunReport, format: Format) -> i32 {
    match format {
        Format::Json => {
            out.push_str(&json(report));
            out.push('\n');
        }
        Format::Text => out.push_str(&report.to_text()),
    }
    report.exit_code
}

fn scenario_command(out: &mut String, path: &PathBuf, flags: &Flags, only: Option<Vec<&'static str>>) -> Result<i32> {
    let scenario = cli::load(path)?;
    let limits = cli::effective_limits(&scenario, |l| flags.apply(l))?;
    let opts = RunOptions {
        seed: flags.seed,
        timings: flags.timings,
        only,
    };
    Ok(emit_report(out, &cli::run(&scenario, &limits, &opts)?, flags.format))
}

fn main_inner(args: Cli, out: &mut String) -> Result<i32> {
    let flags = &args.flags;
    if flags.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(flags.jobs)
            .build_global()
            .map_err(|e| Error::Invalid(e.to_string()))?;
    }
    match &args.command {
        Command::Run { file } => scenario_command(out, file, flags, None),
        Command::Uncertainty { file } => scenario_command(out, file, flags, Some(vec!["uncertainty"])),
        Command::Entropy { file, csv } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let table: StateTable = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(e.to_string()))?;
            let mut limits = Limits::default();
            flags.apply(&mut limits);
            limits.check()?;
            let table_out = cli::entropy_table(&table, FuzzConfig::from_limits(&limits))?;
            if *csv {
                out.push_str(&table_out.fuzzy.as_ref().unwrap_or(&table_out.sharp).to_csv());
            } else if flags.format == Format::Text {
                writeln!(out, "sharp S = {} bits (Z = {})", table_out.sharp.entropy_bits, table_out.sharp.z).ok();
                if let Some(f) = &table_out.fuzzy {
                    writeln!(out, "fuzzy S_N = {} bits (Z = {}, residual {:e})", f.entropy_bits, f.z, f.residual).ok();
                }
            } else {
                writeln!(out, "{}", json(&table_out)).ok();
            }
            Ok(if table_out.passed { 0 } else { 1 })
        }
        Command::ListChecks => {
            match flags.format {
                Format::Json => {
                    let rows: Vec<_> = cli::CATALOG
                        .iter()
                        .map(|(name, stage, about)| serde_json::json!({"check": name, "stage": stage, "description": about}))
                        .collect();
                    writeln!(out, "{}", json(&rows)).ok();
                }
                Format::Text => {
                    for (name, stage, about) in cli::CATALOG {
                        writeln!(out, "{stage} {name:<22} {about}").ok();
                    }
                }
            }
            Ok(0)
        }
        Command::Schema => {
            writeln!(out, "{}", json(&cli::schema())).ok();
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut out = String::new();
    let result = main_inner(args, &mut out);
    // a closed pipe downstream is not our failure
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
