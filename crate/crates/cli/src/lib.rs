//! Command-line front end for the identity registry: `list`, `check` and
//! seeded `sweep` runs with byte-stable reports.

pub mod config;
pub mod error;
pub mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qseries::identities::{lookup, parse_rational, register_all, Mode, Params, Strategy, Verdict};
use qseries::Policy;

pub use config::{Format, ModeChoice, SweepConfig};
pub use error::CliError;
pub use sweep::{run_sweep, SweepReport, SCHEMA};

/// Environment variable naming the default sweep config.
pub const CONFIG_ENV: &str = "QVERIFY_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "qverify", version, about = "Check q-series identities numerically and exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List registry entries with their anchors.
    List {
        #[arg(long)]
        json: bool,
        /// Show a single entry.
        #[arg(long)]
        id: Option<String>,
    },
    /// Evaluate one identity at explicit parameters.
    Check {
        id: String,
        /// Assignments such as `n=3 x=1/3 q=0.5`.
        #[arg(short = 'p', long = "params", num_args = 1.., value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Shorthand for `--mode exact`.
        #[arg(long, conflicts_with = "mode")]
        exact: bool,
        #[arg(long, value_parser = ["exact", "float"])]
        mode: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded sweep described by a config file.
    Sweep {
        /// Config file; falls back to $QVERIFY_CONFIG, then built-in defaults.
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_parser = ["auto", "exact", "float"])]
        mode: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_parser = ["grid", "random"])]
        strategy: Option<String>,
        /// Comma-separated IDs, `all` or `exact-capable`.
        #[arg(long)]
        ids: Option<String>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        parallel: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Exit status: 0 clean, 1 failures, 2 usage or config errors.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parse `args` (including the program name) and run, writing to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            write!(out, "{}", e.render())?;
            return Ok(code);
        }
    };
    match cli.command {
        Command::List { json, id } => list(out, json, id.as_deref()),
        Command::Check {
            id,
            params,
            exact,
            mode,
            tol,
            json,
        } => {
            let mode = if exact {
                Mode::Exact
            } else {
                mode.as_deref().unwrap_or("float").parse()?
            };
            check(out, &id, &params, mode, tol, json)
        }
        Command::Sweep {
            config,
            seed,
            count,
            mode,
            tol,
            strategy,
            ids,
            json,
            csv,
            parallel,
            out: path,
        } => {
            let source = config.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
            let mut cfg = match source {
                Some(p) => SweepConfig::from_path(&p)?,
                None => SweepConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(c) = count {
                cfg.count = c;
            }
            if let Some(m) = mode {
                cfg.mode = ModeChoice::parse(&m)?;
            }
            if tol.is_some() {
                cfg.tol = tol;
            }
            if let Some(s) = strategy {
                cfg.strategy = s.parse::<Strategy>()?;
            }
            if let Some(ids) = ids {
                cfg.identities = ids.split(',').map(|s| s.trim().to_string()).collect();
                cfg.selected()?;
            }
            if json {
                cfg.format = Format::Json;
            }
            if csv {
                cfg.format = Format::Csv;
            }
            if let Some(n) = parallel {
                cfg.parallel = n;
            }
            let report = run_sweep(&cfg)?;
            let text = match cfg.format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            };
            match path {
                Some(p) => {
                    std::fs::write(&p, text)?;
                    let t = &report.totals;
                    writeln!(
                        out,
                        "{} cases: {} pass, {} fail, {} skipped, {} no-convergence -> {}",
                        t.cases,
                        t.pass,
                        t.fail,
                        t.skipped_domain,
                        t.no_convergence,
                        p.display()
                    )?;
                }
                None => out.write_all(text.as_bytes())?,
            }
            Ok(if report.failures() == 0 { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

fn list(out: &mut dyn Write, json: bool, id: Option<&str>) -> Result<i32, CliError> {
    let defs: Vec<_> = match id {
        Some(id) => vec![lookup(id)?],
        None => register_all().iter().collect(),
    };
    if json {
        let infos: Vec<_> = defs.iter().map(|d| d.info()).collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&infos)?)?;
        return Ok(EXIT_OK);
    }
    let width = defs.iter().map(|d| d.id.len()).max().unwrap_or(2);
    writeln!(out, "{:<width$}  exact  anchor", "id")?;
    for d in defs {
        let exact = if d.exact_capable { "yes" } else { "no" };
        writeln!(out, "{:<width$}  {exact:<5}  {}", d.id, d.anchor)?;
        if id.is_some() {
            writeln!(out, "  params: {}", d.slot_names())?;
            writeln!(out, "  default tol: {:e}", d.default_tol)?;
            for note in d.notes {
                writeln!(out, "  note: {note}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Split `k=v` words into an assignment. Integer-looking values stay integers.
pub fn parse_assignments(words: &[String]) -> Result<Params, CliError> {
    let mut p = Params::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("`{w}` is not of the form name=value (e.g. q=1/2)"))
        })?;
        let (k, v) = (k.trim(), v.trim());
        match v.parse::<i64>() {
            Ok(i) => p.set_int(k, i),
            Err(_) => p.set_scalar(k, parse_rational(v)?),
        };
    }
    Ok(p)
}

fn check(
    out: &mut dyn Write,
    id: &str,
    words: &[String],
    mode: Mode,
    tol: Option<f64>,
    json: bool,
) -> Result<i32, CliError> {
    let def = lookup(id)?;
    let params = parse_assignments(words)?;
    let report = def.evaluate(&params, mode, tol, &Policy::default())?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(out, "{}", report.summary())?;
    }
    Ok(match report.verdict {
        Verdict::Pass | Verdict::SkippedDomain => EXIT_OK,
        Verdict::Fail | Verdict::NoConvergence => EXIT_FAIL,
    })
}
