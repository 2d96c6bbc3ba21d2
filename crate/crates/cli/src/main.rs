use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pdrx::sweep::{read_csv_columns, write_csv, write_json, write_outputs};
use pdrx::{find_crossing, run_point, run_sweep, SweepConfig};

#[derive(Parser)]
#[command(name = "pdrx", version, about = "Binary coherent-state receivers under phase diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every configured receiver over the sigma grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// CSV destination; overrides `output` in the config. `-` for stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON mirror of the CSV rows; overrides `json_output`.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a single sigma and print the row as JSON.
    Point {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sigma: f64,
    },
    /// First sigma at which column A crosses column B in a sweep CSV.
    Crossings {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Abscissa column.
        #[arg(long, default_value = "sigma")]
        x: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Fock cutoff N; chosen from the amplitudes when absent.
    #[arg(long)]
    cutoff: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<SweepConfig> {
        let mut cfg = SweepConfig::from_path(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(c) = self.cutoff {
            cfg.fock_cutoff = Some(c);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { common, out, json } => {
            let cfg = common.load()?;
            let rows = run_sweep(&cfg)?;
            for v in rows.iter().flat_map(|r| r.envelope_violations()) {
                eprintln!("warning: {v}");
            }
            let csv_path = out.or(cfg.output.clone());
            let json_path = json.or(cfg.json_output.clone());
            match csv_path.as_deref() {
                Some(p) if p.as_os_str() == "-" => {
                    write_csv(&rows, std::io::stdout().lock())?;
                    write_outputs(&rows, None, json_path.as_deref())?;
                }
                None if json_path.is_none() => write_csv(&rows, std::io::stdout().lock())?,
                p => write_outputs(&rows, p, json_path.as_deref())?,
            }
            eprintln!("{} rows", rows.len());
        }
        Command::Point { common, sigma } => {
            let cfg = common.load()?;
            if !(sigma.is_finite() && sigma >= 0.0) {
                bail!("sigma must be a finite non-negative number, got {sigma}");
            }
            let row = run_point(&cfg, sigma)?;
            let mut out = std::io::stdout().lock();
            write_json(std::slice::from_ref(&row), &mut out)?;
            out.flush()?;
        }
        Command::Crossings { csv, a, b, x } => {
            let cols = read_csv_columns(&csv, &[&x, &a, &b])
                .with_context(|| format!("reading {}", csv.display()))?;
            match find_crossing(&cols[0], &cols[1], &cols[2])? {
                Some(c) => println!("{c:.6}"),
                None => println!("none"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
