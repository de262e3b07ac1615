use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gfdm_lab::cli::{
    cmd_ber, cmd_frame_info, cmd_psd, cmd_theory, CommandOutput, ExperimentConfig,
};
use gfdm_lab::{Error, Result};

/// GFDM baseband laboratory.
#[derive(Debug, Parser)]
#[command(name = "gfdm-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration; every key defaults to the reference setup.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed for the Monte Carlo and PSD generators.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write an SVG plot next to the CSV.
    #[arg(long, global = true)]
    svg: bool,

    /// Worker threads for Monte Carlo runs.
    #[arg(long, global = true, env = "GFDM_WORKERS")]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form BER over the sweep.
    Theory(RunArgs),
    /// Monte Carlo BER over the sweep.
    Ber(RunArgs),
    /// Welch PSD and notch depth of a notched allocation.
    Psd(PsdArgs),
    /// Frame layout report.
    FrameInfo(ChainArgs),
}

#[derive(Debug, Args)]
struct ChainArgs {
    /// siso or mimo.
    #[arg(long)]
    chain: Option<String>,
    #[arg(long, conflicts_with = "uncoded")]
    coded: bool,
    #[arg(long)]
    uncoded: bool,
    /// noiseless (alias perfect) or noisy.
    #[arg(long)]
    csi: Option<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Eb/N0 sweep as START:STOP:STEP in dB.
    #[arg(long)]
    sweep: Option<String>,
    /// Explicit comma-separated Eb/N0 points in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    points: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct PsdArgs {
    /// gfdm or ofdm.
    #[arg(long)]
    waveform: Option<String>,
    /// Width of the switched-off centre, Hz; 0 for a full allocation.
    #[arg(long)]
    notch_hz: Option<f64>,
}

fn apply_chain(cfg: &mut ExperimentConfig, a: &ChainArgs) {
    if let Some(c) = &a.chain {
        cfg.chain.antennas = c.clone();
    }
    if a.coded {
        cfg.chain.coded = true;
    }
    if a.uncoded {
        cfg.chain.coded = false;
    }
    if let Some(c) = &a.csi {
        cfg.chain.csi = c.clone();
    }
}

fn apply_run(cfg: &mut ExperimentConfig, a: &RunArgs) -> Result<()> {
    apply_chain(cfg, &a.chain);
    if let Some(s) = &a.sweep {
        let parts: Vec<f64> = s
            .split(':')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| sweep_error(s))?;
        let [start, stop, step] = parts[..] else {
            return Err(sweep_error(s));
        };
        cfg.sweep.start_db = start;
        cfg.sweep.stop_db = stop;
        cfg.sweep.step_db = step;
        cfg.sweep.points = None;
    }
    if let Some(p) = &a.points {
        cfg.sweep.points = Some(p.clone());
    }
    Ok(())
}

fn sweep_error(s: &str) -> Error {
    Error::Config {
        section: "sweep".into(),
        key: "--sweep".into(),
        reason: format!("`{s}` is not START:STOP:STEP"),
    }
}

fn emit(out: CommandOutput, csv_path: Option<PathBuf>, svg_path: Option<PathBuf>) -> Result<()> {
    match &csv_path {
        Some(p) => {
            std::fs::write(p, &out.csv)?;
            for line in &out.summary {
                println!("{line}");
            }
        }
        None => {
            print!("{}", out.csv);
            for line in &out.summary {
                eprintln!("{line}");
            }
        }
    }
    if let (Some(p), Some(svg)) = (svg_path, out.svg) {
        std::fs::write(&p, svg)?;
    }
    Ok(())
}

fn svg_destination(cfg: &ExperimentConfig, csv: Option<&Path>) -> Result<PathBuf> {
    if let Some(p) = &cfg.output.svg {
        return Ok(PathBuf::from(p));
    }
    match csv {
        Some(p) => Ok(p.with_extension("svg")),
        None => Err(Error::Config {
            section: "output".into(),
            key: "svg".into(),
            reason: "--svg needs --out or an [output] svg path".into(),
        }),
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config {
                section: "env".into(),
                key: "GFDM_WORKERS".into(),
                reason: e.to_string(),
            })?;
    }
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.run.seed = s;
    }
    let csv_path = cli
        .out
        .clone()
        .or_else(|| cfg.output.csv.as_ref().map(PathBuf::from));
    let output = match &cli.command {
        Command::FrameInfo(a) => {
            apply_chain(&mut cfg, a);
            print!("{}", cmd_frame_info(&cfg)?);
            return Ok(());
        }
        Command::Theory(a) => {
            apply_run(&mut cfg, a)?;
            cmd_theory(&cfg)?
        }
        Command::Ber(a) => {
            apply_run(&mut cfg, a)?;
            cmd_ber(&cfg)?
        }
        Command::Psd(a) => {
            if let Some(w) = &a.waveform {
                cfg.psd.waveform = w.clone();
            }
            if let Some(n) = a.notch_hz {
                cfg.psd.notch_hz = n;
            }
            cmd_psd(&cfg)?
        }
    };
    let svg_path = if cli.svg || cfg.output.svg.is_some() {
        Some(svg_destination(&cfg, csv_path.as_deref())?)
    } else {
        None
    };
    emit(output, csv_path, svg_path)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
