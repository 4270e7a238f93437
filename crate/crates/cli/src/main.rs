use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssekit_cli::{
    convergence_csv, ensemble_csv, parse_dt_list, reference_csv, trajectory_csv, write_outputs, CliError, CliResult,
    ExperimentConfig, Settings,
};

/// Simulate stochastic Schrödinger equations and write CSV data.
#[derive(Parser, Debug)]
#[command(name = "ssekit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mean and standard error of a functional over many realizations.
    Ensemble(Common),
    /// Single realizations selected by index.
    Trajectory {
        #[command(flatten)]
        common: Common,
        /// Realization indices to write (repeatable).
        #[arg(long = "index")]
        index: Vec<u64>,
    },
    /// Deterministic reference curve.
    Reference(Common),
    /// Time-averaged error against the reference for several step sizes.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Step sizes, comma separated.
        #[arg(long = "dt-list")]
        dt_list: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// homodyne | oscillator | ouqubit
    #[arg(long)]
    model: Option<String>,
    /// euler | platen
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long = "t-final")]
    t_final: Option<String>,
    #[arg(long)]
    realizations: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "omega-r")]
    omega_r: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    omega0: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long = "n-max")]
    n_max: Option<String>,
    #[arg(long)]
    n0: Option<String>,
    /// pi2 | 0
    #[arg(long)]
    theta: Option<String>,
    /// eta11 | mean_n | bloch_z | output_B | norm2
    #[arg(long)]
    functional: Option<String>,
    /// Write every stride-th grid point.
    #[arg(long)]
    stride: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn settings(&self) -> CliResult<Settings> {
        let base = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::new(),
        };
        let mut flags = Settings::new();
        let pairs = [
            ("model", &self.model),
            ("scheme", &self.scheme),
            ("dt", &self.dt),
            ("t-final", &self.t_final),
            ("realizations", &self.realizations),
            ("seed", &self.seed),
            ("omega-r", &self.omega_r),
            ("gamma", &self.gamma),
            ("omega0", &self.omega0),
            ("k", &self.k),
            ("n-max", &self.n_max),
            ("n0", &self.n0),
            ("theta", &self.theta),
            ("functional", &self.functional),
            ("stride", &self.stride),
            ("threads", &self.threads),
            ("out", &self.out),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v.clone())?;
            }
        }
        Ok(base.overlay(&flags))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let (cfg, outputs) = match cli.command {
        Command::Ensemble(c) => {
            let cfg = ExperimentConfig::from_settings(&c.settings()?)?;
            let out = ensemble_csv(&cfg)?;
            (cfg, out)
        }
        Command::Reference(c) => {
            let cfg = ExperimentConfig::from_settings(&c.settings()?)?;
            let out = reference_csv(&cfg)?;
            (cfg, out)
        }
        Command::Trajectory { common, index } => {
            let s = common.settings()?;
            let cfg = ExperimentConfig::from_settings(&s)?;
            let mut index = index;
            if index.is_empty() {
                index = match s.get("index") {
                    Some(v) => v
                        .split(',')
                        .map(|p| p.trim().parse::<u64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::Config(format!("index: cannot parse `{v}`")))?,
                    None => vec![0],
                };
            }
            let out = trajectory_csv(&cfg, &index)?;
            (cfg, out)
        }
        Command::Convergence { common, dt_list } => {
            let s = common.settings()?;
            let cfg = ExperimentConfig::from_settings(&s)?;
            let list = dt_list
                .as_deref()
                .or(s.get("dt-list"))
                .ok_or_else(|| CliError::Config("dt-list: required for convergence".into()))?;
            let out = convergence_csv(&cfg, &parse_dt_list(list)?)?;
            (cfg, out)
        }
    };
    for p in write_outputs(&cfg.out, &outputs)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
