//! Thin command-line front end over the campaign stages. All logic lives in
//! the library; this binary parses arguments, applies overrides and maps
//! errors to exit codes (0 success, 1 usage, 2 validation, 3 numerical).

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vuwoc::campaign::{self, CampaignConfig, CampaignError, SnrSweep};
use vuwoc::fading::Family;

#[derive(Parser)]
#[command(name = "vuwoc", version, about = "Vertical underwater optical link simulation and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: plan, simulate, fit, gof, ber.
    Run(StageArgs),
    /// Sampling-constraint report for the configured link.
    Plan(StageArgs),
    /// Wave-optics simulation producing samples.csv.
    Simulate(StageArgs),
    /// Fit the distribution zoo against samples.csv.
    Fit(StageArgs),
    /// Goodness-of-fit table from the fit report.
    Gof(StageArgs),
    /// Average-BER curve from the fitted WGG record.
    Ber(StageArgs),
}

#[derive(Args)]
struct StageArgs {
    /// Campaign configuration file (key = value).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the stage artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the realization count.
    #[arg(long)]
    realizations: Option<usize>,
    /// Override the worker count.
    #[arg(long)]
    workers: Option<usize>,
    /// Override the model list (comma separated, or `all`).
    #[arg(long)]
    models: Option<String>,
    /// Override the BER sweep as start:stop:step in dB.
    #[arg(long = "snr-db")]
    snr_db: Option<String>,
}

fn load_config(args: &StageArgs) -> Result<CampaignConfig, String> {
    let mut config = CampaignConfig::from_path(&args.config).map_err(|e| e.to_string())?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(r) = args.realizations {
        config.realizations = r;
    }
    if let Some(w) = args.workers {
        config.workers = w.max(1);
    }
    if let Some(models) = &args.models {
        if models == "all" {
            config.models = Family::ALL.to_vec();
        } else {
            config.models = models
                .split(',')
                .map(|name| {
                    Family::from_name(name.trim())
                        .ok_or_else(|| format!("unknown model {name:?}"))
                })
                .collect::<Result<_, _>>()?;
        }
    }
    if let Some(snr) = &args.snr_db {
        config.snr = SnrSweep::parse(snr)
            .ok_or_else(|| format!("bad --snr-db {snr:?}, expected start:stop:step"))?;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn dispatch(command: Command) -> Result<(), (i32, String)> {
    let usage = |msg: String| (1, msg);
    let stage = |e: CampaignError| (e.exit_code(), e.to_string());
    match command {
        Command::Run(args) => {
            let config = load_config(&args).map_err(usage)?;
            let result = campaign::run_campaign(&config, &args.out).map_err(stage)?;
            println!(
                "campaign complete: {} samples, {} fit records, ber: {}",
                result.samples.len(),
                result.report.records.len(),
                if result.ber.is_some() { "emitted" } else { "skipped (no converged WGG)" }
            );
            println!("artifacts in {}", args.out.display());
        }
        Command::Plan(args) => {
            let config = load_config(&args).map_err(usage)?;
            let path = campaign::stage_plan(&config, &args.out).map_err(stage)?;
            let report = std::fs::read_to_string(&path)
                .map_err(|e| (2, format!("{}: {e}", path.display())))?;
            print!("{report}");
        }
        Command::Simulate(args) => {
            let config = load_config(&args).map_err(usage)?;
            let path = campaign::stage_simulate(&config, &args.out).map_err(stage)?;
            println!("samples written to {}", path.display());
        }
        Command::Fit(args) => {
            let config = load_config(&args).map_err(usage)?;
            let report = campaign::stage_fit(&config, &args.out).map_err(stage)?;
            for r in &report.records {
                match &r.note {
                    None => println!(
                        "{:<12} loglik {:.4} r2 {:.4} mse {:.3e}",
                        r.family.name(),
                        r.loglik,
                        r.r_squared,
                        r.mse
                    ),
                    Some(note) => println!("{:<12} flagged: {note}", r.family.name()),
                }
            }
        }
        Command::Gof(args) => {
            let _ = load_config(&args).map_err(usage)?;
            let path = campaign::stage_gof(&args.out).map_err(stage)?;
            let table = std::fs::read_to_string(&path)
                .map_err(|e| (2, format!("{}: {e}", path.display())))?;
            print!("{table}");
        }
        Command::Ber(args) => {
            let config = load_config(&args).map_err(usage)?;
            let curve = campaign::stage_ber(&config, &args.out).map_err(stage)?;
            println!("ber curve with {} points written", curve.points.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendered help/error but use exit code 1 for usage
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
