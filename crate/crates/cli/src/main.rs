use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use icdms_cli::commands::{self, OracleArgs, RegionArgs};
use icdms_cli::config::GlobalFlags;
use icdms_cli::CliError;
use icdms_core::{ChannelParams, RegionFamily};

/// Achievable rate regions of the interference channel with degraded
/// message sets.
#[derive(Debug, Parser)]
#[command(name = "icdms", version)]
struct Cli {
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized checks, recorded in metadata
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Replace each frontier by its upper concave envelope (time sharing)
    #[arg(long, global = true)]
    convex_hull: bool,

    /// Evaluate the V-stream constraint with Y1 instead of Y2
    #[arg(long, global = true)]
    paper_literal: bool,

    /// Steps for every swept parameter
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    grid_steps: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    #[arg(long, requires_all = ["p2", "c12", "c21"])]
    p1: Option<f64>,
    #[arg(long, requires = "p1")]
    p2: Option<f64>,
    #[arg(long, requires = "p1")]
    c12: Option<f64>,
    #[arg(long, requires = "p1")]
    c21: Option<f64>,
}

impl ChannelArgs {
    fn values(&self) -> Option<[f64; 4]> {
        Some([self.p1?, self.p2?, self.c12?, self.c21?])
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep Gaussian region families and write the frontier CSV
    Region {
        /// JSON run configuration
        #[arg(long)]
        config: Option<PathBuf>,
        /// Channel and regions of a reference figure (fig4..fig7)
        #[arg(long)]
        preset: Option<String>,
        /// Region families: g, g_suc, g_sp1, g_sp2
        #[arg(long = "region", value_delimiter = ',', value_parser = parse_family)]
        regions: Vec<RegionFamily>,
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Evaluate a discrete region for one factored distribution
    Discrete {
        /// JSON distribution file
        file: PathBuf,
        /// 1 = full scheme, 2 = simultaneous, 3 = successive decoding
        #[arg(long)]
        theorem: Option<u8>,
    },
    /// Reproduce a reference figure: CSV, SVG and metadata
    Figure {
        /// fig4, fig5, fig6 or fig7
        preset: String,
    },
    /// Dirty-paper coefficient and its rate, checked on a grid
    DpcLambda {
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Grid points for the check
        #[arg(long, default_value_t = 2001)]
        steps: usize,
    },
    /// Compare closed forms against the independent oracles
    OracleCheck {
        /// Random Gaussian parameter draws
        #[arg(long, default_value_t = 10)]
        draws: usize,
        /// Monte Carlo samples per entropy
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Random discrete distributions
        #[arg(long, default_value_t = 100)]
        discrete_draws: usize,
    },
}

fn parse_family(s: &str) -> Result<RegionFamily, String> {
    s.parse().map_err(|e: icdms_core::Error| e.to_string())
}

fn channel_of(preset: Option<&str>, args: &ChannelArgs) -> Result<ChannelParams, CliError> {
    if let Some([p1, p2, c12, c21]) = args.values() {
        return Ok(ChannelParams::new(p1, p2, c12, c21)?);
    }
    match preset {
        Some(p) => Ok(p
            .parse::<icdms_core::presets::FigurePreset>()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .channel),
        None => Err(CliError::Usage(
            "give --preset or all of --p1 --p2 --c12 --c21".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let flags = GlobalFlags {
        out: cli.out,
        seed: cli.seed,
        convex_hull: cli.convex_hull,
        paper_literal: cli.paper_literal,
        grid_steps: cli.grid_steps.map(|n| n as usize),
    };
    match cli.command {
        Command::Region {
            config,
            preset,
            regions,
            channel,
        } => commands::cmd_region(
            &RegionArgs {
                config,
                preset,
                regions,
                channel: channel.values(),
            },
            &flags,
        ),
        Command::Discrete { file, theorem } => commands::cmd_discrete(&file, theorem, &flags),
        Command::Figure { preset } => commands::cmd_figure(&preset, &flags),
        Command::DpcLambda {
            preset,
            channel,
            alpha,
            beta,
            steps,
        } => commands::cmd_dpc(channel_of(preset.as_deref(), &channel)?, alpha, beta, steps),
        Command::OracleCheck {
            draws,
            samples,
            discrete_draws,
        } => commands::cmd_oracle_check(
            OracleArgs {
                gaussian_draws: draws,
                samples,
                discrete_draws,
            },
            flags.seed.unwrap_or(0),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
