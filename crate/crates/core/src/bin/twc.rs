use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twc::dataset::{FieldKind, InputFormat};
use twc::{GeoFrame, RunConfig, SelfTerm};

#[derive(Parser)]
#[command(name = "twc", version, about = "Topological weighted centroid analysis of planar point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alpha point, fields, nonlinear MST, transition graph and Markov attractors.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Seed for the chain simulation.
        #[arg(long)]
        seed: u64,
    },
    /// Meta-distance recursion, vanishing points and memberships.
    Metadist(Common),
    /// Leave-one-out outbreak candidates.
    Loo(Common),
    /// Recompute a single scalar field.
    Field {
        #[arg(value_enum)]
        field: Field,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Geojson,
}

#[derive(Clone, Copy, ValueEnum)]
enum Frame {
    Degrees,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum BetaSelf {
    Zero,
    MeanIndirect,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Alpha,
    Beta,
    Gamma,
    Theta,
    Metacluster,
}

#[derive(Args)]
struct Common {
    /// Point file (CSV or GeoJSON) or, with --matrix-input, a labeled distance matrix CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Treat the input as a square distance matrix.
    #[arg(long)]
    matrix_input: bool,
    /// Raster size as ROWSxCOLS.
    #[arg(long, default_value = "400x400", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Fractional margin around the bounding box.
    #[arg(long, default_value_t = 0.1)]
    margin: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Planar frame for latitude/longitude inputs.
    #[arg(long, value_enum, default_value = "degrees")]
    frame: Frame,
    /// Alpha/beta scan step.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, default_value_t = 500.0)]
    alpha_max: f64,
    /// Gamma step; adaptive when omitted.
    #[arg(long)]
    gamma_step: Option<f64>,
    /// Gamma convergence radius as a fraction of the maximum distance.
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    #[arg(long, default_value_t = 10_000)]
    t_max: usize,
    #[arg(long, value_enum, default_value = "zero")]
    beta_self: BetaSelf,
    /// Total simulated chains, split evenly over start nodes.
    #[arg(long, default_value_t = 10_000)]
    runs: usize,
    /// Follow the most likely transition instead of sampling.
    #[arg(long)]
    argmax_chains: bool,
    #[arg(long, default_value_t = 1e-8)]
    meta_epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    meta_max_iter: usize,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once(['x', 'X']).ok_or("expected ROWSxCOLS")?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(r)?, parse(c)?))
}

impl Common {
    fn config(&self, seed: Option<u64>) -> RunConfig {
        let mut cfg = RunConfig::new(&self.input, &self.out);
        cfg.format = match self.format {
            Format::Csv => InputFormat::Csv,
            Format::Geojson => InputFormat::Geojson,
        };
        cfg.matrix_input = self.matrix_input;
        (cfg.grid_rows, cfg.grid_cols) = self.grid;
        cfg.margin = self.margin;
        cfg.frame = match self.frame {
            Frame::Degrees => GeoFrame::Degrees,
            Frame::Local => GeoFrame::Local,
        };
        cfg.sweep.step = self.step;
        cfg.sweep.max = self.alpha_max;
        cfg.gamma.step = self.gamma_step;
        cfg.gamma.delta = self.delta;
        cfg.gamma.t_max = self.t_max;
        cfg.beta_self = match self.beta_self {
            BetaSelf::Zero => SelfTerm::Zero,
            BetaSelf::MeanIndirect => SelfTerm::MeanIndirect,
        };
        cfg.dtmc.runs = self.runs;
        cfg.dtmc.argmax = self.argmax_chains;
        if let Some(s) = seed {
            cfg.dtmc.seed = s;
        }
        cfg.meta.epsilon = self.meta_epsilon;
        cfg.meta.max_iterations = self.meta_max_iter;
        cfg
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, field) = match &cli.command {
        Command::Analyze { common, seed } => (common.config(Some(*seed)), None),
        Command::Metadist(common) | Command::Loo(common) => (common.config(None), None),
        Command::Field { field, common } => (
            common.config(None),
            Some(match field {
                Field::Alpha => FieldKind::Alpha,
                Field::Beta => FieldKind::Beta,
                Field::Gamma => FieldKind::Gamma,
                Field::Theta => FieldKind::Theta,
                Field::Metacluster => FieldKind::Metacluster,
            }),
        ),
    };
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match (&cli.command, field) {
        (Command::Analyze { .. }, _) => twc::cmd_analyze(&cfg),
        (Command::Metadist(_), _) => twc::cmd_metadist(&cfg),
        (Command::Loo(_), _) => twc::cmd_loo(&cfg),
        (Command::Field { .. }, Some(kind)) => twc::cmd_field(&cfg, kind),
        (Command::Field { .. }, None) => unreachable!("field kind is always parsed"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
