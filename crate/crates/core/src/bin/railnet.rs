use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use railnet::epidemics::{Spread, DEFAULT_LAMBDA, DEFAULT_TRIALS, DEFAULT_T_MAX};
use railnet::io::{save_routes, save_stations};
use railnet::null_model::DEFAULT_SWAP_MULTIPLIER;
use railnet::pipeline::{run_pipeline, Command, PipelineConfig, DEFAULT_TOP_K};
use railnet::synthetic::{generate_city, CityConfig};
use railnet::{Error, Result};

#[derive(Parser)]
#[command(name = "railnet", version, about = "Transit network analysis: how much does the rail system matter?")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build G1–G3 and write the edge list.
    Build(RunArgs),
    /// Network statistics for G1–G4 only.
    Stats(RunArgs),
    /// Local bridge values and the rail vs. rest comparison.
    Bridges(RunArgs),
    /// Betweenness, closeness, top-k rail stations, degree-matched baselines.
    Centrality(RunArgs),
    /// Greedy modularity communities of the rail-free network.
    Communities(RunArgs),
    /// Per-community distance savings from rail.
    Benefit(RunArgs),
    /// SI spreading from the three station cohorts.
    Si(RunArgs),
    /// Every analysis.
    All(RunArgs),
    /// Write a seeded synthetic city as station and route files.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SpreadArg {
    Directed,
    Undirected,
}

#[derive(Args)]
struct RunArgs {
    /// Stations CSV: station_id,name,lat,lon,is_rrts,lines
    #[arg(long)]
    stations: PathBuf,
    /// Routes CSV: route_id,direction,seq,station_id
    #[arg(long)]
    routes: PathBuf,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Stations closer than this (meters) are linked both ways.
    #[arg(long, default_value_t = 250.0)]
    proximity_m: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Sample this many BFS sources for path statistics instead of all nodes.
    #[arg(long)]
    sample_sources: Option<usize>,
    /// Double-edge swaps per edge for the randomized network.
    #[arg(long, default_value_t = DEFAULT_SWAP_MULTIPLIER)]
    swap_multiplier: f64,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    lambda: f64,
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    t_max: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = SpreadArg::Directed)]
    spread: SpreadArg,
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,
    /// Degree window (percent) for comparable-degree matching.
    #[arg(long, default_value_t = 5.0)]
    window_pct: f64,
}

impl RunArgs {
    fn config(self) -> PipelineConfig {
        let mut cfg = PipelineConfig::new(self.stations, self.routes, self.out_dir);
        cfg.proximity_m = self.proximity_m;
        cfg.seed = self.seed;
        cfg.workers = self.workers;
        cfg.sample_sources = self.sample_sources;
        cfg.swap_multiplier = self.swap_multiplier;
        cfg.lambda = self.lambda;
        cfg.t_max = self.t_max;
        cfg.trials = self.trials;
        cfg.spread = match self.spread {
            SpreadArg::Directed => Spread::Directed,
            SpreadArg::Undirected => Spread::Undirected,
        };
        cfg.top_k = self.top_k;
        cfg.window_pct = self.window_pct;
        cfg
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Toy,
    City,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value_t = Preset::Toy)]
    preset: Preset,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stations: PathBuf,
    #[arg(long)]
    routes: PathBuf,
}

fn synth(args: SynthArgs) -> Result<()> {
    let mut cfg = match args.preset {
        Preset::Toy => CityConfig::toy(),
        Preset::City => CityConfig::city_scale(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let (stations, routes) = generate_city(&cfg)?;
    save_stations(&args.stations, &stations)?;
    save_routes(&args.routes, &routes)
}

fn run(cli: Cli) -> Result<()> {
    let (command, args) = match cli.command {
        Cmd::Synth(args) => return synth(args),
        Cmd::Build(a) => (Command::Build, a),
        Cmd::Stats(a) => (Command::Stats, a),
        Cmd::Bridges(a) => (Command::Bridges, a),
        Cmd::Centrality(a) => (Command::Centrality, a),
        Cmd::Communities(a) => (Command::Communities, a),
        Cmd::Benefit(a) => (Command::Benefit, a),
        Cmd::Si(a) => (Command::Si, a),
        Cmd::All(a) => (Command::All, a),
    };
    let summary = run_pipeline(command, &args.config())?;
    for name in summary.outputs {
        println!("{name}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("railnet: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
