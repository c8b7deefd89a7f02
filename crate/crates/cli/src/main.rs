use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use ibsfc::analytics::{
    hp_filter, mean, moving_average, plot_ensemble_figures, plot_sweep, read_long, write_ensemble,
    write_long, write_summary, write_wide, EnsembleSummary, TimeSeriesFrame, HP_LAMBDA_MONTHLY,
    SERIES_FILE,
};
use ibsfc::engine::{run_ensemble, state_at, Ensemble};
use ibsfc::experiments::{parse_grid, ShockKind, SweepParam, SweepSpec};
use ibsfc::interbank::Scenario;
use ibsfc::RunConfig;

/// Agent-based simulator of a two-tier payment system with overnight and
/// term interbank markets.
#[derive(Parser, Debug)]
#[command(name = "ibsfc", version, about)]
struct Cli {
    /// TOML configuration; defaults are used for anything it omits.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an ensemble of replicates and write audit, interbank and series tables.
    Simulate(SimulateArgs),
    /// Vary one parameter over a grid.
    Sweep(SweepArgs),
    /// Filter and plot a previously written series table.
    Analyze(AnalyzeArgs),
    /// Print the full economy state at a given period as JSON.
    StateDump(StateDumpArgs),
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long)]
    scenario: Option<Scenario>,
    #[arg(long)]
    shock: Option<ShockKind>,
    #[arg(long)]
    replicates: Option<u32>,
    #[arg(long)]
    steps: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    burn_in: Option<u32>,
}

impl RunArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(s) = self.scenario {
            cfg.interbank.scenario = s;
        }
        if let Some(s) = self.shock {
            cfg.run.shock = s;
        }
        if let Some(r) = self.replicates {
            cfg.run.replicates = r;
        }
        if let Some(s) = self.steps {
            cfg.run.steps = s;
        }
        if let Some(s) = self.seed {
            cfg.run.seed = s;
        }
        if let Some(b) = self.burn_in {
            cfg.run.burn_in = b;
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write the default figure set.
    #[arg(long)]
    figures: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// m1..m5, r, delta, l, gamma or gd.
    #[arg(long)]
    param: SweepParam,
    /// `start:stop:step` or a comma-separated list; defaults to the parameter's usual grid.
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    run: RunArgs,
    /// Moving-average window for the sweep figures.
    #[arg(long, default_value_t = 12)]
    ma: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Directory holding a series table written by `simulate`.
    #[arg(long, default_value = "out")]
    input: PathBuf,
    /// Write HP trend and cycle of every variable.
    #[arg(long)]
    hp: bool,
    #[arg(long, default_value_t = HP_LAMBDA_MONTHLY)]
    lambda: f64,
    /// Trailing moving-average window.
    #[arg(long)]
    ma: Option<usize>,
    /// Write SVG figures.
    #[arg(long)]
    figures: bool,
    /// Periods dropped before filtering.
    #[arg(long, default_value_t = 0)]
    burn_in: u32,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct StateDumpArgs {
    #[arg(long, default_value_t = 0)]
    period: u32,
    #[arg(long, default_value_t = 0)]
    replicate: u32,
    #[command(flatten)]
    run: RunArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(RunConfig::default()),
    }
}

const REPORTED: [&str; 8] = [
    "volume_on",
    "volume_term",
    "rate_on",
    "rate_term",
    "gamma_on",
    "gamma_term",
    "ms_deficit",
    "ms_surplus",
];

fn report(ensemble: &Ensemble) {
    let burn_in = ensemble.config.run.burn_in;
    let frames: Vec<TimeSeriesFrame> = ensemble.runs.iter().map(TimeSeriesFrame::from_run).collect();
    for var in REPORTED {
        let per_run: Vec<f64> = frames.iter().map(|f| f.mean_after(var, burn_in)).collect();
        println!("{var:>12} {:>14.6}", mean(&per_run));
    }
}

fn simulate(cfg: RunConfig, args: &SimulateArgs) -> Result<bool> {
    let ensemble = run_ensemble(&cfg)?;
    let written = write_ensemble(&ensemble, &args.out)?;
    for p in &written {
        info!("wrote {}", p.display());
    }
    if args.figures {
        let frames: Vec<TimeSeriesFrame> = ensemble.runs.iter().map(TimeSeriesFrame::from_run).collect();
        if let Some(summary) = EnsembleSummary::from_frames(&frames) {
            plot_ensemble_figures(&summary, None, &args.out, "")?;
        }
    }
    report(&ensemble);
    let pass = ensemble.all_pass();
    println!("audit {}", if pass { "pass" } else { "FAIL" });
    Ok(pass)
}

fn sweep(mut base: RunConfig, args: &SweepArgs) -> Result<bool> {
    let mut spec = SweepSpec::new(args.param);
    if let Some(g) = &args.grid {
        spec.grid = parse_grid(g)?;
    }
    if spec.grid.is_empty() {
        bail!("empty grid");
    }
    if let Some(s) = args.run.scenario {
        spec.scenario = s;
    }
    if let Some(r) = args.run.replicates {
        spec.replicates = r;
    }
    args.run.apply(&mut base);
    fs::create_dir_all(&args.out)?;
    let label = args.param.label();
    let mut points = Vec::new();
    let mut pass = true;
    for (value, cfg) in spec.configs(&base)? {
        let ensemble = run_ensemble(&cfg)?;
        pass &= ensemble.all_pass();
        let frames: Vec<TimeSeriesFrame> = ensemble.runs.iter().map(TimeSeriesFrame::from_run).collect();
        let stem = format!("sweep_{label}_{value}");
        let frame = if frames.len() == 1 {
            write_wide(&frames[0], args.out.join(format!("{stem}.csv")))?;
            frames[0].clone()
        } else {
            write_long(&frames, args.out.join(format!("{stem}.csv")))?;
            EnsembleSummary::from_frames(&frames)
                .map(|s| s.mean_frame(0))
                .unwrap_or_else(|| frames[0].clone())
        };
        let vol: Vec<f64> = frames.iter().map(|f| f.mean_after("volume_on", cfg.run.burn_in) + f.mean_after("volume_term", cfg.run.burn_in)).collect();
        println!("{label} = {value:<8} volume {:>14.6}", mean(&vol));
        points.push((value, frame));
    }
    for var in ["volume_on", "volume_term", "facility_rl", "facility_rd"] {
        plot_sweep(args.out.join(format!("sweep_{label}_{var}.svg")), label, var, &points, args.ma)?;
    }
    println!("audit {}", if pass { "pass" } else { "FAIL" });
    Ok(pass)
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let path = args.input.join(SERIES_FILE);
    let frames: Vec<TimeSeriesFrame> = read_long(&path)
        .with_context(|| format!("reading {}", path.display()))?
        .into_iter()
        .map(|f| f.trimmed(args.burn_in))
        .collect();
    let Some(summary) = EnsembleSummary::from_frames(&frames) else {
        bail!("{} holds no replicates", path.display());
    };
    fs::create_dir_all(&args.out)?;
    write_summary(&summary, args.out.join("summary.csv"))?;
    let mean_frame = summary.mean_frame(0);
    let mut cycles = None;
    if args.hp {
        let mut trend = TimeSeriesFrame::new(0, mean_frame.periods.clone());
        let mut cycle = TimeSeriesFrame::new(0, mean_frame.periods.clone());
        for (name, col) in &mean_frame.columns {
            let (t, c) = hp_filter(col, args.lambda)?;
            trend.insert(name.clone(), t);
            cycle.insert(name.clone(), c);
        }
        write_wide(&trend, args.out.join("hp_trend.csv"))?;
        write_wide(&cycle, args.out.join("hp_cycle.csv"))?;
        cycles = Some(cycle);
    }
    if let Some(w) = args.ma {
        if w == 0 {
            bail!("moving-average window must be positive");
        }
        let mut ma = TimeSeriesFrame::new(0, mean_frame.periods.clone());
        for (name, col) in &mean_frame.columns {
            ma.insert(name.clone(), moving_average(col, w));
        }
        write_wide(&ma, args.out.join(format!("ma_{w}.csv")))?;
    }
    if args.figures {
        for p in plot_ensemble_figures(&summary, cycles.as_ref(), &args.out, "")? {
            info!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn state_dump(mut cfg: RunConfig, args: &StateDumpArgs) -> Result<()> {
    args.run.apply(&mut cfg);
    let state = state_at::<f64>(&cfg, args.replicate, args.period)?;
    let json = serde_json::to_string_pretty(&state)?;
    match &args.out {
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = load_config(cli.config.as_deref()).and_then(|mut cfg| match &cli.command {
        Command::Simulate(a) => {
            a.run.apply(&mut cfg);
            simulate(cfg, a)
        }
        Command::Sweep(a) => sweep(cfg, a),
        Command::Analyze(a) => analyze(a).map(|()| true),
        Command::StateDump(a) => state_dump(cfg, a).map(|()| true),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
