mod output;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use qpt_core::analysis::{
    write_scatter_csv, write_wmis_sweep_csv, AnalysisReport, AnalyzeOptions, ScatterRow, WmisSweepRow,
};
use qpt_core::instances::{local_min_from_json, verify_wmis_counts, LabeledInstance, Provenance};
use qpt_core::spectral::{sweep, uniform_grid, write_sweep_csv, SolverOptions};
use qpt_core::{
    analyze, bounds_report, build_wmis, gen_toy, infer_local_minimum, predict_crossing_ndpt, AnnealInstance, Error,
    InstanceJson, Normalization, ToyParams, WmisParams,
};

use output::OutDir;
use spec::{Seeds, Values};

#[derive(Parser)]
#[command(name = "qpt-bounds", version, about = "Bounds on first-order phase transitions in adiabatic annealing")]
struct Cli {
    /// Worker threads for batch commands and sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate toy landscapes on random regular graphs.
    GenToy(GenToyArgs),
    /// Build the WMIS instance and verify its local-minimum counts.
    BuildWmis(BuildWmisArgs),
    /// Bounds, exact sweep and classification of one instance file.
    Analyze(AnalyzeArgs),
    /// Crossing bounds and exact minimal gap over a range of local weights.
    SweepWmis(SweepWmisArgs),
    /// Analyze a batch of toy landscapes into one CSV.
    Scatter(ScatterArgs),
}

#[derive(Args)]
struct ToyArgs {
    /// Seed, inclusive range `a..b`, or comma list.
    #[arg(long, default_value = "0")]
    seed: Seeds,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    d: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Size of the local minimum (sampled in 8..=48 when absent).
    #[arg(long)]
    v_size: Option<usize>,
}

impl ToyArgs {
    fn params(&self, seed: u64) -> ToyParams {
        ToyParams {
            n: self.n,
            d: self.d,
            epsilon: self.epsilon,
            target_v_size: self.v_size,
            seed,
        }
    }
}

#[derive(Args)]
struct GenToyArgs {
    #[command(flatten)]
    toy: ToyArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BuildWmisArgs {
    #[arg(long)]
    w_l: f64,
    #[arg(long, default_value_t = 1.0)]
    w_g: f64,
    #[arg(long, default_value_t = 2.0)]
    j: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepFlags {
    /// Points of the uniform schedule grid on [0, 1].
    #[arg(long)]
    grid: Option<usize>,
    /// Use the symmetry-improved degree bound.
    #[arg(long)]
    symmetry: bool,
    /// Add the second-order perturbative crossing prediction.
    #[arg(long)]
    ndpt: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    instance: PathBuf,
    #[command(flatten)]
    flags: SweepFlags,
    /// Drop the 1/d driver normalization.
    #[arg(long)]
    unnormalized: bool,
    /// Bounds only: no exact sweep and no CSV.
    #[arg(long)]
    no_sweep: bool,
    /// Degeneracy window used when the file does not name a local minimum.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Seed recorded in the report when the file carries none.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepWmisArgs {
    /// Local weights: comma list or `start:stop:step`.
    #[arg(long, default_value = "1.5:1.95:0.05")]
    w_l: Values,
    /// Points of the uniform schedule grid on [0, 1].
    #[arg(long, default_value_t = 41)]
    grid: usize,
    /// Bounds only.
    #[arg(long)]
    skip_exact: bool,
    #[arg(long)]
    ndpt: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ScatterArgs {
    #[command(flatten)]
    toy: ToyArgs,
    #[command(flatten)]
    flags: SweepFlags,
    #[arg(long)]
    no_sweep: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

const DEFAULT_GRID: usize = 101;

fn analyze_options(flags: &SweepFlags, no_sweep: bool) -> AnalyzeOptions {
    AnalyzeOptions {
        grid: (!no_sweep).then_some(flags.grid.unwrap_or(DEFAULT_GRID)),
        use_symmetry: flags.symmetry,
        ndpt: flags.ndpt,
        ..Default::default()
    }
}

fn gen_toy_cmd(args: &GenToyArgs) -> Result<()> {
    let out = OutDir::new(&args.out)?;
    args.toy.seed.0.par_iter().try_for_each(|&seed| -> Result<()> {
        let params = args.toy.params(seed);
        let li = gen_toy(&params)?;
        out.write_json(&format!("toy-{seed}.json"), &li.to_json(Some(params.epsilon)))?;
        out.write_json(&format!("toy-{seed}.provenance.json"), &li.provenance)?;
        Ok(())
    })
}

fn build_wmis_cmd(args: &BuildWmisArgs) -> Result<()> {
    let out = OutDir::new(&args.out)?;
    let li = build_wmis(&WmisParams {
        w_g: args.w_g,
        w_l: args.w_l,
        j: args.j,
    })?;
    let stem = format!("wmis-{}", args.w_l);
    out.write_json(&format!("{stem}.json"), &li.to_json(None))?;
    out.write_json(&format!("{stem}.provenance.json"), &li.provenance)?;
    out.write_json(&format!("{stem}.verify.json"), &verify_wmis_counts(&li))?;
    Ok(())
}

fn load_labeled(path: &Path, unnormalized: bool, epsilon: f64) -> Result<(LabeledInstance, Option<u64>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut json: InstanceJson = serde_json::from_str(&text).map_err(Error::from)?;
    if unnormalized {
        json.normalization = Normalization::Unnormalized;
    }
    let inst: AnnealInstance = json.to_instance()?;
    let target = inst.target();
    if target.is_ground_degenerate() {
        return Err(Error::DegenerateGround("target ground state is degenerate".into()).into());
    }
    let local_min = match local_min_from_json(&inst, &json)? {
        Some(lm) => lm,
        None => infer_local_minimum(&inst, epsilon)?,
    };
    let global_node = target.ground_index();
    Ok((
        LabeledInstance {
            instance: inst,
            global_node,
            local_min,
            provenance: Provenance::Loaded,
        },
        json.seed,
    ))
}

fn analyze_cmd(args: &AnalyzeArgs) -> Result<()> {
    let (li, file_seed) = load_labeled(&args.instance, args.unnormalized, args.epsilon)?;
    let opts = analyze_options(&args.flags, args.no_sweep);
    let (report, sw) = analyze(&li, file_seed.or(args.seed), &opts)?;
    let out = OutDir::new(&args.out)?;
    let stem = args
        .instance
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance")
        .to_string();
    out.write_json(&format!("{stem}.report.json"), &report)?;
    if let Some(sw) = sw {
        out.write_with(&format!("{stem}.sweep.csv"), |w| write_sweep_csv(&sw, w))?;
    }
    Ok(())
}

fn wmis_row(w_l: f64, grid: usize, skip_exact: bool, ndpt: bool) -> Result<WmisSweepRow> {
    let li = build_wmis(&WmisParams::new(w_l))?;
    let lm = li.local_min.clone().with_symmetry(li.instance.driver())?;
    let b = bounds_report(&li.instance, &lm, true)?;
    let s_min_exact = if skip_exact {
        None
    } else {
        let sw = sweep(&li.instance, &uniform_grid(0.0, 1.0, grid)?, &SolverOptions::default())?;
        log::info!("w_l = {w_l}: s_min = {}, g_min = {:.3e}", sw.s_min, sw.g_min);
        Some(sw.s_min)
    };
    let ndpt_s_cross = if ndpt { predict_crossing_ndpt(&li)?.s_cross } else { None };
    Ok(WmisSweepRow {
        w_l,
        delta_e_t: b.delta_e_t,
        s_min_exact,
        bound_lo: b.s_star[0],
        bound_hi: b.s_star[1],
        bound_hi_sym: b.s_star_upper_sym,
        ndpt_s_cross,
    })
}

fn sweep_wmis_cmd(args: &SweepWmisArgs) -> Result<()> {
    let rows: Vec<WmisSweepRow> = args
        .w_l
        .0
        .par_iter()
        .map(|&w| wmis_row(w, args.grid, args.skip_exact, args.ndpt))
        .collect::<Result<_>>()?;
    let out = OutDir::new(&args.out)?;
    out.write_with("wmis_sweep.csv", |w| write_wmis_sweep_csv(&rows, w))?;
    Ok(())
}

fn scatter_cmd(args: &ScatterArgs) -> Result<()> {
    let opts = analyze_options(&args.flags, args.no_sweep);
    let reports: Vec<(u64, AnalysisReport)> = args
        .toy
        .seed
        .0
        .par_iter()
        .map(|&seed| -> Result<(u64, AnalysisReport)> {
            let li = gen_toy(&args.toy.params(seed))?;
            let (report, _) = analyze(&li, Some(seed), &opts)?;
            Ok((seed, report))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<ScatterRow> = reports.iter().map(|(s, r)| ScatterRow::from_report(*s, r)).collect();
    let out = OutDir::new(&args.out)?;
    out.write_with("scatter.csv", |w| write_scatter_csv(&rows, w))?;
    Ok(())
}

/// 1 for numerical or output failures, 2 for bad input.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::NoConvergence { .. } => 1,
                Error::Io(io) if io.kind() != std::io::ErrorKind::NotFound => 1,
                _ => 2,
            };
        }
        if let Some(io) = cause.downcast_ref::<std::io::Error>() {
            return if io.kind() == std::io::ErrorKind::NotFound { 2 } else { 1 };
        }
        if cause.downcast_ref::<tempfile::PersistError>().is_some() {
            return 1;
        }
    }
    2
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    match &cli.command {
        Command::GenToy(a) => gen_toy_cmd(a),
        Command::BuildWmis(a) => build_wmis_cmd(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::SweepWmis(a) => sweep_wmis_cmd(a),
        Command::Scatter(a) => scatter_cmd(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QPT_BOUNDS_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
