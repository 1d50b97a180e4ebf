//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use redraw::calibrate::{self, CalibrationConfig, MetricBounds};
use redraw::io;
use redraw::metrics::{confusion, report, ConfusionCounts, MetricsReport};
use redraw::model::{
    InfluenceMatrix, LockReport, NetworkSpec, PhaseTrace, ReconstructionParams, SimConfig,
};
use redraw::reconstruct::{
    self, correlation_from_traces, dpi_filter, threshold_cut, uniform_windows, LockPolicy,
    WindowedReconstruction,
};
use redraw::simulator::{lock_report, run_batch_with, ExperimentBatch};
use redraw::topologies::{self, TopologyRecipe};

use crate::manifest::RunManifest;
use crate::{Format, LockPolicyArg, OutputArgs, ReconArgs, SimArgs};

impl OutputArgs {
    fn wants(&self, format: Format) -> bool {
        self.format.is_empty() || self.format.contains(&format)
    }

    fn dir(&self) -> Result<&Path> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))?;
        Ok(&self.out)
    }
}

impl From<LockPolicyArg> for LockPolicy {
    fn from(arg: LockPolicyArg) -> Self {
        match arg {
            LockPolicyArg::Strict => LockPolicy::Reject,
            LockPolicyArg::Warn => LockPolicy::WarnAndInclude,
        }
    }
}

pub fn parse_bounds(text: &str) -> Result<MetricBounds, String> {
    let mut bounds = MetricBounds::default();
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{part}'"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| format!("bound '{part}': {e}"))?;
        match key.trim().to_ascii_lowercase().as_str() {
            "ppv" => bounds.ppv_min = value,
            "acc" => bounds.acc_min = value,
            "tpr" => bounds.tpr_min = value,
            "fpr" => bounds.fpr_max = value,
            other => return Err(format!("unknown metric '{other}'")),
        }
    }
    Ok(bounds)
}

// ---------------------------------------------------------------- generate

#[derive(Subcommand)]
pub enum RecipeCmd {
    /// Path 1 -> 2 -> ... -> n with per-edge weights.
    Chain {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Comma-separated weights, one per edge.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Orient the path from node n down to node 1.
        #[arg(long)]
        reverse: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Node 1 drives nodes 3..n, node 2 drives node 1.
    Star {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        leaf_weight: Option<f64>,
        #[arg(long)]
        feed_weight: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Four-node diamond block.
    Block4 {
        #[arg(long)]
        weight: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Four blocks around a central hub with two-way gateway wiring.
    GeometricHub {
        #[arg(long)]
        intra_weight: Option<f64>,
        #[arg(long)]
        hub_weight: Option<f64>,
        #[arg(long)]
        feedback_weight: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Four blocks whose every node feeds a central hub.
    RavaszBarabasi {
        #[arg(long)]
        intra_weight: Option<f64>,
        #[arg(long)]
        hub_weight: Option<f64>,
        #[arg(long)]
        feedback_weight: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ring where node i hears i-1 (strongly) and i-2 (weakly).
    RegularRing {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long)]
        w1: Option<f64>,
        #[arg(long)]
        w2: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regular ring plus five long-distance edges.
    RewiredRing {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long)]
        w1: Option<f64>,
        #[arg(long)]
        w2: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Directed Erdos-Renyi G(n, p) draw.
    Er {
        #[arg(long)]
        n: usize,
        /// Edge probability; defaults to ln(n)/(2n).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ingest a source,target[,weight] edge-list CSV.
    FromFile {
        #[arg(long)]
        path: PathBuf,
        /// Force the node count (labels above it are rejected).
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl RecipeCmd {
    fn split(self) -> (TopologyRecipe, OutputArgs) {
        match self {
            RecipeCmd::Chain {
                n,
                weights,
                reverse,
                output,
            } => (
                TopologyRecipe::Chain {
                    n,
                    weights,
                    reverse,
                },
                output,
            ),
            RecipeCmd::Star {
                n,
                leaf_weight,
                feed_weight,
                output,
            } => (
                TopologyRecipe::Star {
                    n,
                    leaf_weight,
                    feed_weight,
                },
                output,
            ),
            RecipeCmd::Block4 { weight, output } => (TopologyRecipe::Block4 { weight }, output),
            RecipeCmd::GeometricHub {
                intra_weight,
                hub_weight,
                feedback_weight,
                output,
            } => (
                TopologyRecipe::GeometricHub {
                    intra_weight,
                    hub_weight,
                    feedback_weight,
                },
                output,
            ),
            RecipeCmd::RavaszBarabasi {
                intra_weight,
                hub_weight,
                feedback_weight,
                output,
            } => (
                TopologyRecipe::RavaszBarabasi {
                    intra_weight,
                    hub_weight,
                    feedback_weight,
                },
                output,
            ),
            RecipeCmd::RegularRing { n, w1, w2, output } => {
                (TopologyRecipe::RegularRing { n, w1, w2 }, output)
            }
            RecipeCmd::RewiredRing { n, w1, w2, output } => (
                TopologyRecipe::RewiredRing {
                    n,
                    w1,
                    w2,
                    extra: None,
                },
                output,
            ),
            RecipeCmd::Er { n, p, seed, output } => {
                (TopologyRecipe::ErdosRenyi { n, p, seed }, output)
            }
            RecipeCmd::FromFile {
                path,
                nodes,
                output,
            } => (
                TopologyRecipe::FromFile {
                    path: path.to_string_lossy().into_owned(),
                    nodes,
                },
                output,
            ),
        }
    }
}

pub fn generate(recipe: RecipeCmd) -> Result<()> {
    let start = Instant::now();
    let (recipe, output) = recipe.split();
    let spec = topologies::build(&recipe)?;
    let dir = output.dir()?;

    let mut manifest = RunManifest::new("generate", serde_json::to_value(&recipe)?, None);
    if output.wants(Format::Json) {
        let path = dir.join("network.json");
        io::write_json(&path, &spec)?;
        manifest.output(&path);
    }
    if output.wants(Format::Dot) {
        let path = dir.join("network.dot");
        fs::write(&path, io::network_dot(&spec))?;
        manifest.output(&path);
    }
    if output.wants(Format::Csv) {
        let path = dir.join("edges.csv");
        io::write_edge_list(&path, &spec)?;
        manifest.output(&path);
    }
    manifest.write(dir, start.elapsed().as_secs_f64())?;
    println!(
        "generated {} nodes, {} edges -> {}",
        spec.n,
        spec.edge_count(),
        dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct LockSummary {
    experiment: usize,
    eta: f64,
    sigma: f64,
    cv: f64,
    chi: f64,
    settle_time: f64,
    locked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

impl LockSummary {
    fn from_report(index: usize, report: &LockReport) -> Self {
        LockSummary {
            experiment: index,
            eta: report.eta,
            sigma: report.sigma,
            cv: report.cv,
            chi: report.chi,
            settle_time: report.settle_time,
            locked: report.locked,
            diagnostic: report.diagnostic.clone(),
        }
    }
}

fn sim_template(sim: &SimArgs) -> SimConfig {
    SimConfig {
        natural_frequencies: Vec::new(),
        initial_phases: Vec::new(),
        coupling: sim.coupling,
        phase_shift: sim.phi,
        duration: sim.duration,
        dt: sim.dt,
        rng_seed: sim.seed,
    }
}

fn run_sim_batch(spec: &NetworkSpec, sim: &SimArgs) -> Result<ExperimentBatch> {
    Ok(run_batch_with(
        spec,
        &sim_template(sim),
        sim.experiments,
        sim.seed,
        sim.settle_time,
        sim.chi,
    )?)
}

fn write_locks(dir: &Path, reports: &[LockReport]) -> Result<PathBuf> {
    let summaries: Vec<LockSummary> = reports
        .iter()
        .enumerate()
        .map(|(k, r)| LockSummary::from_report(k + 1, r))
        .collect();
    let path = dir.join("locks.json");
    io::write_json(&path, &summaries)?;
    Ok(path)
}

fn enforce_policy(reports: &[LockReport], policy: LockPolicyArg) -> Result<()> {
    let unlocked: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.locked)
        .map(|(k, _)| k + 1)
        .collect();
    if unlocked.is_empty() {
        return Ok(());
    }
    match policy {
        LockPolicyArg::Strict => Err(anyhow!(
            "experiments {unlocked:?} did not phase-lock (rerun with --lock-policy warn to include them)"
        )),
        LockPolicyArg::Warn => {
            eprintln!("warning: experiments {unlocked:?} did not phase-lock; included anyway");
            Ok(())
        }
    }
}

pub fn simulate(
    spec_path: &Path,
    sim: &SimArgs,
    output: &OutputArgs,
    lock_policy: LockPolicyArg,
) -> Result<()> {
    let start = Instant::now();
    let spec = io::read_network_json(spec_path)?;
    let batch = run_sim_batch(&spec, sim)?;
    let dir = output.dir()?;

    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "spec": spec_path,
            "duration": sim.duration,
            "dt": sim.dt,
            "coupling": sim.coupling,
            "phi": sim.phi,
            "experiments": sim.experiments,
            "chi": sim.chi,
            "settle_time": sim.settle_time,
        }),
        Some(sim.seed),
    );
    manifest.input(spec_path);

    for trace in &batch.traces {
        let path = dir.join(format!("trace_{:03}.csv", trace.experiment_index));
        io::write_trace_csv(&path, trace)?;
        manifest.output(&path);
    }
    let locks = write_locks(dir, &batch.lock_reports)?;
    manifest.output(&locks);
    manifest.write(dir, start.elapsed().as_secs_f64())?;

    let locked = batch.lock_reports.iter().filter(|r| r.locked).count();
    println!(
        "simulated {} experiments ({} locked) -> {}",
        batch.k(),
        locked,
        dir.display()
    );
    enforce_policy(&batch.lock_reports, lock_policy)
}

// ------------------------------------------------------------- reconstruct

fn read_traces(dir: &Path) -> Result<Vec<PhaseTrace>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading trace directory {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("trace_") && n.ends_with(".csv"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no trace_*.csv files in {}", dir.display());
    }
    files
        .iter()
        .enumerate()
        .map(|(k, path)| Ok(io::read_trace_csv(path, k + 1)?))
        .collect()
}

struct StageOutputs {
    raw: InfluenceMatrix,
    post_dpi: InfluenceMatrix,
    post_threshold: InfluenceMatrix,
}

fn run_stages(traces: &[PhaseTrace], params: &ReconstructionParams) -> Result<StageOutputs> {
    let raw = correlation_from_traces(traces)?.averaged;
    let post_dpi = dpi_filter(&raw, params.dpi_threshold)?;
    let post_threshold = threshold_cut(&post_dpi, params.cut_threshold)?;
    Ok(StageOutputs {
        raw,
        post_dpi,
        post_threshold,
    })
}

fn write_stages(
    dir: &Path,
    stages: &StageOutputs,
    output: &OutputArgs,
    manifest: &mut RunManifest,
) -> Result<()> {
    if output.wants(Format::Csv) {
        for (name, matrix) in [
            ("influence_raw.csv", &stages.raw),
            ("influence_post_dpi.csv", &stages.post_dpi),
            ("influence_post_threshold.csv", &stages.post_threshold),
        ] {
            let path = dir.join(name);
            io::write_influence_csv(&path, matrix)?;
            manifest.output(&path);
        }
    }
    if output.wants(Format::Dot) {
        let path = dir.join("inferred.dot");
        fs::write(&path, io::influence_dot(&stages.post_threshold))?;
        manifest.output(&path);
    }
    Ok(())
}

fn write_windows(
    dir: &Path,
    windowed: &WindowedReconstruction,
    manifest: &mut RunManifest,
) -> Result<()> {
    let windows_dir = dir.join("windows");
    fs::create_dir_all(&windows_dir)?;
    let mut index = Vec::new();
    for (l, ((start, end), matrix)) in windowed.windows.iter().enumerate() {
        let name = format!("window_{l:03}.csv");
        let path = windows_dir.join(&name);
        io::write_influence_csv(&path, matrix)?;
        manifest.output(&path);
        index.push(json!({
            "window": l,
            "start": start,
            "end": end,
            "file": name,
        }));
    }
    let index_path = windows_dir.join("index.json");
    io::write_json(&index_path, &index)?;
    manifest.output(&index_path);
    Ok(())
}

fn windowed_bounds(duration: f64, window: f64) -> Result<Vec<f64>> {
    Ok(uniform_windows(duration, window)?)
}

pub fn reconstruct(
    traces_dir: &Path,
    recon: &ReconArgs,
    chi: f64,
    settle_time: f64,
    output: &OutputArgs,
) -> Result<()> {
    let start = Instant::now();
    let traces = read_traces(traces_dir)?;
    let reports: Vec<LockReport> = traces
        .iter()
        .map(|t| Ok(lock_report(t, settle_time, chi)?))
        .collect::<Result<_>>()?;
    enforce_policy(&reports, recon.lock_policy)?;

    let params = ReconstructionParams::new(recon.nu, recon.mu)?;
    let stages = run_stages(&traces, &params)?;
    let dir = output.dir()?;

    let mut manifest = RunManifest::new(
        "reconstruct",
        json!({
            "traces": traces_dir,
            "nu": recon.nu,
            "mu": recon.mu,
            "window": recon.window,
            "chi": chi,
            "settle_time": settle_time,
        }),
        None,
    );
    manifest.input(traces_dir);
    write_stages(dir, &stages, output, &mut manifest)?;

    if let Some(window) = recon.window {
        let bounds = windowed_bounds(traces[0].duration(), window)?;
        let windowed = reconstruct::windowed_from_traces(&traces, &params, &bounds)?;
        write_windows(dir, &windowed, &mut manifest)?;
    }
    manifest.write(dir, start.elapsed().as_secs_f64())?;
    println!(
        "reconstructed {} links from {} traces -> {}",
        stages.post_threshold.support().len(),
        traces.len(),
        dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------- evaluate

#[derive(Serialize)]
struct Evaluation {
    counts: ConfusionCounts,
    metrics: MetricsReport,
}

fn write_metrics(
    dir: &Path,
    truth: &NetworkSpec,
    inferred: &InfluenceMatrix,
    output: &OutputArgs,
    manifest: &mut RunManifest,
) -> Result<MetricsReport> {
    let counts = confusion(truth, inferred)?;
    let metrics = report(&counts);
    if output.wants(Format::Json) {
        let path = dir.join("metrics.json");
        io::write_json(&path, &Evaluation { counts, metrics })?;
        manifest.output(&path);
    }
    if output.wants(Format::Csv) {
        let path = dir.join("metrics.csv");
        fs::write(
            &path,
            format!("{}\n{}\n", MetricsReport::CSV_HEADER, metrics.csv_row()),
        )?;
        manifest.output(&path);
    }
    Ok(metrics)
}

fn print_metrics(metrics: &MetricsReport) {
    let show = |v: Option<f64>| v.map(|x| format!("{x:.1}")).unwrap_or_else(|| "-".into());
    println!(
        "ppv={} acc={} tpr={} fpr={}",
        show(metrics.ppv),
        show(metrics.acc),
        show(metrics.tpr),
        show(metrics.fpr)
    );
}

pub fn evaluate(truth_path: &Path, inferred_path: &Path, output: &OutputArgs) -> Result<()> {
    let start = Instant::now();
    let truth = io::read_network_json(truth_path)?;
    let inferred = io::read_influence_csv(inferred_path, redraw::model::Stage::PostThreshold)?;
    let dir = output.dir()?;

    let mut manifest = RunManifest::new(
        "evaluate",
        json!({ "truth": truth_path, "inferred": inferred_path }),
        None,
    );
    manifest.input(truth_path);
    manifest.input(inferred_path);
    let metrics = write_metrics(dir, &truth, &inferred, output, &mut manifest)?;
    manifest.write(dir, start.elapsed().as_secs_f64())?;
    print_metrics(&metrics);
    Ok(())
}

// ---------------------------------------------------------------- pipeline

pub fn pipeline(
    spec_path: &Path,
    sim: &SimArgs,
    recon: &ReconArgs,
    write_traces: bool,
    output: &OutputArgs,
) -> Result<()> {
    let start = Instant::now();
    let spec = io::read_network_json(spec_path)?;
    let batch = run_sim_batch(&spec, sim)?;
    let dir = output.dir()?;

    let mut manifest = RunManifest::new(
        "pipeline",
        json!({
            "spec": spec_path,
            "duration": sim.duration,
            "dt": sim.dt,
            "coupling": sim.coupling,
            "phi": sim.phi,
            "experiments": sim.experiments,
            "chi": sim.chi,
            "settle_time": sim.settle_time,
            "nu": recon.nu,
            "mu": recon.mu,
            "window": recon.window,
            "write_traces": write_traces,
        }),
        Some(sim.seed),
    );
    manifest.input(spec_path);

    if write_traces {
        for trace in &batch.traces {
            let path = dir.join(format!("trace_{:03}.csv", trace.experiment_index));
            io::write_trace_csv(&path, trace)?;
            manifest.output(&path);
        }
    }
    let locks = write_locks(dir, &batch.lock_reports)?;
    manifest.output(&locks);
    enforce_policy(&batch.lock_reports, recon.lock_policy)?;

    let params = ReconstructionParams::new(recon.nu, recon.mu)?;
    let stages = run_stages(&batch.traces, &params)?;
    write_stages(dir, &stages, output, &mut manifest)?;

    if let Some(window) = recon.window {
        let bounds = windowed_bounds(sim.duration, window)?;
        let windowed = reconstruct::windowed_from_traces(&batch.traces, &params, &bounds)?;
        write_windows(dir, &windowed, &mut manifest)?;
    }

    let metrics = write_metrics(dir, &spec, &stages.post_threshold, output, &mut manifest)?;
    manifest.write(dir, start.elapsed().as_secs_f64())?;
    print_metrics(&metrics);
    Ok(())
}

// --------------------------------------------------------------- calibrate

#[allow(clippy::too_many_arguments)]
pub fn calibrate(
    n: usize,
    graphs: usize,
    k: usize,
    grid_step: f64,
    bounds: Option<MetricBounds>,
    coupling: Option<f64>,
    seed: u64,
    output: &OutputArgs,
) -> Result<()> {
    let start = Instant::now();
    let mut config = CalibrationConfig::new(n, seed);
    config.graphs = graphs;
    config.experiments = k;
    config.grid_step = grid_step;
    config.coupling = coupling;
    if let Some(bounds) = bounds {
        config.bounds = bounds;
    }

    let map = calibrate::calibrate(&config)?;
    let suggestion = calibrate::suggest_thresholds(&map);
    let dir = output.dir()?;

    let mut manifest = RunManifest::new("calibrate", serde_json::to_value(&config)?, Some(seed));
    let csv_path = dir.join("calibration.csv");
    fs::write(&csv_path, map.to_csv())?;
    manifest.output(&csv_path);
    let suggestion_path = dir.join("suggestion.json");
    io::write_json(&suggestion_path, &suggestion)?;
    manifest.output(&suggestion_path);
    let diag_path = dir.join("diagnostics.json");
    io::write_json(&diag_path, &map.diagnostics)?;
    manifest.output(&diag_path);
    manifest.write(dir, start.elapsed().as_secs_f64())?;

    println!(
        "calibrated {} grid points, {} admissible; suggested nu={} mu={}{}",
        map.cells.len(),
        map.admissible_count(),
        suggestion.nu,
        suggestion.mu,
        suggestion
            .note
            .as_deref()
            .map(|n| format!(" ({n})"))
            .unwrap_or_default()
    );
    Ok(())
}

// --------------------------------------------------------------- benchmark

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingVariant {
    Regular,
    Rewired,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepTopology {
    Chain4,
    Ring20,
}

#[derive(Subcommand)]
pub enum SuiteCmd {
    /// The four 4-node topologies at c = 10, nu = 0.9, mu = 0.8.
    Fig2 {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The 17-node hub networks at c = 40, nu = 0.9, mu = 0.35.
    Fig4 {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The 20-node rings at c = 50, nu = 0.65, mu = 0.60.
    Fig5 {
        #[arg(long, value_enum, default_value_t = RingVariant::Both)]
        variant: RingVariant,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Metrics as a function of the experiment count K.
    KSweep {
        #[arg(long, value_enum, default_value_t = SweepTopology::Chain4)]
        topology: SweepTopology,
        /// Experiment counts to evaluate.
        #[arg(long, value_delimiter = ',', default_values_t = [10, 25, 50, 75, 100])]
        k_values: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// One named experiment: simulate K runs over the truth and score the
/// reconstruction. Benchmarks run with the tolerant lock policy since two
/// of the bundled topologies are designed around slow relative drift.
pub fn bench_case(
    truth: &NetworkSpec,
    coupling: f64,
    experiments: usize,
    nu: f64,
    mu: f64,
    seed: u64,
) -> Result<MetricsReport> {
    let template = SimConfig::template(coupling, seed);
    let batch = run_batch_with(truth, &template, experiments, seed, 20.0, 0.35)?;
    let params = ReconstructionParams::new(nu, mu)?;
    let inferred =
        reconstruct::reconstruct_with_policy(&batch, &params, LockPolicy::WarnAndInclude)?;
    Ok(report(&confusion(truth, &inferred)?))
}

pub fn fig2_topologies() -> Vec<(&'static str, TopologyRecipe)> {
    vec![
        (
            "chain-uniform",
            TopologyRecipe::Chain {
                n: 4,
                weights: None,
                reverse: false,
            },
        ),
        (
            "chain-weighted",
            TopologyRecipe::Chain {
                n: 4,
                weights: Some(vec![2.0, 1.5, 1.0]),
                reverse: true,
            },
        ),
        (
            "star",
            TopologyRecipe::Star {
                n: 4,
                leaf_weight: None,
                feed_weight: None,
            },
        ),
        ("block", TopologyRecipe::Block4 { weight: None }),
    ]
}

fn csv_line(name: &str, metrics: &MetricsReport) -> String {
    format!("{name},{}\n", metrics.csv_row())
}

pub fn benchmark(suite: SuiteCmd) -> Result<()> {
    let start = Instant::now();
    match suite {
        SuiteCmd::Fig2 { seed, output } => {
            let mut csv = format!("topology,{}\n", MetricsReport::CSV_HEADER);
            for (name, recipe) in fig2_topologies() {
                let truth = topologies::build(&recipe)?;
                let metrics = bench_case(&truth, 10.0, 50, 0.9, 0.8, seed)?;
                print!("{}", csv_line(name, &metrics));
                csv.push_str(&csv_line(name, &metrics));
            }
            finish_benchmark("fig2", csv, seed, output, start)
        }
        SuiteCmd::Fig4 { seed, output } => {
            let mut csv = format!("topology,{}\n", MetricsReport::CSV_HEADER);
            let cases = [
                (
                    "geometric",
                    TopologyRecipe::GeometricHub {
                        intra_weight: None,
                        hub_weight: None,
                        feedback_weight: None,
                    },
                ),
                (
                    "ravasz-barabasi",
                    TopologyRecipe::RavaszBarabasi {
                        intra_weight: None,
                        hub_weight: None,
                        feedback_weight: None,
                    },
                ),
            ];
            for (name, recipe) in cases {
                let truth = topologies::build(&recipe)?;
                let metrics = bench_case(&truth, 40.0, 50, 0.9, 0.35, seed)?;
                print!("{}", csv_line(name, &metrics));
                csv.push_str(&csv_line(name, &metrics));
            }
            finish_benchmark("fig4", csv, seed, output, start)
        }
        SuiteCmd::Fig5 {
            variant,
            seed,
            output,
        } => {
            let mut csv = format!("topology,{}\n", MetricsReport::CSV_HEADER);
            if variant != RingVariant::Rewired {
                let truth = topologies::build(&TopologyRecipe::RegularRing {
                    n: 20,
                    w1: None,
                    w2: None,
                })?;
                let metrics = bench_case(&truth, 50.0, 50, 0.65, 0.60, seed)?;
                print!("{}", csv_line("regular-ring", &metrics));
                csv.push_str(&csv_line("regular-ring", &metrics));
            }
            if variant != RingVariant::Regular {
                let truth = topologies::build(&TopologyRecipe::RewiredRing {
                    n: 20,
                    w1: None,
                    w2: None,
                    extra: None,
                })?;
                let metrics = bench_case(&truth, 50.0, 50, 0.65, 0.60, seed)?;
                print!("{}", csv_line("rewired-ring", &metrics));
                csv.push_str(&csv_line("rewired-ring", &metrics));
            }
            finish_benchmark("fig5", csv, seed, output, start)
        }
        SuiteCmd::KSweep {
            topology,
            k_values,
            seed,
            output,
        } => {
            let mut csv = format!("k,topology,{}\n", MetricsReport::CSV_HEADER);
            let (name, truth, coupling, nu, mu) = match topology {
                SweepTopology::Chain4 => (
                    "chain4",
                    topologies::build(&TopologyRecipe::Chain {
                        n: 4,
                        weights: None,
                        reverse: false,
                    })?,
                    10.0,
                    0.9,
                    0.8,
                ),
                SweepTopology::Ring20 => (
                    "ring20",
                    topologies::build(&TopologyRecipe::RegularRing {
                        n: 20,
                        w1: None,
                        w2: None,
                    })?,
                    50.0,
                    0.65,
                    0.60,
                ),
            };
            for &k in &k_values {
                let metrics = bench_case(&truth, coupling, k, nu, mu, seed)?;
                let line = format!("{k},{name},{}\n", metrics.csv_row());
                print!("{line}");
                csv.push_str(&line);
            }
            finish_benchmark("k-sweep", csv, seed, output, start)
        }
    }
}

fn finish_benchmark(
    suite: &str,
    csv: String,
    seed: u64,
    output: OutputArgs,
    start: Instant,
) -> Result<()> {
    let dir = output.dir()?;
    let path = dir.join(format!("{suite}.csv"));
    fs::write(&path, csv)?;
    let mut manifest = RunManifest::new("benchmark", json!({ "suite": suite }), Some(seed));
    manifest.output(&path);
    manifest.write(dir, start.elapsed().as_secs_f64())?;
    Ok(())
}
