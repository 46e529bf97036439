// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! The `stubborn-hk` command line: `generate`, `centrality`, `simulate`,
//! `sweep` and `report`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::centrality::{compute, high_salience_skeleton, DistanceMode, Measure, NodeScores};
use crate::config::RunConfig;
use crate::dynamics::{run_simulation, ScheduleKind, Schedule, StubbornPlan};
use crate::error::{Error, Result};
use crate::experiment::{
    aggregate, job_seed, network_seed, read_runs, run_sweep_to, write_aggregates, write_outputs, write_runs,
    write_snapshots, AggregateRow, RunRecord,
};
use crate::generator::{generate_lfr, LfrParams};
use crate::graph::{load_communities, load_edge_list, network_stats, save_communities, save_edge_list, NetworkStats};
use crate::seed;
use crate::WeightedGraph;

#[derive(Debug, Parser)]
#[command(name = "stubborn-hk", version, about = "Stubborn agents in weighted bounded-confidence opinion dynamics")]
pub struct Cli {
    /// TOML configuration; flags override its values.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate benchmark networks: `<id>.edges`, `<id>.communities`, `stats.csv`.
    Generate(GenerateArgs),
    /// Compute all centralities of a network into `centrality.csv`.
    Centrality(CentralityArgs),
    /// Simulate on one network: `runs.csv` plus per-run sidecars.
    Simulate(SimulateArgs),
    /// Run the configured sweep: `runs.csv` and `aggregates.csv`.
    Sweep(SweepArgs),
    /// Re-aggregate an existing `runs.csv`.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub kmean: Option<f64>,
    #[arg(long)]
    pub kmin: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub cmin: Option<usize>,
    #[arg(long)]
    pub cmax: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list: `u v weight` per line.
    #[arg(long)]
    pub edges: PathBuf,
    /// Community file: `node community` per line.
    #[arg(long)]
    pub communities: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Edge length used by shortest paths: `reciprocal` (1/w) or `hop`.
    #[arg(long)]
    pub distance: Option<String>,
    /// Also write the high-salience skeleton to `hss.edges`.
    #[arg(long)]
    pub hss: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// `static` or `dynamic`.
    #[arg(long)]
    pub strategy: Option<ScheduleKind>,
    /// Selection measure; without one no agent is stubborn.
    #[arg(long)]
    pub measure: Option<Measure>,
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long)]
    pub runs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// The `runs.csv` to aggregate.
    #[arg(long)]
    pub runs: PathBuf,
}

impl Cli {
    /// The configuration file, if any, with the global flags applied.
    pub fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        Ok(cfg)
    }
}

/// Runs a parsed command line, printing a short summary on stdout.
pub fn run(cli: &Cli) -> Result<()> {
    let mut cfg = cli.config()?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io = |e| Error::io("<stdout>", e);
    match &cli.command {
        Command::Generate(a) => {
            apply_generate(&mut cfg, a);
            for (id, s) in cmd_generate(&cfg)? {
                writeln!(
                    out,
                    "{id}: N={} E={} k=[{}, {}] <k>={:.2} A={:.3} C={:.3} alpha_k={:.2} alpha_w={:.2}",
                    s.node_count, s.edge_count, s.k_min, s.k_max, s.k_mean, s.assortativity, s.clustering, s.alpha_k, s.alpha_w
                )
                .map_err(io)?;
            }
        }
        Command::Centrality(a) => {
            if let Some(d) = &a.distance {
                cfg.centrality.distance_mode = parse_distance(d)?;
            }
            let path = cmd_centrality(&cfg, &a.graph.edges, a.graph.communities.as_deref(), a.hss)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
        }
        Command::Simulate(a) => {
            if let Some(s) = a.strategy {
                cfg.simulate.strategy = s;
            }
            if a.measure.is_some() {
                cfg.simulate.measure = a.measure;
            }
            if let Some(f) = a.fraction {
                cfg.simulate.fraction = f;
            }
            if let Some(r) = a.runs {
                cfg.simulate.runs = r;
            }
            for r in cmd_simulate(&cfg, &a.graph.edges, a.graph.communities.as_deref())? {
                writeln!(
                    out,
                    "run {}: mean {:.4} near {:.4} steps {} converged {}",
                    r.run_index,
                    r.final_mean,
                    r.fraction_near,
                    r.steps,
                    r.converged_at.map_or("no".to_string(), |t| t.to_string())
                )
                .map_err(io)?;
            }
        }
        Command::Sweep(a) => {
            if let Some(r) = a.runs {
                cfg.sweep.runs_per_cell = r;
            }
            if let Some(i) = a.instances {
                cfg.sweep.instances = i;
            }
            let rows = cmd_sweep(&cfg)?;
            print_rows(&mut out, &rows).map_err(io)?;
        }
        Command::Report(a) => {
            let rows = cmd_report(&a.runs, &cfg.output_dir.join("aggregates.csv"))?;
            print_rows(&mut out, &rows).map_err(io)?;
        }
    }
    Ok(())
}

fn apply_generate(cfg: &mut RunConfig, a: &GenerateArgs) {
    let p = &mut cfg.lfr;
    if let Some(v) = a.n {
        p.n = v;
    }
    if let Some(v) = a.kmean {
        p.k_mean = v;
    }
    if let Some(v) = a.kmin {
        p.k_min = v;
    }
    if let Some(v) = a.kmax {
        p.k_max = v;
    }
    if let Some(v) = a.cmin {
        p.c_min = v;
    }
    if let Some(v) = a.cmax {
        p.c_max = v;
    }
    if let Some(v) = a.instances {
        cfg.generate.instances = v;
    }
}

fn parse_distance(s: &str) -> Result<DistanceMode> {
    match s {
        "hop" => Ok(DistanceMode::Hop),
        "reciprocal" | "reciprocal_weight" => Ok(DistanceMode::ReciprocalWeight),
        _ => Err(Error::Param(format!("unknown distance mode '{s}' (expected reciprocal or hop)"))),
    }
}

fn print_rows(out: &mut impl Write, rows: &[AggregateRow]) -> std::io::Result<()> {
    writeln!(out, "strategy measure fraction mean_final_mean mean_fraction_near n")?;
    for r in rows {
        writeln!(
            out,
            "{} {} {} {:.4} {:.4} {}",
            r.strategy,
            r.measure.map_or("none", Measure::name),
            r.fraction,
            r.mean_final_mean,
            r.mean_fraction_near,
            r.n
        )?;
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

#[derive(Serialize)]
struct StatsRow<'a> {
    id: &'a str,
    seed: u64,
    node_count: usize,
    edge_count: usize,
    k_min: usize,
    k_max: usize,
    k_mean: f64,
    assortativity: f64,
    clustering: f64,
    alpha_k: f64,
    alpha_w: f64,
}

/// Generates `generate.instances` networks named `lfr-<i>` with the same
/// seeds a sweep under this configuration would use.
pub fn cmd_generate(cfg: &RunConfig) -> Result<Vec<(String, NetworkStats)>> {
    let dir = &cfg.output_dir;
    create_dir(dir)?;
    let mut all = Vec::new();
    for i in 0..cfg.generate.instances {
        let id = format!("lfr-{i}");
        let params = LfrParams {
            seed: network_seed(cfg.seed, &id),
            ..cfg.lfr.clone()
        };
        let g = generate_lfr(&params)?;
        save_edge_list(&g, dir.join(format!("{id}.edges")))?;
        save_communities(&g, dir.join(format!("{id}.communities")))?;
        all.push((id, params.seed, network_stats(&g)));
    }
    let path = dir.join("stats.csv");
    let mut w = csv::Writer::from_path(&path)?;
    for (id, seed, stats) in &all {
        w.serialize(StatsRow {
            id,
            seed: *seed,
            node_count: stats.node_count,
            edge_count: stats.edge_count,
            k_min: stats.k_min,
            k_max: stats.k_max,
            k_mean: stats.k_mean,
            assortativity: stats.assortativity,
            clustering: stats.clustering,
            alpha_k: stats.alpha_k,
            alpha_w: stats.alpha_w,
        })?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(all.into_iter().map(|(id, _, s)| (id, s)).collect())
}

fn load_graph(edges: &Path, communities: Option<&Path>) -> Result<WeightedGraph> {
    let g = load_edge_list(edges)?;
    match communities {
        Some(c) => load_communities(c, g),
        None => Ok(g),
    }
}

/// Writes `centrality.csv` with one row per node (by label) and one column
/// per centrality, plus `hss.edges` when asked.
pub fn cmd_centrality(cfg: &RunConfig, edges: &Path, communities: Option<&Path>, hss: bool) -> Result<PathBuf> {
    let g = load_graph(edges, communities)?;
    let dir = &cfg.output_dir;
    create_dir(dir)?;
    let scores = Measure::CENTRALITIES
        .iter()
        .map(|&m| compute(&g, m, &cfg.centrality))
        .collect::<Result<Vec<_>>>()?;
    let path = dir.join("centrality.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(std::iter::once("node").chain(Measure::CENTRALITIES.iter().map(|m| m.name())))?;
    for (i, label) in g.labels().iter().enumerate() {
        w.write_record(std::iter::once(label.to_string()).chain(scores.iter().map(|s| s.values[i].to_string())))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    if hss {
        let skeleton = high_salience_skeleton(&g, cfg.centrality.hss_threshold, cfg.centrality.distance_mode)?;
        save_edge_list(&skeleton, dir.join("hss.edges"))?;
    }
    Ok(path)
}

/// Runs `simulate.runs` simulations on one network. Writes `runs.csv` and,
/// per run, `results/<id>.json`, `series/<id>.csv` and, when snapshots are
/// on, `snapshots/<id>.csv`.
pub fn cmd_simulate(cfg: &RunConfig, edges: &Path, communities: Option<&Path>) -> Result<Vec<RunRecord>> {
    let g = load_graph(edges, communities)?;
    let network_id = edges
        .file_stem()
        .map_or_else(|| "network".to_string(), |s| s.to_string_lossy().into_owned());
    let sc = &cfg.simulate;
    if sc.measure.is_some() && !(sc.fraction > 0.0 && sc.fraction <= 1.0) {
        return Err(Error::Param(format!("fraction {} outside (0, 1]", sc.fraction)));
    }
    let fraction = if sc.measure.is_some() { sc.fraction } else { 0.0 };
    let schedule = Schedule {
        kind: sc.strategy,
        ..cfg.schedule
    };
    let scores: Option<NodeScores> = sc.measure.map(|m| compute(&g, m, &cfg.centrality)).transpose()?;

    let dir = &cfg.output_dir;
    for sub in ["results", "series"] {
        create_dir(&dir.join(sub))?;
    }
    if cfg.sim.snapshot_interval > 0 {
        create_dir(&dir.join("snapshots"))?;
    }
    let mut records = Vec::new();
    for run in 0..sc.runs {
        let seed = job_seed(cfg.seed, &network_id, sc.strategy, sc.measure, fraction, run);
        let job_id = format!(
            "{network_id}_{}_{}_{fraction}_{run}",
            sc.strategy,
            sc.measure.map_or("none", Measure::name)
        );
        let mut rng = seed::rng(seed);
        let plan = match &scores {
            Some(s) => StubbornPlan::select(s, fraction, schedule, &mut rng),
            None => StubbornPlan {
                schedule,
                ..StubbornPlan::uncontrolled()
            },
        };
        let mut result = run_simulation(&g, &cfg.init, &plan, &cfg.sim, &mut rng)?;
        result.seed = Some(seed);
        if cfg.sim.snapshot_interval > 0 {
            write_snapshots(&dir.join("snapshots").join(format!("{job_id}.csv")), &result, cfg.sweep.bins)?;
        }
        write_series(&dir.join("series").join(format!("{job_id}.csv")), &result)?;
        let record = RunRecord {
            network_id: network_id.clone(),
            strategy: sc.strategy,
            measure: sc.measure,
            fraction,
            run_index: run,
            seed,
            final_mean: result.final_mean(),
            fraction_near: crate::metrics::fraction_near(&result.final_opinions, schedule.final_value, cfg.sim.near_tol),
            converged_at: result.converged_at,
            steps: result.steps(),
        };
        result.snapshots.clear();
        result.save(dir.join("results").join(format!("{job_id}.json")))?;
        records.push(record);
    }
    write_runs(dir.join("runs.csv"), &records)?;
    Ok(records)
}

fn write_series(path: &Path, result: &crate::dynamics::SimResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["step", "mean", "fraction_near"])?;
    for (t, p) in result.series.iter().enumerate() {
        w.write_record([t.to_string(), p.mean.to_string(), p.fraction_near.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Runs the configured sweep and writes its outputs.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Vec<AggregateRow>> {
    let spec = cfg.sweep_spec();
    let out = run_sweep_to(&spec, cfg.jobs, &cfg.output_dir)?;
    if !out.failures.is_empty() {
        log::warn!("{} jobs failed; see failures.csv", out.failures.len());
    }
    write_outputs(&cfg.output_dir, &out)
}

/// Aggregates `runs` into `out`.
pub fn cmd_report(runs: &Path, out: &Path) -> Result<Vec<AggregateRow>> {
    let records = read_runs(runs)?;
    if records.is_empty() {
        return Err(Error::Sweep(format!("{} has no runs", runs.display())));
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    let rows = aggregate(&records);
    write_aggregates(out, &rows)?;
    Ok(rows)
}

/// One-line form of an error for the exit message.
pub fn error_line(e: &Error) -> String {
    let mut msg = e.to_string();
    let mut source = std::error::Error::source(e);
    while let Some(s) = source {
        let text = s.to_string();
        if !msg.contains(&text) {
            msg.push_str(": ");
            msg.push_str(&text);
        }
        source = s.source();
    }
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let cli = Cli::parse_from(["stubborn-hk", "--seed", "5", "--jobs", "2", "sweep", "--runs", "3"]);
        let cfg = cli.config().unwrap();
        assert_eq!((cfg.seed, cfg.jobs), (5, 2));
        let cli = Cli::parse_from(["stubborn-hk", "generate", "--n", "40", "--seed", "9"]);
        let mut cfg = cli.config().unwrap();
        let Command::Generate(a) = &cli.command else { unreachable!() };
        apply_generate(&mut cfg, a);
        assert_eq!((cfg.lfr.n, cfg.seed), (40, 9));
    }

    #[test]
    fn distance_names() {
        assert_eq!(parse_distance("hop").unwrap(), DistanceMode::Hop);
        assert!(parse_distance("euclid").is_err());
    }

    #[test]
    fn error_lines_are_single_lines() {
        let e = Error::Param("a\nb".into());
        assert_eq!(error_line(&e), "invalid parameter: a b");
    }
}
