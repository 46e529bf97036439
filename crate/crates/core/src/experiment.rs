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


//! Monte-Carlo sweeps over networks, strategies, measures and stubborn
//! fractions.
//!
//! A [`SweepSpec`] expands into one [`Job`] per grid cell and run. Every job
//! carries a seed hashed from the master seed and its grid coordinates, so
//! any job, or any sub-grid, reproduces exactly the runs of the full grid.
//! Results come back in grid order whatever the degree of parallelism.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{compute, CentralityConfig, Measure, NodeScores};
use crate::dynamics::{run_simulation, InitSpec, Schedule, ScheduleKind, SimConfig, SimResult, StubbornPlan};
use crate::error::{Error, Result};
use crate::generator::{generate_lfr, LfrParams};
use crate::graph::{load_communities, load_edge_list, WeightedGraph};
use crate::metrics::{density_matrix, fraction_near};
use crate::seed;

/// Where the networks of a sweep come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NetworkSource {
    /// `instances` generated networks. Their seeds derive from the sweep's
    /// master seed and network id; `lfr.seed` is not used.
    Generated {
        #[serde(default)]
        lfr: LfrParams,
        #[serde(default = "one")]
        instances: usize,
        /// Id prefix; ids are `<prefix>-<instance>`.
        #[serde(default)]
        prefix: Option<String>,
    },
    /// An edge-list file with an optional community file.
    File {
        edges: PathBuf,
        #[serde(default)]
        communities: Option<PathBuf>,
        /// Defaults to the edge file's stem.
        #[serde(default)]
        id: Option<String>,
    },
}

fn one() -> usize {
    1
}

impl NetworkSource {
    pub fn generated(lfr: LfrParams, instances: usize) -> Self {
        NetworkSource::Generated {
            lfr,
            instances,
            prefix: None,
        }
    }

    fn ids(&self, index: usize) -> Vec<String> {
        match self {
            NetworkSource::Generated { instances, prefix, .. } => {
                let prefix = prefix.clone().unwrap_or_else(|| match index {
                    0 => "lfr".to_string(),
                    s => format!("lfr{s}"),
                });
                (0..*instances).map(|i| format!("{prefix}-{i}")).collect()
            }
            NetworkSource::File { edges, id, .. } => vec![id.clone().unwrap_or_else(|| {
                edges
                    .file_stem()
                    .map_or_else(|| edges.display().to_string(), |s| s.to_string_lossy().into_owned())
            })],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub networks: Vec<NetworkSource>,
    pub strategies: Vec<ScheduleKind>,
    pub measures: Vec<Measure>,
    pub fractions: Vec<f64>,
    pub runs_per_cell: usize,
    pub master_seed: u64,
    /// Shape of the stubborn schedule; its kind is set per strategy.
    pub schedule: Schedule,
    pub sim: SimConfig,
    pub init: InitSpec,
    pub centrality: CentralityConfig,
    /// Write a density sidecar per run (see [`write_outputs`]).
    pub snapshots: bool,
    pub bins: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            networks: vec![NetworkSource::generated(LfrParams::default(), 20)],
            strategies: vec![ScheduleKind::Static, ScheduleKind::Dynamic],
            measures: Measure::ALL.to_vec(),
            fractions: vec![0.001, 0.002, 0.005, 0.01, 0.02],
            runs_per_cell: 50,
            master_seed: 1,
            schedule: Schedule::default(),
            sim: SimConfig::default(),
            init: InitSpec::default(),
            centrality: CentralityConfig::default(),
            snapshots: false,
            bins: crate::metrics::DEFAULT_BINS,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::Sweep(format!("no {what} given")));
        if self.networks.is_empty() {
            return empty("networks");
        }
        if self.strategies.is_empty() {
            return empty("strategies");
        }
        if self.measures.is_empty() {
            return empty("measures");
        }
        if self.fractions.is_empty() {
            return empty("fractions");
        }
        if self.runs_per_cell == 0 {
            return Err(Error::Sweep("runs_per_cell must be at least 1".into()));
        }
        if let Some(f) = self.fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
            return Err(Error::Sweep(format!("fraction {f} outside (0, 1]")));
        }
        if self.bins == 0 {
            return Err(Error::Sweep("bins must be at least 1".into()));
        }
        for s in &self.strategies {
            Schedule { kind: *s, ..self.schedule }.validate()?;
        }
        self.sim.validate()?;
        self.init.validate()?;
        let ids = self.network_ids();
        let mut seen = HashMap::new();
        for id in &ids {
            if seen.insert(id.as_str(), ()).is_some() {
                return Err(Error::Sweep(format!("duplicate network id `{id}`")));
            }
        }
        if ids.is_empty() {
            return empty("network instances");
        }
        Ok(())
    }

    /// Ids of all networks in source order.
    pub fn network_ids(&self) -> Vec<String> {
        self.networks.iter().enumerate().flat_map(|(s, src)| src.ids(s)).collect()
    }

    pub fn job_count(&self) -> usize {
        self.network_ids().len()
            * self.strategies.len()
            * self.measures.len()
            * self.fractions.len()
            * self.runs_per_cell
    }
}

/// One simulation of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    /// Position of the network in [`SweepSpec::network_ids`].
    pub network: usize,
    pub network_id: String,
    pub strategy: ScheduleKind,
    pub measure: Measure,
    pub fraction: f64,
    pub run_index: usize,
    pub seed: u64,
}

impl Job {
    /// File-name friendly identifier of the job's grid coordinates.
    pub fn id(&self) -> String {
        format!(
            "{}_{}_{}_{}_{}",
            self.network_id, self.strategy, self.measure, self.fraction, self.run_index
        )
    }
}

/// Seed of one run, hashed from the master seed and the run's grid
/// coordinates. Runs without stubborn agents use the measure name `none`.
pub fn job_seed(
    master_seed: u64,
    network_id: &str,
    strategy: ScheduleKind,
    measure: Option<Measure>,
    fraction: f64,
    run_index: usize,
) -> u64 {
    seed::derive(
        master_seed,
        &[
            network_id,
            strategy.name(),
            measure.map_or("none", Measure::name),
            &fraction.to_string(),
            &run_index.to_string(),
        ],
    )
}

/// The cartesian product of networks, strategies, measures, fractions and
/// run indices, in that nesting order.
pub fn expand_sweep(spec: &SweepSpec) -> Result<Vec<Job>> {
    spec.validate()?;
    let mut jobs = Vec::with_capacity(spec.job_count());
    for (network, network_id) in spec.network_ids().into_iter().enumerate() {
        for &strategy in &spec.strategies {
            for &measure in &spec.measures {
                for &fraction in &spec.fractions {
                    for run_index in 0..spec.runs_per_cell {
                        jobs.push(Job {
                            network,
                            network_id: network_id.clone(),
                            strategy,
                            measure,
                            fraction,
                            run_index,
                            seed: job_seed(spec.master_seed, &network_id, strategy, Some(measure), fraction, run_index),
                        });
                    }
                }
            }
        }
    }
    Ok(jobs)
}

/// Generator seed of the network called `id` under `master_seed`.
pub fn network_seed(master_seed: u64, id: &str) -> u64 {
    seed::derive(master_seed, &["network", id])
}

pub struct Network {
    pub id: String,
    pub graph: WeightedGraph,
}

/// Generates or loads every network of the sweep, in id order.
pub fn load_networks(spec: &SweepSpec) -> Result<Vec<Network>> {
    let mut todo = Vec::new();
    for (s, src) in spec.networks.iter().enumerate() {
        for id in src.ids(s) {
            todo.push((src, id));
        }
    }
    todo.into_par_iter()
        .map(|(src, id)| {
            let graph = match src {
                NetworkSource::Generated { lfr, .. } => generate_lfr(&LfrParams {
                    seed: network_seed(spec.master_seed, &id),
                    ..lfr.clone()
                })?,
                NetworkSource::File { edges, communities, .. } => {
                    let g = load_edge_list(edges)?;
                    match communities {
                        Some(c) => load_communities(c, g)?,
                        None => g,
                    }
                }
            };
            Ok(Network { id, graph })
        })
        .collect()
}

/// One row of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub network_id: String,
    pub strategy: ScheduleKind,
    /// Empty for runs without stubborn agents.
    pub measure: Option<Measure>,
    pub fraction: f64,
    pub run_index: usize,
    pub seed: u64,
    pub final_mean: f64,
    pub fraction_near: f64,
    pub converged_at: Option<usize>,
    pub steps: usize,
}

impl RunRecord {
    pub fn new(job: &Job, result: &SimResult, target: f64, near_tol: f64) -> Self {
        RunRecord {
            network_id: job.network_id.clone(),
            strategy: job.strategy,
            measure: Some(job.measure),
            fraction: job.fraction,
            run_index: job.run_index,
            seed: job.seed,
            final_mean: result.final_mean(),
            fraction_near: fraction_near(&result.final_opinions, target, near_tol),
            converged_at: result.converged_at,
            steps: result.steps(),
        }
    }
}

/// A job that could not run, with its grid coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobFailure {
    pub network_id: String,
    pub strategy: ScheduleKind,
    pub measure: Measure,
    pub fraction: f64,
    pub run_index: usize,
    pub error: String,
}

impl JobFailure {
    fn new(job: &Job, error: &Error) -> Self {
        JobFailure {
            network_id: job.network_id.clone(),
            strategy: job.strategy,
            measure: job.measure,
            fraction: job.fraction,
            run_index: job.run_index,
            error: error.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutput {
    /// Successful runs in grid order.
    pub records: Vec<RunRecord>,
    pub failures: Vec<JobFailure>,
}

/// Runs one job: picks the stubborn set by the job's measure and simulates.
pub fn run_job(spec: &SweepSpec, job: &Job, graph: &WeightedGraph, scores: &NodeScores) -> Result<SimResult> {
    let mut rng = seed::rng(job.seed);
    let schedule = Schedule {
        kind: job.strategy,
        ..spec.schedule
    };
    let plan = StubbornPlan::select(scores, job.fraction, schedule, &mut rng);
    let mut result = run_simulation(graph, &spec.init, &plan, &spec.sim, &mut rng)?;
    result.seed = Some(job.seed);
    Ok(result)
}

/// Runs the whole grid on `parallelism` worker threads (0 picks one per
/// core). Centralities are computed once per network.
pub fn run_sweep(spec: &SweepSpec, parallelism: usize) -> Result<SweepOutput> {
    sweep(spec, parallelism, None)
}

/// Like [`run_sweep`], and also writes one density sidecar per run into
/// `dir` as runs finish when `spec.snapshots` is set.
pub fn run_sweep_to(spec: &SweepSpec, parallelism: usize, dir: &Path) -> Result<SweepOutput> {
    sweep(spec, parallelism, Some(dir))
}

fn sweep(spec: &SweepSpec, parallelism: usize, dir: Option<&Path>) -> Result<SweepOutput> {
    let jobs = expand_sweep(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Sweep(e.to_string()))?;
    let sidecars = match dir {
        Some(d) if spec.snapshots => {
            let d = d.join("snapshots");
            fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
            Some(d)
        }
        _ => None,
    };
    let mut spec = spec.clone();
    if sidecars.is_none() {
        spec.sim.snapshot_interval = 0;
    }
    let spec = &spec;

    pool.install(|| {
        let networks = load_networks(spec)?;
        info!("{} networks ready, {} jobs", networks.len(), jobs.len());
        let scores: Vec<Vec<Result<NodeScores>>> = networks
            .par_iter()
            .map(|net| {
                spec.measures
                    .par_iter()
                    .map(|&m| compute(&net.graph, m, &spec.centrality))
                    .collect()
            })
            .collect();
        let measure_slot: HashMap<Measure, usize> = spec.measures.iter().enumerate().map(|(k, &m)| (m, k)).collect();

        let outcomes: Vec<std::result::Result<RunRecord, JobFailure>> = jobs
            .par_iter()
            .map(|job| {
                let net = &networks[job.network];
                let outcome = match &scores[job.network][measure_slot[&job.measure]] {
                    Ok(s) => run_job(spec, job, &net.graph, s),
                    Err(e) => Err(Error::Sweep(format!("centrality failed: {e}"))),
                };
                let outcome = outcome.and_then(|r| {
                    if let Some(d) = &sidecars {
                        write_snapshots(&d.join(format!("{}.csv", job.id())), &r, spec.bins)?;
                    }
                    Ok(RunRecord::new(job, &r, spec.schedule.final_value, spec.sim.near_tol))
                });
                outcome.map_err(|e| {
                    warn!("job {} failed: {e}", job.id());
                    JobFailure::new(job, &e)
                })
            })
            .collect();

        let mut out = SweepOutput::default();
        for o in outcomes {
            match o {
                Ok(r) => out.records.push(r),
                Err(f) => out.failures.push(f),
            }
        }
        Ok(out)
    })
}

/// One row of `aggregates.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub strategy: ScheduleKind,
    pub measure: Option<Measure>,
    pub fraction: f64,
    pub mean_final_mean: f64,
    pub std_final_mean: f64,
    pub mean_fraction_near: f64,
    pub std_fraction_near: f64,
    pub n: usize,
}

/// Mean and sample standard deviation; the deviation of one value is 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Groups records by (strategy, measure, fraction) across networks and
/// runs. Groups appear in order of first occurrence.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    type Key = (ScheduleKind, Option<Measure>, u64);
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, (Vec<f64>, Vec<f64>)> = HashMap::new();
    for r in records {
        let key = (r.strategy, r.measure, r.fraction.to_bits());
        let entry = groups.entry(key).or_insert_with(|| {
            order.push(key);
            (Vec::new(), Vec::new())
        });
        entry.0.push(r.final_mean);
        entry.1.push(r.fraction_near);
    }
    order
        .into_iter()
        .map(|key| {
            let (means, nears) = &groups[&key];
            let (mean_final_mean, std_final_mean) = mean_std(means);
            let (mean_fraction_near, std_fraction_near) = mean_std(nears);
            AggregateRow {
                strategy: key.0,
                measure: key.1,
                fraction: f64::from_bits(key.2),
                mean_final_mean,
                std_final_mean,
                mean_fraction_near,
                std_fraction_near,
                n: means.len(),
            }
        })
        .collect()
}

/// Grid cells of `spec` with no aggregate row, or a row with the wrong count.
pub fn incomplete_cells(spec: &SweepSpec, rows: &[AggregateRow]) -> Vec<(ScheduleKind, Measure, f64)> {
    let expected = spec.network_ids().len() * spec.runs_per_cell;
    let mut missing = Vec::new();
    for &s in &spec.strategies {
        for &m in &spec.measures {
            for &f in &spec.fractions {
                let found = rows
                    .iter()
                    .filter(|r| r.strategy == s && r.measure == Some(m) && r.fraction == f)
                    .map(|r| r.n)
                    .collect::<Vec<_>>();
                if found != [expected] {
                    missing.push((s, m, f));
                }
            }
        }
    }
    missing
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

pub fn write_runs(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    write_csv(path.as_ref(), records)
}

pub fn read_runs(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    read_csv(path.as_ref())
}

pub fn write_aggregates(path: impl AsRef<Path>, rows: &[AggregateRow]) -> Result<()> {
    write_csv(path.as_ref(), rows)
}

pub fn read_aggregates(path: impl AsRef<Path>) -> Result<Vec<AggregateRow>> {
    read_csv(path.as_ref())
}

/// Writes a run's density matrix: `step,bin_0,..,bin_{B-1}`, one row per
/// snapshot, each row summing to 1.
pub fn write_snapshots(path: &Path, result: &SimResult, bins: usize) -> Result<()> {
    let opinions: Vec<&[f64]> = result.snapshots.iter().map(|s| s.opinions.as_slice()).collect();
    let rows = density_matrix(&opinions, bins);
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    let header: Vec<String> = std::iter::once("step".to_string())
        .chain((0..bins).map(|b| format!("bin_{b}")))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for (snap, row) in result.snapshots.iter().zip(rows) {
        write!(w, "{}", snap.step).map_err(io)?;
        for v in row {
            write!(w, ",{v}").map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a density sidecar back as `(steps, rows)`.
pub fn read_snapshots(path: impl AsRef<Path>) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut steps = Vec::new();
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(file).records() {
        let rec = rec?;
        let bad = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let mut fields = rec.iter();
        let step = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line, "bad step".into()))?;
        let row = fields
            .map(|s| s.parse::<f64>().map_err(|e| bad(line, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        steps.push(step);
        rows.push(row);
    }
    Ok((steps, rows))
}

/// Writes `runs.csv`, `aggregates.csv` and, when there are any,
/// `failures.csv` into `dir`.
pub fn write_outputs(dir: &Path, out: &SweepOutput) -> Result<Vec<AggregateRow>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_runs(dir.join("runs.csv"), &out.records)?;
    let rows = aggregate(&out.records);
    write_aggregates(dir.join("aggregates.csv"), &rows)?;
    let failures = dir.join("failures.csv");
    if out.failures.is_empty() {
        if failures.exists() {
            fs::remove_file(&failures).map_err(|e| Error::io(&failures, e))?;
        }
    } else {
        write_csv(&failures, &out.failures)?;
    }
    Ok(rows)
}
