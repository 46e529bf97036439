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


//! Scaled acceptance suite. Prints one `PASS`/`FAIL` line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::collections::HashMap;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stubborn_hk::centrality::{
    betweenness, compute, edge_salience, high_salience_skeleton, k_coreness, node_salience, pagerank, s_coreness,
    CentralityConfig, DistanceMode, Measure, NodeScores,
};
use stubborn_hk::cli::cmd_sweep;
use stubborn_hk::config::RunConfig;
use stubborn_hk::dynamics::{hk_step_with, run_simulation, OpinionState, ScheduleKind, SimConfig, SimResult, StubbornPlan};
use stubborn_hk::experiment::{expand_sweep, job_seed, network_seed, run_job, Job, NetworkSource, SweepSpec};
use stubborn_hk::generator::{generate_lfr, LfrParams};
use stubborn_hk::graph::network_stats;
use stubborn_hk::metrics::{bin_of, count_clusters, density_matrix, fraction_near, mean_matrix, CLUSTER_GAP};
use stubborn_hk::seed;
use stubborn_hk::WeightedGraph;

const MASTER: u64 = 1;
const INSTANCES: usize = 3;
const SEEDS: usize = 20;

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String, start: Instant) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {name}: {detail} ({:.1}s)", start.elapsed().as_secs_f64());
        if !ok {
            self.failed += 1;
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn betweenness_oracle(r: &mut Report) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let n = 4 + (i as usize % 5);
        let g = common::random_graph(&mut rng, n, 0.5, i % 2 == 0);
        for mode in [DistanceMode::Hop, DistanceMode::ReciprocalWeight] {
            let got = betweenness(&g, mode).values;
            worst = worst.max(max_diff(&got, &common::betweenness_by_enumeration(&g, mode)));
        }
    }
    let ok = worst <= 1e-9 && start.elapsed().as_secs() < 60;
    r.check("betweenness oracle", ok, format!("200 graphs x 2 modes, max |diff| {worst:.2e}"), start);
}

fn hk_oracle(r: &mut Report) {
    let start = Instant::now();
    let mut mismatches = 0;
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let n = rng.random_range(1..=8);
        let g = common::random_graph(&mut rng, n, 0.5, false);
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let eps: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let k = rng.random_range(0..=n.min(2));
        let mut stubborn = index::sample(&mut rng, n, k).into_vec();
        stubborn.sort_unstable();
        let value = rng.random_range(0.5..=1.0);
        let state = OpinionState {
            stubborn: stubborn.clone(),
            ..OpinionState::new(x, eps).unwrap()
        };
        for include_self in [false, true] {
            let got = hk_step_with(&g, &state, value, include_self).opinions;
            let want = common::hk_step_direct(&g, &state.opinions, &state.confidences, &stubborn, value, include_self);
            if got != want {
                mismatches += 1;
            }
        }
    }
    let ok = mismatches == 0 && start.elapsed().as_secs() < 60;
    r.check("HK step oracle", ok, format!("200 instances x 2 self modes, {mismatches} inexact"), start);
}

fn identities(r: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tree_fail = 0;
    for _ in 0..50 {
        let n = rng.random_range(2..40);
        let t = common::random_tree(&mut rng, n);
        for mode in [DistanceMode::Hop, DistanceMode::ReciprocalWeight] {
            let edges_one = edge_salience(&t, mode).values.iter().all(|&s| s == 1.0);
            let deg: Vec<f64> = t.degrees().iter().map(|&d| d as f64).collect();
            if !edges_one || node_salience(&t, mode).values != deg {
                tree_fail += 1;
            }
        }
    }
    let mut core_fail = 0;
    let mut pr_err: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(2..60);
        let g = common::random_graph(&mut rng, n, 0.15, false);
        let unit: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let u = WeightedGraph::from_unit_edges(n, &unit).unwrap();
        if s_coreness(&u).values != k_coreness(&u).values {
            core_fail += 1;
        }
        pr_err = pr_err.max((pagerank(&g).unwrap().values.iter().sum::<f64>() - 1.0).abs());
    }
    let tri = WeightedGraph::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let tri_err = max_diff(&pagerank(&tri).unwrap().values, &[1.0 / 3.0; 3]);
    let ok = tree_fail == 0 && core_fail == 0 && pr_err <= 1e-9 && tri_err <= 1e-9 && start.elapsed().as_secs() < 60;
    r.check(
        "centrality identities",
        ok,
        format!(
            "tree failures {tree_fail}/100, s!=k {core_fail}/50, |sum PR - 1| {pr_err:.1e}, triangle {tri_err:.1e}"
        ),
        start,
    );
}

fn network_ids(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("lfr-{i}")).collect()
}

fn networks(count: usize) -> Vec<WeightedGraph> {
    network_ids(count)
        .par_iter()
        .map(|id| {
            generate_lfr(&LfrParams {
                seed: network_seed(MASTER, id),
                ..LfrParams::default()
            })
            .unwrap()
        })
        .collect()
}

fn generator_envelope(r: &mut Report, nets: &[WeightedGraph]) {
    let start = Instant::now();
    let mut ok = true;
    let mut lines = Vec::new();
    for g in nets {
        let s = network_stats(g);
        let hss = high_salience_skeleton(g, 0.9, CentralityConfig::default().distance_mode).unwrap();
        let nodes = hss.node_count() as f64 / g.node_count() as f64;
        let edges = hss.edge_count() as f64 / g.edge_count() as f64;
        ok &= (18.0..=23.0).contains(&s.k_mean)
            && (-0.85..=-0.5).contains(&s.assortativity)
            && (0.15..=0.30).contains(&s.clustering)
            && s.k_min >= 6
            && s.k_max <= 200
            && nodes > 0.85
            && edges < 0.15;
        lines.push(format!(
            "<k> {:.2} r {:.3} C {:.3} k {}..{} hss {:.3}/{:.3}",
            s.k_mean, s.assortativity, s.clustering, s.k_min, s.k_max, nodes, edges
        ));
    }
    r.check("generator envelope", ok, lines.join("; "), start);
}

/// Final state of one run; the series is dropped to bound memory.
struct Outcome {
    job: Job,
    result: SimResult,
}

fn grid(nets: &[WeightedGraph], strategy: ScheduleKind, measures: &[Measure], fractions: &[f64], runs: usize) -> Vec<Outcome> {
    let spec = SweepSpec {
        networks: vec![NetworkSource::generated(LfrParams::default(), nets.len())],
        strategies: vec![strategy],
        measures: measures.to_vec(),
        fractions: fractions.to_vec(),
        runs_per_cell: runs,
        master_seed: MASTER,
        sim: SimConfig {
            snapshot_interval: 0,
            ..SimConfig::default()
        },
        ..SweepSpec::default()
    };
    grid_with(nets, &spec)
}

fn grid_with(nets: &[WeightedGraph], spec: &SweepSpec) -> Vec<Outcome> {
    let scores: HashMap<(usize, Measure), NodeScores> = (0..nets.len())
        .flat_map(|n| spec.measures.iter().map(move |&m| (n, m)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, m)| ((n, m), compute(&nets[n], m, &spec.centrality).unwrap()))
        .collect();
    expand_sweep(spec)
        .unwrap()
        .into_par_iter()
        .map(|job| {
            let mut result = run_job(spec, &job, &nets[job.network], &scores[&(job.network, job.measure)]).unwrap();
            result.series = Vec::new();
            Outcome { job, result }
        })
        .collect()
}

fn cell_mean(runs: &[Outcome], measure: Measure, fraction: f64, f: impl Fn(&SimResult) -> f64) -> f64 {
    let v: Vec<f64> = runs
        .iter()
        .filter(|o| o.job.measure == measure && o.job.fraction == fraction)
        .map(|o| f(&o.result))
        .collect();
    mean(&v)
}

fn near_one(r: &SimResult) -> f64 {
    fraction_near(&r.final_opinions, 1.0, 0.05)
}

fn uncontrolled(r: &mut Report, nets: &[WeightedGraph]) {
    let start = Instant::now();
    let ids = network_ids(nets.len());
    let sim = SimConfig {
        snapshot_interval: 0,
        ..SimConfig::default()
    };
    let init = Default::default();
    let results: Vec<SimResult> = (0..nets.len() * SEEDS)
        .into_par_iter()
        .map(|k| {
            let (n, run) = (k / SEEDS, k % SEEDS);
            let s = job_seed(MASTER, &ids[n], ScheduleKind::Static, None, 0.0, run);
            let mut rng = seed::rng(s);
            run_simulation(&nets[n], &init, &StubbornPlan::uncontrolled(), &sim, &mut rng).unwrap()
        })
        .collect();
    let grand = mean(&results.iter().map(SimResult::final_mean).collect::<Vec<_>>());
    let mut counts = HashMap::new();
    for res in &results {
        *counts.entry(count_clusters(&res.final_opinions, CLUSTER_GAP)).or_insert(0usize) += 1;
    }
    let modal = counts.iter().max_by_key(|(&c, &n)| (n, std::cmp::Reverse(c))).map(|(&c, _)| c).unwrap();
    let converged = results.iter().filter(|res| res.converged_at.is_some()).count() as f64 / results.len() as f64;
    let mut hist: Vec<_> = counts.into_iter().collect();
    hist.sort_unstable();
    let ok = (0.45..=0.55).contains(&grand) && (2..=3).contains(&modal) && converged >= 0.95;
    r.check(
        "uncontrolled baseline",
        ok,
        format!("grand mean {grand:.3}, modal clusters {modal} {hist:?}, converged {:.0}%", 100.0 * converged),
        start,
    );
}

fn static_criteria(r: &mut Report, nets: &[WeightedGraph]) {
    let start = Instant::now();
    let measures = [Measure::Salience, Measure::Betweenness, Measure::Pagerank, Measure::Degree, Measure::Random];
    let fractions = [0.001, 0.005, 0.01, 0.02];
    let runs = grid(nets, ScheduleKind::Static, &measures, &fractions, SEEDS);

    let mut monotone = true;
    let mut rows = Vec::new();
    for &m in &measures {
        let means: Vec<f64> = fractions.iter().map(|&f| cell_mean(&runs, m, f, SimResult::final_mean)).collect();
        monotone &= means[..3].windows(2).all(|w| w[1] >= w[0] - 0.02);
        rows.push(format!("{} {:.3?}", m.name(), means));
    }
    let at = |m| cell_mean(&runs, m, 0.001, SimResult::final_mean);
    let best = at(Measure::Salience).max(at(Measure::Betweenness)).max(at(Measure::Pagerank));
    let random = at(Measure::Random);
    r.check("static trend: monotone to 0.01", monotone, rows.join("; "), start);
    r.check(
        "static trend: best beats random at 0.001",
        best - random >= 0.03,
        format!("best {best:.3} random {random:.3} margin {:.3}", best - random),
        start,
    );

    let mut split = true;
    let mut cells = Vec::new();
    for &m in &measures {
        let high = cell_mean(&runs, m, 0.02, near_one);
        let low = cell_mean(&runs, m, 0.02, |res| {
            res.final_opinions.iter().filter(|&&x| x < 0.3).count() as f64 / res.final_opinions.len() as f64
        });
        split &= high >= 0.25 && low >= 0.25;
        cells.push(format!("{} near1 {high:.3} below0.3 {low:.3}", m.name()));
    }
    r.check("static split at 0.02", split, cells.join("; "), start);
}

fn dynamic_criteria(r: &mut Report, nets: &[WeightedGraph]) {
    let start = Instant::now();
    let capture = grid(nets, ScheduleKind::Dynamic, &[Measure::Salience], &[0.001], SEEDS);
    let near = cell_mean(&capture, Measure::Salience, 0.001, near_one);
    r.check("dynamic capture at 0.001", near >= 0.80, format!("salience fraction near 1: {near:.3}"), start);

    let start = Instant::now();
    let rev = grid(nets, ScheduleKind::Dynamic, &[Measure::Salience, Measure::Random], &[0.02], SEEDS);
    let sal = cell_mean(&rev, Measure::Salience, 0.02, near_one);
    let rnd = cell_mean(&rev, Measure::Random, 0.02, near_one);
    r.check(
        "dynamic reversal at 0.02",
        rnd >= sal - 0.02,
        format!("random {rnd:.3} salience {sal:.3}"),
        start,
    );
}

fn lock_in(r: &mut Report, nets: &[WeightedGraph]) {
    let start = Instant::now();
    let spec = SweepSpec {
        networks: vec![NetworkSource::generated(LfrParams::default(), nets.len())],
        strategies: vec![ScheduleKind::Dynamic],
        measures: vec![Measure::Salience],
        fractions: vec![0.01],
        runs_per_cell: 4,
        master_seed: MASTER,
        sim: SimConfig {
            snapshot_interval: 10,
            ..SimConfig::default()
        },
        ..SweepSpec::default()
    };
    let runs = grid_with(nets, &spec);
    let matrices: Vec<_> = runs
        .iter()
        .map(|o| {
            let snaps: Vec<&[f64]> = o.result.snapshots.iter().map(|s| s.opinions.as_slice()).collect();
            density_matrix(&snaps, spec.bins)
        })
        .collect();
    let m = mean_matrix(&matrices);
    let row = |t: usize| runs[0].result.snapshots.iter().position(|s| s.step == t).unwrap();
    let b = bin_of(0.5, spec.bins);
    let (d0, d200) = (m[row(0)][b], m[row(200)][b]);
    r.check(
        "early lock-in",
        d200 >= 3.0 * d0,
        format!("{} runs, bin {b} mass t=0 {d0:.4} t=200 {d200:.4} ratio {:.2}", runs.len(), d200 / d0),
        start,
    );
}

fn determinism(r: &mut Report) {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/small.toml");
    let mut same = true;
    let mut outputs = Vec::new();
    for (k, jobs) in [(0, 2), (1, 1)] {
        let mut cfg = RunConfig::load(fixture).unwrap();
        cfg.output_dir = dir.path().join(k.to_string());
        cfg.jobs = jobs;
        cmd_sweep(&cfg).unwrap();
        outputs.push(cfg.output_dir);
    }
    for f in ["runs.csv", "aggregates.csv"] {
        same &= fs::read(outputs[0].join(f)).unwrap() == fs::read(outputs[1].join(f)).unwrap();
    }
    r.check("determinism", same, "two sweeps, runs.csv and aggregates.csv compared bytewise".into(), start);
}

fn main() -> ExitCode {
    let mut r = Report { failed: 0 };
    betweenness_oracle(&mut r);
    hk_oracle(&mut r);
    identities(&mut r);
    determinism(&mut r);

    let nets = networks(5);
    generator_envelope(&mut r, &nets);
    let nets = &nets[..INSTANCES];
    uncontrolled(&mut r, nets);
    static_criteria(&mut r, nets);
    dynamic_criteria(&mut r, nets);
    lock_in(&mut r, nets);

    println!("acceptance: {} criteria failed", r.failed);
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
