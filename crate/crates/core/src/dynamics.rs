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


//! Weighted Hegselmann–Krause dynamics with stubborn agents.
//!
//! Every agent holds an opinion in [0, 1] and a confidence bound. At each
//! synchronous step an agent moves to the weighted average of the neighbours
//! whose opinions lie within its bound; stubborn agents instead take the
//! value of an opinion schedule, either constant or rising in steps.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{rank_top_fraction, Measure, NodeScores};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metrics::{fraction_near, mean_opinion, NEAR_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitSpec {
    pub eps_low: f64,
    pub eps_high: f64,
}

impl Default for InitSpec {
    fn default() -> Self {
        InitSpec {
            eps_low: 0.05,
            eps_high: 0.25,
        }
    }
}

impl InitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.eps_low && self.eps_low <= self.eps_high && self.eps_high <= 1.0) {
            return Err(Error::Param(format!(
                "need 0 <= eps_low <= eps_high <= 1, got {} / {}",
                self.eps_low, self.eps_high
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Static,
    Dynamic,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::Static => "static",
            ScheduleKind::Dynamic => "dynamic",
        }
    }
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(ScheduleKind::Static),
            "dynamic" => Ok(ScheduleKind::Dynamic),
            _ => Err(Error::Param(format!("unknown strategy '{s}' (expected static or dynamic)"))),
        }
    }
}

/// Opinion held by the stubborn agents over time.
///
/// A static schedule holds `final_value` throughout. A dynamic one splits
/// the horizon into `periods` equal periods and starts at `start_value`,
/// adding `increment` at each period boundary until `final_value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub final_value: f64,
    pub start_value: f64,
    pub periods: usize,
    pub increment: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            kind: ScheduleKind::Static,
            final_value: 1.0,
            start_value: 0.5,
            periods: 6,
            increment: 0.1,
        }
    }
}

impl Schedule {
    pub fn of_kind(kind: ScheduleKind) -> Self {
        Schedule {
            kind,
            ..Schedule::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.final_value) {
            return Err(Error::Param(format!("final_value must lie in [0, 1], got {}", self.final_value)));
        }
        if self.kind == ScheduleKind::Static {
            return Ok(());
        }
        if !unit(self.start_value) || self.start_value > self.final_value {
            return Err(Error::Param(format!(
                "need 0 <= start_value <= final_value, got {} / {}",
                self.start_value, self.final_value
            )));
        }
        if self.periods == 0 || !(self.increment >= 0.0) {
            return Err(Error::Param("dynamic schedule needs periods >= 1 and increment >= 0".into()));
        }
        if self.periods as f64 * self.increment < self.final_value - self.start_value - 1e-12 {
            return Err(Error::Param(format!(
                "schedule cannot reach {}: {} periods of {} from {}",
                self.final_value, self.periods, self.increment, self.start_value
            )));
        }
        Ok(())
    }

    /// Value at step `t` of a run lasting at most `max_steps` steps.
    pub fn value(&self, t: usize, max_steps: usize) -> f64 {
        match self.kind {
            ScheduleKind::Static => self.final_value,
            ScheduleKind::Dynamic => {
                let period = (max_steps / self.periods).max(1);
                let v = self.start_value + self.increment * (t / period) as f64;
                v.min(self.final_value)
            }
        }
    }
}

/// Checked form of [`Schedule::value`].
pub fn schedule_value(s: &Schedule, t: usize, max_steps: usize) -> Result<f64> {
    s.validate()?;
    if t > max_steps {
        return Err(Error::Param(format!("step {t} is past the horizon {max_steps}")));
    }
    Ok(s.value(t, max_steps))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpinionState {
    pub opinions: Vec<f64>,
    pub confidences: Vec<f64>,
    /// Sorted ids of the stubborn agents.
    pub stubborn: Vec<usize>,
    pub time: usize,
}

impl OpinionState {
    pub fn new(opinions: Vec<f64>, confidences: Vec<f64>) -> Result<Self> {
        if opinions.len() != confidences.len() {
            return Err(Error::Param(format!(
                "{} opinions but {} confidences",
                opinions.len(),
                confidences.len()
            )));
        }
        if let Some(x) = opinions.iter().chain(&confidences).find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::Param(format!("opinions and confidences must lie in [0, 1], got {x}")));
        }
        Ok(OpinionState {
            opinions,
            confidences,
            stubborn: Vec::new(),
            time: 0,
        })
    }

    /// Marks `nodes` stubborn and sets them to `value`.
    pub fn with_stubborn(mut self, nodes: &[usize], value: f64) -> Result<Self> {
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&i) = nodes.last().filter(|&&i| i >= self.opinions.len()) {
            return Err(Error::Param(format!("stubborn node {i} out of range")));
        }
        for &i in &nodes {
            self.opinions[i] = value;
        }
        self.stubborn = nodes;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.opinions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opinions.is_empty()
    }

    fn stubborn_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for &i in &self.stubborn {
            mask[i] = true;
        }
        mask
    }
}

/// Uniform opinions on [0, 1], then uniform confidences on
/// `[eps_low, eps_high]`, one draw per node in id order.
pub fn init_state<R: Rng + ?Sized>(g: &WeightedGraph, spec: &InitSpec, rng: &mut R) -> Result<OpinionState> {
    spec.validate()?;
    let n = g.node_count();
    let opinions = (0..n).map(|_| rng.random::<f64>()).collect();
    let confidences = (0..n)
        .map(|_| {
            if spec.eps_low == spec.eps_high {
                spec.eps_low
            } else {
                rng.random_range(spec.eps_low..=spec.eps_high)
            }
        })
        .collect();
    OpinionState::new(opinions, confidences)
}

/// Neighbours of `i` within its confidence bound, in id order.
pub fn interaction_set(g: &WeightedGraph, state: &OpinionState, i: usize, include_self: bool) -> Vec<usize> {
    let (x, eps) = (&state.opinions, state.confidences[i]);
    let mut set: Vec<usize> = g
        .neighbor_ids(i)
        .iter()
        .copied()
        .filter(|&j| (x[i] - x[j]).abs() <= eps)
        .collect();
    if include_self {
        let pos = set.partition_point(|&j| j < i);
        set.insert(pos, i);
    }
    set
}

/// New opinion of a free agent: the weighted mean over its interaction
/// set, with the agent itself last at unit weight when `include_self`.
/// An empty set keeps the current opinion.
#[inline]
fn updated_opinion(g: &WeightedGraph, x: &[f64], eps: f64, i: usize, include_self: bool) -> f64 {
    let xi = x[i];
    let (mut num, mut den) = (0.0, 0.0);
    for (&j, &w) in g.neighbor_ids(i).iter().zip(g.neighbor_weights(i)) {
        let xj = x[j];
        if (xi - xj).abs() <= eps {
            num += w * xj;
            den += w;
        }
    }
    if include_self {
        num += xi;
        den += 1.0;
    }
    if den > 0.0 {
        num / den
    } else {
        xi
    }
}

fn step_into(
    g: &WeightedGraph,
    x: &[f64],
    eps: &[f64],
    mask: &[bool],
    value: f64,
    include_self: bool,
    out: &mut [f64],
) {
    for i in 0..x.len() {
        out[i] = if mask[i] {
            value
        } else {
            updated_opinion(g, x, eps[i], i, include_self)
        };
    }
}

/// One synchronous update with the self term excluded.
pub fn hk_step(g: &WeightedGraph, state: &OpinionState, schedule_value_now: f64) -> OpinionState {
    hk_step_with(g, state, schedule_value_now, false)
}

pub fn hk_step_with(g: &WeightedGraph, state: &OpinionState, schedule_value_now: f64, include_self: bool) -> OpinionState {
    assert_eq!(g.node_count(), state.len(), "state does not match the graph");
    let mut next = vec![0.0; state.len()];
    step_into(
        g,
        &state.opinions,
        &state.confidences,
        &state.stubborn_mask(),
        schedule_value_now,
        include_self,
        &mut next,
    );
    OpinionState {
        opinions: next,
        confidences: state.confidences.clone(),
        stubborn: state.stubborn.clone(),
        time: state.time + 1,
    }
}

/// Who is stubborn and what they hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StubbornPlan {
    /// Measure the nodes were picked by; `None` for hand-picked sets.
    pub measure: Option<Measure>,
    pub fraction: f64,
    pub schedule: Schedule,
    pub nodes: Vec<usize>,
}

impl StubbornPlan {
    /// No stubborn agents at all.
    pub fn uncontrolled() -> Self {
        StubbornPlan {
            measure: None,
            fraction: 0.0,
            schedule: Schedule::default(),
            nodes: Vec::new(),
        }
    }

    pub fn fixed(nodes: Vec<usize>, schedule: Schedule) -> Self {
        StubbornPlan {
            measure: None,
            fraction: 0.0,
            schedule,
            nodes,
        }
    }

    /// The top `fraction` of nodes by `scores`.
    pub fn select<R: Rng + ?Sized>(scores: &NodeScores, fraction: f64, schedule: Schedule, rng: &mut R) -> Self {
        StubbornPlan {
            measure: Some(scores.measure),
            fraction,
            schedule,
            nodes: rank_top_fraction(scores, fraction, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub max_steps: usize,
    /// Stop once the summed absolute opinion change of a step drops below this.
    pub conv_tol: f64,
    /// Keep the full opinion vector every this many steps; 0 keeps none.
    pub snapshot_interval: usize,
    pub include_self: bool,
    /// Tolerance of the captured fraction recorded in the series.
    pub near_tol: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_steps: 10_000,
            conv_tol: 1e-4,
            snapshot_interval: 10,
            include_self: false,
            near_tol: NEAR_TOL,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.conv_tol >= 0.0 && self.near_tol > 0.0) {
            return Err(Error::Param("conv_tol must be non-negative and near_tol positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: usize,
    pub opinions: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub mean: f64,
    pub fraction_near: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub final_opinions: Vec<f64>,
    pub converged_at: Option<usize>,
    /// One point per executed step, starting with the initial state.
    pub series: Vec<SeriesPoint>,
    pub snapshots: Vec<Snapshot>,
    pub stubborn: Vec<usize>,
    pub seed: Option<u64>,
}

impl SimResult {
    pub fn steps(&self) -> usize {
        self.series.len() - 1
    }

    pub fn final_mean(&self) -> f64 {
        mean_opinion(&self.final_opinions)
    }

    /// Writes the result as JSON.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer(BufWriter::new(file), self)
            .map_err(|e| Error::io(path, std::io::Error::other(e)))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

/// Runs the dynamics from a freshly drawn initial state until convergence
/// or `sim.max_steps`.
pub fn run_simulation<R: Rng + ?Sized>(
    g: &WeightedGraph,
    init: &InitSpec,
    plan: &StubbornPlan,
    sim: &SimConfig,
    rng: &mut R,
) -> Result<SimResult> {
    let state = init_state(g, init, rng)?;
    run_from(g, state, plan, sim)
}

/// Runs the dynamics from a given state. Stubborn opinions are reset to the
/// schedule's first value. The convergence check only starts once the
/// schedule has reached its final value.
pub fn run_from(g: &WeightedGraph, state: OpinionState, plan: &StubbornPlan, sim: &SimConfig) -> Result<SimResult> {
    sim.validate()?;
    plan.schedule.validate()?;
    if state.len() != g.node_count() {
        return Err(Error::Param(format!(
            "state has {} nodes, graph has {}",
            state.len(),
            g.node_count()
        )));
    }
    let schedule = plan.schedule;
    let target = schedule.final_value;
    let state = state.with_stubborn(&plan.nodes, schedule.value(0, sim.max_steps))?;
    let mask = state.stubborn_mask();
    let eps = state.confidences;
    let mut x = state.opinions;
    let mut next = vec![0.0; x.len()];

    let point = |x: &[f64]| SeriesPoint {
        mean: mean_opinion(x),
        fraction_near: fraction_near(x, target, sim.near_tol),
    };
    let mut series = vec![point(&x)];
    let mut snapshots = Vec::new();
    if sim.snapshot_interval > 0 {
        snapshots.push(Snapshot {
            step: 0,
            opinions: x.clone(),
        });
    }
    let mut converged_at = None;
    for t in 1..=sim.max_steps {
        let value = schedule.value(t, sim.max_steps);
        step_into(g, &x, &eps, &mask, value, sim.include_self, &mut next);
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        series.push(point(&x));
        if sim.snapshot_interval > 0 && t % sim.snapshot_interval == 0 {
            snapshots.push(Snapshot {
                step: t,
                opinions: x.clone(),
            });
        }
        if value == target && change < sim.conv_tol {
            converged_at = Some(t);
            break;
        }
    }
    Ok(SimResult {
        final_opinions: x,
        converged_at,
        series,
        snapshots,
        stubborn: state.stubborn,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn p3() -> WeightedGraph {
        WeightedGraph::from_unit_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn init_draws() {
        let g = WeightedGraph::from_unit_edges(1000, &[]).unwrap();
        let fixed = InitSpec {
            eps_low: 0.2,
            eps_high: 0.2,
        };
        let s = init_state(&g, &fixed, &mut seed::rng(1)).unwrap();
        assert!(s.confidences.iter().all(|&e| e == 0.2));
        let a = init_state(&g, &InitSpec::default(), &mut seed::rng(2)).unwrap();
        let b = init_state(&g, &InitSpec::default(), &mut seed::rng(2)).unwrap();
        assert_eq!(a, b);
        assert!((mean_opinion(&a.opinions) - 0.5).abs() < 0.05);
        assert!(a.confidences.iter().all(|e| (0.05..=0.25).contains(e)));
        let bad = InitSpec {
            eps_low: 0.3,
            eps_high: 0.2,
        };
        assert!(init_state(&g, &bad, &mut seed::rng(1)).is_err());
    }

    #[test]
    fn schedules() {
        let s = Schedule::default();
        assert_eq!(s.value(0, 10_000), 1.0);
        assert_eq!(s.value(7777, 10_000), 1.0);
        let d = Schedule::of_kind(ScheduleKind::Dynamic);
        assert_eq!(d.value(0, 6000), 0.5);
        assert_eq!(d.value(999, 6000), 0.5);
        assert!((d.value(1000, 6000) - 0.6).abs() < 1e-12);
        assert_eq!(d.value(5000, 6000), 1.0);
        assert_eq!(d.value(6000, 6000), 1.0);
        assert_eq!(d.value(10_000, 10_000), 1.0);
        let short = Schedule {
            periods: 4,
            ..d
        };
        assert!(schedule_value(&short, 0, 100).is_err());
        assert!(schedule_value(&d, 101, 100).is_err());
        assert_eq!("dynamic".parse::<ScheduleKind>().unwrap(), ScheduleKind::Dynamic);
        assert!("sometimes".parse::<ScheduleKind>().is_err());
    }

    #[test]
    fn interaction_sets() {
        let g = p3();
        let s = OpinionState::new(vec![0.0, 0.5, 1.0], vec![0.3; 3]).unwrap();
        assert!(interaction_set(&g, &s, 1, false).is_empty());
        assert_eq!(interaction_set(&g, &s, 1, true), vec![1]);
        let s = OpinionState::new(vec![0.4, 0.5, 0.6], vec![0.2; 3]).unwrap();
        assert_eq!(interaction_set(&g, &s, 1, false), vec![0, 2]);
        let s = OpinionState::new(vec![0.0, 0.5, 1.0], vec![1.0; 3]).unwrap();
        assert_eq!(interaction_set(&g, &s, 0, false), vec![1]);
    }

    #[test]
    fn weighted_step() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
        let s = OpinionState::new(vec![0.0, 0.5, 1.0], vec![0.1, 0.6, 0.1]).unwrap();
        let next = hk_step(&g, &s, 1.0);
        assert!((next.opinions[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(next.opinions[0], 0.0);
        assert_eq!(next.opinions[2], 1.0);
        assert_eq!(next.time, 1);
        let with_self = hk_step_with(&g, &s, 1.0, true);
        assert!((with_self.opinions[1] - 1.5 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_and_stubborn() {
        let g = p3();
        let s = OpinionState::new(vec![0.3; 3], vec![0.1; 3]).unwrap();
        assert_eq!(hk_step(&g, &s, 1.0).opinions, s.opinions);
        let s = s.with_stubborn(&[2], 1.0).unwrap();
        let next = hk_step(&g, &s, 0.9);
        assert_eq!(next.opinions, vec![0.3, 0.3, 0.9]);
    }

    #[test]
    fn converged_fixed_point() {
        let g = p3();
        let s = OpinionState::new(vec![0.4; 3], vec![0.1; 3]).unwrap();
        let r = run_from(&g, s, &StubbornPlan::uncontrolled(), &SimConfig::default()).unwrap();
        assert_eq!(r.converged_at, Some(1));
        assert_eq!(r.series.len(), 2);
        assert_eq!(r.steps(), 1);
    }

    #[test]
    fn static_plan_holds() {
        let g = WeightedGraph::from_unit_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = OpinionState::new(vec![0.1, 0.1, 0.9, 0.95], vec![0.2; 4]).unwrap();
        let plan = StubbornPlan::fixed(vec![3], Schedule::default());
        let cfg = SimConfig {
            snapshot_interval: 1,
            ..SimConfig::default()
        };
        let r = run_from(&g, s, &plan, &cfg).unwrap();
        assert!(r.converged_at.is_some());
        assert!(r.snapshots.iter().all(|s| s.opinions[3] == 1.0));
        assert_eq!(r.snapshots.len(), r.series.len());
        assert!(r.final_opinions[2] > 0.99);
    }

    #[test]
    fn isolated_pair_swaps_without_self() {
        let g = WeightedGraph::from_unit_edges(2, &[(0, 1)]).unwrap();
        let s = OpinionState::new(vec![0.1, 0.2], vec![0.2; 2]).unwrap();
        let cfg = SimConfig {
            max_steps: 50,
            ..SimConfig::default()
        };
        let r = run_from(&g, s.clone(), &StubbornPlan::uncontrolled(), &cfg).unwrap();
        assert_eq!(r.converged_at, None);
        assert_eq!(r.final_opinions, vec![0.1, 0.2]);
        let with_self = SimConfig {
            include_self: true,
            ..cfg
        };
        let r = run_from(&g, s, &StubbornPlan::uncontrolled(), &with_self).unwrap();
        assert_eq!(r.converged_at, Some(2));
        assert!((r.final_opinions[0] - 0.15).abs() < 1e-15);
    }

    #[test]
    fn dynamic_waits_for_final_value() {
        let g = p3();
        let s = OpinionState::new(vec![0.0, 0.0, 0.0], vec![0.01; 3]).unwrap();
        let plan = StubbornPlan::fixed(vec![0], Schedule::of_kind(ScheduleKind::Dynamic));
        let cfg = SimConfig {
            max_steps: 600,
            snapshot_interval: 0,
            ..SimConfig::default()
        };
        let r = run_from(&g, s, &plan, &cfg).unwrap();
        // the schedule reaches 1.0 at step 500
        assert_eq!(r.converged_at, Some(501));
        assert_eq!(r.final_opinions[0], 1.0);
        assert!(r.snapshots.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let g = p3();
        let r = run_simulation(
            &g,
            &InitSpec::default(),
            &StubbornPlan::uncontrolled(),
            &SimConfig::default(),
            &mut seed::rng(3),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        r.save(&path).unwrap();
        assert_eq!(SimResult::load(&path).unwrap(), r);
    }
}
