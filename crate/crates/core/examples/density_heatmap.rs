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


//! Averages opinion densities over time across runs and prints the result
//! as a coarse text heatmap, one row per 100 steps.

use stubborn_hk::centrality::{compute, CentralityConfig, Measure};
use stubborn_hk::dynamics::{run_simulation, InitSpec, Schedule, ScheduleKind, SimConfig, StubbornPlan};
use stubborn_hk::generator::{generate_lfr, LfrParams};
use stubborn_hk::metrics::{density_matrix, mean_matrix};
use stubborn_hk::seed;

const BINS: usize = 25;

fn main() -> stubborn_hk::Result<()> {
    let g = generate_lfr(&LfrParams::default())?;
    let scores = compute(&g, Measure::Salience, &CentralityConfig::default())?;
    let sim = SimConfig {
        max_steps: 3000,
        snapshot_interval: 100,
        ..SimConfig::default()
    };
    let mut matrices = Vec::new();
    for run in 0..5 {
        let mut rng = seed::rng(run);
        let plan = StubbornPlan::select(&scores, 0.01, Schedule::of_kind(ScheduleKind::Dynamic), &mut rng);
        let r = run_simulation(&g, &InitSpec::default(), &plan, &sim, &mut rng)?;
        let snaps: Vec<&[f64]> = r.snapshots.iter().map(|s| s.opinions.as_slice()).collect();
        matrices.push(density_matrix(&snaps, BINS));
    }
    let shades = [' ', '.', ':', '+', '#', '@'];
    for (k, row) in mean_matrix(&matrices).iter().enumerate() {
        let line: String = row
            .iter()
            .map(|&d| shades[((d * BINS as f64).sqrt() as usize).min(shades.len() - 1)])
            .collect();
        println!("{:>5} |{line}|", k * sim.snapshot_interval);
    }
    println!("       0{:>w$}1", "", w = BINS - 1);
    Ok(())
}
