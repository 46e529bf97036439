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


//! Compares a fixed extreme stubborn opinion with one that moves there in
//! steps, on the same network and stubborn set.

use stubborn_hk::centrality::{compute, CentralityConfig, Measure};
use stubborn_hk::dynamics::{run_simulation, InitSpec, Schedule, ScheduleKind, SimConfig, StubbornPlan};
use stubborn_hk::generator::{generate_lfr, LfrParams};
use stubborn_hk::metrics::{count_clusters, OpinionSummary, CLUSTER_GAP};
use stubborn_hk::seed;

fn main() -> stubborn_hk::Result<()> {
    let g = generate_lfr(&LfrParams::default())?;
    let scores = compute(&g, Measure::Salience, &CentralityConfig::default())?;
    let sim = SimConfig {
        snapshot_interval: 0,
        ..SimConfig::default()
    };
    for kind in [ScheduleKind::Static, ScheduleKind::Dynamic] {
        let mut rng = seed::rng(42);
        let plan = StubbornPlan::select(&scores, 0.005, Schedule::of_kind(kind), &mut rng);
        let r = run_simulation(&g, &InitSpec::default(), &plan, &sim, &mut rng)?;
        let s = OpinionSummary::new(&r.final_opinions, 1.0);
        println!(
            "{kind:<8} stubborn {} steps {} mean {:.3} near 1 {:.3} clusters {}",
            plan.nodes.len(),
            r.steps(),
            s.mean,
            s.fraction_near_target,
            count_clusters(&r.final_opinions, CLUSTER_GAP)
        );
    }
    Ok(())
}
