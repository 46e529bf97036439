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


//! Runs a small parameter sweep and writes runs.csv and aggregates.csv.
//!
//! cargo run --release --example sweep -- [output dir]

use std::path::PathBuf;

use stubborn_hk::centrality::Measure;
use stubborn_hk::dynamics::{ScheduleKind, SimConfig};
use stubborn_hk::experiment::{run_sweep_to, write_outputs, NetworkSource, SweepSpec};
use stubborn_hk::generator::LfrParams;

fn main() -> stubborn_hk::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("stubborn-sweep"), PathBuf::from);
    let spec = SweepSpec {
        networks: vec![NetworkSource::generated(
            LfrParams {
                n: 300,
                k_mean: 10.0,
                k_min: 4,
                k_max: 60,
                ..LfrParams::default()
            },
            2,
        )],
        strategies: vec![ScheduleKind::Static, ScheduleKind::Dynamic],
        measures: vec![Measure::Degree, Measure::Salience, Measure::Random],
        fractions: vec![0.01, 0.05],
        runs_per_cell: 5,
        sim: SimConfig {
            max_steps: 2000,
            ..SimConfig::default()
        },
        ..SweepSpec::default()
    };
    println!("{} jobs", spec.job_count());
    let out = run_sweep_to(&spec, 0, &dir)?;
    let rows = write_outputs(&dir, &out)?;
    for r in rows {
        println!(
            "{:<8} {:<10} {:<5} mean {:.3} ± {:.3} near 1 {:.3}",
            r.strategy.name(),
            r.measure.map_or("none", Measure::name),
            r.fraction,
            r.mean_final_mean,
            r.std_final_mean,
            r.mean_fraction_near
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}
