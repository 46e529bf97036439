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


//! Ranks the nodes of a small network by every centrality and shows which
//! nodes each rule would make stubborn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stubborn_hk::centrality::{compute, rank_top_fraction, CentralityConfig, Measure};
use stubborn_hk::generator::{generate_lfr, LfrParams};

fn main() -> stubborn_hk::Result<()> {
    let g = generate_lfr(&LfrParams {
        n: 300,
        k_mean: 10.0,
        k_min: 4,
        k_max: 60,
        ..LfrParams::default()
    })?;
    let cfg = CentralityConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in Measure::ALL {
        let scores = compute(&g, m, &cfg)?;
        let top = rank_top_fraction(&scores, 0.02, &mut rng);
        let shown: Vec<String> = top.iter().map(|&i| format!("{i}:{:.3}", scores.values[i])).collect();
        println!("{:<12} {}", m.name(), shown.join(" "));
    }
    Ok(())
}
