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


//! Extracts the high-salience skeleton of a generated network.

use stubborn_hk::centrality::{edge_salience, high_salience_skeleton, CentralityConfig};
use stubborn_hk::generator::{generate_lfr, LfrParams};

fn main() -> stubborn_hk::Result<()> {
    let g = generate_lfr(&LfrParams::default())?;
    let cfg = CentralityConfig::default();
    let salience = edge_salience(&g, cfg.distance_mode);

    // salience is strongly bimodal: most edges sit near 0, a few near 1
    let mut hist = [0usize; 10];
    for &s in &salience.values {
        hist[((s * 10.0) as usize).min(9)] += 1;
    }
    for (k, c) in hist.iter().enumerate() {
        println!("[{:.1}, {:.1}) {c}", k as f64 / 10.0, (k + 1) as f64 / 10.0);
    }

    let hss = high_salience_skeleton(&g, cfg.hss_threshold, cfg.distance_mode)?;
    println!(
        "skeleton at {}: {} of {} nodes, {} of {} edges",
        cfg.hss_threshold,
        hss.node_count(),
        g.node_count(),
        hss.edge_count(),
        g.edge_count()
    );
    Ok(())
}
