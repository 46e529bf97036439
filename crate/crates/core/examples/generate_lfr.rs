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


//! Generates a weighted LFR benchmark network and prints its statistics.
//!
//! cargo run --release --example generate_lfr -- [n] [seed]

use stubborn_hk::generator::{generate_lfr, LfrParams};
use stubborn_hk::graph::{modularity, network_stats, save_communities, save_edge_list};

fn main() -> stubborn_hk::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(1000, |s| s.parse().expect("n"));
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));
    let params = LfrParams { n, seed, ..LfrParams::default() };
    let g = generate_lfr(&params)?;
    let s = network_stats(&g);
    println!("nodes {} edges {}", s.node_count, s.edge_count);
    println!("degree {}..{} mean {:.2}", s.k_min, s.k_max, s.k_mean);
    println!("assortativity {:.3} clustering {:.3}", s.assortativity, s.clustering);
    println!("degree exponent {:.2} weight exponent {:.2}", s.alpha_k, s.alpha_w);
    if let Some(q) = modularity(&g) {
        println!("modularity of planted communities {q:.3}");
    }
    let dir = std::env::temp_dir();
    save_edge_list(&g, dir.join("lfr.edges"))?;
    save_communities(&g, dir.join("lfr.communities"))?;
    println!("wrote {}", dir.join("lfr.edges").display());
    Ok(())
}
