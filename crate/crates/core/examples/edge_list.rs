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


//! Reads a labelled edge list and community file, then writes them back
//! with dense ids.
//!
//! cargo run --example edge_list -- graph.edges [graph.communities]

use stubborn_hk::graph::{load_communities, load_edge_list, save_edge_list};

fn main() -> stubborn_hk::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(path) = args.next() else {
        eprintln!("usage: edge_list <edges> [communities]");
        std::process::exit(2);
    };
    let mut g = load_edge_list(&path)?;
    if let Some(c) = args.next() {
        g = load_communities(c, g)?;
    }
    println!("{} nodes, {} edges", g.node_count(), g.edge_count());
    if let Some(c) = g.communities() {
        println!("{} communities", c.iter().max().map_or(0, |m| m + 1));
    }
    for i in 0..g.node_count().min(5) {
        println!("node {} (label {}): degree {} strength {:.3}", i, g.labels()[i], g.degree(i), g.strength(i));
    }
    let out = std::env::temp_dir().join("copy.edges");
    save_edge_list(&g, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
