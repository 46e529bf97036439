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


//! Steps the bounded-confidence update by hand on a six-node ring.

use stubborn_hk::dynamics::{hk_step, interaction_set, OpinionState};
use stubborn_hk::WeightedGraph;

fn main() -> stubborn_hk::Result<()> {
    let ring: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    let g = WeightedGraph::from_unit_edges(6, &ring)?;
    let mut state = OpinionState::new(vec![0.1, 0.2, 0.35, 0.5, 0.7, 0.9], vec![0.2; 6])?.with_stubborn(&[5], 1.0)?;
    for t in 0..8 {
        let shown: Vec<String> = state.opinions.iter().map(|x| format!("{x:.3}")).collect();
        println!("t={t} {}", shown.join(" "));
        state = hk_step(&g, &state, 1.0);
    }
    println!("node 4 listens to {:?}", interaction_set(&g, &state, 4, false));
    Ok(())
}
