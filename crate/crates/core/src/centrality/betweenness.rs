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

use rayon::prelude::*;

use super::paths::shortest_path_dag;
use super::{DistanceMode, Measure, NodeScores};
use crate::graph::WeightedGraph;

/// Sources handled per parallel task. Partial sums are combined in source
/// order, so results do not depend on the number of threads.
pub(crate) const SOURCE_CHUNK: usize = 32;

/// Brandes betweenness over unordered pairs `{j, k}` with `j != i != k`.
/// Pairs in different components contribute nothing.
pub fn betweenness(g: &WeightedGraph, mode: DistanceMode) -> NodeScores {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut delta = vec![0.0; n];
            for &s in chunk {
                let dag = shortest_path_dag(g, s, mode);
                for &v in &dag.order {
                    delta[v] = 0.0;
                }
                for &w in dag.order.iter().rev() {
                    let coeff = (1.0 + delta[w]) / dag.path_count[w];
                    for &(v, _) in &dag.preds[w] {
                        delta[v] += dag.path_count[v] * coeff;
                    }
                    if w != s {
                        acc[w] += delta[w];
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // every unordered pair was visited from both ends
    for t in &mut total {
        *t *= 0.5;
    }
    NodeScores::new(Measure::Betweenness, total)
}
