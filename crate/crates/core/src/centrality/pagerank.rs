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

use super::{Measure, NodeScores};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// PageRank with the defaults `damping = 0.85`, `tol = 1e-10`, `max_iter = 200`.
pub fn pagerank(g: &WeightedGraph) -> Result<NodeScores> {
    pagerank_with(g, 0.85, 1e-10, 200)
}

/// Power iteration of `pi_i = d * sum_j pi_j w_ji / s_j + (1 - d) / n`.
///
/// Nodes without edges have nowhere to send their mass; it is spread
/// uniformly, like the teleportation term, so that the vector keeps summing
/// to one. Iteration stops once the L1 change drops below `tol`.
pub fn pagerank_with(g: &WeightedGraph, damping: f64, tol: f64, max_iter: usize) -> Result<NodeScores> {
    let n = g.node_count();
    if n == 0 {
        return Ok(NodeScores::new(Measure::Pagerank, Vec::new()));
    }
    let strength = g.strengths();
    let uniform = 1.0 / n as f64;
    let mut pi = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let dangling: f64 = (0..n).filter(|&j| strength[j] == 0.0).map(|j| pi[j]).sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g.neighbors(i).map(|(j, w)| pi[j] * w / strength[j]).sum();
            *slot = base + damping * inflow;
        }
        // renormalize away rounding drift
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        residual = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if residual < tol {
            return Ok(NodeScores::new(Measure::Pagerank, pi));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}
