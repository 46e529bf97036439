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

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Measure, NodeScores};
use crate::graph::WeightedGraph;

/// k-core numbers by bucket peeling (Batagelj-Zaversnik).
pub fn k_coreness(g: &WeightedGraph) -> NodeScores {
    let n = g.node_count();
    let mut degree = g.degrees();
    let max_deg = degree.iter().copied().max().unwrap_or(0);

    // nodes sorted by degree, with bucket starts
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &degree {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0; n];
    let mut vert = vec![0; n];
    let mut next = bin.clone();
    for v in 0..n {
        pos[v] = next[degree[v]];
        vert[pos[v]] = v;
        next[degree[v]] += 1;
    }

    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbor_ids(v) {
            if degree[u] > degree[v] {
                // move u to the front of its bucket, then shrink the bucket
                let du = degree[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                    pos[u] = pw;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    NodeScores::new(Measure::KCoreness, degree.into_iter().map(|d| d as f64).collect())
}

#[derive(PartialEq)]
struct Residual(f64, usize);

impl Eq for Residual {}

impl Ord for Residual {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Residual {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// s-core numbers: repeatedly remove the node of smallest residual strength;
/// a node's s-coreness is the largest such minimum seen up to its removal.
pub fn s_coreness(g: &WeightedGraph) -> NodeScores {
    let n = g.node_count();
    let mut residual = g.strengths();
    let mut removed = vec![false; n];
    let mut core = vec![0.0; n];
    let mut heap: BinaryHeap<Residual> = (0..n).map(|i| Residual(residual[i], i)).collect();
    let mut level = f64::NEG_INFINITY;
    while let Some(Residual(s, v)) = heap.pop() {
        if removed[v] || s != residual[v] {
            continue;
        }
        removed[v] = true;
        level = level.max(s);
        core[v] = level;
        for (u, w) in g.neighbors(v) {
            if !removed[u] {
                residual[u] -= w;
                heap.push(Residual(residual[u], u));
            }
        }
    }
    NodeScores::new(Measure::SCoreness, core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_core_examples() {
        let tri = WeightedGraph::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k_coreness(&tri).values, vec![2.0; 3]);
        let p3 = WeightedGraph::from_unit_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(k_coreness(&p3).values, vec![1.0; 3]);
        let k4_pendant =
            WeightedGraph::from_unit_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        assert_eq!(k_coreness(&k4_pendant).values, vec![3.0, 3.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn isolated_nodes_have_zero_core() {
        let g = WeightedGraph::from_unit_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(k_coreness(&g).values, vec![1.0, 1.0, 0.0]);
        assert_eq!(s_coreness(&g).values, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn s_core_examples() {
        let single = WeightedGraph::from_edges(2, [(0, 1, 5.0)]).unwrap();
        assert_eq!(s_coreness(&single).values, vec![5.0, 5.0]);
        let wp3 = WeightedGraph::from_edges(3, [(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(s_coreness(&wp3).values, vec![2.0, 2.0, 1.0]);
    }

    #[test]
    fn s_core_equals_k_core_with_unit_weights() {
        let g = WeightedGraph::from_unit_edges(
            7,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 3), (3, 6), (0, 3)],
        )
        .unwrap();
        assert_eq!(s_coreness(&g).values, k_coreness(&g).values);
    }
}
