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

use super::DistanceMode;
use crate::graph::WeightedGraph;

/// Relative tolerance under which two path lengths count as equal.
pub(crate) const TIE_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs())
}

/// Single-source shortest paths keeping every co-optimal predecessor.
#[derive(Debug, Clone)]
pub struct ShortestPathDag {
    pub source: usize,
    /// Path length from the source; infinite when unreachable.
    pub dist: Vec<f64>,
    /// Number of distinct shortest paths from the source.
    pub path_count: Vec<f64>,
    /// `(predecessor, edge index)` pairs on shortest paths into each node.
    pub preds: Vec<Vec<(usize, usize)>>,
    /// Reached nodes in non-decreasing distance.
    pub order: Vec<usize>,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source` recording all shortest-path predecessors.
pub fn shortest_path_dag(g: &WeightedGraph, source: usize, mode: DistanceMode) -> ShortestPathDag {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut path_count = vec![0.0; n];
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();

    dist[source] = 0.0;
    path_count[source] = 1.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, v)) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        order.push(v);
        for (w, weight, edge) in g.incident(v) {
            if done[w] {
                continue;
            }
            let nd = d + mode.length(weight);
            if dist[w].is_infinite() || (nd < dist[w] && !same_length(nd, dist[w])) {
                dist[w] = nd;
                path_count[w] = path_count[v];
                preds[w].clear();
                preds[w].push((v, edge));
                heap.push(Entry(nd, w));
            } else if same_length(nd, dist[w]) {
                path_count[w] += path_count[v];
                preds[w].push((v, edge));
            }
        }
    }
    ShortestPathDag {
        source,
        dist,
        path_count,
        preds,
        order,
    }
}
