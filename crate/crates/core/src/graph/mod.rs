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

//! Simple undirected weighted graphs with optional community labels.
//!
//! Node ids are dense `0..n`. Every graph also keeps the external label each
//! node had in the file it was loaded from (or its own id for graphs built in
//! memory), so that community files and saved edge lists stay addressable by
//! the ids a user sees.

mod io;
mod stats;

pub use self::io::{load_communities, load_edge_list, save_communities, save_edge_list};
pub use self::stats::{modularity, network_stats, NetworkStats};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Immutable simple undirected graph stored in compressed adjacency form.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<u64>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    edge_ids: Vec<usize>,
    communities: Option<Vec<usize>>,
}

impl WeightedGraph {
    /// Builds a graph on nodes `0..node_count` from `(u, v, w)` triples.
    ///
    /// Rejects self-loops, duplicate undirected edges, out-of-range ids and
    /// weights that are not strictly positive and finite.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let labels = (0..node_count as u64).collect();
        Self::from_labeled_edges(labels, edges)
    }

    /// Same as [`WeightedGraph::from_edges`] with every weight set to 1.
    pub fn from_unit_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(node_count, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub(crate) fn from_labeled_edges<I>(labels: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let n = labels.len();
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b, weight) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop on node {}", labels[a])));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::Validation(format!(
                    "edge ({}, {}) has non-positive or non-finite weight {weight}",
                    labels[a], labels[b]
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::Validation(format!(
                    "duplicate edge ({}, {})",
                    labels[u], labels[v]
                )));
            }
            list.push(Edge { u, v, weight });
        }
        list.sort_by_key(|e| (e.u, e.v));

        let mut degree = vec![0usize; n];
        for e in &list {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let m2 = offsets[n];
        let mut neighbors = vec![0; m2];
        let mut weights = vec![0.0; m2];
        let mut edge_ids = vec![0; m2];
        let mut cursor = offsets[..n].to_vec();
        // Edges are sorted by (u, v), so each row comes out sorted by neighbor.
        for (id, e) in list.iter().enumerate() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                let slot = cursor[a];
                neighbors[slot] = b;
                weights[slot] = e.weight;
                edge_ids[slot] = id;
                cursor[a] += 1;
            }
        }
        for i in 0..n {
            let range = offsets[i]..offsets[i + 1];
            let mut row: Vec<_> = range
                .clone()
                .map(|s| (neighbors[s], weights[s], edge_ids[s]))
                .collect();
            row.sort_by_key(|r| r.0);
            for (s, (j, w, id)) in range.zip(row) {
                neighbors[s] = j;
                weights[s] = w;
                edge_ids[s] = id;
            }
        }

        Ok(WeightedGraph {
            labels,
            edges: list,
            offsets,
            neighbors,
            weights,
            edge_ids,
            communities: None,
        })
    }

    /// Attaches one community id per node.
    pub fn with_communities(mut self, communities: Vec<usize>) -> Result<Self> {
        if communities.len() != self.node_count() {
            return Err(Error::Communities(format!(
                "expected {} labels, got {}",
                self.node_count(),
                communities.len()
            )));
        }
        self.communities = Some(communities);
        Ok(self)
    }

    pub fn without_communities(mut self) -> Self {
        self.communities = None;
        self
    }

    /// Returns a copy whose edge weights are replaced, in `edges()` order.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Validation(format!(
                "expected {} weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let g = Self::from_labeled_edges(
            self.labels.clone(),
            self.edges.iter().zip(weights).map(|(e, &w)| (e.u, e.v, w)),
        )?;
        Ok(WeightedGraph {
            communities: self.communities.clone(),
            ..g
        })
    }

    /// Subgraph made of the edges flagged in `keep` (indexed like `edges()`)
    /// and their endpoints. Nodes left without edges are dropped; survivors
    /// are renumbered in their original order and keep labels and communities.
    pub fn edge_subgraph(&self, keep: &[bool]) -> Self {
        assert_eq!(keep.len(), self.edges.len());
        let mut used = vec![false; self.node_count()];
        for (e, _) in self.edges.iter().zip(keep).filter(|(_, &k)| k) {
            used[e.u] = true;
            used[e.v] = true;
        }
        let mut remap = vec![usize::MAX; self.node_count()];
        let mut labels = Vec::new();
        let mut communities = Vec::new();
        for (i, _) in used.iter().enumerate().filter(|(_, &u)| u) {
            remap[i] = labels.len();
            labels.push(self.labels[i]);
            if let Some(c) = &self.communities {
                communities.push(c[i]);
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| (remap[e.u], remap[e.v], e.weight));
        let g = Self::from_labeled_edges(labels, edges).expect("subgraph of a valid graph");
        WeightedGraph {
            communities: self.communities.as_ref().map(|_| communities),
            ..g
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Edges with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn communities(&self) -> Option<&[usize]> {
        self.communities.as_deref()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn strength(&self, i: usize) -> f64 {
        self.neighbor_weights(i).iter().sum()
    }

    /// Neighbor ids of `i` in ascending order.
    pub fn neighbor_ids(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Weights aligned with [`WeightedGraph::neighbor_ids`].
    pub fn neighbor_weights(&self, i: usize) -> &[f64] {
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }

    /// `(neighbor, weight)` pairs of `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbor_ids(i)
            .iter()
            .copied()
            .zip(self.neighbor_weights(i).iter().copied())
    }

    /// `(neighbor, weight, edge index)` triples of `i`.
    pub fn incident(&self, i: usize) -> impl Iterator<Item = (usize, f64, usize)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        range.map(move |s| (self.neighbors[s], self.weights[s], self.edge_ids[s]))
    }

    /// Weight of edge `{i, j}`, if present.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let ids = self.neighbor_ids(i);
        ids.binary_search(&j)
            .ok()
            .map(|pos| self.neighbor_weights(i)[pos])
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn strengths(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.strength(i)).collect()
    }
}
