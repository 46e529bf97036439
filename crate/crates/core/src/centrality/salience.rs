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

use super::betweenness::SOURCE_CHUNK;
use super::paths::shortest_path_dag;
use super::{DistanceMode, EdgeScores, Measure, NodeScores};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Fraction of roots whose shortest-path tree contains each edge. An edge is
/// in the tree of root `r` when it lies on at least one shortest path from
/// `r`.
pub fn edge_salience(g: &WeightedGraph, mode: DistanceMode) -> EdgeScores {
    let n = g.node_count();
    let m = g.edge_count();
    if n == 0 {
        return EdgeScores { values: Vec::new() };
    }
    let roots: Vec<usize> = (0..n).collect();
    // counts are integers, so the reduction order cannot change the result
    let counts = roots
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut hits = vec![0u32; m];
            for &r in chunk {
                let dag = shortest_path_dag(g, r, mode);
                for preds in &dag.preds {
                    for &(_, edge) in preds {
                        hits[edge] += 1;
                    }
                }
            }
            hits
        })
        .reduce(
            || vec![0u32; m],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    EdgeScores {
        values: counts.into_iter().map(|c| c as f64 / n as f64).collect(),
    }
}

/// Sum of the salience of the edges incident to each node.
pub fn node_salience(g: &WeightedGraph, mode: DistanceMode) -> NodeScores {
    node_salience_from(g, &edge_salience(g, mode))
}

pub(crate) fn node_salience_from(g: &WeightedGraph, edges: &EdgeScores) -> NodeScores {
    let values = (0..g.node_count())
        .map(|i| g.incident(i).map(|(_, _, id)| edges.values[id]).sum())
        .collect();
    NodeScores::new(Measure::Salience, values)
}

/// Subgraph of the edges with salience at least `threshold`, with their
/// endpoints. May be empty.
pub fn high_salience_skeleton(g: &WeightedGraph, threshold: f64, mode: DistanceMode) -> Result<WeightedGraph> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Param(format!(
            "salience threshold must lie in (0, 1], got {threshold}"
        )));
    }
    let salience = edge_salience(g, mode);
    let keep: Vec<bool> = salience.values.iter().map(|&s| s >= threshold).collect();
    Ok(g.edge_subgraph(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_edges_appear_in_two_of_three_trees() {
        for v in edge_salience(&triangle(), DistanceMode::Hop).values {
            assert!((v - 2.0 / 3.0).abs() < 1e-15);
        }
        for v in node_salience(&triangle(), DistanceMode::Hop).values {
            assert!((v - 4.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn path_salience_equals_degree() {
        let p3 = WeightedGraph::from_edges(3, [(0, 1, 2.0), (1, 2, 0.3)]).unwrap();
        assert_eq!(node_salience(&p3, DistanceMode::ReciprocalWeight).values, vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn skeleton_of_triangle_is_empty() {
        let hss = high_salience_skeleton(&triangle(), 0.9, DistanceMode::Hop).unwrap();
        assert_eq!(hss.node_count(), 0);
        assert_eq!(hss.edge_count(), 0);
    }

    #[test]
    fn skeleton_rejects_bad_threshold() {
        assert!(high_salience_skeleton(&triangle(), 0.0, DistanceMode::Hop).is_err());
        assert!(high_salience_skeleton(&triangle(), 1.5, DistanceMode::Hop).is_err());
    }

    #[test]
    fn lookup_by_endpoints() {
        let g = WeightedGraph::from_unit_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = edge_salience(&g, DistanceMode::Hop);
        assert_eq!(s.get(&g, 2, 1), Some(1.0));
        assert_eq!(s.get(&g, 0, 2), None);
    }
}
