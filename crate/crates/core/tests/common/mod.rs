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


//! Brute-force reference implementations shared by the integration tests.
//! They favour obviousness over speed and share no code with the library
//! beyond the graph container.

#![allow(dead_code)]

use rand::Rng;
use stubborn_hk::centrality::DistanceMode;
use stubborn_hk::WeightedGraph;

pub const TIE_TOL: f64 = 1e-12;

pub fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs())
}

/// Erdős–Rényi graph with `n` nodes and edge probability `p`. With
/// `discrete` weights come from {0.5, 1, 2} so shortest-path ties occur;
/// otherwise from U(0.1, 2).
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, discrete: bool) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                let w = if discrete {
                    [0.5, 1.0, 2.0][rng.random_range(0..3)]
                } else {
                    rng.random_range(0.1..2.0)
                };
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

/// Random recursive tree on `n` nodes with random weights.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> WeightedGraph {
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(0.1..3.0))).collect();
    WeightedGraph::from_edges(n, edges).unwrap()
}

pub fn dense_weights(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut w = vec![vec![0.0; n]; n];
    for e in g.edges() {
        w[e.u][e.v] = e.weight;
        w[e.v][e.u] = e.weight;
    }
    w
}

fn length(mode: DistanceMode, w: f64) -> f64 {
    match mode {
        DistanceMode::Hop => 1.0,
        DistanceMode::ReciprocalWeight => 1.0 / w,
    }
}

/// Every simple path from `s` to `t` with its length.
fn simple_paths(w: &[Vec<f64>], mode: DistanceMode, s: usize, t: usize) -> Vec<(Vec<usize>, f64)> {
    fn walk(
        w: &[Vec<f64>],
        mode: DistanceMode,
        t: usize,
        path: &mut Vec<usize>,
        len: f64,
        on: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        let u = *path.last().unwrap();
        if u == t {
            out.push((path.clone(), len));
            return;
        }
        for v in 0..w.len() {
            if w[u][v] > 0.0 && !on[v] {
                on[v] = true;
                path.push(v);
                walk(w, mode, t, path, len + length(mode, w[u][v]), on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; w.len()];
    on[s] = true;
    let mut out = Vec::new();
    walk(w, mode, t, &mut vec![s], 0.0, &mut on, &mut out);
    out
}

/// Betweenness over unordered pairs by enumerating all shortest paths.
pub fn betweenness_by_enumeration(g: &WeightedGraph, mode: DistanceMode) -> Vec<f64> {
    let n = g.node_count();
    let w = dense_weights(g);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = simple_paths(&w, mode, s, t);
            let Some(best) = paths.iter().map(|p| p.1).min_by(f64::total_cmp) else {
                continue;
            };
            let shortest: Vec<&Vec<usize>> = paths.iter().filter(|p| same(p.1, best)).map(|p| &p.0).collect();
            let total = shortest.len() as f64;
            for path in &shortest {
                for &v in &path[1..path.len() - 1] {
                    bc[v] += 1.0 / total;
                }
            }
        }
    }
    bc
}

/// All-pairs distances by Floyd–Warshall.
pub fn all_distances(g: &WeightedGraph, mode: DistanceMode) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let w = dense_weights(g);
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if w[i][j] > 0.0 {
                d[i][j] = length(mode, w[i][j]);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Edge salience: share of roots for which the edge lies on a shortest path.
pub fn salience_by_distances(g: &WeightedGraph, mode: DistanceMode) -> Vec<f64> {
    let n = g.node_count();
    let d = all_distances(g, mode);
    g.edges()
        .iter()
        .map(|e| {
            let len = length(mode, e.weight);
            let hits = (0..n)
                .filter(|&r| {
                    let tight = |a: usize, b: usize| d[r][a].is_finite() && same(d[r][a] + len, d[r][b]);
                    tight(e.u, e.v) || tight(e.v, e.u)
                })
                .count();
            hits as f64 / n as f64
        })
        .collect()
}

/// s-coreness by sweeping the threshold: at each level the smallest residual
/// strength `m` is found, every node still present gets coreness `m`, and
/// all nodes with residual strength at most `m` are peeled away.
pub fn s_coreness_by_sweep(g: &WeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    let w = dense_weights(g);
    let mut alive = vec![true; n];
    let mut core = vec![0.0; n];
    let residual = |alive: &[bool], i: usize| -> f64 { (0..n).filter(|&j| alive[j]).map(|j| w[i][j]).sum() };
    while alive.iter().any(|&a| a) {
        let m = (0..n)
            .filter(|&i| alive[i])
            .map(|i| residual(&alive, i))
            .min_by(f64::total_cmp)
            .unwrap();
        for i in 0..n {
            if alive[i] {
                core[i] = m;
            }
        }
        loop {
            let doomed: Vec<usize> = (0..n)
                .filter(|&i| alive[i] && residual(&alive, i) <= m + TIE_TOL * m.abs().max(1.0))
                .collect();
            if doomed.is_empty() {
                break;
            }
            for i in doomed {
                alive[i] = false;
            }
        }
    }
    core
}

/// PageRank from the linear system `(I - d M) x = (1 - d)/N`, where `M`
/// moves mass along weighted out-links and spreads dangling mass uniformly.
pub fn pagerank_by_solve(g: &WeightedGraph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let w = dense_weights(g);
    let strength: Vec<f64> = w.iter().map(|r| r.iter().sum()).collect();
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            let m = if strength[j] > 0.0 { w[j][i] / strength[j] } else { 1.0 / n as f64 };
            a[i][j] = if i == j { 1.0 } else { 0.0 } - damping * m;
        }
        a[i][n] = (1.0 - damping) / n as f64;
    }
    solve(a)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
pub fn solve(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        a.swap(col, piv);
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

/// One synchronous HK update evaluated node by node from the dense weight
/// matrix: `x_i' = sum_j w_ji x_j / sum_j w_ji` over neighbours within
/// `eps_i`, self appended last at unit weight when `include_self`.
pub fn hk_step_direct(
    g: &WeightedGraph,
    x: &[f64],
    eps: &[f64],
    stubborn: &[usize],
    value: f64,
    include_self: bool,
) -> Vec<f64> {
    let n = x.len();
    let w = dense_weights(g);
    (0..n)
        .map(|i| {
            if stubborn.contains(&i) {
                return value;
            }
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n {
                if w[j][i] > 0.0 && (x[i] - x[j]).abs() <= eps[i] {
                    num += w[j][i] * x[j];
                    den += w[j][i];
                }
            }
            if include_self {
                num += x[i];
                den += 1.0;
            }
            if den > 0.0 {
                num / den
            } else {
                x[i]
            }
        })
        .collect()
}

/// Relabels `g` so node `i` becomes `perm[i]`.
pub fn permute(g: &WeightedGraph, perm: &[usize]) -> WeightedGraph {
    WeightedGraph::from_edges(g.node_count(), g.edges().iter().map(|e| (perm[e.u], perm[e.v], e.weight))).unwrap()
}
