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

//! Descriptive statistics of a network.

use serde::{Deserialize, Serialize};

use super::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub k_mean: f64,
    /// Pearson correlation of the degrees at the two ends of an edge. Zero
    /// when every edge joins nodes of the same degree.
    pub assortativity: f64,
    /// Global clustering coefficient (transitivity), unweighted.
    pub clustering: f64,
    /// Discrete power-law exponent of the degree distribution, `x_min` at the
    /// smallest positive degree. NaN when fewer than two distinct degrees.
    pub alpha_k: f64,
    /// Continuous power-law exponent of the edge weights, `x_min` at the
    /// smallest weight. NaN when all weights are equal.
    pub alpha_w: f64,
}

/// Computes [`NetworkStats`]. Panics on an empty graph.
pub fn network_stats(g: &WeightedGraph) -> NetworkStats {
    assert!(!g.is_empty(), "network_stats of an empty graph");
    let n = g.node_count();
    let degrees = g.degrees();
    let k_min = *degrees.iter().min().unwrap();
    let k_max = *degrees.iter().max().unwrap();
    let k_mean = 2.0 * g.edge_count() as f64 / n as f64;

    let positive: Vec<f64> = degrees.iter().filter(|&&d| d > 0).map(|&d| d as f64).collect();
    let weights: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();

    NetworkStats {
        node_count: n,
        edge_count: g.edge_count(),
        k_min,
        k_max,
        k_mean,
        assortativity: degree_assortativity(g, &degrees),
        clustering: transitivity(g),
        alpha_k: discrete_power_law_mle(&positive),
        alpha_w: continuous_power_law_mle(&weights),
    }
}

fn degree_assortativity(g: &WeightedGraph, degrees: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let (mut prod, mut sum, mut sq) = (0.0, 0.0, 0.0);
    for e in g.edges() {
        let (a, b) = (degrees[e.u] as f64, degrees[e.v] as f64);
        prod += a * b;
        sum += 0.5 * (a + b);
        sq += 0.5 * (a * a + b * b);
    }
    let mean = sum / m;
    let num = prod / m - mean * mean;
    let den = sq / m - mean * mean;
    if den.abs() < 1e-12 {
        0.0
    } else {
        (num / den).clamp(-1.0, 1.0)
    }
}

fn transitivity(g: &WeightedGraph) -> f64 {
    if g.node_count() < 3 {
        return 0.0;
    }
    let mut triangles = 0usize;
    for e in g.edges() {
        // count each triangle once, at its two smallest vertices
        let (a, b) = (g.neighbor_ids(e.u), g.neighbor_ids(e.v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i] > e.v {
                        triangles += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    let triples: usize = (0..g.node_count())
        .map(|i| {
            let d = g.degree(i);
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    }
}

/// Hurwitz zeta `sum_{k>=0} (q + k)^-s` for `s > 1`, `q > 0`, via a direct
/// partial sum and an Euler-Maclaurin tail.
fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const TERMS: usize = 16;
    // B_2k / (2k)!
    const B: [f64; 5] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
    ];
    let head: f64 = (0..TERMS).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + TERMS as f64;
    let mut tail = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) times a^(-s-2k+1)
    let mut fact = s;
    let mut pow = a.powf(-s - 1.0);
    for (k, b) in B.iter().enumerate() {
        tail += b * fact * pow;
        let j = 2 * k as i32 + 1;
        fact *= (s + j as f64) * (s + j as f64 + 1.0);
        pow /= a * a;
    }
    head + tail
}

/// Exact discrete power-law MLE: maximizes
/// `-alpha * sum(ln x) - n * ln zeta(alpha, x_min)` by golden-section search.
pub(crate) fn discrete_power_law_mle(xs: &[f64]) -> f64 {
    let Some(x_min) = xs.iter().copied().reduce(f64::min) else {
        return f64::NAN;
    };
    if xs.iter().all(|&x| x == x_min) {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let log_sum: f64 = xs.iter().map(|x| x.ln()).sum();
    let nll = |alpha: f64| alpha * log_sum + n * hurwitz_zeta(alpha, x_min).ln();
    golden_min(nll, 1.0 + 1e-6, 8.0)
}

/// Continuous power-law MLE `1 + n / sum ln(x / x_min)`.
pub(crate) fn continuous_power_law_mle(xs: &[f64]) -> f64 {
    let Some(x_min) = xs.iter().copied().reduce(f64::min) else {
        return f64::NAN;
    };
    let s: f64 = xs.iter().map(|x| (x / x_min).ln()).sum();
    if s <= 0.0 {
        return f64::NAN;
    }
    1.0 + xs.len() as f64 / s
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-9 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Newman modularity of the graph's attached partition, ignoring weights.
/// `None` when the graph has no communities or no edges.
pub fn modularity(g: &WeightedGraph) -> Option<f64> {
    let communities = g.communities()?;
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return None;
    }
    let groups = communities.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0.0; groups];
    let mut degree_sum = vec![0.0; groups];
    for e in g.edges() {
        if communities[e.u] == communities[e.v] {
            internal[communities[e.u]] += 1.0;
        }
    }
    for (i, &c) in communities.iter().enumerate() {
        degree_sum[c] += g.degree(i) as f64;
    }
    Some(
        internal
            .iter()
            .zip(&degree_sum)
            .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
            .sum(),
    )
}
