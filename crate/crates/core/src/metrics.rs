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


//! Population observables: mean opinion, captured fraction, histograms,
//! opinion clusters and density-over-time matrices.

use serde::{Deserialize, Serialize};

/// Distance under which an opinion counts as captured by the target.
pub const NEAR_TOL: f64 = 0.05;
pub const DEFAULT_BINS: usize = 50;
/// Largest gap between sorted opinions inside one cluster.
pub const CLUSTER_GAP: f64 = 0.05;
/// Smallest share of the population that makes a cluster a main one.
pub const MAIN_CLUSTER_SHARE: f64 = 0.01;

pub fn mean_opinion(opinions: &[f64]) -> f64 {
    debug_assert!(!opinions.is_empty(), "mean of an empty population");
    opinions.iter().sum::<f64>() / opinions.len() as f64
}

/// Share of opinions strictly closer than `tol` to `target`.
pub fn fraction_near(opinions: &[f64], target: f64, tol: f64) -> f64 {
    if opinions.is_empty() {
        return 0.0;
    }
    let near = opinions.iter().filter(|&&x| (x - target).abs() < tol).count();
    near as f64 / opinions.len() as f64
}

/// Bin index of `x` among `bins` equal bins on [0, 1]. Bins are half-open
/// except the last, which also takes 1.0; values outside [0, 1] are clamped.
pub fn bin_of(x: f64, bins: usize) -> usize {
    let b = (x * bins as f64).floor();
    if b <= 0.0 {
        0
    } else {
        (b as usize).min(bins - 1)
    }
}

pub fn histogram(opinions: &[f64], bins: usize) -> Vec<usize> {
    assert!(bins >= 1, "histogram needs at least one bin");
    let mut counts = vec![0; bins];
    for &x in opinions {
        counts[bin_of(x, bins)] += 1;
    }
    counts
}

/// Number of main opinion clusters, using the default minimum share.
pub fn count_clusters(opinions: &[f64], gap: f64) -> usize {
    count_clusters_with(opinions, gap, MAIN_CLUSTER_SHARE)
}

/// Sorts the opinions and cuts wherever two consecutive values are more
/// than `gap` apart. Clusters holding fewer than `min_share * N` opinions
/// are not counted.
pub fn count_clusters_with(opinions: &[f64], gap: f64, min_share: f64) -> usize {
    assert!(gap > 0.0, "cluster gap must be positive");
    if opinions.is_empty() {
        return 0;
    }
    let mut sorted = opinions.to_vec();
    sorted.sort_by(f64::total_cmp);
    let min_size = min_share * sorted.len() as f64;
    let mut count = 0;
    let mut size = 1;
    for w in sorted.windows(2) {
        if w[1] - w[0] > gap {
            if size as f64 >= min_size {
                count += 1;
            }
            size = 0;
        }
        size += 1;
    }
    if size as f64 >= min_size {
        count += 1;
    }
    count
}

/// One row per snapshot: its histogram normalized to unit mass.
pub fn density_matrix<S: AsRef<[f64]>>(snapshots: &[S], bins: usize) -> Vec<Vec<f64>> {
    snapshots
        .iter()
        .map(|s| {
            let s = s.as_ref();
            let total = s.len().max(1) as f64;
            histogram(s, bins).into_iter().map(|c| c as f64 / total).collect()
        })
        .collect()
}

/// Elementwise mean of equally shaped matrices, truncated to the shortest
/// one so runs that stopped early still line up in time.
pub fn mean_matrix(matrices: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let Some(rows) = matrices.iter().map(Vec::len).min() else {
        return Vec::new();
    };
    let k = matrices.len() as f64;
    (0..rows)
        .map(|r| {
            let cols = matrices[0][r].len();
            (0..cols).map(|c| matrices.iter().map(|m| m[r][c]).sum::<f64>() / k).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpinionSummary {
    pub mean: f64,
    pub fraction_near_target: f64,
    pub histogram: Vec<usize>,
    pub cluster_count: usize,
}

impl OpinionSummary {
    /// Summary with the default tolerance, bin count and cluster rule.
    pub fn new(opinions: &[f64], target: f64) -> Self {
        OpinionSummary {
            mean: mean_opinion(opinions),
            fraction_near_target: fraction_near(opinions, target, NEAR_TOL),
            histogram: histogram(opinions, DEFAULT_BINS),
            cluster_count: count_clusters(opinions, CLUSTER_GAP),
        }
    }
}
