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

//! LFR-style weighted benchmark networks.
//!
//! Generation runs in three stages: a power-law degree sequence, power-law
//! community sizes with nodes assigned to communities, and stub matching
//! inside and between communities. Weights are then fitted so that node
//! strengths follow `s_i = k_i^beta` with a fraction `mu_w` of each node's
//! strength on edges leaving its community.

use std::collections::HashSet;

use log::debug;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_distr::LogNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LfrParams {
    pub n: usize,
    pub k_mean: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub tau_degree: f64,
    pub tau_community: f64,
    pub c_min: usize,
    pub c_max: usize,
    /// Fraction of each node's links leaving its community.
    pub mu_topo: f64,
    /// Fraction of each node's strength leaving its community.
    pub mu_w: f64,
    pub beta: f64,
    pub seed: u64,
    /// Proportional-fitting sweeps used by [`assign_weights`].
    pub weight_sweeps: usize,
    /// Log-normal shape of the random factor on starting weights.
    pub weight_dispersion: f64,
    pub max_retries: usize,
}

impl Default for LfrParams {
    fn default() -> Self {
        LfrParams {
            n: 1000,
            k_mean: 20.0,
            k_min: 6,
            k_max: 200,
            tau_degree: 2.0,
            tau_community: 1.0,
            c_min: 20,
            c_max: 50,
            mu_topo: 0.1,
            mu_w: 0.1,
            beta: 1.5,
            seed: 1,
            weight_sweeps: 20,
            weight_dispersion: 3.0,
            max_retries: 10,
        }
    }
}

impl LfrParams {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Param(m));
        if self.n == 0 {
            return err("n must be positive".into());
        }
        if !(self.k_min as f64 <= self.k_mean && self.k_mean <= self.k_max as f64) {
            return err(format!(
                "need k_min <= k_mean <= k_max, got {} / {} / {}",
                self.k_min, self.k_mean, self.k_max
            ));
        }
        if self.k_min == 0 || self.k_max >= self.n {
            return err(format!("need 1 <= k_min and k_max < n, got k_min={}, k_max={}", self.k_min, self.k_max));
        }
        if !(self.c_min >= 1 && self.c_min <= self.c_max) {
            return err(format!("need 1 <= c_min <= c_max, got {} / {}", self.c_min, self.c_max));
        }
        if self.n < self.c_min {
            return err(format!("n = {} is smaller than c_min = {}", self.n, self.c_min));
        }
        for (name, v) in [("mu_topo", self.mu_topo), ("mu_w", self.mu_w)] {
            if !(0.0..=1.0).contains(&v) {
                return err(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(self.beta > 0.0) {
            return err(format!("beta must be positive, got {}", self.beta));
        }
        if !(self.weight_dispersion >= 0.0 && self.weight_dispersion.is_finite()) {
            return err(format!("weight_dispersion must be non-negative, got {}", self.weight_dispersion));
        }
        if !(self.tau_degree > 0.0 && self.tau_community > 0.0) {
            return err("power-law exponents must be positive".into());
        }
        Ok(())
    }

    /// Parameters of instance `index` in a family sharing `master_seed`.
    pub fn instance(&self, master_seed: u64, index: usize) -> LfrParams {
        LfrParams {
            seed: seed::derive(master_seed, &["lfr-instance", &index.to_string()]),
            ..self.clone()
        }
    }
}

fn power_law_mean(lo: usize, hi: usize, tau: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for k in lo..=hi {
        let p = (k as f64).powf(-tau);
        num += k as f64 * p;
        den += p;
    }
    num / den
}

fn power_law(lo: usize, hi: usize, tau: f64) -> (Vec<usize>, WeightedIndex<f64>) {
    let support: Vec<usize> = (lo..=hi).collect();
    let weights: Vec<f64> = support.iter().map(|&k| (k as f64).powf(-tau)).collect();
    let dist = WeightedIndex::new(&weights).expect("non-empty positive weights");
    (support, dist)
}

/// Draws a degree sequence from a truncated discrete power law.
///
/// The sampling window starts as `[k_min, k_max]`; if its mean misses
/// `k_mean`, the lower edge is raised (or the upper edge lowered) to the
/// integer window whose mean is closest to the target. Draws are repeated
/// until the sample mean is within 5% of `k_mean`, and the sum is made even
/// by moving one random degree by one inside the window.
pub fn sample_degree_sequence<R: Rng + ?Sized>(p: &LfrParams, rng: &mut R) -> Result<Vec<usize>> {
    p.validate()?;
    let target = p.k_mean;
    let (mut lo, mut hi) = (p.k_min, p.k_max);
    let full = power_law_mean(lo, hi, p.tau_degree);
    if full < target {
        lo = (p.k_min..=p.k_max)
            .min_by(|&a, &b| {
                let da = (power_law_mean(a, hi, p.tau_degree) - target).abs();
                let db = (power_law_mean(b, hi, p.tau_degree) - target).abs();
                da.total_cmp(&db)
            })
            .unwrap();
    } else if full > target {
        hi = (p.k_min..=p.k_max)
            .min_by(|&a, &b| {
                let da = (power_law_mean(lo, a, p.tau_degree) - target).abs();
                let db = (power_law_mean(lo, b, p.tau_degree) - target).abs();
                da.total_cmp(&db)
            })
            .unwrap();
    }
    let window_mean = power_law_mean(lo, hi, p.tau_degree);
    if (window_mean - target).abs() > 0.05 * target {
        return Err(Error::Param(format!(
            "no degree window inside [{}, {}] reaches mean {target} with exponent {} (closest {window_mean:.2})",
            p.k_min, p.k_max, p.tau_degree
        )));
    }
    debug!("degree window [{lo}, {hi}], expected mean {window_mean:.3}");

    let (support, dist) = power_law(lo, hi, p.tau_degree);
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let mut degrees: Vec<usize> = (0..p.n).map(|_| support[dist.sample(rng)]).collect();
        let mean = degrees.iter().sum::<usize>() as f64 / p.n as f64;
        if (mean - target).abs() > 0.05 * target {
            continue;
        }
        if degrees.iter().sum::<usize>() % 2 == 1 {
            let movable: Vec<usize> = (0..p.n).filter(|&i| degrees[i] > lo).collect();
            if let Some(&i) = movable.choose(rng) {
                degrees[i] -= 1;
            } else {
                let i = rng.random_range(0..p.n);
                degrees[i] += 1;
            }
        }
        return Ok(degrees);
    }
    Err(Error::Param(format!(
        "degree sample mean stayed outside 5% of {target} after {ATTEMPTS} draws"
    )))
}

/// Draws community sizes in `[c_min, c_max]` summing exactly to `n`.
pub fn sample_community_sizes<R: Rng + ?Sized>(p: &LfrParams, rng: &mut R) -> Result<Vec<usize>> {
    p.validate()?;
    let (c_min, c_max) = (p.c_min, p.c_max.min(p.n));
    let (support, dist) = power_law(c_min, c_max, p.tau_community);
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let mut sizes = Vec::new();
        let mut total = 0;
        while total < p.n {
            let s = support[dist.sample(rng)];
            sizes.push(s);
            total += s;
        }
        // shrink communities towards c_min, last drawn first
        let mut excess = total - p.n;
        for s in sizes.iter_mut().rev() {
            let cut = excess.min(*s - c_min);
            *s -= cut;
            excess -= cut;
            if excess == 0 {
                break;
            }
        }
        if excess == 0 {
            return Ok(sizes);
        }
    }
    Err(Error::Param(format!(
        "cannot split n = {} into communities of size [{c_min}, {c_max}]",
        p.n
    )))
}

/// Places nodes into communities. Nodes are handled in decreasing order of
/// internal degree and go to a random community with room left, preferring
/// communities large enough to host all their internal links.
fn assign_communities<R: Rng + ?Sized>(internal: &[usize], sizes: &[usize], rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..internal.len()).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| internal[b].cmp(&internal[a]));
    let mut free: Vec<usize> = sizes.to_vec();
    let mut membership = vec![0; internal.len()];
    for i in order {
        let fitting: Vec<usize> = (0..sizes.len())
            .filter(|&c| free[c] > 0 && sizes[c] > internal[i])
            .collect();
        let c = if let Some(&c) = fitting.choose(rng) {
            c
        } else {
            // no community can host every internal link; take the largest open one
            let largest = (0..sizes.len()).filter(|&c| free[c] > 0).map(|c| sizes[c]).max().unwrap();
            let candidates: Vec<usize> = (0..sizes.len())
                .filter(|&c| free[c] > 0 && sizes[c] == largest)
                .collect();
            *candidates.choose(rng).unwrap()
        };
        free[c] -= 1;
        membership[i] = c;
    }
    membership
}

/// Pairs stubs into simple edges. `allowed(a, b)` filters pairs, `existing`
/// holds edges already placed. Invalid pairs are repaired by swapping
/// endpoints with random other pairs; stubs that remain unmatched after
/// `passes` rounds are returned.
fn match_stubs<R: Rng + ?Sized>(
    stubs: &mut [usize],
    existing: &mut HashSet<(usize, usize)>,
    allowed: impl Fn(usize, usize) -> bool,
    passes: usize,
    rng: &mut R,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    stubs.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    let mut leftover: Vec<usize> = stubs.chunks_exact(2).remainder().to_vec();
    let mut placed = vec![false; pairs.len()];
    let mut bad = Vec::new();
    for (idx, &(a, b)) in pairs.iter().enumerate() {
        if a != b && allowed(a, b) && existing.insert(key(a, b)) {
            placed[idx] = true;
        } else {
            bad.push(idx);
        }
    }
    for _ in 0..passes {
        if bad.is_empty() {
            break;
        }
        let mut still = Vec::new();
        for idx in bad {
            let (a, b) = pairs[idx];
            let mut fixed = false;
            for _ in 0..50 {
                let other = rng.random_range(0..pairs.len());
                if other == idx || !placed[other] {
                    continue;
                }
                let (c, d) = pairs[other];
                let (x, y) = if rng.random_bool(0.5) { (c, d) } else { (d, c) };
                // propose (a, x) and (b, y) in place of (a, b) and (c, d)
                if a == x || b == y || !allowed(a, x) || !allowed(b, y) {
                    continue;
                }
                let (k1, k2) = (key(a, x), key(b, y));
                if k1 == k2 || existing.contains(&k1) || existing.contains(&k2) {
                    continue;
                }
                existing.remove(&key(c, d));
                existing.insert(k1);
                existing.insert(k2);
                pairs[other] = (a, x);
                pairs[idx] = (b, y);
                placed[idx] = true;
                fixed = true;
                break;
            }
            if !fixed {
                still.push(idx);
            }
        }
        bad = still;
    }
    for idx in bad {
        leftover.push(pairs[idx].0);
        leftover.push(pairs[idx].1);
    }
    let edges = pairs
        .into_iter()
        .zip(placed)
        .filter(|(_, ok)| *ok)
        .map(|(p, _)| p)
        .collect();
    (edges, leftover)
}

const REWIRING_PASSES: usize = 20;
/// Share of all stubs that may be dropped when external matching cannot be
/// completed without self-loops or repeated edges.
const MAX_DROPPED_STUB_SHARE: f64 = 0.005;

/// Wires a graph with the given degrees and community sizes. Each node keeps
/// `round((1 - mu_topo) * k_i)` of its links inside its community, capped at
/// the community size minus one; the rest go to other communities.
pub fn build_topology<R: Rng + ?Sized>(
    degrees: &[usize],
    community_sizes: &[usize],
    mu_topo: f64,
    rng: &mut R,
) -> Result<WeightedGraph> {
    let n = degrees.len();
    if community_sizes.iter().sum::<usize>() != n {
        return Err(Error::Param(format!(
            "community sizes sum to {}, expected {n}",
            community_sizes.iter().sum::<usize>()
        )));
    }
    if degrees.iter().sum::<usize>() % 2 == 1 {
        return Err(Error::Param("degree sum must be even".into()));
    }
    if !(0.0..=1.0).contains(&mu_topo) {
        return Err(Error::Param(format!("mu_topo must lie in [0, 1], got {mu_topo}")));
    }
    let multi = community_sizes.len() > 1;
    let mut internal: Vec<usize> = degrees
        .iter()
        .map(|&k| if multi { ((1.0 - mu_topo) * k as f64).round() as usize } else { k })
        .collect();
    let membership = assign_communities(&internal, community_sizes, rng);
    for i in 0..n {
        internal[i] = internal[i].min(community_sizes[membership[i]] - 1);
    }
    let mut external: Vec<usize> = (0..n).map(|i| degrees[i] - internal[i]).collect();

    let mut members = vec![Vec::new(); community_sizes.len()];
    for (i, &c) in membership.iter().enumerate() {
        members[c].push(i);
    }

    let mut existing = HashSet::new();
    let mut edges = Vec::new();
    for group in &members {
        let mut stubs: Vec<usize> = group
            .iter()
            .flat_map(|&i| std::iter::repeat_n(i, internal[i]))
            .collect();
        if stubs.len() % 2 == 1 {
            // odd internal total: one stub of the node with most internal links goes outside
            let &i = group.iter().max_by_key(|&&i| (internal[i], std::cmp::Reverse(i))).unwrap();
            internal[i] -= 1;
            external[i] += 1;
            let pos = stubs.iter().position(|&s| s == i).unwrap();
            stubs.swap_remove(pos);
        }
        let (placed, left) = match_stubs(&mut stubs, &mut existing, |_, _| true, REWIRING_PASSES, rng);
        for s in left {
            internal[s] -= 1;
            external[s] += 1;
        }
        edges.extend(placed);
    }

    let total_stubs: usize = degrees.iter().sum();
    let mut stubs: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, external[i])).collect();
    let (placed, left) = if multi {
        match_stubs(
            &mut stubs,
            &mut existing,
            |a, b| membership[a] != membership[b],
            REWIRING_PASSES,
            rng,
        )
    } else {
        match_stubs(&mut stubs, &mut existing, |_, _| true, REWIRING_PASSES, rng)
    };
    edges.extend(placed);
    // unbalanced external stubs (few communities) become internal links
    let mut left_by_group = vec![Vec::new(); members.len()];
    for s in left {
        left_by_group[membership[s]].push(s);
    }
    let mut left = Vec::new();
    for mut group in left_by_group.into_iter().filter(|g| g.len() > 1) {
        let (placed, rest) = match_stubs(&mut group, &mut existing, |_, _| true, REWIRING_PASSES, rng);
        edges.extend(placed);
        left.extend(rest);
    }
    if left.len() as f64 > MAX_DROPPED_STUB_SHARE * total_stubs as f64 {
        return Err(Error::Generation {
            stage: "topology",
            msg: format!("{} of {total_stubs} stubs could not be matched", left.len()),
        });
    }
    if !left.is_empty() {
        debug!("dropped {} unmatched external stubs", left.len());
    }

    WeightedGraph::from_edges(n, edges.into_iter().map(|(a, b)| (a, b, 1.0)))?.with_communities(membership)
}

/// Fits edge weights so that each node's strength approaches `k_i^beta`,
/// with `(1 - mu_w)` of it on edges inside the node's community.
///
/// Weights start at `(t_i + t_j) / 2` with `t_i = k_i^(beta - 1)` the target
/// strength per link, times a log-normal factor of shape `dispersion` (zero
/// gives the plain deterministic start). Proportional fitting keeps the
/// ratios between weights around a node, so the factor sets how uneven a
/// node's ties end up. Each sweep then rescales every edge by the geometric
/// mean of its endpoints' correction factors, internal and external edges
/// separately.
pub fn assign_weights<R: Rng + ?Sized>(
    g: &WeightedGraph,
    beta: f64,
    mu_w: f64,
    sweeps: usize,
    dispersion: f64,
    rng: &mut R,
) -> Result<WeightedGraph> {
    let communities = g
        .communities()
        .ok_or_else(|| Error::Param("assign_weights needs a graph with communities".into()))?;
    if !(0.0..=1.0).contains(&mu_w) || !(beta > 0.0) {
        return Err(Error::Param(format!("invalid beta={beta} or mu_w={mu_w}")));
    }
    let n = g.node_count();
    let edges = g.edges();
    let is_internal: Vec<bool> = edges.iter().map(|e| communities[e.u] == communities[e.v]).collect();

    let mut target_in = vec![0.0; n];
    let mut target_out = vec![0.0; n];
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for (e, &inside) in edges.iter().zip(&is_internal) {
        for x in [e.u, e.v] {
            if inside {
                has_in[x] = true;
            } else {
                has_out[x] = true;
            }
        }
    }
    for i in 0..n {
        let k = g.degree(i);
        if k == 0 {
            continue;
        }
        let total = (k as f64).powf(beta);
        let (mut tin, mut tout) = ((1.0 - mu_w) * total, mu_w * total);
        if !has_out[i] && tout > 0.0 {
            debug!("node {i} has no external links; its external strength is kept inside");
            tin += tout;
            tout = 0.0;
        }
        if !has_in[i] && tin > 0.0 {
            debug!("node {i} has no internal links; its internal strength goes outside");
            tout += tin;
            tin = 0.0;
        }
        target_in[i] = tin;
        target_out[i] = tout;
    }

    let per_link: Vec<f64> = (0..n)
        .map(|i| (g.degree(i).max(1) as f64).powf(beta - 1.0))
        .collect();
    let noise = LogNormal::new(0.0, dispersion)
        .map_err(|_| Error::Param(format!("weight dispersion must be non-negative, got {dispersion}")))?;
    let mut w: Vec<f64> = edges
        .iter()
        .map(|e| {
            let base = 0.5 * (per_link[e.u] + per_link[e.v]);
            if dispersion > 0.0 { base * noise.sample(rng) } else { base }
        })
        .collect();

    for _ in 0..sweeps {
        let mut cur_in = vec![0.0; n];
        let mut cur_out = vec![0.0; n];
        for ((e, &inside), &x) in edges.iter().zip(&is_internal).zip(&w) {
            let cur = if inside { &mut cur_in } else { &mut cur_out };
            cur[e.u] += x;
            cur[e.v] += x;
        }
        let factor = |target: f64, cur: f64| if cur > 0.0 && target > 0.0 { target / cur } else { 1.0 };
        for ((e, &inside), x) in edges.iter().zip(&is_internal).zip(w.iter_mut()) {
            let (fu, fv) = if inside {
                (factor(target_in[e.u], cur_in[e.u]), factor(target_in[e.v], cur_in[e.v]))
            } else {
                (factor(target_out[e.u], cur_out[e.u]), factor(target_out[e.v], cur_out[e.v]))
            };
            *x *= (fu * fv).sqrt();
        }
    }
    g.with_weights(&w)
}

/// Community-size bounds able to host every node's internal links. When
/// `(1 - mu_topo) * k` of the best-connected node exceeds `c_max - 1`, the
/// upper bound is raised to fit it.
pub fn hosting_params(p: &LfrParams, degrees: &[usize]) -> LfrParams {
    let needed = degrees
        .iter()
        .map(|&k| ((1.0 - p.mu_topo) * k as f64).round() as usize + 1)
        .max()
        .unwrap_or(0);
    let c_max = p.c_max.max(needed).min(p.n);
    if c_max != p.c_max {
        debug!("community size bound raised from {} to {c_max} to host internal degrees", p.c_max);
    }
    LfrParams { c_max, ..p.clone() }
}

/// Generates one weighted benchmark network. Deterministic in `p`, seed
/// included; failed attempts are retried on the same random stream.
pub fn generate_lfr(p: &LfrParams) -> Result<WeightedGraph> {
    p.validate()?;
    let mut rng = seed::rng(p.seed);
    let mut last = None;
    for attempt in 0..=p.max_retries {
        let result = sample_degree_sequence(p, &mut rng).and_then(|degrees| {
            let sizes = sample_community_sizes(&hosting_params(p, &degrees), &mut rng)?;
            build_topology(&degrees, &sizes, p.mu_topo, &mut rng)
        });
        match result {
            Ok(g) => return assign_weights(&g, p.beta, p.mu_w, p.weight_sweeps, p.weight_dispersion, &mut rng),
            Err(e @ Error::Param(_)) => return Err(e),
            Err(e) => {
                debug!("attempt {attempt} failed: {e}");
                last = Some(e);
            }
        }
    }
    let msg = last.map_or_else(String::new, |e| e.to_string());
    Err(Error::Generation {
        stage: "retries exhausted",
        msg,
    })
}
