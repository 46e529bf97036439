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

//! Node rankings used to pick stubborn agents.
//!
//! Path-based measures (betweenness, salience) run one single-source
//! shortest-path search per node, in parallel, over a shared
//! [`ShortestPathDag`] engine. Edge lengths come from a [`DistanceMode`].

mod betweenness;
mod cores;
mod pagerank;
mod paths;
mod ranking;
mod salience;

pub use self::betweenness::betweenness;
pub use self::cores::{k_coreness, s_coreness};
pub use self::pagerank::{pagerank, pagerank_with};
pub use self::paths::{shortest_path_dag, ShortestPathDag};
pub use self::ranking::{rank_top_fraction, stubborn_count};
pub use self::salience::{edge_salience, high_salience_skeleton, node_salience};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// How edge weights turn into path lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    /// Every edge has length 1.
    Hop,
    /// Edge length `1 / w`: strong ties are short.
    #[default]
    ReciprocalWeight,
}

impl DistanceMode {
    #[inline]
    pub fn length(self, weight: f64) -> f64 {
        match self {
            DistanceMode::Hop => 1.0,
            DistanceMode::ReciprocalWeight => 1.0 / weight,
        }
    }
}

/// Node selection criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Degree,
    Strength,
    Betweenness,
    Pagerank,
    KCoreness,
    SCoreness,
    Salience,
    Random,
}

impl Measure {
    /// The seven structural measures, without `Random`.
    pub const CENTRALITIES: [Measure; 7] = [
        Measure::Degree,
        Measure::Strength,
        Measure::Betweenness,
        Measure::Pagerank,
        Measure::KCoreness,
        Measure::SCoreness,
        Measure::Salience,
    ];

    pub const ALL: [Measure; 8] = [
        Measure::Degree,
        Measure::Strength,
        Measure::Betweenness,
        Measure::Pagerank,
        Measure::KCoreness,
        Measure::SCoreness,
        Measure::Salience,
        Measure::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Strength => "strength",
            Measure::Betweenness => "betweenness",
            Measure::Pagerank => "pagerank",
            Measure::KCoreness => "k_coreness",
            Measure::SCoreness => "s_coreness",
            Measure::Salience => "salience",
            Measure::Random => "random",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown measure `{s}`")))
    }
}

/// One value per node, tagged with the measure that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeScores {
    pub measure: Measure,
    pub values: Vec<f64>,
}

impl NodeScores {
    pub fn new(measure: Measure, values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        NodeScores { measure, values }
    }

    /// Placeholder scores for uniform random selection.
    pub fn random(node_count: usize) -> Self {
        NodeScores::new(Measure::Random, vec![0.0; node_count])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One value in `[0, 1]` per edge, indexed like [`WeightedGraph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScores {
    pub values: Vec<f64>,
}

impl EdgeScores {
    /// Score of edge `{u, v}`, if it exists.
    pub fn get(&self, g: &WeightedGraph, u: usize, v: usize) -> Option<f64> {
        g.incident(u).find(|&(j, _, _)| j == v).map(|(_, _, id)| self.values[id])
    }
}

/// Settings shared by the centrality computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CentralityConfig {
    pub distance_mode: DistanceMode,
    pub damping: f64,
    pub pagerank_tol: f64,
    pub pagerank_max_iter: usize,
    pub hss_threshold: f64,
}

impl Default for CentralityConfig {
    fn default() -> Self {
        CentralityConfig {
            distance_mode: DistanceMode::ReciprocalWeight,
            damping: 0.85,
            pagerank_tol: 1e-10,
            pagerank_max_iter: 200,
            hss_threshold: 0.9,
        }
    }
}

pub fn degree(g: &WeightedGraph) -> NodeScores {
    NodeScores::new(Measure::Degree, g.degrees().into_iter().map(|d| d as f64).collect())
}

pub fn strength(g: &WeightedGraph) -> NodeScores {
    NodeScores::new(Measure::Strength, g.strengths())
}

/// Computes `measure` on `g`. `Random` yields placeholder zeros.
pub fn compute(g: &WeightedGraph, measure: Measure, cfg: &CentralityConfig) -> Result<NodeScores> {
    Ok(match measure {
        Measure::Degree => degree(g),
        Measure::Strength => strength(g),
        Measure::Betweenness => betweenness(g, cfg.distance_mode),
        Measure::Pagerank => pagerank_with(g, cfg.damping, cfg.pagerank_tol, cfg.pagerank_max_iter)?,
        Measure::KCoreness => k_coreness(g),
        Measure::SCoreness => s_coreness(g),
        Measure::Salience => node_salience(g, cfg.distance_mode),
        Measure::Random => NodeScores::random(g.node_count()),
    })
}
