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

//! Stubborn agents in weighted Hegselmann-Krause opinion dynamics.
//!
//! The crate covers the whole experimental pipeline:
//!
//! * [`graph`]: weighted undirected graphs, edge-list and community files,
//!   descriptive network statistics;
//! * [`generator`]: LFR-style weighted benchmark networks with planted
//!   communities and the strength law `s_i = k_i^beta`;
//! * [`centrality`]: degree, strength, betweenness, PageRank, k-coreness,
//!   s-coreness, salience and the high-salience skeleton;
//! * [`dynamics`]: bounded-confidence updates with stubborn agents following
//!   a static or stepped opinion schedule;
//! * [`metrics`]: final-state observables (mean, captured fraction,
//!   histograms, cluster counts, density matrices);
//! * [`experiment`]: reproducible parameter sweeps and their CSV outputs;
//! * [`config`]: the TOML run configuration shared by the command line tool;
//! * [`cli`]: the `stubborn-hk` commands.

pub mod centrality;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod generator;
pub mod graph;
pub mod metrics;
pub mod seed;

pub use crate::error::{Error, Result};
pub use crate::graph::WeightedGraph;
