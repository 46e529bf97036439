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


//! TOML run configuration shared by the command-line tool.
//!
//! Every section is optional and every key defaults to the value documented
//! on the owning type; unknown keys are rejected.
//!
//! ```toml
//! seed = 7
//! output_dir = "out"
//!
//! [lfr]
//! n = 1000
//!
//! [sweep]
//! instances = 3
//! measures = ["salience", "random"]
//! fractions = [0.001, 0.02]
//! runs_per_cell = 20
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityConfig, Measure};
use crate::dynamics::{InitSpec, Schedule, ScheduleKind, SimConfig};
use crate::error::{Error, Result};
use crate::experiment::{NetworkSource, SweepSpec};
use crate::generator::LfrParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; fixes every generated network and every run.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Worker threads for sweeps; 0 uses one per core.
    pub jobs: usize,
    /// Generator parameters. `lfr.seed` is replaced by a seed derived
    /// from `seed` and the network id.
    pub lfr: LfrParams,
    pub init: InitSpec,
    pub schedule: Schedule,
    pub sim: SimConfig,
    pub centrality: CentralityConfig,
    pub generate: GenerateConfig,
    pub simulate: SimulateConfig,
    pub sweep: SweepGrid,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            output_dir: PathBuf::from("out"),
            jobs: 0,
            lfr: LfrParams::default(),
            init: InitSpec::default(),
            schedule: Schedule::default(),
            sim: SimConfig::default(),
            centrality: CentralityConfig::default(),
            generate: GenerateConfig::default(),
            simulate: SimulateConfig::default(),
            sweep: SweepGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateConfig {
    pub instances: usize,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig { instances: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub strategy: ScheduleKind,
    /// No measure means no stubborn agents.
    pub measure: Option<Measure>,
    pub fraction: f64,
    pub runs: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            strategy: ScheduleKind::Static,
            measure: None,
            fraction: 0.01,
            runs: 1,
        }
    }
}

/// Grid part of a sweep. With no `networks`, `instances` networks are
/// generated from `[lfr]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub instances: usize,
    pub networks: Vec<NetworkSource>,
    pub strategies: Vec<ScheduleKind>,
    pub measures: Vec<Measure>,
    pub fractions: Vec<f64>,
    pub runs_per_cell: usize,
    pub snapshots: bool,
    pub bins: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        let spec = SweepSpec::default();
        SweepGrid {
            instances: 20,
            networks: Vec::new(),
            strategies: spec.strategies,
            measures: spec.measures,
            fractions: spec.fractions,
            runs_per_cell: spec.runs_per_cell,
            snapshots: spec.snapshots,
            bins: spec.bins,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| {
            let line = e
                .span()
                .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
            Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        let networks = if self.sweep.networks.is_empty() {
            vec![NetworkSource::generated(self.lfr.clone(), self.sweep.instances)]
        } else {
            self.sweep.networks.clone()
        };
        SweepSpec {
            networks,
            strategies: self.sweep.strategies.clone(),
            measures: self.sweep.measures.clone(),
            fractions: self.sweep.fractions.clone(),
            runs_per_cell: self.sweep.runs_per_cell,
            master_seed: self.seed,
            schedule: self.schedule,
            sim: self.sim,
            init: self.init,
            centrality: self.centrality.clone(),
            snapshots: self.sweep.snapshots,
            bins: self.sweep.bins,
        }
    }
}
