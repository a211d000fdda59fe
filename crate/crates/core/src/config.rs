// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "infrastructure": { "inps": [...], "links": {"uniform": {...}}, "alpha": [...],
//!                       "beta": 15.0, "v_base": 0.07, "deployment_cost": [[...]] },
//!   "service_types": [ { "failure_cap": 0.04, "departure_prob": 0.5, ... } ],
//!   "mdp": { "gamma": 0.9, "num_arrangements": 10, ... },
//!   "sim": { "slots": 10000, "seed": 0 }
//! }
//! ```
//!
//! `mdp` and `sim` are optional; omitted fields take their defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::StateSpace;
use crate::model::{Infrastructure, ServiceCatalog};
use crate::policy::SolverParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimParams {
    pub slots: u64,
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams { slots: 10_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub infrastructure: Infrastructure,
    pub service_types: ServiceCatalog,
    #[serde(default)]
    pub mdp: SolverParams,
    #[serde(default)]
    pub sim: SimParams,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.service_types.validate(&self.infrastructure)?;
        self.mdp.validate()?;
        StateSpace::new(&self.service_types, self.mdp.max_states)?;
        if self.sim.slots == 0 {
            return Err(Error::InvalidInput("sim.slots must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
}
