//! TOML run description for `simulate`.
//!
//! ```toml
//! case = 1
//! seed = 0
//! n = 128
//!
//! [sim]
//! re = 10000.0
//! n_steps = 600
//! snapshot_interval = 5
//! collect_count = 30
//! ```
//!
//! Every key is optional; omitted keys take the defaults below.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{preset, JetConfig};
use crate::solver::SimConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Jet spacing preset, 1 or 2.
    pub case: u32,
    pub seed: u64,
    /// Grid points per side.
    pub n: usize,
    pub sim: SimConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            case: 1,
            seed: 0,
            n: 128,
            sim: SimConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn jet(&self) -> Result<JetConfig> {
        let jet = JetConfig {
            n: self.n,
            seed: self.seed,
            ..preset(self.case)?
        };
        jet.validate()?;
        Ok(jet)
    }

    pub fn validate(&self) -> Result<()> {
        self.jet()?;
        self.sim.validate()
    }
}

pub fn parse_run_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_run_config(path: &Path) -> Result<RunConfig> {
    parse_run_config(&std::fs::read_to_string(path)?)
}
