// Copyright 2026 The blindlattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use libm::sqrt;

use super::AnalysisError;
use crate::adversary::StrategySpec;
use crate::protocol::{run_protocol, Circuit, ProtocolConfig};
use crate::rng::trial_seed;

/// Two-sided 95% normal quantile.
pub const WILSON_Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AcceptanceEstimate {
    pub trials: usize,
    pub accepted: usize,
    pub rate: f64,
    pub ci95: (f64, f64),
}

impl AcceptanceEstimate {
    pub fn from_counts(accepted: usize, trials: usize) -> AcceptanceEstimate {
        AcceptanceEstimate {
            trials,
            accepted,
            rate: accepted as f64 / trials as f64,
            ci95: wilson_interval(accepted, trials, WILSON_Z95),
        }
    }

    /// Binomial standard error of the rate.
    pub fn std_error(&self) -> f64 {
        sqrt(self.rate * (1.0 - self.rate) / self.trials as f64)
    }
}

/// Trial `index` of a batch: a fresh strategy and the seed `seed + index`.
pub fn trial_accepts(
    circuit: &Circuit,
    config: &ProtocolConfig,
    strategy: &StrategySpec,
    seed: u64,
    index: u64,
) -> Result<bool, AnalysisError> {
    let mut server = strategy.build();
    Ok(run_protocol(circuit, config, server.as_mut(), trial_seed(seed, index))?.accepted())
}

/// Runs `trials` independent protocol runs one after another.
pub fn estimate_acceptance(
    circuit: &Circuit,
    config: &ProtocolConfig,
    strategy: &StrategySpec,
    trials: usize,
    seed: u64,
) -> Result<AcceptanceEstimate, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let mut accepted = 0;
    for i in 0..trials {
        accepted += usize::from(trial_accepts(circuit, config, strategy, seed, i as u64)?);
    }
    Ok(AcceptanceEstimate::from_counts(accepted, trials))
}
