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

//! Parallel protocol runs and the statistics used on their results.

use std::collections::BTreeSet;

use anyhow::{bail, Result};
use blindlattice_core::adversary::StrategySpec;
use blindlattice_core::analysis::{trial_accepts, AcceptanceEstimate};
use blindlattice_core::protocol::{run_protocol, Branch, Circuit, Message, ProtocolConfig, Transcript};
use blindlattice_core::rng::trial_seed;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Same trials and seeds as the sequential estimator, run on all cores.
pub fn estimate_acceptance_parallel(
    circuit: &Circuit,
    config: &ProtocolConfig,
    strategy: &StrategySpec,
    trials: usize,
    seed: u64,
) -> Result<AcceptanceEstimate> {
    if trials == 0 {
        bail!("trials must be at least 1");
    }
    let accepted = (0..trials as u64)
        .into_par_iter()
        .map(|i| trial_accepts(circuit, config, strategy, seed, i).map(usize::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(AcceptanceEstimate::from_counts(accepted, trials))
}

/// Runs `trials` protocols and folds each transcript with `f`.
pub fn map_runs<T, F>(
    circuit: &Circuit,
    config: &ProtocolConfig,
    strategy: &StrategySpec,
    trials: usize,
    seed: u64,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Transcript) -> T + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut server = strategy.build();
            Ok(f(run_protocol(circuit, config, server.as_mut(), trial_seed(seed, i))?))
        })
        .collect()
}

/// Counts of honest decoded readouts `00, 01, 10, 11` (top wire first) on
/// the evaluate branch. Runs without a readout are not counted.
pub fn output_counts(circuit: &Circuit, config: &ProtocolConfig, trials: usize, seed: u64) -> Result<[u64; 4]> {
    let cfg = ProtocolConfig {
        force_branch: Some(Branch::Eval),
        expected: None,
        ..config.clone()
    };
    let decoded = map_runs(circuit, &cfg, &StrategySpec::Honest, trials, seed, |t| {
        t.decision.decoded
    })?;
    let mut counts = [0u64; 4];
    for [a, b] in decoded.into_iter().flatten() {
        counts[usize::from(a) * 2 + usize::from(b)] += 1;
    }
    Ok(counts)
}

/// Angle histogram (by `k`) of every measurement the server is asked to
/// make without a preceding Hadamard.
pub fn planar_angle_counts(t: &Transcript) -> [u64; 8] {
    let mut counts = [0u64; 8];
    let mut hadamard: BTreeSet<_> = BTreeSet::new();
    let mut current = usize::MAX;
    for m in &t.messages {
        match m {
            Message::HOrder { round, handles } => {
                current = *round;
                hadamard = handles.iter().copied().collect();
            }
            Message::AngleList { round, angles, .. } => {
                if *round != current {
                    hadamard.clear();
                    current = *round;
                }
                for (h, a) in angles {
                    if !hadamard.contains(h) {
                        counts[a.k() as usize] += 1;
                    }
                }
            }
            _ => {}
        }
    }
    counts
}

pub fn pooled_angle_counts(circuit: &Circuit, config: &ProtocolConfig, runs: usize, seed: u64) -> Result<[u64; 8]> {
    let all = map_runs(circuit, config, &StrategySpec::Honest, runs, seed, |t| {
        planar_angle_counts(&t)
    })?;
    Ok(all.iter().fold([0u64; 8], |mut acc, c| {
        for (a, b) in acc.iter_mut().zip(c) {
            *a += b;
        }
        acc
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

fn chi_square(statistic: f64, dof: usize) -> Result<ChiSquare> {
    if dof == 0 {
        bail!("chi-square test needs at least two categories");
    }
    let dist = ChiSquared::new(dof as f64)?;
    Ok(ChiSquare {
        statistic,
        dof: dof as f64,
        p_value: dist.sf(statistic),
    })
}

/// Goodness of fit against the uniform distribution on the categories.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare> {
    let n: u64 = counts.iter().sum();
    if n == 0 || counts.len() < 2 {
        bail!("empty histogram");
    }
    let e = n as f64 / counts.len() as f64;
    let stat = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    chi_square(stat, counts.len() - 1)
}

/// Homogeneity of two histograms over the same categories (a 2×k
/// contingency table; categories empty in both are dropped).
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquare> {
    if a.len() != b.len() {
        bail!("histograms differ in length");
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        bail!("empty histogram");
    }
    let n = na + nb;
    let mut stat = 0.0;
    let mut cols = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cols += 1;
        for (obs, row) in [(x as f64, na), (y as f64, nb)] {
            let e = row * col / n;
            stat += (obs - e).powi(2) / e;
        }
    }
    chi_square(stat, cols.max(1) - 1)
}

/// Total variation distance between observed counts and a distribution.
pub fn total_variation_counts(counts: &[u64], dist: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return 1.0;
    }
    0.5 * counts
        .iter()
        .zip(dist)
        .map(|(&c, &p)| (c as f64 / n as f64 - p).abs())
        .sum::<f64>()
}
