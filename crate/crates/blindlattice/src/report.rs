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

//! The reports behind each subcommand. Every report embeds the
//! configuration and seed it was produced from.

use anyhow::Result;
use blindlattice_core::adversary::StrategySpec;
use blindlattice_core::analysis::{
    average_input_density, consistency_report, epsilon_feasible_range, f_feasibility, premise_grid_check,
    q_lower_bound, BoundReport, ConsistencyReport, FeasibleRange, GridCheck,
};
use blindlattice_core::mbqc::{
    build_lattice, check_identity, commutation_identities, gate_identities, gate_pattern, verify_unit_implements_gate,
    Correction, GateLabel, IdentityCheck, PlacedGate, UnitReport, Wire,
};
use blindlattice_core::protocol::{run_protocol, Circuit, ProtocolConfig, Transcript, TrapTally};
use blindlattice_core::qsim::DensityMatrix;
use serde::Serialize;

use crate::config::{ConfigRecord, RunConfig};
use crate::montecarlo::{
    chi_square_two_sample, chi_square_uniform, estimate_acceptance_parallel, pooled_angle_counts, ChiSquare,
};
use crate::reference;

pub const IDENTITY_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-9;
pub const DENSITY_TOL: f64 = 1e-12;
pub const MIN_P_VALUE: f64 = 0.01;
/// Allowed `|f|` at the ends of the feasible range.
pub const ROOT_TOL: f64 = 1e-5;

/// The bit the decision compares against: the configured one, or the
/// deterministic output of direct simulation.
pub fn expected_bit(cfg: &RunConfig) -> Result<Option<bool>> {
    Ok(match cfg.expected {
        Some(b) => Some(b),
        None => reference::deterministic_bit(&cfg.circuit, cfg.output_wire.index())?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitRow {
    pub gate: PlacedGate,
    pub report: Option<UnitReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyGatesReport {
    pub config: ConfigRecord,
    pub identities: Vec<IdentityCheck>,
    pub units: Vec<UnitRow>,
    pub max_identity_infidelity: f64,
    pub max_unit_infidelity: f64,
    pub passed: bool,
}

pub fn verify_gates(cfg: &RunConfig) -> Result<VerifyGatesReport> {
    let mut identities = Vec::new();
    for id in gate_identities().iter().chain(&commutation_identities()) {
        identities.push(check_identity(id)?);
    }
    let max_identity_infidelity = identities
        .iter()
        .map(|c| c.max_infidelity.max(c.matrix_deviation))
        .fold(0.0, f64::max);
    let mut units = Vec::new();
    for wire in [Wire::Top, Wire::Bottom] {
        for label in GateLabel::ALL {
            let gate = PlacedGate::new(label, wire);
            let row = match verify_unit_implements_gate(gate) {
                Ok(r) => UnitRow {
                    gate,
                    report: Some(r),
                    error: None,
                },
                Err(e) => UnitRow {
                    gate,
                    report: None,
                    error: Some(e.to_string()),
                },
            };
            units.push(row);
        }
    }
    let max_unit_infidelity = units
        .iter()
        .map(|u| u.report.as_ref().map_or(f64::INFINITY, |r| r.max_infidelity))
        .fold(0.0, f64::max);
    Ok(VerifyGatesReport {
        config: cfg.record(),
        passed: max_identity_infidelity <= IDENTITY_TOL && max_unit_infidelity <= ORACLE_TOL,
        identities,
        units,
        max_identity_infidelity,
        max_unit_infidelity,
    })
}

/// `circuit` with every gate swapped for a different one of the same unit
/// kind on the same wire.
pub fn structural_twin(circuit: &Circuit) -> Circuit {
    let swap = |g: GateLabel| match g {
        GateLabel::T => GateLabel::S,
        GateLabel::H => GateLabel::Cnot,
        GateLabel::Cnot => GateLabel::H,
        _ => GateLabel::T,
    };
    Circuit::new(
        circuit
            .gates
            .iter()
            .map(|g| PlacedGate::new(swap(g.gate), g.wire))
            .collect(),
        circuit.inputs,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct BlindnessReport {
    pub config: ConfigRecord,
    /// Largest entry of `|ρ̄ − I/2|` for the 18-state average `ρ̄`.
    pub average_density_deviation: f64,
    pub runs: usize,
    /// Angles sent without a Hadamard, by `k`.
    pub angle_counts: [u64; 8],
    pub uniform: ChiSquare,
    pub twin_circuit: String,
    pub same_structure: bool,
    pub twin_angle_counts: [u64; 8],
    pub two_sample: ChiSquare,
    pub passed: bool,
}

pub fn average_density_deviation() -> Result<f64> {
    Ok(average_input_density().max_abs_deviation(&DensityMatrix::maximally_mixed(2))?)
}

pub fn blindness(cfg: &RunConfig) -> Result<BlindnessReport> {
    let dev = average_density_deviation()?;
    let pcfg = cfg.protocol_config(None);
    let twin = structural_twin(&cfg.circuit);
    let shape = |c: &Circuit| -> Result<_> {
        let mut server = StrategySpec::Honest.build();
        Ok(run_protocol(c, &pcfg, server.as_mut(), cfg.seed)?.shape())
    };
    let same_structure = shape(&cfg.circuit)? == shape(&twin)?;
    let counts = pooled_angle_counts(&cfg.circuit, &pcfg, cfg.trials, cfg.seed)?;
    // a disjoint seed range for the second sample
    let twin_seed = cfg.seed.wrapping_add(cfg.trials as u64);
    let twin_counts = pooled_angle_counts(&twin, &pcfg, cfg.trials, twin_seed)?;
    let uniform = chi_square_uniform(&counts)?;
    let two_sample = chi_square_two_sample(&counts, &twin_counts)?;
    Ok(BlindnessReport {
        config: cfg.record(),
        passed: dev <= DENSITY_TOL
            && uniform.p_value > MIN_P_VALUE
            && same_structure
            && two_sample.p_value > MIN_P_VALUE,
        average_density_deviation: dev,
        runs: cfg.trials,
        angle_counts: counts,
        uniform,
        twin_circuit: twin.gates.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        same_structure,
        twin_angle_counts: twin_counts,
        two_sample,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub config: ConfigRecord,
    pub bounds: BoundReport,
    pub feasible_epsilon: [f64; 2],
    pub feasible: FeasibleRange,
    /// `g(1/9)`.
    pub q_lower_bound_at_one_ninth: f64,
    pub grid: GridCheck,
    pub consistency: ConsistencyReport,
    pub passed: bool,
}

pub fn bounds(cfg: &RunConfig) -> Result<BoundsReport> {
    let feasible = epsilon_feasible_range();
    let grid = premise_grid_check(50)?;
    let roots_ok = f_feasibility(feasible.low).abs() <= ROOT_TOL && f_feasibility(feasible.high).abs() <= ROOT_TOL;
    Ok(BoundsReport {
        config: cfg.record(),
        bounds: BoundReport::new(cfg.q, cfg.epsilon)?,
        feasible_epsilon: [feasible.low, feasible.high],
        feasible,
        q_lower_bound_at_one_ninth: q_lower_bound(1.0 / 9.0)?.g,
        passed: roots_ok && grid.failures == 0 && grid.square_failures == 0,
        grid,
        consistency: consistency_report()?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub q: f64,
    pub epsilon: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub q_lb: Option<f64>,
    pub feasible: bool,
}

/// `n × n` grid over `q ∈ [0, 1]` and `ε ∈ [0, 1]`.
pub fn bound_sweep(n: usize) -> Result<Vec<SweepRow>> {
    let step = |i: usize| if n < 2 { 0.0 } else { i as f64 / (n - 1) as f64 };
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let r = BoundReport::new(step(i), step(j))?;
            rows.push(SweepRow {
                q: r.q,
                epsilon: r.epsilon,
                xi1: r.xi1,
                xi2: r.xi2,
                xi3: r.xi3,
                q_lb: r.q_lower_bound,
                feasible: r.epsilon_feasible,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackRow {
    pub strategy: String,
    pub params: String,
    pub q: f64,
    pub trials: usize,
    pub accepted: usize,
    pub rate: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub config: ConfigRecord,
    pub expected: Option<bool>,
    pub rows: Vec<AttackRow>,
}

/// Honest first, then every configured strategy, each over `trials` runs.
pub fn attack_sweep(cfg: &RunConfig) -> Result<AttackReport> {
    let expected = expected_bit(cfg)?;
    let pcfg = cfg.protocol_config(expected);
    let mut specs = vec![StrategySpec::Honest];
    specs.extend(cfg.strategies.iter().filter(|s| **s != StrategySpec::Honest).cloned());
    let mut rows = Vec::new();
    for spec in specs {
        let e = estimate_acceptance_parallel(&cfg.circuit, &pcfg, &spec, cfg.trials, cfg.seed)?;
        rows.push(AttackRow {
            strategy: spec.kind().to_string(),
            params: spec.params(),
            q: cfg.q,
            trials: e.trials,
            accepted: e.accepted,
            rate: e.rate,
            ci95_low: e.ci95.0,
            ci95_high: e.ci95.1,
        });
    }
    Ok(AttackReport {
        config: cfg.record(),
        expected,
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub config: ConfigRecord,
    pub strategy: String,
    pub expected: Option<bool>,
    pub messages: usize,
    pub branch: String,
    pub accepted: bool,
    pub decoded: Option<[bool; 2]>,
    pub traps: TrapTally,
    pub aborted: Option<String>,
}

/// One protocol run with the first configured strategy.
pub fn single_run(cfg: &RunConfig) -> Result<(RunSummary, Transcript)> {
    let expected = expected_bit(cfg)?;
    let pcfg: ProtocolConfig = cfg.protocol_config(expected);
    let spec = &cfg.strategies[0];
    let mut server = spec.build();
    let t = run_protocol(&cfg.circuit, &pcfg, server.as_mut(), cfg.seed)?;
    let summary = RunSummary {
        config: cfg.record(),
        strategy: spec.to_string(),
        expected,
        messages: t.messages.len(),
        branch: t.decision.branch.name().to_string(),
        accepted: t.accepted(),
        decoded: t.decision.decoded,
        traps: t.traps,
        aborted: t.aborted.clone(),
    };
    Ok((summary, t))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitExport {
    pub kind: String,
    pub gate: String,
    /// Measurement angles `k·π/4` in command order.
    pub angles_k: Vec<u8>,
    pub corrections: Vec<String>,
}

/// `{m, n, edges: [[[x, y], [x, y]], …], units: […]}`; sites are 1-based
/// `(row, column)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeExport {
    pub m: usize,
    pub n: usize,
    pub edges: Vec<[[usize; 2]; 2]>,
    pub units: Vec<UnitExport>,
}

fn correction_name(c: Correction) -> String {
    match c {
        Correction::Hadamard(w) => format!("H@{}", w.index()),
        Correction::RzMinusHalfPi(w) => format!("Rz(-pi/2)@{}", w.index()),
    }
}

pub fn lattice_export(cfg: &RunConfig) -> LatticeExport {
    let (m, n) = cfg.lattice.unwrap_or((2, cfg.circuit.lattice_columns()));
    let lattice = build_lattice(m, n);
    let units = cfg
        .circuit
        .gates
        .iter()
        .map(|&g| {
            let (unit, pattern) = gate_pattern(g);
            UnitExport {
                kind: unit.kind.name().to_string(),
                gate: g.to_string(),
                angles_k: pattern.commands.iter().map(|c| c.angle.k()).collect(),
                corrections: pattern.corrections.iter().map(|&c| correction_name(c)).collect(),
            }
        })
        .collect();
    LatticeExport {
        m,
        n,
        edges: lattice.edges.iter().map(|e| [[e.a.0, e.a.1], [e.b.0, e.b.1]]).collect(),
        units,
    }
}
