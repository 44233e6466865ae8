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

//! Latticed cluster state, unit clusters and measurement patterns.
//!
//! A unit is a two-wire ladder. Vertex `v` sits on wire `v / width` at
//! column `v % width`; column 0 holds the inputs and the last column holds
//! the outputs. Measuring a wire vertex at angle `θ` (with its successor on
//! the wire entangled) applies `X^s·H·Rz(−θ)` to the logical state, so a
//! pattern stores `θ = −ρ` for every rotation `Rz(ρ)` of the decomposition.

mod identities;
mod lattice;
mod oracle;
mod pattern;
mod unit;

use core::fmt;
use core::str::FromStr;

pub use identities::{check_identity, commutation_identities, gate_identities, GateIdentity, IdentityCheck};
pub use lattice::{build_lattice, vertical_rule, LatticeEdge, LatticeSpec, Rule, Site};
pub use oracle::{simulate_unit_branch, spanning_inputs, verify_unit_implements_gate, UnitReport};
pub use pattern::{absorb_cnot_correction, adaptive_angle, gate_pattern, Command, Correction, MeasurementPattern};
pub use unit::{ClusterUnit, UnitKind};

use crate::qsim::QsimError;
use thiserror::Error;

/// Gates a unit can realize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GateLabel {
    I,
    S,
    T,
    X,
    Y,
    Z,
    H,
    #[cfg_attr(feature = "serde", serde(rename = "CNOT"))]
    Cnot,
}

impl GateLabel {
    pub const ALL: [GateLabel; 8] = [
        GateLabel::I,
        GateLabel::S,
        GateLabel::T,
        GateLabel::X,
        GateLabel::Y,
        GateLabel::Z,
        GateLabel::H,
        GateLabel::Cnot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateLabel::I => "I",
            GateLabel::S => "S",
            GateLabel::T => "T",
            GateLabel::X => "X",
            GateLabel::Y => "Y",
            GateLabel::Z => "Z",
            GateLabel::H => "H",
            GateLabel::Cnot => "CNOT",
        }
    }

    pub fn unit_kind(self) -> UnitKind {
        match self {
            GateLabel::H | GateLabel::Cnot => UnitKind::Eight,
            _ => UnitKind::Six,
        }
    }

    /// True iff `set` contains `{H, T, CNOT}`.
    pub fn is_universal_set(set: &[GateLabel]) -> bool {
        [GateLabel::H, GateLabel::T, GateLabel::Cnot]
            .iter()
            .all(|g| set.contains(g))
    }
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateLabel {
    type Err = MbqcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateLabel::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(MbqcError::UnknownGate)
    }
}

/// One of the two logical wires of a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Wire {
    Top,
    Bottom,
}

impl Wire {
    pub const BOTH: [Wire; 2] = [Wire::Top, Wire::Bottom];

    pub fn index(self) -> usize {
        match self {
            Wire::Top => 0,
            Wire::Bottom => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Wire> {
        match i {
            0 => Some(Wire::Top),
            1 => Some(Wire::Bottom),
            _ => None,
        }
    }

    pub fn other(self) -> Wire {
        match self {
            Wire::Top => Wire::Bottom,
            Wire::Bottom => Wire::Top,
        }
    }
}

/// A gate placed on the two-wire register. For single-qubit gates `wire` is
/// the target; for CNOT it is the control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlacedGate {
    pub gate: GateLabel,
    pub wire: Wire,
}

impl PlacedGate {
    pub fn new(gate: GateLabel, wire: Wire) -> PlacedGate {
        PlacedGate { gate, wire }
    }

    pub fn top(gate: GateLabel) -> PlacedGate {
        PlacedGate::new(gate, Wire::Top)
    }

    /// The logical two-qubit operation as `(GateSpec, targets)`.
    pub fn logical(&self) -> (crate::qsim::GateSpec, alloc::vec::Vec<usize>) {
        use crate::qsim::GateSpec;
        let w = self.wire.index();
        let single = |g| (g, alloc::vec![w]);
        match self.gate {
            GateLabel::I => single(GateSpec::I),
            GateLabel::S => single(GateSpec::S),
            GateLabel::T => single(GateSpec::T),
            GateLabel::X => single(GateSpec::X),
            GateLabel::Y => single(GateSpec::Y),
            GateLabel::Z => single(GateSpec::Z),
            GateLabel::H => single(GateSpec::H),
            GateLabel::Cnot => (GateSpec::Cnot, alloc::vec![w, 1 - w]),
        }
    }
}

impl fmt::Display for PlacedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.wire {
            Wire::Top => write!(f, "{}", self.gate),
            Wire::Bottom => write!(f, "{}@1", self.gate),
        }
    }
}

/// Parses `G` or `G@w` with `w ∈ {0, 1}`.
impl FromStr for PlacedGate {
    type Err = MbqcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, wire) = match s.split_once('@') {
            Some((name, w)) => {
                let idx = w.trim().parse::<usize>().map_err(|_| MbqcError::UnknownGate)?;
                (name, Wire::from_index(idx).ok_or(MbqcError::UnknownGate)?)
            }
            None => (s, Wire::Top),
        };
        Ok(PlacedGate::new(name.parse()?, wire))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MbqcError {
    #[error("unknown gate label")]
    UnknownGate,
    #[error("{expected} outcomes needed, got {got}")]
    OutcomeCountMismatch { expected: usize, got: usize },
    #[error("input must be a 2-qubit state, got {0} qubits")]
    InputSize(usize),
    #[error("gate {gate} failed on branch {branch:#b}, input {input}: infidelity {infidelity:e}")]
    UnitVerificationFailed {
        gate: PlacedGate,
        branch: u64,
        input: usize,
        infidelity: f64,
    },
    #[error(transparent)]
    Qsim(#[from] QsimError),
}
