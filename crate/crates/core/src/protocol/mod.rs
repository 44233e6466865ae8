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

//! The interactive client/server protocol.
//!
//! The client compiles a circuit unit by unit. Every unit round runs
//!
//! 1. `QubitBatch`: fresh computation qubits and `R1` trap pairs, shuffled;
//! 2. `EntangleOrder`: the unit's CZ edges;
//! 3. `ReturnBatch`: the server hands the round's qubits back;
//! 4. `QubitBatch`: the same qubits with `R2` traps spliced in, reshuffled
//!    under fresh handles;
//! 5. `HOrder`: qubits that receive a Hadamard before measurement;
//! 6. `AngleList` / `OutcomeList` once per column layer.
//!
//! A readout round measures the outputs in the computational basis and the
//! client finishes with a probabilistic accept/test decision. The server sees
//! [`Message`]s and a [`Lab`]; it never sees a [`ClientSecret`].

mod client;
mod decision;
mod lab;
mod message;
mod run;

pub use client::{
    client_prepare, server_entangle, server_h_order, server_measure, Client, ClientSecret, QubitRole, R1Trap, R2Trap,
    TrapTally, UnitRecord,
};
pub use decision::{client_decide, Branch, Decision, Verdict};
pub use lab::{Lab, QubitId};
pub use message::{Handle, Message};
pub use run::{replay_matches, run_protocol, Transcript};

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::mbqc::{MbqcError, PlacedGate, UnitKind, Wire};
use crate::qsim::QsimError;
use crate::Angle8;

/// Logical input of one wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum InputState {
    #[default]
    Zero,
    One,
    /// `|+_k⟩ = (|0⟩ + e^{ik}|1⟩)/√2`.
    Plus(Angle8),
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputState::Zero => f.write_str("0"),
            InputState::One => f.write_str("1"),
            InputState::Plus(a) if *a == Angle8::ZERO => f.write_str("+"),
            InputState::Plus(a) => write!(f, "+{}", a.k()),
        }
    }
}

/// Parses `0`, `1`, `+` or `+k` (the angle `k·π/4`).
impl FromStr for InputState {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(InputState::Zero),
            "1" => Ok(InputState::One),
            "+" => Ok(InputState::Plus(Angle8::ZERO)),
            t => t
                .strip_prefix('+')
                .and_then(|k| k.parse::<i64>().ok())
                .map(|k| InputState::Plus(Angle8::new(k)))
                .ok_or(ProtocolError::BadConfig("input state must be 0, 1, + or +k")),
        }
    }
}

/// A gate sequence on two wires with its logical inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Circuit {
    pub gates: Vec<PlacedGate>,
    pub inputs: [InputState; 2],
}

impl Circuit {
    pub fn new(gates: Vec<PlacedGate>, inputs: [InputState; 2]) -> Circuit {
        Circuit { gates, inputs }
    }

    /// Gates on the top wire, inputs `|00⟩`.
    pub fn on_zero(gates: &[crate::mbqc::GateLabel]) -> Circuit {
        Circuit::new(
            gates.iter().map(|&g| PlacedGate::top(g)).collect(),
            [InputState::Zero; 2],
        )
    }

    /// Lattice columns spanned: one input column, then the new columns of
    /// every unit (its width minus the shared input column, plus a hop
    /// column when an output needs a Hadamard).
    pub fn lattice_columns(&self) -> usize {
        1 + self
            .gates
            .iter()
            .map(|g| unit_columns(g.gate.unit_kind()))
            .sum::<usize>()
    }
}

/// New lattice columns a unit of `kind` contributes.
pub(crate) fn unit_columns(kind: UnitKind) -> usize {
    match kind {
        UnitKind::Six => 2,
        UnitKind::Eight => 4,
    }
}

/// How trap qubits are budgeted over the units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TrapPolicy {
    /// `m1·n` `R1` pairs, `n` the number of lattice columns, spread over the
    /// units by the columns each one adds (the first unit also takes the
    /// input column); every unit gets as many `R2` traps as `R1` pairs.
    ColumnSpread,
    /// The same counts for every unit.
    PerUnit { r1_pairs: usize, r2: usize },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProtocolConfig {
    /// Rows of `R1` pairs per lattice column; at most half the wire count.
    pub m1: usize,
    /// Probability of the evaluate branch.
    pub q: f64,
    pub traps: TrapPolicy,
    /// Probability that an `R2` trap is a Hadamard decoy.
    pub camouflage: f64,
    /// Wire whose decoded bit is the decision output.
    pub output_wire: Wire,
    /// Expected decision bit; `None` accepts any result.
    pub expected: Option<bool>,
    /// Overrides the random branch choice.
    pub force_branch: Option<Branch>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            m1: 1,
            q: 0.5,
            traps: TrapPolicy::ColumnSpread,
            camouflage: 0.25,
            output_wire: Wire::Top,
            expected: None,
            force_branch: None,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.m1 == 0 || self.m1 > 1 {
            return Err(ProtocolError::BadConfig("m1 must satisfy 1 ≤ m1 ≤ m/2 = 1"));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(ProtocolError::BadConfig("q must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.camouflage) {
            return Err(ProtocolError::BadConfig("camouflage must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("bad configuration: {0}")]
    BadConfig(&'static str),
    #[error("circuit is empty")]
    EmptyCircuit,
    #[error("{requested} R2 traps exceed the cap of {cap} for a {kind:?} unit")]
    TrapBudgetExceeded {
        kind: UnitKind,
        requested: usize,
        cap: usize,
    },
    #[error("no qubit behind handle {0:?}")]
    UnknownHandle(Handle),
    #[error("measurement of a computation qubit was requested before its dependencies")]
    MissingDependency,
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Mbqc(#[from] MbqcError),
}
