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

use alloc::vec::Vec;

use crate::Angle8;

/// Server-visible name of a qubit. Handles are reissued whenever the client
/// reshuffles a batch, so they carry no information across batches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Handle(pub u32);

/// Everything that crosses the client/server boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type"))]
pub enum Message {
    /// Client to server: qubits now held by the server, in batch order.
    QubitBatch { round: usize, handles: Vec<Handle> },
    /// Client to server: CZ edges to apply.
    EntangleOrder { round: usize, edges: Vec<(Handle, Handle)> },
    /// Server to client: qubits sent back.
    ReturnBatch { round: usize, handles: Vec<Handle> },
    /// Client to server: apply H to these qubits.
    HOrder { round: usize, handles: Vec<Handle> },
    /// Client to server: measure these qubits at these angles.
    AngleList {
        round: usize,
        layer: usize,
        angles: Vec<(Handle, Angle8)>,
    },
    /// Server to client: one bit per entry of the preceding `AngleList`.
    OutcomeList {
        round: usize,
        layer: usize,
        outcomes: Vec<bool>,
    },
}

impl Message {
    pub fn round(&self) -> usize {
        match self {
            Message::QubitBatch { round, .. }
            | Message::EntangleOrder { round, .. }
            | Message::ReturnBatch { round, .. }
            | Message::HOrder { round, .. }
            | Message::AngleList { round, .. }
            | Message::OutcomeList { round, .. } => *round,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Message::QubitBatch { .. } => "QubitBatch",
            Message::EntangleOrder { .. } => "EntangleOrder",
            Message::ReturnBatch { .. } => "ReturnBatch",
            Message::HOrder { .. } => "HOrder",
            Message::AngleList { .. } => "AngleList",
            Message::OutcomeList { .. } => "OutcomeList",
        }
    }

    /// The message with every value replaced by its length, for comparing
    /// transcript structure.
    pub fn shape(&self) -> (&'static str, usize, usize) {
        let len = match self {
            Message::QubitBatch { handles, .. }
            | Message::ReturnBatch { handles, .. }
            | Message::HOrder { handles, .. } => handles.len(),
            Message::EntangleOrder { edges, .. } => edges.len(),
            Message::AngleList { angles, .. } => angles.len(),
            Message::OutcomeList { outcomes, .. } => outcomes.len(),
        };
        (self.kind(), self.round(), len)
    }
}
