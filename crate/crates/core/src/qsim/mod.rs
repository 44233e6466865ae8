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

//! Dense statevector simulation.
//!
//! States are immutable at the API level: operations return a new
//! [`StateVector`]. Randomness is always passed in explicitly.

mod density;
mod gate;
mod state;

pub use density::{trace_distance, DensityMatrix};
pub use gate::{GateMatrix, GateSpec};
pub use state::{equal_up_to_global_phase, fidelity, planar_ket, Basis, Measurement, Prep, Removal, StateVector};

use thiserror::Error;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for state equalities.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance for matrix constructions.
pub const MATRIX_TOL: f64 = 1e-12;
/// Tolerance for accumulated multi-step pipelines.
pub const PIPELINE_TOL: f64 = 1e-8;

/// Forced branches below this probability are rejected.
pub const MIN_BRANCH_PROB: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("preparation list is empty")]
    EmptyPrepList,
    #[error("{requested} qubits requested, at most {max} supported")]
    TooManyQubits { requested: usize, max: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    IndexOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} given twice as a gate target")]
    DuplicateTarget(usize),
    #[error("gate {gate} acts on {expected} qubit(s), got {got} target(s)")]
    ArityMismatch {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("forced outcome {outcome} on qubit {qubit} has probability {probability:e}")]
    ZeroProbabilityForcedBranch {
        qubit: usize,
        outcome: bool,
        probability: f64,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("amplitude vector is not a non-zero power-of-two length with finite entries")]
    InvalidAmplitudes,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),
}
