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

//! Closed-form bounds, the 18-state average and acceptance estimation.
//!
//! Bound formulas are evaluated exactly as stated, including the ones that
//! do not hold together; [`consistency_report`] lists where they disagree.

mod bounds;
mod estimate;

pub use bounds::{
    completeness_bound, consistency_report, epsilon_feasible_range, f_feasibility, f_feasibility_prime,
    premise_grid_check, q_lower_bound, soundness_bounds, xi3_forms, BoundReport, ConsistencyReport, Discrepancy,
    FeasibleRange, GridCheck, QBound, Soundness, Xi3Forms,
};
pub use estimate::{estimate_acceptance, trial_accepts, wilson_interval, AcceptanceEstimate, WILSON_Z95};

use alloc::vec::Vec;

use thiserror::Error;

use crate::protocol::ProtocolError;
use crate::qsim::{trace_distance, DensityMatrix, Prep, QsimError, StateVector};
use crate::Angle8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{name} = {value} lies outside its domain")]
    DomainError { name: &'static str, value: f64 },
    #[error("denominator vanishes at epsilon = {epsilon}")]
    SingularDenominator { epsilon: f64 },
    #[error("at least one trial is needed")]
    NoTrials,
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// `|0⟩`, `|1⟩` and the sixteen `|±_k⟩`.
pub fn eighteen_states() -> Vec<Prep> {
    let mut out = alloc::vec![Prep::Zero, Prep::One];
    out.extend(Angle8::all().map(Prep::Plus));
    out.extend(Angle8::all().map(Prep::Minus));
    out
}

/// Uniform mixture of the given single-qubit states.
pub fn state_average(preps: &[Prep]) -> Result<DensityMatrix, AnalysisError> {
    let states = preps
        .iter()
        .map(|p| StateVector::prepare(&[*p]))
        .collect::<Result<Vec<_>, _>>()?;
    let w = 1.0 / states.len() as f64;
    Ok(DensityMatrix::mixture(states.iter().map(|s| (w, s)))?)
}

/// Average of the 18 states a server cannot tell apart.
pub fn average_input_density() -> DensityMatrix {
    state_average(&eighteen_states()).expect("eighteen one-qubit states")
}

/// `½‖ρ − ρ′‖₁ ≤ 2√ε`.
pub fn gentle_check(rho: &DensityMatrix, rho_prime: &DensityMatrix, epsilon: f64) -> Result<bool, AnalysisError> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(AnalysisError::DomainError {
            name: "epsilon",
            value: epsilon,
        });
    }
    Ok(trace_distance(rho, rho_prime)? <= 2.0 * libm::sqrt(epsilon))
}
