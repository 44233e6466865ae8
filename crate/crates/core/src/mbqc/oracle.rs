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

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::pattern::{Correction, MeasurementPattern};
use super::unit::{ClusterUnit, UnitKind};
use super::{gate_pattern, MbqcError, PlacedGate, Wire};
use crate::qsim::{fidelity, Basis, GateSpec, Prep, StateVector};

/// Largest infidelity the oracle tolerates.
pub const ORACLE_TOL: f64 = 1e-9;

/// Runs one outcome branch of a unit on a two-qubit input.
///
/// `outcomes` follows the order of `pattern.commands`. Byproducts are undone
/// and the recorded corrections applied, so the returned state should equal
/// the gate applied to `input`.
pub fn simulate_unit_branch(
    unit: &ClusterUnit,
    pattern: &MeasurementPattern,
    input: &StateVector,
    outcomes: &[bool],
) -> Result<(StateVector, f64), MbqcError> {
    if input.num_qubits() != 2 {
        return Err(MbqcError::InputSize(input.num_qubits()));
    }
    if outcomes.len() != pattern.commands.len() {
        return Err(MbqcError::OutcomeCountMismatch {
            expected: pattern.commands.len(),
            got: outcomes.len(),
        });
    }

    let n = unit.num_vertices();
    let inputs = [unit.input(Wire::Top), unit.input(Wire::Bottom)];
    let mut order = inputs.to_vec();
    order.extend((0..n).filter(|v| !inputs.contains(v)));
    let fresh = StateVector::prepare(&vec![Prep::Plus(crate::Angle8::ZERO); n - 2])?;
    let mut state = input.tensor(&fresh)?;
    let pos = |order: &[usize], v: usize| order.iter().position(|&u| u == v).expect("vertex present");
    for &(a, b) in &unit.edges {
        state.apply_in_place(&GateSpec::Cz, &[pos(&order, a), pos(&order, b)])?;
    }

    let mut result = vec![None; n];
    let parity = |deps: &[usize], result: &[Option<bool>]| {
        deps.iter()
            .fold(false, |acc, &d| acc ^ result[d].expect("dependency measured earlier"))
    };
    let mut prob = 1.0;
    for (cmd, &s) in pattern.commands.iter().zip(outcomes) {
        let sx = parity(&cmd.x_deps, &result);
        let sz = parity(&cmd.z_deps, &result);
        let angle = super::adaptive_angle(cmd.angle, sx, sz, crate::Angle8::ZERO, false);
        let q = pos(&order, cmd.vertex);
        let removal = state.measure_out_forced(q, Basis::Planar(angle.radians()), s)?;
        prob *= removal.probability;
        state = removal.rest.expect("outputs remain");
        order.remove(q);
        result[cmd.vertex] = Some(s);
    }
    debug_assert_eq!(order, [unit.output(Wire::Top), unit.output(Wire::Bottom)]);

    for wire in Wire::BOTH {
        let (xd, zd) = &pattern.output_deps[wire.index()];
        let w = wire.index();
        if parity(xd, &result) {
            state.apply_in_place(&GateSpec::X, &[w])?;
        }
        if parity(zd, &result) {
            state.apply_in_place(&GateSpec::Z, &[w])?;
        }
    }
    for c in &pattern.corrections {
        let gate = match c {
            Correction::Hadamard(_) => GateSpec::H,
            Correction::RzMinusHalfPi(_) => GateSpec::Rz(-core::f64::consts::FRAC_PI_2),
        };
        state.apply_in_place(&gate, &[c.wire().index()])?;
    }
    Ok((state, prob))
}

/// The six test inputs: the computational basis and two states with
/// non-Clifford phases, one of them entangled.
pub fn spanning_inputs() -> Vec<StateVector> {
    let mut out: Vec<StateVector> = (0..4)
        .map(|i| {
            let mut amps = vec![Complex64::new(0.0, 0.0); 4];
            amps[i] = Complex64::new(1.0, 0.0);
            StateVector::from_amplitudes(amps).expect("basis state")
        })
        .collect();
    let a = StateVector::prepare(&[Prep::Plus(crate::Angle8::QUARTER_PI)]).expect("one qubit");
    let b = StateVector::from_amplitudes(vec![
        Complex64::new(libm::cos(0.3), 0.0),
        Complex64::from_polar(libm::sin(0.3), 0.7),
    ])
    .expect("one qubit");
    out.push(a.tensor(&b).expect("two qubits"));
    out.push(
        StateVector::from_amplitudes(vec![
            Complex64::new(0.1, 0.0),
            Complex64::new(0.0, 0.7),
            Complex64::new(-0.3, 0.2),
            Complex64::new(0.5, 0.0),
        ])
        .expect("two qubits"),
    );
    out
}

/// Outcome of an exhaustive branch check.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitReport {
    pub gate: PlacedGate,
    pub kind: UnitKind,
    /// Outcome branches per input (`2^measured`).
    pub branches_checked: u64,
    pub inputs_checked: usize,
    pub max_infidelity: f64,
    /// Smallest and largest branch probability seen.
    pub branch_prob_range: (f64, f64),
}

/// Checks every outcome branch of the gate's unit against direct
/// application of the gate on [`spanning_inputs`].
pub fn verify_unit_implements_gate(placed: impl Into<PlacedGate>) -> Result<UnitReport, MbqcError> {
    let placed = placed.into();
    let (unit, pattern) = gate_pattern(placed);
    let (gate, targets) = placed.logical();
    let k = pattern.commands.len();
    let branches = 1u64 << k;
    let inputs = spanning_inputs();
    let mut max_infidelity: f64 = 0.0;
    let mut range = (f64::INFINITY, 0.0f64);
    for (idx, input) in inputs.iter().enumerate() {
        let expected = input.apply(&gate, &targets)?;
        for branch in 0..branches {
            let outcomes: Vec<bool> = (0..k).map(|i| (branch >> i) & 1 == 1).collect();
            let (out, p) = simulate_unit_branch(&unit, &pattern, input, &outcomes)?;
            let infidelity = 1.0 - fidelity(&out, &expected)?;
            if infidelity > ORACLE_TOL {
                return Err(MbqcError::UnitVerificationFailed {
                    gate: placed,
                    branch,
                    input: idx,
                    infidelity,
                });
            }
            max_infidelity = max_infidelity.max(infidelity);
            range = (range.0.min(p), range.1.max(p));
        }
    }
    Ok(UnitReport {
        gate: placed,
        kind: unit.kind,
        branches_checked: branches,
        inputs_checked: inputs.len(),
        max_infidelity,
        branch_prob_range: range,
    })
}
