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

//! Direct circuit simulation, used as the decoding oracle.

use blindlattice_core::protocol::{Circuit, InputState};
use blindlattice_core::qsim::{Prep, QsimError, StateVector};

fn prep(input: InputState) -> Prep {
    match input {
        InputState::Zero => Prep::Zero,
        InputState::One => Prep::One,
        InputState::Plus(k) => Prep::Plus(k),
    }
}

/// The two-wire state after applying every gate directly.
pub fn final_state(circuit: &Circuit) -> Result<StateVector, QsimError> {
    let mut s = StateVector::prepare(&circuit.inputs.map(prep))?;
    for g in &circuit.gates {
        let (gate, targets) = g.logical();
        s.apply_in_place(&gate, &targets)?;
    }
    Ok(s)
}

/// Probabilities of the readouts `00, 01, 10, 11` (top wire first).
pub fn output_distribution(circuit: &Circuit) -> Result<[f64; 4], QsimError> {
    let p = final_state(circuit)?.probabilities();
    Ok([p[0], p[1], p[2], p[3]])
}

/// Probability that `wire` reads 1.
pub fn marginal_one(dist: &[f64; 4], wire: usize) -> f64 {
    if wire == 0 {
        dist[2] + dist[3]
    } else {
        dist[1] + dist[3]
    }
}

/// The bit `wire` always reads, if it is deterministic.
pub fn deterministic_bit(circuit: &Circuit, wire: usize) -> Result<Option<bool>, QsimError> {
    let p = marginal_one(&output_distribution(circuit)?, wire);
    Ok(if p < 1e-9 {
        Some(false)
    } else if p > 1.0 - 1e-9 {
        Some(true)
    } else {
        None
    })
}

/// Total-variation distance between two distributions on the same outcomes.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use blindlattice_core::mbqc::{GateLabel, PlacedGate};
    use blindlattice_core::Angle8;

    #[test]
    fn small_circuits() {
        let x = Circuit::on_zero(&[GateLabel::X]);
        assert_eq!(deterministic_bit(&x, 0).unwrap(), Some(true));
        let cnot = Circuit::new(
            vec![PlacedGate::top(GateLabel::Cnot)],
            [InputState::One, InputState::Zero],
        );
        let d = output_distribution(&cnot).unwrap();
        assert!((d[3] - 1.0).abs() < 1e-12);
        let plus = Circuit::new(
            vec![PlacedGate::top(GateLabel::T); 4],
            [InputState::Plus(Angle8::ZERO), InputState::Zero],
        );
        assert_eq!(deterministic_bit(&plus, 0).unwrap(), None);
        assert!((marginal_one(&output_distribution(&plus).unwrap(), 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tv_distance() {
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert!((total_variation(&[0.5, 0.5], &[0.6, 0.4]) - 0.1).abs() < 1e-12);
    }
}
