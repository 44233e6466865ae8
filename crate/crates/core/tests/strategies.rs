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

//! Flipping every reported bit is the same deviation as a physical `Z` on
//! every measured qubit. The second route is simulated here directly.

use blindlattice_core::adversary::{FlipOutcomes, ServerStrategy};
use blindlattice_core::mbqc::{GateLabel, PlacedGate};
use blindlattice_core::protocol::{
    run_protocol, server_measure, Branch, Circuit, Handle, InputState, Lab, ProtocolConfig, ProtocolError,
};
use blindlattice_core::qsim::GateSpec;
use blindlattice_core::Angle8;
use rand_chacha::ChaCha8Rng;

struct PhaseKick;

impl ServerStrategy for PhaseKick {
    fn name(&self) -> String {
        "phase_kick".into()
    }

    fn on_measure(
        &mut self,
        lab: &mut Lab,
        _round: usize,
        _layer: usize,
        angles: &[(Handle, Angle8)],
        _rng: &mut ChaCha8Rng,
    ) -> Result<Vec<bool>, ProtocolError> {
        for &(h, _) in angles {
            lab.apply(&GateSpec::Z, &[h])?;
        }
        server_measure(lab, angles)
    }
}

fn circuits() -> Vec<Circuit> {
    let top = |gs: &[GateLabel]| gs.iter().map(|&g| PlacedGate::top(g)).collect::<Vec<_>>();
    let plus = InputState::Plus(Angle8::ZERO);
    vec![
        Circuit::on_zero(&[GateLabel::I]),
        Circuit::on_zero(&[GateLabel::X]),
        Circuit::on_zero(&[GateLabel::S, GateLabel::Z]),
        Circuit::on_zero(&[GateLabel::H, GateLabel::H]),
        Circuit::new(top(&[GateLabel::Cnot]), [InputState::One, InputState::Zero]),
        Circuit::new(
            top(&[GateLabel::T, GateLabel::T, GateLabel::T, GateLabel::T, GateLabel::H]),
            [plus, InputState::Zero],
        ),
    ]
}

#[test]
fn flip_all_equals_z_on_every_measured_qubit() {
    let cfg = ProtocolConfig {
        force_branch: Some(Branch::Eval),
        ..ProtocolConfig::default()
    };
    for c in circuits() {
        for seed in 0..20 {
            let a = run_protocol(&c, &cfg, &mut FlipOutcomes { p: 1.0 }, seed).unwrap();
            let b = run_protocol(&c, &cfg, &mut PhaseKick, seed).unwrap();
            assert_eq!(a.decision.decoded, b.decision.decoded, "{:?} seed {seed}", c.gates);
            assert_eq!(a.traps, b.traps);
        }
    }
}

#[test]
fn flip_all_is_harmless_on_some_outputs_only() {
    let cfg = ProtocolConfig {
        force_branch: Some(Branch::Eval),
        ..ProtocolConfig::default()
    };
    let decoded_top = |gates: &[GateLabel]| {
        run_protocol(&Circuit::on_zero(gates), &cfg, &mut FlipOutcomes { p: 1.0 }, 1)
            .unwrap()
            .decision
            .decoded
            .unwrap()[0]
    };
    assert!(!decoded_top(&[GateLabel::I]));
    assert!(decoded_top(&[GateLabel::H, GateLabel::H]));
}
