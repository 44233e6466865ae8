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

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::client::{Client, ClientSecret, TrapTally, UnitRecord};
use super::decision::{client_decide, Decision};
use super::lab::Lab;
use super::message::{Handle, Message};
use super::{Circuit, ProtocolConfig, ProtocolError};
use crate::adversary::ServerStrategy;
use crate::rng::{stream, Stream};
use crate::Angle8;

/// Everything one run produced.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Transcript {
    pub circuit: Circuit,
    pub config: ProtocolConfig,
    pub seed: u64,
    pub strategy: String,
    pub messages: Vec<Message>,
    pub units: Vec<UnitRecord>,
    pub decision: Decision,
    pub traps: TrapTally,
    /// The client's private record; never shown to the server.
    pub secret: ClientSecret,
    /// Why the run stopped early: a server hook failed or answered with the
    /// wrong number of outcomes. Such runs are rejected.
    pub aborted: Option<String>,
}

impl Transcript {
    pub fn accepted(&self) -> bool {
        self.decision.verdict.accepted()
    }

    /// Every `AngleList` as `(round, layer, angles)`.
    pub fn angle_lists(&self) -> impl Iterator<Item = (usize, usize, &[(Handle, Angle8)])> {
        self.messages.iter().filter_map(|m| match m {
            Message::AngleList { round, layer, angles } => Some((*round, *layer, angles.as_slice())),
            _ => None,
        })
    }

    /// Message kinds, rounds and lengths, without any values.
    pub fn shape(&self) -> Vec<(&'static str, usize, usize)> {
        self.messages.iter().map(Message::shape).collect()
    }
}

/// A server failure ends the run; the string says why.
type Step = Result<(), String>;

struct Session<'a> {
    lab: Lab,
    client: Client,
    server: &'a mut dyn ServerStrategy,
    rng: ChaCha8Rng,
    messages: Vec<Message>,
}

impl Session<'_> {
    fn send_batch(&mut self, round: usize, handles: Vec<Handle>) -> Step {
        self.messages.push(Message::QubitBatch {
            round,
            handles: handles.clone(),
        });
        self.server
            .on_receive(&mut self.lab, round, &handles, &mut self.rng)
            .map_err(|e| e.to_string())
    }

    fn send_h_order(&mut self, round: usize, handles: Vec<Handle>) -> Step {
        self.messages.push(Message::HOrder {
            round,
            handles: handles.clone(),
        });
        self.server
            .on_h_order(&mut self.lab, round, &handles, &mut self.rng)
            .map_err(|e| e.to_string())
    }

    fn measure_layers(&mut self, round: usize) -> Result<Step, ProtocolError> {
        for layer in 0..self.client.num_layers() {
            let angles = self.client.angles(layer)?;
            let answer = self
                .server
                .on_measure(&mut self.lab, round, layer, &angles, &mut self.rng);
            let sent = angles.len();
            self.messages.push(Message::AngleList { round, layer, angles });
            let outcomes = match answer {
                Ok(o) => o,
                Err(e) => return Ok(Err(e.to_string())),
            };
            let ok = self.client.receive_outcomes(&outcomes);
            let got = outcomes.len();
            self.messages.push(Message::OutcomeList { round, layer, outcomes });
            if !ok {
                return Ok(Err(format!("expected {sent} outcomes, got {got}")));
            }
        }
        Ok(Ok(()))
    }

    fn unit_round(&mut self, t: usize) -> Result<Step, ProtocolError> {
        let batch = self.client.begin_round(&mut self.lab, t)?;
        if let Err(e) = self.send_batch(t, batch) {
            return Ok(Err(e));
        }
        let edges = self.client.entangle_order();
        let entangled = self.server.on_entangle(&mut self.lab, t, &edges, &mut self.rng);
        self.messages.push(Message::EntangleOrder { round: t, edges });
        if let Err(e) = entangled {
            return Ok(Err(e.to_string()));
        }
        self.messages.push(Message::ReturnBatch {
            round: t,
            handles: self.client.expected_return(),
        });
        let batch = self.client.insert_r2(&mut self.lab, t)?;
        if let Err(e) = self.send_batch(t, batch) {
            return Ok(Err(e));
        }
        let h = self.client.h_order();
        if let Err(e) = self.send_h_order(t, h) {
            return Ok(Err(e));
        }
        let step = self.measure_layers(t)?;
        if step.is_ok() {
            self.client.end_round();
        }
        Ok(step)
    }

    fn readout(&mut self) -> Result<Step, ProtocolError> {
        let t = self.client.num_units();
        let h = self.client.begin_readout();
        if let Err(e) = self.send_h_order(t, h) {
            return Ok(Err(e));
        }
        self.measure_layers(t)
    }

    fn all(&mut self) -> Result<Step, ProtocolError> {
        for t in 0..self.client.num_units() {
            let step = self.unit_round(t)?;
            if step.is_err() {
                return Ok(step);
            }
        }
        self.readout()
    }
}

/// Runs the whole protocol against `server`.
///
/// Client, server, lab and decision draw from separate streams of `seed`.
/// Errors are returned only for client-side problems (bad config, trap
/// budget); a misbehaving server ends the run with a rejection.
pub fn run_protocol(
    circuit: &Circuit,
    config: &ProtocolConfig,
    server: &mut dyn ServerStrategy,
    seed: u64,
) -> Result<Transcript, ProtocolError> {
    let client = Client::new(circuit.clone(), config.clone(), stream(seed, Stream::Client))?;
    let strategy = server.name();
    let mut session = Session {
        lab: Lab::new(stream(seed, Stream::Nature)),
        client,
        server,
        rng: stream(seed, Stream::Server),
        messages: Vec::new(),
    };
    let aborted = session.all()?.err();
    if aborted.is_some() {
        session.client.mark_malformed();
    }
    let decision = client_decide(&session.client, &mut stream(seed, Stream::Decision));
    Ok(Transcript {
        circuit: circuit.clone(),
        config: config.clone(),
        seed,
        strategy,
        messages: session.messages,
        units: session.client.records().to_vec(),
        decision,
        traps: session.client.trap_tally(),
        secret: session.client.secret().clone(),
        aborted,
    })
}

/// Reruns `transcript` from its circuit, config and seed against `server`
/// and reports whether messages, unit records and decision all coincide.
pub fn replay_matches(transcript: &Transcript, server: &mut dyn ServerStrategy) -> Result<bool, ProtocolError> {
    let again = run_protocol(&transcript.circuit, &transcript.config, server, transcript.seed)?;
    Ok(again == *transcript)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{FakeGraph, FlipOutcomes, Honest, ServerStrategy, SkipEntangle};
    use crate::mbqc::{GateLabel, PlacedGate, Wire};
    use crate::protocol::{Branch, InputState, TrapPolicy, Verdict};

    fn run(circuit: &Circuit, seed: u64) -> Transcript {
        run_protocol(circuit, &ProtocolConfig::default(), &mut Honest, seed).unwrap()
    }

    fn decoded(circuit: &Circuit, seed: u64) -> [bool; 2] {
        let t = run(circuit, seed);
        assert!(t.aborted.is_none());
        t.decision.decoded.unwrap()
    }

    #[test]
    fn x_on_zero_decodes_one() {
        let c = Circuit::on_zero(&[GateLabel::X]);
        for seed in 0..30 {
            assert_eq!(decoded(&c, seed), [true, false], "seed {seed}");
        }
    }

    #[test]
    fn deterministic_circuits_decode() {
        use GateLabel::*;
        let cases: &[(&[GateLabel], [InputState; 2], [bool; 2])] = &[
            (&[I], [InputState::Zero, InputState::One], [false, true]),
            (&[H, H], [InputState::One, InputState::Zero], [true, false]),
            (&[Cnot], [InputState::One, InputState::Zero], [true, true]),
            (&[Y], [InputState::Zero; 2], [true, false]),
            (&[Z, X, S], [InputState::Zero; 2], [true, false]),
            (&[H], [InputState::Plus(Angle8::ZERO), InputState::Zero], [false, false]),
            (
                &[T, T, T, T, H],
                [InputState::Plus(Angle8::ZERO), InputState::Zero],
                [true, false],
            ),
            (
                &[S, S, H],
                [InputState::Plus(Angle8::ZERO), InputState::Zero],
                [true, false],
            ),
            (&[X, Cnot, Cnot], [InputState::Zero; 2], [true, false]),
            (&[H, Z, H], [InputState::Zero; 2], [true, false]),
        ];
        for (gates, inputs, want) in cases {
            let c = Circuit::new(gates.iter().map(|&g| PlacedGate::top(g)).collect(), *inputs);
            for seed in 0..12 {
                assert_eq!(decoded(&c, seed), *want, "{gates:?} seed {seed}");
            }
        }
    }

    #[test]
    fn cnot_phase_correction_is_absorbed() {
        // the target leaves CNOT with a pending Rz; H then only yields |0⟩
        // when the next unit absorbs it
        for control in [InputState::Zero, InputState::One] {
            let c = Circuit::new(
                alloc::vec![
                    PlacedGate::top(GateLabel::Cnot),
                    PlacedGate::new(GateLabel::H, Wire::Bottom)
                ],
                [control, InputState::Plus(Angle8::ZERO)],
            );
            for seed in 0..12 {
                assert!(!decoded(&c, seed)[1], "{control} seed {seed}");
            }
        }
        let c = Circuit::new(
            alloc::vec![
                PlacedGate::new(GateLabel::Cnot, Wire::Bottom),
                PlacedGate::top(GateLabel::H)
            ],
            [InputState::Plus(Angle8::new(4)), InputState::One],
        );
        for seed in 0..12 {
            // X|−⟩ = −|−⟩, H|−⟩ = |1⟩
            assert_eq!(decoded(&c, seed), [true, true], "seed {seed}");
        }
    }

    #[test]
    fn bottom_wire_gates_decode() {
        let c = Circuit::new(
            alloc::vec![
                PlacedGate::new(GateLabel::X, Wire::Bottom),
                PlacedGate::new(GateLabel::Cnot, Wire::Bottom)
            ],
            [InputState::Zero; 2],
        );
        for seed in 0..12 {
            assert_eq!(decoded(&c, seed), [true, true]);
        }
    }

    #[test]
    fn honest_traps_always_pass() {
        let circuits = [
            Circuit::on_zero(&[GateLabel::I]),
            Circuit::on_zero(&[GateLabel::H, GateLabel::T, GateLabel::Cnot]),
        ];
        for c in &circuits {
            for branch in [Branch::TestR1, Branch::TestR2] {
                let config = ProtocolConfig {
                    force_branch: Some(branch),
                    ..ProtocolConfig::default()
                };
                for seed in 0..40 {
                    let t = run_protocol(c, &config, &mut Honest, seed).unwrap();
                    assert_eq!(t.decision.verdict, Verdict::Accept, "{branch} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn first_batch_size() {
        // 6 computation qubits and 2·3 trap qubits for one Six unit
        let t = run(&Circuit::on_zero(&[GateLabel::I]), 1);
        assert_eq!(t.messages[0].shape(), ("QubitBatch", 0, 12));
        assert_eq!(t.messages[1].shape(), ("EntangleOrder", 0, 6));
        assert_eq!(t.messages[2].shape(), ("ReturnBatch", 0, 12));
        assert_eq!(t.messages[3].shape(), ("QubitBatch", 0, 15));
    }

    #[test]
    fn deterministic_and_replayable() {
        let c = Circuit::on_zero(&[GateLabel::H, GateLabel::Cnot]);
        let a = run(&c, 77);
        assert_eq!(a, run(&c, 77));
        assert!(replay_matches(&a, &mut Honest).unwrap());
        assert_ne!(a.messages, run(&c, 78).messages);
        assert!(!replay_matches(&a, &mut FlipOutcomes { p: 1.0 }).unwrap());
    }

    #[test]
    fn structure_independent_of_secrets() {
        let c = Circuit::on_zero(&[GateLabel::T, GateLabel::Cnot]);
        let shape = run(&c, 0).shape();
        for seed in 1..20 {
            assert_eq!(run(&c, seed).shape(), shape);
        }
    }

    #[test]
    fn flip_all_fails_tests() {
        let c = Circuit::on_zero(&[GateLabel::I]);
        for branch in [Branch::TestR1, Branch::TestR2] {
            let config = ProtocolConfig {
                force_branch: Some(branch),
                ..ProtocolConfig::default()
            };
            for seed in 0..20 {
                let t = run_protocol(&c, &config, &mut FlipOutcomes { p: 1.0 }, seed).unwrap();
                assert_eq!(t.decision.verdict, Verdict::Reject);
            }
        }
    }

    #[test]
    fn skip_entangle_keeps_traps_passing() {
        let c = Circuit::on_zero(&[GateLabel::H]);
        for branch in [Branch::TestR1, Branch::TestR2] {
            let config = ProtocolConfig {
                force_branch: Some(branch),
                ..ProtocolConfig::default()
            };
            for seed in 0..20 {
                let t = run_protocol(&c, &config, &mut SkipEntangle, seed).unwrap();
                assert!(t.accepted());
            }
        }
    }

    #[test]
    fn fake_graph_zero_fails_one_of_each_pair() {
        // |0⟩ after H measured at 0 or π passes exactly the |0⟩-origin traps
        let c = Circuit::on_zero(&[GateLabel::I]);
        let mut strat = FakeGraph {
            replacement: crate::adversary::Replacement::AllZero,
        };
        for seed in 0..20 {
            let t = run_protocol(&c, &ProtocolConfig::default(), &mut strat, seed).unwrap();
            assert_eq!(t.traps.r1_total, 6);
            assert_eq!(t.traps.r1_passed, 3);
        }
    }

    struct Short;
    impl ServerStrategy for Short {
        fn name(&self) -> String {
            "short".into()
        }
        fn on_measure(
            &mut self,
            lab: &mut Lab,
            _round: usize,
            _layer: usize,
            angles: &[(Handle, Angle8)],
            _rng: &mut ChaCha8Rng,
        ) -> Result<Vec<bool>, ProtocolError> {
            let mut v = crate::protocol::server_measure(lab, angles)?;
            v.pop();
            Ok(v)
        }
    }

    struct Stale(Option<Handle>);
    impl ServerStrategy for Stale {
        fn name(&self) -> String {
            "stale".into()
        }
        fn on_receive(
            &mut self,
            lab: &mut Lab,
            _round: usize,
            handles: &[Handle],
            _rng: &mut ChaCha8Rng,
        ) -> Result<(), ProtocolError> {
            // a handle from the previous batch no longer resolves
            if let Some(old) = self.0 {
                lab.hadamard(old)?;
            }
            self.0 = handles.first().copied();
            Ok(())
        }
    }

    #[test]
    fn misbehaving_servers_are_rejected() {
        let c = Circuit::on_zero(&[GateLabel::I]);
        for branch in Branch::ALL {
            let config = ProtocolConfig {
                force_branch: Some(branch),
                ..ProtocolConfig::default()
            };
            let t = run_protocol(&c, &config, &mut Short, 3).unwrap();
            assert!(t.aborted.is_some() && !t.accepted());
            let t = run_protocol(&c, &config, &mut Stale(None), 3).unwrap();
            assert!(!t.accepted());
            assert!(t.aborted.unwrap().contains("handle"));
        }
    }

    #[test]
    fn trap_budget() {
        let c = Circuit::on_zero(&[GateLabel::I]);
        let config = ProtocolConfig {
            traps: TrapPolicy::PerUnit { r1_pairs: 0, r2: 7 },
            ..ProtocolConfig::default()
        };
        assert!(matches!(
            run_protocol(&c, &config, &mut Honest, 0),
            Err(ProtocolError::TrapBudgetExceeded { cap: 6, .. })
        ));
        let config = ProtocolConfig {
            traps: TrapPolicy::PerUnit { r1_pairs: 0, r2: 0 },
            ..ProtocolConfig::default()
        };
        let t = run_protocol(&c, &config, &mut Honest, 0).unwrap();
        // no R2: the re-sent batch is the returned one
        assert_eq!(t.messages[2].shape().2, t.messages[3].shape().2);
        assert!(matches!(
            run_protocol(&Circuit::on_zero(&[]), &ProtocolConfig::default(), &mut Honest, 0),
            Err(ProtocolError::EmptyCircuit)
        ));
    }
}
