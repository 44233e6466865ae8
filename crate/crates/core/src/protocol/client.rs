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

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::lab::{Lab, QubitId};
use super::message::Handle;
use super::{unit_columns, Circuit, InputState, ProtocolConfig, ProtocolError, TrapPolicy};
use crate::mbqc::{absorb_cnot_correction, adaptive_angle, gate_pattern, Correction, PlacedGate, UnitKind, Wire};
use crate::qsim::Prep;
use crate::Angle8;

/// What a qubit is for; known only to the client.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum QubitRole {
    /// A logical input of `wire`.
    Input {
        wire: Wire,
    },
    /// Unit vertex `vertex` of round `round`.
    Vertex {
        round: usize,
        vertex: usize,
    },
    /// The extra qubit that carries a Hadamard correction on `wire`.
    Hop {
        round: usize,
        wire: Wire,
    },
    R1,
    R2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct R1Trap {
    pub qubit: QubitId,
    pub round: usize,
    /// `false` for `|0⟩`, `true` for `|1⟩`.
    pub value: bool,
    pub layer: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct R2Trap {
    pub qubit: QubitId,
    pub round: usize,
    pub phi: Angle8,
    /// `|−_φ⟩` rather than `|+_φ⟩`.
    pub minus: bool,
    /// Decoy: the server is told to apply H first.
    pub hadamard: bool,
    pub layer: usize,
}

/// The client's private randomness and layout.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClientSecret {
    pub kappas: BTreeMap<QubitId, Angle8>,
    /// One-time pad bit of every measurement, by qubit.
    pub r_bits: BTreeMap<QubitId, bool>,
    pub trap_layout_r1: Vec<R1Trap>,
    pub trap_layout_r2: Vec<R2Trap>,
    pub h_instructions: Vec<QubitId>,
    pub roles: BTreeMap<QubitId, QubitRole>,
}

/// Per-unit results as the client sees them.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitRecord {
    pub gate: PlacedGate,
    pub unit_kind: UnitKind,
    /// Reported bits of computation qubits, in measurement order.
    pub outcomes: Vec<bool>,
    /// Reported bits of trap qubits, in measurement order.
    pub trap_outcomes: Vec<bool>,
}

/// Trap results of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrapTally {
    pub r1_passed: usize,
    pub r1_total: usize,
    pub r2_passed: usize,
    pub r2_total: usize,
}

#[derive(Clone, Copy, Debug)]
enum Job {
    /// Computation qubit measured at `base` before adaptation.
    Compute { qubit: QubitId, base: Angle8 },
    /// Trap measured at a fixed angle; `expect` is the decoded bit an honest
    /// server produces.
    Trap {
        qubit: QubitId,
        angle: Angle8,
        expect: bool,
    },
    /// Computational-basis readout of an output.
    Readout { qubit: QubitId, wire: Wire },
}

#[derive(Clone, Debug)]
struct Round {
    qubits: Vec<QubitId>,
    edges: Vec<(QubitId, QubitId)>,
    successor: BTreeMap<QubitId, QubitId>,
    layers: Vec<Vec<Job>>,
    h_qubits: Vec<QubitId>,
    absorb_on: BTreeSet<QubitId>,
    outputs: [QubitId; 2],
    /// Sent but unanswered layer: job and pad bit per handle.
    pending: Option<BTreeMap<Handle, (Job, bool)>>,
    record: Option<UnitRecord>,
}

/// Client state machine.
///
/// A run calls [`begin_round`](Self::begin_round),
/// [`entangle_order`](Self::entangle_order),
/// [`insert_r2`](Self::insert_r2), [`h_order`](Self::h_order) and, per layer,
/// [`angles`](Self::angles) / [`receive_outcomes`](Self::receive_outcomes),
/// then [`end_round`](Self::end_round); after the last unit the same layer
/// calls follow [`begin_readout`](Self::begin_readout).
#[derive(Clone, Debug)]
pub struct Client {
    circuit: Circuit,
    config: ProtocolConfig,
    rng: ChaCha8Rng,
    secret: ClientSecret,
    frames: BTreeMap<QubitId, (bool, bool)>,
    current: Option<[QubitId; 2]>,
    absorb: [bool; 2],
    handle_of: BTreeMap<QubitId, Handle>,
    round: Option<Round>,
    r1_budget: Vec<usize>,
    trap_pass: BTreeMap<QubitId, bool>,
    decoded: [Option<bool>; 2],
    flips: [bool; 2],
    records: Vec<UnitRecord>,
    malformed: bool,
}

impl Client {
    pub fn new(circuit: Circuit, config: ProtocolConfig, rng: ChaCha8Rng) -> Result<Client, ProtocolError> {
        config.validate()?;
        if circuit.gates.is_empty() {
            return Err(ProtocolError::EmptyCircuit);
        }
        let r1_budget = match config.traps {
            TrapPolicy::ColumnSpread => circuit
                .gates
                .iter()
                .enumerate()
                .map(|(i, g)| config.m1 * (unit_columns(g.gate.unit_kind()) + usize::from(i == 0)))
                .collect(),
            TrapPolicy::PerUnit { r1_pairs, .. } => vec![r1_pairs; circuit.gates.len()],
        };
        Ok(Client {
            circuit,
            config,
            rng,
            secret: ClientSecret::default(),
            frames: BTreeMap::new(),
            current: None,
            absorb: [false; 2],
            handle_of: BTreeMap::new(),
            round: None,
            r1_budget,
            trap_pass: BTreeMap::new(),
            decoded: [None; 2],
            flips: [false; 2],
            records: Vec::new(),
            malformed: false,
        })
    }

    pub fn secret(&self) -> &ClientSecret {
        &self.secret
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn num_units(&self) -> usize {
        self.circuit.gates.len()
    }

    /// `R1` pairs and `R2` traps planned for unit `t`.
    pub fn trap_counts(&self, t: usize) -> (usize, usize) {
        let pairs = self.r1_budget[t];
        let r2 = match self.config.traps {
            TrapPolicy::ColumnSpread => pairs,
            TrapPolicy::PerUnit { r2, .. } => r2,
        };
        (pairs, r2)
    }

    /// Set once the server has answered with an outcome list of the wrong
    /// length; the client stops processing from then on.
    pub fn is_malformed(&self) -> bool {
        self.malformed
    }

    pub(crate) fn mark_malformed(&mut self) {
        self.malformed = true;
    }

    /// Completed unit records.
    pub fn records(&self) -> &[UnitRecord] {
        &self.records
    }

    /// Decoded output bits once the readout has been answered.
    pub fn decoded(&self) -> Option<[bool; 2]> {
        match self.decoded {
            [Some(a), Some(b)] => Some([a, b]),
            _ => None,
        }
    }

    /// Pad bits removed from the readout outcomes, by wire.
    pub fn readout_flips(&self) -> [bool; 2] {
        self.flips
    }

    /// Whether every `R1` (respectively `R2`) trap came back as predicted.
    /// Traps without an answer count as failed.
    pub fn trap_verdicts(&self) -> (bool, bool) {
        let ok = |q: &QubitId| self.trap_pass.get(q).copied().unwrap_or(false);
        (
            self.secret.trap_layout_r1.iter().all(|t| ok(&t.qubit)),
            self.secret.trap_layout_r2.iter().all(|t| ok(&t.qubit)),
        )
    }

    pub fn trap_tally(&self) -> TrapTally {
        let ok = |q: &QubitId| self.trap_pass.get(q).copied().unwrap_or(false);
        let r1 = &self.secret.trap_layout_r1;
        let r2 = &self.secret.trap_layout_r2;
        TrapTally {
            r1_passed: r1.iter().filter(|t| ok(&t.qubit)).count(),
            r1_total: r1.len(),
            r2_passed: r2.iter().filter(|t| ok(&t.qubit)).count(),
            r2_total: r2.len(),
        }
    }

    /// Current Pauli frame `(x, z)` of a qubit.
    pub fn frame(&self, q: QubitId) -> Option<(bool, bool)> {
        self.frames.get(&q).copied()
    }

    fn fresh(&mut self, lab: &mut Lab, prep: Prep, kappa: Angle8, role: QubitRole) -> Result<QubitId, ProtocolError> {
        let q = lab.create(prep)?;
        self.secret.kappas.insert(q, kappa);
        self.secret.roles.insert(q, role);
        self.frames.insert(q, (false, false));
        Ok(q)
    }

    /// A logical input, one-time padded: `|b⟩` goes out as `|b ⊕ a⟩` with
    /// frame `X^a`, `|+_k⟩` as `|+_{k+κ+cπ}⟩` with frame `Z^c`.
    fn encode_input(&mut self, lab: &mut Lab, wire: Wire) -> Result<QubitId, ProtocolError> {
        let kappa = Angle8::random(&mut self.rng);
        let pad: bool = self.rng.random();
        let role = QubitRole::Input { wire };
        let (prep, frame) = match self.circuit.inputs[wire.index()] {
            InputState::Zero => (if pad { Prep::One } else { Prep::Zero }, (pad, false)),
            InputState::One => (if pad { Prep::Zero } else { Prep::One }, (pad, false)),
            InputState::Plus(k) => (Prep::Plus(k + kappa + Angle8::pi_if(pad)), (false, pad)),
        };
        let q = self.fresh(lab, prep, kappa, role)?;
        self.frames.insert(q, frame);
        Ok(q)
    }

    fn assign(&mut self, lab: &mut Lab, qubits: &[QubitId]) -> Vec<Handle> {
        let hs = lab.assign_handles(qubits);
        for (q, h) in qubits.iter().zip(&hs) {
            self.handle_of.insert(*q, *h);
        }
        hs
    }

    /// Layers for `count` traps: the counts per layer are fixed by
    /// `(offset, count, layers)`, only which trap lands where is random.
    fn trap_slots(&mut self, offset: usize, count: usize, layers: usize) -> Vec<usize> {
        let mut slots: Vec<usize> = (offset..offset + count).map(|i| i % layers).collect();
        slots.shuffle(&mut self.rng);
        slots
    }

    fn round(&self) -> &Round {
        self.round.as_ref().expect("a round is open")
    }

    fn round_mut(&mut self) -> &mut Round {
        self.round.as_mut().expect("a round is open")
    }

    /// Opens unit `t`: fresh computation qubits plus `R1` pairs, shuffled
    /// under new handles. Returns the batch.
    pub fn begin_round(&mut self, lab: &mut Lab, t: usize) -> Result<Vec<Handle>, ProtocolError> {
        let placed = self.circuit.gates[t];
        let (unit, pattern) = gate_pattern(placed);
        let mut new_qubits = Vec::new();
        let inputs = match self.current {
            Some(cur) => cur,
            None => {
                let a = self.encode_input(lab, Wire::Top)?;
                let b = self.encode_input(lab, Wire::Bottom)?;
                new_qubits.extend([a, b]);
                [a, b]
            }
        };

        let mut vq = Vec::with_capacity(unit.num_vertices());
        for v in 0..unit.num_vertices() {
            if unit.column_of(v) == 0 {
                vq.push(inputs[unit.wire_of(v).index()]);
            } else {
                let kappa = Angle8::random(&mut self.rng);
                let q = self.fresh(lab, Prep::Plus(kappa), kappa, QubitRole::Vertex { round: t, vertex: v })?;
                new_qubits.push(q);
                vq.push(q);
            }
        }
        let mut edges: Vec<(QubitId, QubitId)> = unit.edges.iter().map(|&(a, b)| (vq[a], vq[b])).collect();
        let mut successor = BTreeMap::new();
        for v in 0..unit.num_vertices() {
            if let Some(f) = unit.successor(v) {
                successor.insert(vq[v], vq[f]);
            }
        }
        let mut outputs = Wire::BOTH.map(|w| vq[unit.output(w)]);
        let mut layers: Vec<Vec<Job>> = vec![Vec::new(); pattern.num_layers()];
        for c in &pattern.commands {
            layers[c.layer].push(Job::Compute {
                qubit: vq[c.vertex],
                base: c.angle,
            });
        }
        // a Hadamard correction runs as one more wire hop: H = H·Rz(0)
        let mut hop_layer = Vec::new();
        for corr in &pattern.corrections {
            if let Correction::Hadamard(wire) = *corr {
                let kappa = Angle8::random(&mut self.rng);
                let h = self.fresh(lab, Prep::Plus(kappa), kappa, QubitRole::Hop { round: t, wire })?;
                new_qubits.push(h);
                let out = outputs[wire.index()];
                edges.push((out, h));
                successor.insert(out, h);
                hop_layer.push(Job::Compute {
                    qubit: out,
                    base: Angle8::ZERO,
                });
                outputs[wire.index()] = h;
            }
        }
        if !hop_layer.is_empty() {
            layers.push(hop_layer);
        }

        let absorb_on = Wire::BOTH
            .into_iter()
            .filter(|w| self.absorb[w.index()])
            .map(|w| inputs[w.index()])
            .collect();
        self.absorb = Wire::BOTH.map(|w| pattern.absorbs_on(w));

        let (pairs, _) = self.trap_counts(t);
        let slots = self.trap_slots(0, 2 * pairs, layers.len());
        let mut h_qubits = Vec::new();
        for (i, layer) in slots.into_iter().enumerate() {
            let value = i % 2 == 1;
            let prep = if value { Prep::One } else { Prep::Zero };
            let q = self.fresh(lab, prep, Angle8::ZERO, QubitRole::R1)?;
            self.secret.trap_layout_r1.push(R1Trap {
                qubit: q,
                round: t,
                value,
                layer,
            });
            self.secret.h_instructions.push(q);
            layers[layer].push(Job::Trap {
                qubit: q,
                angle: Angle8::ZERO,
                expect: value,
            });
            h_qubits.push(q);
            new_qubits.push(q);
        }
        let mut batch = new_qubits.clone();
        batch.shuffle(&mut self.rng);
        let handles = self.assign(lab, &batch);

        let mut qubits = Vec::new();
        if self.current.is_some() {
            qubits.extend(inputs);
        }
        qubits.extend(new_qubits);
        self.round = Some(Round {
            qubits,
            edges,
            successor,
            layers,
            h_qubits,
            absorb_on,
            outputs,
            pending: None,
            record: Some(UnitRecord {
                gate: placed,
                unit_kind: unit.kind,
                outcomes: Vec::new(),
                trap_outcomes: Vec::new(),
            }),
        });
        Ok(handles)
    }

    /// CZ edges of the open round, and the matching frame update: a pending
    /// `X` on one end becomes a `Z` on the other.
    pub fn entangle_order(&mut self) -> Vec<(Handle, Handle)> {
        let edges = self.round().edges.clone();
        for &(a, b) in &edges {
            let (xa, xb) = (self.frames[&a].0, self.frames[&b].0);
            self.frames.get_mut(&b).expect("framed").1 ^= xa;
            self.frames.get_mut(&a).expect("framed").1 ^= xb;
        }
        let mut out: Vec<(Handle, Handle)> = edges
            .iter()
            .map(|(a, b)| {
                let (ha, hb) = (self.handle_of[a], self.handle_of[b]);
                (ha.min(hb), ha.max(hb))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Handles the server should send back after entangling.
    pub fn expected_return(&self) -> Vec<Handle> {
        let mut hs: Vec<Handle> = self.round().qubits.iter().map(|q| self.handle_of[q]).collect();
        hs.sort_unstable();
        hs
    }

    /// Splices the unit's `R2` traps into the returned qubits and reshuffles
    /// everything under fresh handles.
    pub fn insert_r2(&mut self, lab: &mut Lab, t: usize) -> Result<Vec<Handle>, ProtocolError> {
        let (_, count) = self.trap_counts(t);
        let kind = self.circuit.gates[t].gate.unit_kind();
        if count > kind.r2_cap() {
            return Err(ProtocolError::TrapBudgetExceeded {
                kind,
                requested: count,
                cap: kind.r2_cap(),
            });
        }
        let num_layers = self.round().layers.len();
        let (pairs, _) = self.trap_counts(t);
        let slots = self.trap_slots(2 * pairs, count, num_layers);
        let decoys = libm::round(self.config.camouflage * count as f64) as usize;
        let mut hadamards: Vec<bool> = (0..count).map(|j| j < decoys).collect();
        hadamards.shuffle(&mut self.rng);
        let mut all = self.round().qubits.clone();
        for (layer, hadamard) in slots.into_iter().zip(hadamards) {
            // H maps |±_φ⟩ to |±_{−φ}⟩ only for φ ∈ {π/2, 3π/2}
            let phi = if hadamard {
                [Angle8::HALF_PI, Angle8::THREE_HALVES_PI][usize::from(self.rng.random::<bool>())]
            } else {
                Angle8::random(&mut self.rng)
            };
            let minus: bool = self.rng.random();
            let prep = if minus { Prep::Minus(phi) } else { Prep::Plus(phi) };
            let q = self.fresh(lab, prep, phi, QubitRole::R2)?;
            self.secret.trap_layout_r2.push(R2Trap {
                qubit: q,
                round: t,
                phi,
                minus,
                hadamard,
                layer,
            });
            let round = self.round.as_mut().expect("a round is open");
            round.layers[layer].push(Job::Trap {
                qubit: q,
                angle: if hadamard { -phi } else { phi },
                expect: minus,
            });
            if hadamard {
                round.h_qubits.push(q);
                self.secret.h_instructions.push(q);
            }
            round.qubits.push(q);
            all.push(q);
        }
        all.shuffle(&mut self.rng);
        Ok(self.assign(lab, &all))
    }

    /// Qubits that receive H before measurement.
    pub fn h_order(&self) -> Vec<Handle> {
        let mut hs: Vec<Handle> = self.round().h_qubits.iter().map(|q| self.handle_of[q]).collect();
        hs.sort_unstable();
        hs
    }

    pub fn num_layers(&self) -> usize {
        self.round().layers.len()
    }

    /// Sent angles for `layer`, sorted by handle.
    pub fn angles(&mut self, layer: usize) -> Result<Vec<(Handle, Angle8)>, ProtocolError> {
        if self.round().pending.is_some() || self.malformed {
            return Err(ProtocolError::MissingDependency);
        }
        let jobs = self.round().layers[layer].clone();
        let mut pending = BTreeMap::new();
        for job in jobs {
            let r: bool = self.rng.random();
            let q = match job {
                Job::Compute { qubit, .. } | Job::Trap { qubit, .. } | Job::Readout { qubit, .. } => qubit,
            };
            self.secret.r_bits.insert(q, r);
            pending.insert(self.handle_of[&q], (job, r));
        }
        let out = pending
            .iter()
            .map(|(h, (job, r))| (*h, angle_of(job, *r, self)))
            .collect();
        self.round_mut().pending = Some(pending);
        Ok(out)
    }

    /// Processes the server's answer to the last [`angles`](Self::angles).
    /// Returns `false` (and marks the run malformed) on a length mismatch.
    pub fn receive_outcomes(&mut self, outcomes: &[bool]) -> bool {
        let Some(pending) = self.round_mut().pending.take() else {
            self.malformed = true;
            return false;
        };
        if pending.len() != outcomes.len() {
            self.malformed = true;
            return false;
        }
        for ((_, &(job, r)), &b) in pending.iter().zip(outcomes) {
            match job {
                Job::Compute { qubit, .. } => {
                    let s = b ^ r;
                    let round = self.round.as_ref().expect("a round is open");
                    let f = round.successor[&qubit];
                    let kicked: Vec<QubitId> = round
                        .edges
                        .iter()
                        .filter_map(|&(a, c)| match (a == f, c == f) {
                            (true, _) if c != qubit => Some(c),
                            (_, true) if a != qubit => Some(a),
                            _ => None,
                        })
                        .collect();
                    self.frames.get_mut(&f).expect("framed").0 ^= s;
                    for w in kicked {
                        self.frames.get_mut(&w).expect("framed").1 ^= s;
                    }
                    if let Some(rec) = self.round_mut().record.as_mut() {
                        rec.outcomes.push(b);
                    }
                }
                Job::Trap { qubit, expect, .. } => {
                    self.trap_pass.insert(qubit, b ^ r == expect);
                    if let Some(rec) = self.round_mut().record.as_mut() {
                        rec.trap_outcomes.push(b);
                    }
                }
                Job::Readout { qubit, wire } => {
                    let x = self.frames[&qubit].0;
                    self.decoded[wire.index()] = Some(b ^ r ^ x);
                    self.flips[wire.index()] = r;
                }
            }
        }
        true
    }

    /// Closes the unit round.
    pub fn end_round(&mut self) {
        let round = self.round.take().expect("a round is open");
        self.current = Some(round.outputs);
        if let Some(rec) = round.record {
            self.records.push(rec);
        }
    }

    /// Opens the readout round; returns the H-ordered outputs.
    pub fn begin_readout(&mut self) -> Vec<Handle> {
        let outputs = self.current.expect("all units done");
        let jobs = Wire::BOTH
            .map(|wire| Job::Readout {
                qubit: outputs[wire.index()],
                wire,
            })
            .to_vec();
        self.round = Some(Round {
            qubits: outputs.to_vec(),
            edges: Vec::new(),
            successor: BTreeMap::new(),
            layers: vec![jobs],
            h_qubits: outputs.to_vec(),
            absorb_on: BTreeSet::new(),
            outputs,
            pending: None,
            record: None,
        });
        self.h_order()
    }
}

fn angle_of(job: &Job, r: bool, client: &Client) -> Angle8 {
    match *job {
        Job::Compute { qubit, base } => {
            let round = client.round.as_ref().expect("a round is open");
            let base = if round.absorb_on.contains(&qubit) {
                absorb_cnot_correction(base)
            } else {
                base
            };
            let (x, z) = client.frames[&qubit];
            adaptive_angle(base, x, z, client.secret.kappas[&qubit], r)
        }
        Job::Trap { angle, .. } => angle + Angle8::pi_if(r),
        Job::Readout { .. } => Angle8::pi_if(r),
    }
}

/// Creates a client and its first batch.
pub fn client_prepare(
    circuit: Circuit,
    config: ProtocolConfig,
    rng: ChaCha8Rng,
    lab: &mut Lab,
) -> Result<(Client, Vec<Handle>), ProtocolError> {
    let mut client = Client::new(circuit, config, rng)?;
    let batch = client.begin_round(lab, 0)?;
    Ok((client, batch))
}

/// Honest entangling: exactly the ordered CZs.
pub fn server_entangle(lab: &mut Lab, edges: &[(Handle, Handle)]) -> Result<(), ProtocolError> {
    for &(a, b) in edges {
        lab.cz(a, b)?;
    }
    Ok(())
}

/// Honest Hadamards.
pub fn server_h_order(lab: &mut Lab, handles: &[Handle]) -> Result<(), ProtocolError> {
    for &h in handles {
        lab.hadamard(h)?;
    }
    Ok(())
}

/// Honest measurement, in list order.
pub fn server_measure(lab: &mut Lab, angles: &[(Handle, Angle8)]) -> Result<Vec<bool>, ProtocolError> {
    angles.iter().map(|&(h, a)| lab.measure_planar(h, a)).collect()
}
