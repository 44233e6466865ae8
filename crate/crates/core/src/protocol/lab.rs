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

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::{Handle, ProtocolError};
use crate::qsim::{Basis, GateSpec, Prep, QsimError, StateVector};
use crate::Angle8;

/// Physical identity of a qubit, known only to the client and the lab.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QubitId(pub(crate) u32);

#[derive(Clone, Debug)]
struct Block {
    qubits: Vec<QubitId>,
    state: StateVector,
}

/// The server's quantum memory.
///
/// Qubits live in product blocks that merge when a two-qubit gate couples
/// them and split when a qubit is measured. The server addresses qubits only
/// through [`Handle`]s; measurement randomness comes from the lab's own
/// stream, not the server's.
#[derive(Clone, Debug)]
pub struct Lab {
    blocks: Vec<Block>,
    location: BTreeMap<QubitId, usize>,
    handles: BTreeMap<Handle, QubitId>,
    next_qubit: u32,
    next_handle: u32,
    nature: ChaCha8Rng,
}

impl Lab {
    pub fn new(nature: ChaCha8Rng) -> Lab {
        Lab {
            blocks: Vec::new(),
            location: BTreeMap::new(),
            handles: BTreeMap::new(),
            next_qubit: 0,
            next_handle: 0,
            nature,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.location.len()
    }

    pub fn contains(&self, h: Handle) -> bool {
        self.handles.contains_key(&h)
    }

    /// Qubits in the largest entangled block.
    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.qubits.len()).max().unwrap_or(0)
    }

    pub fn cz(&mut self, a: Handle, b: Handle) -> Result<(), ProtocolError> {
        self.apply(&GateSpec::Cz, &[a, b])
    }

    pub fn hadamard(&mut self, h: Handle) -> Result<(), ProtocolError> {
        self.apply(&GateSpec::H, &[h])
    }

    /// Applies any simulator gate to the addressed qubits.
    pub fn apply(&mut self, gate: &GateSpec, targets: &[Handle]) -> Result<(), ProtocolError> {
        if targets.len() != gate.arity() {
            return Err(QsimError::ArityMismatch {
                gate: gate.name(),
                expected: gate.arity(),
                got: targets.len(),
            }
            .into());
        }
        let ids = targets
            .iter()
            .map(|&h| self.resolve(h))
            .collect::<Result<Vec<_>, _>>()?;
        for pair in ids.windows(2) {
            self.merge(pair[0], pair[1])?;
        }
        let b = self.location[&ids[0]];
        let block = &mut self.blocks[b];
        let positions: Vec<usize> = ids
            .iter()
            .map(|q| block.qubits.iter().position(|x| x == q).expect("qubit in its block"))
            .collect();
        block.state.apply_in_place(gate, &positions)?;
        Ok(())
    }

    pub fn measure_planar(&mut self, h: Handle, angle: Angle8) -> Result<bool, ProtocolError> {
        self.measure(h, Basis::Planar(angle.radians()))
    }

    pub fn measure_computational(&mut self, h: Handle) -> Result<bool, ProtocolError> {
        self.measure(h, Basis::Computational)
    }

    /// Measures and leaves the qubit in its post-measurement state,
    /// detached from everything else.
    pub fn measure(&mut self, h: Handle, basis: Basis) -> Result<bool, ProtocolError> {
        let q = self.resolve(h)?;
        let b = self.location[&q];
        let pos = self.blocks[b]
            .qubits
            .iter()
            .position(|&x| x == q)
            .expect("qubit in its block");
        let removal = self.blocks[b].state.measure_out(pos, basis, &mut self.nature)?;
        let post = match basis {
            Basis::Computational => {
                let (zero, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
                if removal.outcome {
                    [zero, one]
                } else {
                    [one, zero]
                }
            }
            Basis::Planar(angle) => crate::qsim::planar_ket(angle, removal.outcome),
        };
        let single = StateVector::from_amplitudes(post.to_vec())?;
        match removal.rest {
            Some(rest) => {
                self.blocks[b].qubits.remove(pos);
                self.blocks[b].state = rest;
                self.push_block(q, single);
            }
            None => self.blocks[b].state = single,
        }
        Ok(removal.outcome)
    }

    /// Discards whatever sits behind `h` and puts a fresh `prep` there.
    pub fn replace(&mut self, h: Handle, prep: Prep) -> Result<(), ProtocolError> {
        self.measure_computational(h)?;
        let q = self.resolve(h)?;
        let b = self.location[&q];
        self.blocks[b].state = StateVector::prepare(&[prep])?;
        Ok(())
    }

    pub(crate) fn create(&mut self, prep: Prep) -> Result<QubitId, ProtocolError> {
        let q = QubitId(self.next_qubit);
        self.next_qubit += 1;
        self.push_block(q, StateVector::prepare(&[prep])?);
        Ok(q)
    }

    /// Retires any existing handles of `qubits` and hands out fresh ones in
    /// the given order.
    pub(crate) fn assign_handles(&mut self, qubits: &[QubitId]) -> Vec<Handle> {
        self.handles.retain(|_, q| !qubits.contains(q));
        qubits
            .iter()
            .map(|&q| {
                let h = Handle(self.next_handle);
                self.next_handle += 1;
                self.handles.insert(h, q);
                h
            })
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn state_of(&self, h: Handle) -> Option<(Vec<Handle>, StateVector)> {
        let q = *self.handles.get(&h)?;
        let block = &self.blocks[self.location[&q]];
        let inverse: BTreeMap<QubitId, Handle> = self.handles.iter().map(|(h, q)| (*q, *h)).collect();
        let hs = block.qubits.iter().map(|q| inverse[q]).collect();
        Some((hs, block.state.clone()))
    }

    fn resolve(&self, h: Handle) -> Result<QubitId, ProtocolError> {
        self.handles.get(&h).copied().ok_or(ProtocolError::UnknownHandle(h))
    }

    fn push_block(&mut self, q: QubitId, state: StateVector) {
        self.location.insert(q, self.blocks.len());
        self.blocks.push(Block {
            qubits: alloc::vec![q],
            state,
        });
    }

    fn merge(&mut self, a: QubitId, b: QubitId) -> Result<(), ProtocolError> {
        let (ba, bb) = (self.location[&a], self.location[&b]);
        if ba == bb {
            return Ok(());
        }
        let (keep, gone) = (ba.min(bb), ba.max(bb));
        let taken = self.blocks.swap_remove(gone);
        if gone < self.blocks.len() {
            for q in &self.blocks[gone].qubits {
                self.location.insert(*q, gone);
            }
        }
        let block = &mut self.blocks[keep];
        block.state = block.state.tensor(&taken.state)?;
        for q in taken.qubits {
            self.location.insert(q, keep);
            block.qubits.push(q);
        }
        Ok(())
    }
}
