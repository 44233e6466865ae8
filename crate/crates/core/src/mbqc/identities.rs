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
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::qsim::{GateSpec, QsimError, StateVector};

/// An operator product, written left to right as in `H·Rz(θ)·H`.
pub type Product = Vec<(GateSpec, Vec<usize>)>;

/// `lhs = e^{iφ}·rhs` on `qubits` qubits; `phase == None` means equality up
/// to an unspecified global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct GateIdentity {
    pub name: &'static str,
    pub qubits: usize,
    pub lhs: Product,
    pub rhs: Product,
    pub phase: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityCheck {
    pub name: &'static str,
    /// Largest `1 − |⟨L b|R b⟩|²` over computational basis inputs `b`.
    pub max_infidelity: f64,
    /// Largest entry of `|L − e^{iφ}R|`, with the stated phase or, when none
    /// is stated, the best-fitting one.
    pub matrix_deviation: f64,
}

fn one(g: GateSpec) -> Product {
    vec![(g, vec![0])]
}

fn rz(t: f64) -> (GateSpec, Vec<usize>) {
    (GateSpec::Rz(t), vec![0])
}

fn h() -> (GateSpec, Vec<usize>) {
    (GateSpec::H, vec![0])
}

/// The single- and two-qubit decompositions that the unit patterns realize.
pub fn gate_identities() -> Vec<GateIdentity> {
    let rx1 = |t: f64| (GateSpec::Rx(t), vec![1]);
    let cz = || (GateSpec::Cz, vec![0, 1]);
    let single = |name, g, rhs: Product, phase| GateIdentity {
        name,
        qubits: 1,
        lhs: one(g),
        rhs,
        phase: Some(phase),
    };
    vec![
        single("I", GateSpec::I, vec![h(), rz(0.0), h(), rz(0.0)], 0.0),
        single("S", GateSpec::S, vec![h(), rz(0.0), h(), rz(FRAC_PI_2)], FRAC_PI_4),
        single(
            "T",
            GateSpec::T,
            vec![h(), rz(0.0), h(), rz(FRAC_PI_4)],
            FRAC_PI_4 / 2.0,
        ),
        single("Z", GateSpec::Z, vec![h(), rz(0.0), h(), rz(PI)], FRAC_PI_2),
        single("H", GateSpec::H, vec![h(), rz(0.0), h(), rz(0.0), h(), rz(0.0)], 0.0),
        single("X", GateSpec::X, vec![h(), rz(PI), h(), rz(0.0)], FRAC_PI_2),
        single("Y", GateSpec::Y, vec![h(), rz(PI), h(), rz(PI)], -FRAC_PI_2),
        GateIdentity {
            name: "CNOT",
            qubits: 2,
            lhs: vec![(GateSpec::Cnot, vec![0, 1])],
            rhs: vec![rz(FRAC_PI_2), rx1(FRAC_PI_2), cz(), rx1(-FRAC_PI_2), cz()],
            phase: None,
        },
    ]
}

/// Commutation rules used to move rotations through CZ and H.
pub fn commutation_identities() -> Vec<GateIdentity> {
    let cz = || (GateSpec::Cz, vec![0, 1]);
    let mut out = Vec::new();
    for t in [FRAC_PI_4, FRAC_PI_2, PI, 0.37] {
        out.push(GateIdentity {
            name: "(Rz⊗I)CZ = CZ(Rz⊗I)",
            qubits: 2,
            lhs: vec![rz(t), cz()],
            rhs: vec![cz(), rz(t)],
            phase: Some(0.0),
        });
        out.push(GateIdentity {
            name: "H·Rz·H = Rx",
            qubits: 1,
            lhs: vec![h(), rz(t), h()],
            rhs: one(GateSpec::Rx(t)),
            phase: Some(0.0),
        });
    }
    out.push(GateIdentity {
        name: "(Rx(π)⊗I)CZ = e^{iπ/2}CZ(Rx(π)⊗Rz(π))",
        qubits: 2,
        lhs: vec![(GateSpec::Rx(PI), vec![0]), cz()],
        rhs: vec![cz(), (GateSpec::Rx(PI), vec![0]), (GateSpec::Rz(PI), vec![1])],
        phase: Some(FRAC_PI_2),
    });
    out.push(GateIdentity {
        name: "(Y⊗I)CZ = CZ(Y⊗Z)",
        qubits: 2,
        lhs: vec![(GateSpec::Y, vec![0]), cz()],
        rhs: vec![cz(), (GateSpec::Y, vec![0]), (GateSpec::Z, vec![1])],
        phase: Some(0.0),
    });
    out.push(GateIdentity {
        name: "H·Rz(−π/2)·H = Rx(−π/2)",
        qubits: 1,
        lhs: vec![h(), rz(-FRAC_PI_2), h()],
        rhs: one(GateSpec::Rx(-FRAC_PI_2)),
        phase: Some(0.0),
    });
    out.push(GateIdentity {
        name: "Rz(−π/2)·H = Rx(π/2)·Rz(π/2)",
        qubits: 1,
        lhs: vec![rz(-FRAC_PI_2), h()],
        rhs: vec![(GateSpec::Rx(FRAC_PI_2), vec![0]), rz(FRAC_PI_2)],
        phase: None,
    });
    out
}

fn columns(product: &Product, qubits: usize) -> Result<Vec<StateVector>, QsimError> {
    let dim = 1usize << qubits;
    (0..dim)
        .map(|b| {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[b] = Complex64::new(1.0, 0.0);
            let mut s = StateVector::from_amplitudes(amps)?;
            for (g, t) in product.iter().rev() {
                s.apply_in_place(g, t)?;
            }
            Ok(s)
        })
        .collect()
}

pub fn check_identity(id: &GateIdentity) -> Result<IdentityCheck, QsimError> {
    let l = columns(&id.lhs, id.qubits)?;
    let r = columns(&id.rhs, id.qubits)?;
    let mut max_infidelity: f64 = 0.0;
    let mut overlap = Complex64::new(0.0, 0.0);
    for (a, b) in l.iter().zip(&r) {
        let ip = b.inner(a)?;
        max_infidelity = max_infidelity.max(1.0 - ip.norm_sqr());
        overlap += ip;
    }
    let phase = id.phase.unwrap_or_else(|| overlap.arg());
    let factor = Complex64::cis(phase);
    let mut deviation: f64 = 0.0;
    for (a, b) in l.iter().zip(&r) {
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            deviation = deviation.max((x - factor * y).norm());
        }
    }
    Ok(IdentityCheck {
        name: id.name,
        max_infidelity,
        matrix_deviation: deviation,
    })
}
