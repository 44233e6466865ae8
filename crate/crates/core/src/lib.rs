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

//! Simulation core for measurement-based blind quantum computation on a
//! latticed cluster state built from six- and eight-qubit units.
//!
//! The crate is `no_std` (it needs `alloc`). It contains:
//!
//! * [`qsim`]: a dense statevector simulator with planar-basis measurement,
//!   density matrices and trace distance.
//! * [`mbqc`]: lattice construction, unit clusters, gate to measurement
//!   pattern compilation and the exhaustive branch oracle.
//! * [`protocol`]: client and server state machines for the interactive
//!   protocol, with trap qubits and the probabilistic accept/test decision.
//! * [`adversary`]: server strategies used to probe soundness.
//! * [`analysis`]: closed-form bounds, the 18-state average and Monte Carlo
//!   acceptance estimation.
//!
//! Basis index convention: qubit 0 is the most significant bit of a basis
//! index, so `|q0 q1 … q(n-1)⟩` has index `q0·2^(n-1) + … + q(n-1)`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversary;
pub mod analysis;
pub mod angle;
pub mod mbqc;
pub mod protocol;
pub mod qsim;
pub mod rng;

pub use angle::Angle8;
