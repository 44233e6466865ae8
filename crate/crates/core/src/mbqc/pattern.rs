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

use super::unit::{ClusterUnit, UnitKind};
use super::{GateLabel, PlacedGate, Wire};
use crate::Angle8;

/// One measurement: vertex, base angle and the earlier vertices whose
/// outcomes flip its angle sign (`x_deps`) or add `π` (`z_deps`).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Command {
    pub vertex: usize,
    pub angle: Angle8,
    pub x_deps: Vec<usize>,
    pub z_deps: Vec<usize>,
    /// Column layer; all commands of a layer can be measured together.
    pub layer: usize,
}

/// Gate left on an output once the pattern has run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Correction {
    Hadamard(Wire),
    /// `Rz(−π/2)`, absorbed into the next measurement on the wire.
    RzMinusHalfPi(Wire),
}

impl Correction {
    pub fn wire(self) -> Wire {
        match self {
            Correction::Hadamard(w) | Correction::RzMinusHalfPi(w) => w,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasurementPattern {
    pub gate: PlacedGate,
    pub commands: Vec<Command>,
    /// Pauli byproduct dependencies `(x_deps, z_deps)` of each output,
    /// indexed by wire.
    pub output_deps: [(Vec<usize>, Vec<usize>); 2],
    pub corrections: Vec<Correction>,
}

impl MeasurementPattern {
    /// The `Rz` arguments `ρ = −θ` of the measured columns, per wire.
    pub fn rotations(&self, unit: &ClusterUnit) -> [Vec<Angle8>; 2] {
        let mut out = [Vec::new(), Vec::new()];
        for c in &self.commands {
            out[unit.wire_of(c.vertex).index()].push(-c.angle);
        }
        out
    }

    pub fn num_layers(&self) -> usize {
        self.commands.iter().map(|c| c.layer + 1).max().unwrap_or(0)
    }

    pub fn command(&self, vertex: usize) -> Option<&Command> {
        self.commands.iter().find(|c| c.vertex == vertex)
    }

    /// True iff a pending `Rz(−π/2)` is left on `wire`.
    pub fn absorbs_on(&self, wire: Wire) -> bool {
        self.corrections.contains(&Correction::RzMinusHalfPi(wire))
    }
}

/// Rotations `ρ` in steps of `π/4`, column by column, for the gate's own wire
/// and the other wire.
fn rotation_table(gate: GateLabel) -> ([i64; 3], [i64; 3]) {
    match gate {
        GateLabel::I => ([0, 0, 0], [0, 0, 0]),
        GateLabel::S => ([2, 0, 0], [0, 0, 0]),
        GateLabel::T => ([1, 0, 0], [0, 0, 0]),
        GateLabel::Z => ([4, 0, 0], [0, 0, 0]),
        GateLabel::X => ([0, 4, 0], [4, 0, 0]),
        GateLabel::Y => ([4, 4, 0], [4, 0, 0]),
        GateLabel::H => ([0, 0, 0], [0, 0, 0]),
        // wire = control, other = target
        GateLabel::Cnot => ([0, 0, 2], [0, -2, -2]),
    }
}

/// Compiles a gate into its unit and measurement pattern.
pub fn gate_pattern(placed: impl Into<PlacedGate>) -> (ClusterUnit, MeasurementPattern) {
    let placed = placed.into();
    let unit = ClusterUnit::new(placed.gate.unit_kind());
    let (own, other) = rotation_table(placed.gate);
    let rho = |wire: Wire, col: usize| {
        let row = if wire == placed.wire { own } else { other };
        Angle8::new(row[col])
    };

    let measured = unit.width() - 1;
    let mut x_deps = vec![Vec::new(); unit.num_vertices()];
    let mut z_deps = vec![Vec::new(); unit.num_vertices()];
    let mut commands = Vec::new();
    for col in 0..measured {
        for wire in Wire::BOTH {
            let v = unit.vertex(wire, col);
            commands.push(Command {
                vertex: v,
                angle: -rho(wire, col),
                x_deps: x_deps[v].clone(),
                z_deps: z_deps[v].clone(),
                layer: col,
            });
        }
        for wire in Wire::BOTH {
            let v = unit.vertex(wire, col);
            let f = v + 1;
            x_deps[f].push(v);
            for w in unit.neighbors(f) {
                if w != v {
                    z_deps[w].push(v);
                }
            }
        }
    }
    let output_deps = Wire::BOTH.map(|w| {
        let o = unit.output(w);
        (x_deps[o].clone(), z_deps[o].clone())
    });

    let corrections = match placed.gate {
        GateLabel::H => vec![Correction::Hadamard(placed.wire.other())],
        GateLabel::Cnot => vec![
            Correction::Hadamard(placed.wire),
            Correction::RzMinusHalfPi(placed.wire.other()),
        ],
        _ => Vec::new(),
    };
    debug_assert_eq!(commands.len(), unit.num_measured());
    debug_assert!(unit.kind == UnitKind::Eight || corrections.is_empty());

    let pattern = MeasurementPattern {
        gate: placed,
        commands,
        output_deps,
        corrections,
    };
    (unit, pattern)
}

impl From<GateLabel> for PlacedGate {
    fn from(gate: GateLabel) -> PlacedGate {
        PlacedGate::top(gate)
    }
}

/// `(−1)^sx·θ + sz·π + κ + r·π`.
pub fn adaptive_angle(theta: Angle8, sx: bool, sz: bool, kappa: Angle8, r: bool) -> Angle8 {
    let signed = if sx { -theta } else { theta };
    signed + Angle8::pi_if(sz) + kappa + Angle8::pi_if(r)
}

/// Folds a pending `Rz(−π/2)` into the following measurement angle.
///
/// Measuring `Rz(−π/2)|ψ⟩` at `η` has the same statistics as measuring
/// `|ψ⟩` at `η + π/2` in the `|±_η⟩ = (|0⟩ ± e^{iη}|1⟩)/√2` basis.
pub fn absorb_cnot_correction(eta: Angle8) -> Angle8 {
    eta + Angle8::HALF_PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{GateSpec, Prep, StateVector};

    #[test]
    fn pattern_angles() {
        let (unit, p) = gate_pattern(GateLabel::I);
        assert_eq!(unit.kind, UnitKind::Six);
        assert!(p.commands.iter().all(|c| c.angle == Angle8::ZERO));
        assert_eq!(p.commands.len(), 4);

        let (unit, p) = gate_pattern(GateLabel::T);
        let rot = p.rotations(&unit);
        assert_eq!(rot[0], [Angle8::QUARTER_PI, Angle8::ZERO]);
        assert_eq!(rot[1], [Angle8::ZERO, Angle8::ZERO]);
        assert_eq!(p.command(0).unwrap().angle, Angle8::new(7));

        let (unit, p) = gate_pattern(GateLabel::Cnot);
        assert_eq!(unit.kind, UnitKind::Eight);
        assert!(p.corrections.contains(&Correction::Hadamard(Wire::Top)));
        assert!(p.absorbs_on(Wire::Bottom));
        assert_eq!(p.num_layers(), 3);
    }

    #[test]
    fn dependencies_only_point_backwards() {
        for g in GateLabel::ALL {
            for wire in Wire::BOTH {
                let (unit, p) = gate_pattern(PlacedGate::new(g, wire));
                let mut seen = Vec::new();
                for c in &p.commands {
                    assert!(c.x_deps.iter().chain(&c.z_deps).all(|d| seen.contains(d)));
                    assert!(!unit.is_output(c.vertex));
                    seen.push(c.vertex);
                }
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len(), unit.num_measured());
            }
        }
    }

    #[test]
    fn adaptive_angle_examples() {
        let q = Angle8::QUARTER_PI;
        assert_eq!(adaptive_angle(q, false, false, Angle8::ZERO, false), q);
        assert_eq!(adaptive_angle(q, true, false, Angle8::ZERO, false), Angle8::new(7));
        assert_eq!(adaptive_angle(q, false, true, Angle8::HALF_PI, true).k(), 3);
    }

    #[test]
    fn adaptive_angle_matches_modular_oracle() {
        for theta in Angle8::all() {
            for sx in [false, true] {
                for sz in [false, true] {
                    for kappa in Angle8::all() {
                        for r in [false, true] {
                            let sign = if sx { -1 } else { 1 };
                            let k = (sign * i64::from(theta.k())
                                + 4 * i64::from(sz)
                                + i64::from(kappa.k())
                                + 4 * i64::from(r))
                            .rem_euclid(8);
                            assert_eq!(i64::from(adaptive_angle(theta, sx, sz, kappa, r).k()), k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn adaptive_angle_is_a_bijection() {
        for sx in [false, true] {
            for sz in [false, true] {
                for kappa in Angle8::all() {
                    for r in [false, true] {
                        let mut hit = [false; 8];
                        for theta in Angle8::all() {
                            hit[adaptive_angle(theta, sx, sz, kappa, r).k() as usize] = true;
                        }
                        assert!(hit.iter().all(|&h| h));
                    }
                }
            }
        }
    }

    #[test]
    fn absorption_examples_and_period() {
        assert_eq!(absorb_cnot_correction(Angle8::ZERO), Angle8::HALF_PI);
        assert_eq!(absorb_cnot_correction(Angle8::HALF_PI), Angle8::PI);
        for a in Angle8::all() {
            let mut b = a;
            for _ in 0..4 {
                b = absorb_cnot_correction(b);
            }
            assert_eq!(b, a);
            let mut c = a;
            for _ in 0..8 {
                c = absorb_cnot_correction(c);
            }
            assert_eq!(c, a);
        }
    }

    #[test]
    fn absorption_matches_explicit_rotation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let amps = (0..2)
                .map(|_| num_complex::Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let psi = StateVector::from_amplitudes(amps).unwrap();
            let rotated = psi.apply(&GateSpec::Rz(-core::f64::consts::FRAC_PI_2), &[0]).unwrap();
            for eta in Angle8::all() {
                let explicit = rotated.planar_prob_zero(0, eta.radians()).unwrap();
                let absorbed = psi.planar_prob_zero(0, absorb_cnot_correction(eta).radians()).unwrap();
                assert!((explicit - absorbed).abs() < 1e-12);
            }
        }
        let plus = StateVector::prepare(&[Prep::Plus(Angle8::ZERO)]).unwrap();
        let p = plus
            .planar_prob_zero(0, absorb_cnot_correction(Angle8::ZERO).radians())
            .unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }
}
