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

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use core::fmt;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Gates understood by [`StateVector::apply`](super::StateVector::apply).
///
/// `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})` and `Rx(θ) = H·Rz(θ)·H`. For `Cnot`
/// the first target is the control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateSpec {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rz(f64),
    Rx(f64),
    Cz,
    Cnot,
}

/// Row-major matrix rendering of a gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateMatrix {
    Single([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl GateSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GateSpec::I => "I",
            GateSpec::X => "X",
            GateSpec::Y => "Y",
            GateSpec::Z => "Z",
            GateSpec::H => "H",
            GateSpec::S => "S",
            GateSpec::T => "T",
            GateSpec::Rz(_) => "Rz",
            GateSpec::Rx(_) => "Rx",
            GateSpec::Cz => "CZ",
            GateSpec::Cnot => "CNOT",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateSpec::Cz | GateSpec::Cnot => 2,
            _ => 1,
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match *self {
            GateSpec::I => GateMatrix::Single([[ONE, ZERO], [ZERO, ONE]]),
            GateSpec::X => GateMatrix::Single([[ZERO, ONE], [ONE, ZERO]]),
            GateSpec::Y => GateMatrix::Single([[ZERO, -I], [I, ZERO]]),
            GateSpec::Z => GateMatrix::Single([[ONE, ZERO], [ZERO, -ONE]]),
            GateSpec::H => GateMatrix::Single([[h, h], [h, -h]]),
            GateSpec::S => GateMatrix::Single([[ONE, ZERO], [ZERO, I]]),
            GateSpec::T => GateMatrix::Single([[ONE, ZERO], [ZERO, Complex64::cis(FRAC_PI_4)]]),
            GateSpec::Rz(theta) => GateMatrix::Single([
                [Complex64::cis(-theta / 2.0), ZERO],
                [ZERO, Complex64::cis(theta / 2.0)],
            ]),
            GateSpec::Rx(theta) => {
                let c = Complex64::new(libm::cos(theta / 2.0), 0.0);
                let s = Complex64::new(0.0, -libm::sin(theta / 2.0));
                GateMatrix::Single([[c, s], [s, c]])
            }
            GateSpec::Cz => {
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][2] = ONE;
                m[3][3] = -ONE;
                GateMatrix::Two(m)
            }
            GateSpec::Cnot => {
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
                GateMatrix::Two(m)
            }
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSpec::Rz(t) => write!(f, "Rz({t})"),
            GateSpec::Rx(t) => write!(f, "Rx({t})"),
            g => f.write_str(g.name()),
        }
    }
}

impl GateMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GateMatrix::Single(_) => 2,
            GateMatrix::Two(_) => 4,
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match self {
            GateMatrix::Single(m) => m[row][col],
            GateMatrix::Two(m) => m[row][col],
        }
    }

    /// Largest entry of `|M†M − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_is_unitary() {
        let gates = [
            GateSpec::I,
            GateSpec::X,
            GateSpec::Y,
            GateSpec::Z,
            GateSpec::H,
            GateSpec::S,
            GateSpec::T,
            GateSpec::Rz(0.37),
            GateSpec::Rx(-2.1),
            GateSpec::Cz,
            GateSpec::Cnot,
        ];
        for g in gates {
            assert!(g.matrix().unitarity_defect() < 1e-12, "{g}");
        }
    }
}
