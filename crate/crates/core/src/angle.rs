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

//! Discrete angles `k·π/4`.

use core::f64::consts::FRAC_PI_4;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use rand::Rng;

/// An angle `k·π/4` with `k ∈ {0, …, 7}`.
///
/// All protocol angles (preparation offsets, base angles, sent angles, trap
/// angles) live here so modular arithmetic stays exact; conversion to radians
/// only happens when a matrix or projector is built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Angle8(u8);

impl Angle8 {
    pub const ZERO: Angle8 = Angle8(0);
    pub const QUARTER_PI: Angle8 = Angle8(1);
    pub const HALF_PI: Angle8 = Angle8(2);
    pub const PI: Angle8 = Angle8(4);
    pub const THREE_HALVES_PI: Angle8 = Angle8(6);

    /// Reduces `k` modulo 8.
    pub const fn new(k: i64) -> Angle8 {
        Angle8(k.rem_euclid(8) as u8)
    }

    pub const fn k(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_4
    }

    /// `π` if `bit` is set, zero otherwise.
    pub const fn pi_if(bit: bool) -> Angle8 {
        if bit {
            Angle8::PI
        } else {
            Angle8::ZERO
        }
    }

    /// All eight values in increasing order.
    pub fn all() -> impl Iterator<Item = Angle8> + Clone {
        (0..8).map(|k| Angle8(k as u8))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Angle8 {
        Angle8(rng.random_range(0..8u8))
    }
}

impl Add for Angle8 {
    type Output = Angle8;
    fn add(self, rhs: Angle8) -> Angle8 {
        Angle8((self.0 + rhs.0) % 8)
    }
}

impl Sub for Angle8 {
    type Output = Angle8;
    fn sub(self, rhs: Angle8) -> Angle8 {
        Angle8((self.0 + 8 - rhs.0) % 8)
    }
}

impl Neg for Angle8 {
    type Output = Angle8;
    fn neg(self) -> Angle8 {
        Angle8((8 - self.0) % 8)
    }
}

impl fmt::Display for Angle8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            4 => write!(f, "π"),
            k => write!(f, "{k}π/4"),
        }
    }
}
