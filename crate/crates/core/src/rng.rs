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

//! Seeded random streams.
//!
//! Every consumer of randomness (client, server strategy, the physical
//! measurement process, trial index) gets its own ChaCha stream derived from
//! one user seed, so runs are reproducible and streams never interfere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fixed stream identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Client = 1,
    Server = 2,
    Nature = 3,
    Decision = 4,
}

/// Returns the ChaCha stream `stream` for `seed`.
pub fn stream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Seed for trial `index` of a Monte Carlo batch seeded with `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}
