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

use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::client::Client;
use super::ProtocolError;

/// Which check the client runs at the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Branch {
    /// Trust the computation and check its output.
    Eval,
    /// Check the computational-basis traps.
    TestR1,
    /// Check the planar traps.
    TestR2,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Eval, Branch::TestR1, Branch::TestR2];

    pub fn name(self) -> &'static str {
        match self {
            Branch::Eval => "eval",
            Branch::TestR1 => "test_r1",
            Branch::TestR2 => "test_r2",
        }
    }

    /// `Eval` with probability `q`, each test with `(1 − q)/2`.
    pub fn draw(q: f64, rng: &mut ChaCha8Rng) -> Branch {
        let u: f64 = rng.random();
        if u < q {
            Branch::Eval
        } else if u < q + (1.0 - q) / 2.0 {
            Branch::TestR1
        } else {
            Branch::TestR2
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Branch {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eval" => Ok(Branch::Eval),
            "test_r1" | "r1" => Ok(Branch::TestR1),
            "test_r2" | "r2" => Ok(Branch::TestR2),
            _ => Err(ProtocolError::BadConfig("branch must be eval, test_r1 or test_r2")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decision {
    pub branch: Branch,
    pub verdict: Verdict,
    /// Pad bits the client removed from the readout, by wire.
    pub flip_applied: [bool; 2],
    /// Decoded output bits, if the readout completed.
    pub decoded: Option<[bool; 2]>,
}

/// Draws the branch and judges the run.
///
/// The draw always consumes the decision stream, so forcing a branch does
/// not shift any other randomness. A malformed run is rejected on every
/// branch.
pub fn client_decide(client: &Client, rng: &mut ChaCha8Rng) -> Decision {
    let config = client.config();
    let drawn = Branch::draw(config.q, rng);
    let branch = config.force_branch.unwrap_or(drawn);
    let decoded = client.decoded();
    let (r1, r2) = client.trap_verdicts();
    let ok = !client.is_malformed()
        && match branch {
            Branch::Eval => match (decoded, config.expected) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(bits), Some(want)) => bits[config.output_wire.index()] == want,
            },
            Branch::TestR1 => r1,
            Branch::TestR2 => r2,
        };
    Decision {
        branch,
        verdict: Verdict::from_bool(ok),
        flip_applied: client.readout_flips(),
        decoded,
    }
}
