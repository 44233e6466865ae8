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

//! Server strategies.
//!
//! A strategy sees what an honest server sees: the messages and a [`Lab`]
//! addressed by handles. It has no path to the client's secret; the only
//! thing it can hand back to the client is an outcome list.
//!
//! The catalog here is an operational reading of "a malicious server": fake
//! graph preparation, classical outcome tampering and skipped entanglement.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::protocol::{server_entangle, server_h_order, server_measure, Handle, Lab, ProtocolError};
use crate::qsim::Prep;
use crate::Angle8;

/// Server behaviour, one hook per message the server reacts to.
///
/// Every default is the honest behaviour.
pub trait ServerStrategy {
    fn name(&self) -> String;

    /// A `QubitBatch` arrived.
    fn on_receive(
        &mut self,
        _lab: &mut Lab,
        _round: usize,
        _handles: &[Handle],
        _rng: &mut ChaCha8Rng,
    ) -> Result<(), ProtocolError> {
        Ok(())
    }

    fn on_entangle(
        &mut self,
        lab: &mut Lab,
        _round: usize,
        edges: &[(Handle, Handle)],
        _rng: &mut ChaCha8Rng,
    ) -> Result<(), ProtocolError> {
        server_entangle(lab, edges)
    }

    fn on_h_order(
        &mut self,
        lab: &mut Lab,
        _round: usize,
        handles: &[Handle],
        _rng: &mut ChaCha8Rng,
    ) -> Result<(), ProtocolError> {
        server_h_order(lab, handles)
    }

    fn on_measure(
        &mut self,
        lab: &mut Lab,
        _round: usize,
        _layer: usize,
        angles: &[(Handle, Angle8)],
        _rng: &mut ChaCha8Rng,
    ) -> Result<Vec<bool>, ProtocolError> {
        server_measure(lab, angles)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Honest;

impl ServerStrategy for Honest {
    fn name(&self) -> String {
        "honest".into()
    }
}

/// What a fake-graph server puts in place of the qubits it receives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Replacement {
    /// Uniform over `|0⟩, |1⟩` and the sixteen `|±_k⟩`.
    #[default]
    Uniform18,
    AllZero,
}

impl Replacement {
    pub fn sample(self, rng: &mut ChaCha8Rng) -> Prep {
        match self {
            Replacement::AllZero => Prep::Zero,
            Replacement::Uniform18 => match rng.random_range(0..18u8) {
                0 => Prep::Zero,
                1 => Prep::One,
                i => {
                    let k = Angle8::new(i64::from((i - 2) % 8));
                    if i < 10 {
                        Prep::Plus(k)
                    } else {
                        Prep::Minus(k)
                    }
                }
            },
        }
    }
}

/// Throws away every received qubit and uses a fresh sample instead.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FakeGraph {
    pub replacement: Replacement,
}

impl ServerStrategy for FakeGraph {
    fn name(&self) -> String {
        match self.replacement {
            Replacement::Uniform18 => "fake_graph".into(),
            Replacement::AllZero => "fake_graph:dist=zero".into(),
        }
    }

    fn on_receive(
        &mut self,
        lab: &mut Lab,
        _round: usize,
        handles: &[Handle],
        rng: &mut ChaCha8Rng,
    ) -> Result<(), ProtocolError> {
        for &h in handles {
            lab.replace(h, self.replacement.sample(rng))?;
        }
        Ok(())
    }
}

/// Honest, then flips every reported bit with probability `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlipOutcomes {
    pub p: f64,
}

impl ServerStrategy for FlipOutcomes {
    fn name(&self) -> String {
        format!("flip:p={}", self.p)
    }

    fn on_measure(
        &mut self,
        lab: &mut Lab,
        _round: usize,
        _layer: usize,
        angles: &[(Handle, Angle8)],
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<bool>, ProtocolError> {
        let mut bits = server_measure(lab, angles)?;
        for b in &mut bits {
            if rng.random_bool(self.p) {
                *b = !*b;
            }
        }
        Ok(bits)
    }
}

/// Honest except that no CZ is ever applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SkipEntangle;

impl ServerStrategy for SkipEntangle {
    fn name(&self) -> String {
        "skip_entangle".into()
    }

    fn on_entangle(
        &mut self,
        _lab: &mut Lab,
        _round: usize,
        _edges: &[(Handle, Handle)],
        _rng: &mut ChaCha8Rng,
    ) -> Result<(), ProtocolError> {
        Ok(())
    }
}

/// A strategy by name and parameters; builds a fresh instance per run.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StrategySpec {
    Honest,
    FakeGraph(Replacement),
    FlipOutcomes { p: f64 },
    SkipEntangle,
}

impl StrategySpec {
    pub fn build(&self) -> Box<dyn ServerStrategy + Send> {
        match *self {
            StrategySpec::Honest => Box::new(Honest),
            StrategySpec::FakeGraph(replacement) => Box::new(FakeGraph { replacement }),
            StrategySpec::FlipOutcomes { p } => Box::new(FlipOutcomes { p }),
            StrategySpec::SkipEntangle => Box::new(SkipEntangle),
        }
    }

    /// Strategy name without parameters.
    pub fn kind(&self) -> &'static str {
        match self {
            StrategySpec::Honest => "honest",
            StrategySpec::FakeGraph(_) => "fake_graph",
            StrategySpec::FlipOutcomes { .. } => "flip_outcomes",
            StrategySpec::SkipEntangle => "skip_entangle",
        }
    }

    /// Parameters as `key=value`, empty when there are none.
    pub fn params(&self) -> String {
        match self {
            StrategySpec::FakeGraph(Replacement::Uniform18) => "dist=uniform18".into(),
            StrategySpec::FakeGraph(Replacement::AllZero) => "dist=zero".into(),
            StrategySpec::FlipOutcomes { p } => format!("p={p}"),
            _ => String::new(),
        }
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategySpec::Honest => f.write_str("honest"),
            StrategySpec::FakeGraph(Replacement::Uniform18) => f.write_str("fake_graph"),
            StrategySpec::FakeGraph(Replacement::AllZero) => f.write_str("fake_graph:dist=zero"),
            StrategySpec::FlipOutcomes { p } => write!(f, "flip:p={p}"),
            StrategySpec::SkipEntangle => f.write_str("skip_entangle"),
        }
    }
}

/// Parses `honest`, `fake_graph[:dist=uniform18|zero]`,
/// `flip:p=0.5` (also `flip_outcomes:p=0.5`) and `skip_entangle`.
impl FromStr for StrategySpec {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let param = |key: &str| {
            params
                .split(',')
                .filter_map(|kv| kv.split_once('='))
                .find(|(k, _)| k.trim() == key)
                .map(|(_, v)| v.trim())
        };
        match name.trim() {
            "honest" => Ok(StrategySpec::Honest),
            "skip_entangle" => Ok(StrategySpec::SkipEntangle),
            "fake_graph" => match param("dist") {
                None | Some("uniform18") | Some("uniform") => Ok(StrategySpec::FakeGraph(Replacement::Uniform18)),
                Some("zero") => Ok(StrategySpec::FakeGraph(Replacement::AllZero)),
                Some(_) => Err(ProtocolError::BadConfig("fake_graph dist must be uniform18 or zero")),
            },
            "flip" | "flip_outcomes" => {
                let p: f64 = param("p")
                    .ok_or(ProtocolError::BadConfig("flip needs p=<probability>"))?
                    .parse()
                    .map_err(|_| ProtocolError::BadConfig("flip p is not a number"))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(ProtocolError::BadConfig("flip p must lie in [0, 1]"));
                }
                Ok(StrategySpec::FlipOutcomes { p })
            }
            _ => Err(ProtocolError::BadConfig("unknown strategy")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn spec_parsing() {
        assert_eq!("honest".parse::<StrategySpec>().unwrap(), StrategySpec::Honest);
        assert_eq!(
            "flip:p=0.25".parse::<StrategySpec>().unwrap(),
            StrategySpec::FlipOutcomes { p: 0.25 }
        );
        assert_eq!(
            "flip_outcomes:p=1".parse::<StrategySpec>().unwrap(),
            StrategySpec::FlipOutcomes { p: 1.0 }
        );
        assert_eq!(
            "fake_graph".parse::<StrategySpec>().unwrap(),
            StrategySpec::FakeGraph(Replacement::Uniform18)
        );
        assert_eq!(
            "fake_graph:dist=zero".parse::<StrategySpec>().unwrap(),
            StrategySpec::FakeGraph(Replacement::AllZero)
        );
        for bad in ["flip", "flip:p=2", "flip:p=x", "eve", "fake_graph:dist=gauss"] {
            assert!(bad.parse::<StrategySpec>().is_err(), "{bad}");
        }
        for spec in [
            StrategySpec::Honest,
            StrategySpec::SkipEntangle,
            StrategySpec::FlipOutcomes { p: 0.5 },
            StrategySpec::FakeGraph(Replacement::AllZero),
        ] {
            assert_eq!(format!("{spec}").parse::<StrategySpec>().unwrap(), spec);
            assert_eq!(spec.build().name(), format!("{spec}"));
        }
    }

    #[test]
    fn uniform18_hits_every_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = alloc::collections::BTreeSet::new();
        for _ in 0..2000 {
            seen.insert(format!("{:?}", Replacement::Uniform18.sample(&mut rng)));
        }
        assert_eq!(seen.len(), 18);
    }
}
