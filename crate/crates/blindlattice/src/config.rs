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

//! Run configuration: a `key = value` file, overridden by flags, with the
//! seed falling back to `BLINDLATTICE_SEED`.
//!
//! ```text
//! # comment
//! circuit = H,T,CNOT
//! inputs = 0,+
//! q = 0.5
//! trials = 2000
//! strategy = flip_outcomes
//! p = 0.25
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use blindlattice_core::adversary::StrategySpec;
use blindlattice_core::mbqc::{PlacedGate, Wire};
use blindlattice_core::protocol::{Circuit, InputState, ProtocolConfig};
use serde::Serialize;
use thiserror::Error;

pub const SEED_ENV: &str = "BLINDLATTICE_SEED";

pub const KEYS: &[&str] = &[
    "circuit",
    "inputs",
    "m1",
    "q",
    "seed",
    "trials",
    "strategy",
    "p",
    "camouflage",
    "output_wire",
    "expected",
    "epsilon",
    "m",
    "n",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
}

fn bad(key: &str, reason: impl ToString) -> ConfigError {
    ConfigError::BadValue {
        key: key.into(),
        reason: reason.to_string(),
    }
}

/// Raw settings, later entries winning.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Settings, ConfigError> {
        let mut out = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            out.set(k.trim(), v.trim())?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Settings, ConfigError> {
        Settings::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        self.0.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Entries of `other` replace ours.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e: T::Err| bad(key, e)),
        }
    }
}

pub fn parse_circuit(s: &str) -> Result<Vec<PlacedGate>, ConfigError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<PlacedGate>().map_err(|e| bad("circuit", e)))
        .collect()
}

pub fn parse_inputs(s: &str) -> Result<[InputState; 2], ConfigError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.parse().map_err(|e| bad("inputs", e))?,
            b.parse().map_err(|e| bad("inputs", e))?,
        ]),
        _ => Err(bad("inputs", "two comma-separated states, e.g. `0,+`")),
    }
}

/// Strategies separated by `;`; a bare `flip_outcomes` takes `p` from the
/// separate `p` key.
pub fn parse_strategies(s: &str, p: Option<&str>) -> Result<Vec<StrategySpec>, ConfigError> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let t = match (t, p) {
                ("flip" | "flip_outcomes", Some(p)) => format!("{t}:p={p}"),
                _ => t.to_string(),
            };
            t.parse::<StrategySpec>().map_err(|e| bad("strategy", e))
        })
        .collect()
}

fn format_circuit(gates: &[PlacedGate]) -> String {
    gates.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Everything a subcommand needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub circuit: Circuit,
    pub m1: usize,
    pub q: f64,
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<StrategySpec>,
    pub camouflage: f64,
    pub output_wire: Wire,
    /// Expected output bit; `None` means "work it out by direct simulation".
    pub expected: Option<bool>,
    pub epsilon: f64,
    pub lattice: Option<(usize, usize)>,
}

impl RunConfig {
    /// `env_seed` is the value of [`SEED_ENV`], if set.
    pub fn from_settings(s: &Settings, env_seed: Option<&str>) -> Result<RunConfig, ConfigError> {
        let gates = parse_circuit(s.get("circuit").unwrap_or("I"))?;
        if gates.is_empty() {
            return Err(bad("circuit", "at least one gate"));
        }
        let inputs = match s.get("inputs") {
            Some(v) => parse_inputs(v)?,
            None => [InputState::Zero; 2],
        };
        let seed = match (s.get("seed"), env_seed) {
            (Some(v), _) => v.parse().map_err(|e| bad("seed", e))?,
            (None, Some(v)) => v.trim().parse().map_err(|e| bad(SEED_ENV, e))?,
            (None, None) => 0,
        };
        let strategies = parse_strategies(s.get("strategy").unwrap_or("honest"), s.get("p"))?;
        if strategies.is_empty() {
            return Err(bad("strategy", "at least one strategy"));
        }
        let output_wire = match s.get("output_wire").unwrap_or("0") {
            "0" | "top" => Wire::Top,
            "1" | "bottom" => Wire::Bottom,
            _ => return Err(bad("output_wire", "0 or 1")),
        };
        let expected = match s.get("expected") {
            None | Some("auto") => None,
            Some("0") | Some("false") => Some(false),
            Some("1") | Some("true") => Some(true),
            Some(_) => return Err(bad("expected", "0, 1 or auto")),
        };
        let lattice = match (s.get("m"), s.get("n")) {
            (None, None) => None,
            _ => Some((s.parsed("m", 2)?, s.parsed("n", 1)?)),
        };
        let cfg = RunConfig {
            circuit: Circuit::new(gates, inputs),
            m1: s.parsed("m1", 1)?,
            q: s.parsed("q", 0.5)?,
            trials: s.parsed("trials", 1000)?,
            seed,
            strategies,
            camouflage: s.parsed("camouflage", 0.25)?,
            output_wire,
            expected,
            epsilon: s.parsed("epsilon", 0.2)?,
            lattice,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(bad("q", "must lie in [0, 1]"));
        }
        if self.trials == 0 {
            return Err(bad("trials", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(bad("epsilon", "must lie in [0, 1]"));
        }
        self.protocol_config(None).validate().map_err(|e| bad("m1", e))
    }

    pub fn protocol_config(&self, expected: Option<bool>) -> ProtocolConfig {
        ProtocolConfig {
            m1: self.m1,
            q: self.q,
            camouflage: self.camouflage,
            output_wire: self.output_wire,
            expected,
            ..ProtocolConfig::default()
        }
    }

    /// Flat record for embedding in reports.
    pub fn record(&self) -> ConfigRecord {
        ConfigRecord {
            circuit: format_circuit(&self.circuit.gates),
            inputs: format!("{},{}", self.circuit.inputs[0], self.circuit.inputs[1]),
            m1: self.m1,
            q: self.q,
            trials: self.trials,
            seed: self.seed,
            strategies: self.strategies.iter().map(ToString::to_string).collect(),
            camouflage: self.camouflage,
            output_wire: self.output_wire.index(),
            expected: self.expected,
            epsilon: self.epsilon,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigRecord {
    pub circuit: String,
    pub inputs: String,
    pub m1: usize,
    pub q: f64,
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<String>,
    pub camouflage: f64,
    pub output_wire: usize,
    pub expected: Option<bool>,
    pub epsilon: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use blindlattice_core::mbqc::GateLabel;

    #[test]
    fn file_then_flags() {
        let mut s =
            Settings::parse("# demo\ncircuit = H, T ,CNOT@1\nq=0.25\nseed = 9\n\nstrategy = flip_outcomes\np = 0.25\n")
                .unwrap();
        let mut flags = Settings::default();
        flags.set("q", "0.75").unwrap();
        s.overlay(&flags);
        let c = RunConfig::from_settings(&s, Some("123")).unwrap();
        assert_eq!(c.q, 0.75);
        assert_eq!(c.seed, 9);
        assert_eq!(c.circuit.gates.len(), 3);
        assert_eq!(c.circuit.gates[2], PlacedGate::new(GateLabel::Cnot, Wire::Bottom));
        assert_eq!(c.strategies, vec![StrategySpec::FlipOutcomes { p: 0.25 }]);
        assert_eq!(c.record().circuit, "H,T,CNOT@1");
    }

    #[test]
    fn env_seed_is_a_fallback() {
        let c = RunConfig::from_settings(&Settings::default(), Some(" 42 ")).unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(RunConfig::from_settings(&Settings::default(), None).unwrap().seed, 0);
        assert!(RunConfig::from_settings(&Settings::default(), Some("x")).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Settings::parse("q 0.5"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(
            Settings::parse("colour = red"),
            Err(ConfigError::UnknownKey(_))
        ));
        for (k, v) in [
            ("q", "2"),
            ("trials", "0"),
            ("circuit", "H,Q"),
            ("m1", "2"),
            ("inputs", "0"),
        ] {
            let mut s = Settings::default();
            s.set(k, v).unwrap();
            assert!(RunConfig::from_settings(&s, None).is_err(), "{k}={v}");
        }
    }

    #[test]
    fn strategy_lists() {
        let v = parse_strategies("honest; fake_graph ;flip:p=0.5", None).unwrap();
        assert_eq!(v.len(), 3);
        assert!(parse_strategies("flip", None).is_err());
    }
}
