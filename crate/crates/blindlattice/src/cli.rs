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

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed check or unwritable report, 2 usage
//! error. Without `--out` the report goes to stdout; with it, stdout gets a
//! one-line summary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ConfigError, RunConfig, Settings, SEED_ENV};
use crate::io::{emit, save_transcript, to_csv, to_json};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "blindlattice",
    version,
    about = "Blind measurement-based computation on a latticed cluster state"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the protocol once and write the transcript (JSON Lines).
    Run(Common),
    /// Check the gate identities and every unit pattern on all branches.
    VerifyGates(Common),
    /// Input-average density and sent-angle statistics.
    Blindness(Common),
    /// Bound values, the feasible range and the consistency report.
    Bounds(Common),
    /// Acceptance rates for honest and adversarial servers.
    Attack(Common),
    /// Lattice edges and unit patterns for a circuit.
    Lattice(Common),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Default, Args)]
pub struct Common {
    /// `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Gate labels, e.g. `H,T,CNOT` (`G@1` for the bottom wire).
    #[arg(long)]
    pub circuit: Option<String>,
    /// Input states of the two wires, e.g. `0,+`.
    #[arg(long)]
    pub inputs: Option<String>,
    #[arg(long)]
    pub m1: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    /// Falls back to the `BLINDLATTICE_SEED` environment variable.
    #[arg(long)]
    pub seed: Option<String>,
    /// `honest`, `fake_graph[:dist=zero]`, `flip:p=0.5`, `skip_entangle`;
    /// several separated by `;`.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Flip probability for a bare `flip_outcomes`.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub camouflage: Option<String>,
    #[arg(long)]
    pub output_wire: Option<String>,
    /// `0`, `1` or `auto`.
    #[arg(long)]
    pub expected: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Lattice rows.
    #[arg(long)]
    pub m: Option<String>,
    /// Lattice columns.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

impl Common {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let mut s = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("circuit", &self.circuit),
            ("inputs", &self.inputs),
            ("m1", &self.m1),
            ("q", &self.q),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("strategy", &self.strategy),
            ("p", &self.p),
            ("camouflage", &self.camouflage),
            ("output_wire", &self.output_wire),
            ("expected", &self.expected),
            ("epsilon", &self.epsilon),
            ("m", &self.m),
            ("n", &self.n),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v.clone())?;
            }
        }
        s.overlay(&flags);
        Ok(s)
    }
}

/// What a subcommand produced.
struct Outcome {
    body: String,
    summary: String,
    passed: bool,
}

fn json_only(name: &str, format: Format) -> Result<(), String> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(format!("`{name}` has no CSV output")),
    }
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    let out = match command {
        Command::Run(c) => {
            let (summary, transcript) = report::single_run(cfg)?;
            // the transcript is the file output; stdout always gets the summary
            if let Some(p) = &c.out {
                save_transcript(&transcript, p)?;
            }
            Outcome {
                summary: format!(
                    "run: {} branch, {} ({} messages)",
                    summary.branch,
                    if summary.accepted { "accepted" } else { "rejected" },
                    summary.messages
                ),
                body: to_json(&summary)?,
                passed: true,
            }
        }
        Command::VerifyGates(_) => {
            let r = report::verify_gates(cfg)?;
            Outcome {
                summary: format!(
                    "verify-gates: {} identities, {} units, max identity infidelity {:.2e}, max unit infidelity {:.2e}: {}",
                    r.identities.len(),
                    r.units.len(),
                    r.max_identity_infidelity,
                    r.max_unit_infidelity,
                    if r.passed { "PASS" } else { "FAIL" }
                ),
                passed: r.passed,
                body: to_json(&r)?,
            }
        }
        Command::Blindness(_) => {
            let r = report::blindness(cfg)?;
            Outcome {
                summary: format!(
                    "blindness: density deviation {:.2e}, uniform p = {:.4}, two-sample p = {:.4}: {}",
                    r.average_density_deviation,
                    r.uniform.p_value,
                    r.two_sample.p_value,
                    if r.passed { "PASS" } else { "FAIL" }
                ),
                passed: r.passed,
                body: to_json(&r)?,
            }
        }
        Command::Bounds(c) => {
            let r = report::bounds(cfg)?;
            let body = match c.format {
                Format::Json => to_json(&r)?,
                Format::Csv => to_csv(&report::bound_sweep(50)?)?,
            };
            Outcome {
                summary: format!(
                    "bounds: feasible epsilon [{:.4}, {:.4}], {} discrepancies: {}",
                    r.feasible_epsilon[0],
                    r.feasible_epsilon[1],
                    r.consistency.discrepancies().count(),
                    if r.passed { "PASS" } else { "FAIL" }
                ),
                passed: r.passed,
                body,
            }
        }
        Command::Attack(c) => {
            let r = report::attack_sweep(cfg)?;
            let mut summary = String::from("attack:");
            for row in &r.rows {
                write!(
                    summary,
                    "\n  {} {} q={} rate={:.4}",
                    row.strategy, row.params, row.q, row.rate
                )?;
            }
            let body = match c.format {
                Format::Json => to_json(&r)?,
                Format::Csv => to_csv(&r.rows)?,
            };
            Outcome {
                summary,
                passed: true,
                body,
            }
        }
        Command::Lattice(_) => {
            let e = report::lattice_export(cfg);
            Outcome {
                summary: format!(
                    "lattice: {}x{}, {} edges, {} units",
                    e.m,
                    e.n,
                    e.edges.len(),
                    e.units.len()
                ),
                body: to_json(&e)?,
                passed: true,
            }
        }
    };
    Ok(out)
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Run(c)
        | Command::VerifyGates(c)
        | Command::Blindness(c)
        | Command::Bounds(c)
        | Command::Attack(c)
        | Command::Lattice(c) => c,
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Run(_) => "run",
        Command::VerifyGates(_) => "verify-gates",
        Command::Blindness(_) => "blindness",
        Command::Bounds(_) => "bounds",
        Command::Attack(_) => "attack",
        Command::Lattice(_) => "lattice",
    }
}

/// Parses `argv` (program name first) and runs it; `env_seed` stands in for
/// the environment variable.
pub fn dispatch_with_env<I, T>(argv: I, env_seed: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let c = common(&cli.command);
    if !matches!(cli.command, Command::Bounds(_) | Command::Attack(_)) {
        if let Err(msg) = json_only(name(&cli.command), c.format) {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    }
    let cfg = match c.settings().and_then(|s| RunConfig::from_settings(&s, env_seed)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match execute(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_FAIL;
        }
    };
    let written = match (&cli.command, &c.out) {
        // `run` already wrote its transcript
        (Command::Run(_), Some(_)) => Ok(()),
        (_, Some(p)) => emit(&outcome.body, Some(p)),
        (_, None) => emit(&outcome.body, None),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return EXIT_FAIL;
    }
    if c.out.is_some() {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(SEED_ENV).ok();
    dispatch_with_env(argv, env.as_deref())
}
