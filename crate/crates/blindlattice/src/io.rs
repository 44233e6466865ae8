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

//! Transcript files (JSON Lines) and small JSON/CSV helpers.
//!
//! A transcript file holds one JSON object per line, tagged by `record`:
//!
//! | line      | `record`    | fields |
//! |-----------|-------------|--------|
//! | first     | `"header"`  | `format` (= [`FORMAT`]), `circuit`, `config`, `seed`, `strategy` |
//! | middle    | `"message"` | `index`, `message` (tagged by `type`: `QubitBatch`, `EntangleOrder`, `ReturnBatch`, `HOrder`, `AngleList`, `OutcomeList`) |
//! | last      | `"footer"`  | `decision`, `traps`, `units`, `secret`, `aborted` |
//!
//! Handles are bare integers and angles are the integer `k` of `k·π/4`.
//! The `secret` and `units` fields are the client's private record; they are
//! kept so that a file can be replayed and checked.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use blindlattice_core::protocol::{
    Circuit, ClientSecret, Decision, Message, ProtocolConfig, Transcript, TrapTally, UnitRecord,
};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "blindlattice-transcript/1";

#[derive(Serialize, Deserialize)]
struct Header {
    record: String,
    format: String,
    circuit: Circuit,
    config: ProtocolConfig,
    seed: u64,
    strategy: String,
}

#[derive(Serialize, Deserialize)]
struct MessageLine {
    record: String,
    index: usize,
    message: Message,
}

#[derive(Serialize, Deserialize)]
struct Footer {
    record: String,
    decision: Decision,
    traps: TrapTally,
    units: Vec<UnitRecord>,
    secret: ClientSecret,
    aborted: Option<String>,
}

#[derive(Deserialize)]
struct Tag {
    record: String,
}

fn put<W: Write, T: Serialize>(w: &mut W, record: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, record)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn write_transcript<W: Write>(t: &Transcript, mut w: W) -> Result<()> {
    put(
        &mut w,
        &Header {
            record: "header".into(),
            format: FORMAT.into(),
            circuit: t.circuit.clone(),
            config: t.config.clone(),
            seed: t.seed,
            strategy: t.strategy.clone(),
        },
    )?;
    for (index, m) in t.messages.iter().enumerate() {
        put(
            &mut w,
            &MessageLine {
                record: "message".into(),
                index,
                message: m.clone(),
            },
        )?;
    }
    put(
        &mut w,
        &Footer {
            record: "footer".into(),
            decision: t.decision,
            traps: t.traps,
            units: t.units.clone(),
            secret: t.secret.clone(),
            aborted: t.aborted.clone(),
        },
    )?;
    w.flush()?;
    Ok(())
}

// Records are parsed in two steps: the tag first, then the record itself
// straight from the text. Integer map keys in the secret do not survive
// serde's buffered tagged-enum path.
pub fn read_transcript<R: BufRead>(r: R) -> Result<Transcript> {
    let mut header: Option<Header> = None;
    let mut messages = Vec::new();
    let mut footer: Option<Footer> = None;
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let at = || format!("line {}", no + 1);
        let tag: Tag = serde_json::from_str(&line).with_context(at)?;
        if footer.is_some() {
            bail!("line {}: record after footer", no + 1);
        }
        match tag.record.as_str() {
            "header" => {
                if header.is_some() || !messages.is_empty() {
                    bail!("line {}: header must come first", no + 1);
                }
                let h: Header = serde_json::from_str(&line).with_context(at)?;
                if h.format != FORMAT {
                    bail!("unsupported format {:?}", h.format);
                }
                header = Some(h);
            }
            "message" => {
                if header.is_none() {
                    bail!("line {}: message before header", no + 1);
                }
                let m: MessageLine = serde_json::from_str(&line).with_context(at)?;
                if m.index != messages.len() {
                    bail!(
                        "line {}: message index {}, expected {}",
                        no + 1,
                        m.index,
                        messages.len()
                    );
                }
                messages.push(m.message);
            }
            "footer" => footer = Some(serde_json::from_str(&line).with_context(at)?),
            other => bail!("line {}: unknown record {other:?}", no + 1),
        }
    }
    let h = header.context("missing header")?;
    let f = footer.context("missing footer")?;
    Ok(Transcript {
        circuit: h.circuit,
        config: h.config,
        seed: h.seed,
        strategy: h.strategy,
        messages,
        units: f.units,
        decision: f.decision,
        traps: f.traps,
        secret: f.secret,
        aborted: f.aborted,
    })
}

pub fn save_transcript(t: &Transcript, path: &Path) -> Result<()> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_transcript(t, BufWriter::new(f))
}

pub fn load_transcript(path: &Path) -> Result<Transcript> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_transcript(BufReader::new(f))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
        }
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
