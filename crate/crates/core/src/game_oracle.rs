//! Value-function access: dense tables, synthetic games, external processes.
//!
//! Everything downstream consumes a [`ValueTable`]: the raw outputs `v(S)`
//! for every coalition mask, with the fully-masked output `v(empty)` at index
//! 0 serving as the baseline. Oracles are the ways of producing such a table;
//! external models speak a line-delimited JSON protocol over stdin/stdout.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jsonio;
use crate::subset_algebra::{LatticeArray, SubsetMask};
use crate::synth::GameSpec;

/// Format discriminator for value-table files.
pub const VALUE_TABLE_FORMAT: &str = "harsanyi-vt/1";

/// Dense table of game outputs `v(S)`, one entry per coalition mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    values: LatticeArray,
}

impl ValueTable {
    pub fn new(values: LatticeArray) -> Self {
        ValueTable { values }
    }

    pub fn from_values(n: u32, values: Vec<f64>) -> Result<Self> {
        Ok(ValueTable {
            values: LatticeArray::new(n, values)?,
        })
    }

    pub fn n(&self) -> u32 {
        self.values.n()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Output on the fully-masked input.
    pub fn baseline(&self) -> f64 {
        self.values[0]
    }

    pub fn value(&self, mask: SubsetMask) -> f64 {
        self.values.get(mask)
    }

    pub fn value_at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn values(&self) -> &LatticeArray {
        &self.values
    }

    /// Baseline-shifted outputs `u(S) = v(S) - v(empty)`; entry 0 is exactly 0.
    pub fn utilities(&self) -> LatticeArray {
        let baseline = self.baseline();
        let data: Vec<f64> = self
            .values
            .as_slice()
            .iter()
            .map(|v| v - baseline)
            .collect();
        LatticeArray::new(self.n(), data).expect("shifted table stays finite")
    }

    /// Reference magnitude for relative tolerances: `max(1, max|v(S)|)`.
    pub fn scale(&self) -> f64 {
        self.values.scale()
    }
}

/// Anything that can answer `v(S)` queries for a fixed `n`.
pub trait Oracle {
    fn n(&self) -> u32;
    fn evaluate(&self, mask: SubsetMask) -> Result<f64>;
}

/// Oracle backed by an in-memory table.
pub struct TableOracle {
    table: ValueTable,
}

impl TableOracle {
    pub fn new(table: ValueTable) -> Self {
        TableOracle { table }
    }
}

impl Oracle for TableOracle {
    fn n(&self) -> u32 {
        self.table.n()
    }

    fn evaluate(&self, mask: SubsetMask) -> Result<f64> {
        check_mask_n(mask, self.n())?;
        Ok(self.table.value(mask))
    }
}

/// Oracle backed by a synthetic game description.
pub struct SyntheticOracle {
    spec: GameSpec,
}

impl SyntheticOracle {
    pub fn new(spec: GameSpec) -> Result<Self> {
        spec.validate()?;
        Ok(SyntheticOracle { spec })
    }
}

impl Oracle for SyntheticOracle {
    fn n(&self) -> u32 {
        self.spec.n
    }

    fn evaluate(&self, mask: SubsetMask) -> Result<f64> {
        check_mask_n(mask, self.n())?;
        let v = self.spec.evaluate(mask.bits());
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: format!("synthetic game output at mask {}", mask),
            });
        }
        Ok(v)
    }
}

fn check_mask_n(mask: SubsetMask, n: u32) -> Result<()> {
    if mask.n() != n {
        return Err(Error::precondition(format!(
            "mask is over n={}, oracle expects n={n}",
            mask.n()
        )));
    }
    Ok(())
}

/// Declarative description of where game values come from.
#[derive(Debug, Clone)]
pub enum OracleDescriptor {
    /// A value-table file on disk.
    TableFile { path: PathBuf },
    /// An in-memory synthetic game.
    Synthetic { spec: GameSpec },
    /// A child process speaking the line protocol; `command[0]` is the
    /// program, the rest are its arguments.
    External { command: Vec<String>, n: u32 },
}

impl OracleDescriptor {
    pub fn open(&self) -> Result<Box<dyn Oracle>> {
        match self {
            OracleDescriptor::TableFile { path } => {
                Ok(Box::new(TableOracle::new(load_value_table(path)?)))
            }
            OracleDescriptor::Synthetic { spec } => {
                Ok(Box::new(SyntheticOracle::new(spec.clone())?))
            }
            OracleDescriptor::External { command, n } => {
                Ok(Box::new(ExternalOracle::spawn(command, *n)?))
            }
        }
    }

    /// Open the oracle and read off the whole table.
    pub fn tabulate(&self) -> Result<ValueTable> {
        tabulate(self.open()?.as_ref())
    }
}

/// Query every coalition mask once, in ascending order, and pack the results.
pub fn tabulate(oracle: &dyn Oracle) -> Result<ValueTable> {
    let n = oracle.n();
    let mut values = Vec::with_capacity(1usize << n);
    for bits in 0..(1u32 << n) {
        let mask = SubsetMask::new(bits, n)?;
        values.push(oracle.evaluate(mask)?);
    }
    ValueTable::from_values(n, values)
}

/// Uniform random table with entries in `[-1, 1]`; the standard fuzz corpus.
pub fn random_table(n: u32, rng: &mut impl Rng) -> Result<ValueTable> {
    let values: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ValueTable::from_values(n, values)
}

// ── External process protocol ───────────────────────────────────────────────
//
// One request per line on the child's stdin:   {"id":K,"n":N,"mask":M}
// One response per line on the child's stdout: {"id":K,"value":V}
// Responses arrive in request order and echo the request id. The spawn-time
// handshake (id 0, mask 0) doubles as the baseline probe, so a full
// tabulation costs exactly 2^n child round trips.

/// Adapter around a child process that answers value queries.
pub struct ExternalOracle {
    n: u32,
    baseline: f64,
    channel: Mutex<ProtocolChannel>,
}

struct ProtocolChannel {
    child: Child,
    stdin: ChildStdin,
    reader: BufReader<ChildStdout>,
    next_id: u64,
}

impl ExternalOracle {
    pub fn spawn(command: &[String], n: u32) -> Result<Self> {
        SubsetMask::full(n)?;
        if command.is_empty() {
            return Err(Error::precondition("oracle command must not be empty"));
        }
        let mut child = Command::new(&command[0])
            .args(&command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::OracleProcess {
                pending_mask: None,
                msg: format!("failed to start {:?}: {e}", command[0]),
            })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let stderr = child.stderr.take().expect("piped stderr");
        // Forward the child's stderr verbatim so model-side diagnostics are
        // never swallowed.
        std::thread::spawn(move || {
            for line in BufReader::new(stderr).lines().map_while(|l| l.ok()) {
                eprintln!("{line}");
            }
        });
        let mut channel = ProtocolChannel {
            child,
            stdin,
            reader: BufReader::new(stdout),
            next_id: 0,
        };
        let baseline = channel.round_trip(n, 0)?;
        Ok(ExternalOracle {
            n,
            baseline,
            channel: Mutex::new(channel),
        })
    }
}

impl Oracle for ExternalOracle {
    fn n(&self) -> u32 {
        self.n
    }

    fn evaluate(&self, mask: SubsetMask) -> Result<f64> {
        check_mask_n(mask, self.n)?;
        if mask.is_empty() {
            // Already probed during the handshake.
            return Ok(self.baseline);
        }
        let mut channel = self.channel.lock().expect("oracle channel poisoned");
        channel.round_trip(self.n, mask.bits())
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        if let Ok(channel) = self.channel.get_mut() {
            let _ = channel.child.kill();
            let _ = channel.child.wait();
        }
    }
}

impl ProtocolChannel {
    fn round_trip(&mut self, n: u32, mask: u32) -> Result<f64> {
        let id = self.next_id;
        self.next_id += 1;
        let request = format!("{{\"id\":{id},\"n\":{n},\"mask\":{mask}}}\n");
        self.stdin
            .write_all(request.as_bytes())
            .and_then(|_| self.stdin.flush())
            .map_err(|e| Error::OracleProcess {
                pending_mask: Some(mask),
                msg: format!("write to child failed: {e}"),
            })?;
        let mut line = String::new();
        match self.reader.read_line(&mut line) {
            Ok(0) => {
                return Err(Error::OracleProcess {
                    pending_mask: Some(mask),
                    msg: "child closed stdout before answering".into(),
                })
            }
            Ok(_) => {}
            Err(e) => {
                return Err(Error::OracleProcess {
                    pending_mask: Some(mask),
                    msg: format!("read from child failed: {e}"),
                })
            }
        }
        let parsed: serde_json::Value =
            serde_json::from_str(line.trim()).map_err(|e| Error::OracleProtocol {
                pending_mask: Some(mask),
                msg: format!("unparseable response {:?}: {e}", line.trim()),
            })?;
        let got_id = parsed
            .get("id")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::OracleProtocol {
                pending_mask: Some(mask),
                msg: format!("response missing integer \"id\": {}", line.trim()),
            })?;
        if got_id != id {
            return Err(Error::OracleProtocol {
                pending_mask: Some(mask),
                msg: format!("response id {got_id} does not echo request id {id}"),
            });
        }
        let value_field = parsed.get("value").ok_or_else(|| Error::OracleProtocol {
            pending_mask: Some(mask),
            msg: format!("response missing \"value\": {}", line.trim()),
        })?;
        let value =
            jsonio::lenient_f64(value_field, "oracle response value").map_err(|e| {
                Error::OracleProtocol {
                    pending_mask: Some(mask),
                    msg: e.to_string(),
                }
            })?;
        if !value.is_finite() {
            return Err(Error::OracleNonFinite { mask });
        }
        Ok(value)
    }
}

// ── File format ─────────────────────────────────────────────────────────────

pub fn save_value_table(table: &ValueTable, path: &Path) -> Result<()> {
    #[derive(Serialize)]
    struct Out<'a> {
        format: &'a str,
        n: u32,
        values: &'a [f64],
    }
    jsonio::write_canonical_json(
        path,
        &Out {
            format: VALUE_TABLE_FORMAT,
            n: table.n(),
            values: table.values().as_slice(),
        },
    )
}

pub fn load_value_table(path: &Path) -> Result<ValueTable> {
    let tree = jsonio::read_json_file(path)?;
    jsonio::expect_format(&tree, VALUE_TABLE_FORMAT, path)?;
    let n = tree
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::format(Some(path), "missing integer key \"n\""))?;
    let raw = tree
        .get("values")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::format(Some(path), "missing array key \"values\""))?;
    let mut values = Vec::with_capacity(raw.len());
    for (i, item) in raw.iter().enumerate() {
        values.push(jsonio::lenient_f64(item, &format!("values[{i}]"))?);
    }
    ValueTable::from_values(n as u32, values)
}
