//! Line-delimited JSON checkpoints.
//!
//! Each line is one completed x-chunk:
//!
//! ```text
//! {"version":1,"n":18,"target":"34359607296","mode":"nonneg",
//!  "config_digest":"<32 hex digits>","chunk":3,"x_interval":["12288","16383"],
//!  "reps":[["144","1224","3192"]],"stats":{...},"incomplete_x":[]}
//! ```
//!
//! Integers that may exceed 53 bits are decimal strings. A trailing line
//! without its newline is an unflushed write and is discarded on resume.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::{ChunkResult, Mode, Stats};
use crate::bigmath::sum_of_cubes;
use crate::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub version: u32,
    pub n: Option<u32>,
    pub target: String,
    pub mode: Mode,
    pub config_digest: String,
    pub chunk: u64,
    pub x_interval: [String; 2],
    /// Canonical triples found in the chunk, both sign classes.
    pub reps: Vec<[String; 3]>,
    pub stats: Stats,
    pub incomplete_x: Vec<String>,
}

pub(crate) struct CheckpointHeader<'a> {
    pub n: Option<u32>,
    pub target: &'a BigUint,
    pub mode: Mode,
    pub digest: &'a str,
}

impl CheckpointRecord {
    pub(crate) fn from_chunk(h: &CheckpointHeader<'_>, c: &ChunkResult) -> Self {
        let strs = |t: &[BigInt; 3]| [t[0].to_string(), t[1].to_string(), t[2].to_string()];
        CheckpointRecord {
            version: CHECKPOINT_VERSION,
            n: h.n,
            target: h.target.to_string(),
            mode: h.mode,
            config_digest: h.digest.to_string(),
            chunk: c.index,
            x_interval: [c.lo.to_string(), c.hi.to_string()],
            reps: c.nonneg.iter().chain(&c.mixed).map(strs).collect(),
            stats: c.stats,
            incomplete_x: c.timeouts.iter().map(|x| x.to_string()).collect(),
        }
    }

    pub(crate) fn into_chunk(self, target: &BigUint) -> Result<ChunkResult> {
        let bad = |what: String| Error::Checkpoint(format!("chunk {}: {what}", self.chunk));
        let parse_u64 = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("{s:?}: {e}")));
        let lo = parse_u64(&self.x_interval[0])?;
        let hi = parse_u64(&self.x_interval[1])?;
        let target = BigInt::from(target.clone());
        let mut nonneg = Vec::new();
        let mut mixed = Vec::new();
        for r in &self.reps {
            let mut t: [BigInt; 3] = [BigInt::default(), BigInt::default(), BigInt::default()];
            for (slot, s) in t.iter_mut().zip(r) {
                *slot = s.parse().map_err(|e| bad(format!("{s:?}: {e}")))?;
            }
            if sum_of_cubes(&t) != target {
                return Err(bad(format!("triple {r:?} does not sum to the target")));
            }
            t.sort();
            if t[0] >= BigInt::default() {
                nonneg.push(t);
            } else {
                mixed.push(t);
            }
        }
        let timeouts = self
            .incomplete_x
            .iter()
            .map(|s| parse_u64(s))
            .collect::<Result<_>>()?;
        Ok(ChunkResult {
            index: self.chunk,
            lo,
            hi,
            nonneg,
            mixed,
            stats: self.stats,
            timeouts,
        })
    }
}

/// Reads the fully flushed records of `path` (if it exists) and truncates
/// any torn trailing line. Every record must carry `digest`.
pub(crate) fn load(path: &Path, digest: &str) -> Result<BTreeMap<u64, CheckpointRecord>> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    let mut good_len: u64 = 0;
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        let rec: CheckpointRecord = serde_json::from_str(line.trim_end())
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if rec.config_digest != digest {
            return Err(Error::Checkpoint(format!(
                "{} was written by a different configuration (digest {}, expected {digest})",
                path.display(),
                rec.config_digest
            )));
        }
        if rec.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {}",
                rec.version
            )));
        }
        good_len += read as u64;
        done.insert(rec.chunk, rec);
    }
    let actual = std::fs::metadata(path)?.len();
    if actual != good_len {
        OpenOptions::new()
            .write(true)
            .open(path)?
            .set_len(good_len)?;
    }
    Ok(done)
}

/// Appends one record per completed chunk; every line is flushed before the
/// next chunk can be reported.
pub(crate) struct Writer {
    file: File,
    path: PathBuf,
}

impl Writer {
    pub fn open(path: &Path) -> Result<Self> {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        file.seek(SeekFrom::End(0))?;
        Ok(Writer {
            file,
            path: path.to_path_buf(),
        })
    }

    pub fn append(&mut self, rec: &CheckpointRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", self.path.display())))?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        self.file.sync_data()?;
        Ok(())
    }
}
