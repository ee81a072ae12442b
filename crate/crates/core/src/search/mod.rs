//! Divisor-method search for `N = x^3 + y^3 + z^3`.
//!
//! For each `x` in the configured range the engine forms `Q = N - x^3`
//! (or `|N - x^3|` in mixed mode), optionally discards it by the mod-9
//! two-cube test, factors it and solves for `(y, z)` over the divisors
//! `d = y + z` with `d^3 <= 4Q` (see [`kernel`]).
//!
//! The x-range is cut into fixed-size chunks. Chunks may run on several
//! threads and can be recorded in a checkpoint file; results are merged as
//! sets of canonical triples, so neither the thread count nor an
//! interruption changes the final [`SolutionSet`].

mod checkpoint;
pub mod kernel;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bigmath::icbrt;
use crate::factorize::{FactorOptions, Factorizer, DEFAULT_DIVISOR_CAP};
use crate::mersenne::{
    p_value, two_cube_admissible_mod9, x_residue_filter_for, PIndex, ResidueClass,
};
use crate::repr::{Provenance, Representation};
use crate::{Error, Result};

pub use checkpoint::{CheckpointRecord, CHECKPOINT_VERSION};
use kernel::{canonical_triple, two_cube_pairs, two_cube_pairs_u128, FAST_LIMIT};
pub use kernel::{representations_for_x, solve_divisor};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `x` runs over `[0, cbrt(N)]`; reports non-negative triples and, as a
    /// byproduct, mixed triples with `y z < 0`.
    #[default]
    Nonneg,
    /// `x >= 0` may exceed `cbrt(N)`; `|N - x^3|` is searched and every
    /// integer triple with a coordinate in the x-range is found.
    Mixed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Nonneg => "nonneg",
            Mode::Mixed => "mixed",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonneg" => Ok(Mode::Nonneg),
            "mixed" => Ok(Mode::Mixed),
            _ => Err(Error::InvalidConfig(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: Mode,
    /// Defaults to 0.
    pub x_min: Option<u64>,
    /// Defaults to `cbrt(N)` (non-negative) or `2 cbrt(N)` (mixed).
    /// Clamped to `cbrt(N)` in non-negative mode.
    pub x_max: Option<u64>,
    /// Search `M_{k,n} = 2^(a_n + 3k) (2^n - 1)` and lift, see [`search_scaled`].
    pub scale_k: Option<u32>,
    pub residue_filter: bool,
    /// Worker threads; 1 runs inline on the caller's thread.
    pub shards: usize,
    pub chunk_size: u64,
    pub checkpoint_path: Option<PathBuf>,
    pub divisor_cap: usize,
    pub factor: FactorOptions,
    /// Stop (with [`Error::Interrupted`]) after this many chunks have been
    /// processed in this run. For exercising resumption.
    pub stop_after_chunks: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Nonneg,
            x_min: None,
            x_max: None,
            scale_k: None,
            residue_filter: true,
            shards: 1,
            chunk_size: 4096,
            checkpoint_path: None,
            divisor_cap: DEFAULT_DIVISOR_CAP,
            factor: FactorOptions::default(),
            stop_after_chunks: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// x values in range.
    pub x_scanned: u64,
    /// Skipped by the x (mod 3) or Q (mod 9) residue filter.
    pub x_filtered: u64,
    /// x values whose `Q` was factored.
    pub x_factored: u64,
    pub factor_timeouts: u64,
}

impl std::ops::AddAssign for Stats {
    fn add_assign(&mut self, o: Stats) {
        self.x_scanned += o.x_scanned;
        self.x_filtered += o.x_filtered;
        self.x_factored += o.x_factored;
        self.factor_timeouts += o.factor_timeouts;
    }
}

/// Progress after a chunk completes.
#[derive(Clone, Copy, Debug)]
pub struct Progress {
    pub chunks_done: usize,
    pub chunks_total: usize,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ChunkResult {
    pub index: u64,
    pub lo: u64,
    pub hi: u64,
    pub nonneg: Vec<[BigInt; 3]>,
    pub mixed: Vec<[BigInt; 3]>,
    pub stats: Stats,
    pub timeouts: Vec<u64>,
}

/// Canonical triples found for an arbitrary target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawSolutions {
    pub nonneg: BTreeSet<[BigInt; 3]>,
    pub mixed: BTreeSet<[BigInt; 3]>,
    pub stats: Stats,
    /// x values whose factorization timed out.
    pub incomplete_x: Vec<u64>,
    pub x_min: u64,
    pub x_max: u64,
}

impl RawSolutions {
    pub fn complete(&self) -> bool {
        self.incomplete_x.is_empty()
    }
}

/// The solutions found for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub n: PIndex,
    pub mode: Mode,
    pub scale_k: Option<u32>,
    /// Non-negative mode: the non-negative triples. Mixed mode: every
    /// triple found. Canonical and sorted.
    pub reps: Vec<Representation>,
    /// Mixed-sign triples met along the way in non-negative mode.
    pub byproducts: Vec<Representation>,
    /// No factorization timed out.
    pub complete: bool,
    pub stats: Stats,
    pub incomplete_x: Vec<u64>,
    /// The x-range actually searched (on the scaled target when `scale_k`).
    pub x_min: u64,
    pub x_max: u64,
}

/// Searches `P_n`; dispatches to [`search_scaled`] when `cfg.scale_k` is set.
pub fn search(n: PIndex, cfg: &SearchConfig) -> Result<SolutionSet> {
    search_observed(n, cfg, &|_| {})
}

/// [`search`] with a callback invoked after every completed chunk.
pub fn search_observed(
    n: PIndex,
    cfg: &SearchConfig,
    observer: &(dyn Fn(&Progress) + Sync),
) -> Result<SolutionSet> {
    if let Some(k) = cfg.scale_k {
        return search_scaled_observed(n, k, cfg, observer);
    }
    let target = p_value(n);
    let raw = run(&target, Some(n.get()), None, cfg, observer)?;
    into_solution_set(n, cfg.mode, None, raw, 0)
}

/// Parameters of the scaled target `M_{k,n} = 2^(a_n + 3k) (2^n - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledTarget {
    /// `a_n in {0, 1, 2}`, `a_n = n - 1 (mod 3)`.
    pub a: u32,
    /// Lift exponent: solutions of `M` times `2^lift` solve `P_n`.
    pub lift: u32,
    pub value: BigUint,
}

pub fn scaled_target(n: PIndex, k: u32) -> Result<ScaledTarget> {
    let nn = n.get();
    let a = (nn - 1) % 3;
    let used = a as u64 + 3 * k as u64;
    if used > (nn - 1) as u64 {
        return Err(Error::InvalidScale {
            n: nn,
            k,
            reason: format!("need n - 1 - a_n - 3k >= 0 with a_n = {a}"),
        });
    }
    let lift = ((nn - 1) as u64 - used) / 3;
    let value = ((BigUint::one() << nn as usize) - 1u32) << used as usize;
    Ok(ScaledTarget {
        a,
        lift: lift as u32,
        value,
    })
}

/// Searches `M_{k,n}` (x up to `cbrt(M_{k,n})` unless the config narrows it)
/// and multiplies every solution by `2^m`, `m = (n - 1 - a_n - 3k) / 3`,
/// which turns it into a solution for `P_n`.
pub fn search_scaled(n: PIndex, k: u32, cfg: &SearchConfig) -> Result<SolutionSet> {
    search_scaled_observed(n, k, cfg, &|_| {})
}

fn search_scaled_observed(
    n: PIndex,
    k: u32,
    cfg: &SearchConfig,
    observer: &(dyn Fn(&Progress) + Sync),
) -> Result<SolutionSet> {
    let scaled = scaled_target(n, k)?;
    let raw = run(&scaled.value, Some(n.get()), Some(k), cfg, observer)?;
    into_solution_set(n, cfg.mode, Some(k), raw, scaled.lift)
}

/// Searches an arbitrary positive target. The triples are canonical.
pub fn search_number(target: &BigUint, cfg: &SearchConfig) -> Result<RawSolutions> {
    run(target, None, None, cfg, &|_| {})
}

fn into_solution_set(
    n: PIndex,
    mode: Mode,
    scale_k: Option<u32>,
    raw: RawSolutions,
    lift: u32,
) -> Result<SolutionSet> {
    let factor = BigInt::one() << lift as usize;
    let build = |set: &BTreeSet<[BigInt; 3]>| -> Result<Vec<Representation>> {
        set.iter()
            .map(|t| {
                let terms = t.iter().map(|v| v * &factor).collect();
                Representation::new(n, terms, Provenance::Search).map(Representation::canonicalize)
            })
            .collect()
    };
    let (reps, byproducts) = match mode {
        Mode::Nonneg => (build(&raw.nonneg)?, build(&raw.mixed)?),
        Mode::Mixed => {
            let all: BTreeSet<[BigInt; 3]> = raw.nonneg.union(&raw.mixed).cloned().collect();
            (build(&all)?, Vec::new())
        }
    };
    Ok(SolutionSet {
        n,
        mode,
        scale_k,
        reps,
        byproducts,
        complete: raw.complete(),
        stats: raw.stats,
        incomplete_x: raw.incomplete_x,
        x_min: raw.x_min,
        x_max: raw.x_max,
    })
}

struct Plan<'a> {
    target: &'a BigUint,
    target_u128: Option<u128>,
    mode: Mode,
    x_min: u64,
    x_max: u64,
    filter: Option<ResidueClass>,
    divisor_cap: usize,
}

fn config_digest(plan: &Plan<'_>, scale_k: Option<u32>, chunk_size: u64) -> String {
    let text = format!(
        "cubesum-search|v{}|target={}|k={:?}|mode={}|x={}..{}|chunk={}|filter={}|cap={}",
        CHECKPOINT_VERSION,
        plan.target,
        scale_k,
        plan.mode.as_str(),
        plan.x_min,
        plan.x_max,
        chunk_size,
        plan.filter.is_some(),
        plan.divisor_cap,
    );
    let hash = Sha256::digest(text.as_bytes());
    hash[..16].iter().map(|b| format!("{b:02x}")).collect()
}

fn run(
    target: &BigUint,
    n: Option<u32>,
    scale_k: Option<u32>,
    cfg: &SearchConfig,
    observer: &(dyn Fn(&Progress) + Sync),
) -> Result<RawSolutions> {
    if target.bits() == 0 {
        return Err(Error::InvalidConfig("target must be positive".into()));
    }
    if cfg.shards == 0 || cfg.chunk_size == 0 {
        return Err(Error::InvalidConfig(
            "shards and chunk size must be positive".into(),
        ));
    }
    let root = icbrt(target);
    let default_max = match cfg.mode {
        Mode::Nonneg => root.clone(),
        Mode::Mixed => &root * 2u32,
    };
    let default_max = default_max
        .to_u64()
        .ok_or_else(|| Error::InvalidConfig("x-range exceeds 2^64; narrow it with x_max".into()))?;
    let mut x_max = cfg.x_max.unwrap_or(default_max);
    if cfg.mode == Mode::Nonneg {
        x_max = x_max.min(default_max);
    }
    let x_min = cfg.x_min.unwrap_or(0);
    if x_min > x_max {
        return Err(Error::InvalidConfig(format!(
            "x_min = {x_min} exceeds x_max = {x_max}"
        )));
    }

    // Machine-word path when every |N - x^3| and 4|N - x^3| fit.
    let x_max_cubed = BigUint::from(x_max).pow(3);
    let fast = target < &BigUint::from(FAST_LIMIT) && x_max_cubed < BigUint::from(FAST_LIMIT);
    let target_mod9 = (target % 9u32).to_u32().unwrap_or(0);
    let plan = Plan {
        target,
        target_u128: if fast { target.to_u128() } else { None },
        mode: cfg.mode,
        x_min,
        x_max,
        filter: cfg
            .residue_filter
            .then(|| x_residue_filter_for(target_mod9)),
        divisor_cap: cfg.divisor_cap,
    };

    let span = x_max - x_min;
    let total = (span / cfg.chunk_size + 1) as usize;
    let digest = match cfg.checkpoint_path {
        Some(_) => config_digest(&plan, scale_k, cfg.chunk_size),
        None => String::new(),
    };
    let header = checkpoint::CheckpointHeader {
        n,
        target,
        mode: cfg.mode,
        digest: &digest,
    };

    let mut results: Vec<ChunkResult> = Vec::with_capacity(total);
    let mut writer = None;
    if let Some(path) = &cfg.checkpoint_path {
        for (_, rec) in checkpoint::load(path, &digest)? {
            let chunk = rec.into_chunk(target)?;
            let (lo, hi) = chunk_bounds(x_min, x_max, cfg.chunk_size, chunk.index);
            if chunk.index as usize >= total || chunk.lo != lo || chunk.hi != hi {
                return Err(Error::Checkpoint(format!(
                    "chunk {} does not match the configured x-range",
                    chunk.index
                )));
            }
            results.push(chunk);
        }
        writer = Some(Mutex::new(checkpoint::Writer::open(path)?));
    }
    let done: BTreeSet<u64> = results.iter().map(|c| c.index).collect();
    let pending: Vec<u64> = (0..total as u64).filter(|i| !done.contains(i)).collect();

    let factorizer = Factorizer::new(cfg.factor.clone());
    let started = AtomicUsize::new(0);
    let completed = AtomicUsize::new(done.len());
    let found = AtomicUsize::new(results.iter().map(|c| c.nonneg.len() + c.mixed.len()).sum());
    let write_error: Mutex<Option<Error>> = Mutex::new(None);

    let process = |index: u64| -> Option<ChunkResult> {
        if let Some(limit) = cfg.stop_after_chunks {
            if started.fetch_add(1, Ordering::SeqCst) >= limit {
                return None;
            }
        }
        if write_error.lock().map(|e| e.is_some()).unwrap_or(true) {
            return None;
        }
        let (lo, hi) = chunk_bounds(x_min, x_max, cfg.chunk_size, index);
        let chunk = scan_chunk(&plan, &factorizer, index, lo, hi);
        if let Some(w) = &writer {
            let rec = CheckpointRecord::from_chunk(&header, &chunk);
            let res = w.lock().expect("checkpoint writer poisoned").append(&rec);
            if let Err(e) = res {
                write_error.lock().expect("poisoned").get_or_insert(e);
                return None;
            }
        }
        let progress = Progress {
            chunks_done: completed.fetch_add(1, Ordering::SeqCst) + 1,
            chunks_total: total,
            found: found.fetch_add(chunk.nonneg.len() + chunk.mixed.len(), Ordering::SeqCst)
                + chunk.nonneg.len()
                + chunk.mixed.len(),
        };
        observer(&progress);
        Some(chunk)
    };

    let fresh: Vec<Option<ChunkResult>> = if cfg.shards == 1 {
        pending.iter().map(|&i| process(i)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.shards)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| pending.par_iter().map(|&i| process(i)).collect())
    };

    if let Some(e) = write_error.into_inner().expect("poisoned") {
        return Err(e);
    }
    let missing = fresh.iter().filter(|c| c.is_none()).count();
    results.extend(fresh.into_iter().flatten());
    if missing > 0 {
        return Err(Error::Interrupted {
            completed: results.len(),
            total,
        });
    }

    results.sort_by_key(|c| c.index);
    let mut out = RawSolutions {
        x_min,
        x_max,
        ..Default::default()
    };
    for c in results {
        out.nonneg.extend(c.nonneg);
        out.mixed.extend(c.mixed);
        out.stats += c.stats;
        out.incomplete_x.extend(c.timeouts);
    }
    Ok(out)
}

fn chunk_bounds(x_min: u64, x_max: u64, size: u64, index: u64) -> (u64, u64) {
    let lo = x_min + index * size;
    let hi = lo.saturating_add(size - 1).min(x_max);
    (lo, hi)
}

fn scan_chunk(plan: &Plan<'_>, fz: &Factorizer, index: u64, lo: u64, hi: u64) -> ChunkResult {
    let mut res = ChunkResult {
        index,
        lo,
        hi,
        nonneg: Vec::new(),
        mixed: Vec::new(),
        stats: Stats::default(),
        timeouts: Vec::new(),
    };
    for x in lo..=hi {
        res.stats.x_scanned += 1;
        if plan.filter.as_ref().is_some_and(|f| !f.contains(x)) {
            res.stats.x_filtered += 1;
            continue;
        }
        let outcome = match plan.target_u128 {
            Some(target) => scan_x_u128(plan, fz, target, x, &mut res.stats),
            None => scan_x_big(plan, fz, x, &mut res.stats),
        };
        match outcome {
            Ok(pairs) => {
                for (y, z) in pairs {
                    let (t, nonneg) = canonical_triple(BigInt::from(x), y, z);
                    if nonneg {
                        res.nonneg.push(t);
                    } else {
                        res.mixed.push(t);
                    }
                }
            }
            Err(_) => {
                res.stats.factor_timeouts += 1;
                res.timeouts.push(x);
            }
        }
    }
    res.nonneg.sort();
    res.nonneg.dedup();
    res.mixed.sort();
    res.mixed.dedup();
    res
}

fn scan_x_u128(
    plan: &Plan<'_>,
    fz: &Factorizer,
    target: u128,
    x: u64,
    stats: &mut Stats,
) -> Result<Vec<(BigInt, BigInt)>> {
    let x3 = (x as u128).pow(3);
    let (q, negative) = if x3 <= target {
        (target - x3, false)
    } else {
        (x3 - target, true)
    };
    if q == 0 {
        return Ok(Vec::new());
    }
    if plan.filter.is_some() && !two_cube_admissible_mod9((q % 9) as u32) {
        stats.x_filtered += 1;
        return Ok(Vec::new());
    }
    stats.x_factored += 1;
    let pairs = two_cube_pairs_u128(q, fz, plan.divisor_cap)?;
    Ok(pairs
        .into_iter()
        .map(|(y, z)| {
            if negative {
                (BigInt::from(-y), BigInt::from(-z))
            } else {
                (BigInt::from(y), BigInt::from(z))
            }
        })
        .collect())
}

fn scan_x_big(
    plan: &Plan<'_>,
    fz: &Factorizer,
    x: u64,
    stats: &mut Stats,
) -> Result<Vec<(BigInt, BigInt)>> {
    let x3 = BigUint::from(x).pow(3);
    let (q, negative) = if &x3 <= plan.target {
        (plan.target - &x3, false)
    } else {
        (&x3 - plan.target, true)
    };
    if q.bits() == 0 {
        return Ok(Vec::new());
    }
    if plan.filter.is_some() && !two_cube_admissible_mod9((&q % 9u32).to_u32().unwrap_or(0)) {
        stats.x_filtered += 1;
        return Ok(Vec::new());
    }
    stats.x_factored += 1;
    let pairs = two_cube_pairs(&q, fz, plan.divisor_cap)?;
    Ok(pairs
        .into_iter()
        .map(|(y, z)| if negative { (-y, -z) } else { (y, z) })
        .collect())
}

#[cfg(test)]
mod tests;
