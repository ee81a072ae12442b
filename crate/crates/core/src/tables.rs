//! Reference data embedded at build time from `data/*.csv` (see
//! `data/FORMAT.md`), and row-by-row verification of it.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::bigmath::{gcd_all, sum_of_cubes};
use crate::mersenne::{p_value, PIndex};
use crate::{Error, Result};

pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");
pub const TABLE2_CSV: &str = include_str!("../data/table2.csv");
pub const TABLE3_CSV: &str = include_str!("../data/table3.csv");
pub const SPECIAL_CSV: &str = include_str!("../data/special_reps.csv");

/// A non-negative three-cube solution with its gcd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonnegRow {
    pub n: u32,
    pub terms: [BigInt; 3],
    pub g: BigUint,
}

/// A mixed-sign three-cube solution for an index without non-negative ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRow {
    pub n: u32,
    pub terms: [BigInt; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialRow {
    pub n: u32,
    pub terms: Vec<BigInt>,
    pub source: String,
}

fn corrupt(what: &str, e: impl std::fmt::Display) -> Error {
    Error::DataCorruption(format!("{what}: {e}"))
}

fn records(what: &str, text: &str) -> Result<Vec<csv::StringRecord>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes())
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| corrupt(what, e))
}

fn int<T: std::str::FromStr>(what: &str, field: Option<&str>) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let s = field.ok_or_else(|| corrupt(what, "missing field"))?;
    s.trim()
        .parse()
        .map_err(|e| corrupt(what, format!("{s:?}: {e}")))
}

fn triple(what: &str, r: &csv::StringRecord) -> Result<[BigInt; 3]> {
    Ok([
        int(what, r.get(1))?,
        int(what, r.get(2))?,
        int(what, r.get(3))?,
    ])
}

/// All non-negative solutions for `n <= 40` (columns `n,x,y,z,g`).
pub fn nonneg_rows() -> Result<Vec<NonnegRow>> {
    records("table1", TABLE1_CSV)?
        .iter()
        .map(|r| {
            Ok(NonnegRow {
                n: int("table1", r.get(0))?,
                terms: triple("table1", r)?,
                g: int("table1", r.get(4))?,
            })
        })
        .collect()
}

/// Mixed-sign solutions for indices without non-negative ones (`n,x,y,z`).
pub fn mixed_rows() -> Result<Vec<MixedRow>> {
    records("table2", TABLE2_CSV)?
        .iter()
        .map(|r| {
            Ok(MixedRow {
                n: int("table2", r.get(0))?,
                terms: triple("table2", r)?,
            })
        })
        .collect()
}

/// Number of integer solutions reported per index (`n,count`).
pub fn reported_counts() -> Result<BTreeMap<u32, u32>> {
    records("table3", TABLE3_CSV)?
        .iter()
        .map(|r| Ok((int("table3", r.get(0))?, int("table3", r.get(1))?)))
        .collect()
}

/// Explicit representations (`n,terms,source`, terms space-separated).
pub fn special_rows() -> Result<Vec<SpecialRow>> {
    records("special_reps", SPECIAL_CSV)?
        .iter()
        .map(|r| {
            let terms = r
                .get(1)
                .ok_or_else(|| corrupt("special_reps", "missing terms"))?
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|e| corrupt("special_reps", format!("{t:?}: {e}")))
                })
                .collect::<Result<Vec<BigInt>>>()?;
            let source = r
                .get(2)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| corrupt("special_reps", "missing source"))?
                .to_string();
            Ok(SpecialRow {
                n: int("special_reps", r.get(0))?,
                terms,
                source,
            })
        })
        .collect()
}

/// Outcome of checking one table row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub table: String,
    pub n: u32,
    pub terms: Vec<String>,
    pub ok: bool,
    pub detail: String,
}

fn check_row(table: &str, n: u32, terms: &[BigInt], g: Option<&BigUint>) -> RowCheck {
    let terms_s = terms.iter().map(|t| t.to_string()).collect();
    let fail = |detail: String| RowCheck {
        table: table.to_string(),
        n,
        terms: terms.iter().map(|t| t.to_string()).collect(),
        ok: false,
        detail,
    };
    let Ok(idx) = PIndex::new(n) else {
        return fail("invalid index".into());
    };
    let sum = sum_of_cubes(terms);
    let target = BigInt::from(p_value(idx));
    if sum != target {
        return fail(format!("sum of cubes is {sum}, P_n is {target}"));
    }
    if let Some(g) = g {
        match gcd_all(terms) {
            Ok(actual) if &actual == g => {}
            Ok(actual) => return fail(format!("gcd is {actual}, table says {g}")),
            Err(e) => return fail(e.to_string()),
        }
    }
    RowCheck {
        table: table.to_string(),
        n,
        terms: terms_s,
        ok: true,
        detail: String::new(),
    }
}

/// Substitution and gcd check of every non-negative table row.
pub fn verify_nonneg_rows() -> Result<Vec<RowCheck>> {
    Ok(nonneg_rows()?
        .iter()
        .map(|r| check_row("1", r.n, &r.terms, Some(&r.g)))
        .collect())
}

/// Substitution check of every mixed-sign table row.
pub fn verify_mixed_rows() -> Result<Vec<RowCheck>> {
    Ok(mixed_rows()?
        .iter()
        .map(|r| check_row("2", r.n, &r.terms, None))
        .collect())
}

/// Substitution check of every special representation.
pub fn verify_special_rows() -> Result<Vec<RowCheck>> {
    Ok(special_rows()?
        .iter()
        .map(|r| check_row(&format!("reps:{}", r.source), r.n, &r.terms, None))
        .collect())
}
