use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use serde::{Deserialize, Serialize};

use crate::bigmath::{gcd_all, sum_of_cubes};
use crate::mersenne::{p_value, PIndex};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignClass {
    AllNonneg,
    Mixed,
}

impl SignClass {
    pub fn of<'a>(terms: impl IntoIterator<Item = &'a BigInt>) -> Self {
        if terms.into_iter().any(|t| t.sign() == Sign::Minus) {
            SignClass::Mixed
        } else {
            SignClass::AllNonneg
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::AllNonneg => "all-nonneg",
            SignClass::Mixed => "mixed",
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a representation came from. Displayed as `identity:<family>`,
/// `table:<tag>` or `search`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Identity(String),
    Table(String),
    Search,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity(id) => write!(f, "identity:{id}"),
            Provenance::Table(tag) => write!(f, "table:{tag}"),
            Provenance::Search => f.write_str("search"),
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "search" {
            return Ok(Provenance::Search);
        }
        match s.split_once(':') {
            Some(("identity", id)) if !id.is_empty() => Ok(Provenance::Identity(id.to_string())),
            Some(("table", tag)) if !tag.is_empty() => Ok(Provenance::Table(tag.to_string())),
            _ => Err(Error::ContractViolation(format!(
                "unknown provenance {s:?}"
            ))),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Provenance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integers whose cubes sum to `P_n`. Construction verifies the equation
/// exactly, so every value of this type is a proof of its own claim.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    n: PIndex,
    terms: Vec<BigInt>,
    g: BigUint,
    sign_class: SignClass,
    provenance: Provenance,
}

impl Representation {
    pub fn new(n: PIndex, terms: Vec<BigInt>, provenance: Provenance) -> Result<Self> {
        if !(2..=4).contains(&terms.len()) {
            return Err(Error::ContractViolation(format!(
                "a representation has 2 to 4 terms, got {}",
                terms.len()
            )));
        }
        if sum_of_cubes(&terms) != BigInt::from(p_value(n)) {
            return Err(Error::SubstitutionFailed {
                n: n.get(),
                terms: join_terms(&terms),
            });
        }
        let g = gcd_all(&terms)?;
        let sign_class = SignClass::of(&terms);
        Ok(Representation {
            n,
            terms,
            g,
            sign_class,
            provenance,
        })
    }

    pub fn n(&self) -> PIndex {
        self.n
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn g(&self) -> &BigUint {
        &self.g
    }

    pub fn sign_class(&self) -> SignClass {
        self.sign_class
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Terms sorted ascending. Idempotent.
    pub fn canonicalize(mut self) -> Self {
        self.terms.sort();
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.windows(2).all(|w| w[0] <= w[1])
    }

    /// Re-checks the cube-sum equation.
    pub fn verify(&self) -> bool {
        sum_of_cubes(&self.terms) == BigInt::from(p_value(self.n))
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{} = ({})", self.n, join_terms(&self.terms))
    }
}

pub(crate) fn join_terms(terms: &[BigInt]) -> String {
    terms
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonicalizes and removes duplicates (by terms only), keeping the first
/// provenance seen for each canonical tuple.
pub fn dedup_canonical(reps: Vec<Representation>) -> Vec<Representation> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for r in reps {
        let r = r.canonicalize();
        if seen.insert(r.terms.clone()) {
            out.push(r);
        }
    }
    out
}
