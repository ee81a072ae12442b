//! Integer solutions of `P_n = x^3 + y^3`.
//!
//! Any solution has `x + y = d > 0` dividing `P_n` with `d^3 <= 4 P_n`, so a
//! complete factorization of `P_n = 2^(n-1) (2^n - 1)` settles the question
//! for that `n`. The factoring is the bottleneck; when it does not finish
//! within budget the index is reported as not certified.

use std::time::Duration;

use num_bigint::{BigInt, BigUint};

use crate::factorize::{FactorOptions, Factorizer, DEFAULT_DIVISOR_CAP};
use crate::mersenne::{p_value, PIndex};
use crate::repr::{Provenance, Representation};
use crate::search::kernel::two_cube_pairs;
use crate::{Error, Result};

/// Largest index [`search_two_cubes`] attempts by default.
pub const DEFAULT_MAX_N: u32 = 60;

/// Per-index factoring budget used by [`search_two_cubes`].
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(30);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoCubeOutcome {
    /// Every solution, canonical (`x <= y`).
    Certified(Vec<Representation>),
    /// The factorization of `P_n` was not obtained; nothing is claimed.
    NotCertified { reason: String },
}

impl TwoCubeOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, TwoCubeOutcome::Certified(_))
    }

    pub fn reps(&self) -> &[Representation] {
        match self {
            TwoCubeOutcome::Certified(r) => r,
            TwoCubeOutcome::NotCertified { .. } => &[],
        }
    }
}

/// All solutions for `n <= DEFAULT_MAX_N`, factoring with a time budget.
/// Larger indices come back as [`TwoCubeOutcome::NotCertified`]; use
/// [`search_two_cubes_with`] to try them with an explicit factorizer.
pub fn search_two_cubes(n: PIndex) -> Result<TwoCubeOutcome> {
    if n.get() > DEFAULT_MAX_N {
        return Ok(TwoCubeOutcome::NotCertified {
            reason: format!("n = {n} is above the default limit {DEFAULT_MAX_N}"),
        });
    }
    let fz = Factorizer::new(FactorOptions {
        timeout: Some(DEFAULT_BUDGET),
        ..Default::default()
    });
    search_two_cubes_with(n, &fz)
}

pub fn search_two_cubes_with(n: PIndex, fz: &Factorizer) -> Result<TwoCubeOutcome> {
    let pairs = match two_cube_solutions(&p_value(n), fz) {
        Ok(p) => p,
        Err(Error::FactorTimeout(v)) => {
            return Ok(TwoCubeOutcome::NotCertified {
                reason: format!("factoring {v} exceeded the budget"),
            })
        }
        Err(e) => return Err(e),
    };
    let reps = pairs
        .into_iter()
        .map(|(x, y)| Representation::new(n, vec![x, y], Provenance::Search))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoCubeOutcome::Certified(reps))
}

/// Every `(x, y)` with `x <= y` and `x^3 + y^3 = target`, for `target >= 1`.
pub fn two_cube_solutions(target: &BigUint, fz: &Factorizer) -> Result<Vec<(BigInt, BigInt)>> {
    let mut pairs: Vec<(BigInt, BigInt)> = two_cube_pairs(target, fz, DEFAULT_DIVISOR_CAP)?
        .into_iter()
        .map(|(y, z)| (z, y))
        .collect();
    pairs.sort();
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn small(n: u32) -> Vec<Vec<i64>> {
        search_two_cubes(PIndex::new(n).unwrap())
            .unwrap()
            .reps()
            .iter()
            .map(|r| {
                r.terms()
                    .iter()
                    .map(|t| i64::try_from(t).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn known_indices() {
        assert_eq!(small(3), vec![vec![1, 3]]);
        assert_eq!(small(7), vec![vec![-24, 28]]);
        assert_eq!(small(9), vec![vec![-44, 60]]);
        assert!(small(5).is_empty());
        // The trivial 1 = 0^3 + 1^3.
        assert_eq!(small(1), vec![vec![0, 1]]);
        // P_2 = 6 is not a sum of two cubes.
        assert!(small(2).is_empty());
    }

    #[test]
    fn above_default_limit() {
        let out = search_two_cubes(PIndex::new(61).unwrap()).unwrap();
        assert!(!out.is_certified());
    }

    #[test]
    fn budget_exhaustion_is_not_certified() {
        let fz = Factorizer::new(FactorOptions {
            rho_attempts: 1,
            rho_iterations: 1,
            ..Default::default()
        });
        // 2^59 - 1 has a 13-digit prime factor beyond trial division.
        let out = search_two_cubes_with(PIndex::new(59).unwrap(), &fz).unwrap();
        assert!(!out.is_certified(), "{out:?}");
    }

    #[test]
    fn matches_pair_enumeration() {
        const LIMIT: i64 = 200_000;
        let mut brute: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
        // s = x + y >= 1 and x^2 - xy + y^2 >= 3 (y - x)^2 / 4 bound the walk.
        let mut s = 1i64;
        while s * s * s <= 4 * LIMIT {
            let mut t = s % 2;
            while 3 * t * t <= 4 * LIMIT {
                let (x, y) = ((s - t) / 2, (s + t) / 2);
                let v = x.pow(3) + y.pow(3);
                if v <= LIMIT {
                    brute.entry(v).or_default().push((x, y));
                }
                t += 2;
            }
            s += 1;
        }
        let fz = Factorizer::default();
        for n in 1..=LIMIT {
            let got: Vec<(i64, i64)> = two_cube_solutions(&BigUint::from(n as u64), &fz)
                .unwrap()
                .into_iter()
                .map(|(x, y)| (i64::try_from(&x).unwrap(), i64::try_from(&y).unwrap()))
                .collect();
            let mut want = brute.get(&n).cloned().unwrap_or_default();
            want.sort();
            assert_eq!(got, want, "N = {n}");
        }
    }
}
