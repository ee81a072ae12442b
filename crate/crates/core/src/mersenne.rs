//! Values of `P_n = 2^(n-1) (2^n - 1)` and the congruence facts the search
//! relies on.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bigmath::is_perfect_cube;
use crate::{Error, Result};

/// Index `n >= 1` of `P_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PIndex(u32);

impl PIndex {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            Err(Error::InvalidIndex(n))
        } else {
            Ok(PIndex(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for PIndex {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        PIndex::new(n)
    }
}

impl From<PIndex> for u32 {
    fn from(n: PIndex) -> u32 {
        n.0
    }
}

impl fmt::Display for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A set of admissible residues modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    pub modulus: u32,
    pub allowed: Vec<u32>,
}

impl ResidueClass {
    pub fn new(modulus: u32, mut allowed: Vec<u32>) -> Self {
        assert!(modulus > 0);
        assert!(allowed.iter().all(|&r| r < modulus), "residue out of range");
        allowed.sort_unstable();
        allowed.dedup();
        ResidueClass { modulus, allowed }
    }

    pub fn contains(&self, value: u64) -> bool {
        let r = (value % self.modulus as u64) as u32;
        self.allowed.binary_search(&r).is_ok()
    }

    pub fn is_everything(&self) -> bool {
        self.allowed.len() == self.modulus as usize
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.allowed.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}} (mod {})", parts.join(","), self.modulus)
    }
}

/// Residues mod 9 attained by `a^3 + b^3`.
pub const TWO_CUBE_RESIDUES_MOD9: [u32; 5] = [0, 1, 2, 7, 8];

const TWO_CUBE_MASK_MOD9: u16 = 0b1_1000_0111;

/// Whether `r (mod 9)` can be a sum of two cubes.
#[inline]
pub fn two_cube_admissible_mod9(r: u32) -> bool {
    TWO_CUBE_MASK_MOD9 >> (r % 9) & 1 == 1
}

/// `P_n = 2^(n-1) (2^n - 1)`.
pub fn p_value(n: PIndex) -> BigUint {
    let n = n.get() as usize;
    ((BigUint::one() << n) - 1u32) << (n - 1)
}

/// `2^n - 1`.
pub fn mersenne(n: PIndex) -> BigUint {
    (BigUint::one() << n.get() as usize) - 1u32
}

// P_n mod 9 for n = 1, 2, ..., 6; the sequence has pure period 6.
const P_MOD9_PERIOD: [u32; 6] = [1, 6, 1, 3, 1, 0];

/// `P_n mod 9`, read from the period-6 table.
pub fn p_mod9(n: PIndex) -> u32 {
    P_MOD9_PERIOD[((n.get() - 1) % 6) as usize]
}

/// Residues of `x (mod 3)` that can appear in a solution of
/// `P_n = x^3 + y^3 + z^3`.
pub fn x_residue_filter(n: PIndex) -> ResidueClass {
    match n.get() % 6 {
        2 => ResidueClass::new(3, vec![2]),
        4 => ResidueClass::new(3, vec![1]),
        _ => ResidueClass::new(3, vec![0, 1, 2]),
    }
}

/// Residues of `x (mod 3)` for which `target - x^3` is an admissible
/// two-cube residue mod 9. Agrees with [`x_residue_filter`] on `P_n`.
pub fn x_residue_filter_for(target_mod9: u32) -> ResidueClass {
    let allowed = (0..3u32)
        .filter(|&r| {
            let cube = r * r * r % 9;
            two_cube_admissible_mod9((target_mod9 + 9 - cube) % 9)
        })
        .collect();
    ResidueClass::new(3, allowed)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SanityReport {
    pub n_max: u32,
    pub not_cube: u32,
    pub half_not_cube: u32,
    pub mod9_admissible: u32,
    pub even_index_mod6: u32,
    pub odd_index_mod18: u32,
}

/// Checks, for every `n <= n_max`: `P_n` is not a cube, `P_n / 2` is not a
/// cube, `P_n mod 9` is not 4 or 5, `P_n` is `0 mod 6` for even `n` and
/// `10 mod 18` for odd `n >= 3`.
pub fn sanity_checks(n_max: PIndex) -> Result<SanityReport> {
    let mut report = SanityReport {
        n_max: n_max.get(),
        ..Default::default()
    };
    for n in 1..=n_max.get() {
        let idx = PIndex(n);
        let p = p_value(idx);
        let fail = |fact: &str| Error::Sanity {
            n,
            fact: fact.to_string(),
        };
        // P_1 = 1 is a cube; the "not a cube" fact is about n >= 2.
        if n >= 2 {
            if is_perfect_cube(&p) {
                return Err(fail("P_n is a perfect cube"));
            }
            report.not_cube += 1;
            if is_perfect_cube(&(&p >> 1)) {
                return Err(fail("P_n / 2 is a perfect cube"));
            }
            report.half_not_cube += 1;
        }
        let m9 = (&p % 9u32).to_u32().unwrap_or(0);
        if m9 == 4 || m9 == 5 {
            return Err(fail("P_n = +-4 (mod 9)"));
        }
        if m9 != p_mod9(idx) {
            return Err(fail("period-6 table disagrees with P_n mod 9"));
        }
        report.mod9_admissible += 1;
        if n % 2 == 0 {
            if (&p % 6u32).to_u32() != Some(0) {
                return Err(fail("P_{2m} != 0 (mod 6)"));
            }
            report.even_index_mod6 += 1;
        } else if n >= 3 {
            if (&p % 18u32).to_u32() != Some(10) {
                return Err(fail("P_{2m+1} != 10 (mod 18)"));
            }
            report.odd_index_mod18 += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(n: u32) -> PIndex {
        PIndex::new(n).unwrap()
    }

    #[test]
    fn values() {
        assert_eq!(p_value(idx(1)), BigUint::from(1u32));
        assert_eq!(p_value(idx(2)), BigUint::from(6u32));
        assert_eq!(p_value(idx(5)), BigUint::from(496u32));
        assert_eq!(p_value(idx(13)), BigUint::from(33_550_336u32));
        assert!(PIndex::new(0).is_err());
    }

    #[test]
    fn mod9_table() {
        assert_eq!(p_mod9(idx(2)), 6);
        assert_eq!(p_mod9(idx(6)), 0);
        assert_eq!(p_mod9(idx(13)), 1);
        for n in 1..=2000 {
            let direct = (p_value(idx(n)) % 9u32).to_u32().unwrap();
            assert_eq!(p_mod9(idx(n)), direct, "n = {n}");
        }
    }

    #[test]
    fn two_cube_residues_by_brute_force() {
        let mut seen = [false; 9];
        for a in 0..9u32 {
            for b in 0..9u32 {
                seen[((a * a * a + b * b * b) % 9) as usize] = true;
            }
        }
        let attained: Vec<u32> = (0..9).filter(|&r| seen[r as usize]).collect();
        assert_eq!(attained, TWO_CUBE_RESIDUES_MOD9);
        for r in 0..9 {
            assert_eq!(two_cube_admissible_mod9(r), seen[r as usize]);
        }
    }

    #[test]
    fn x_filter() {
        assert_eq!(x_residue_filter(idx(8)).allowed, vec![2]);
        assert_eq!(x_residue_filter(idx(10)).allowed, vec![1]);
        assert_eq!(x_residue_filter(idx(3)).allowed, vec![0, 1, 2]);
        for n in 1..=60 {
            assert_eq!(
                x_residue_filter(idx(n)),
                x_residue_filter_for(p_mod9(idx(n)))
            );
        }
    }

    #[test]
    fn filtered_x_leaves_inadmissible_residue() {
        for n in [2u32, 4, 8, 10, 14, 16] {
            let filter = x_residue_filter(idx(n));
            let p9 = p_mod9(idx(n));
            for x in 0..27u32 {
                if !filter.contains(x as u64) {
                    let r = (p9 + 9 * 27 - x * x * x % 9) % 9;
                    assert!([3, 4, 5, 6].contains(&r), "n = {n}, x = {x}");
                }
            }
        }
    }

    #[test]
    fn sanity() {
        let r = sanity_checks(idx(6)).unwrap();
        assert_eq!(r.even_index_mod6, 3);
        assert_eq!(r.odd_index_mod18, 2);
        let r = sanity_checks(idx(1)).unwrap();
        assert_eq!(r.odd_index_mod18, 0);
        sanity_checks(idx(100)).unwrap();
    }
}
