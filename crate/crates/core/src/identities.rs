//! Closed-form representations of `P_n` as sums of three and four cubes.
//!
//! Three-cube families (`t = 2^m` throughout):
//!
//! | id           | applies to   | terms                                                                  |
//! |--------------|--------------|------------------------------------------------------------------------|
//! | `p3m1`       | `n = 3m + 1` | `(4^m, 4^m, -2^m)`                                                     |
//! | `p6m2`       | `n = 6m + 2` | `(2^(4m+1), -4^m, -4^m)`                                               |
//! | `p6m1-sq`    | `n = 6m + 1` | `(t^2 (t^2 + t - 1), t^2 (t^2 - t - 1), t^2)`                          |
//! | `p6m1-21`    | `n = 6m + 1`, `m >= 2` | `(2^(m-2) (2^(3m+2) - 21), 2^(m-2) (2^(3m+2) + 21), -11 * 2^(2m-1))` |
//! | `p6m5-a`     | `n = 6m + 5` | `(2^m (8T^3 + 4T^2 + 1), 2^m (8T^3 - 4T^2 - 1), -4T^2 (2^(2m+1) + 1))`, `T = 2^m` |
//! | `p6m5-b`     | `n = 6m + 5` | `(2^(2m+1) (4T^2 - 2T - 1), 2^(2m+1) (4T^2 + 2T - 1), -2^(4m+3))`      |
//!
//! The `p6m1-21` form has non-integral terms at `m = 1`; it is only emitted
//! from `m = 2` on.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::mersenne::PIndex;
use crate::repr::{dedup_canonical, Provenance, Representation};
use crate::tables;
use crate::{Error, Result};

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

fn family(n: PIndex, id: &str, terms: Vec<BigInt>) -> Result<Representation> {
    Representation::new(n, terms, Provenance::Identity(id.to_string()))
}

/// Every applicable three-cube identity family evaluated at `n`, verified,
/// canonicalized and deduplicated. Empty when no family applies.
pub fn three_cube_identity(n: PIndex) -> Result<Vec<Representation>> {
    let k = n.get();
    let mut out = Vec::new();

    if k % 3 == 1 {
        let m = (k - 1) / 3;
        out.push(family(n, "p3m1", vec![pow2(2 * m), pow2(2 * m), -pow2(m)])?);
    }
    if k % 6 == 2 {
        let m = (k - 2) / 6;
        out.push(family(
            n,
            "p6m2",
            vec![pow2(4 * m + 1), -pow2(2 * m), -pow2(2 * m)],
        )?);
    }
    if k % 6 == 1 {
        let m = (k - 1) / 6;
        let t = pow2(m);
        let t2 = &t * &t;
        out.push(family(
            n,
            "p6m1-sq",
            vec![&t2 * (&t2 + &t - 1), &t2 * (&t2 - &t - 1), t2.clone()],
        )?);
        if m >= 2 {
            let scale = pow2(m - 2);
            let big = pow2(3 * m + 2);
            out.push(family(
                n,
                "p6m1-21",
                vec![
                    &scale * (&big - 21),
                    &scale * (&big + 21),
                    -(pow2(2 * m - 1) * 11u32),
                ],
            )?);
        }
    }
    if k % 6 == 5 {
        let m = (k - 5) / 6;
        let a = pow2(3 * (m + 1));
        let b = pow2(2 * (m + 1));
        out.push(family(
            n,
            "p6m5-a",
            vec![
                pow2(m) * (&a + &b + 1),
                pow2(m) * (&a - &b - 1),
                -(&b * (pow2(2 * m + 1) + 1u32)),
            ],
        )?);
        let s = pow2(2 * m + 1);
        let c = pow2(m + 1);
        out.push(family(
            n,
            "p6m5-b",
            vec![&s * (&b - &c - 1), &s * (&b + &c - 1), -pow2(4 * m + 3)],
        )?);
    }
    Ok(dedup_canonical(out))
}

/// A four-cube representation of `P_n`, `n >= 2`.
///
/// Even `n = 2m`: `(t, 1-t, 1-t, t-2)` with `t = (2^(4m-2) - 2^(2m-2) + 3) / 3`,
/// from `t^3 - 2(t-1)^3 + (t-2)^3 = 6(t-1)`.
///
/// Odd `n = 2m+1`: `(3t-12, 13-3t, -t, t-9)` with
/// `t = (2^(4m) - 2^(2m-1) + 130) / 9`, from
/// `(3t-12)^3 - (3t-13)^3 - t^3 + (t-9)^3 = 2(9t-130)`.
pub fn four_cube_rep(n: PIndex) -> Result<Representation> {
    let k = n.get();
    if k < 2 {
        return Err(Error::ContractViolation(
            "four-cube construction needs n >= 2 (the odd-case parameter is not integral at n = 1)"
                .into(),
        ));
    }
    let divide = |num: BigInt, by: u32| -> Result<BigInt> {
        let by = BigInt::from(by);
        if !(&num % &by).is_zero() {
            return Err(Error::Divisibility {
                n: k,
                detail: format!("{by} does not divide the parameter numerator {num}"),
            });
        }
        Ok(num / by)
    };
    let (terms, id) = if k.is_multiple_of(2) {
        let m = k / 2;
        let t = divide(pow2(4 * m - 2) - pow2(2 * m - 2) + 3, 3)?;
        let one_minus = BigInt::one() - &t;
        (
            vec![t.clone(), one_minus.clone(), one_minus, t - 2],
            "four-even",
        )
    } else {
        let m = (k - 1) / 2;
        let t = divide(pow2(4 * m) - pow2(2 * m - 1) + 130, 9)?;
        (
            vec![&t * 3 - 12, BigInt::from(13) - &t * 3, -t.clone(), t - 9],
            "four-odd",
        )
    };
    family(n, id, terms)
}

/// The representations listed explicitly in the embedded special table
/// (small-n cases and the lifted large-n searches), each verified on load.
pub fn special_reps() -> Result<Vec<Representation>> {
    tables::special_rows()?
        .into_iter()
        .map(|row| {
            let n = PIndex::new(row.n)?;
            Representation::new(n, row.terms, Provenance::Table(row.source)).map_err(|e| {
                Error::DataCorruption(format!("special representation for n = {}: {e}", row.n))
            })
        })
        .collect()
}

/// The polynomial identities behind the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyIdentity {
    /// `2t^6 - 1 = (t^2+t-1)^3 + (t^2-t-1)^3 + 1`
    TwoT6,
    /// `64t^3 (2t^6 - 1) = (4t^3-21)^3 + (4t^3+21)^3 - (22t)^3`
    SixtyFourT3,
    /// `t^3 (t^6 - 2) = (t^3+t^2+1)^3 + (t^3-t^2-1)^3 - (t(t^2+2))^3`
    T3T6,
    /// `t^3 - 2(t-1)^3 + (t-2)^3 = 6(t-1)`
    SixTMinusOne,
    /// `(3t-12)^3 - (3t-13)^3 - t^3 + (t-9)^3 = 2(9t-130)`
    NineTMinus130,
}

impl PolyIdentity {
    pub const ALL: [PolyIdentity; 5] = [
        PolyIdentity::TwoT6,
        PolyIdentity::SixtyFourT3,
        PolyIdentity::T3T6,
        PolyIdentity::SixTMinusOne,
        PolyIdentity::NineTMinus130,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PolyIdentity::TwoT6 => "2t6",
            PolyIdentity::SixtyFourT3 => "64t3",
            PolyIdentity::T3T6 => "t3t6",
            PolyIdentity::SixTMinusOne => "6t-1",
            PolyIdentity::NineTMinus130 => "9t-130",
        }
    }

    pub fn degree(self) -> u32 {
        match self {
            PolyIdentity::TwoT6 => 6,
            PolyIdentity::SixtyFourT3 | PolyIdentity::T3T6 => 9,
            PolyIdentity::SixTMinusOne | PolyIdentity::NineTMinus130 => 3,
        }
    }

    pub fn lhs(self, t: &BigInt) -> BigInt {
        let p = |e: u32| t.pow(e);
        match self {
            PolyIdentity::TwoT6 => p(6) * 2 - 1,
            PolyIdentity::SixtyFourT3 => p(3) * 64 * (p(6) * 2 - 1),
            PolyIdentity::T3T6 => p(3) * (p(6) - 2),
            PolyIdentity::SixTMinusOne => p(3) - (t - 1u32).pow(3) * 2 + (t - 2u32).pow(3),
            PolyIdentity::NineTMinus130 => {
                (t * 3u32 - 12u32).pow(3) - (t * 3u32 - 13u32).pow(3) - p(3) + (t - 9u32).pow(3)
            }
        }
    }

    pub fn rhs(self, t: &BigInt) -> BigInt {
        let p = |e: u32| t.pow(e);
        match self {
            PolyIdentity::TwoT6 => (p(2) + t - 1u32).pow(3) + (p(2) - t - 1u32).pow(3) + 1,
            PolyIdentity::SixtyFourT3 => {
                (p(3) * 4u32 - 21u32).pow(3) + (p(3) * 4u32 + 21u32).pow(3) - (t * 22u32).pow(3)
            }
            PolyIdentity::T3T6 => {
                (p(3) + p(2) + 1u32).pow(3) + (p(3) - p(2) - 1u32).pow(3)
                    - (t * (p(2) + 2u32)).pow(3)
            }
            PolyIdentity::SixTMinusOne => (t - 1) * 6,
            PolyIdentity::NineTMinus130 => (t * 9 - 130) * 2,
        }
    }
}

impl fmt::Display for PolyIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PolyIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolyIdentity::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Evaluates both sides of the named identity exactly at every sample.
/// Agreement at `degree + 1` distinct points proves the identity.
pub fn verify_polynomial_identity(id: &str, samples: &[BigInt]) -> Result<bool> {
    let ident: PolyIdentity = id.parse()?;
    Ok(samples.iter().all(|t| ident.lhs(t) == ident.rhs(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::SignClass;

    fn idx(n: u32) -> PIndex {
        PIndex::new(n).unwrap()
    }

    fn terms(r: &Representation) -> Vec<i64> {
        r.terms()
            .iter()
            .map(|t| i64::try_from(t).unwrap())
            .collect()
    }

    fn has(reps: &[Representation], expect: &[i64]) -> bool {
        let mut e = expect.to_vec();
        e.sort();
        reps.iter().any(|r| terms(r) == e)
    }

    #[test]
    fn three_cube_examples() {
        let r4 = three_cube_identity(idx(4)).unwrap();
        assert!(has(&r4, &[4, 4, -2]));
        let r8 = three_cube_identity(idx(8)).unwrap();
        assert!(has(&r8, &[32, -4, -4]));
        let r5 = three_cube_identity(idx(5)).unwrap();
        assert!(has(&r5, &[13, 3, -12]));
        assert!(has(&r5, &[2, 10, -8]));
        let r13 = three_cube_identity(idx(13)).unwrap();
        assert!(has(&r13, &[235, 277, -88]));
        let r7 = three_cube_identity(idx(7)).unwrap();
        assert!(has(&r7, &[16, 16, -4]));
        assert!(has(&r7, &[4, 4, 20]));
        assert_eq!(r7.len(), 2);
    }

    #[test]
    fn inapplicable_indices_are_empty() {
        for n in [3u32, 6, 9, 12, 15, 18] {
            assert!(three_cube_identity(idx(n)).unwrap().is_empty(), "n = {n}");
        }
    }

    #[test]
    fn at_least_two_for_plus_minus_one_mod_six() {
        for n in (7..=400u32).filter(|n| n % 6 == 1 || n % 6 == 5) {
            assert!(three_cube_identity(idx(n)).unwrap().len() >= 2, "n = {n}");
        }
    }

    #[test]
    fn four_cube_examples() {
        let r = four_cube_rep(idx(2)).unwrap();
        assert_eq!(terms(&r), vec![2, -1, -1, 0]);
        let r = four_cube_rep(idx(3)).unwrap();
        assert_eq!(terms(&r), vec![36, -35, -16, 7]);
        let r = four_cube_rep(idx(4)).unwrap();
        assert_eq!(terms(&r), vec![21, -20, -20, 19]);
        assert_eq!(r.sign_class(), SignClass::Mixed);
        assert!(four_cube_rep(idx(1)).is_err());
    }

    #[test]
    fn four_cubes_up_to_300() {
        for n in 2..=300 {
            assert!(four_cube_rep(idx(n)).unwrap().verify());
        }
    }

    #[test]
    fn polynomial_identities() {
        let range = |a: i64, b: i64| (a..=b).map(BigInt::from).collect::<Vec<_>>();
        assert!(verify_polynomial_identity("2t6", &range(-3, 3)).unwrap());
        assert!(verify_polynomial_identity("64t3", &[BigInt::zero()]).unwrap());
        let s: Vec<BigInt> = [0, 1, 2, 10].into_iter().map(BigInt::from).collect();
        assert!(verify_polynomial_identity("6t-1", &s).unwrap());
        for p in PolyIdentity::ALL {
            let pts = range(-10, 9);
            assert!(pts.len() as u32 > p.degree());
            assert!(verify_polynomial_identity(p.id(), &pts).unwrap(), "{p}");
        }
        assert!(matches!(
            verify_polynomial_identity("nope", &[]),
            Err(Error::UnknownIdentity(_))
        ));
    }

    #[test]
    fn special_table_loads() {
        let reps = special_reps().unwrap();
        let ns: std::collections::BTreeSet<u32> = reps.iter().map(|r| r.n().get()).collect();
        assert_eq!(
            ns.into_iter().collect::<Vec<_>>(),
            vec![2, 3, 8, 20, 41, 42, 43, 45, 47, 48, 49, 51]
        );
        let p2: Vec<_> = reps.iter().filter(|r| r.n().get() == 2).collect();
        assert_eq!(p2.len(), 2);
        let p43 = reps.iter().find(|r| r.n().get() == 43).unwrap();
        let s = BigInt::from(1 << 14);
        assert_eq!(p43.terms(), &[s.clone(), &s * 16255, &s * 16511]);
    }
}
