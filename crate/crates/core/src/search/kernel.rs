//! The per-`x` step: factor `Q = |N - x^3|`, walk its divisors `d = y + z`
//! and solve `Q / d = y^2 - yz + z^2` for integral `y, z`.
//!
//! With `D = 4Q/d - d^2` the quadratic has discriminant `3D`, which is a
//! square exactly when `D = 3r^2`; then `y, z = (d +- r) / 2`. Real roots
//! need `D >= 0`, i.e. `d^3 <= 4Q`, which bounds the divisor walk.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bigmath::{icbrt, icbrt_u128, isqrt_exact, isqrt_exact_u128};
use crate::factorize::{divisors_u128_bounded, divisors_with_cap, Factorizer, DEFAULT_DIVISOR_CAP};
use crate::mersenne::two_cube_admissible_mod9;
use crate::search::Mode;
use crate::{Error, Result};

/// Values below this bound take the machine-word path: `4Q` fits a `u128`.
pub(crate) const FAST_LIMIT: u128 = 1 << 126;

/// Solves `y + z = d`, `y^2 - yz + z^2 = q / d` for `d | q`, returning
/// `(y, z)` with `y >= z`. Requires `q < 2^126`.
#[inline]
pub(crate) fn solve_u128(q: u128, d: u128) -> Option<(i128, i128)> {
    let disc = (4 * (q / d)).checked_sub(d * d)?;
    if disc % 3 != 0 {
        return None;
    }
    let r = isqrt_exact_u128(disc / 3)?;
    if !(d + r).is_multiple_of(2) {
        return None;
    }
    Some((((d + r) / 2) as i128, (d as i128 - r as i128) / 2))
}

/// `(y, z)` with `y >= z`, `y + z = d` and `y^3 + z^3 = q`, if such integers
/// exist.
///
/// Fails with a contract violation unless `q >= 1`, `d >= 1` and `d | q`.
pub fn solve_divisor(q: &BigUint, d: &BigUint) -> Result<Option<(BigInt, BigInt)>> {
    if q.is_zero() || d.is_zero() || !(q % d).is_zero() {
        return Err(Error::ContractViolation(format!(
            "solve_divisor needs 1 <= d | q, got q = {q}, d = {d}"
        )));
    }
    if let (Some(qs), Some(ds)) = (q.to_u128(), d.to_u128()) {
        if qs < FAST_LIMIT {
            return Ok(solve_u128(qs, ds).map(|(y, z)| (BigInt::from(y), BigInt::from(z))));
        }
    }
    Ok(solve_big(q, d))
}

fn solve_big(q: &BigUint, d: &BigUint) -> Option<(BigInt, BigInt)> {
    let four_q_over_d = (q / d) * 4u32;
    let d2 = d * d;
    if four_q_over_d < d2 {
        return None;
    }
    let (third, rem) = (four_q_over_d - d2).div_rem(&BigUint::from(3u32));
    if !rem.is_zero() {
        return None;
    }
    let r = isqrt_exact(&third)?;
    let sum = d + &r;
    if sum.is_odd() {
        return None;
    }
    let y = BigInt::from(sum >> 1);
    let z = (BigInt::from(d.clone()) - BigInt::from(r)) / 2;
    Some((y, z))
}

/// All `(y, z)`, `y >= z`, with `y^3 + z^3 = q` and `y + z > 0`.
pub(crate) fn two_cube_pairs(
    q: &BigUint,
    fz: &Factorizer,
    divisor_cap: usize,
) -> Result<Vec<(BigInt, BigInt)>> {
    if q.is_zero() {
        return Ok(Vec::new());
    }
    if let Some(small) = q.to_u128().filter(|&v| v < FAST_LIMIT) {
        return Ok(two_cube_pairs_u128(small, fz, divisor_cap)?
            .into_iter()
            .map(|(y, z)| (BigInt::from(y), BigInt::from(z)))
            .collect());
    }
    let limit = icbrt(&(q * 4u32));
    let f = fz.factorize(q)?;
    let mut out = Vec::new();
    for d in divisors_with_cap(&f, divisor_cap)? {
        if d > limit {
            break;
        }
        if let Some(pair) = solve_big(q, &d) {
            out.push(pair);
        }
    }
    Ok(out)
}

pub(crate) fn two_cube_pairs_u128(
    q: u128,
    fz: &Factorizer,
    divisor_cap: usize,
) -> Result<Vec<(i128, i128)>> {
    debug_assert!(q > 0 && q < FAST_LIMIT);
    let f = fz.factor_u128(q)?;
    let limit = icbrt_u128(4 * q);
    let mut out = Vec::new();
    for d in divisors_u128_bounded(&f, limit, divisor_cap)? {
        if let Some(pair) = solve_u128(q, d) {
            out.push(pair);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The `(y, z)` completing `x` to a solution of `n = x^3 + y^3 + z^3`.
///
/// Non-negative mode requires `x^3 <= n`. In mixed mode `|n - x^3|` is
/// searched and, when `n - x^3 < 0`, the pairs are negated. With
/// `residue_filter`, values of `n - x^3` that are not sums of two cubes
/// mod 9 are skipped without factoring. `n - x^3 = 0` yields nothing.
pub fn representations_for_x(
    n: &BigUint,
    x: &BigUint,
    mode: Mode,
    residue_filter: bool,
) -> Result<Vec<(BigInt, BigInt)>> {
    let x3 = x * x * x;
    let (q, negative) = if &x3 <= n {
        (n - &x3, false)
    } else if mode == Mode::Mixed {
        (&x3 - n, true)
    } else {
        return Err(Error::ContractViolation(format!(
            "x = {x} exceeds the cube root of {n} in non-negative mode"
        )));
    };
    if q.is_zero() {
        return Ok(Vec::new());
    }
    if residue_filter && !two_cube_admissible_mod9((&q % 9u32).to_u32().unwrap_or(0)) {
        return Ok(Vec::new());
    }
    let pairs = two_cube_pairs(&q, &Factorizer::default(), DEFAULT_DIVISOR_CAP)?;
    Ok(pairs
        .into_iter()
        .map(|(y, z)| if negative { (-y, -z) } else { (y, z) })
        .collect())
}

/// Sorted triple `(x, y, z)` and whether every term is non-negative.
pub(crate) fn canonical_triple(x: BigInt, y: BigInt, z: BigInt) -> ([BigInt; 3], bool) {
    let mut t = [x, y, z];
    t.sort();
    let nonneg = t[0].sign() != Sign::Minus;
    (t, nonneg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn solve(q: u64, d: u64) -> Option<(i64, i64)> {
        solve_divisor(&BigUint::from(q), &BigUint::from(d))
            .unwrap()
            .map(|(y, z)| (i64::try_from(&y).unwrap(), i64::try_from(&z).unwrap()))
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(432, 12), Some((6, 6)));
        assert_eq!(solve(28, 4), Some((3, 1)));
        assert_eq!(solve(28, 2), None);
        assert_eq!(solve(16, 4), Some((2, 2)));
        // y = z = 1 is the one case with d > Q / d.
        assert_eq!(solve(2, 2), Some((1, 1)));
        assert!(solve_divisor(&BigUint::from(28u32), &BigUint::from(3u32)).is_err());
        assert!(solve_divisor(&BigUint::from(0u32), &BigUint::from(3u32)).is_err());
    }

    #[test]
    fn matches_the_closed_form() {
        // y = (3d + sqrt(3(4Q/d - d^2))) / 6 evaluated directly.
        for q in 1..3000u64 {
            for d in (1..=q).filter(|d| q % d == 0) {
                let delta = 3 * (4 * (q / d) as i64 - (d * d) as i64);
                let closed = if delta < 0 {
                    None
                } else {
                    let s = (delta as f64).sqrt().round() as i64;
                    let d = d as i64;
                    (s * s == delta && (3 * d + s) % 6 == 0 && (3 * d - s) % 6 == 0)
                        .then(|| ((3 * d + s) / 6, (3 * d - s) / 6))
                };
                assert_eq!(solve(q, d), closed, "q = {q}, d = {d}");
            }
        }
    }

    #[test]
    fn big_path_agrees() {
        let small = solve_big(&BigUint::from(432u32), &BigUint::from(12u32));
        assert_eq!(small, Some((6.into(), 6.into())));
        let y = BigInt::from(BigUint::from(3u32).pow(50));
        let z = BigInt::from(1u32) - &y;
        let q2 = BigUint::try_from(&y * &y * &y + &z * &z * &z).unwrap();
        assert!(q2.bits() > 128);
        assert_eq!(
            solve_divisor(&q2, &BigUint::from(1u32)).unwrap(),
            Some((y, z))
        );
    }

    #[test]
    fn per_x_examples() {
        let n = |v: u64| BigUint::from(v);
        let pairs = |target: u64, x: u64, mode| -> Vec<(i64, i64)> {
            representations_for_x(&n(target), &n(x), mode, true)
                .unwrap()
                .into_iter()
                .map(|(y, z)| (i64::try_from(&y).unwrap(), i64::try_from(&z).unwrap()))
                .collect()
        };
        assert_eq!(pairs(496, 4, Mode::Nonneg), vec![(6, 6)]);
        assert_eq!(pairs(28, 0, Mode::Nonneg), vec![(3, 1)]);
        assert_eq!(pairs(32640, 32, Mode::Mixed), vec![(-4, -4)]);
        assert!(representations_for_x(&n(32640), &n(32), Mode::Nonneg, true).is_err());
        assert!(pairs(27, 3, Mode::Nonneg).is_empty());
    }

    #[test]
    fn no_hit_beyond_the_divisor_bound() {
        // Brute force over every divisor, not only d^3 <= 4Q.
        for q in 1..=10_000u64 {
            for d in (1..=q).filter(|d| q % d == 0) {
                if solve(q, d).is_some() {
                    assert!(d * d * d <= 4 * q, "q = {q}, d = {d}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn solutions_are_exact(y in -100_000i64..100_000, z in -100_000i64..100_000) {
            prop_assume!(y + z > 0);
            let q = (y as i128).pow(3) + (z as i128).pow(3);
            let d = (y + z) as u128;
            let got = solve_u128(q as u128, d);
            prop_assert_eq!(got, Some((y.max(z) as i128, y.min(z) as i128)));
        }
    }
}
