//! Exact integer primitives: floor roots, perfect-power tests and gcds.
//!
//! Every root is seeded (by a float estimate or a power of two) and then
//! corrected with integer comparisons, so results never depend on
//! floating-point rounding.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Floor cube root: the `r` with `r^3 <= n < (r+1)^3`.
pub fn icbrt(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u128() {
        return BigUint::from(icbrt_u128(small));
    }
    // Newton from above: 2^ceil(bits/3) >= cbrt(n).
    let bits = n.bits();
    let mut r = BigUint::one() << bits.div_ceil(3);
    loop {
        let next = (&r * 2u32 + n / (&r * &r)) / 3u32;
        if next >= r {
            break;
        }
        r = next;
    }
    while &r * &r * &r > *n {
        r -= 1u32;
    }
    loop {
        let up = &r + 1u32;
        if &up * &up * &up > *n {
            break;
        }
        r = up;
    }
    r
}

/// Floor cube root of a `u128`.
pub fn icbrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).cbrt() as u128;
    while cube_checked(r).is_none_or(|c| c > n) {
        r -= 1;
    }
    while cube_checked(r + 1).is_some_and(|c| c <= n) {
        r += 1;
    }
    r
}

fn cube_checked(r: u128) -> Option<u128> {
    r.checked_mul(r)?.checked_mul(r)
}

/// Floor square root of a `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

// Bit k set iff k is a square modulo the table's modulus.
const SQUARES_MOD64: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

const SQUARES_MOD63: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 63 {
        mask |= 1 << ((i * i) % 63);
        i += 1;
    }
    mask
};

const SQUARES_MOD65: u128 = {
    let mut mask = 0u128;
    let mut i = 0;
    while i < 65 {
        mask |= 1 << ((i * i) % 65);
        i += 1;
    }
    mask
};

/// Cheap necessary condition for `n` being a perfect square, using the
/// square residues modulo 64, 63 (= 9 * 7) and 65.
#[inline]
pub fn maybe_square_u128(n: u128) -> bool {
    SQUARES_MOD64 >> (n % 64) & 1 == 1
        && SQUARES_MOD63 >> (n % 63) & 1 == 1
        && SQUARES_MOD65 >> (n % 65) & 1 == 1
}

/// Exact square root of a `u128`, or `None` if `n` is not a perfect square.
#[inline]
pub fn isqrt_exact_u128(n: u128) -> Option<u128> {
    if !maybe_square_u128(n) {
        return None;
    }
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

/// Floor square root of an arbitrary natural number.
pub fn isqrt(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u128() {
        return BigUint::from(isqrt_u128(small));
    }
    let mut r = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let next = (&r + n / &r) >> 1;
        if next >= r {
            break;
        }
        r = next;
    }
    while &r * &r > *n {
        r -= 1u32;
    }
    r
}

/// Exact square root, or `None` if `n` is not a perfect square.
pub fn isqrt_exact(n: &BigUint) -> Option<BigUint> {
    if let Some(small) = n.to_u128() {
        return isqrt_exact_u128(small).map(BigUint::from);
    }
    let low = n.iter_u64_digits().next().unwrap_or(0);
    let m63 = (n % 63u32).to_u64().unwrap_or(0);
    if SQUARES_MOD64 >> (low % 64) & 1 == 0 || SQUARES_MOD63 >> m63 & 1 == 0 {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

// Cubic residues modulo 7, 9 and 13 packed as bitmasks.
const CUBES_MOD7: u32 = (1 << 0) | (1 << 1) | (1 << 6);
const CUBES_MOD9: u32 = (1 << 0) | (1 << 1) | (1 << 8);
const CUBES_MOD13: u32 = (1 << 0) | (1 << 1) | (1 << 5) | (1 << 8) | (1 << 12);

/// Whether `n` is a perfect cube.
pub fn is_perfect_cube(n: &BigUint) -> bool {
    let m = (n % (7u32 * 9 * 13)).to_u32().unwrap_or(0);
    if CUBES_MOD7 >> (m % 7) & 1 == 0
        || CUBES_MOD9 >> (m % 9) & 1 == 0
        || CUBES_MOD13 >> (m % 13) & 1 == 0
    {
        return false;
    }
    let r = icbrt(n);
    &r * &r * &r == *n
}

/// Greatest common divisor of the absolute values of three integers.
pub fn gcd3(x: &BigInt, y: &BigInt, z: &BigInt) -> Result<BigUint> {
    gcd_all([x, y, z])
}

/// Greatest common divisor of the absolute values of any number of integers.
///
/// Fails when every argument is zero (or there are none).
pub fn gcd_all<'a>(terms: impl IntoIterator<Item = &'a BigInt>) -> Result<BigUint> {
    let g = terms
        .into_iter()
        .fold(BigUint::zero(), |acc, t| acc.gcd(t.magnitude()));
    if g.is_zero() {
        Err(Error::UndefinedGcd)
    } else {
        Ok(g)
    }
}

/// Sum of cubes of the given terms.
pub fn sum_of_cubes<'a>(terms: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    terms.into_iter().map(|t| t * t * t).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u128) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn cube_root_examples() {
        assert_eq!(icbrt(&big(27)), big(3));
        assert_eq!(icbrt(&big(0)), big(0));
        // 31^3 = 29791 <= 32640 < 32768 = 32^3
        assert_eq!(icbrt(&big(32640)), big(31));
    }

    #[test]
    fn cube_root_exhaustive_small() {
        let mut r = 0u128;
        for n in 0..=1_000_000u128 {
            if (r + 1).pow(3) <= n {
                r += 1;
            }
            assert_eq!(icbrt_u128(n), r, "n = {n}");
        }
    }

    #[test]
    fn cube_root_extremes() {
        let r = icbrt_u128(u128::MAX);
        assert!(r.checked_pow(3).is_some());
        assert!(cube_checked(r + 1).is_none());
        let c = 6_981_463_658_331u128; // floor(cbrt(2^128 - 1))
        assert_eq!(r, c);
        assert_eq!(icbrt_u128(c * c * c), c);
        assert_eq!(icbrt_u128(c * c * c - 1), c - 1);
    }

    #[test]
    fn square_root_examples() {
        assert_eq!(isqrt_exact(&big(36)), Some(big(6)));
        assert_eq!(isqrt_exact(&big(35)), None);
        assert_eq!(isqrt_exact(&big(0)), Some(big(0)));
        assert_eq!(
            isqrt_exact_u128(u64::MAX as u128 * u64::MAX as u128),
            Some(u64::MAX as u128)
        );
    }

    #[test]
    fn residue_masks_never_reject_squares() {
        for s in 0..100_000u128 {
            assert!(maybe_square_u128(s * s));
        }
    }

    #[test]
    fn gcd_examples() {
        let t = |a: i64, b: i64, c: i64| gcd3(&a.into(), &b.into(), &c.into()).unwrap();
        assert_eq!(t(4, 6, 6), big(2));
        assert_eq!(t(0, 1, 3), big(1));
        assert_eq!(t(1024, 1014784, 1080320), big(1024));
        assert!(matches!(
            gcd3(&0.into(), &0.into(), &0.into()),
            Err(Error::UndefinedGcd)
        ));
    }

    #[test]
    fn perfect_cube_detection() {
        for r in 0..2000u32 {
            let c = BigUint::from(r).pow(3);
            assert!(is_perfect_cube(&c));
            if r > 1 {
                assert!(!is_perfect_cube(&(&c + 1u32)));
            }
        }
        let huge = BigUint::from(3u32).pow(300);
        assert!(is_perfect_cube(&huge));
        assert!(!is_perfect_cube(&(huge + 1u32)));
    }

    proptest! {
        #[test]
        fn big_cube_root_brackets(v in proptest::collection::vec(any::<u32>(), 1..12)) {
            let n = BigUint::new(v);
            let r = icbrt(&n);
            prop_assert!(&r * &r * &r <= n);
            let up = &r + 1u32;
            prop_assert!(&up * &up * &up > n);
        }

        #[test]
        fn exact_square_roundtrip(s in any::<u128>()) {
            let s = BigUint::from(s);
            let sq = &s * &s;
            prop_assert_eq!(isqrt_exact(&sq), Some(s.clone()));
            if !s.is_zero() {
                prop_assert_eq!(isqrt_exact(&(sq + 1u32)), None);
            }
        }

        #[test]
        fn gcd_symmetric(a in any::<i64>(), b in any::<i64>(), c in 1..i64::MAX) {
            let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
            let g = gcd3(&a, &b, &c).unwrap();
            prop_assert_eq!(&g, &gcd3(&c, &a, &b).unwrap());
            prop_assert_eq!(&g, &gcd3(&-&b, &c, &-&a).unwrap());
        }
    }
}
