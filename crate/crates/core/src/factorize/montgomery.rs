//! Montgomery multiplication for odd moduli below 2^64 and 2^128.
//!
//! Both reductions use the "subtract high halves" form of REDC, which is
//! valid for every odd modulus of the word size (no headroom bit needed).

use num_traits::{One, PrimInt, WrappingAdd, WrappingMul, WrappingSub, Zero};

/// Unsigned machine word usable as a Montgomery modulus.
pub trait Word:
    PrimInt + WrappingAdd + WrappingSub + WrappingMul + std::fmt::Debug + Send + Sync + 'static
{
    const BITS: u32;
    fn from_u64(v: u64) -> Self;
    fn low_u64(self) -> u64;
}

impl Word for u64 {
    const BITS: u32 = 64;
    fn from_u64(v: u64) -> Self {
        v
    }
    fn low_u64(self) -> u64 {
        self
    }
}

impl Word for u128 {
    const BITS: u32 = 128;
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn low_u64(self) -> u64 {
        self as u64
    }
}

/// Arithmetic modulo a fixed odd `n`, with residues kept in Montgomery form.
pub trait Montgomery: Sized + Send + Sync {
    type W: Word;

    fn new(n: Self::W) -> Self;
    fn modulus(&self) -> Self::W;
    /// Montgomery form of 1.
    fn one(&self) -> Self::W;
    fn to_mont(&self, a: Self::W) -> Self::W;
    fn demont(&self, a: Self::W) -> Self::W;
    fn mul(&self, a: Self::W, b: Self::W) -> Self::W;

    #[inline]
    fn add(&self, a: Self::W, b: Self::W) -> Self::W {
        let n = self.modulus();
        // a, b < n; a + b may overflow the word.
        let (s, carry) = a.overflowing_add_w(b);
        if carry || s >= n {
            s.wrapping_sub(&n)
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: Self::W, b: Self::W) -> Self::W {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(&b).wrapping_add(&self.modulus())
        }
    }

    fn pow(&self, mut base: Self::W, mut exp: Self::W) -> Self::W {
        let mut acc = self.one();
        while !exp.is_zero() {
            if exp & Self::W::one() == Self::W::one() {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp = exp >> 1;
        }
        acc
    }
}

trait OverflowingAdd: Sized {
    fn overflowing_add_w(self, other: Self) -> (Self, bool);
}

impl<W: Word> OverflowingAdd for W {
    #[inline]
    fn overflowing_add_w(self, other: Self) -> (Self, bool) {
        let s = self.wrapping_add(&other);
        (s, s < self)
    }
}

/// Inverse of odd `n` modulo 2^BITS by Newton iteration.
fn word_inverse<W: Word>(n: W) -> W {
    let two = W::from_u64(2);
    // n * n == 1 (mod 8): three correct bits to start, doubling each step.
    let mut inv = n;
    let mut bits = 3;
    while bits < W::BITS {
        inv = inv.wrapping_mul(&two.wrapping_sub(&n.wrapping_mul(&inv)));
        bits *= 2;
    }
    inv
}

/// 2^(2 BITS) mod n, built by modular doubling from 2^BITS mod n.
fn r_squared<M: Montgomery>(m: &M, r_mod_n: M::W) -> M::W {
    let mut x = r_mod_n;
    for _ in 0..<M::W as Word>::BITS {
        x = m.add(x, x);
    }
    x
}

#[derive(Clone, Debug)]
pub struct Mont64 {
    n: u64,
    n_inv: u64,
    one: u64,
    r2: u64,
}

impl Mont64 {
    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_inv);
        let mn_hi = ((m as u128 * self.n as u128) >> 64) as u64;
        let t_hi = (t >> 64) as u64;
        if t_hi >= mn_hi {
            t_hi - mn_hi
        } else {
            t_hi.wrapping_sub(mn_hi).wrapping_add(self.n)
        }
    }
}

impl Montgomery for Mont64 {
    type W = u64;

    fn new(n: u64) -> Self {
        assert!(
            n % 2 == 1 && n > 1,
            "Montgomery modulus must be odd and > 1"
        );
        let one = ((u64::MAX % n) + 1) % n;
        let mut m = Mont64 {
            n,
            n_inv: word_inverse(n),
            one,
            r2: 0,
        };
        m.r2 = r_squared(&m, one);
        m
    }

    #[inline]
    fn modulus(&self) -> u64 {
        self.n
    }

    #[inline]
    fn one(&self) -> u64 {
        self.one
    }

    #[inline]
    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    #[inline]
    fn demont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }
}

/// Full 128 x 128 -> 256 bit product as (high, low).
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Clone, Debug)]
pub struct Mont128 {
    n: u128,
    n_inv: u128,
    one: u128,
    r2: u128,
}

impl Mont128 {
    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.n_inv);
        let (mn_hi, _) = mul_wide(m, self.n);
        if hi >= mn_hi {
            hi - mn_hi
        } else {
            hi.wrapping_sub(mn_hi).wrapping_add(self.n)
        }
    }
}

impl Montgomery for Mont128 {
    type W = u128;

    fn new(n: u128) -> Self {
        assert!(
            n % 2 == 1 && n > 1,
            "Montgomery modulus must be odd and > 1"
        );
        let one = ((u128::MAX % n) + 1) % n;
        let mut m = Mont128 {
            n,
            n_inv: word_inverse(n),
            one,
            r2: 0,
        };
        m.r2 = r_squared(&m, one);
        m
    }

    #[inline]
    fn modulus(&self) -> u128 {
        self.n
    }

    #[inline]
    fn one(&self) -> u128 {
        self.one
    }

    #[inline]
    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    #[inline]
    fn demont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }
}
