//! Miller-Rabin and Pollard-Brent rho over machine words.

use std::time::Instant;

use num_traits::{One, PrimInt, Zero};

use super::montgomery::{Montgomery, Word};

/// SplitMix64; used for rho parameters and extra Miller-Rabin bases.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_word<W: Word>(&mut self) -> W {
        if W::BITS == 64 {
            W::from_u64(self.next_u64())
        } else {
            (W::from_u64(self.next_u64()) << 64) | W::from_u64(self.next_u64())
        }
    }
}

/// One Miller-Rabin round; `true` if `n` is a strong probable prime to
/// `base`. Requires odd `n > 2`, `d * 2^s = n - 1` with `d` odd.
pub fn strong_probable_prime<M: Montgomery>(m: &M, base: M::W, d: M::W, s: u32) -> bool {
    let n = m.modulus();
    let base = base % n;
    if base.is_zero() {
        return true;
    }
    let one = m.one();
    let minus_one = m.sub(m.to_mont(M::W::zero()), one);
    let mut x = m.pow(m.to_mont(base), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = m.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Miller-Rabin over every base in `bases`, for odd `n > 2`.
pub fn miller_rabin<M: Montgomery>(n: M::W, bases: impl IntoIterator<Item = M::W>) -> bool {
    let m = M::new(n);
    let n_minus_1 = n - M::W::one();
    let s = n_minus_1.trailing_zeros();
    let d = n_minus_1 >> s as usize;
    bases
        .into_iter()
        .all(|a| strong_probable_prime(&m, a, d, s))
}

pub fn binary_gcd<W: Word>(mut a: W, mut b: W) -> W {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a = a >> a.trailing_zeros() as usize;
    loop {
        b = b >> b.trailing_zeros() as usize;
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b = b - a;
        if b.is_zero() {
            return a << shift as usize;
        }
    }
}

pub enum RhoOutcome<W> {
    Factor(W),
    Failed,
    Deadline,
}

const BATCH: u64 = 128;

/// Brent's cycle-finding variant of Pollard rho with batched gcds and
/// backtracking, iterating `y -> y^2 + c (mod n)`. Gives up after roughly
/// `max_iterations` steps.
pub fn brent<M: Montgomery>(
    m: &M,
    c: M::W,
    y0: M::W,
    max_iterations: u64,
    deadline: Option<Instant>,
) -> RhoOutcome<M::W> {
    let n = m.modulus();
    let one = M::W::one();
    let c = m.to_mont(c);
    let f = |v: M::W| m.add(m.mul(v, v), c);

    let mut y = m.to_mont(y0);
    let mut x = y;
    let mut ys = y;
    let mut q = m.one();
    let mut g = one;
    let mut r: u64 = 1;
    let mut steps: u64 = 0;

    while g == one {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y;
            let batch = BATCH.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = m.mul(q, m.sub(x, y));
            }
            g = binary_gcd(q, n);
            k += batch;
        }
        steps += 2 * r;
        r *= 2;
        if g == one {
            if steps > max_iterations {
                return RhoOutcome::Failed;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return RhoOutcome::Deadline;
            }
        }
    }

    if g == n {
        // The batch overshot; replay it one step at a time.
        loop {
            ys = f(ys);
            g = binary_gcd(m.sub(x, ys), n);
            if g != one {
                break;
            }
        }
    }
    if g == n {
        RhoOutcome::Failed
    } else {
        RhoOutcome::Factor(g)
    }
}
