//! Odd primes below the trial-division bound, with precomputed inverses so a
//! divisibility test is one multiplication and one comparison.

use std::sync::OnceLock;

/// Every prime factor below this bound is removed by trial division.
pub const TRIAL_BOUND: u64 = 100_000;

#[derive(Clone, Copy, Debug)]
pub struct SmallPrime {
    pub p: u64,
    inv64: u64,
    lim64: u64,
    inv128: u128,
    lim128: u128,
}

impl SmallPrime {
    fn new(p: u64) -> Self {
        let mut inv64 = p;
        for _ in 0..6 {
            inv64 = inv64.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv64)));
        }
        let p128 = p as u128;
        let mut inv128 = p128;
        for _ in 0..7 {
            inv128 = inv128.wrapping_mul(2u128.wrapping_sub(p128.wrapping_mul(inv128)));
        }
        SmallPrime {
            p,
            inv64,
            lim64: u64::MAX / p,
            inv128,
            lim128: u128::MAX / p128,
        }
    }

    /// `n / p` if `p` divides `n`.
    #[inline]
    pub fn divide_u64(&self, n: u64) -> Option<u64> {
        let q = n.wrapping_mul(self.inv64);
        (q <= self.lim64).then_some(q)
    }

    /// `n / p` if `p` divides `n`.
    #[inline]
    pub fn divide_u128(&self, n: u128) -> Option<u128> {
        let q = n.wrapping_mul(self.inv128);
        (q <= self.lim128).then_some(q)
    }
}

/// Plain sieve of Eratosthenes, primes `< limit`.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Odd primes `< TRIAL_BOUND`.
pub fn odd_primes() -> &'static [SmallPrime] {
    static TABLE: OnceLock<Vec<SmallPrime>> = OnceLock::new();
    TABLE.get_or_init(|| {
        primes_below(TRIAL_BOUND)
            .into_iter()
            .skip(1)
            .map(SmallPrime::new)
            .collect()
    })
}
