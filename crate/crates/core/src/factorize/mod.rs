//! Prime factorization and divisor enumeration.
//!
//! Values are reduced by trial division over the odd primes below
//! [`TRIAL_BOUND`], then the cofactor is split recursively with a
//! Miller-Rabin check and Pollard-Brent rho. Anything below 2^128 runs on
//! Montgomery arithmetic over `u64`/`u128`; larger values fall back to
//! `BigUint` arithmetic.

mod montgomery;
mod primes;
mod rho;

use std::collections::hash_map::RandomState;
use std::hash::BuildHasher;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigmath::{isqrt_exact, isqrt_exact_u128};
use crate::{Error, Result};

pub use montgomery::{mul_wide, Mont128, Mont64, Montgomery, Word};
pub use primes::{primes_below, TRIAL_BOUND};
use rho::{brent, miller_rabin, RhoOutcome, SplitMix64};

/// Default limit on the number of divisors [`divisors`] will materialise.
pub const DEFAULT_DIVISOR_CAP: usize = 1 << 24;

// Deterministic for every n < 2^64.
const MR_BASES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
// The first 13 primes are deterministic below 3.3170440e24.
const MR_BASES_SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;
// 64 rounds in total above that limit: error below 4^-64 = 2^-128.
const MR_ROUNDS: usize = 64;

/// How rho is seeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Seed {
    /// Derived from the value being factored, mixed with the given word.
    /// Runs are reproducible.
    FromInput(u64),
    /// Fresh per-process entropy.
    Fresh,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorOptions {
    pub seed: Seed,
    /// Rho restarts (new polynomial constant) before giving up.
    pub rho_attempts: u32,
    /// Iteration budget of a single rho attempt.
    pub rho_iterations: u64,
    /// Wall-clock budget for one call to `factorize`.
    pub timeout: Option<Duration>,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            seed: Seed::FromInput(0),
            rho_attempts: 32,
            rho_iterations: 1 << 26,
            timeout: None,
        }
    }
}

/// Prime factorization: strictly increasing primes with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactorMap {
    factors: Vec<(BigUint, u32)>,
}

impl FactorMap {
    /// Builds a map from prime/exponent pairs, checking every invariant.
    pub fn new(mut factors: Vec<(BigUint, u32)>) -> Result<Self> {
        factors.sort();
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::ContractViolation(format!(
                    "repeated prime {}",
                    w[0].0
                )));
            }
        }
        for (p, e) in &factors {
            if *e == 0 || !is_prime(p) {
                return Err(Error::ContractViolation(format!("invalid factor {p}^{e}")));
            }
        }
        Ok(FactorMap { factors })
    }

    fn from_sorted_u128(factors: Vec<(u128, u32)>) -> Self {
        FactorMap {
            factors: factors
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
        }
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factored value.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn divisor_count(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, (_, e)| acc.saturating_mul(*e as u128 + 1))
    }

    /// Multiplies two factorizations.
    pub fn merge(&self, other: &FactorMap) -> FactorMap {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        FactorMap {
            factors: merge_exponents(all),
        }
    }

    /// The factors as `u128`, if every prime fits.
    pub fn to_u128(&self) -> Option<Vec<(u128, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| p.to_u128().map(|p| (p, *e)))
            .collect()
    }
}

fn merge_exponents<T: Ord>(mut v: Vec<(T, u32)>) -> Vec<(T, u32)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(T, u32)> = Vec::with_capacity(v.len());
    for (p, e) in v {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// All positive divisors, ascending. Fails if there would be more than
/// [`DEFAULT_DIVISOR_CAP`].
pub fn divisors(f: &FactorMap) -> Result<Vec<BigUint>> {
    divisors_with_cap(f, DEFAULT_DIVISOR_CAP)
}

/// All positive divisors, ascending, generated by an odometer over the
/// exponent vector.
pub fn divisors_with_cap(f: &FactorMap, cap: usize) -> Result<Vec<BigUint>> {
    let count = f.divisor_count();
    if count > cap as u128 {
        return Err(Error::DivisorExplosion { count, cap });
    }
    let k = f.factors.len();
    let mut exps = vec![0u32; k];
    // partial[i] = product of p_j^e_j for j < i
    let mut partial = vec![BigUint::one(); k + 1];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        out.push(partial[k].clone());
        // advance the odometer
        let mut i = k;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            let (p, e) = &f.factors[i];
            if exps[i] < *e {
                exps[i] += 1;
                partial[i + 1] = &partial[i + 1] * p;
                break;
            }
            exps[i] = 0;
        }
        for j in i + 1..k {
            partial[j + 1] = partial[j].clone();
        }
    }
}

/// Divisors `<= limit` of the number whose factorization is `factors`
/// (unsorted). The cap applies to the full divisor count.
pub fn divisors_u128_bounded(
    factors: &[(u128, u32)],
    limit: u128,
    cap: usize,
) -> Result<Vec<u128>> {
    let count = factors
        .iter()
        .fold(1u128, |acc, (_, e)| acc.saturating_mul(*e as u128 + 1));
    if count > cap as u128 {
        return Err(Error::DivisorExplosion { count, cap });
    }
    let mut out = vec![1u128];
    for &(p, e) in factors {
        let len = out.len();
        for i in 0..len {
            let mut d = out[i];
            for _ in 0..e {
                match d.checked_mul(p) {
                    Some(next) if next <= limit => {
                        d = next;
                        out.push(d);
                    }
                    _ => break,
                }
            }
        }
    }
    Ok(out)
}

/// Primality test: deterministic below 2^64 and below 3.3e24; above, 64
/// Miller-Rabin rounds (13 fixed prime bases plus bases derived from `n`),
/// error probability below 2^-128.
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u128() {
        Some(small) => is_prime_u128(small),
        None => is_prime_big(n),
    }
}

pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 53 * 53 {
        return true;
    }
    if n <= u64::MAX as u128 {
        return miller_rabin::<Mont64>(n as u64, MR_BASES_64);
    }
    if !miller_rabin::<Mont128>(n, MR_BASES_SMALL_PRIMES.map(|b| b as u128)) {
        return false;
    }
    if n < MR_DETERMINISTIC_LIMIT {
        return true;
    }
    let mut rng = SplitMix64::new(input_hash_u128(n));
    let extra = (0..MR_ROUNDS - MR_BASES_SMALL_PRIMES.len()).map(|_| {
        let b: u128 = rng.next_word();
        b % (n - 3) + 2
    });
    miller_rabin::<Mont128>(n, extra)
}

fn is_prime_big(n: &BigUint) -> bool {
    if n.is_even() {
        return false;
    }
    for sp in primes::odd_primes().iter().take(200) {
        if (n % sp.p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let round = |a: BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return true;
            }
            if x.is_one() {
                return false;
            }
        }
        false
    };
    if !MR_BASES_SMALL_PRIMES
        .iter()
        .all(|&b| round(BigUint::from(b)))
    {
        return false;
    }
    let mut rng = SplitMix64::new(input_hash_big(n));
    let span = n - 3u32;
    (0..MR_ROUNDS - MR_BASES_SMALL_PRIMES.len()).all(|_| {
        let b = big_random(&mut rng, n.bits()) % &span + 2u32;
        round(b)
    })
}

fn big_random(rng: &mut SplitMix64, bits: u64) -> BigUint {
    let words = bits.div_ceil(64) as usize + 1;
    BigUint::from_slice(
        &(0..words)
            .flat_map(|_| {
                let w = rng.next_u64();
                [w as u32, (w >> 32) as u32]
            })
            .collect::<Vec<_>>(),
    )
}

fn input_hash_u128(n: u128) -> u64 {
    let mut rng = SplitMix64::new((n as u64) ^ ((n >> 64) as u64).rotate_left(29));
    rng.next_u64()
}

fn input_hash_big(n: &BigUint) -> u64 {
    n.iter_u64_digits().fold(0x51ED_2701_5A1D_0C3Bu64, |h, w| {
        SplitMix64::new(h ^ w).next_u64()
    })
}

/// Factorizes with default options.
pub fn factorize(n: &BigUint) -> Result<FactorMap> {
    Factorizer::default().factorize(n)
}

/// A configured factorization engine. Stateless apart from its options, so
/// one instance can be shared between threads.
#[derive(Clone, Debug, Default)]
pub struct Factorizer {
    opts: FactorOptions,
    fresh: u64,
}

impl Factorizer {
    pub fn new(opts: FactorOptions) -> Self {
        let fresh = match opts.seed {
            Seed::Fresh => RandomState::new().hash_one(Instant::now()),
            Seed::FromInput(_) => 0,
        };
        Factorizer { opts, fresh }
    }

    pub fn options(&self) -> &FactorOptions {
        &self.opts
    }

    fn rng_for(&self, key: u64) -> SplitMix64 {
        match self.opts.seed {
            Seed::FromInput(mix) => SplitMix64::new(key ^ mix),
            Seed::Fresh => SplitMix64::new(key ^ self.fresh),
        }
    }

    fn deadline(&self) -> Option<Instant> {
        self.opts.timeout.map(|t| Instant::now() + t)
    }

    pub fn factorize(&self, n: &BigUint) -> Result<FactorMap> {
        if n.is_zero() {
            return Err(Error::ContractViolation("cannot factor 0".into()));
        }
        if let Some(small) = n.to_u128() {
            return self.factor_u128(small).map(FactorMap::from_sorted_u128);
        }
        self.factor_big(n)
    }

    /// Prime factorization of `n >= 1` as sorted `(prime, exponent)` pairs.
    pub fn factor_u128(&self, n: u128) -> Result<Vec<(u128, u32)>> {
        if n == 0 {
            return Err(Error::ContractViolation("cannot factor 0".into()));
        }
        let mut out = Vec::new();
        let cofactor = trial_divide(n, &mut out);
        if cofactor > 1 {
            let deadline = self.deadline();
            self.split_u128(cofactor, deadline, &mut out)
                .map_err(|_| Error::FactorTimeout(BigUint::from(n)))?;
        }
        Ok(merge_exponents(out))
    }

    // Cofactor has no prime factor below TRIAL_BOUND.
    fn split_u128(
        &self,
        n: u128,
        deadline: Option<Instant>,
        out: &mut Vec<(u128, u32)>,
    ) -> Result<(), ()> {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if m < (TRIAL_BOUND as u128) * (TRIAL_BOUND as u128) || is_prime_u128(m) {
                out.push((m, 1));
                continue;
            }
            if let Some(r) = isqrt_exact_u128(m) {
                stack.push(r);
                stack.push(r);
                continue;
            }
            let d = if m <= u64::MAX as u128 {
                self.rho_split::<Mont64>(m as u64, deadline)? as u128
            } else {
                self.rho_split::<Mont128>(m, deadline)?
            };
            stack.push(d);
            stack.push(m / d);
        }
        Ok(())
    }

    fn rho_split<M: Montgomery>(&self, n: M::W, deadline: Option<Instant>) -> Result<M::W, ()> {
        let m = M::new(n);
        let key = n.to_u128().map(input_hash_u128).unwrap_or(0);
        let mut rng = self.rng_for(key);
        let two = M::W::from_u64(2);
        for _ in 0..self.opts.rho_attempts {
            let c = rng.next_word::<M::W>() % (n - two) + M::W::one();
            let y0 = rng.next_word::<M::W>() % n;
            match brent(&m, c, y0, self.opts.rho_iterations, deadline) {
                RhoOutcome::Factor(d) => return Ok(d),
                RhoOutcome::Failed => continue,
                RhoOutcome::Deadline => return Err(()),
            }
        }
        Err(())
    }

    fn factor_big(&self, n: &BigUint) -> Result<FactorMap> {
        let timeout = || Error::FactorTimeout(n.clone());
        let deadline = self.deadline();
        let mut big: Vec<(BigUint, u32)> = Vec::new();
        let mut small: Vec<(u128, u32)> = Vec::new();

        let mut m = n.clone();
        let tz = m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            small.push((2, tz as u32));
            m >>= tz;
        }
        for sp in primes::odd_primes() {
            if m.bits() <= 128 {
                break;
            }
            let mut e = 0;
            loop {
                let (q, r) = m.div_rem(&BigUint::from(sp.p));
                if !r.is_zero() {
                    break;
                }
                m = q;
                e += 1;
            }
            if e > 0 {
                small.push((sp.p as u128, e));
            }
        }

        let mut stack = vec![m];
        while let Some(m) = stack.pop() {
            if let Some(v) = m.to_u128() {
                let f = self.factor_u128(v).map_err(|_| timeout())?;
                small.extend(f);
                continue;
            }
            if is_prime_big(&m) {
                big.push((m, 1));
                continue;
            }
            if let Some(r) = isqrt_exact(&m) {
                stack.push(r.clone());
                stack.push(r);
                continue;
            }
            let d = self.rho_split_big(&m, deadline).ok_or_else(timeout)?;
            stack.push(&m / &d);
            stack.push(d);
        }

        let mut all: Vec<(BigUint, u32)> = small
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
        all.extend(big);
        Ok(FactorMap {
            factors: merge_exponents(all),
        })
    }

    fn rho_split_big(&self, n: &BigUint, deadline: Option<Instant>) -> Option<BigUint> {
        let mut rng = self.rng_for(input_hash_big(n));
        let span = n - 2u32;
        for _ in 0..self.opts.rho_attempts {
            let c = big_random(&mut rng, n.bits()) % &span + 1u32;
            let y0 = big_random(&mut rng, n.bits()) % n;
            match brent_big(n, &c, y0, self.opts.rho_iterations, deadline) {
                RhoOutcome::Factor(d) => return Some(d),
                RhoOutcome::Failed => continue,
                RhoOutcome::Deadline => return None,
            }
        }
        None
    }
}

fn brent_big(
    n: &BigUint,
    c: &BigUint,
    y0: BigUint,
    max_iterations: u64,
    deadline: Option<Instant>,
) -> RhoOutcome<BigUint> {
    let f = |v: &BigUint| (v * v + c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    let mut y = y0;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += batch;
        }
        steps += 2 * r;
        r *= 2;
        if g.is_one() {
            if steps > max_iterations {
                return RhoOutcome::Failed;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return RhoOutcome::Deadline;
            }
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        RhoOutcome::Failed
    } else {
        RhoOutcome::Factor(g)
    }
}

/// Removes factors of two and every odd prime below [`TRIAL_BOUND`],
/// returning the cofactor. Stops early once `p^2` exceeds the cofactor.
fn trial_divide(mut n: u128, out: &mut Vec<(u128, u32)>) -> u128 {
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.push((2, tz));
        n >>= tz;
    }
    for sp in primes::odd_primes() {
        let p = sp.p as u128;
        if p * p > n {
            if n > 1 {
                out.push((n, 1));
            }
            return 1;
        }
        let mut e = 0;
        if n <= u64::MAX as u128 {
            let mut m = n as u64;
            while let Some(q) = sp.divide_u64(m) {
                m = q;
                e += 1;
            }
            n = m as u128;
        } else {
            while let Some(q) = sp.divide_u128(n) {
                n = q;
                e += 1;
            }
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    n
}
