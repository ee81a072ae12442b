//! Exact search and construction of representations of
//! `P_n = 2^(n-1) (2^n - 1)` as sums of two, three and four integer cubes.
//!
//! The crate is organised bottom-up:
//!
//! * [`bigmath`]: integer roots, exact square tests and gcds.
//! * [`mersenne`]: values and congruence facts about `P_n`.
//! * [`factorize`]: trial division, Miller-Rabin and Pollard-Brent rho, plus
//!   divisor enumeration.
//! * [`identities`]: closed-form three- and four-cube families and the
//!   embedded special representations.
//! * [`search`]: the divisor-method search engine (residue filters,
//!   mixed-sign and scaled variants, sharding and checkpoints).
//! * [`twocubes`]: solutions of `P_n = x^3 + y^3`.
//! * [`tables`] and [`record`]: embedded reference data and the output
//!   record shared by the command line and the browser demo.

pub mod bigmath;
mod error;
pub mod factorize;
pub mod identities;
pub mod mersenne;
pub mod record;
pub mod repr;
pub mod search;
pub mod tables;
pub mod twocubes;

pub use error::{Error, Result};
pub use factorize::{divisors, factorize, is_prime, FactorMap, FactorOptions, Factorizer};
pub use mersenne::{p_mod9, p_value, PIndex, ResidueClass};
pub use num_bigint::{BigInt, BigUint};
pub use repr::{Provenance, Representation, SignClass};
pub use search::{search, search_scaled, Mode, SearchConfig, SolutionSet};
