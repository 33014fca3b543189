//! Integer arithmetic primitives: radicals, valuations, Jacobi symbols,
//! primality and factorization over arbitrary-precision integers.
//!
//! Everything here is a pure function on immutable values.

mod factor;
mod primality;
mod sset;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use factor::{factorize, Factorization};
pub use primality::{is_prime, is_prime_u64, primality, small_primes, Primality};
pub use sset::SSet;

/// Signed arbitrary-precision integer used for every coefficient, coordinate
/// and curve invariant in the crate.
pub type Zint = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtError {
    #[error("argument must be nonzero")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(Zint),
    #[error("modulus {0} must be odd and positive")]
    BadModulus(Zint),
}

pub fn zint(v: i64) -> Zint {
    Zint::from(v)
}

/// Prime divisors of `|n|`. `rad(±1)` is the empty set.
pub fn rad(n: &Zint) -> Result<SSet, NtError> {
    if n.is_zero() {
        return Err(NtError::Zero);
    }
    let f = factorize(n)?;
    Ok(SSet::from_trusted(
        f.factors.into_iter().map(|(p, _)| p).collect(),
        f.probabilistic,
    ))
}

/// Radical of the prime-to-2 part of `n`.
pub fn rad_odd(n: &Zint) -> Result<SSet, NtError> {
    Ok(rad(n)?.without_two())
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: &Zint, p: &Zint) -> Result<u64, NtError> {
    if n.is_zero() {
        return Err(NtError::Zero);
    }
    if !is_prime(p) {
        return Err(NtError::NotPrime(p.clone()));
    }
    Ok(valuation_unchecked(n, p))
}

/// Valuation without the primality check on `p`; `n` must be nonzero and
/// `|p| >= 2`.
pub(crate) fn valuation_unchecked(n: &Zint, p: &Zint) -> u64 {
    debug_assert!(!n.is_zero());
    if p == &Zint::from(2) {
        return n.magnitude().trailing_zeros().unwrap_or(0);
    }
    let mut e = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// Strips every factor `p` from `n`, returning the cofactor and the exponent.
pub(crate) fn strip(n: &Zint, p: &Zint) -> (Zint, u64) {
    let mut e = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (m, e);
        }
        m = q;
        e += 1;
    }
}

/// The Jacobi symbol `(a/n)` for odd positive `n`.
pub fn kronecker_symbol(a: &Zint, n: &Zint) -> Result<i8, NtError> {
    if n.sign() != Sign::Plus || n.is_even() {
        return Err(NtError::BadModulus(n.clone()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut acc: i8 = 1;
    let three = Zint::from(3);
    let five = Zint::from(5);
    let eight = Zint::from(8);
    let four = Zint::from(4);
    while !a.is_zero() {
        let tz = a.magnitude().trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz as usize;
            let r = n.mod_floor(&eight);
            if tz % 2 == 1 && (r == three || r == five) {
                acc = -acc;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            acc = -acc;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { acc } else { 0 })
}

/// Legendre symbol shortcut for machine-size arguments.
pub fn legendre_i64(a: i64, p: i64) -> i8 {
    kronecker_symbol(&Zint::from(a), &Zint::from(p)).expect("odd positive modulus")
}

/// True iff `n` is a prime of the form `2^k - 1`.
pub fn is_mersenne(n: &Zint) -> bool {
    if n < &Zint::from(3) {
        return false;
    }
    power_of_two_exponent(&(n + 1u32)).is_some() && is_prime(n)
}

/// `Some(k)` when `n = 2^k` with `k >= 0`.
pub fn power_of_two_exponent(n: &Zint) -> Option<u64> {
    if n.sign() != Sign::Plus {
        return None;
    }
    let tz = n.magnitude().trailing_zeros()?;
    if n.magnitude().bits() == tz + 1 {
        Some(tz)
    } else {
        None
    }
}

/// Exact `k`-th root of a nonnegative integer, if any.
pub fn exact_root(n: &Zint, k: u32) -> Option<Zint> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn pow(base: &Zint, e: u64) -> Zint {
    num_traits::pow(base.clone(), e as usize)
}

/// `n mod m` in `[0, m)` as a `u64` (m must fit in u64).
pub fn residue(n: &Zint, m: u64) -> u64 {
    n.mod_floor(&Zint::from(m)).to_u64().expect("residue fits")
}

/// Sign of a nonzero integer as `±1`.
pub fn signum(n: &Zint) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn gcd3(a: &Zint, b: &Zint, c: &Zint) -> Zint {
    a.gcd(b).gcd(c)
}
