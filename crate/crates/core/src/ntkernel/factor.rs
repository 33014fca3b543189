use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{primality, small_primes, Primality};
use super::{NtError, Zint};

/// Prime factorization of `|n|`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(Zint, u64)>,
    /// Some prime factor above 2^64 was accepted by the randomized test.
    pub probabilistic: bool,
}

/// Trial division to 10^6, then Pollard-Brent rho on the cofactor.
pub fn factorize(n: &Zint) -> Result<Factorization, NtError> {
    if n.is_zero() {
        return Err(NtError::Zero);
    }
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(Zint, u64)> = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if let Some(small) = m.to_u64() {
            if p * p > small {
                break;
            }
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            factors.push((Zint::from(p), e));
        }
    }
    let mut probabilistic = false;
    if !m.is_one() {
        let mut large = Vec::new();
        split(m, &mut large, &mut probabilistic);
        large.sort();
        for p in large {
            let p = Zint::from(p);
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { factors, probabilistic })
}

/// Splits `m` (no prime factors below 10^6) into primes.
fn split(m: BigUint, out: &mut Vec<BigUint>, probabilistic: &mut bool) {
    if m.is_one() {
        return;
    }
    // No factor below 10^6 and m < 10^12 means m is prime.
    let threshold = BigUint::from(1_000_000_000_000u64);
    if m < threshold {
        out.push(m);
        return;
    }
    match primality(&Zint::from(m.clone())) {
        Primality::Prime => {
            out.push(m);
            return;
        }
        Primality::ProbablePrime => {
            *probabilistic = true;
            out.push(m);
            return;
        }
        Primality::Composite => {}
    }
    let mut seed = 1u64;
    let d = loop {
        if let Some(d) = brent(&m, seed) {
            break d;
        }
        seed += 1;
    };
    let other = &m / &d;
    split(d, out, probabilistic);
    split(other, out, probabilistic);
}

/// One Pollard-Brent run with iteration `x -> x^2 + c`. Returns a proper
/// divisor or `None` if this `c` cycles without splitting.
fn brent(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let m: u64 = 128;
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}
