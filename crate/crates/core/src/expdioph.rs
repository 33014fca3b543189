//! Exponential Diophantine shapes behind S-unit equations over `{2, q, l}`.
//!
//! A proper point of `2^r X + Y + Z = 0` over two odd primes falls into one
//! of four families:
//!
//! * `T1`  : `2^r = q^s l^t - e`
//! * `T2`  : `2^r + e q^s + e' l^t = 0`
//! * `T3`  : `2^r q^s = l^t + e`
//! * `T3'` : `2^r l^t = q^s + e`
//!
//! with signs `e, e'` and `r, s, t >= 1`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ntkernel::{is_mersenne, is_prime, kronecker_symbol, power_of_two_exponent, strip, Zint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpDiophError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("the two primes must be distinct")]
    SamePrime,
    #[error("exponent bounds must be at least 1")]
    BadBox,
    #[error("search box needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("instance does not satisfy its identity")]
    NotAnInstance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    fn z(self) -> Zint {
        Zint::from(self.value())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    T1 { eps: Sign },
    T2 { eps: Sign, eps2: Sign },
    T3 { eps: Sign },
    T3Prime { eps: Sign },
}

impl Family {
    pub fn all() -> Vec<Family> {
        let mut v = Vec::new();
        for eps in Sign::BOTH {
            v.push(Family::T1 { eps });
        }
        for eps in Sign::BOTH {
            for eps2 in Sign::BOTH {
                v.push(Family::T2 { eps, eps2 });
            }
        }
        for eps in Sign::BOTH {
            v.push(Family::T3 { eps });
        }
        for eps in Sign::BOTH {
            v.push(Family::T3Prime { eps });
        }
        v
    }

    /// Parses `T1+`, `T2+-`, `T3-`, `T3'+` style names.
    pub fn parse(s: &str) -> Option<Family> {
        let sign = |c: char| match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        };
        let chars: Vec<char> = s.chars().collect();
        match chars.as_slice() {
            ['T', '1', e] => Some(Family::T1 { eps: sign(*e)? }),
            ['T', '2', e, f] => Some(Family::T2 { eps: sign(*e)?, eps2: sign(*f)? }),
            ['T', '3', e] => Some(Family::T3 { eps: sign(*e)? }),
            ['T', '3', '\'', e] => Some(Family::T3Prime { eps: sign(*e)? }),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: &Sign| if *s == Sign::Plus { '+' } else { '-' };
        match self {
            Family::T1 { eps } => write!(f, "T1{}", c(eps)),
            Family::T2 { eps, eps2 } => write!(f, "T2{}{}", c(eps), c(eps2)),
            Family::T3 { eps } => write!(f, "T3{}", c(eps)),
            Family::T3Prime { eps } => write!(f, "T3'{}", c(eps)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExpDiophInstance {
    pub family: Family,
    pub q: u64,
    pub l: u64,
    pub r: u32,
    pub s: u32,
    pub t: u32,
}

impl ExpDiophInstance {
    /// Re-evaluates the family identity exactly.
    pub fn holds(&self) -> bool {
        if self.r == 0 || self.s == 0 || self.t == 0 {
            return false;
        }
        let two_r = crate::ntkernel::pow(&Zint::from(2), self.r as u64);
        let qs = crate::ntkernel::pow(&Zint::from(self.q), self.s as u64);
        let lt = crate::ntkernel::pow(&Zint::from(self.l), self.t as u64);
        match self.family {
            Family::T1 { eps } => two_r == qs * lt - eps.z(),
            Family::T2 { eps, eps2 } => (two_r + eps.z() * qs + eps2.z() * lt).is_zero(),
            Family::T3 { eps } => two_r * qs == lt + eps.z(),
            Family::T3Prime { eps } => two_r * lt == qs + eps.z(),
        }
    }
}

impl fmt::Display for ExpDiophInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (q, l, r, s, t) = (self.q, self.l, self.r, self.s, self.t);
        match self.family {
            Family::T1 { eps } => write!(f, "2^{r} = {q}^{s}*{l}^{t} - ({eps})"),
            Family::T2 { eps, eps2 } => {
                write!(f, "2^{r} + ({eps})*{q}^{s} + ({eps2})*{l}^{t} = 0")
            }
            Family::T3 { eps } => write!(f, "2^{r}*{q}^{s} = {l}^{t} + ({eps})"),
            Family::T3Prime { eps } => write!(f, "2^{r}*{l}^{t} = {q}^{s} + ({eps})"),
        }
    }
}

/// Exponent box for [`search_family`]. `max_side` optionally caps every
/// prime power entering an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub max_r: u32,
    pub max_s: u32,
    pub max_t: u32,
    #[serde(default)]
    pub max_side: Option<u128>,
}

impl SearchBox {
    pub fn cube(side: u32) -> Self {
        SearchBox { max_r: side, max_s: side, max_t: side, max_side: None }
    }

    pub fn with_max_side(mut self, cap: u128) -> Self {
        self.max_side = Some(cap);
        self
    }
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

fn require_odd_prime(p: u64) -> Result<(), ExpDiophError> {
    if p.is_multiple_of(2) || !crate::ntkernel::is_prime_u64(p) {
        return Err(ExpDiophError::NotOddPrime(p));
    }
    Ok(())
}

/// `base^1 .. base^max`, stopping once a power exceeds `cap`. Powers grow
/// strictly, so truncation never skips an admissible exponent.
fn power_table(base: u64, max: u32, cap: Option<&Zint>) -> Vec<Zint> {
    let b = Zint::from(base);
    let mut out = Vec::new();
    let mut acc = Zint::one();
    for _ in 0..max {
        acc *= &b;
        if cap.is_some_and(|c| &acc > c) {
            break;
        }
        out.push(acc.clone());
    }
    out
}

/// Exhaustive search of one family inside the box.
pub fn search_family(
    family: Family,
    q: u64,
    l: u64,
    bx: &SearchBox,
) -> Result<Vec<ExpDiophInstance>, ExpDiophError> {
    search_family_with_budget(family, q, l, bx, DEFAULT_SEARCH_BUDGET)
}

pub fn search_family_with_budget(
    family: Family,
    q: u64,
    l: u64,
    bx: &SearchBox,
    budget: u64,
) -> Result<Vec<ExpDiophInstance>, ExpDiophError> {
    require_odd_prime(q)?;
    require_odd_prime(l)?;
    if q == l {
        return Err(ExpDiophError::SamePrime);
    }
    if bx.max_r == 0 || bx.max_s == 0 || bx.max_t == 0 {
        return Err(ExpDiophError::BadBox);
    }
    let cap = bx.max_side.map(Zint::from);
    let qs = power_table(q, bx.max_s, cap.as_ref());
    let ls = power_table(l, bx.max_t, cap.as_ref());
    let twos = power_table(2, bx.max_r, cap.as_ref());
    let needed = match family {
        Family::T1 { .. } => (qs.len() * ls.len()) as u64,
        Family::T2 { .. } => (twos.len() * qs.len()) as u64,
        Family::T3 { .. } => ls.len() as u64,
        Family::T3Prime { .. } => qs.len() as u64,
    };
    if needed > budget {
        return Err(ExpDiophError::BudgetExceeded { needed, budget });
    }
    let exponent_of = |table: &[Zint]| -> HashMap<Zint, u32> {
        table.iter().enumerate().map(|(i, v)| (v.clone(), i as u32 + 1)).collect()
    };
    let two_index = exponent_of(&twos);
    let l_index = exponent_of(&ls);
    let mut out = Vec::new();
    let push = |out: &mut Vec<ExpDiophInstance>, r: u32, s: u32, t: u32| {
        out.push(ExpDiophInstance { family, q, l, r, s, t });
    };
    match family {
        Family::T1 { eps } => {
            for (si, qv) in qs.iter().enumerate() {
                for (ti, lv) in ls.iter().enumerate() {
                    let lhs = qv * lv - eps.z();
                    if let Some(&r) = two_index.get(&lhs) {
                        push(&mut out, r, si as u32 + 1, ti as u32 + 1);
                    }
                }
            }
        }
        Family::T2 { eps, eps2 } => {
            // eps2 * l^t = -(2^r + eps q^s)
            for (ri, tv) in twos.iter().enumerate() {
                for (si, qv) in qs.iter().enumerate() {
                    let target = -(tv + eps.z() * qv) * eps2.z();
                    if let Some(&t) = l_index.get(&target) {
                        push(&mut out, ri as u32 + 1, si as u32 + 1, t);
                    }
                }
            }
        }
        Family::T3 { eps } => {
            for (ti, lv) in ls.iter().enumerate() {
                if let Some((r, s)) = split_two_q(&(lv + eps.z()), q) {
                    if (1..=bx.max_r).contains(&r) && (1..=bx.max_s).contains(&s) && within(&cap, r, q, s) {
                        push(&mut out, r, s, ti as u32 + 1);
                    }
                }
            }
        }
        Family::T3Prime { eps } => {
            for (si, qv) in qs.iter().enumerate() {
                if let Some((r, t)) = split_two_q(&(qv + eps.z()), l) {
                    if (1..=bx.max_r).contains(&r) && (1..=bx.max_t).contains(&t) && within(&cap, r, l, t) {
                        push(&mut out, r, si as u32 + 1, t);
                    }
                }
            }
        }
    }
    debug_assert!(out.iter().all(ExpDiophInstance::holds));
    out.sort();
    Ok(out)
}

fn within(cap: &Option<Zint>, r: u32, base: u64, e: u32) -> bool {
    match cap {
        None => true,
        Some(c) => {
            crate::ntkernel::pow(&Zint::from(2), r as u64) <= *c
                && crate::ntkernel::pow(&Zint::from(base), e as u64) <= *c
        }
    }
}

/// Writes a positive `n` as `2^r * base^e`, if possible.
fn split_two_q(n: &Zint, base: u64) -> Option<(u32, u32)> {
    if !n.is_positive() {
        return None;
    }
    let (odd, r) = strip(n, &Zint::from(2));
    let (rest, e) = strip(&odd, &Zint::from(base));
    if rest.is_one() {
        Some((r as u32, e as u32))
    } else {
        None
    }
}

/// Axiom: the only solution of `2^k = l^t + e` with `k >= 1`, `t >= 2`,
/// `l` an odd prime and `e = ±1` is `2^3 = 3^2 - 1`.
///
/// This is Catalan's conjecture (Mihailescu's theorem) specialised to a
/// power of two; it is used as a black box and brute-force checked on a
/// small box in the tests.
pub fn catalan_power_of_two(k: u32, l: u64, t: u32, eps: Sign) -> bool {
    (k, l, t, eps) == (3, 3, 2, Sign::Minus)
}

/// One row of the even-exponent classification: `2^r q^s = l^(2t) - 1`.
pub type EvenT3Solution = (u32, u32, u32);

/// All `(r, s, t)` with `2^r q^s = l^(2t) - 1`, derived as a case analysis
/// rather than a search.
///
/// `l^t - 1` and `l^t + 1` are even with gcd 2, so one of them is exactly
/// `2` or `2 q^s` and the other carries the rest. Writing `l^t + e` for the
/// factor with the high power of two leaves two branches:
///
/// 1. `l^t + e = 2` and `l^t - e = 2^(r-1) q^s`, impossible for `s >= 1`;
/// 2. `l^t + e = 2^(r-1)` and `q^s = 2^(r-2) - e`.
///
/// Branch 2 with `t >= 2` or `s >= 2` is a power of two next to a perfect
/// power, which [`catalan_power_of_two`] pins down. With `t = s = 1` it reads
/// `l = 2q + e` with `q + e` a power of two.
pub fn classify_even_t3(q: u64, l: u64) -> Result<Vec<EvenT3Solution>, ExpDiophError> {
    require_odd_prime(q)?;
    require_odd_prime(l)?;
    let mut out = Vec::new();
    let (qz, lz) = (Zint::from(q), Zint::from(l));
    for eps in Sign::BOTH {
        // Branch 1: l^t = 2 - e; then 2^(r-1) q^s = l^t - e.
        let v = Zint::from(2 - eps.value());
        if let Some(t) = exact_log(&v, l) {
            if let Some((r1, s)) = split_two_q(&(&v - eps.z()), q) {
                if s >= 1 && r1 >= 1 && t >= 1 {
                    out.push((r1 + 1, s, t));
                }
            }
        }
        // Branch 2, r = 2 and r = 3 by direct evaluation.
        for r in 2..=3u32 {
            let lt = Zint::from(1i64 << (r - 1)) - eps.z();
            let qs = Zint::from(1i64 << (r - 2)) - eps.z();
            if let (Some(t), Some(s)) = (exact_log(&lt, l), exact_log(&qs, q)) {
                out.push((r, s, t));
            }
        }
        // Branch 2, r >= 4, t >= 2: the axiom gives l^t = 9, r - 1 = 3.
        for k in [3u32] {
            if catalan_power_of_two(k, l, 2, eps) {
                let r = k + 1;
                let qs = Zint::from(1i64 << (r - 2)) - eps.z();
                if let Some(s) = exact_log(&qs, q) {
                    out.push((r, s, 2));
                }
            }
        }
        // Branch 2, r >= 4, t = 1, s >= 2: the axiom gives q^s = 9, r - 2 = 3.
        if catalan_power_of_two(3, q, 2, eps) {
            let r = 5;
            if lz == Zint::from(1i64 << (r - 1)) - eps.z() {
                out.push((r, 2, 1));
            }
        }
        // Branch 2, r >= 4, t = s = 1: l = 2q + e and q + e = 2^(r-2).
        if let Some(m) = power_of_two_exponent(&(&qz + eps.z())) {
            if m >= 2 && lz == 2 * &qz + eps.z() {
                out.push((m as u32 + 2, 1, 1));
            }
        }
    }
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|&(r, s, t)| {
        crate::ntkernel::pow(&Zint::from(2), r as u64) * crate::ntkernel::pow(&qz, s as u64)
            == crate::ntkernel::pow(&lz, 2 * t as u64) - 1
    }));
    Ok(out)
}

/// `Some(e >= 1)` with `n = base^e`.
fn exact_log(n: &Zint, base: u64) -> Option<u32> {
    if n <= &Zint::one() {
        return None;
    }
    let (rest, e) = strip(n, &Zint::from(base));
    if rest.is_one() && e >= 1 {
        Some(e as u32)
    } else {
        None
    }
}

/// For `2^r q^s = l^(2t-1) - e`, returns `m` with `l - e = 2^r q^m`.
///
/// `l^n - e = (l - e) * g(e l)` with `g` a sum of `n` odd terms, so the
/// whole power of two sits in `l - e`.
pub fn odd_t3_constraint(q: u64, l: u64, eps: Sign, r: u32, s: u32, t: u32) -> Result<u32, ExpDiophError> {
    if t == 0 {
        return Err(ExpDiophError::NotAnInstance);
    }
    let qz = Zint::from(q);
    let lhs = crate::ntkernel::pow(&Zint::from(2), r as u64) * crate::ntkernel::pow(&qz, s as u64);
    let rhs = crate::ntkernel::pow(&Zint::from(l), (2 * t - 1) as u64) - eps.z();
    if lhs != rhs {
        return Err(ExpDiophError::NotAnInstance);
    }
    let diff = Zint::from(l) - eps.z();
    match split_two_q(&diff, q) {
        Some((r2, m)) if r2 == r && m <= s => Ok(m),
        _ => Err(ExpDiophError::NotAnInstance),
    }
}

/// Which hypothesis set of the two-prime criterion holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TwoPrimeCase {
    /// `q = 3 (8)`, `l = 5 (8)`, `q != l (3)`, `q != 3`.
    One,
    /// `q = 11 (24)`, `l = 5 (24)`, `(q/l) = -1`.
    Two,
    /// `q = ±3 (8)`, `l = -1 (24)`, `l != -1 (q)`, `l` not Mersenne.
    Three,
}

impl TwoPrimeCase {
    pub fn index(self) -> u8 {
        match self {
            TwoPrimeCase::One => 1,
            TwoPrimeCase::Two => 2,
            TwoPrimeCase::Three => 3,
        }
    }

    /// Human-readable hypotheses for `(q, l)`.
    pub fn hypotheses(self, q: u64, l: u64) -> Vec<String> {
        match self {
            TwoPrimeCase::One => vec![
                format!("{q} = {} (mod 8)", q % 8),
                format!("{l} = {} (mod 8)", l % 8),
                format!("{q} = {} (mod 3), {l} = {} (mod 3)", q % 3, l % 3),
                format!("{q} != 3"),
            ],
            TwoPrimeCase::Two => vec![
                format!("{q} = {} (mod 24)", q % 24),
                format!("{l} = {} (mod 24)", l % 24),
                format!("({q}/{l}) = -1"),
            ],
            TwoPrimeCase::Three => vec![
                format!("{q} = {} (mod 8)", q % 8),
                format!("{l} = {} (mod 24)", l % 24),
                format!("{l} = {} (mod {q})", l % q),
                format!("{l} is not a Mersenne prime"),
            ],
        }
    }
}

/// Pairs where some family has a genuine solution with `r >= 4`; every case
/// of the criterion excludes them and they are re-checked explicitly.
pub const EXCEPTIONAL_PAIRS: [(u64, u64); 3] = [(3, 5), (3, 7), (3, 17)];

fn is_exceptional(q: u64, l: u64) -> bool {
    EXCEPTIONAL_PAIRS
        .iter()
        .any(|&(a, b)| (a, b) == (q, l) || (a, b) == (l, q))
}

/// The hypothesis sets under which `16X + Y + Z` has no proper points over
/// `{q, l}` and `{2, q, l}`. Cases are tried in order and the first that
/// holds is reported.
pub fn two_prime_criterion(q: u64, l: u64) -> Option<TwoPrimeCase> {
    if q == l || q.is_multiple_of(2) || l.is_multiple_of(2) {
        return None;
    }
    if !is_prime(&Zint::from(q)) || !is_prime(&Zint::from(l)) || is_exceptional(q, l) {
        return None;
    }
    if q % 8 == 3 && l % 8 == 5 && q % 3 != l % 3 && q != 3 {
        return Some(TwoPrimeCase::One);
    }
    if q % 24 == 11
        && l % 24 == 5
        && kronecker_symbol(&Zint::from(q), &Zint::from(l)).ok() == Some(-1)
    {
        return Some(TwoPrimeCase::Two);
    }
    if (q % 8 == 3 || q % 8 == 5)
        && l % 24 == 23
        && l % q != q - 1
        && !is_mersenne(&Zint::from(l))
    {
        return Some(TwoPrimeCase::Three);
    }
    None
}


#[cfg(test)]
mod tests {
    use super::*;

    fn inst(family: Family, q: u64, l: u64, r: u32, s: u32, t: u32) -> ExpDiophInstance {
        ExpDiophInstance { family, q, l, r, s, t }
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::all() {
            assert_eq!(Family::parse(&f.to_string()), Some(f));
        }
        assert_eq!(Family::parse("T4+"), None);
    }

    #[test]
    fn search_examples() {
        let minus = Sign::Minus;
        let found = search_family(Family::T3 { eps: minus }, 3, 5, &SearchBox::cube(40)).unwrap();
        assert!(found.contains(&inst(Family::T3 { eps: minus }, 3, 5, 3, 1, 2)));
        let found = search_family(Family::T3 { eps: minus }, 5, 3, &SearchBox::cube(40)).unwrap();
        assert!(found.contains(&inst(Family::T3 { eps: minus }, 5, 3, 4, 1, 4)));
        let found = search_family(Family::T1 { eps: minus }, 3, 5, &SearchBox::cube(20)).unwrap();
        assert!(found.contains(&inst(Family::T1 { eps: minus }, 3, 5, 4, 1, 1)));
    }

    #[test]
    fn search_rejects_bad_input() {
        let f = Family::T1 { eps: Sign::Plus };
        assert_eq!(search_family(f, 9, 5, &SearchBox::cube(3)), Err(ExpDiophError::NotOddPrime(9)));
        assert_eq!(search_family(f, 5, 5, &SearchBox::cube(3)), Err(ExpDiophError::SamePrime));
        assert_eq!(search_family(f, 3, 5, &SearchBox::cube(0)), Err(ExpDiophError::BadBox));
        assert!(matches!(
            search_family_with_budget(f, 3, 5, &SearchBox::cube(100), 10),
            Err(ExpDiophError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn t2_search_finds_small_identities() {
        // 2^1 + 3 - 5 = 0 and 2^3 - 3 - 5 = 0.
        let f = Family::T2 { eps: Sign::Plus, eps2: Sign::Minus };
        let found = search_family(f, 3, 5, &SearchBox::cube(10)).unwrap();
        assert!(found.contains(&inst(f, 3, 5, 1, 1, 1)));
        let f = Family::T2 { eps: Sign::Minus, eps2: Sign::Minus };
        assert!(search_family(f, 3, 5, &SearchBox::cube(10)).unwrap().contains(&inst(f, 3, 5, 3, 1, 1)));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_even_t3(3, 5).unwrap(), vec![(3, 1, 1)]);
        assert_eq!(classify_even_t3(3, 7).unwrap(), vec![(4, 1, 1)]);
        assert_eq!(classify_even_t3(5, 3).unwrap(), vec![(4, 1, 2)]);
        assert!(classify_even_t3(11, 13).unwrap().is_empty());
    }

    #[test]
    fn classification_includes_the_square_of_three() {
        // 2^5 * 3^2 = 288 = 17^2 - 1.
        assert_eq!(classify_even_t3(3, 17).unwrap(), vec![(5, 2, 1)]);
    }

    #[test]
    fn catalan_axiom_small_box() {
        for k in 1..=60u32 {
            let two_k = crate::ntkernel::pow(&Zint::from(2), k as u64);
            for l in (3..200u64).filter(|&l| crate::ntkernel::is_prime_u64(l)) {
                for t in 2..=40u32 {
                    let lt = crate::ntkernel::pow(&Zint::from(l), t as u64);
                    if lt > &two_k + 1 {
                        break;
                    }
                    for eps in Sign::BOTH {
                        let holds = two_k == &lt + eps.z();
                        assert_eq!(holds, catalan_power_of_two(k, l, t, eps), "{k} {l} {t} {eps}");
                    }
                }
            }
        }
    }

    #[test]
    fn odd_t3_examples() {
        assert_eq!(odd_t3_constraint(13, 3, Sign::Plus, 1, 1, 2), Ok(0));
        assert_eq!(odd_t3_constraint(5, 11, Sign::Plus, 1, 1, 1), Ok(1));
        assert_eq!(odd_t3_constraint(5, 11, Sign::Plus, 2, 1, 1), Err(ExpDiophError::NotAnInstance));
    }

    #[test]
    fn odd_t3_sweep() {
        let primes: Vec<u64> = (3..200).filter(|&p| crate::ntkernel::is_prime_u64(p)).collect();
        let mut checked = 0;
        for &q in &primes {
            for &l in &primes {
                if q == l {
                    continue;
                }
                for eps in Sign::BOTH {
                    let found = search_family(Family::T3 { eps }, q, l, &SearchBox::cube(30)).unwrap();
                    for i in found.iter().filter(|i| i.t % 2 == 1) {
                        // 2^r q^s = l^t + e  <=>  l^(2t'-1) - (-e).
                        let stated_eps = Sign::from_i64(-eps.value()).unwrap();
                        let m = odd_t3_constraint(q, l, stated_eps, i.r, i.s, i.t.div_ceil(2)).unwrap();
                        assert!(m <= i.s);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked >= 20, "only {checked} instances");
    }

    #[test]
    fn two_prime_examples() {
        assert_eq!(two_prime_criterion(19, 5), Some(TwoPrimeCase::One));
        assert_eq!(two_prime_criterion(11, 29), Some(TwoPrimeCase::Two));
        assert_eq!(two_prime_criterion(3, 5), None);
        assert_eq!(two_prime_criterion(3, 7), None);
        // 5 = 5 (mod 8), 23 = 23 (mod 24), 23 = 3 (mod 5), not Mersenne.
        assert_eq!(two_prime_criterion(5, 23), Some(TwoPrimeCase::Three));
        // 3 = 3 (mod 8) and 47 = -1 (mod 3) is excluded in case three.
        assert_eq!(two_prime_criterion(3, 47), None);
        // Mersenne 127 = 7 (mod 24) does not even enter case three; 8191 = 7 too.
        assert_eq!(two_prime_criterion(5, 5), None);
    }

    #[test]
    fn case_three_rejects_mersenne() {
        // Mersenne primes > 3 are 7 (mod 24), so use the predicate directly.
        assert!(is_mersenne(&Zint::from(127)));
        assert_eq!(127 % 24, 7);
    }
}
