//! Frey curves `Y^2 = X(X - A)(X + B)` and their conductors.

mod tate;

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tate::{Kodaira, LocalData};

use crate::ntkernel::{factorize, rad, valuation_unchecked, NtError, SSet, Zint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreyError {
    #[error("the model is singular")]
    Singular,
    #[error("A * B * (A + B) must be nonzero")]
    Degenerate,
    #[error("({0}, {1}) violates the Frey conditions: {2}")]
    NotFrey(Zint, Zint, &'static str),
    #[error("local algorithm failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Arithmetic(#[from] NtError),
}

impl From<tate::InternalError> for FreyError {
    fn from(e: tate::InternalError) -> Self {
        FreyError::Internal(e.0)
    }
}

/// Long Weierstrass model `[a1, a2, a3, a4, a6]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveModel {
    #[serde(with = "crate::serde_zint::quintuple")]
    pub a: [Zint; 5],
}

impl CurveModel {
    pub fn new(a: [Zint; 5]) -> Result<Self, FreyError> {
        let m = CurveModel { a };
        if m.discriminant().is_zero() {
            return Err(FreyError::Singular);
        }
        Ok(m)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self, FreyError> {
        CurveModel::new(a.map(Zint::from))
    }

    pub fn b_invariants(&self) -> [Zint; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn c_invariants(&self) -> [Zint; 2] {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        [c4, c6]
    }

    pub fn discriminant(&self) -> Zint {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// `j = c4^3 / disc` in lowest terms with a positive denominator.
    pub fn j_invariant(&self) -> (Zint, Zint) {
        let [c4, _] = self.c_invariants();
        let num = &c4 * &c4 * &c4;
        let den = self.discriminant();
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        (n, d)
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
    }
}

/// `Y^2 = X(X - A)(X + B)` with `gcd(A, B) = 1`, `A = -1 (mod 4)`, `B` even.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreyCurve {
    #[serde(with = "crate::serde_zint")]
    a: Zint,
    #[serde(with = "crate::serde_zint")]
    b: Zint,
}

impl FreyCurve {
    pub fn new(a: Zint, b: Zint) -> Result<Self, FreyError> {
        if a.is_zero() || b.is_zero() || (&a + &b).is_zero() {
            return Err(FreyError::Degenerate);
        }
        if !a.gcd(&b).is_one() {
            return Err(FreyError::NotFrey(a, b, "A and B are not coprime"));
        }
        if a.mod_floor(&Zint::from(4)) != Zint::from(3) {
            return Err(FreyError::NotFrey(a, b, "A is not -1 mod 4"));
        }
        if b.is_odd() {
            return Err(FreyError::NotFrey(a, b, "B is odd"));
        }
        Ok(FreyCurve { a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self, FreyError> {
        FreyCurve::new(Zint::from(a), Zint::from(b))
    }

    pub fn a(&self) -> &Zint {
        &self.a
    }

    pub fn b(&self) -> &Zint {
        &self.b
    }

    /// `C = -(A + B)`.
    pub fn c(&self) -> Zint {
        -(&self.a + &self.b)
    }

    pub fn model(&self) -> CurveModel {
        full_two_torsion_model(&self.a, &self.b)
    }

    pub fn discriminant(&self) -> Zint {
        discriminant(self)
    }

    /// Bad primes can be read off `A`, `B` and `A + B` without factoring the
    /// discriminant.
    pub fn bad_primes(&self) -> Result<SSet, FreyError> {
        let mut s = rad(&self.a)?;
        s = s.union(&rad(&self.b)?);
        s = s.union(&rad(&(&self.a + &self.b))?);
        Ok(s.with_two())
    }

    pub fn conductor(&self) -> Result<ConductorData, FreyError> {
        tate_conductor_at(&self.model(), &self.bad_primes()?)
    }
}

impl fmt::Display for FreyCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_({}, {})", self.a, self.b)
    }
}

/// `Y^2 = X(X - A)(X + B)` as `[0, B - A, 0, -AB, 0]`.
pub fn full_two_torsion_model(a: &Zint, b: &Zint) -> CurveModel {
    CurveModel { a: [Zint::zero(), b - a, Zint::zero(), -(a * b), Zint::zero()] }
}

/// `16 A^2 B^2 (A + B)^2`.
pub fn discriminant(f: &FreyCurve) -> Zint {
    let s = &f.a * &f.b * (&f.a + &f.b);
    16 * &s * &s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorData {
    pub two_exponent: u32,
    /// Odd primes of bad reduction.
    pub odd_part: SSet,
    /// Local data at every prime dividing the discriminant, ascending.
    pub local: Vec<LocalData>,
}

impl ConductorData {
    pub fn exponent(&self, p: &Zint) -> u32 {
        self.local.iter().find(|l| &l.p == p).map_or(0, |l| l.conductor_exponent)
    }

    pub fn min_disc_valuation(&self, p: &Zint) -> u32 {
        self.local.iter().find(|l| &l.p == p).map_or(0, |l| l.min_disc_valuation)
    }

    pub fn conductor(&self) -> Zint {
        self.local
            .iter()
            .fold(Zint::one(), |acc, l| acc * crate::ntkernel::pow(&l.p, l.conductor_exponent as u64))
    }

    /// Conductor exponents at odd primes, for comparing two curves.
    pub fn odd_exponents(&self) -> Vec<(Zint, u32)> {
        self.local
            .iter()
            .filter(|l| l.p.is_odd() && l.conductor_exponent > 0)
            .map(|l| (l.p.clone(), l.conductor_exponent))
            .collect()
    }
}

/// Conductor of an arbitrary model; bad primes come from factoring the
/// discriminant.
pub fn tate_conductor(m: &CurveModel) -> Result<ConductorData, FreyError> {
    let disc = m.discriminant();
    if disc.is_zero() {
        return Err(FreyError::Singular);
    }
    let f = factorize(&disc)?;
    let primes = SSet::new(f.factors.into_iter().map(|(p, _)| p))?;
    tate_conductor_at(m, &primes)
}

/// Conductor when a superset of the bad primes is already known.
pub fn tate_conductor_at(m: &CurveModel, primes: &SSet) -> Result<ConductorData, FreyError> {
    let disc = m.discriminant();
    if disc.is_zero() {
        return Err(FreyError::Singular);
    }
    let mut local = Vec::new();
    for p in primes.iter() {
        if valuation_unchecked(&disc, p) == 0 {
            continue;
        }
        local.push(tate::tate_local(m, p)?);
    }
    let two_exponent = local
        .iter()
        .find(|l| l.p == Zint::from(2))
        .map_or(0, |l| l.conductor_exponent);
    let odd: BTreeSet<Zint> = local
        .iter()
        .filter(|l| l.p.is_odd() && l.conductor_exponent > 0)
        .map(|l| l.p.clone())
        .collect();
    Ok(ConductorData { two_exponent, odd_part: SSet::new(odd)?, local })
}

/// A model that is a nontrivial quadratic twist of a Frey curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistReport {
    /// Squarefree twisting parameter.
    #[serde(with = "crate::serde_zint")]
    pub twist: Zint,
    /// The Frey curve whose twist by `twist` is the input.
    pub partner: FreyCurve,
    /// 2-exponent of the input model's conductor.
    pub two_exponent: u32,
}

/// Result of normalizing `Y^2 = X(X - A)(X + B)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalized {
    /// Isomorphic over Q: `X = u^2 X' + shift`.
    Frey { curve: FreyCurve, #[serde(with = "crate::serde_zint")] shift: Zint, #[serde(with = "crate::serde_zint")] scale: Zint },
    Twist(TwistReport),
}

/// Largest `f` with `f^2 | n`, and the squarefree cofactor.
fn square_part(n: &Zint) -> Result<(Zint, Zint), FreyError> {
    let fac = factorize(&n.abs())?;
    let mut f = Zint::one();
    let mut d = Zint::one();
    for (p, e) in fac.factors {
        f *= crate::ntkernel::pow(&p, e / 2);
        if e % 2 == 1 {
            d *= p;
        }
    }
    Ok((f, d))
}

/// Root translations of a coprime pair, tried in a fixed order: returns the
/// first `(A', B', shift)` meeting the Frey conditions.
fn translate(a: &Zint, b: &Zint) -> Option<(Zint, Zint, Zint)> {
    let roots = [Zint::zero(), a.clone(), -b];
    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let four = Zint::from(4);
    ORDERS.iter().find_map(|o| {
        let (e0, e1, e2) = (&roots[o[0]], &roots[o[1]], &roots[o[2]]);
        let a2 = e1 - e0;
        let b2 = e0 - e2;
        (b2.is_even() && a2.mod_floor(&four) == Zint::from(3)).then(|| (a2, b2, e0.clone()))
    })
}

/// Rewrites `Y^2 = X(X - A)(X + B)` as a Frey curve, or reports that it is
/// a twist of one.
///
/// A common factor `g = d f^2` of `A, B` is removed: `f` by scaling, `d` only
/// by twisting. For coprime `(A, B)` a translation moving a root to 0 is
/// sought; if every odd difference of roots is `1 (mod 4)` the model is the
/// twist by `-1` of the negated pair.
pub fn to_frey_model(a: &Zint, b: &Zint) -> Result<Normalized, FreyError> {
    if a.is_zero() || b.is_zero() || (a + b).is_zero() {
        return Err(FreyError::Degenerate);
    }
    let g = a.gcd(b);
    let (f, d) = square_part(&g)?;
    let f2 = &f * &f;
    let (a1, b1) = (a / &f2, b / &f2);
    let input_two = || -> Result<u32, FreyError> {
        let m = full_two_torsion_model(a, b);
        let primes = rad(&m.discriminant())?;
        Ok(tate_conductor_at(&m, &primes)?.two_exponent)
    };
    if !d.is_one() {
        let (a0, b0) = (&a1 / &d, &b1 / &d);
        let (partner, twist) = match to_frey_model(&a0, &b0)? {
            Normalized::Frey { curve, .. } => (curve, d),
            Normalized::Twist(t) => {
                let (_, sq) = square_part(&(&t.twist * &d))?;
                let sign = if (&t.twist * &d).is_negative() { -1 } else { 1 };
                (t.partner, sq * sign)
            }
        };
        return Ok(Normalized::Twist(TwistReport { twist, partner, two_exponent: input_two()? }));
    }
    if let Some((a2, b2, shift)) = translate(&a1, &b1) {
        let curve = FreyCurve::new(a2, b2)?;
        return Ok(Normalized::Frey { curve, shift: shift * &f2, scale: f });
    }
    let (a2, b2, _) = translate(&-&a1, &-&b1).ok_or(FreyError::Internal("no translation of the negated pair".into()))?;
    let partner = FreyCurve::new(a2, b2)?;
    Ok(Normalized::Twist(TwistReport { twist: Zint::from(-1), partner, two_exponent: input_two()? }))
}
