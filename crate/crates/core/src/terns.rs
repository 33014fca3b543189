//! Coefficient triples `(a, b, c)` of `ax^p + by^p + cz^p = 0`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ntkernel::{
    exact_root, factorize, gcd3, is_prime_u64, pow, signum, valuation_unchecked, NtError, SSet,
    Zint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TernError {
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("triple is not primitive (gcd {0})")]
    NotPrimitive(Zint),
    #[error("condition (F) fails at the prime {0}")]
    ConditionF(Zint),
    #[error("exponent {0} must be a prime >= 5")]
    BadExponent(u64),
    #[error(transparent)]
    Arithmetic(#[from] NtError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tern {
    #[serde(with = "crate::serde_zint::triple")]
    coeffs: [Zint; 3],
}

impl Tern {
    pub fn new(a: Zint, b: Zint, c: Zint) -> Result<Self, TernError> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(TernError::ZeroCoefficient);
        }
        Ok(Tern { coeffs: [a, b, c] })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self, TernError> {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn a(&self) -> &Zint {
        &self.coeffs[0]
    }

    pub fn b(&self) -> &Zint {
        &self.coeffs[1]
    }

    pub fn c(&self) -> &Zint {
        &self.coeffs[2]
    }

    pub fn coeffs(&self) -> &[Zint; 3] {
        &self.coeffs
    }

    pub fn product(&self) -> Zint {
        self.a() * self.b() * self.c()
    }

    /// `a x^p + b y^p + c z^p`.
    pub fn evaluate(&self, p: u64, x: &Zint, y: &Zint, z: &Zint) -> Zint {
        self.a() * pow(x, p) + self.b() * pow(y, p) + self.c() * pow(z, p)
    }

    /// Primes dividing `abc`, with the probabilistic-primality flag.
    pub fn bad_primes(&self) -> Result<SSet, NtError> {
        let mut all = SSet::empty();
        for c in &self.coeffs {
            let f = factorize(c)?;
            let part = SSet::from_trusted(f.factors.into_iter().map(|(p, _)| p).collect(), f.probabilistic);
            all = all.union(&part);
        }
        Ok(all)
    }

    fn valuations(&self, q: &Zint) -> [u64; 3] {
        [0, 1, 2].map(|i| valuation_unchecked(&self.coeffs[i], q))
    }
}

impl fmt::Display for Tern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a(), self.b(), self.c())
    }
}

pub fn is_primitive(t: &Tern) -> bool {
    gcd3(t.a(), t.b(), t.c()).is_one()
}

fn require_primitive(t: &Tern) -> Result<(), TernError> {
    let g = gcd3(t.a(), t.b(), t.c());
    if g.is_one() {
        Ok(())
    } else {
        Err(TernError::NotPrimitive(g))
    }
}

/// First prime `q | abc` at which the three valuations do not have exactly
/// two equal entries.
fn condition_f_violation(t: &Tern) -> Result<Option<Zint>, TernError> {
    for q in t.bad_primes()?.iter() {
        let [u, v, w] = t.valuations(q);
        let equal_pairs = usize::from(u == v) + usize::from(v == w) + usize::from(u == w);
        if equal_pairs != 1 {
            return Ok(Some(q.clone()));
        }
    }
    Ok(None)
}

/// Condition (F): at every prime dividing `abc`, exactly two of the three
/// valuations coincide.
pub fn condition_f(t: &Tern) -> Result<bool, TernError> {
    require_primitive(t)?;
    Ok(condition_f_violation(t)?.is_none())
}

/// A prime and an ordered pair of slots with `v_q(first) > v_q(second) >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentWitness {
    #[serde(with = "crate::serde_zint")]
    pub prime: Zint,
    pub larger_slot: usize,
    pub smaller_slot: usize,
    pub valuations: [u64; 3],
}

/// Searches every prime of `abc` and every ordered pair of slots.
pub fn descent_witness(t: &Tern) -> Result<Option<DescentWitness>, TernError> {
    for q in t.bad_primes()?.iter() {
        let v = t.valuations(q);
        for i in 0..3 {
            for j in 0..3 {
                if i != j && v[j] >= 1 && v[i] > v[j] {
                    return Ok(Some(DescentWitness {
                        prime: q.clone(),
                        larger_slot: i,
                        smaller_slot: j,
                        valuations: v,
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn descent_case(t: &Tern) -> Result<bool, TernError> {
    Ok(descent_witness(t)?.is_some())
}

/// Where the even coefficients sit after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum ParityClass {
    AllOdd,
    /// `b` odd and `v_2(c) = n >= 1`.
    OneEven { n: u64 },
    /// `v_2(b) = v_2(c) = m >= 1`.
    TwoEven { m: u64 },
}

/// A primitive (F)-triple put in the normal form `a` odd, `b` odd when
/// possible, all coefficients positive.
///
/// Coefficient signs are absorbed into the variables (`p` is odd), so
/// `normalized[i] = |original[permutation[i]]|` and a solution `(x, y, z)` of
/// the original maps to `signs[i] * coords[permutation[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernProfile {
    pub original: Tern,
    pub normalized: Tern,
    pub permutation: [usize; 3],
    pub signs: [i8; 3],
    /// Original index of the coefficient placed in slot `a`.
    pub odd_slot: usize,
    pub n2: u64,
    pub parity_class: ParityClass,
    /// `rad'(abc)`.
    pub s: SSet,
    pub descent_flag: bool,
}

impl TernProfile {
    /// Maps coordinates of the original equation to the normalized one.
    pub fn map_point(&self, coords: [&Zint; 3]) -> [Zint; 3] {
        [0, 1, 2].map(|i| Zint::from(self.signs[i]) * coords[self.permutation[i]])
    }

    /// `rad'(abc)` together with 2.
    pub fn s_with_two(&self) -> SSet {
        self.s.with_two()
    }
}

pub fn profile(t: &Tern) -> Result<TernProfile, TernError> {
    require_primitive(t)?;
    if let Some(q) = condition_f_violation(t)? {
        return Err(TernError::ConditionF(q));
    }
    let two = Zint::from(2);
    let v2 = t.valuations(&two);
    let mut odd: Vec<usize> = (0..3).filter(|&i| v2[i] == 0).collect();
    let mut even: Vec<usize> = (0..3).filter(|&i| v2[i] > 0).collect();
    let by_magnitude = |i: &usize| (t.coeffs[*i].abs(), *i);
    odd.sort_by_key(by_magnitude);
    even.sort_by_key(by_magnitude);
    let (permutation, parity_class) = match (odd.len(), even.len()) {
        (3, 0) => ([odd[0], odd[1], odd[2]], ParityClass::AllOdd),
        (2, 1) => ([odd[0], odd[1], even[0]], ParityClass::OneEven { n: v2[even[0]] }),
        (1, 2) => {
            debug_assert_eq!(v2[even[0]], v2[even[1]], "(F) at 2");
            ([odd[0], even[0], even[1]], ParityClass::TwoEven { m: v2[even[0]] })
        }
        _ => unreachable!("primitive triples have an odd coefficient"),
    };
    let normalized = Tern {
        coeffs: permutation.map(|i| t.coeffs[i].abs()),
    };
    let signs = permutation.map(|i| signum(&t.coeffs[i]));
    let n2 = v2.iter().sum();
    let s = t.bad_primes()?.without_two();
    Ok(TernProfile {
        original: t.clone(),
        normalized,
        permutation,
        signs,
        odd_slot: permutation[0],
        n2,
        parity_class,
        s,
        descent_flag: descent_case(t)?,
    })
}

/// A projective point with primitive integer coordinates, first nonzero
/// coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjectivePoint {
    #[serde(with = "crate::serde_zint::triple")]
    pub coords: [Zint; 3],
}

impl ProjectivePoint {
    /// Canonical representative of `[x : y : z]`; `None` for the zero triple.
    pub fn canonical(x: Zint, y: Zint, z: Zint) -> Option<Self> {
        let g = gcd3(&x, &y, &z);
        if g.is_zero() {
            return None;
        }
        let mut coords = [x / &g, y / &g, z / &g];
        let lead = coords.iter().find(|c| !c.is_zero()).map(signum).unwrap_or(1);
        if lead < 0 {
            for c in coords.iter_mut() {
                *c = -c.clone();
            }
        }
        Some(ProjectivePoint { coords })
    }

    pub fn x(&self) -> &Zint {
        &self.coords[0]
    }

    pub fn y(&self) -> &Zint {
        &self.coords[1]
    }

    pub fn z(&self) -> &Zint {
        &self.coords[2]
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// All points with `xyz = 0` on `ax^p + by^p + cz^p = 0`.
///
/// With one coordinate zero, say `z`, coprimality of `x, y` forces
/// `|a/g| = |y|^p` and `|b/g| = |x|^p` for `g = gcd(a, b)`.
pub fn trivial_points(t: &Tern, p: u64) -> Result<Vec<ProjectivePoint>, TernError> {
    if p < 5 || !is_prime_u64(p) {
        return Err(TernError::BadExponent(p));
    }
    let mut out = Vec::new();
    for zero_slot in 0..3 {
        let (i, j) = match zero_slot {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (ci, cj) = (&t.coeffs[i], &t.coeffs[j]);
        let g = ci.gcd(cj);
        let (Some(ri), Some(rj)) = (
            exact_root(&(ci / &g).abs(), p as u32),
            exact_root(&(cj / &g).abs(), p as u32),
        ) else {
            continue;
        };
        // ci * u^p + cj * w^p = 0 with u = rj, w = -sign(ci cj) * ri.
        let u = rj;
        let w = -Zint::from(signum(ci) * signum(cj)) * ri;
        let mut coords: [Zint; 3] = Default::default();
        coords[i] = u;
        coords[j] = w;
        if let Some(pt) = ProjectivePoint::canonical(coords[0].clone(), coords[1].clone(), coords[2].clone()) {
            debug_assert!(t.evaluate(p, pt.x(), pt.y(), pt.z()).is_zero());
            out.push(pt);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
