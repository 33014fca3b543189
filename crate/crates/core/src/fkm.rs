//! From a putative solution of `ax^p + by^p + cz^p = 0` to a Frey curve, the
//! level of its mod-`p` representation, and the S-unit equations whose
//! emptiness rules such solutions out.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frey::{FreyCurve, FreyError};
use crate::ntkernel::{gcd3, is_prime_u64, pow, rad, valuation_unchecked, NtError, SSet, Zint};
use crate::sieves::Target;
use crate::terns::{condition_f, is_primitive, profile, ParityClass, Tern, TernError, TernProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FkmError {
    #[error("({x}, {y}, {z}) is not a primitive nonzero solution for p = {p}")]
    NotASolution { p: u64, x: Zint, y: Zint, z: Zint },
    #[error("p = {p} is not admissible: {reason}")]
    Inadmissible { p: u64, reason: String },
    #[error("no sign and ordering puts the triple in Frey shape")]
    NoFreyShape,
    #[error("{0} does not divide the matching p-th power")]
    TNotDividing(Zint),
    #[error("branch does not apply: the triple has at most one even coefficient")]
    BranchNotApplicable,
    #[error(transparent)]
    Tern(#[from] TernError),
    #[error(transparent)]
    Frey(#[from] FreyError),
    #[error(transparent)]
    Arithmetic(#[from] NtError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionWitness {
    pub tern: Tern,
    pub p: u64,
    #[serde(with = "crate::serde_zint")]
    pub x: Zint,
    #[serde(with = "crate::serde_zint")]
    pub y: Zint,
    #[serde(with = "crate::serde_zint")]
    pub z: Zint,
}

impl SolutionWitness {
    pub fn new(tern: Tern, p: u64, x: Zint, y: Zint, z: Zint) -> Result<Self, FkmError> {
        let bad = x.is_zero()
            || y.is_zero()
            || z.is_zero()
            || !gcd3(&x, &y, &z).is_one()
            || !tern.evaluate(p, &x, &y, &z).is_zero();
        if bad {
            return Err(FkmError::NotASolution { p, x, y, z });
        }
        Ok(SolutionWitness { tern, p, x, y, z })
    }

    pub fn coords(&self) -> [&Zint; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// `p` odd prime outside `{3, 5, 7}`, coprime to `abc` and above every
    /// `v_q(abc) + 8`.
    pub fn check_admissible(&self) -> Result<(), FkmError> {
        let p = self.p;
        let fail = |reason: String| Err(FkmError::Inadmissible { p, reason });
        if !is_prime_u64(p) {
            return fail("not prime".into());
        }
        if p <= 7 {
            return fail("p lies in {2, 3, 5, 7}".into());
        }
        let abc = self.tern.product();
        if abc.is_multiple_of(&Zint::from(p)) {
            return fail("p divides abc".into());
        }
        for q in rad(&abc)?.iter() {
            let v = valuation_unchecked(&abc, q);
            if p as u128 <= v as u128 + 8 {
                return fail(format!("p <= v_{q}(abc) + 8 = {}", v + 8));
            }
        }
        Ok(())
    }
}

/// `T_a = gcd(b, c)`, `T_b = gcd(a, c)`, `T_c = gcd(a, b)` and the cofactors
/// with `a = a' T_b T_c` and so on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TDecomposition {
    #[serde(with = "crate::serde_zint::triple")]
    pub t: [Zint; 3],
    #[serde(with = "crate::serde_zint::triple")]
    pub primed: [Zint; 3],
}

pub fn decompose(t: &Tern) -> Result<TDecomposition, FkmError> {
    profile(t)?;
    let [a, b, c] = t.coeffs();
    let tt = [b.gcd(c), a.gcd(c), a.gcd(b)];
    let primed = [
        a / (&tt[1] * &tt[2]),
        b / (&tt[0] * &tt[2]),
        c / (&tt[0] * &tt[1]),
    ];
    let all: Vec<&Zint> = tt.iter().chain(primed.iter()).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            debug_assert!(all[i].gcd(all[j]).is_one(), "(F) forces pairwise coprime parts");
        }
    }
    Ok(TDecomposition { t: tt, primed })
}

/// How the Frey triple was chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreyAudit {
    pub epsilon: i8,
    /// `(A, B, C) = epsilon * (u[perm[0]], u[perm[1]], u[perm[2]])`.
    pub permutation: [usize; 3],
    /// `u = (a' x^p / T_a, b' y^p / T_b, c' z^p / T_c)`.
    #[serde(with = "crate::serde_zint::triple")]
    pub scaled: [Zint; 3],
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn build_frey(w: &SolutionWitness) -> Result<(FreyCurve, FreyAudit), FkmError> {
    let d = decompose(&w.tern)?;
    let mut scaled: [Zint; 3] = Default::default();
    for i in 0..3 {
        let power = pow(w.coords()[i], w.p);
        if !power.is_multiple_of(&d.t[i]) {
            return Err(FkmError::TNotDividing(d.t[i].clone()));
        }
        scaled[i] = &d.primed[i] * power / &d.t[i];
    }
    debug_assert!((&scaled[0] + &scaled[1] + &scaled[2]).is_zero());
    let four = Zint::from(4);
    for epsilon in [1i8, -1] {
        for perm in PERMUTATIONS {
            let a = Zint::from(epsilon) * &scaled[perm[0]];
            let b = Zint::from(epsilon) * &scaled[perm[1]];
            if a.mod_floor(&four) == Zint::from(3) && b.is_even() {
                let curve = FreyCurve::new(a, b)?;
                return Ok((curve, FreyAudit { epsilon, permutation: perm, scaled }));
            }
        }
    }
    Err(FkmError::NoFreyShape)
}

/// Which row of the level table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelCase {
    TwoEven,
    AllOdd,
    NFour,
    HighOrEvenZ,
    NTwoOrThree,
    NOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreLevel {
    pub case: LevelCase,
    pub two_exponent: u32,
    /// `rad'(abc)`.
    pub odd_part: SSet,
}

impl SerreLevel {
    pub fn level(&self) -> Zint {
        self.odd_part.product() << self.two_exponent
    }
}

impl fmt::Display for SerreLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{} * rad'(abc) = {}", self.two_exponent, self.level())
    }
}

/// The 2-exponent as a function of the normalized parity profile and the
/// parity of the normalized `z`.
pub fn level_two_exponent(class: ParityClass, z_even: bool) -> (LevelCase, u32) {
    match class {
        ParityClass::TwoEven { .. } => (LevelCase::TwoEven, 1),
        ParityClass::OneEven { n: 4 } => (LevelCase::NFour, 0),
        ParityClass::AllOdd => (LevelCase::AllOdd, 1),
        ParityClass::OneEven { n } if n >= 5 || z_even => (LevelCase::HighOrEvenZ, 1),
        ParityClass::OneEven { n: 2 | 3 } => (LevelCase::NTwoOrThree, 3),
        ParityClass::OneEven { .. } => (LevelCase::NOne, 5),
    }
}

pub fn serre_level(w: &SolutionWitness) -> Result<SerreLevel, FkmError> {
    w.check_admissible()?;
    let prof = profile(&w.tern)?;
    let z = &prof.map_point(w.coords())[2];
    let (case, two_exponent) = level_two_exponent(prof.parity_class, z.is_even());
    Ok(SerreLevel { case, two_exponent, odd_part: prof.s.clone() })
}

/// `v2` of the minimal discriminant of the Frey curve against
/// `-v2(abc) - 8 (mod p)`, for triples with two even coefficients.
pub fn delta_min_check(w: &SolutionWitness) -> Result<bool, FkmError> {
    let d = decompose(&w.tern)?;
    let t_prod = &d.t[0] * &d.t[1] * &d.t[2];
    if t_prod.is_odd() {
        return Err(FkmError::BranchNotApplicable);
    }
    let (curve, _) = build_frey(w)?;
    let data = curve.conductor()?;
    let two = Zint::from(2);
    let vmin = data.min_disc_valuation(&two) as i128;
    let vabc = valuation_unchecked(&w.tern.product(), &two) as i128;
    let p = w.p as i128;
    Ok((vmin + vabc + 8).rem_euclid(p) == 0)
}

/// Which reduction statement produced an obligation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObligationRule {
    /// `b` odd, `v2(c) = 4`: good reduction at 2.
    TwoGood,
    /// Multiplicative at 2: all odd, `v2(c) >= 5`, or `v2(b) = v2(c) >= 2`.
    TwoNode,
    /// `b` odd, `v2(c) in {2, 3}`.
    EightFour,
    /// `2 || abc`.
    TwoExact,
    /// No reduction statement covers the profile.
    Uncovered,
}

impl ObligationRule {
    pub fn describe(&self) -> &'static str {
        match self {
            ObligationRule::TwoGood => "b odd and v2(c) = 4: no proper points of 16X+Y+Z over S suffices",
            ObligationRule::TwoNode => "multiplicative at 2: no proper points of 16X+Y+Z over 2S suffices",
            ObligationRule::EightFour => "b odd and v2(c) in {2,3}: 8X+Y+Z and 4X+Y+Z over S, then 16X+Y+Z over 2S",
            ObligationRule::TwoExact => "2 || abc: 2X+Y+Z over S, then 16X+Y+Z over 2S",
            ObligationRule::Uncovered => "v2(b) = v2(c) = 1 is not covered by any reduction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Conclusion {
    Unconditional,
    ConditionalWithResidual { residual: Target },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionObligation {
    pub rule: ObligationRule,
    pub equations: Vec<Target>,
    pub conclusion: Conclusion,
}

pub fn obligations(prof: &TernProfile) -> ReductionObligation {
    let s = prof.s.clone();
    let s2 = prof.s_with_two();
    let residual = Conclusion::ConditionalWithResidual { residual: Target::new(4, s2.clone()) };
    let (rule, equations, conclusion) = match prof.parity_class {
        ParityClass::OneEven { n: 4 } => (ObligationRule::TwoGood, vec![Target::new(4, s)], Conclusion::Unconditional),
        ParityClass::AllOdd => (ObligationRule::TwoNode, vec![Target::new(4, s2)], Conclusion::Unconditional),
        ParityClass::OneEven { n } if n >= 5 => {
            (ObligationRule::TwoNode, vec![Target::new(4, s2)], Conclusion::Unconditional)
        }
        ParityClass::TwoEven { m } if m >= 2 => {
            (ObligationRule::TwoNode, vec![Target::new(4, s2)], Conclusion::Unconditional)
        }
        ParityClass::OneEven { n: 2 | 3 } => (
            ObligationRule::EightFour,
            vec![Target::new(3, s.clone()), Target::new(2, s)],
            residual,
        ),
        ParityClass::OneEven { .. } => (ObligationRule::TwoExact, vec![Target::new(1, s)], residual),
        ParityClass::TwoEven { .. } => (ObligationRule::Uncovered, Vec::new(), Conclusion::Unconditional),
    };
    ReductionObligation { rule, equations, conclusion }
}

/// A witness for `a x^p + b y^p + c z^p = 0` with `z = 1` and
/// `c = -(a x^p + b y^p)`, kept only when the triple is primitive and
/// satisfies (F).
pub fn fabricate_witness(a: &Zint, b: &Zint, x: &Zint, y: &Zint, p: u64) -> Option<SolutionWitness> {
    if a.is_zero() || b.is_zero() || x.is_zero() || y.is_zero() || !a.gcd(b).is_one() || !x.gcd(y).is_one() {
        return None;
    }
    let c = -(a * pow(x, p) + b * pow(y, p));
    if c.is_zero() {
        return None;
    }
    let tern = Tern::new(a.clone(), b.clone(), c).ok()?;
    if !is_primitive(&tern) || !condition_f(&tern).ok()? {
        return None;
    }
    SolutionWitness::new(tern, p, x.clone(), y.clone(), Zint::one()).ok()
}

/// Odd primes dividing `ABC` that do not divide `abc`; each must have
/// valuation divisible by `p`.
pub fn extra_frey_primes(w: &SolutionWitness, curve: &FreyCurve) -> Result<Vec<(Zint, u64)>, FkmError> {
    let abc_c = curve.a() * curve.b() * curve.c();
    let abc = w.tern.product();
    let mut out = Vec::new();
    for q in rad(&abc_c)?.odd_primes() {
        if !abc.is_multiple_of(q) {
            out.push((q.clone(), valuation_unchecked(&abc_c, q)));
        }
    }
    Ok(out)
}
