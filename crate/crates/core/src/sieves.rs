//! Congruence certificates for `2^r X + Y + Z = 0` having no proper points.
//!
//! A [`Certificate`] names an argument shape, the target equation and the
//! ordered congruence steps of the argument. Each step carries a machine
//! checkable [`Rule`] so a verifier can replay the argument on any candidate
//! point without trusting the generator.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expdioph::{two_prime_criterion, TwoPrimeCase};
use crate::ntkernel::{residue, strip, SSet, Zint};
use crate::sunit::{is_proper, LineEq};

/// `2^r X + Y + Z = 0` over `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Target {
    pub r: u32,
    pub s: SSet,
}

impl Target {
    pub fn new(r: u32, s: SSet) -> Self {
        Target { r, s }
    }

    pub fn coefficient(&self) -> Zint {
        Zint::one() << self.r
    }

    pub fn line(&self) -> LineEq {
        LineEq::two_power(self.r)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}X + Y + Z over {}", self.coefficient(), self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum CertKind {
    Mod3Sign,
    PlusMinusModN { n: u64 },
    FourNSieve { n: u64 },
    TwoPrime { case: TwoPrimeCase, q: u64, l: u64 },
    Sign2Adic,
}

impl CertKind {
    /// Derived shapes are only admitted by the extended engine.
    pub fn is_derived(&self) -> bool {
        matches!(self, CertKind::Sign2Adic)
    }

    pub fn label(&self) -> String {
        match self {
            CertKind::Mod3Sign => "Mod3Sign".into(),
            CertKind::PlusMinusModN { n } => format!("PlusMinusModN({n})"),
            CertKind::FourNSieve { n } => format!("FourNSieve({n})"),
            CertKind::TwoPrime { case, q, l } => format!("TwoPrime(case {}, {q}, {l})", case.index()),
            CertKind::Sign2Adic => "Sign2Adic".into(),
        }
    }
}

/// Machine form of one argument step, evaluated against a concrete point.
/// Coordinates are indexed `0 = x`, `1 = y`, `2 = z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum Rule {
    /// The odd part of every `|coordinate|` lies in `allowed` modulo `modulus`.
    UnitResidues { modulus: u64, allowed: Vec<u64> },
    /// The listed coordinates share one sign.
    SignsEqual { coords: Vec<usize> },
    /// `v2(y + z) = 1` while `v2(2^r x) >= 2`.
    TwoAdicGap,
    /// `2^r x + y + z` is nonzero modulo `modulus`.
    NonzeroMod { modulus: u64 },
    /// `2^r x + y + z` is nonzero.
    Nonzero,
    /// The pair hypotheses hold, so no exponential instance exists.
    PairExcluded { case: TwoPrimeCase, q: u64, l: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// `None` for a step over the integers.
    pub modulus: Option<u64>,
    pub claim: String,
    pub rule: Rule,
}

impl Step {
    fn new(modulus: Option<u64>, claim: impl Into<String>, rule: Rule) -> Self {
        Step { modulus, claim: claim.into(), rule }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub target: Target,
    pub derived: bool,
    pub hypotheses: Vec<String>,
    pub narrative: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("malformed certificate document: {0}")]
    Parse(String),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("certificate hypotheses do not hold for its target")]
    HypothesesFail,
}

/// Why a generator declined a target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declined {
    pub generator: String,
    pub reason: String,
}

fn decline(generator: &str, reason: impl Into<String>) -> Declined {
    Declined { generator: generator.into(), reason: reason.into() }
}

fn small(p: &Zint) -> Option<u64> {
    u64::try_from(p).ok()
}

fn rule_holds(rule: &Rule, r: u32, pt: [&Zint; 3]) -> bool {
    let [x, y, z] = pt;
    let two = Zint::from(2);
    match rule {
        Rule::UnitResidues { modulus, allowed } => pt.iter().all(|v| {
            let odd = strip(&v.abs(), &two).0;
            allowed.contains(&residue(&odd, *modulus))
        }),
        Rule::SignsEqual { coords } => {
            let signs: Vec<bool> = coords.iter().map(|&i| pt[i].is_positive()).collect();
            signs.windows(2).all(|w| w[0] == w[1])
        }
        Rule::TwoAdicGap => {
            let sum = y + z;
            if sum.is_zero() || x.is_zero() {
                return false;
            }
            let v_sum = strip(&sum, &two).1;
            let v_x = strip(x, &two).1 + r as u64;
            v_sum == 1 && v_x >= 2
        }
        Rule::NonzeroMod { modulus } => {
            let lhs = (x << r) + y + z;
            !lhs.mod_floor(&Zint::from(*modulus)).is_zero()
        }
        Rule::Nonzero => !((x << r) + y + z).is_zero(),
        Rule::PairExcluded { case, q, l } => {
            two_prime_criterion(*q, *l) == Some(*case) && !((x << r) + y + z).is_zero()
        }
    }
}

/// Outcome of replaying a certificate on one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointAudit {
    /// Not a proper point of the target (not a solution, or the wrong shape).
    OutOfScope,
    /// A proper point of the target; `step` is the first narrative step
    /// whose claim it contradicts.
    Refutes { step: usize },
}

impl Certificate {
    pub fn line(&self) -> LineEq {
        self.target.line()
    }

    /// Re-derives the certificate from its kind and target alone.
    pub fn verify(&self) -> bool {
        regenerate(&self.kind, &self.target).as_ref() == Some(self)
    }

    pub fn audit_point(&self, x: &Zint, y: &Zint, z: &Zint) -> PointAudit {
        if !is_proper(x, y, z, &self.line(), &self.target.s) {
            return PointAudit::OutOfScope;
        }
        let g = crate::ntkernel::gcd3(x, y, z);
        let (x, y, z) = (x / &g, y / &g, z / &g);
        let step = self
            .narrative
            .iter()
            .position(|s| !rule_holds(&s.rule, self.target.r, [&x, &y, &z]))
            .unwrap_or(self.narrative.len());
        PointAudit::Refutes { step }
    }

    /// Stable structured text form.
    pub fn to_document(&self) -> String {
        let doc = CertificateDocument { schema: crate::SCHEMA_VERSION.to_string(), certificate: self.clone() };
        serde_json::to_string_pretty(&doc).expect("certificate serializes")
    }

    /// Parses a document and re-verifies its hypotheses.
    pub fn from_document(text: &str) -> Result<Certificate, CertError> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| CertError::Parse(e.to_string()))?;
        if doc.schema != crate::SCHEMA_VERSION {
            return Err(CertError::Schema(doc.schema));
        }
        if !doc.certificate.verify() {
            return Err(CertError::HypothesesFail);
        }
        Ok(doc.certificate)
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateDocument {
    schema: String,
    #[serde(flatten)]
    certificate: Certificate,
}

/// `true` iff the certificate rejects the point: only a proper point of the
/// target survives, and such a point contradicts the certificate.
pub fn check_certificate(c: &Certificate, x: &Zint, y: &Zint, z: &Zint) -> bool {
    c.audit_point(x, y, z) == PointAudit::OutOfScope
}

fn regenerate(kind: &CertKind, t: &Target) -> Option<Certificate> {
    match kind {
        CertKind::Mod3Sign => cert_mod3_sign(t.r, &t.s),
        CertKind::PlusMinusModN { n } if t.r == 4 => cert_pm_mod_n(&t.s, *n),
        CertKind::PlusMinusModN { .. } => None,
        CertKind::FourNSieve { n } => cert_4n(t.r, &t.s, *n),
        CertKind::TwoPrime { .. } => try_two_prime(t.r, &t.s)
            .ok()
            .filter(|c| c.kind == *kind),
        CertKind::Sign2Adic => cert_sign_2adic(t.r, &t.s),
    }
}

fn residue_list(s: &SSet, m: u64) -> String {
    let parts: Vec<String> = s.iter().map(|p| format!("{p} = {} (mod {m})", residue(p, m))).collect();
    if parts.is_empty() {
        "S has no primes to check".into()
    } else {
        parts.join(", ")
    }
}

pub(crate) fn try_mod3_sign(r: u32, s: &SSet) -> Result<Certificate, Declined> {
    const G: &str = "Mod3Sign";
    if r % 2 == 1 {
        return Err(decline(G, format!("2^{r} = 2 (mod 3)")));
    }
    if s.contains_two() {
        return Err(decline(G, "2 lies in S"));
    }
    if let Some(p) = s.iter().find(|p| residue(p, 3) != 1) {
        return Err(decline(G, format!("{p} = {} (mod 3)", residue(p, 3))));
    }
    let target = Target::new(r, s.clone());
    Ok(Certificate {
        kind: CertKind::Mod3Sign,
        derived: false,
        hypotheses: vec![
            format!("r = {r} is even, so 2^r = 1 (mod 3)"),
            "2 is not in S".into(),
            residue_list(s, 3),
        ],
        narrative: vec![
            Step::new(
                Some(3),
                "each of 2^r x, y, z is congruent to its sign modulo 3",
                Rule::UnitResidues { modulus: 3, allowed: vec![1] },
            ),
            Step::new(
                Some(3),
                "a sum of three signs vanishes mod 3 only when the signs agree",
                Rule::SignsEqual { coords: vec![0, 1, 2] },
            ),
            Step::new(None, "three nonzero terms of one sign cannot sum to 0", Rule::Nonzero),
        ],
        target,
    })
}

pub fn cert_mod3_sign(r: u32, s: &SSet) -> Option<Certificate> {
    try_mod3_sign(r, s).ok()
}

/// A modulus is excluded when it divides one of `16 ± 1 ± 1`.
pub fn pm_modulus_admissible(n: u64) -> bool {
    n >= 3 && 14 % n != 0 && 16 % n != 0 && 18 % n != 0
}

pub(crate) fn try_pm_mod_n(s: &SSet, n: u64) -> Result<Certificate, Declined> {
    const G: &str = "PlusMinusModN";
    if !pm_modulus_admissible(n) {
        return Err(decline(G, format!("n = {n} divides 14, 16 or 18")));
    }
    if s.contains_two() {
        return Err(decline(G, "2 lies in S"));
    }
    if let Some(p) = s.iter().find(|p| {
        let v = residue(p, n);
        v != 1 && v != n - 1
    }) {
        return Err(decline(G, format!("{p} = {} (mod {n})", residue(p, n))));
    }
    let target = Target::new(4, s.clone());
    Ok(Certificate {
        kind: CertKind::PlusMinusModN { n },
        derived: false,
        hypotheses: vec![
            "2 is not in S".into(),
            residue_list(s, n),
            format!("n = {n} divides none of 14, 16, 18"),
        ],
        narrative: vec![
            Step::new(
                Some(n),
                format!("x, y, z are each +1 or -1 modulo {n}"),
                Rule::UnitResidues { modulus: n, allowed: vec![1, n - 1] },
            ),
            Step::new(
                Some(n),
                format!("16x + y + z is one of +-14, +-16, +-18 modulo {n}, never 0"),
                Rule::NonzeroMod { modulus: n },
            ),
        ],
        target,
    })
}

pub fn cert_pm_mod_n(s: &SSet, n: u64) -> Option<Certificate> {
    try_pm_mod_n(s, n).ok()
}

pub(crate) fn try_4n(r: u32, s: &SSet, n: u64) -> Result<Certificate, Declined> {
    const G: &str = "FourNSieve";
    if r == 0 {
        return Err(decline(G, "needs r >= 1"));
    }
    if n < 3 || n.is_multiple_of(2) {
        return Err(decline(G, format!("n = {n} is not an odd integer >= 3")));
    }
    if !s.contains_two() {
        return Err(decline(G, "2 is not in S"));
    }
    let m = 4 * n;
    if let Some(p) = s.odd_primes().find(|p| residue(p, m) != 1) {
        return Err(decline(G, format!("{p} = {} (mod {m})", residue(p, m))));
    }
    let target = Target::new(r, s.clone());
    let fold = if r == 1 {
        "x is even since 2 lies in S and y, z are odd".to_string()
    } else {
        format!("fold 2^{} into x: the X-term carries 2^e with e >= 2", r - 1)
    };
    Ok(Certificate {
        kind: CertKind::FourNSieve { n },
        derived: false,
        hypotheses: vec![
            "2 lies in S".into(),
            format!("odd primes of S: {}", residue_list(&s.without_two(), m)),
        ],
        narrative: vec![
            Step::new(
                Some(m),
                format!("the odd parts of x, y, z are 1 modulo {m}"),
                Rule::UnitResidues { modulus: m, allowed: vec![1] },
            ),
            Step::new(
                Some(n),
                format!("mixed signs on y, z would force {n} | 2^e; so y, z share a sign"),
                Rule::SignsEqual { coords: vec![1, 2] },
            ),
            Step::new(
                Some(4),
                format!("{fold}; |y| + |z| = 2 (mod 4) cannot be divisible by 2^e"),
                Rule::TwoAdicGap,
            ),
        ],
        target,
    })
}

pub fn cert_4n(r: u32, s: &SSet, n: u64) -> Option<Certificate> {
    try_4n(r, s, n).ok()
}

pub(crate) fn try_two_prime(r: u32, s: &SSet) -> Result<Certificate, Declined> {
    const G: &str = "TwoPrime";
    if r != 4 {
        return Err(decline(G, "coefficient is not 16"));
    }
    let odd: Vec<u64> = s.odd_primes().filter_map(small).collect();
    if odd.len() != 2 || s.odd_primes().count() != 2 {
        return Err(decline(G, "S does not have exactly two odd primes"));
    }
    let (q0, l0) = (odd[0], odd[1]);
    let (case, q, l) = match two_prime_criterion(q0, l0) {
        Some(c) => (c, q0, l0),
        None => match two_prime_criterion(l0, q0) {
            Some(c) => (c, l0, q0),
            None => return Err(decline(G, format!("no hypothesis set holds for ({q0}, {l0}) in either order"))),
        },
    };
    let target = Target::new(r, s.clone());
    Ok(Certificate {
        kind: CertKind::TwoPrime { case, q, l },
        derived: false,
        hypotheses: case.hypotheses(q, l),
        narrative: vec![
            Step::new(
                None,
                format!(
                    "a proper point yields an instance of T1, T2, T3 or T3' over ({q}, {l}) with r >= 4; \
                     case {} excludes every family",
                    case.index()
                ),
                Rule::PairExcluded { case, q, l },
            ),
        ],
        target,
    })
}

pub fn cert_two_prime(s: &SSet) -> Option<Certificate> {
    try_two_prime(4, s).ok()
}

pub(crate) fn try_sign_2adic(r: u32, s: &SSet) -> Result<Certificate, Declined> {
    const G: &str = "Sign2Adic";
    if r < 2 {
        return Err(decline(G, "needs r >= 2"));
    }
    if let Some(p) = s.odd_primes().find(|p| residue(p, 12) != 1) {
        return Err(decline(G, format!("{p} = {} (mod 12)", residue(p, 12))));
    }
    let target = Target::new(r, s.clone());
    Ok(Certificate {
        kind: CertKind::Sign2Adic,
        derived: true,
        hypotheses: vec![
            format!("r = {r} >= 2"),
            format!("odd primes of S: {}", residue_list(&s.without_two(), 12)),
            "derived argument, extended mode only".into(),
        ],
        narrative: vec![
            Step::new(
                Some(12),
                "the odd parts of x, y, z are 1 modulo 12",
                Rule::UnitResidues { modulus: 12, allowed: vec![1] },
            ),
            Step::new(
                Some(3),
                "three terms of the form +-1 vanish mod 3 only if all agree; so y, z share a sign",
                Rule::SignsEqual { coords: vec![1, 2] },
            ),
            Step::new(
                Some(4),
                format!("|y| + |z| = 2 (mod 4) cannot be divisible by 2^{r}"),
                Rule::TwoAdicGap,
            ),
        ],
        target,
    })
}

pub fn cert_sign_2adic(r: u32, s: &SSet) -> Option<Certificate> {
    try_sign_2adic(r, s).ok()
}

/// Moduli `3 <= n <= 4 max(S) + 1` for which every prime of `s` is `±1 (mod n)`
/// and `n` divides none of 14, 16, 18.
pub fn pm_moduli(s: &SSet) -> Vec<u64> {
    let top = s.iter().filter_map(small).max().unwrap_or(1).saturating_mul(4).saturating_add(1);
    (3..=top)
        .filter(|&n| pm_modulus_admissible(n))
        .filter(|&n| {
            s.iter().all(|p| {
                let v = residue(p, n);
                v == 1 || v == n - 1
            })
        })
        .collect()
}

/// Odd `n >= 3` with every odd prime of `s` congruent to 1 modulo `4n`.
/// With no odd primes the condition is vacuous and `[3]` is returned.
pub fn four_n_moduli(s: &SSet) -> Vec<u64> {
    let mut g = Zint::zero();
    for p in s.odd_primes() {
        g = g.gcd(&(p - 1u32));
    }
    if g.is_zero() {
        return vec![3];
    }
    if !g.is_multiple_of(&Zint::from(4)) {
        return Vec::new();
    }
    let Some(g4) = small(&(g / 4u32)) else {
        return Vec::new();
    };
    let mut out: Vec<u64> = (1..=g4.isqrt())
        .filter(|d| g4 % d == 0)
        .flat_map(|d| [d, g4 / d])
        .filter(|&n| n >= 3 && n % 2 == 1)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Tries the generators in their fixed order and returns the first
/// certificate together with every declined attempt before it.
pub fn certify(target: &Target, allow_derived: bool) -> (Option<Certificate>, Vec<Declined>) {
    let mut declined = Vec::new();
    let (r, s) = (target.r, &target.s);
    match try_mod3_sign(r, s) {
        Ok(c) => return (Some(c), declined),
        Err(d) => declined.push(d),
    }
    if r != 4 {
        declined.push(decline("PlusMinusModN", "coefficient is not 16"));
    } else if s.contains_two() {
        declined.push(decline("PlusMinusModN", "2 lies in S"));
    } else {
        match pm_moduli(s).first().map(|&n| try_pm_mod_n(s, n)) {
            Some(Ok(c)) => return (Some(c), declined),
            Some(Err(d)) => declined.push(d),
            None => declined.push(decline("PlusMinusModN", "no admissible modulus n")),
        }
    }
    if !s.contains_two() {
        declined.push(decline("FourNSieve", "2 is not in S"));
    } else if r == 0 {
        declined.push(decline("FourNSieve", "needs r >= 1"));
    } else {
        match four_n_moduli(s).first().map(|&n| try_4n(r, s, n)) {
            Some(Ok(c)) => return (Some(c), declined),
            Some(Err(d)) => declined.push(d),
            None => declined.push(decline("FourNSieve", "no odd n >= 3 with all odd primes 1 (mod 4n)")),
        }
    }
    match try_two_prime(r, s) {
        Ok(c) => return (Some(c), declined),
        Err(d) => declined.push(d),
    }
    if allow_derived {
        match try_sign_2adic(r, s) {
            Ok(c) => return (Some(c), declined),
            Err(d) => declined.push(d),
        }
    } else {
        declined.push(decline("Sign2Adic", "derived certificate disabled in strict mode"));
    }
    (None, declined)
}
