//! The decision engine: obligations from the Frey reduction, discharged by
//! congruence certificates, assembled into a verdict with a proof trace.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fkm::{obligations, Conclusion, ObligationRule, ReductionObligation};
use crate::ntkernel::{SSet, Zint};
use crate::sieves::{certify, four_n_moduli, pm_moduli, CertKind, Certificate, Declined, Target};
use crate::sunit::{enumerate_proper_points, ProperPoint};
use crate::terns::{descent_witness, is_primitive, profile, Tern, TernError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Only argument shapes stated in the source results.
    #[default]
    Strict,
    /// Also admits derived certificates.
    Extended,
}

impl Mode {
    pub fn allows_derived(self) -> bool {
        self == Mode::Extended
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Extended => "extended",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "extended" => Ok(Mode::Extended),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    FiniteDescent,
    Finite,
    ConditionalUnresolved,
    Unknown,
    /// The input fails a precondition (zero coefficient, not primitive).
    Invalid,
}

impl VerdictKind {
    pub const ALL: [VerdictKind; 5] = [
        VerdictKind::FiniteDescent,
        VerdictKind::Finite,
        VerdictKind::ConditionalUnresolved,
        VerdictKind::Unknown,
        VerdictKind::Invalid,
    ];

    pub fn exit_code(self) -> i32 {
        match self {
            VerdictKind::Finite | VerdictKind::FiniteDescent => 0,
            VerdictKind::Invalid => 1,
            VerdictKind::ConditionalUnresolved => 2,
            VerdictKind::Unknown => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::FiniteDescent => "finite-descent",
            VerdictKind::Finite => "finite",
            VerdictKind::ConditionalUnresolved => "conditional-unresolved",
            VerdictKind::Unknown => "unknown",
            VerdictKind::Invalid => "invalid",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stable identifiers for trace entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    ZeroCoefficient,
    NotPrimitive,
    ConditionF,
    Descent,
    TwoGood,
    TwoNode,
    EightFour,
    TwoExact,
    Uncovered,
    Mod3Sign,
    PlusMinusModN,
    FourNSieve,
    TwoPrime,
    Sign2Adic,
    NoCertificate,
    Tripwire,
}

impl Citation {
    pub fn id(self) -> &'static str {
        match self {
            Citation::ZeroCoefficient => "precondition.nonzero",
            Citation::NotPrimitive => "precondition.primitive",
            Citation::ConditionF => "precondition.condition-f",
            Citation::Descent => "descent",
            Citation::TwoGood => "reduction.two-good",
            Citation::TwoNode => "reduction.two-node",
            Citation::EightFour => "reduction.eight-four",
            Citation::TwoExact => "reduction.two-exact",
            Citation::Uncovered => "reduction.uncovered",
            Citation::Mod3Sign => "certificate.mod3-sign",
            Citation::PlusMinusModN => "certificate.plus-minus-mod-n",
            Citation::FourNSieve => "certificate.four-n-sieve",
            Citation::TwoPrime => "certificate.two-prime",
            Citation::Sign2Adic => "certificate.sign-2adic",
            Citation::NoCertificate => "certificate.none",
            Citation::Tripwire => "oracle.tripwire",
        }
    }

    fn of_rule(rule: ObligationRule) -> Citation {
        match rule {
            ObligationRule::TwoGood => Citation::TwoGood,
            ObligationRule::TwoNode => Citation::TwoNode,
            ObligationRule::EightFour => Citation::EightFour,
            ObligationRule::TwoExact => Citation::TwoExact,
            ObligationRule::Uncovered => Citation::Uncovered,
        }
    }

    fn of_kind(kind: &CertKind) -> Citation {
        match kind {
            CertKind::Mod3Sign => Citation::Mod3Sign,
            CertKind::PlusMinusModN { .. } => Citation::PlusMinusModN,
            CertKind::FourNSieve { .. } => Citation::FourNSieve,
            CertKind::TwoPrime { .. } => Citation::TwoPrime,
            CertKind::Sign2Adic => Citation::Sign2Adic,
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub citation: Citation,
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declined: Vec<Declined>,
    #[serde(default)]
    pub derived: bool,
}

impl TraceEntry {
    fn note(citation: Citation, statement: impl Into<String>) -> Self {
        TraceEntry {
            citation,
            statement: statement.into(),
            target: None,
            certificate: None,
            declined: Vec::new(),
            derived: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub schema: String,
    #[serde(with = "crate::serde_zint::triple")]
    pub coefficients: [Zint; 3],
    pub mode: Mode,
    pub kind: VerdictKind,
    pub trace: Vec<TraceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obligation: Option<ReductionObligation>,
    /// Some prime was only shown probably prime.
    #[serde(default)]
    pub probabilistic: bool,
}

impl Verdict {
    fn new(coefficients: [Zint; 3], mode: Mode) -> Self {
        Verdict {
            schema: crate::SCHEMA_VERSION.to_string(),
            coefficients,
            mode,
            kind: VerdictKind::Unknown,
            trace: Vec::new(),
            obligation: None,
            probabilistic: false,
        }
    }

    /// Every certificate in the trace.
    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.trace.iter().filter_map(|e| e.certificate.as_ref())
    }

    pub fn citations(&self) -> Vec<Citation> {
        self.trace.iter().map(|e| e.citation).collect()
    }

    /// Compact summary of the deciding chain, e.g. `two-good+mod3-sign`.
    pub fn headline(&self) -> String {
        let parts: Vec<&str> = self
            .trace
            .iter()
            .map(|e| e.citation.id())
            .map(|id| id.rsplit('.').next().unwrap_or(id))
            .collect();
        if parts.is_empty() {
            "-".into()
        } else {
            parts.join("+")
        }
    }

    pub fn uses_derived(&self) -> bool {
        self.trace.iter().any(|e| e.derived)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    pub fn from_json(text: &str) -> Result<Verdict, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Engine settings beyond the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineConfig {
    pub mode: Mode,
    /// Re-run the bounded enumerator on every certificate of a `Finite`
    /// verdict; a point found downgrades the verdict to `Unknown`.
    pub tripwire_exp_bound: Option<u32>,
}

/// Decides `ax^p + by^p + cz^p = 0` for the given triple.
pub fn check_af(t: &Tern, mode: Mode) -> Verdict {
    check_af_with(t, &EngineConfig { mode, tripwire_exp_bound: None })
}

/// Like [`check_af`] but accepts raw coefficients, reporting zero ones as
/// invalid rather than failing.
pub fn check_af_coeffs(coeffs: &[Zint; 3], cfg: &EngineConfig) -> Verdict {
    match Tern::new(coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone()) {
        Ok(t) => check_af_with(&t, cfg),
        Err(_) => {
            let mut v = Verdict::new(coeffs.clone(), cfg.mode);
            v.kind = VerdictKind::Invalid;
            v.trace.push(TraceEntry::note(Citation::ZeroCoefficient, "a coefficient is zero"));
            v
        }
    }
}

fn certificate_entry(target: &Target, cert: Option<Certificate>, declined: Vec<Declined>) -> TraceEntry {
    match cert {
        Some(c) => TraceEntry {
            citation: Citation::of_kind(&c.kind),
            statement: format!("{} has no proper points: {}", target, c.kind.label()),
            target: Some(target.clone()),
            derived: c.derived,
            certificate: Some(c),
            declined,
        },
        None => TraceEntry {
            citation: Citation::NoCertificate,
            statement: format!("no generator certifies {target}"),
            target: Some(target.clone()),
            certificate: None,
            declined,
            derived: false,
        },
    }
}

pub fn check_af_with(t: &Tern, cfg: &EngineConfig) -> Verdict {
    let mut v = Verdict::new(t.coeffs().clone(), cfg.mode);
    if !is_primitive(t) {
        v.kind = VerdictKind::Invalid;
        let g = crate::ntkernel::gcd3(t.a(), t.b(), t.c());
        v.trace.push(TraceEntry::note(Citation::NotPrimitive, format!("gcd(a, b, c) = {g}")));
        return v;
    }
    match descent_witness(t) {
        Ok(Some(w)) => {
            v.kind = VerdictKind::FiniteDescent;
            v.trace.push(TraceEntry::note(
                Citation::Descent,
                format!(
                    "v_{}: valuations {:?}; slot {} exceeds slot {} >= 1, so every solution descends",
                    w.prime, w.valuations, w.larger_slot, w.smaller_slot
                ),
            ));
            return v;
        }
        Ok(None) => {}
        Err(e) => return invalid(v, e),
    }
    let prof = match profile(t) {
        Ok(p) => p,
        Err(e) => return invalid(v, e),
    };
    v.probabilistic = prof.s.probabilistic();
    let obligation = obligations(&prof);
    v.trace.push(TraceEntry::note(Citation::of_rule(obligation.rule), obligation.rule.describe()));
    v.obligation = Some(obligation.clone());
    if obligation.rule == ObligationRule::Uncovered {
        v.kind = VerdictKind::Unknown;
        return v;
    }
    let allow = cfg.mode.allows_derived();
    let mut all_primary = true;
    for target in &obligation.equations {
        let (cert, declined) = certify(target, allow);
        all_primary &= cert.is_some();
        v.trace.push(certificate_entry(target, cert, declined));
    }
    v.kind = if !all_primary {
        VerdictKind::Unknown
    } else {
        match &obligation.conclusion {
            Conclusion::Unconditional => VerdictKind::Finite,
            Conclusion::ConditionalWithResidual { residual } => {
                let (cert, declined) = certify(residual, allow);
                let ok = cert.is_some();
                v.trace.push(certificate_entry(residual, cert, declined));
                if ok {
                    VerdictKind::Finite
                } else {
                    VerdictKind::ConditionalUnresolved
                }
            }
        }
    };
    if v.kind == VerdictKind::Finite {
        if let Some(bound) = cfg.tripwire_exp_bound {
            tripwire(&mut v, bound);
        }
    }
    v
}

fn invalid(mut v: Verdict, e: TernError) -> Verdict {
    v.kind = VerdictKind::Invalid;
    let citation = match e {
        TernError::ConditionF(_) => Citation::ConditionF,
        _ => Citation::NotPrimitive,
    };
    v.trace.push(TraceEntry::note(citation, e.to_string()));
    v
}

/// Points the enumerator finds for any certificate of the verdict.
pub fn oracle_counterexamples(v: &Verdict, exp_bound: u32) -> Vec<(Target, ProperPoint)> {
    let mut out = Vec::new();
    for c in v.certificates() {
        if let Ok(points) = enumerate_proper_points(&c.line(), &c.target.s, exp_bound) {
            out.extend(points.into_iter().map(|p| (c.target.clone(), p)));
        }
    }
    out
}

fn tripwire(v: &mut Verdict, bound: u32) {
    let bad = oracle_counterexamples(v, bound);
    if let Some((target, point)) = bad.first() {
        v.kind = VerdictKind::Unknown;
        v.trace.push(TraceEntry::note(
            Citation::Tripwire,
            format!("enumerator found {point} on {target} at exponent bound {bound}"),
        ));
    }
}

/// Moduli usable for the two congruence sieves over `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusScan {
    /// `n` with every prime `±1 (mod n)` and `n` dividing none of 14, 16, 18.
    pub pm: Vec<u64>,
    /// Odd `n >= 3` with every odd prime `1 (mod 4n)`.
    pub four_n: Vec<u64>,
}

pub fn pm_modulus_scan(s: &SSet) -> ModulusScan {
    ModulusScan { pm: pm_moduli(s), four_n: four_n_moduli(s) }
}

/// Rendering of a verdict for people and for external checkers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDocument {
    pub schema: String,
    pub title: String,
    pub mode: Mode,
    pub kind: VerdictKind,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub heading: String,
    pub lines: Vec<String>,
}

impl ProofDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\nverdict: {}   mode: {}\n", self.title, self.kind, self.mode);
        for s in &self.sections {
            out.push_str(&format!("\n[{}]\n", s.heading));
            for l in &s.lines {
                out.push_str(&format!("  {l}\n"));
            }
        }
        out
    }
}

pub fn explain(v: &Verdict) -> ProofDocument {
    let [a, b, c] = &v.coefficients;
    let mut sections = Vec::new();
    for (i, e) in v.trace.iter().enumerate() {
        let mut lines = vec![e.statement.clone()];
        if let Some(c) = &e.certificate {
            if c.derived {
                lines.push("derived argument, extended mode only".into());
            }
            for h in &c.hypotheses {
                lines.push(format!("hypothesis: {h}"));
            }
            for (k, step) in c.narrative.iter().enumerate() {
                let m = step.modulus.map_or("Z".to_string(), |m| format!("mod {m}"));
                lines.push(format!("step {} ({m}): {}", k + 1, step.claim));
            }
        }
        for d in &e.declined {
            lines.push(format!("declined {}: {}", d.generator, d.reason));
        }
        sections.push(Section { heading: format!("{}. {}", i + 1, e.citation), lines });
    }
    if v.probabilistic {
        sections.push(Section {
            heading: "caveat".into(),
            lines: vec!["some primes are probable primes only".into()],
        });
    }
    ProofDocument {
        schema: crate::SCHEMA_VERSION.to_string(),
        title: format!("{a} x^p + {b} y^p + {c} z^p = 0"),
        mode: v.mode,
        kind: v.kind,
        sections,
    }
}
