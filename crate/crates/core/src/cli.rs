//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::criteria::{check_af_coeffs, explain, EngineConfig, Mode, Verdict, VerdictKind};
use crate::expdioph::{classify_even_t3, search_family_with_budget, Family, SearchBox, Sign};
use crate::frey::{full_two_torsion_model, tate_conductor, to_frey_model, CurveModel, Normalized};
use crate::ntkernel::{rad, SSet, Zint};
use crate::sieves::{certify, Target};
use crate::sunit::{enumerate_with_budget, LineEq, SunitError};

#[derive(Debug, Parser)]
#[command(name = "afcert", version, about = "Certify finiteness of ax^p + by^p + cz^p = 0 solution sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Exponent bound for bounded enumeration.
    #[arg(long, global = true, default_value_t = 6)]
    pub exp_bound: u32,
    #[arg(long, global = true, default_value = "strict")]
    pub mode: Mode,
    /// One JSON record per line.
    #[arg(long, global = true, conflicts_with = "human")]
    pub json: bool,
    /// Plain text (default).
    #[arg(long, global = true)]
    pub human: bool,
    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = crate::sunit::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a single coefficient triple.
    Check {
        #[arg(allow_negative_numbers = true)]
        a: String,
        #[arg(allow_negative_numbers = true)]
        b: String,
        #[arg(allow_negative_numbers = true)]
        c: String,
        /// Re-check every certificate of a finite verdict with the enumerator.
        #[arg(long)]
        tripwire: bool,
    },
    /// Enumerate proper points of 2^r X + Y + Z = 0.
    Sunit {
        #[arg(short = 'r', long = "coeff-exp")]
        r: u32,
        /// Comma separated primes; empty for S = {}.
        #[arg(short = 'S', long = "primes", default_value = "")]
        primes: String,
        #[arg(short = 'E')]
        e: Option<u32>,
        /// Also print a certificate document for the target if one exists.
        #[arg(long)]
        certificate: bool,
    },
    /// Search an exponential family over two odd primes.
    Expdioph {
        /// T1+, T1-, T2++, T2+-, T2-+, T2--, T3+, T3-, T3'+, T3'-
        #[arg(long)]
        family: String,
        #[arg(short = 'q')]
        q: u64,
        #[arg(short = 'l')]
        l: u64,
        /// Bound for r, s and t.
        #[arg(long = "box", default_value_t = 30)]
        side: u32,
        /// Cap on every prime power.
        #[arg(long)]
        max_side: Option<u128>,
    },
    /// Inspect Y^2 = X(X - A)(X + B), or a long Weierstrass model.
    Frey {
        #[arg(allow_negative_numbers = true)]
        a: Option<String>,
        #[arg(allow_negative_numbers = true)]
        b: Option<String>,
        /// a1,a2,a3,a4,a6
        #[arg(long, allow_hyphen_values = true)]
        model: Option<String>,
    },
    /// Scan many triples.
    Corpus {
        /// Positive triples a <= b <= c <= BOUND.
        #[arg(long)]
        bound: Option<u64>,
        /// Keep only triples with rad(abc) dividing this.
        #[arg(long)]
        rad_divides: Option<String>,
        /// One triple per line, `#` comments.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Add a per-triple timing column.
        #[arg(long)]
        timing: bool,
    },
}

/// Validated settings shared by the subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub exp_bound: u32,
    pub mode: Mode,
    pub json: bool,
    pub budget: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self, String> {
        if g.exp_bound < 1 {
            return Err("--exp-bound must be at least 1".into());
        }
        if g.budget < 1000 {
            return Err("--budget must be at least 1000".into());
        }
        Ok(RunConfig { exp_bound: g.exp_bound, mode: g.mode, json: g.json, budget: g.budget, out: g.out.clone() })
    }
}

/// Exit status used for errors that are not verdicts.
pub const EXIT_INVALID: i32 = 1;

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let cfg = match RunConfig::from_args(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let result = match cli.command {
        Command::Check { a, b, c, tripwire } => cmd_check(&cfg, &[a, b, c], tripwire),
        Command::Sunit { r, primes, e, certificate } => cmd_sunit(&cfg, r, &primes, e.unwrap_or(cfg.exp_bound), certificate),
        Command::Expdioph { family, q, l, side, max_side } => cmd_expdioph(&cfg, &family, q, l, side, max_side),
        Command::Frey { a, b, model } => cmd_frey(&cfg, a, b, model),
        Command::Corpus { bound, rad_divides, input, timing } => cmd_corpus(&cfg, bound, rad_divides, input, timing),
    };
    match result {
        Ok((report, code)) => match emit(&cfg, &report, stdout) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_INVALID
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn emit(cfg: &RunConfig, report: &str, stdout: &mut dyn Write) -> Result<(), String> {
    match &cfg.out {
        Some(path) => std::fs::write(path, report).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(report.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn parse_int(s: &str) -> Result<Zint, String> {
    s.trim().parse::<Zint>().map_err(|_| format!("not an integer: {s:?}"))
}

fn parse_primes(s: &str) -> Result<SSet, String> {
    let parsed: Result<Vec<Zint>, String> =
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(parse_int).collect();
    SSet::new(parsed?).map_err(|e| e.to_string())
}

type Outcome = Result<(String, i32), String>;

pub fn cmd_check(cfg: &RunConfig, args: &[String; 3], tripwire: bool) -> Outcome {
    let coeffs = [parse_int(&args[0])?, parse_int(&args[1])?, parse_int(&args[2])?];
    let engine = EngineConfig { mode: cfg.mode, tripwire_exp_bound: tripwire.then_some(cfg.exp_bound) };
    let v = check_af_coeffs(&coeffs, &engine);
    let report = if cfg.json {
        format!("{}\n", v.to_json_line())
    } else {
        explain(&v).to_text()
    };
    Ok((report, v.kind.exit_code()))
}

pub fn cmd_sunit(cfg: &RunConfig, r: u32, primes: &str, exp_bound: u32, with_cert: bool) -> Outcome {
    if exp_bound < 1 {
        return Err("-E must be at least 1".into());
    }
    let s = parse_primes(primes)?;
    let line = LineEq::two_power(r);
    let start = Instant::now();
    let result = enumerate_with_budget(&line, &s, exp_bound, cfg.budget);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let target = Target::new(r, s.clone());
    let cert = with_cert
        .then(|| certify(&target, cfg.mode.allows_derived()).0)
        .flatten();
    let en = match result {
        Ok(en) => en,
        Err(SunitError::BudgetExceeded { needed, budget }) => {
            let msg = format!("budget exhausted: {needed} candidates needed, budget {budget}; nothing enumerated");
            let report = if cfg.json {
                format!(
                    "{}\n",
                    json!({"schema": crate::SCHEMA_VERSION, "record": "sunit", "target": target,
                           "exp_bound": exp_bound, "status": "budget-exhausted", "needed": needed, "budget": budget})
                )
            } else {
                format!("{target}\n{msg}\n")
            };
            return Ok((report, EXIT_INVALID));
        }
        Err(e) => return Err(e.to_string()),
    };
    let mut out = String::new();
    if cfg.json {
        let points: Vec<[String; 3]> =
            en.points.iter().map(|p| p.point.coords.clone().map(|c| c.to_string())).collect();
        let mut rec = json!({"schema": crate::SCHEMA_VERSION, "record": "sunit", "target": target,
                             "exp_bound": exp_bound, "status": "complete", "nodes": en.nodes,
                             "elapsed_ms": elapsed_ms, "points": points});
        if let Some(c) = &cert {
            rec["certificate"] = serde_json::to_value(c).expect("certificate serializes");
        }
        writeln!(out, "{rec}").unwrap();
    } else {
        writeln!(out, "{target}, exponents <= {exp_bound}").unwrap();
        writeln!(out, "lattice candidates: {}   time: {elapsed_ms} ms", en.nodes).unwrap();
        if en.points.is_empty() {
            writeln!(out, "no proper points with exponents <= {exp_bound}").unwrap();
        }
        for p in &en.points {
            writeln!(out, "{p}").unwrap();
        }
        if with_cert {
            match &cert {
                Some(c) => out.push_str(&c.to_document()),
                None => out.push_str("no certificate generator applies"),
            }
            out.push('\n');
        }
    }
    Ok((out, 0))
}

pub fn cmd_expdioph(cfg: &RunConfig, family: &str, q: u64, l: u64, side: u32, max_side: Option<u128>) -> Outcome {
    let fam = Family::parse(family).ok_or_else(|| format!("unknown family {family:?}"))?;
    let mut bx = SearchBox::cube(side);
    bx.max_side = max_side;
    let found = search_family_with_budget(fam, q, l, &bx, cfg.budget).map_err(|e| e.to_string())?;
    // 2^r q^s = l^t - 1 with t even is the classified case.
    let classification = if fam == (Family::T3 { eps: Sign::Minus }) {
        let closed = classify_even_t3(q, l).map_err(|e| e.to_string())?;
        let in_box: Vec<(u32, u32, u32)> = closed
            .iter()
            .copied()
            .filter(|&(r, s, t)| r <= side && s <= side && 2 * t <= side && within_cap(max_side, q, l, r, s, 2 * t))
            .collect();
        let mut searched: Vec<(u32, u32, u32)> =
            found.iter().filter(|i| i.t % 2 == 0).map(|i| (i.r, i.s, i.t / 2)).collect();
        searched.sort();
        Some((closed, searched == in_box))
    } else {
        None
    };
    let mut out = String::new();
    if cfg.json {
        let mut rec = json!({"schema": crate::SCHEMA_VERSION, "record": "expdioph", "family": fam.to_string(),
                             "q": q, "l": l, "box": side, "solutions": found});
        if let Some((closed, agree)) = &classification {
            rec["classification"] = json!(closed);
            rec["agrees"] = json!(agree);
        }
        writeln!(out, "{rec}").unwrap();
    } else {
        writeln!(out, "family {fam} over q = {q}, l = {l}, exponents <= {side}").unwrap();
        if found.is_empty() {
            writeln!(out, "no solutions").unwrap();
        }
        for i in &found {
            writeln!(out, "{i}").unwrap();
        }
        if let Some((closed, agree)) = &classification {
            writeln!(out, "even-t classification (r, s, t) for 2^r q^s = l^(2t) - 1: {closed:?}").unwrap();
            writeln!(out, "search agrees with classification: {agree}").unwrap();
        }
    }
    Ok((out, 0))
}

fn within_cap(cap: Option<u128>, q: u64, l: u64, r: u32, s: u32, t: u32) -> bool {
    let Some(cap) = cap else { return true };
    let capz = Zint::from(cap);
    let p = |b: u64, e: u32| crate::ntkernel::pow(&Zint::from(b), e as u64);
    p(2, r) <= capz && p(q, s) <= capz && p(l, t) <= capz
}

pub fn cmd_frey(cfg: &RunConfig, a: Option<String>, b: Option<String>, model: Option<String>) -> Outcome {
    let (m, pair) = match (a, b, model) {
        (Some(a), Some(b), None) => {
            let (a, b) = (parse_int(&a)?, parse_int(&b)?);
            (full_two_torsion_model(&a, &b), Some((a, b)))
        }
        (None, None, Some(spec)) => {
            let parts: Result<Vec<Zint>, String> = spec.split(',').map(parse_int).collect();
            let parts = parts?;
            let arr: [Zint; 5] = parts.try_into().map_err(|_| "--model needs five coefficients".to_string())?;
            (CurveModel::new(arr).map_err(|e| e.to_string())?, None)
        }
        _ => return Err("give either A B or --model a1,a2,a3,a4,a6".into()),
    };
    let data = tate_conductor(&m).map_err(|e| e.to_string())?;
    let normalized = match &pair {
        Some((a, b)) => Some(to_frey_model(a, b).map_err(|e| e.to_string())?),
        None => None,
    };
    let (jn, jd) = m.j_invariant();
    let mut out = String::new();
    if cfg.json {
        let rec = json!({"schema": crate::SCHEMA_VERSION, "record": "frey", "model": m,
                         "discriminant": m.discriminant().to_string(),
                         "j": format!("{jn}/{jd}"), "conductor": data.conductor().to_string(),
                         "conductor_data": data, "normalized": normalized});
        writeln!(out, "{rec}").unwrap();
    } else {
        writeln!(out, "model {m}").unwrap();
        writeln!(out, "discriminant {}", m.discriminant()).unwrap();
        writeln!(out, "j-invariant {jn}/{jd}").unwrap();
        writeln!(out, "conductor {}", data.conductor()).unwrap();
        for l in &data.local {
            writeln!(
                out,
                "  p = {}: {} f = {} v(disc_min) = {}",
                l.p, l.kodaira, l.conductor_exponent, l.min_disc_valuation
            )
            .unwrap();
        }
        match normalized {
            Some(Normalized::Frey { curve, shift, scale }) => {
                writeln!(out, "Frey form {curve} via X = {scale}^2 X' + {shift}").unwrap();
            }
            Some(Normalized::Twist(t)) => {
                writeln!(out, "twist by {} of {} (2-exponent {})", t.twist, t.partner, t.two_exponent).unwrap();
            }
            None => {}
        }
    }
    Ok((out, 0))
}

/// One corpus row.
#[derive(Debug, Clone)]
struct Row {
    coeffs: [Zint; 3],
    verdict: Verdict,
    micros: u128,
}

/// Sorted positive primitive triples up to `bound`. Signs and order do not
/// change a verdict, so these represent every triple in the box.
fn corpus_triples(bound: u64, rad_divides: Option<&Zint>) -> Result<Vec<[Zint; 3]>, String> {
    let allowed = match rad_divides {
        Some(m) => Some(rad(m).map_err(|e| e.to_string())?),
        None => None,
    };
    // rad(abc) | M exactly when each coefficient is an S-unit.
    let values: Vec<u64> = (1..=bound)
        .filter(|&v| allowed.as_ref().is_none_or(|s| crate::sunit::is_s_unit(&Zint::from(v), s)))
        .collect();
    let mut out = Vec::new();
    for (i, &a) in values.iter().enumerate() {
        for (j, &b) in values.iter().enumerate().skip(i) {
            let g = num_integer::gcd(a, b);
            for &c in &values[j..] {
                if num_integer::gcd(g, c) == 1 {
                    out.push([Zint::from(a), Zint::from(b), Zint::from(c)]);
                }
            }
        }
    }
    Ok(out)
}

fn read_corpus(path: &PathBuf) -> Result<Vec<[Zint; 3]>, String> {
    let file = std::fs::File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: Result<Vec<Zint>, String> = body.split_whitespace().map(parse_int).collect();
        let nums = nums.map_err(|e| format!("line {}: {e}", i + 1))?;
        let arr: [Zint; 3] = nums.try_into().map_err(|_| format!("line {}: expected three integers", i + 1))?;
        out.push(arr);
    }
    Ok(out)
}

pub fn cmd_corpus(
    cfg: &RunConfig,
    bound: Option<u64>,
    rad_divides: Option<String>,
    input: Option<PathBuf>,
    timing: bool,
) -> Outcome {
    let triples = match (bound, input) {
        (Some(b), None) => {
            let m = rad_divides.as_deref().map(parse_int).transpose()?;
            corpus_triples(b, m.as_ref())?
        }
        (None, Some(path)) => read_corpus(&path)?,
        _ => return Err("give exactly one of --bound or --input".into()),
    };
    let engine = EngineConfig { mode: cfg.mode, tripwire_exp_bound: None };
    let rows: Vec<Row> = triples
        .into_par_iter()
        .map(|coeffs| {
            let start = Instant::now();
            let verdict = check_af_coeffs(&coeffs, &engine);
            Row { coeffs, verdict, micros: start.elapsed().as_micros() }
        })
        .collect();
    let mut out = String::new();
    let mut counts = [0usize; VerdictKind::ALL.len()];
    for row in &rows {
        counts[VerdictKind::ALL.iter().position(|k| *k == row.verdict.kind).unwrap()] += 1;
    }
    if cfg.json {
        for row in &rows {
            let mut rec = json!({"schema": crate::SCHEMA_VERSION, "record": "corpus",
                                 "coefficients": row.coeffs.clone().map(|c| c.to_string()),
                                 "kind": row.verdict.kind, "chain": row.verdict.headline()});
            if timing {
                rec["micros"] = json!(row.micros as u64);
            }
            writeln!(out, "{rec}").unwrap();
        }
        let hist: serde_json::Map<String, serde_json::Value> = VerdictKind::ALL
            .iter()
            .zip(counts)
            .map(|(k, n)| (k.as_str().to_string(), json!(n)))
            .collect();
        writeln!(out, "{}", json!({"schema": crate::SCHEMA_VERSION, "record": "histogram", "mode": cfg.mode, "counts": hist})).unwrap();
    } else {
        out.push_str(if timing { "a\tb\tc\tkind\tchain\tmicros\n" } else { "a\tb\tc\tkind\tchain\n" });
        for row in &rows {
            let [a, b, c] = &row.coeffs;
            write!(out, "{a}\t{b}\t{c}\t{}\t{}", row.verdict.kind, row.verdict.headline()).unwrap();
            if timing {
                write!(out, "\t{}", row.micros).unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "# mode {} total {}", cfg.mode, rows.len()).unwrap();
        for (k, n) in VerdictKind::ALL.iter().zip(counts) {
            writeln!(out, "# {k}\t{n}").unwrap();
        }
    }
    Ok((out, 0))
}
