//! Tate's algorithm over `Z_p`: Kodaira symbol, conductor exponent and
//! minimal discriminant valuation at a single prime.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CurveModel;
use crate::ntkernel::{valuation_unchecked, Zint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    #[serde(with = "crate::serde_zint")]
    pub p: Zint,
    pub kodaira: Kodaira,
    pub conductor_exponent: u32,
    pub min_disc_valuation: u32,
    /// The model had to be rescaled at `p` to become minimal.
    pub rescaled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct InternalError(pub String);

fn v(n: &Zint, p: &Zint) -> u64 {
    valuation_unchecked(n, p)
}

fn divides(m: &Zint, n: &Zint) -> bool {
    n.is_multiple_of(m)
}

fn modp(n: &Zint, p: &Zint) -> Zint {
    n.mod_floor(p)
}

fn inv_mod(a: &Zint, p: &Zint) -> Option<Zint> {
    let e = a.mod_floor(p).extended_gcd(p);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(p))
    } else {
        None
    }
}

/// Long Weierstrass coefficients mutated in place by coordinate changes.
#[derive(Debug, Clone)]
struct Work {
    a1: Zint,
    a2: Zint,
    a3: Zint,
    a4: Zint,
    a6: Zint,
}

impl Work {
    fn from_model(m: &CurveModel) -> Self {
        let [a1, a2, a3, a4, a6] = m.a.clone();
        Work { a1, a2, a3, a4, a6 }
    }

    fn model(&self) -> CurveModel {
        CurveModel { a: [self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone()] }
    }

    /// `x = x' + r`, `y = y' + s x' + t`.
    fn rst(&mut self, r: &Zint, s: &Zint, t: &Zint) {
        let Work { a1, a2, a3, a4, a6 } = self.clone();
        self.a1 = &a1 + 2 * s;
        self.a2 = &a2 - s * &a1 + 3 * r - s * s;
        self.a3 = &a3 + r * &a1 + 2 * t;
        self.a4 = &a4 - s * &a3 + 2 * r * &a2 - (t + r * s) * &a1 + 3 * r * r - 2 * s * t;
        self.a6 = &a6 + r * &a4 + r * r * &a2 + r * r * r - t * &a3 - t * t - r * t * &a1;
    }

    /// Divides `a_i` by `p^i`.
    fn scale_down(&mut self, p: &Zint) -> Result<(), InternalError> {
        let a1 = exact_div(&self.a1, p, 1)?;
        let a2 = exact_div(&self.a2, p, 2)?;
        let a3 = exact_div(&self.a3, p, 3)?;
        let a4 = exact_div(&self.a4, p, 4)?;
        let a6 = exact_div(&self.a6, p, 6)?;
        *self = Work { a1, a2, a3, a4, a6 };
        Ok(())
    }
}

fn exact_div(n: &Zint, p: &Zint, e: u32) -> Result<Zint, InternalError> {
    let d = num_traits::pow(p.clone(), e as usize);
    if !divides(&d, n) {
        return Err(InternalError(format!("{n} not divisible by {p}^{e}")));
    }
    Ok(n / d)
}

/// Singular point of the reduction modulo `p`, lifted to `0 <= r, t < p`.
fn singular_point(w: &Work, p: &Zint) -> Result<(Zint, Zint), InternalError> {
    let m = w.model();
    let [b2, b4, b6, _] = m.b_invariants();
    let [c4, c6] = m.c_invariants();
    let ok = |r: &Zint, t: &Zint| {
        let mut c = w.clone();
        c.rst(r, &Zint::zero(), t);
        divides(p, &c.a3) && divides(p, &c.a4) && divides(p, &c.a6)
    };
    let two = Zint::from(2);
    let three = Zint::from(3);
    let guess = if *p == two {
        if divides(p, &b2) {
            let r = modp(&w.a4, p);
            let t = modp(&(&r * (1 + &w.a2 + &w.a4) + &w.a6), p);
            (r, t)
        } else {
            let r = modp(&w.a3, p);
            let t = modp(&(&r + &w.a4), p);
            (r, t)
        }
    } else if *p == three {
        let r = if divides(p, &b2) {
            modp(&-&b6, p)
        } else {
            modp(&(-inv_mod(&b2, p).unwrap_or_default() * &b4), p)
        };
        let t = modp(&(&w.a1 * &r + &w.a3), p);
        (r, t)
    } else {
        let r = if divides(p, &c4) {
            -inv_mod(&Zint::from(12), p).unwrap_or_default() * &b2
        } else {
            -inv_mod(&(12 * &c4), p).unwrap_or_default() * (&c6 + &b2 * &c4)
        };
        let r = modp(&r, p);
        let t = modp(&(-inv_mod(&two, p).unwrap_or_default() * (&w.a1 * &r + &w.a3)), p);
        (r, t)
    };
    if ok(&guess.0, &guess.1) {
        return Ok(guess);
    }
    // Exhaustive fallback for small residue fields.
    if let Some(pp) = p.to_u64().filter(|&pp| pp <= 500) {
        for r in 0..pp {
            for t in 0..pp {
                let (r, t) = (Zint::from(r), Zint::from(t));
                if ok(&r, &t) {
                    return Ok((r, t));
                }
            }
        }
    }
    Err(InternalError(format!("no singular point found modulo {p}")))
}

/// Root of multiplicity `mult` of `T^3 + bT^2 + cT + d` modulo `p`.
fn cubic_root(b: &Zint, c: &Zint, d: &Zint, p: &Zint, mult: u32) -> Result<Zint, InternalError> {
    let f = |t: &Zint| modp(&(t * t * t + b * t * t + c * t + d), p);
    let f1 = |t: &Zint| modp(&(3 * t * t + 2 * b * t + c), p);
    let f2 = |t: &Zint| modp(&(3 * t + b), p);
    let is_root = |t: &Zint| {
        f(t).is_zero() && f1(t).is_zero() && (mult < 3 || f2(t).is_zero())
    };
    let two = Zint::from(2);
    let three = Zint::from(3);
    let guess = if mult == 3 {
        if *p == three {
            modp(&-d, p)
        } else {
            modp(&(-b * inv_mod(&three, p).unwrap_or_default()), p)
        }
    } else if *p == two {
        modp(c, p)
    } else if *p == three {
        modp(&(b * c), p)
    } else {
        let x = 3 * c - b * b;
        modp(&((b * c - 9 * d) * inv_mod(&(2 * x), p).unwrap_or_default()), p)
    };
    if is_root(&guess) {
        return Ok(guess);
    }
    if let Some(pp) = p.to_u64().filter(|&pp| pp <= 100_000) {
        for t in 0..pp {
            let t = Zint::from(t);
            if is_root(&t) {
                return Ok(t);
            }
        }
    }
    Err(InternalError(format!("no root of multiplicity {mult} modulo {p}")))
}

/// Tate's algorithm at the prime `p`.
pub(crate) fn tate_local(model: &CurveModel, p: &Zint) -> Result<LocalData, InternalError> {
    let mut w = Work::from_model(model);
    let two = Zint::from(2);
    let half = if *p == two { Zint::zero() } else { (p + 1u32) / 2u32 };
    let p2 = p * p;
    let p3 = &p2 * p;
    let p4 = &p3 * p;
    let p6 = &p3 * &p3;
    let mut rescaled = false;
    loop {
        let m = w.model();
        let disc = m.discriminant();
        if disc.is_zero() {
            return Err(InternalError("singular model".into()));
        }
        let vd = v(&disc, p) as u32;
        let done = |kodaira: Kodaira, fp: u32| LocalData {
            p: p.clone(),
            kodaira,
            conductor_exponent: fp,
            min_disc_valuation: vd,
            rescaled,
        };
        if vd == 0 {
            return Ok(done(Kodaira::I0, 0));
        }
        let (r, t) = singular_point(&w, p)?;
        w.rst(&r, &Zint::zero(), &t);
        let m = w.model();
        let [_, _, b6, b8] = m.b_invariants();
        let [c4, _] = m.c_invariants();
        if !divides(p, &c4) {
            return Ok(done(Kodaira::In(vd), 1));
        }
        if !divides(&p2, &w.a6) {
            return Ok(done(Kodaira::II, vd));
        }
        if !divides(&p3, &b8) {
            return Ok(done(Kodaira::III, vd - 1));
        }
        if !divides(&p3, &b6) {
            return Ok(done(Kodaira::IV, vd - 2));
        }
        let (s, t) = if *p == two {
            (modp(&w.a2, p), p * modp(&(&w.a6 / &p2), p))
        } else {
            (-&w.a1 * &half, -&w.a3 * &half)
        };
        w.rst(&Zint::zero(), &s, &t);
        if !(divides(p, &w.a1) && divides(p, &w.a2) && divides(&p2, &w.a3) && divides(&p2, &w.a4) && divides(&p3, &w.a6)) {
            return Err(InternalError(format!("could not reach the I0* shape at {p}")));
        }
        let b = &w.a2 / p;
        let c = &w.a4 / &p2;
        let d = &w.a6 / &p3;
        let disc_cubic = 27 * &d * &d - &b * &b * &c * &c + 4 * &b * &b * &b * &d - 18 * &b * &c * &d + 4 * &c * &c * &c;
        let x = 3 * &c - &b * &b;
        if !divides(p, &disc_cubic) {
            return Ok(done(Kodaira::I0Star, vd - 4));
        }
        if !divides(p, &x) {
            // Double root: the I_m* chain.
            let root = cubic_root(&b, &c, &d, p, 2)?;
            w.rst(&(p * root), &Zint::zero(), &Zint::zero());
            let (mut ix, mut iy) = (3u32, 3u32);
            let (mut mx, mut my) = (p2.clone(), p2.clone());
            loop {
                let a3t = &w.a3 / &my;
                let a6t = &w.a6 / (&mx * &my);
                if !divides(p, &(&a3t * &a3t + 4 * &a6t)) {
                    break;
                }
                let tau = if *p == two { modp(&a6t, p) } else { modp(&(-&a3t * &half), p) };
                w.rst(&Zint::zero(), &Zint::zero(), &(&my * tau));
                my *= p;
                iy += 1;
                let a2t = &w.a2 / p;
                let a4t = &w.a4 / (p * &mx);
                let a6t = &w.a6 / (&mx * &my);
                if !divides(p, &(&a4t * &a4t - 4 * &a6t * &a2t)) {
                    break;
                }
                let rho = if *p == two {
                    modp(&(&a6t * &a2t), p)
                } else {
                    modp(&(-&a4t * inv_mod(&(2 * &a2t), p).unwrap_or_default()), p)
                };
                w.rst(&(&mx * rho), &Zint::zero(), &Zint::zero());
                mx *= p;
                ix += 1;
            }
            let m_star = ix + iy - 5;
            return Ok(done(Kodaira::InStar(m_star), vd + 1 - ix - iy));
        }
        // Triple root.
        let root = cubic_root(&b, &c, &d, p, 3)?;
        w.rst(&(p * root), &Zint::zero(), &Zint::zero());
        let a3t = &w.a3 / &p2;
        let a6t = &w.a6 / &p4;
        if !divides(p, &(&a3t * &a3t + 4 * &a6t)) {
            return Ok(done(Kodaira::IVStar, vd - 6));
        }
        let tau = if *p == two { modp(&a6t, p) } else { modp(&(-&a3t * &half), p) };
        w.rst(&Zint::zero(), &Zint::zero(), &(&p2 * tau));
        if !divides(&p4, &w.a4) {
            return Ok(done(Kodaira::IIIStar, vd - 7));
        }
        if !divides(&p6, &w.a6) {
            return Ok(done(Kodaira::IIStar, vd - 8));
        }
        w.scale_down(p)?;
        rescaled = true;
    }
}
