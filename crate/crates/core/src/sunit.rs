//! Proper points of S-unit equations `aX + bY + cZ = 0` and the bounded
//! exhaustive enumerator used as the oracle for every certificate.
//!
//! A point is proper with respect to `S` when its primitive representative
//! has `xyz != 0`, `rad(xyz) = S` exactly, and `ax, by, cz` pairwise coprime.
//! Pairwise coprimality means every prime of `S` lives in exactly one
//! coordinate, so the enumerator walks assignments of primes to coordinates,
//! fixes exponent vectors for two coordinates and solves for the third.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ntkernel::{gcd3, pow, strip, SSet, Zint};
use crate::terns::ProjectivePoint;

/// Default ceiling on enumerated candidates.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SunitError {
    #[error("line coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("line coefficients {0}, {1} are not coprime")]
    NotCoprime(Zint, Zint),
    #[error("exponent bound must be at least 1")]
    BadBound,
    #[error("search needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

/// `aX + bY + cZ = 0` with nonzero pairwise coprime coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineEq {
    #[serde(with = "crate::serde_zint::triple")]
    coeffs: [Zint; 3],
}

impl LineEq {
    pub fn new(a: Zint, b: Zint, c: Zint) -> Result<Self, SunitError> {
        let coeffs = [a, b, c];
        if coeffs.iter().any(Zint::is_zero) {
            return Err(SunitError::ZeroCoefficient);
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if !coeffs[i].gcd(&coeffs[j]).is_one() {
                return Err(SunitError::NotCoprime(coeffs[i].clone(), coeffs[j].clone()));
            }
        }
        Ok(LineEq { coeffs })
    }

    /// `2^r X + Y + Z`.
    pub fn two_power(r: u32) -> Self {
        LineEq {
            coeffs: [pow(&Zint::from(2), r as u64), Zint::one(), Zint::one()],
        }
    }

    pub fn coeffs(&self) -> &[Zint; 3] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &Zint, y: &Zint, z: &Zint) -> Zint {
        &self.coeffs[0] * x + &self.coeffs[1] * y + &self.coeffs[2] * z
    }
}

impl fmt::Display for LineEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}X + {}Y + {}Z", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProperPoint {
    pub point: ProjectivePoint,
    pub line: LineEq,
    pub s: SSet,
}

impl PartialOrd for LineEq {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LineEq {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Display for ProperPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.point.coords;
        write!(f, "({x}, {y}, {z})")
    }
}

/// `true` iff `|n|` is an `s`-unit divisible by every prime of `s`.
pub fn has_exact_radical(n: &Zint, s: &SSet) -> bool {
    if n.is_zero() {
        return false;
    }
    let mut m = n.abs();
    for p in s.iter() {
        let (rest, e) = strip(&m, p);
        if e == 0 {
            return false;
        }
        m = rest;
    }
    m.is_one()
}

/// `true` iff `|n|` is a (possibly trivial) `s`-unit.
pub fn is_s_unit(n: &Zint, s: &SSet) -> bool {
    if n.is_zero() {
        return false;
    }
    let mut m = n.abs();
    for p in s.iter() {
        m = strip(&m, p).0;
    }
    m.is_one()
}

/// Checks the proper-point conditions on the primitive rescaling of
/// `(x, y, z)`. Non-points and the zero triple give `false`.
pub fn is_proper(x: &Zint, y: &Zint, z: &Zint, line: &LineEq, s: &SSet) -> bool {
    let g = gcd3(x, y, z);
    if g.is_zero() {
        return false;
    }
    let (x, y, z) = (x / &g, y / &g, z / &g);
    if x.is_zero() || y.is_zero() || z.is_zero() {
        return false;
    }
    if !line.evaluate(&x, &y, &z).is_zero() {
        return false;
    }
    if !has_exact_radical(&(&x * &y * &z), s) {
        return false;
    }
    let [a, b, c] = line.coeffs();
    let (ax, by, cz) = (a * &x, b * &y, c * &z);
    ax.gcd(&by).is_one() && by.gcd(&cz).is_one() && ax.gcd(&cz).is_one()
}

/// Every proper point whose coordinates are `± prod p^e` over `s` with each
/// `e <= exp_bound`, canonicalized and sorted.
pub fn enumerate_proper_points(
    line: &LineEq,
    s: &SSet,
    exp_bound: u32,
) -> Result<Vec<ProperPoint>, SunitError> {
    enumerate_with_budget(line, s, exp_bound, DEFAULT_NODE_BUDGET).map(|r| r.points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub points: Vec<ProperPoint>,
    /// Number of `(x, y)` candidates examined.
    pub nodes: u64,
}

/// Slot assignments of the primes of `s` compatible with coprimality against
/// the line coefficients: a prime dividing a coefficient must sit in that
/// coefficient's coordinate.
fn assignments(line: &LineEq, s: &SSet) -> Vec<Vec<usize>> {
    let options: Vec<Vec<usize>> = s
        .iter()
        .map(|p| {
            match (0..3).find(|&i| line.coeffs[i].is_multiple_of(p)) {
                Some(i) => vec![i],
                None => vec![0, 1, 2],
            }
        })
        .collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for opts in &options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&slot| {
                    let mut v = prefix.clone();
                    v.push(slot);
                    v
                })
            })
            .collect();
    }
    out
}

fn candidate_count(assignment: &[usize], exp_bound: u32) -> u64 {
    let free = assignment.iter().filter(|&&slot| slot != 2).count() as u32;
    (exp_bound as u64).saturating_pow(free).saturating_mul(2)
}

/// All products `prod p_i^{e_i}` with `1 <= e_i <= bound`.
fn unit_products(primes: &[&Zint], bound: u32) -> Vec<Zint> {
    let mut acc = vec![Zint::one()];
    for p in primes {
        let powers: Vec<Zint> = (1..=bound).map(|e| pow(p, e as u64)).collect();
        acc = acc
            .iter()
            .flat_map(|base| powers.iter().map(move |pw| base * pw))
            .collect();
    }
    acc
}

/// `Some(())` if `|z|` is exactly `prod p^e` over `primes` with `1 <= e <= bound`.
fn matches_shape(z: &Zint, primes: &[&Zint], bound: u32) -> bool {
    let mut m = z.abs();
    for p in primes {
        let (rest, e) = strip(&m, p);
        if e == 0 || e > bound as u64 {
            return false;
        }
        m = rest;
    }
    m.is_one()
}

pub fn enumerate_with_budget(
    line: &LineEq,
    s: &SSet,
    exp_bound: u32,
    budget: u64,
) -> Result<Enumeration, SunitError> {
    if exp_bound == 0 {
        return Err(SunitError::BadBound);
    }
    let parts = assignments(line, s);
    let needed = parts
        .iter()
        .map(|a| candidate_count(a, exp_bound))
        .fold(0u64, u64::saturating_add);
    if needed > budget {
        return Err(SunitError::BudgetExceeded { needed, budget });
    }
    let [a, b, c] = line.coeffs();
    let mut points: Vec<ProperPoint> = parts
        .par_iter()
        .flat_map_iter(|assignment| {
            let slot_primes = |slot: usize| -> Vec<&Zint> {
                s.iter()
                    .zip(assignment)
                    .filter(|(_, &k)| k == slot)
                    .map(|(p, _)| p)
                    .collect()
            };
            let (xp, yp, zp) = (slot_primes(0), slot_primes(1), slot_primes(2));
            let xs = unit_products(&xp, exp_bound);
            let ys = unit_products(&yp, exp_bound);
            let mut found = Vec::new();
            for x in &xs {
                let ax = a * x;
                for y0 in &ys {
                    for y in [y0.clone(), -y0.clone()] {
                        let num = -(&ax + b * &y);
                        let (z, rem) = num.div_rem(c);
                        if !rem.is_zero() || z.is_zero() || !matches_shape(&z, &zp, exp_bound) {
                            continue;
                        }
                        if is_proper(x, &y, &z, line, s) {
                            let point = ProjectivePoint::canonical(x.clone(), y, z)
                                .expect("nonzero point");
                            found.push(ProperPoint { point, line: line.clone(), s: s.clone() });
                        }
                    }
                }
            }
            found
        })
        .collect();
    points.sort();
    points.dedup();
    Ok(Enumeration { points, nodes: needed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntkernel::zint;

    fn set(v: &[u64]) -> SSet {
        SSet::from_u64s(v).unwrap()
    }

    fn coords(points: &[ProperPoint]) -> Vec<[i64; 3]> {
        points
            .iter()
            .map(|p| p.point.coords.clone().map(|c| i64::try_from(c).unwrap()))
            .collect()
    }

    #[test]
    fn proper_point_examples() {
        let l16 = LineEq::two_power(4);
        assert!(is_proper(&zint(-1), &zint(1), &zint(15), &l16, &set(&[3, 5])));
        assert!(!is_proper(&zint(1), &zint(-1), &zint(0), &l16, &set(&[3])));
        assert!(is_proper(&zint(3), &zint(1), &zint(-49), &l16, &set(&[3, 7])));
        // Exact radical: S = {3, 5, 7} is not rad(-15).
        assert!(!is_proper(&zint(-1), &zint(1), &zint(15), &l16, &set(&[3, 5, 7])));
        // Non-primitive representatives are rescaled first.
        assert!(is_proper(&zint(-2), &zint(2), &zint(30), &l16, &set(&[3, 5])));
        assert!(!is_proper(&zint(0), &zint(0), &zint(0), &l16, &set(&[])));
    }

    #[test]
    fn coprimality_is_enforced() {
        // 16*1 - 8 - 8 = 0 fails pairwise coprimality.
        let l16 = LineEq::two_power(4);
        assert!(!is_proper(&zint(1), &zint(-8), &zint(-8), &l16, &set(&[2])));
        assert!(matches!(
            LineEq::new(zint(6), zint(4), zint(1)),
            Err(SunitError::NotCoprime(_, _))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let l16 = LineEq::two_power(4);
        let pts = enumerate_proper_points(&l16, &set(&[3, 5]), 5).unwrap();
        assert!(coords(&pts).contains(&[1, -1, -15]));
        assert!(enumerate_proper_points(&l16, &set(&[13]), 10).unwrap().is_empty());

        let l2 = LineEq::two_power(1);
        let pts = enumerate_proper_points(&l2, &set(&[]), 3).unwrap();
        assert_eq!(coords(&pts), vec![[1, -1, -1]]);
        assert!(enumerate_proper_points(&l2, &set(&[2]), 3).unwrap().is_empty());
    }

    #[test]
    fn points_with_a_unit_coordinate_are_found() {
        let l16 = LineEq::two_power(4);
        let pts = enumerate_proper_points(&l16, &set(&[3, 7]), 5).unwrap();
        assert!(coords(&pts).contains(&[3, 1, -49]));
        for p in &pts {
            let [x, y, z] = &p.point.coords;
            assert!(is_proper(x, y, z, &l16, &p.s));
            assert!(x.is_positive());
        }
    }

    #[test]
    fn budget_is_honored() {
        let l16 = LineEq::two_power(4);
        let err = enumerate_with_budget(&l16, &set(&[3, 5, 7]), 8, 100).unwrap_err();
        assert!(matches!(err, SunitError::BudgetExceeded { budget: 100, .. }));
        assert_eq!(enumerate_proper_points(&l16, &set(&[3]), 0), Err(SunitError::BadBound));
    }

    #[test]
    fn coefficient_primes_are_pinned_to_their_coordinate() {
        // 3X + Y + Z over {2, 3}: 3 must divide x.
        let line = LineEq::new(zint(3), zint(1), zint(1)).unwrap();
        let pts = enumerate_proper_points(&line, &set(&[2, 3]), 4).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(p.point.x().is_multiple_of(&zint(3)));
        }
    }
}
