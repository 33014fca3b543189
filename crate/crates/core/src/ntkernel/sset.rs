use std::fmt;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::primality::primality;
use super::{NtError, Primality, Zint};

/// A finite set of primes, identified with its square-free product.
#[derive(Debug, Clone)]
pub struct SSet {
    primes: Vec<Zint>,
    product: Zint,
    probabilistic: bool,
}

impl SSet {
    pub fn empty() -> Self {
        SSet { primes: Vec::new(), product: Zint::one(), probabilistic: false }
    }

    /// Builds a set from arbitrary-order input; rejects composites.
    pub fn new<I: IntoIterator<Item = Zint>>(primes: I) -> Result<Self, NtError> {
        let mut v: Vec<Zint> = primes.into_iter().collect();
        let mut probabilistic = false;
        for p in &v {
            match primality(p) {
                Primality::Composite => return Err(NtError::NotPrime(p.clone())),
                Primality::ProbablePrime => probabilistic = true,
                Primality::Prime => {}
            }
        }
        v.sort();
        v.dedup();
        Ok(Self::from_trusted(v, probabilistic))
    }

    pub fn from_u64s(primes: &[u64]) -> Result<Self, NtError> {
        Self::new(primes.iter().map(|&p| Zint::from(p)))
    }

    /// `primes` must already be sorted, distinct and prime.
    pub(crate) fn from_trusted(primes: Vec<Zint>, probabilistic: bool) -> Self {
        let product = primes.iter().fold(Zint::one(), |acc, p| acc * p);
        SSet { primes, product, probabilistic }
    }

    pub fn primes(&self) -> &[Zint] {
        &self.primes
    }

    pub fn product(&self) -> &Zint {
        &self.product
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn probabilistic(&self) -> bool {
        self.probabilistic
    }

    pub fn contains(&self, p: &Zint) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    pub fn contains_two(&self) -> bool {
        self.primes.first().is_some_and(|p| p == &Zint::from(2))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Zint> {
        self.primes.iter()
    }

    /// Odd members, ascending.
    pub fn odd_primes(&self) -> impl Iterator<Item = &Zint> {
        self.primes.iter().filter(|p| *p != &Zint::from(2))
    }

    pub fn without_two(&self) -> Self {
        if !self.contains_two() {
            return self.clone();
        }
        Self::from_trusted(self.primes[1..].to_vec(), self.probabilistic)
    }

    pub fn with_two(&self) -> Self {
        if self.contains_two() {
            return self.clone();
        }
        let mut v = Vec::with_capacity(self.primes.len() + 1);
        v.push(Zint::from(2));
        v.extend(self.primes.iter().cloned());
        Self::from_trusted(v, self.probabilistic)
    }

    pub fn union(&self, other: &SSet) -> Self {
        let mut v: Vec<Zint> = self.primes.iter().chain(other.primes.iter()).cloned().collect();
        v.sort();
        v.dedup();
        Self::from_trusted(v, self.probabilistic || other.probabilistic)
    }
}

impl PartialEq for SSet {
    fn eq(&self, other: &Self) -> bool {
        self.primes == other.primes
    }
}

impl Eq for SSet {}

impl std::hash::Hash for SSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.primes.hash(state);
    }
}

impl PartialOrd for SSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.primes.cmp(&other.primes)
    }
}

impl fmt::Display for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let parsed: Result<Vec<Zint>, _> = v.iter().map(|s| s.parse::<Zint>()).collect();
        let parsed = parsed.map_err(serde::de::Error::custom)?;
        SSet::new(parsed).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_sorts_and_validates() {
        let s = SSet::from_u64s(&[13, 7, 13]).unwrap();
        assert_eq!(s.to_string(), "{7,13}");
        assert_eq!(s.product(), &Zint::from(91));
        assert_eq!(SSet::from_u64s(&[15]), Err(NtError::NotPrime(Zint::from(15))));
        assert_eq!(SSet::empty().product(), &Zint::from(1));
    }

    #[test]
    fn two_handling() {
        let s = SSet::from_u64s(&[5, 3]).unwrap();
        assert!(!s.contains_two());
        let t = s.with_two();
        assert_eq!(t.to_string(), "{2,3,5}");
        assert_eq!(t.without_two(), s);
        assert_eq!(t.odd_primes().count(), 2);
    }
}
