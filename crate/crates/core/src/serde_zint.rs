//! Decimal-string encoding of big integers for the structured output format.

use serde::{Deserialize, Deserializer, Serializer};

use crate::ntkernel::Zint;

pub fn serialize<S: Serializer>(v: &Zint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Zint, D::Error> {
    let s = String::deserialize(d)?;
    s.parse::<Zint>().map_err(serde::de::Error::custom)
}

pub mod triple {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Zint; 3], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Zint; 3], D::Error> {
        let v = <[String; 3]>::deserialize(d)?;
        let mut out: [Zint; 3] = Default::default();
        for (slot, s) in out.iter_mut().zip(v.iter()) {
            *slot = s.parse::<Zint>().map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

pub mod quintuple {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Zint; 5], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Zint; 5], D::Error> {
        let v = <[String; 5]>::deserialize(d)?;
        let mut out: [Zint; 5] = Default::default();
        for (slot, s) in out.iter_mut().zip(v.iter()) {
            *slot = s.parse::<Zint>().map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}
