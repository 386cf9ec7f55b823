//! Serde helpers writing `f64` as 17-significant-digit JSON literals, so that
//! reports are byte-stable and round-trip every double exactly.
//!
//! Non-finite values are written as `null`. Use with `#[serde(with = "num17")]`,
//! or `num17::vec`, `num17::opt`, `num17::map` for containers.

use serde::ser::SerializeSeq;
use serde::Serializer;
use serde_json::value::RawValue;

/// Formats a finite `f64` as `d.dddddddddddddddde±x`.
pub fn format(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

struct Fixed(f64);

impl serde::Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match format(self.0) {
            Some(text) => RawValue::from_string(text)
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            None => s.serialize_none(),
        }
    }
}

pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&Fixed(*x), s)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&Fixed(*x))?;
        }
        seq.end()
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => super::serialize(x, s),
            None => s.serialize_none(),
        }
    }
}

/// String-keyed maps with `f64` values.
pub mod map {
    use super::*;
    use serde::ser::SerializeMap;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(xs: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(xs.len()))?;
        for (k, x) in xs {
            map.serialize_entry(k, &Fixed(*x))?;
        }
        map.end()
    }
}

/// Complex numbers as `[re, im]` pairs.
pub mod complex_vec {
    use super::*;
    use num_complex::Complex64;

    pub fn serialize<S: Serializer>(xs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for z in xs {
            seq.serialize_element(&[Fixed(z.re), Fixed(z.im)])?;
        }
        seq.end()
    }
}
