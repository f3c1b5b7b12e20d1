//! Stable JSON and CSV records for lattices and classes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classes::{GramMatrix, IwrLattice, SimilarityClass};
use crate::{Error, Result};

/// An integer that serializes as a JSON number when it fits 64 bits and as
/// a decimal string otherwise. Both forms deserialize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        JsonInt(v.clone())
    }
}

impl fmt::Display for JsonInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            serializer.serialize_i64(v)
        } else if let Some(v) = self.0.to_u64() {
            serializer.serialize_u64(v)
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        v.parse::<BigInt>().map(JsonInt).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(JsonIntVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetRecord {
    #[serde(rename = "M")]
    pub m: JsonInt,
    #[serde(rename = "D")]
    pub d: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub p: JsonInt,
    pub r: JsonInt,
    pub q: JsonInt,
    #[serde(rename = "D")]
    pub d: JsonInt,
}

impl From<&SimilarityClass> for ClassRecord {
    fn from(c: &SimilarityClass) -> Self {
        ClassRecord {
            p: c.p().into(),
            r: c.r().into(),
            q: c.q().into(),
            d: c.d().into(),
        }
    }
}

impl ClassRecord {
    pub fn to_class(&self) -> Result<SimilarityClass> {
        SimilarityClass::new(self.p.0.clone(), self.r.0.clone(), self.q.0.clone(), self.d.0.clone())
    }
}

/// One lattice `√(k/q)·Ω_D(p, q)` with its derived data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub p: JsonInt,
    pub r: JsonInt,
    pub q: JsonInt,
    #[serde(rename = "D")]
    pub d: JsonInt,
    pub k: JsonInt,
    pub min_norm: JsonInt,
    pub det: DetRecord,
    /// `"p/q"`, unreduced only when `p = 0`.
    pub cos_theta: String,
    pub gram: [[JsonInt; 2]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packing_density: Option<f64>,
}

pub const LATTICE_COLUMNS: [&str; 15] = [
    "p",
    "r",
    "q",
    "D",
    "k",
    "min_norm",
    "det_M",
    "det_D",
    "cos_theta",
    "gram_11",
    "gram_12",
    "gram_21",
    "gram_22",
    "snr_db",
    "packing_density",
];

impl From<&IwrLattice> for LatticeRecord {
    fn from(lat: &IwrLattice) -> Self {
        let class = lat.class();
        let det = lat.determinant();
        let [[a, b], [b2, c]] = lat.gram().rows();
        LatticeRecord {
            p: class.p().into(),
            r: class.r().into(),
            q: class.q().into(),
            d: class.d().into(),
            k: lat.k().into(),
            min_norm: lat.minimum().into(),
            det: DetRecord {
                m: det.m().into(),
                d: det.d().into(),
            },
            cos_theta: format!("{}/{}", class.p(), class.q()),
            gram: [[a.into(), b.into()], [b2.into(), c.into()]],
            snr_db: None,
            packing_density: None,
        }
    }
}

impl LatticeRecord {
    /// Rebuilds the lattice and checks every derived field against it.
    pub fn to_lattice(&self) -> Result<IwrLattice> {
        let class = ClassRecord {
            p: self.p.clone(),
            r: self.r.clone(),
            q: self.q.clone(),
            d: self.d.clone(),
        }
        .to_class()?;
        let lat = IwrLattice::new(class, self.k.0.clone())?;
        let expected = LatticeRecord {
            snr_db: self.snr_db,
            packing_density: self.packing_density,
            ..LatticeRecord::from(&lat)
        };
        if &expected != self {
            return Err(Error::Invariant(format!(
                "record fields are inconsistent with {lat}"
            )));
        }
        let g = &self.gram;
        GramMatrix::new(g[0][0].0.clone(), g[0][1].0.clone(), g[1][1].0.clone())?;
        Ok(lat)
    }

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.p.to_string(),
            self.r.to_string(),
            self.q.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.min_norm.to_string(),
            self.det.m.to_string(),
            self.det.d.to_string(),
            self.cos_theta.clone(),
            self.gram[0][0].to_string(),
            self.gram[0][1].to_string(),
            self.gram[1][0].to_string(),
            self.gram[1][1].to_string(),
            opt(self.snr_db),
            opt(self.packing_density),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_int_forms() {
        let small = serde_json::to_string(&JsonInt(BigInt::from(-61))).unwrap();
        assert_eq!(small, "-61");
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let text = serde_json::to_string(&JsonInt(big.clone())).unwrap();
        assert_eq!(text, "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::from_str::<JsonInt>(&text).unwrap().0, big);
        assert_eq!(serde_json::from_str::<JsonInt>("7").unwrap().0, BigInt::from(7));
        assert!(serde_json::from_str::<JsonInt>("7.5").is_err());
        assert!(serde_json::from_str::<JsonInt>("\"x\"").is_err());
    }

    #[test]
    fn lattice_record_round_trip() {
        let lat = IwrLattice::new(SimilarityClass::new(29, 24, 61, 5).unwrap(), 1).unwrap();
        let rec = LatticeRecord::from(&lat);
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["min_norm"], 61);
        assert_eq!(json["det"]["M"], 24);
        assert_eq!(json["cos_theta"], "29/61");
        assert_eq!(json["gram"][0][1], 29);
        assert!(json.get("snr_db").is_none());
        let back: LatticeRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back.to_lattice().unwrap(), lat);
        assert_eq!(rec.csv_row().len(), LATTICE_COLUMNS.len());
    }

    #[test]
    fn inconsistent_record_rejected() {
        let lat = IwrLattice::new(SimilarityClass::new(1, 1, 2, 3).unwrap(), 2).unwrap();
        let mut rec = LatticeRecord::from(&lat);
        rec.min_norm = JsonInt(BigInt::from(5));
        assert!(rec.to_lattice().is_err());
    }
}
