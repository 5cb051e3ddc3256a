//! JSON file formats.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::arith::{RatVector, Rational};
use crate::error::Result;
use crate::geometry::{Constraint, ConstraintSet, Hypothesis, LabeledPoint};

/// Serde adapter writing big integers as decimal strings.
pub mod bigint_text {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(BigInt::from(n)),
            Repr::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

/// Serde adapter for lists of big integers.
pub mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::bigint_text")] BigInt);

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| Item(x.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<Item>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintRecord {
    #[serde(with = "bigint_list")]
    pub a: Vec<BigInt>,
    #[serde(with = "bigint_text")]
    pub w: BigInt,
}

/// `instance.json`: a constraint multiset, optionally with the point it
/// was generated around.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub d: usize,
    #[serde(rename = "X", with = "bigint_text")]
    pub bound: BigInt,
    pub constraints: Vec<ConstraintRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<RatVector>,
}

impl InstanceFile {
    pub fn new(s: &ConstraintSet, hidden: Option<RatVector>) -> Self {
        InstanceFile {
            d: s.d(),
            bound: s.bound().clone(),
            constraints: s.iter().map(|c| ConstraintRecord { a: c.a().to_vec(), w: c.w().clone() }).collect(),
            hidden,
        }
    }

    pub fn to_set(&self) -> Result<ConstraintSet> {
        let items = self
            .constraints
            .iter()
            .map(|c| Constraint::new(c.a.clone(), c.w.clone()))
            .collect::<Result<Vec<_>>>()?;
        ConstraintSet::new(self.d, self.bound.clone(), items)
    }
}

/// `labeled.json`: labeled grid points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledFile {
    pub d: usize,
    #[serde(rename = "X", with = "bigint_text")]
    pub bound: BigInt,
    pub points: Vec<LabeledPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<Hypothesis>,
}

/// `model.json`: a learned halfspace and its fit on the training data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub a: RatVector,
    pub w: i64,
    pub val: usize,
    pub empirical_error: Rational,
}

/// Input of the `audit` subcommand: two neighboring quality vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditInput {
    pub eps: f64,
    pub q: Vec<Rational>,
    pub q2: Vec<Rational>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
