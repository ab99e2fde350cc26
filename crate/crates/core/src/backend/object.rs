// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parenthesized tensor words over simple objects and their duals.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// A simple object `V_n` (dimension `n + 1`) or its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    /// Highest weight of the simple object.
    pub label: u32,
    /// Whether this is the dual object.
    pub dual: bool,
}

impl Gen {
    /// The simple object `V_n`.
    pub fn simple(label: u32) -> Self {
        Gen { label, dual: false }
    }

    /// The dual of `V_n`.
    pub fn dual_of(label: u32) -> Self {
        Gen { label, dual: true }
    }

    /// The fundamental representation.
    pub const V: Gen = Gen { label: 1, dual: false };

    /// Dual of the fundamental representation.
    pub const VD: Gen = Gen { label: 1, dual: true };

    /// Dimension.
    pub fn dim(self) -> usize {
        self.label as usize + 1
    }

    /// The dual generator.
    pub fn dualize(self) -> Self {
        Gen { label: self.label, dual: !self.dual }
    }
}

/// Name of a simple label: `unit`, `V`, `adjoint`, or `V<n>`.
pub fn label_name(n: u32) -> String {
    match n {
        0 => "unit".into(),
        1 => "V".into(),
        2 => "adjoint".into(),
        n => format!("V{n}"),
    }
}

/// Parse a simple label name.
pub fn parse_label(s: &str) -> Result<u32> {
    match s {
        "unit" | "V0" => Ok(0),
        "V" | "V1" => Ok(1),
        "adjoint" | "V2" => Ok(2),
        _ => s
            .strip_prefix('V')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Label(format!("unknown label {s:?}"))),
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dual {
            write!(f, "{}*", label_name(self.label))
        } else {
            write!(f, "{}", label_name(self.label))
        }
    }
}

/// A parenthesized tensor word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectExpr {
    /// The tensor unit.
    Unit,
    /// A simple object or its dual.
    Gen(Gen),
    /// A binary tensor product.
    Tensor(Box<ObjectExpr>, Box<ObjectExpr>),
}

impl ObjectExpr {
    /// `V_n`.
    pub fn simple(n: u32) -> Self {
        ObjectExpr::Gen(Gen::simple(n))
    }

    /// Binary tensor product.
    pub fn tensor(a: ObjectExpr, b: ObjectExpr) -> Self {
        ObjectExpr::Tensor(Box::new(a), Box::new(b))
    }

    /// Left-nested bracketing of a flat word; the empty word is the unit.
    pub fn from_word(word: &[Gen]) -> Self {
        let mut it = word.iter();
        let Some(first) = it.next() else { return ObjectExpr::Unit };
        it.fold(ObjectExpr::Gen(*first), |acc, g| ObjectExpr::tensor(acc, ObjectExpr::Gen(*g)))
    }

    /// Generators in order, units dropped.
    pub fn flatten(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<Gen>) {
        match self {
            ObjectExpr::Unit => {}
            ObjectExpr::Gen(g) => out.push(*g),
            ObjectExpr::Tensor(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
        }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.flatten().iter().map(|g| g.dim()).product()
    }

    /// The dual object, with `(A B)^* = B^* A^*`.
    pub fn dual(&self) -> Self {
        match self {
            ObjectExpr::Unit => ObjectExpr::Unit,
            ObjectExpr::Gen(g) => ObjectExpr::Gen(g.dualize()),
            ObjectExpr::Tensor(a, b) => ObjectExpr::tensor(b.dual(), a.dual()),
        }
    }

    /// Parse from the nested-array JSON form.
    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse(format!("object must be an array: {v}")))?;
        let head = arr
            .first()
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("object array needs a string head: {v}")))?;
        match (head, arr.len()) {
            ("unit", 1) => Ok(ObjectExpr::Unit),
            ("dual", 2) => Ok(ObjectExpr::from_json(&arr[1])?.dual()),
            ("tensor", n) if n >= 3 => {
                let mut parts = arr[1..].iter().map(ObjectExpr::from_json);
                let first = parts.next().expect("nonempty")?;
                parts.try_fold(first, |acc, p| Ok(ObjectExpr::tensor(acc, p?)))
            }
            (name, 1) => Ok(ObjectExpr::simple(parse_label(name)?)),
            _ => Err(Error::Parse(format!("malformed object expression {v}"))),
        }
    }

    /// Nested-array JSON form.
    pub fn to_json(&self) -> Value {
        match self {
            ObjectExpr::Unit => serde_json::json!(["unit"]),
            ObjectExpr::Gen(g) if g.dual => serde_json::json!(["dual", [label_name(g.label)]]),
            ObjectExpr::Gen(g) if g.label == 0 => serde_json::json!(["V0"]),
            ObjectExpr::Gen(g) => serde_json::json!([label_name(g.label)]),
            ObjectExpr::Tensor(a, b) => serde_json::json!(["tensor", a.to_json(), b.to_json()]),
        }
    }
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectExpr::Unit => write!(f, "1"),
            ObjectExpr::Gen(g) => write!(f, "{g}"),
            ObjectExpr::Tensor(a, b) => write!(f, "({a} {b})"),
        }
    }
}

impl Serialize for ObjectExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ObjectExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ObjectExpr::from_json(&v).map_err(D::Error::custom)
    }
}

/// Dimensions of a flat word.
pub fn word_dims(word: &[Gen]) -> Vec<usize> {
    word.iter().map(|g| g.dim()).collect()
}

/// Total dimension of a flat word.
pub fn word_dim(word: &[Gen]) -> usize {
    word.iter().map(|g| g.dim()).product()
}

/// Dual of a flat word.
pub fn dual_word(word: &[Gen]) -> Vec<Gen> {
    word.iter().rev().map(|g| g.dualize()).collect()
}
