// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Morphisms as exact matrices between tensor words.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::object::ObjectExpr;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{q_from_str, q_to_string, RingMode, ScalarSeries};

/// A morphism `source -> target` given by a `dim(target) x dim(source)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    /// Source object.
    pub source: ObjectExpr,
    /// Target object.
    pub target: ObjectExpr,
    /// Matrix in the basis of the flattened words.
    pub mat: Mat,
}

impl Morphism {
    /// Checked constructor.
    pub fn new(source: ObjectExpr, target: ObjectExpr, mat: Mat) -> Result<Self> {
        if mat.rows() != target.dim() || mat.cols() != source.dim() {
            return Err(Error::Shape(format!(
                "matrix {}x{} does not fit {} -> {}",
                mat.rows(),
                mat.cols(),
                source,
                target
            )));
        }
        Ok(Morphism { source, target, mat })
    }

    /// Identity.
    pub fn identity(mode: RingMode, x: ObjectExpr) -> Self {
        let d = x.dim();
        Morphism { source: x.clone(), target: x, mat: Mat::identity(mode, d) }
    }

    /// Ring mode.
    pub fn mode(&self) -> RingMode {
        self.mat.mode()
    }

    /// `self o f`; requires `self.source == f.target`.
    pub fn compose(&self, f: &Morphism) -> Result<Morphism> {
        if self.source != f.target {
            return Err(Error::Shape(format!("cannot compose: {} vs {}", self.source, f.target)));
        }
        Ok(Morphism { source: f.source.clone(), target: self.target.clone(), mat: self.mat.mul(&f.mat)? })
    }

    /// `self (x) g`.
    pub fn tensor(&self, g: &Morphism) -> Result<Morphism> {
        Ok(Morphism {
            source: ObjectExpr::tensor(self.source.clone(), g.source.clone()),
            target: ObjectExpr::tensor(self.target.clone(), g.target.clone()),
            mat: self.mat.kron(&g.mat)?,
        })
    }

    /// Sum of parallel morphisms.
    pub fn add(&self, g: &Morphism) -> Result<Morphism> {
        self.check_parallel(g)?;
        Ok(Morphism { mat: self.mat.add(&g.mat)?, ..self.clone() })
    }

    /// Difference of parallel morphisms.
    pub fn sub(&self, g: &Morphism) -> Result<Morphism> {
        self.check_parallel(g)?;
        Ok(Morphism { mat: self.mat.sub(&g.mat)?, ..self.clone() })
    }

    fn check_parallel(&self, g: &Morphism) -> Result<()> {
        if self.source != g.source || self.target != g.target {
            return Err(Error::Shape("morphisms are not parallel".into()));
        }
        Ok(())
    }

    /// Same matrix with new source and target of equal flattened words.
    pub fn retype(&self, source: ObjectExpr, target: ObjectExpr) -> Result<Morphism> {
        if source.flatten() != self.source.flatten() || target.flatten() != self.target.flatten() {
            return Err(Error::Shape("retype must preserve the flattened words".into()));
        }
        Ok(Morphism { source, target, mat: self.mat.clone() })
    }

    /// Apply the mode homomorphism.
    pub fn convert(&self, mode: RingMode) -> Result<Morphism> {
        Ok(Morphism { mat: self.mat.convert(mode)?, ..self.clone() })
    }

    /// Constant part as a classical morphism.
    pub fn part0(&self) -> Morphism {
        Morphism { mat: self.mat.part0(), ..self.clone() }
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        matrix_json(&self.source, &self.target, &self.mat)
    }

    /// Parse the JSON form.
    pub fn from_json(v: &Value) -> Result<Morphism> {
        let source = ObjectExpr::from_json(field(v, "source")?)?;
        let target = ObjectExpr::from_json(field(v, "target")?)?;
        let mat = mat_from_json(v)?;
        Morphism::new(source, target, mat)
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")))
}

/// JSON object carrying a matrix and its mode.
pub(crate) fn matrix_json(source: &ObjectExpr, target: &ObjectExpr, mat: &Mat) -> Value {
    let rows: Vec<Value> = (0..mat.rows())
        .map(|i| {
            Value::Array(
                (0..mat.cols())
                    .map(|j| {
                        let s = mat.get(i, j);
                        Value::Array(s.coeffs().iter().map(|c| Value::String(q_to_string(c))).collect())
                    })
                    .collect(),
            )
        })
        .collect();
    json!({
        "source": source.to_json(),
        "target": target.to_json(),
        "mode": mat.mode().name(),
        "order": mat.mode().order(),
        "matrix": rows,
    })
}

/// Parse the mode and matrix fields of a morphism JSON object.
pub(crate) fn mat_from_json(v: &Value) -> Result<Mat> {
    let mode_name = field(v, "mode")?.as_str().ok_or_else(|| Error::Parse("mode must be a string".into()))?;
    let order = field(v, "order")?.as_u64().ok_or_else(|| Error::Parse("order must be an integer".into()))?;
    let mode = RingMode::from_name(mode_name, order as usize)?;
    let rows = field(v, "matrix")?.as_array().ok_or_else(|| Error::Parse("matrix must be an array".into()))?;
    let ncols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut mat = Mat::zeros(mode, rows.len(), ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::Parse(format!("matrix row {i} must be an array")))?;
        if row.len() != ncols {
            return Err(Error::Parse(format!("matrix row {i} has {} entries, expected {ncols}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            let coeffs = match e {
                Value::Array(cs) => cs
                    .iter()
                    .map(|c| c.as_str().ok_or_else(|| Error::Parse("coefficient must be a string".into())).and_then(q_from_str))
                    .collect::<Result<Vec<_>>>()?,
                Value::String(s) => vec![q_from_str(s)?],
                _ => return Err(Error::Parse(format!("bad matrix entry at ({i},{j})"))),
            };
            if coeffs.len() > mode.order() {
                return Err(Error::Parse(format!("entry ({i},{j}) exceeds the truncation order")));
            }
            mat.set(i, j, &ScalarSeries::new(mode, coeffs));
        }
    }
    Ok(mat)
}

impl Serialize for Morphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Morphism::from_json(&v).map_err(D::Error::custom)
    }
}
