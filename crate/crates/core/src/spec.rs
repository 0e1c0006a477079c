//! The group document format: a JSON object whose numbers are decimal
//! strings.
//!
//! ```json
//! {
//!   "name": "heisenberg",
//!   "n": "3",
//!   "r": "3",
//!   "generators": [[["1","1","0"],["0","1","0"],["0","0","1"]], ...],
//!   "gradings": {"2": [...]},
//!   "cone": [["1","0","0"], ...],
//!   "fixed_classes": [["1","1","1"], ...],
//!   "kernel_abelian": true,
//!   "expected": {"ell_ess": {"value": "2", "provenance": "hand count"}},
//!   "expect_violation": false
//! }
//! ```
//!
//! Plain JSON integers are accepted on input; output always uses strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cone::{ConeError, PolyhedralCone};
use crate::exact::{format_rational, parse_rational, IntMatrix};
use crate::report::matrix_rows;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("{path}: {reason}")]
    Field { path: String, reason: String },
    #[error("generator {index} has det={det}, expected ±1")]
    NotUnimodular { index: usize, det: BigInt },
    #[error("grading degree {degree}, generator {index}: expected size {expected}, got {got}")]
    GradingSize {
        degree: usize,
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("grading degree {degree}: {reason}")]
    Grading { degree: usize, reason: String },
    #[error("cone: {0}")]
    Cone(#[from] ConeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub value: String,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroupSpec {
    pub name: String,
    pub n: Option<usize>,
    pub r: usize,
    pub generators: Vec<IntMatrix>,
    pub gradings: BTreeMap<usize, Vec<IntMatrix>>,
    pub cone: Option<Vec<Vec<BigRational>>>,
    pub fixed_classes: Option<Vec<Vec<BigRational>>>,
    pub kernel_abelian: Option<bool>,
    /// Oracle annotations for test harnesses; never read by the analysis.
    pub expected: BTreeMap<String, Expected>,
    pub expect_violation: bool,
}

fn field(path: &str, reason: impl Into<String>) -> SpecError {
    SpecError::Field {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn as_rational(v: &Value, path: &str) -> Result<BigRational, SpecError> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        _ => None,
    };
    parsed.ok_or_else(|| field(path, format!("expected a rational, got {v}")))
}

fn as_integer(v: &Value, path: &str) -> Result<BigInt, SpecError> {
    let q = as_rational(v, path)?;
    if !q.is_integer() {
        return Err(field(path, format!("expected an integer, got {}", format_rational(&q))));
    }
    Ok(q.to_integer())
}

fn as_usize(v: &Value, path: &str) -> Result<usize, SpecError> {
    let i = as_integer(v, path)?;
    usize::try_from(i).map_err(|_| field(path, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, SpecError> {
    v.as_array().ok_or_else(|| field(path, "expected an array"))
}

fn as_rat_vec(v: &Value, path: &str) -> Result<Vec<BigRational>, SpecError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn as_matrix(v: &Value, path: &str) -> Result<IntMatrix, SpecError> {
    let rows = as_array(v, path)?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("{path}[{i}]");
            as_array(row, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| as_integer(x, &format!("{p}[{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::from_rows(rows).map_err(|e| field(path, e.to_string()))
}

fn as_matrices(v: &Value, path: &str) -> Result<Vec<IntMatrix>, SpecError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, m)| as_matrix(m, &format!("{path}[{i}]")))
        .collect()
}

impl MatrixGroupSpec {
    /// Parses and validates a document. Errors name the offending position.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
        let obj = doc.as_object().ok_or_else(|| SpecError::Json("top level is not an object".into()))?;
        let known = [
            "name",
            "n",
            "r",
            "generators",
            "gradings",
            "cone",
            "fixed_classes",
            "kernel_abelian",
            "expected",
            "expect_violation",
        ];
        if let Some(k) = obj.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(field(k, "unknown field"));
        }
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| field("name", "missing string"))?
            .to_string();
        let n = match obj.get("n") {
            None | Some(Value::Null) => None,
            Some(v) => match as_usize(v, "n")? {
                0 => return Err(field("n", "must be positive")),
                n => Some(n),
            },
        };
        let r = as_usize(obj.get("r").ok_or_else(|| field("r", "missing"))?, "r")?;
        if r == 0 {
            return Err(field("r", "must be positive"));
        }
        let generators = as_matrices(
            obj.get("generators").ok_or_else(|| field("generators", "missing"))?,
            "generators",
        )?;
        for (index, g) in generators.iter().enumerate() {
            if g.dim() != r {
                return Err(field(
                    &format!("generators[{index}]"),
                    format!("expected {r}×{r}, got {0}×{0}", g.dim()),
                ));
            }
            let det = g.det();
            if det != BigInt::from(1) && det != BigInt::from(-1) {
                return Err(SpecError::NotUnimodular { index, det });
            }
        }

        let mut gradings = BTreeMap::new();
        if let Some(v) = obj.get("gradings").filter(|v| !v.is_null()) {
            let map = v.as_object().ok_or_else(|| field("gradings", "expected an object"))?;
            for (key, mats) in map {
                let degree: usize = key
                    .parse()
                    .map_err(|_| field(&format!("gradings.{key}"), "degree must be a nonnegative integer"))?;
                let mats = as_matrices(mats, &format!("gradings.{key}"))?;
                validate_grading(degree, n, r, &generators, &mats)?;
                gradings.insert(degree, mats);
            }
        }

        let cone = match obj.get("cone").filter(|v| !v.is_null()) {
            None => None,
            Some(v) => {
                let rays = as_array(v, "cone")?
                    .iter()
                    .enumerate()
                    .map(|(i, ray)| as_rat_vec(ray, &format!("cone[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(i) = rays.iter().position(|ray| ray.len() != r) {
                    return Err(field(&format!("cone[{i}]"), format!("expected length {r}, got {}", rays[i].len())));
                }
                PolyhedralCone::from_rays(&rays)?;
                Some(rays)
            }
        };
        let fixed_classes = match obj.get("fixed_classes").filter(|v| !v.is_null()) {
            None => None,
            Some(v) => {
                let classes = as_array(v, "fixed_classes")?
                    .iter()
                    .enumerate()
                    .map(|(i, b)| as_rat_vec(b, &format!("fixed_classes[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                if classes.len() != generators.len() {
                    return Err(field(
                        "fixed_classes",
                        format!("{} classes for {} generators", classes.len(), generators.len()),
                    ));
                }
                if let Some(i) = classes.iter().position(|b| b.len() != r) {
                    return Err(field(
                        &format!("fixed_classes[{i}]"),
                        format!("expected length {r}, got {}", classes[i].len()),
                    ));
                }
                Some(classes)
            }
        };
        let kernel_abelian = match obj.get("kernel_abelian") {
            None | Some(Value::Null) => None,
            Some(Value::Bool(b)) => Some(*b),
            Some(_) => return Err(field("kernel_abelian", "expected a boolean")),
        };
        let mut expected = BTreeMap::new();
        if let Some(v) = obj.get("expected").filter(|v| !v.is_null()) {
            let map = v.as_object().ok_or_else(|| field("expected", "expected an object"))?;
            for (key, entry) in map {
                let path = format!("expected.{key}");
                let get = |k: &str| -> Result<String, SpecError> {
                    match entry.get(k) {
                        Some(Value::String(s)) => Ok(s.clone()),
                        Some(Value::Number(x)) => Ok(x.to_string()),
                        Some(Value::Bool(b)) => Ok(b.to_string()),
                        _ => Err(field(&format!("{path}.{k}"), "missing")),
                    }
                };
                expected.insert(
                    key.clone(),
                    Expected {
                        value: get("value")?,
                        provenance: get("provenance")?,
                    },
                );
            }
        }
        let expect_violation = match obj.get("expect_violation") {
            None | Some(Value::Null) => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(field("expect_violation", "expected a boolean")),
        };
        Ok(Self {
            name,
            n,
            r,
            generators,
            gradings,
            cone,
            fixed_classes,
            kernel_abelian,
            expected,
            expect_violation,
        })
    }

    /// Serializes to the document format; `parse(emit(s)) == s`.
    pub fn emit(&self) -> String {
        let mut obj = Map::new();
        obj.insert("name".into(), json!(self.name));
        if let Some(n) = self.n {
            obj.insert("n".into(), json!(n.to_string()));
        }
        obj.insert("r".into(), json!(self.r.to_string()));
        obj.insert(
            "generators".into(),
            json!(self.generators.iter().map(matrix_rows).collect::<Vec<_>>()),
        );
        if !self.gradings.is_empty() {
            let g: Map<String, Value> = self
                .gradings
                .iter()
                .map(|(k, ms)| (k.to_string(), json!(ms.iter().map(matrix_rows).collect::<Vec<_>>())))
                .collect();
            obj.insert("gradings".into(), Value::Object(g));
        }
        let rat_vecs = |vs: &[Vec<BigRational>]| -> Value {
            json!(vs
                .iter()
                .map(|v| v.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        };
        if let Some(c) = &self.cone {
            obj.insert("cone".into(), rat_vecs(c));
        }
        if let Some(b) = &self.fixed_classes {
            obj.insert("fixed_classes".into(), rat_vecs(b));
        }
        if let Some(k) = self.kernel_abelian {
            obj.insert("kernel_abelian".into(), json!(k));
        }
        if !self.expected.is_empty() {
            let e: Map<String, Value> = self
                .expected
                .iter()
                .map(|(k, v)| (k.clone(), json!({"value": v.value, "provenance": v.provenance})))
                .collect();
            obj.insert("expected".into(), Value::Object(e));
        }
        if self.expect_violation {
            obj.insert("expect_violation".into(), json!(true));
        }
        serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
    }

    pub fn cone(&self) -> Option<PolyhedralCone> {
        self.cone
            .as_ref()
            .map(|rays| PolyhedralCone::from_rays(rays).expect("validated at parse time"))
    }

    pub fn expected_value(&self, key: &str) -> Option<&str> {
        self.expected.get(key).map(|e| e.value.as_str())
    }
}

fn validate_grading(
    degree: usize,
    n: Option<usize>,
    r: usize,
    gens: &[IntMatrix],
    mats: &[IntMatrix],
) -> Result<(), SpecError> {
    if let Some(n) = n {
        if degree > n {
            return Err(SpecError::Grading {
                degree,
                reason: format!("exceeds n = {n}"),
            });
        }
    }
    if mats.len() != gens.len() {
        return Err(SpecError::Grading {
            degree,
            reason: format!("{} matrices for {} generators", mats.len(), gens.len()),
        });
    }
    let expected = match degree {
        0 => 1,
        1 => r,
        d if Some(d) == n && d > 1 => 1,
        _ => mats.first().map_or(0, IntMatrix::dim),
    };
    for (index, m) in mats.iter().enumerate() {
        if m.dim() != expected {
            return Err(SpecError::GradingSize {
                degree,
                index,
                expected,
                got: m.dim(),
            });
        }
        if !m.is_unimodular() {
            return Err(SpecError::Grading {
                degree,
                reason: format!("matrix {index} has det={}", m.det()),
            });
        }
    }
    if degree == 1 && mats != gens {
        return Err(SpecError::Grading {
            degree,
            reason: "degree 1 must equal the generators".into(),
        });
    }
    Ok(())
}
