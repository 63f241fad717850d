//! JSON descriptions of groups and modules.
//!
//! ```json
//! {"type": "zk_by_z", "matrix": [[0, 0, 1], [1, 0, 0], [0, 1, 0]]}
//! {"type": "semidirect", "actions": [[[1, 0], [0, 1]]], "acting_rank": 1}
//! {"type": "wreath_cyclic", "m": 3}
//! {"type": "nilpotent_gf", "ell": 2, "f": {"1,2": [1]}}
//! {"type": "module_matrix", "actions": [[[2]]]}
//! {"type": "module_presented", "gens": 1, "relations": ["x^2 + 1"]}
//! ```
//!
//! Matrices are lists of rows; column `j` is the image of generator `j`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::engine::{ModuleDescriptor, MAX_MODULE_DIM};
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, MAX_NILPOTENT_ELL};
use crate::linalg::IntMatrix;
use crate::poly::{parse_polynomial, ZPoly};

/// Largest accepted spec document, in bytes.
pub const MAX_SPEC_BYTES: usize = 1 << 20;
/// Largest number of action matrices.
pub const MAX_ACTIONS: usize = 8;
/// Largest number of generators and relations of a presented module.
pub const MAX_PRESENTED_GENS: usize = 16;
pub const MAX_RELATIONS: usize = 64;
/// Largest decimal length of an integer given as a string.
pub const MAX_INT_DIGITS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Group(GroupDescriptor),
    Module(ModuleDescriptor),
}

fn err<T>(field: impl Into<String>, message: impl Into<String>) -> Result<T> {
    Err(Error::Spec { field: field.into(), message: message.into() })
}

/// Attaches `field` to errors raised while building descriptors.
fn at<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Spec { .. } => e,
        Error::NonCommuting(..) => Error::Spec { field: field.into(), message: e.to_string() },
        Error::Domain(m) => Error::Spec { field: field.into(), message: m },
        other => Error::Spec { field: field.into(), message: other.to_string() },
    })
}

/// Parses and validates a spec document.
pub fn parse_spec(text: &str) -> Result<Spec> {
    if text.len() > MAX_SPEC_BYTES {
        return err("document", format!("larger than {MAX_SPEC_BYTES} bytes"));
    }
    let v: Value = serde_json::from_str(text).or_else(|e| err("document", format!("invalid JSON: {e}")))?;
    let Value::Object(obj) = v else {
        return err("document", "expected a JSON object");
    };
    let ty = match obj.get("type") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return err("type", "expected a string"),
        None => return err("type", "missing"),
    };
    let allowed: &[&str] = match ty.as_str() {
        "zk_by_z" => &["matrix", "torsion", "gens", "relations"],
        "semidirect" => &["actions", "acting_rank", "acting_torsion", "torsion"],
        "wreath_cyclic" => &["m"],
        "nilpotent_gf" => &["ell", "f"],
        "module_matrix" => &["actions", "torsion", "group_action"],
        "module_presented" => &["gens", "relations"],
        other => return err("type", format!("unknown type {other:?}")),
    };
    for key in obj.keys() {
        if key != "type" && !allowed.contains(&key.as_str()) {
            return err(key.as_str(), format!("not a field of {ty}"));
        }
    }
    match ty.as_str() {
        "zk_by_z" => {
            let module = if obj.contains_key("matrix") {
                if obj.contains_key("gens") || obj.contains_key("relations") {
                    return err("matrix", "give either a matrix or gens/relations, not both");
                }
                let a = matrix(obj.get("matrix"), "matrix")?;
                let torsion = torsion(&obj, "torsion")?;
                let rank = free_rank(&a, &torsion, "matrix")?;
                at("matrix", ModuleDescriptor::matrix(rank, torsion, vec![a], true))?
            } else if obj.contains_key("gens") {
                if obj.contains_key("torsion") {
                    return err("torsion", "not used with gens/relations");
                }
                presented(&obj)?
            } else {
                return err("matrix", "missing");
            };
            Ok(Spec::Group(at("matrix", GroupDescriptor::zk_by_z(module))?))
        }
        "semidirect" => {
            let acts = actions(&obj)?;
            let torsion = torsion(&obj, "torsion")?;
            let rank = free_rank(&acts[0], &torsion, "actions[0]")?;
            let acting_rank = usize_field(&obj, "acting_rank", Some(0), MAX_ACTIONS)?;
            let acting_torsion = torsion_list(obj.get("acting_torsion"), "acting_torsion")?;
            if acting_rank + acting_torsion.len() != acts.len() {
                return err(
                    "actions",
                    format!(
                        "{} matrices given for acting_rank {acting_rank} plus {} torsion generators",
                        acts.len(),
                        acting_torsion.len()
                    ),
                );
            }
            let module = at("actions", ModuleDescriptor::matrix(rank, torsion, acts, true))?;
            Ok(Spec::Group(at("actions", GroupDescriptor::semidirect(module, acting_rank, acting_torsion))?))
        }
        "wreath_cyclic" => {
            let m = usize_field(&obj, "m", None, MAX_MODULE_DIM)?;
            Ok(Spec::Group(at("m", GroupDescriptor::wreath_cyclic(m))?))
        }
        "nilpotent_gf" => {
            let ell = usize_field(&obj, "ell", None, MAX_NILPOTENT_ELL)?;
            if ell < 2 {
                return err("ell", "must be at least 2");
            }
            let k = ell * (ell - 1) / 2;
            let mut f = BTreeMap::new();
            match obj.get("f") {
                None => {}
                Some(Value::Object(map)) => {
                    for (key, v) in map {
                        let field = format!("f[{key:?}]");
                        let pair = parse_pair(key).ok_or_else(|| Error::Spec {
                            field: field.clone(),
                            message: "key must have the form \"i,j\"".into(),
                        })?;
                        let vec = int_list(v, &field)?;
                        if vec.len() != k {
                            return err(field, format!("length {} but C({ell},2) = {k}", vec.len()));
                        }
                        if f.insert(pair, vec).is_some() {
                            return err(field, "duplicate pair");
                        }
                    }
                }
                Some(_) => return err("f", "expected an object mapping \"i,j\" to vectors"),
            }
            Ok(Spec::Group(at("f", GroupDescriptor::nilpotent(ell, f))?))
        }
        "module_matrix" => {
            let acts = actions(&obj)?;
            let torsion = torsion(&obj, "torsion")?;
            let rank = free_rank(&acts[0], &torsion, "actions[0]")?;
            let group_action = match obj.get("group_action") {
                None => false,
                Some(Value::Bool(b)) => *b,
                Some(_) => return err("group_action", "expected a boolean"),
            };
            Ok(Spec::Module(at("actions", ModuleDescriptor::matrix(rank, torsion, acts, group_action))?))
        }
        "module_presented" => Ok(Spec::Module(presented(&obj)?)),
        _ => unreachable!("type checked above"),
    }
}

fn parse_pair(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn usize_field(obj: &Map<String, Value>, field: &str, default: Option<usize>, max: usize) -> Result<usize> {
    match obj.get(field) {
        None => default.map_or_else(|| err(field, "missing"), Ok),
        Some(v) => match v.as_u64() {
            Some(n) if n as u128 <= max as u128 => Ok(n as usize),
            Some(n) => err(field, format!("{n} exceeds the limit {max}")),
            None => err(field, "expected a nonnegative integer"),
        },
    }
}

fn integer(v: &Value, field: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigInt::from(i)),
            None => err(field, "expected an integer in the 64-bit range (use a string for larger values)"),
        },
        Value::String(s) => {
            let digits = s.trim_start_matches('-');
            if digits.is_empty() || digits.len() > MAX_INT_DIGITS || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return err(field, format!("{s:?} is not a decimal integer of at most {MAX_INT_DIGITS} digits"));
            }
            s.parse().or_else(|_| err(field, format!("{s:?} is not an integer")))
        }
        _ => err(field, "expected an integer"),
    }
}

fn int_list(v: &Value, field: &str) -> Result<Vec<BigInt>> {
    let Value::Array(items) = v else {
        return err(field, "expected an array of integers");
    };
    if items.len() > MAX_MODULE_DIM * MAX_MODULE_DIM {
        return err(field, "too many entries");
    }
    items.iter().enumerate().map(|(i, x)| integer(x, &format!("{field}[{i}]"))).collect()
}

fn matrix(v: Option<&Value>, field: &str) -> Result<IntMatrix> {
    let Some(v) = v else {
        return err(field, "missing");
    };
    let Value::Array(rows) = v else {
        return err(field, "expected an array of rows");
    };
    if rows.is_empty() {
        return err(field, "matrix is empty");
    }
    if rows.len() > MAX_MODULE_DIM {
        return err(field, format!("more than {MAX_MODULE_DIM} rows"));
    }
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let row = int_list(r, &format!("{field}[{i}]"))?;
        if row.len() != rows.len() {
            return err(format!("{field}[{i}]"), format!("has {} entries, expected {}", row.len(), rows.len()));
        }
        out.push(row);
    }
    at(field, IntMatrix::from_rows(&out))
}

fn actions(obj: &Map<String, Value>) -> Result<Vec<IntMatrix>> {
    let Some(v) = obj.get("actions") else {
        return err("actions", "missing");
    };
    let Value::Array(items) = v else {
        return err("actions", "expected an array of matrices");
    };
    if items.is_empty() {
        return err("actions", "at least one matrix is required");
    }
    if items.len() > MAX_ACTIONS {
        return err("actions", format!("more than {MAX_ACTIONS} matrices"));
    }
    let mats: Vec<IntMatrix> =
        items.iter().enumerate().map(|(i, m)| matrix(Some(m), &format!("actions[{i}]"))).collect::<Result<_>>()?;
    for (i, m) in mats.iter().enumerate().skip(1) {
        if m.rows() != mats[0].rows() {
            return err(format!("actions[{i}]"), format!("size {} differs from actions[0] size {}", m.rows(), mats[0].rows()));
        }
    }
    Ok(mats)
}

fn torsion_list(v: Option<&Value>, field: &str) -> Result<Vec<u64>> {
    let Some(v) = v else {
        return Ok(Vec::new());
    };
    let Value::Array(items) = v else {
        return err(field, "expected an array of integers ≥ 2");
    };
    if items.len() > MAX_MODULE_DIM {
        return err(field, format!("more than {MAX_MODULE_DIM} entries"));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match x.as_u64() {
            Some(t) if t >= 2 => Ok(t),
            _ => err(format!("{field}[{i}]"), "expected an integer ≥ 2"),
        })
        .collect()
}

fn torsion(obj: &Map<String, Value>, field: &str) -> Result<Vec<u64>> {
    torsion_list(obj.get(field), field)
}

fn free_rank(a: &IntMatrix, torsion: &[u64], field: &str) -> Result<usize> {
    a.rows().checked_sub(torsion.len()).map_or_else(
        || err(field, format!("size {} is smaller than the {} torsion generators", a.rows(), torsion.len())),
        Ok,
    )
}

fn presented(obj: &Map<String, Value>) -> Result<ModuleDescriptor> {
    let gens = usize_field(obj, "gens", None, MAX_PRESENTED_GENS)?;
    if gens == 0 {
        return err("gens", "must be at least 1");
    }
    let rels = match obj.get("relations") {
        None => Vec::new(),
        Some(Value::Array(items)) => {
            if items.len() > MAX_RELATIONS {
                return err("relations", format!("more than {MAX_RELATIONS} relations"));
            }
            let mut rels = Vec::with_capacity(items.len());
            for (i, r) in items.iter().enumerate() {
                let field = format!("relations[{i}]");
                let rel: Vec<ZPoly> = match r {
                    Value::String(s) if gens == 1 => vec![poly(s, &field)?],
                    Value::String(_) => {
                        return err(field, format!("expected an array of {gens} polynomial strings"))
                    }
                    Value::Array(parts) => {
                        if parts.len() != gens {
                            return err(field, format!("has {} entries, expected {gens}", parts.len()));
                        }
                        parts
                            .iter()
                            .enumerate()
                            .map(|(j, p)| match p {
                                Value::String(s) => poly(s, &format!("{field}[{j}]")),
                                _ => err(format!("{field}[{j}]"), "expected a polynomial string"),
                            })
                            .collect::<Result<_>>()?
                    }
                    _ => return err(field, "expected a polynomial string or an array of them"),
                };
                rels.push(rel);
            }
            rels
        }
        Some(_) => return err("relations", "expected an array"),
    };
    at("relations", ModuleDescriptor::presented(gens, rels))
}

fn poly(s: &str, field: &str) -> Result<ZPoly> {
    at(field, parse_polynomial(s))
}
