//! JSON factored-distribution files.
//!
//! ```json
//! {
//!   "family": "full",
//!   "alphabet": {"q": 1, "w": 2, "x1": 2, ...},
//!   "factors": [
//!     {"given": ["q"], "outcome": ["w", "x1"], "table": [[[0.5, 0.0], [0.0, 0.5]]]},
//!     ...
//!   ],
//!   "channel": {"given": ["x1", "x2"], "outcome": ["y1", "y2"], "table": ...}
//! }
//! ```
//!
//! Each `table` is a nested array whose nesting follows `given` then
//! `outcome`, in the order written. See `docs/distribution-format.md`.

use std::collections::BTreeMap;

use icdms_core::discrete::random::factor_name;
use icdms_core::discrete::{AlphabetSpec, Factor, FactoredDistribution, Family, Var};
use ndarray::{ArrayD, IxDyn};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{json_error, line_of_key, CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistFile {
    family: Family,
    alphabet: BTreeMap<String, usize>,
    factors: Vec<FactorSpec>,
    channel: FactorSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorSpec {
    #[serde(default)]
    name: Option<String>,
    given: Vec<Var>,
    outcome: Vec<Var>,
    table: Value,
}

/// Shape and row-major values of a rectangular nested array.
fn flatten(v: &Value) -> std::result::Result<(Vec<usize>, Vec<f64>), String> {
    match v {
        Value::Number(n) => Ok((vec![], vec![n.as_f64().ok_or("number out of range")?])),
        Value::Array(items) => {
            if items.is_empty() {
                return Err("empty array".into());
            }
            let mut shape = None;
            let mut values = Vec::new();
            for item in items {
                let (s, vals) = flatten(item)?;
                match &shape {
                    None => shape = Some(s),
                    Some(prev) if *prev != s => return Err("ragged nested array".into()),
                    Some(_) => {}
                }
                values.extend(vals);
            }
            let mut shape = shape.expect("non-empty");
            shape.insert(0, items.len());
            Ok((shape, values))
        }
        _ => Err(format!("expected a number or array, found {v}")),
    }
}

/// Parses and validates a distribution file. `path` is used in messages.
pub fn parse(src: &str, path: &str) -> Result<FactoredDistribution> {
    let file: DistFile = serde_json::from_str(src).map_err(|e| json_error(path, &e))?;
    let at = |key: &str, message: String| CliError::Config {
        path: path.to_string(),
        line: line_of_key(src, key),
        message,
    };

    let mut alphabet = AlphabetSpec::uniform(1);
    for (name, &size) in &file.alphabet {
        let var =
            Var::from_name(name).ok_or_else(|| at(name, format!("unknown variable `{name}`")))?;
        if size == 0 {
            return Err(at(name, format!("alphabet of `{name}` is empty")));
        }
        alphabet = alphabet.with(var, size);
    }
    for var in file.family.axes() {
        if !file.alphabet.contains_key(var.name()) {
            return Err(at("alphabet", format!("alphabet is missing `{var}`")));
        }
    }

    let build = |spec: &FactorSpec| -> Result<Factor> {
        let name = spec
            .name
            .clone()
            .unwrap_or_else(|| factor_name(&spec.given, &spec.outcome));
        let (shape, values) =
            flatten(&spec.table).map_err(|m| at("table", format!("factor `{name}`: {m}")))?;
        let table = ArrayD::from_shape_vec(IxDyn(&shape), values).expect("flatten keeps shape");
        Ok(Factor::new(
            name,
            spec.given.clone(),
            spec.outcome.clone(),
            table,
        ))
    };
    let factors = file.factors.iter().map(build).collect::<Result<Vec<_>>>()?;
    let channel = build(&file.channel)?;

    FactoredDistribution::new(file.family, alphabet, factors, channel).map_err(|e| {
        let key = match &e {
            icdms_core::Error::Normalization { factor, .. }
            | icdms_core::Error::NegativeMass { factor, .. }
            | icdms_core::Error::FactorShape { factor, .. } => factor.clone(),
            _ => "factors".into(),
        };
        // Named factors point at their own line, others at the list.
        let line = if src.contains(&format!("\"{key}\"")) {
            line_of_key(src, &key)
        } else {
            line_of_key(src, "factors")
        };
        CliError::Config {
            path: path.to_string(),
            line,
            message: e.to_string(),
        }
    })
}
