//! JSON encoding of graded representations.
//!
//! ```json
//! {"quiver": "vertices: 1 2\narrow a: 1 -> 2 deg 0\n",
//!  "field": "Q",
//!  "spaces": {"1": {"0": 1}, "2": {"0": 1}},
//!  "maps": {"a": {"0": [["1"]]}}}
//! ```
//!
//! `quiver` is either inline quiver text or a path to a quiver file
//! (resolved against a base directory); `field` is `"Q"` or `{"Fp": p}`.
//! Scalars are strings `"a"` or `"a/b"`; matrices are row-major with rows
//! indexing the target basis.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ExactField;
use crate::linalg::Matrix;
use crate::quiver::GradedQuiver;

use super::rep::{GradedRep, Slot};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepDocument {
    pub quiver: String,
    pub field: ExactField,
    #[serde(default)]
    pub spaces: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
}

fn parse_degree(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Representation(format!("degree key {s:?} is not an integer")))
}

/// Loads quiver text inline, or from a file when the string does not look
/// like quiver text.
pub fn resolve_quiver(spec: &str, base: Option<&Path>) -> Result<GradedQuiver> {
    if spec.contains("vertices") {
        return spec.parse();
    }
    let path = match base {
        Some(dir) => dir.join(spec),
        None => spec.into(),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Representation(format!("cannot read quiver file {}: {e}", path.display())))?;
    text.parse()
}

impl RepDocument {
    pub fn to_rep(&self, base: Option<&Path>) -> Result<GradedRep> {
        let quiver = resolve_quiver(&self.quiver, base)?;
        let field = self.field;
        let mut spaces: BTreeMap<Slot, usize> = BTreeMap::new();
        for (v, by_degree) in &self.spaces {
            for (d, &n) in by_degree {
                spaces.insert((v.clone(), parse_degree(d)?), n);
            }
        }
        let mut maps = BTreeMap::new();
        for (a, by_degree) in &self.maps {
            for (d, rows) in by_degree {
                let parsed = rows
                    .iter()
                    .map(|r| r.iter().map(|x| field.parse_scalar(x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if parsed.iter().any(|r| r.len() != parsed[0].len()) {
                    return Err(Error::Representation(format!(
                        "ragged matrix for arrow {a} in degree {d}"
                    )));
                }
                let d = parse_degree(d)?;
                let matrix = if parsed.is_empty() {
                    Matrix::zeros(0, 0)
                } else {
                    Matrix::from_rows(parsed)
                };
                maps.insert((a.clone(), d), matrix);
            }
        }
        GradedRep::new(quiver, field, spaces, maps)
    }

    pub fn from_rep(rep: &GradedRep) -> Self {
        let field = rep.field();
        let mut spaces: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for ((v, d), n) in rep.spaces() {
            spaces.entry(v.clone()).or_default().insert(d.to_string(), *n);
        }
        let mut maps: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>> = BTreeMap::new();
        for ((a, d), m) in rep.blocks() {
            if m.is_zero() {
                continue;
            }
            let rows = m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| field.format_scalar(x)).collect())
                .collect();
            maps.entry(a.clone()).or_default().insert(d.to_string(), rows);
        }
        RepDocument {
            quiver: rep.quiver().to_text(),
            field: *field,
            spaces,
            maps,
        }
    }
}

pub fn rep_from_json(text: &str, base: Option<&Path>) -> Result<GradedRep> {
    let doc: RepDocument =
        serde_json::from_str(text).map_err(|e| Error::Representation(format!("invalid representation JSON: {e}")))?;
    doc.to_rep(base)
}

pub fn rep_to_json(rep: &GradedRep) -> String {
    serde_json::to_string_pretty(&RepDocument::from_rep(rep)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcat::builders::build_l_case_a;
    use num_rational::BigRational;

    #[test]
    fn round_trip_over_prime_field() {
        let f = ExactField::prime(7).unwrap();
        let l = build_l_case_a(f, &BigRational::from_integer(3.into())).unwrap();
        let text = rep_to_json(&l);
        assert!(text.contains("\"Fp\": 7"));
        assert_eq!(rep_from_json(&text, None).unwrap(), l);
    }

    #[test]
    fn rationals_and_inline_quiver() {
        let text = r#"{"quiver": "vertices: 1 2\narrow a: 1 -> 2 deg -1\n", "field": "Q",
            "spaces": {"1": {"0": 1}, "2": {"-1": 1}}, "maps": {"a": {"0": [["-3/4"]]}}}"#;
        let rep = rep_from_json(text, None).unwrap();
        assert_eq!(
            rep.block("a", 0).unwrap().get(0, 0),
            &BigRational::new((-3).into(), 4.into())
        );
    }

    #[test]
    fn wrong_block_shape_rejected() {
        let text = r#"{"quiver": "vertices: 1 2\narrow a: 1 -> 2 deg 0\n", "field": "Q",
            "spaces": {"1": {"0": 1}, "2": {"0": 1}}, "maps": {"a": {"0": [["1", "2"]]}}}"#;
        assert!(rep_from_json(text, None).is_err());
    }
}
