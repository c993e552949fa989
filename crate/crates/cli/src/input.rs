//! Input file schema and exact parsing.
//!
//! A polytope file is a JSON object `{dim, constraints, name?}` where each
//! constraint is `{normal: [integers], offset: <integer or "p/q" string>}`.
//! Offsets are parsed into exact rationals; nothing is ever rounded. JSON
//! syntax or type errors are reported as parse failures, while violations of
//! the schema invariants (normal length, constraint count, unparseable
//! offset values, zero normals) are validation failures.

use std::str::FromStr;

use serde::Deserialize;
use toricsmith_core::polytope::{Constraint, LabeledPolytope};
use toricsmith_core::rational::{rat, IntVector, Rational};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    #[serde(default)]
    pub name: Option<String>,
    pub constraints: Vec<FileConstraint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConstraint {
    pub normal: Vec<i64>,
    pub offset: OffsetValue,
}

/// Offsets may be written as plain JSON integers or exact `"p/q"` strings.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum OffsetValue {
    Integer(i64),
    Text(String),
}

fn parse_offset(value: &OffsetValue, row: usize) -> Result<Rational, String> {
    match value {
        OffsetValue::Integer(i) => Ok(rat(*i)),
        OffsetValue::Text(s) => Rational::from_str(s.trim())
            .map_err(|_| format!("constraint {}: offset {s:?} is not an exact rational", row + 1)),
    }
}

/// Check the schema invariants and build the exact polytope.
pub fn to_polytope(file: &PolytopeFile) -> Result<LabeledPolytope, String> {
    if file.dim == 0 {
        return Err("dim must be at least 1".to_string());
    }
    if file.constraints.len() < file.dim + 1 {
        return Err(format!(
            "a compact polytope in dimension {} needs at least {} constraints, found {}",
            file.dim,
            file.dim + 1,
            file.constraints.len()
        ));
    }
    let mut constraints = Vec::with_capacity(file.constraints.len());
    for (row, c) in file.constraints.iter().enumerate() {
        if c.normal.len() != file.dim {
            return Err(format!(
                "constraint {}: normal has {} entries, expected {}",
                row + 1,
                c.normal.len(),
                file.dim
            ));
        }
        let offset = parse_offset(&c.offset, row)?;
        constraints.push(Constraint::new(IntVector::from_i64(&c.normal), offset));
    }
    let p = LabeledPolytope::new(file.dim, constraints);
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<LabeledPolytope, String> {
        let file: PolytopeFile = serde_json::from_str(json).map_err(|e| e.to_string())?;
        to_polytope(&file)
    }

    #[test]
    fn offsets_accept_integers_and_rational_strings() {
        let p = parse(
            r#"{"dim":1,"constraints":[{"normal":[1],"offset":2},{"normal":[-1],"offset":"5/3"}]}"#,
        )
        .unwrap();
        assert_eq!(p.constraints[0].offset, rat(2));
        assert_eq!(
            p.constraints[1].offset,
            Rational::new(5.into(), 3.into())
        );
    }

    #[test]
    fn schema_violations_are_reported_with_row_numbers() {
        let err = parse(
            r#"{"dim":2,"constraints":[{"normal":[1],"offset":1},{"normal":[0,1],"offset":1},{"normal":[-1,-1],"offset":1}]}"#,
        )
        .unwrap_err();
        assert!(err.contains("constraint 1"), "{err}");

        let err = parse(
            r#"{"dim":2,"constraints":[{"normal":[1,0],"offset":1},{"normal":[0,1],"offset":"x"}, {"normal":[-1,-1],"offset":1}]}"#,
        )
        .unwrap_err();
        assert!(err.contains("not an exact rational"), "{err}");

        let err = parse(r#"{"dim":3,"constraints":[{"normal":[1,0,0],"offset":1}]}"#).unwrap_err();
        assert!(err.contains("at least 4"), "{err}");
    }
}
