//! Declarative scenario files. A scenario is a small JSON object naming a
//! construction kind and its numeric parameters; generator matrices are
//! nested integer arrays reduced into the stated prime field. Unknown keys
//! are rejected so typos fail loudly instead of being ignored.

use adequacy_core::field::Field;
use adequacy_core::groups::GroupElement;
use adequacy_core::linalg::Matrix;
use adequacy_core::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Example1,
    Wreath,
    TaylorOdd,
    TaylorEven,
    Psl2Scan,
    Custom,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Example1 => "example1",
            ScenarioKind::Wreath => "wreath",
            ScenarioKind::TaylorOdd => "taylor_odd",
            ScenarioKind::TaylorEven => "taylor_even",
            ScenarioKind::Psl2Scan => "psl2_scan",
            ScenarioKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Prime modulus: the base field for `H_gens` matrices, and for the
    /// wreath kind also the order of the cyclic bottom group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    /// Matrix size for the example1 kind (the base group has order r^a).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    /// Group generators as row-major integer matrices over GF(r).
    #[serde(default, rename = "H_gens", skip_serializing_if = "Option::is_none")]
    pub h_gens: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    /// Subgroup generators in the same encoding as `H_gens`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_gens: Option<Vec<Vec<Vec<i64>>>>,
}

impl ScenarioSpec {
    pub fn load(path: &Path) -> Result<ScenarioSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path.display(), e)))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: {}", path.display(), e)))
    }

    pub fn require_r(&self) -> Result<u64> {
        self.r
            .ok_or_else(|| Error::InvalidInput("this scenario needs the prime modulus r".into()))
    }

    /// The `H_gens` matrices as group elements over GF(r).
    pub fn group_generators(&self) -> Result<Vec<GroupElement>> {
        let raw = self
            .h_gens
            .as_ref()
            .filter(|v| !v.is_empty())
            .ok_or_else(|| Error::InvalidInput("this scenario needs H_gens".into()))?;
        matrix_elements(self.require_r()?, raw)
    }

    /// The `sub_gens` matrices as group elements, when present and nonempty.
    pub fn subgroup_generators(&self) -> Result<Option<Vec<GroupElement>>> {
        match self.sub_gens.as_ref().filter(|v| !v.is_empty()) {
            Some(raw) => Ok(Some(matrix_elements(self.require_r()?, raw)?)),
            None => Ok(None),
        }
    }

    /// The `H_gens` entries as matrices (for kinds that consume matrices
    /// directly rather than group elements).
    pub fn generator_matrices(&self) -> Result<Vec<Matrix>> {
        let raw = self
            .h_gens
            .as_ref()
            .filter(|v| !v.is_empty())
            .ok_or_else(|| Error::InvalidInput("this scenario needs H_gens".into()))?;
        raw_matrices(self.require_r()?, raw)
    }
}

fn raw_matrices(r: u64, raw: &[Vec<Vec<i64>>]) -> Result<Vec<Matrix>> {
    let field = Field::new(r, 1)?;
    raw.iter()
        .map(|rows| {
            let slices: Vec<&[i64]> = rows.iter().map(|row| row.as_slice()).collect();
            Matrix::from_i64(&field, &slices)
        })
        .collect()
}

fn matrix_elements(r: u64, raw: &[Vec<Vec<i64>>]) -> Result<Vec<GroupElement>> {
    raw_matrices(r, raw)?
        .into_iter()
        .map(GroupElement::matrix)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<ScenarioSpec>(r#"{"kind":"custom","bogus":1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn kinds_round_trip() {
        for kind in ["example1", "wreath", "taylor_odd", "taylor_even", "psl2_scan", "custom"] {
            let spec: ScenarioSpec =
                serde_json::from_str(&format!(r#"{{"kind":"{kind}"}}"#)).unwrap();
            assert_eq!(spec.kind.as_str(), kind);
        }
    }

    #[test]
    fn generators_are_reduced_into_the_field() {
        let spec: ScenarioSpec = serde_json::from_str(
            r#"{"kind":"custom","r":3,"H_gens":[[[1,1],[0,1]],[[0,-1],[1,0]]]}"#,
        )
        .unwrap();
        let gens = spec.group_generators().unwrap();
        assert_eq!(gens.len(), 2);
    }
}
