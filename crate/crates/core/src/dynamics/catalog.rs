use std::sync::Arc;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{
    CircleRotation, DisjointRotations, FullShift, HeisenbergTorus, IntervalSquare, RotationNumber, SharedSystem,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ParamSchema {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub ty: &'static str,
    pub default: Option<&'static str>,
    pub description: &'static str,
}

/// Documented dynamical properties; `None` where it depends on parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectedProperties {
    pub uniquely_ergodic: Option<bool>,
    pub mean_equicontinuous: Option<bool>,
    pub weak_mean_equicontinuous: Option<bool>,
    pub full_measure_center: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub group: &'static str,
    pub summary: &'static str,
    pub params: Vec<ParamSchema>,
    pub point_format: &'static str,
    pub expected: ExpectedProperties,
}

const ALPHA_DOC: &str = "rotation number: number, decimal string, \"p/q\", \"golden\" or \"silver\"";

fn alpha(name: &'static str, default: &'static str) -> ParamSchema {
    ParamSchema {
        name,
        ty: "rotation_number",
        default: Some(default),
        description: ALPHA_DOC,
    }
}

fn props(ue: Option<bool>, me: Option<bool>, wme: Option<bool>, center: Option<bool>) -> ExpectedProperties {
    ExpectedProperties {
        uniquely_ergodic: ue,
        mean_equicontinuous: me,
        weak_mean_equicontinuous: wme,
        full_measure_center: center,
    }
}

/// Every built-in system. "Uniquely ergodic" for rotations assumes the
/// rotation numbers are approximants of irrationals (rationally independent
/// for the torus).
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "rotation",
            group: "z",
            summary: "circle rotation x -> x + alpha",
            params: vec![alpha("alpha", "golden")],
            point_format: "number in [0,1)",
            expected: props(Some(true), Some(true), Some(true), Some(true)),
        },
        CatalogEntry {
            name: "zd_rotation",
            group: "zN",
            summary: "Z^d acting on the circle by x -> x + sum g_i alpha_i",
            params: vec![ParamSchema {
                name: "alphas",
                ty: "array of rotation_number",
                default: None,
                description: "one rotation number per lattice direction",
            }],
            point_format: "number in [0,1)",
            expected: props(Some(true), Some(true), Some(true), Some(true)),
        },
        CatalogEntry {
            name: "heisenberg_torus",
            group: "heisenberg",
            summary: "Heisenberg group acting on T^2 through its abelianization",
            params: vec![alpha("alpha1", "golden"), alpha("alpha2", "silver")],
            point_format: "[x1, x2]",
            expected: props(Some(true), Some(true), Some(true), Some(true)),
        },
        CatalogEntry {
            name: "full_shift",
            group: "z",
            summary: "full shift over {0,1}",
            params: vec![],
            point_format: "{\"rule\": constant|periodic|sturmian|random, ...; optional flips, offset}",
            expected: props(Some(false), Some(false), Some(false), Some(true)),
        },
        CatalogEntry {
            name: "sturmian",
            group: "z",
            summary: "full shift whose bare-number points are Sturmian codings of the rotation by alpha",
            params: vec![alpha("alpha", "golden")],
            point_format: "number x (coding of the orbit of x) or any full_shift point",
            expected: props(Some(false), Some(false), Some(false), Some(true)),
        },
        CatalogEntry {
            name: "disjoint_rotations",
            group: "z",
            summary: "two rotated circles; cross-component distance 1, intra distance arc/2",
            params: vec![alpha("alpha0", "golden"), alpha("alpha1", "silver")],
            point_format: "{\"component\": 0|1, \"x\": number}",
            expected: props(Some(false), Some(true), Some(true), Some(true)),
        },
        CatalogEntry {
            name: "interval_square",
            group: "z",
            summary: "x -> x^2 on [0,1]; fixed points 0 and 1",
            params: vec![],
            point_format: "number in [0,1]",
            expected: props(Some(false), Some(false), Some(false), Some(false)),
        },
    ]
}

fn check_keys(params: &Map<String, Value>, allowed: &[&str], system: &str) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidParameter(format!(
            "unknown parameter `{k}` for system {system}"
        ))),
        None => Ok(()),
    }
}

fn rotation_param(params: &Map<String, Value>, key: &str, default: RotationNumber) -> Result<RotationNumber> {
    params.get(key).map_or(Ok(default), RotationNumber::parse)
}

/// Builds a catalog system from its name and JSON parameters.
pub fn build_system(name: &str, params: &Value) -> Result<SharedSystem> {
    let empty = Map::new();
    let params = match params {
        Value::Object(m) => m,
        Value::Null => &empty,
        _ => return Err(Error::InvalidParameter("system params must be an object".into())),
    };
    let golden = RotationNumber::GOLDEN;
    let silver = RotationNumber::SILVER;
    Ok(match name {
        "rotation" => {
            check_keys(params, &["alpha"], name)?;
            Arc::new(CircleRotation::rotation(rotation_param(params, "alpha", golden)?))
        }
        "zd_rotation" => {
            check_keys(params, &["alphas"], name)?;
            let alphas = params
                .get("alphas")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidParameter("zd_rotation needs an `alphas` array".into()))?
                .iter()
                .map(RotationNumber::parse)
                .collect::<Result<Vec<_>>>()?;
            Arc::new(CircleRotation::lattice(alphas)?)
        }
        "heisenberg_torus" => {
            check_keys(params, &["alpha1", "alpha2"], name)?;
            Arc::new(HeisenbergTorus::new(
                rotation_param(params, "alpha1", golden)?,
                rotation_param(params, "alpha2", silver)?,
            ))
        }
        "full_shift" => {
            check_keys(params, &[], name)?;
            Arc::new(FullShift::new())
        }
        "sturmian" => {
            check_keys(params, &["alpha"], name)?;
            Arc::new(FullShift::sturmian(rotation_param(params, "alpha", golden)?))
        }
        "disjoint_rotations" => {
            check_keys(params, &["alpha0", "alpha1"], name)?;
            Arc::new(DisjointRotations::new(
                rotation_param(params, "alpha0", golden)?,
                rotation_param(params, "alpha1", silver)?,
            ))
        }
        "interval_square" => {
            check_keys(params, &[], name)?;
            Arc::new(IntervalSquare)
        }
        other => {
            return Err(Error::Unknown {
                what: "system",
                name: other.to_string(),
            })
        }
    })
}
