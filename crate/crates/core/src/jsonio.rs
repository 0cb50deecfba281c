use num::BigRational;
use serde_json::{json, Map, Value};

use crate::equilibria::{Analysis, RatioValue};
use crate::error::{Error, Result};
use crate::game::{Game, Profile, Resource};
use crate::generators::{ConstructionOutput, SigmaAffine};
use crate::network::{Arc, NetworkGame};
use crate::rational::{format_rational, parse_rational};
use crate::verifier::VerificationReport;

pub fn rational_to_json(value: &BigRational) -> Value {
    Value::String(format_rational(value))
}

/// Accepts JSON integers or strings like "3", "-1/2", "0.25"; floats are
/// rejected to keep files lossless.
pub fn json_to_rational(value: &Value) -> Result<BigRational> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(u.into()))
            } else {
                Err(Error::Json(format!(
                    "number {n} is not an integer; write rationals as strings"
                )))
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(Error::Json(format!("expected rational, got {other}"))),
    }
}

fn as_object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::Json(format!("{what} must be a JSON object")))
}

fn get<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| Error::Json(format!("missing field \"{key}\"")))
}

fn get_usize(map: &Map<String, Value>, key: &str) -> Result<usize> {
    get(map, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Json(format!("field \"{key}\" must be a non-negative integer")))
}

fn get_array<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    get(map, key)?
        .as_array()
        .ok_or_else(|| Error::Json(format!("field \"{key}\" must be an array")))
}

fn index_array(value: &Value, what: &str) -> Result<Vec<usize>> {
    value
        .as_array()
        .ok_or_else(|| Error::Json(format!("{what} must be an array")))?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::Json(format!("{what} entries must be non-negative integers")))
        })
        .collect()
}

pub fn game_to_json(game: &Game) -> Value {
    json!({
        "n": game.n(),
        "resources": game
            .resources
            .iter()
            .map(|r| json!({"a": rational_to_json(&r.a), "b": rational_to_json(&r.b)}))
            .collect::<Vec<_>>(),
        "strategies": game.strategies,
    })
}

pub fn game_from_json(value: &Value) -> Result<Game> {
    let map = as_object(value, "game")?;
    let declared = get_usize(map, "n")?;
    let resources = get_array(map, "resources")?
        .iter()
        .map(|r| {
            let m = as_object(r, "resource")?;
            Ok(Resource::new(
                json_to_rational(get(m, "a")?)?,
                json_to_rational(get(m, "b")?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let strategies = get_array(map, "strategies")?
        .iter()
        .map(|player| {
            player
                .as_array()
                .ok_or_else(|| Error::Json("player strategy set must be an array".into()))?
                .iter()
                .map(|s| index_array(s, "strategy"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if declared != strategies.len() {
        return Err(Error::PlayerCountMismatch {
            declared,
            actual: strategies.len(),
        });
    }
    Game::new(resources, strategies)
}

pub fn game_from_str(text: &str) -> Result<Game> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    game_from_json(&value)
}

pub fn network_to_json(net: &NetworkGame) -> Value {
    json!({
        "nodes": net.nodes,
        "source": net.source,
        "sink": net.sink,
        "n": net.n,
        "arcs": net
            .arcs
            .iter()
            .map(|arc| json!({
                "tail": arc.tail,
                "head": arc.head,
                "a": rational_to_json(&arc.a),
                "b": rational_to_json(&arc.b),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn network_from_json(value: &Value) -> Result<NetworkGame> {
    let map = as_object(value, "network")?;
    let arcs = get_array(map, "arcs")?
        .iter()
        .map(|a| {
            let m = as_object(a, "arc")?;
            Ok(Arc {
                tail: get_usize(m, "tail")?,
                head: get_usize(m, "head")?,
                a: json_to_rational(get(m, "a")?)?,
                b: json_to_rational(get(m, "b")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let net = NetworkGame {
        nodes: get_usize(map, "nodes")?,
        source: get_usize(map, "source")?,
        sink: get_usize(map, "sink")?,
        n: get_usize(map, "n")?,
        arcs,
    };
    net.validate()?;
    Ok(net)
}

pub fn network_from_str(text: &str) -> Result<NetworkGame> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    network_from_json(&value)
}

/// Network files carry an "arcs" field; strategy-form games carry
/// "strategies".
pub fn is_network_value(value: &Value) -> bool {
    value.get("arcs").is_some()
}

pub fn profile_to_json(profile: &Profile) -> Value {
    json!(profile)
}

pub fn profile_from_json(value: &Value) -> Result<Profile> {
    index_array(value, "profile")
}

fn ratio_to_json(ratio: &RatioValue) -> Value {
    match ratio {
        RatioValue::Finite(r) => json!({
            "exact": format_rational(r),
            "decimal": ratio.as_f64(),
        }),
        RatioValue::Infinite => json!({"exact": "inf", "decimal": f64::INFINITY}),
    }
}

pub fn analysis_to_json(analysis: &Analysis) -> Value {
    json!({
        "ne_count": analysis.ne_count,
        "worst_ne": analysis.worst_ne,
        "worst_ne_cost": rational_to_json(&analysis.worst_ne_cost),
        "best_ne": analysis.best_ne,
        "best_ne_cost": rational_to_json(&analysis.best_ne_cost),
        "optimum": analysis.optimum,
        "optimum_cost": rational_to_json(&analysis.optimum_cost),
        "potential_minimizer": analysis.potential_min,
        "potential_value": rational_to_json(&analysis.potential_value),
        "poa": ratio_to_json(&analysis.poa),
        "pos": ratio_to_json(&analysis.pos),
    })
}

fn sigma_affine_to_json(cost: &SigmaAffine) -> Value {
    json!({
        "constant": rational_to_json(&cost.constant),
        "sigma_coeff": rational_to_json(&cost.sigma_coeff),
    })
}

/// Companion file for a generated instance: the profiles the construction
/// compares plus their predicted social costs as functions of sigma.
pub fn construction_profiles_json(output: &ConstructionOutput) -> Value {
    json!({
        "name": output.name,
        "rho": rational_to_json(&output.rho),
        "designated_ne": output.designated_ne,
        "comparison": output.comparison,
        "predicted_ne_cost": sigma_affine_to_json(&output.predicted_ne_cost),
        "predicted_comparison_cost": sigma_affine_to_json(&output.predicted_comparison_cost),
    })
}

pub fn verification_report_to_json(report: &VerificationReport) -> Value {
    json!({
        "name": report.name,
        "rho": report.rho.as_ref().map(|r| format_rational(r)),
        "sigma": report.sigma.as_ref().map(|s| format_rational(s)),
        "grid": report.grid,
        "holds": report.holds,
        "witness": report.witness.as_ref().map(|w| json!({
            "x": w.x,
            "y": w.y,
            "lhs": w.lhs,
            "rhs": w.rhs,
        })),
        "region_ok": report.region_ok,
        "region_label": report.region_label,
        "notes": report.notes,
    })
}

pub fn to_pretty_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).unwrap_or_else(|_| "null".into());
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_poa_general;
    use crate::rational::rat;

    #[test]
    fn game_round_trip() {
        let built = gen_poa_general(3, &rat(1, 2)).unwrap().game;
        let text = to_pretty_string(&game_to_json(&built));
        let parsed = game_from_str(&text).unwrap();
        assert_eq!(parsed, built);
    }

    #[test]
    fn game_parsing_accepts_integers_and_fractions() {
        let text = r#"{
            "n": 2,
            "resources": [{"a": 1, "b": "0"}, {"a": "1/2", "b": "0.25"}],
            "strategies": [[[0], [1]], [[0, 1]]]
        }"#;
        let game = game_from_str(text).unwrap();
        assert_eq!(game.resources[1].a, rat(1, 2));
        assert_eq!(game.resources[1].b, rat(1, 4));
    }

    #[test]
    fn game_parsing_rejects_bad_input() {
        assert!(matches!(game_from_str("not json"), Err(Error::Json(_))));
        assert!(matches!(
            game_from_str(r#"{"n": 1, "resources": [], "strategies": []}"#),
            Err(Error::PlayerCountMismatch { declared: 1, actual: 0 })
        ));
        let float = r#"{
            "n": 1,
            "resources": [{"a": 0.1, "b": 0}],
            "strategies": [[[0]]]
        }"#;
        assert!(matches!(game_from_str(float), Err(Error::Json(_))));
    }

    #[test]
    fn network_round_trip_and_detection() {
        let out = crate::generators::gen_poa_network(2, &rat(1, 1)).unwrap();
        let net = out.network.unwrap();
        let value = network_to_json(&net);
        assert!(is_network_value(&value));
        assert!(!is_network_value(&game_to_json(&out.game)));
        let parsed = network_from_json(&value).unwrap();
        assert_eq!(parsed, net);
    }

    #[test]
    fn report_serialization_shape() {
        let report = crate::verifier::verify(
            "smoothness",
            Some(&rat(1, 1)),
            Some(&rat(2, 5)),
            3,
        )
        .unwrap();
        let value = verification_report_to_json(&report);
        assert_eq!(value["holds"], Value::Bool(false));
        assert_eq!(value["witness"]["x"], json!(1));
        assert_eq!(value["rho"], json!("1"));
    }

    #[test]
    fn profiles_file_shape() {
        let out = gen_poa_general(3, &rat(1, 1)).unwrap();
        let value = construction_profiles_json(&out);
        assert_eq!(value["designated_ne"], json!([1, 1, 1]));
        assert_eq!(value["predicted_ne_cost"]["sigma_coeff"], json!("6"));
        let profile = profile_from_json(&value["comparison"]).unwrap();
        assert_eq!(profile, vec![0, 0, 0]);
    }
}
