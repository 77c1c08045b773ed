//! JSON Schemas of the documents each command reads, keyed by flag name.

use serde_json::{json, Value};

use super::{CliError, COMMANDS, SCHEMA_VERSION};

fn index_map(values: Value) -> Value {
    json!({
        "type": "object",
        "description": "keyed by stratum index \"1\", \"2\", ...",
        "patternProperties": {"^[1-9][0-9]*$": values},
        "additionalProperties": false
    })
}

fn incidence() -> Value {
    json!({"oneOf": [{"type": "integer", "minimum": 0}, {"const": "empty"}]})
}

fn strata() -> Value {
    json!({
        "description": "vertex<d>, smooth<d>, or a stratification document",
        "oneOf": [
            {"type": "string"},
            {
                "type": "object",
                "properties": {
                    "schema": {"const": SCHEMA_VERSION},
                    "dim": {"type": "integer", "minimum": 0},
                    "strata": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {
                                "i": {"type": "integer", "minimum": 1},
                                "codim": {"type": "integer", "minimum": 1},
                                "label": {"type": "string"}
                            },
                            "required": ["i", "codim", "label"]
                        }
                    },
                    "model": {"enum": ["generic", "vertex", "product"]},
                    "base": {"enum": ["generic", "vertex"]},
                    "fiberDim": {"type": "integer", "minimum": 0}
                },
                "required": ["dim"],
                "additionalProperties": false
            }
        ]
    })
}

fn bound() -> Value {
    json!({
        "description": "zero, top, zero<d>, top<d>, or a nondecreasing array of nonnegative integers",
        "oneOf": [{"type": "string"}, {"type": "array", "items": {"type": "integer", "minimum": 0}}]
    })
}

fn pattern() -> Value {
    json!({
        "type": "object",
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "dim": {"type": "integer", "minimum": 0},
            "incidence": index_map(incidence()),
            "label": {"type": "string"},
            "strata": strata()
        },
        "required": ["dim", "incidence"],
        "additionalProperties": false
    })
}

fn joint() -> Value {
    json!({
        "type": "object",
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "a": pattern(),
            "b": pattern(),
            "joint": index_map(incidence()),
            "total": incidence()
        },
        "required": ["a", "b", "joint", "total"],
        "additionalProperties": false
    })
}

fn cocycle() -> Value {
    json!({
        "type": "object",
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "t": {"type": "integer", "minimum": 0},
            "targetDim": {"type": "integer", "minimum": 0},
            "excess": index_map(json!({"type": "integer", "minimum": 0})),
            "strata": strata()
        },
        "required": ["t", "targetDim", "excess"],
        "additionalProperties": false
    })
}

fn ranks() -> Value {
    json!({
        "type": "object",
        "properties": {
            "generic": {"type": "integer", "minimum": 0},
            "strata": index_map(json!({"type": "integer", "minimum": 0}))
        },
        "required": ["generic", "strata"],
        "additionalProperties": false
    })
}

fn family() -> Value {
    json!({
        "type": "object",
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "generic": pattern(),
            "fibers": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {"t": {"type": "string"}, "pattern": pattern()},
                    "required": ["t", "pattern"]
                }
            },
            "endpoints": {"type": "array", "items": pattern(), "minItems": 2, "maxItems": 2},
            "flatOverLine": {"type": "boolean"},
            "excess": pattern()
        },
        "required": ["generic", "fibers", "endpoints", "flatOverLine"],
        "additionalProperties": false
    })
}

fn presentation() -> Value {
    json!({
        "type": "object",
        "properties": {
            "name": {"type": "string"},
            "dim": {"type": "integer", "minimum": 0},
            "basis": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "products": {
                "type": "object",
                "description": "\"a*b\" to coefficients over the basis of the product's degree",
                "additionalProperties": {"type": "array", "items": {"type": "integer"}}
            },
            "hyperplane": {"type": "array", "items": {"type": "integer"}},
            "degree": {"type": "array", "items": {"type": "integer"}},
            "relations": {
                "type": "object",
                "additionalProperties": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
            }
        },
        "required": ["dim", "basis", "degree"],
        "additionalProperties": false
    })
}

fn cone() -> Value {
    json!({
        "description": "zobel, a base name (point, P<n>, quadric_surface, product(a,b)), or a cone document",
        "oneOf": [
            {"type": "string"},
            {
                "type": "object",
                "properties": {"base": {"oneOf": [{"type": "string"}, presentation()]}},
                "required": ["base"],
                "additionalProperties": false
            }
        ]
    })
}

fn class_body() -> Value {
    json!({
        "type": "object",
        "properties": {
            "r": {"type": "integer", "minimum": 0},
            "p": {"type": "integer", "minimum": 0},
            "payload": {"type": "array", "items": {"type": "integer"}}
        },
        "required": ["r", "p", "payload"],
        "additionalProperties": false
    })
}

fn class() -> Value {
    json!({
        "description": "mode:r[:p]:(c1,..), a Zobel name L/M/N/D/Q, a class document, or a full cone-and-class document",
        "oneOf": [
            {"type": "string"},
            class_body(),
            {
                "type": "object",
                "properties": {"schema": {"const": SCHEMA_VERSION}, "cone": cone(), "class": class_body()},
                "required": ["cone", "class"],
                "additionalProperties": false
            }
        ]
    })
}

fn matrix() -> Value {
    json!({"type": "array", "items": {"type": "array", "items": {"type": "integer"}}})
}

fn group() -> Value {
    json!({
        "type": "object",
        "properties": {"rank": {"type": "integer", "minimum": 0}, "relations": matrix()},
        "required": ["rank"],
        "additionalProperties": false
    })
}

fn map() -> Value {
    json!({
        "type": "object",
        "properties": {"source": group(), "target": group(), "matrix": matrix()},
        "required": ["source", "target", "matrix"],
        "additionalProperties": false
    })
}

fn int() -> Value {
    json!({"type": "integer", "minimum": 0})
}

fn command(name: &str, properties: Value, required: &[&str]) -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": format!("pervchow {name}"),
        "description": "each property is a command-line flag; document values may be inline JSON, a file path, or - for stdin",
        "schema": SCHEMA_VERSION,
        "type": "object",
        "properties": properties,
        "required": required,
        "additionalProperties": false
    })
}

fn schema_value(name: &str) -> Option<Value> {
    let v = match name {
        "validate" => command(
            name,
            json!({
                "strata": strata(), "perversity": bound(), "pattern": pattern(), "joint": joint(),
                "cocycle": cocycle(), "family": family(), "ranks": ranks(), "presentation": presentation(),
                "cone": cone(), "class": class(), "group": group(), "map": map()
            }),
            &[],
        ),
        "check-cycle" => command(
            name,
            json!({
                "strata": strata(), "pattern": pattern(), "perversity": bound(),
                "datum": {"type": "object", "additionalProperties": int()},
                "ranks": ranks(), "family": family()
            }),
            &[],
        ),
        "check-cocycle" => command(
            name,
            json!({
                "strata": strata(), "cocycle": cocycle(),
                "fibers": {"type": "array", "items": int()}, "source-dim": int(),
                "perversity": bound(), "ranks": ranks()
            }),
            &[],
        ),
        "check-star" => command(
            name,
            json!({"strata": strata(), "joint": joint(), "c": bound(), "cone": cone(), "a": class(), "b": class()}),
            &[],
        ),
        "push" => command(
            name,
            json!({
                "strata": strata(), "pattern": pattern(), "c": bound(), "target": strata(),
                "cocycle": cocycle(), "codim": int(), "perversity": bound()
            }),
            &[],
        ),
        "pull" => command(name, json!({"strata": strata(), "pattern": pattern(), "e": int(), "perversity": bound()}), &["pattern", "e"]),
        "suspend" => command(
            name,
            json!({"strata": strata(), "pattern": pattern(), "times": int(), "perversity": bound()}),
            &["strata"],
        ),
        "join" => command(name, json!({"strata": strata(), "a": cocycle(), "b": cocycle(), "p": bound(), "q": bound()}), &["a", "b"]),
        "slice" => command(
            name,
            json!({"strata": strata(), "cocycle": cocycle(), "count": int(), "sets": index_map(incidence()), "perversity": bound()}),
            &["cocycle"],
        ),
        "cap" => command(
            name,
            json!({"strata": strata(), "cocycle": cocycle(), "pattern": pattern(), "p": bound(), "q": bound()}),
            &["cocycle", "pattern"],
        ),
        "groups" => command(name, json!({"cone": cone(), "r": int(), "p": int()}), &["cone"]),
        "intersect" | "pairing" => command(name, json!({"cone": cone(), "a": class(), "b": class()}), &["a", "b"]),
        "compare" => command(
            name,
            json!({"cone": cone(), "r": int(), "from": int(), "to": int(), "class": class()}),
            &["cone", "r", "from", "to"],
        ),
        "snf" => command(name, json!({"matrix": matrix()}), &["matrix"]),
        "exact" => command(name, json!({"f": map(), "g": map()}), &["f", "g"]),
        "catalog" => command(
            name,
            json!({"name": {"type": "string", "description": "zobel or a cone base name"}, "verify": {"type": "boolean"}}),
            &["name"],
        ),
        _ => return None,
    };
    Some(v)
}

/// The input schema of `command` as pretty-printed JSON.
///
/// ```
/// let s = pervchow::cli::emit_schema("check-star").unwrap();
/// assert!(s.contains("\"joint\"") && s.contains("\"total\"") && s.contains("\"c\""));
/// assert!(pervchow::cli::emit_schema("bogus").is_err());
/// ```
pub fn emit_schema(name: &str) -> Result<String, CliError> {
    debug_assert!(COMMANDS.iter().all(|c| schema_value(c).is_some()));
    let v = schema_value(name).ok_or_else(|| CliError::UnknownCommand(name.to_string()))?;
    Ok(serde_json::to_string_pretty(&v).expect("schema serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_command_has_a_schema() {
        for c in COMMANDS {
            let text = emit_schema(c).unwrap();
            let v: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["schema"], 1);
        }
    }

    #[test]
    fn groups_schema() {
        let s = emit_schema("groups").unwrap();
        for key in ["\"cone\"", "\"r\"", "\"p\""] {
            assert!(s.contains(key));
        }
        assert_eq!(emit_schema("bogus"), Err(CliError::UnknownCommand("bogus".into())));
    }
}
