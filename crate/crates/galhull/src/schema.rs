//! Validation of job documents against the bundled JSON schema.
//!
//! Only the keywords the bundled schema uses are interpreted: `type`,
//! `properties`, `required`, `additionalProperties: false`, `items`,
//! `minItems`, `minimum`, `enum`, `anyOf` and local `$ref`s.

use serde_json::Value;

pub const JOB_SCHEMA: &str = include_str!("../data/schema/job.schema.json");

pub fn job_schema() -> Value {
    serde_json::from_str(JOB_SCHEMA).expect("bundled schema is valid JSON")
}

/// Every violation in `doc`, each prefixed with its JSON pointer.
pub fn validate(schema: &Value, doc: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, schema, doc, "", &mut errors);
    errors
}

fn resolve<'a>(root: &'a Value, node: &'a Value) -> &'a Value {
    match node.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let ptr = r.strip_prefix('#').unwrap_or(r);
            root.pointer(ptr).unwrap_or_else(|| panic!("unresolved schema reference {r}"))
        }
        None => node,
    }
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn at(path: &str) -> &str {
    if path.is_empty() {
        "/"
    } else {
        path
    }
}

fn check(root: &Value, node: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    let node = resolve(root, node);

    if let Some(alts) = node.get("anyOf").and_then(Value::as_array) {
        let ok = alts.iter().any(|alt| {
            let mut sub = Vec::new();
            check(root, alt, v, path, &mut sub);
            sub.is_empty()
        });
        if !ok {
            errors.push(format!("{}: value {} matches none of the allowed forms", at(path), short(v)));
        }
        return;
    }

    if let Some(ty) = node.get("type").and_then(Value::as_str) {
        if !type_matches(ty, v) {
            errors.push(format!("{}: expected {ty}, found {}", at(path), short(v)));
            return;
        }
    }

    if let Some(allowed) = node.get("enum").and_then(Value::as_array) {
        if !allowed.contains(v) {
            errors.push(format!("{}: {} is not one of {}", at(path), short(v), Value::Array(allowed.clone())));
        }
    }

    if let (Some(min), Some(x)) = (node.get("minimum").and_then(Value::as_i64), v.as_i64()) {
        if x < min {
            errors.push(format!("{}: {x} is below the minimum {min}", at(path)));
        }
    }

    if let Some(obj) = v.as_object() {
        let props = node.get("properties").and_then(Value::as_object);
        if let Some(req) = node.get("required").and_then(Value::as_array) {
            for key in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errors.push(format!("{}: missing required property {key:?}", at(path)));
                }
            }
        }
        let closed = node.get("additionalProperties") == Some(&Value::Bool(false));
        for (key, child) in obj {
            let child_path = format!("{path}/{key}");
            match props.and_then(|p| p.get(key)) {
                Some(sub) => check(root, sub, child, &child_path, errors),
                None if closed => errors.push(format!("{}: unknown property {key:?}", at(path))),
                None => {}
            }
        }
    }

    if let Some(arr) = v.as_array() {
        if let Some(min) = node.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                errors.push(format!("{}: needs at least {min} items, found {}", at(path), arr.len()));
            }
        }
        if let Some(items) = node.get("items") {
            for (i, child) in arr.iter().enumerate() {
                check(root, items, child, &format!("{path}/{i}"), errors);
            }
        }
    }
}

fn short(v: &Value) -> String {
    let s = v.to_string();
    if s.chars().count() > 40 {
        let head: String = s.chars().take(37).collect();
        format!("{head}...")
    } else {
        s
    }
}
