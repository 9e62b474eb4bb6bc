//! JSON encodings of jets, maps and fields. Objects are emitted with sorted
//! keys so that output is byte-for-byte reproducible.

use serde_json::{json, Map, Value};

use crate::cmoperator::{Component, VFieldJet};
use crate::jetring::{Monomial, Var, WeightedPoly};
use crate::regnorm::PointMap;

pub fn monomial(m: &Monomial) -> Value {
    let mut exps = Map::new();
    for v in Var::ALL {
        let e = m.exp(v);
        if e > 0 {
            exps.insert(v.name().to_string(), json!(e));
        }
    }
    Value::Object(exps)
}

pub fn poly(p: &WeightedPoly) -> Value {
    let terms: Vec<Value> =
        p.terms().map(|(m, c)| json!({ "coef": c.to_string(), "exps": monomial(m) })).collect();
    json!({ "order": p.order(), "terms": terms, "text": p.to_string() })
}

pub fn point_map(m: &PointMap) -> Value {
    json!({ "X": poly(&m.x), "Y": poly(&m.y), "A": poly(&m.a), "B": poly(&m.b) })
}

pub fn field(v: &VFieldJet) -> Value {
    let mut out = Map::new();
    for c in Component::ALL {
        let key = match c {
            Component::Eta => "eta",
            Component::Alpha => "alpha",
            Component::Beta => "beta",
            Component::Xi => "xi",
        };
        out.insert(key.into(), poly(v.get(c)));
    }
    out.insert("text".into(), json!(v.to_string()));
    Value::Object(out)
}

/// Rebuilds every object with its keys in sorted order.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub fn to_string(v: Value) -> String {
    serde_json::to_string_pretty(&canonical(v)).expect("serializable")
}
