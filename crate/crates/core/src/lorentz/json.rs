//! JSON documents for step functions and product grids.
//!
//! `{"space": {"kind", "masses"}, "levels": [[value, mass], ...]}` and
//! `{"xMasses", "yMasses", "values"}` (row-major). In exact mode every number
//! is written as a shortest round-trip decimal string; readers accept numbers
//! and strings alike.

use serde_json::{json, Map, Value};

use super::product::ProductStepFunction;
use super::space::{MeasureSpace, SpaceKind};
use super::step::{Level, StepFunction};
use crate::{Error, Result};

fn encode(x: f64, exact: bool) -> Value {
    if !exact {
        return json!(x);
    }
    let a = x.abs();
    let s = if a == 0.0 || (1e-6..1e16).contains(&a) { format!("{x}") } else { format!("{x:e}") };
    Value::String(s)
}

fn decode(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    }
    .ok_or_else(|| Error::Format(format!("{what}: expected a number or decimal string, got {v}")))
}

fn decode_list(v: Option<&Value>, what: &str) -> Result<Vec<f64>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format(format!("missing array `{what}`")))?;
    arr.iter().map(|x| decode(x, what)).collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key)
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Format(format!("{what} must be a JSON object")))
}

impl StepFunction {
    pub fn to_json(&self, exact: bool) -> Value {
        let kind = serde_json::to_value(self.space().kind()).expect("enum serializes");
        let masses: Vec<Value> = self.space().masses().iter().map(|m| encode(*m, exact)).collect();
        let levels: Vec<Value> = self
            .levels()
            .iter()
            .map(|l| Value::Array(vec![encode(l.value, exact), encode(l.mass, exact)]))
            .collect();
        json!({ "space": { "kind": kind, "masses": masses }, "levels": levels })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "step function")?;
        let space = as_object(
            field(obj, "space").ok_or_else(|| Error::Format("missing `space`".into()))?,
            "space",
        )?;
        let kind: SpaceKind = serde_json::from_value(
            field(space, "kind").cloned().unwrap_or(Value::String("discrete-with-weights".into())),
        )?;
        let masses = decode_list(field(space, "masses"), "masses")?;
        let raw = field(obj, "levels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("missing array `levels`".into()))?;
        let mut levels = Vec::with_capacity(raw.len());
        for l in raw {
            match l.as_array().map(Vec::as_slice) {
                Some([v, m]) => levels.push(Level::new(decode(v, "level value")?, decode(m, "level mass")?)),
                _ => return Err(Error::Format(format!("level must be a [value, mass] pair, got {l}"))),
            }
        }
        StepFunction::new(MeasureSpace::new(kind, masses)?, levels)
    }
}

impl ProductStepFunction {
    pub fn to_json(&self, exact: bool) -> Value {
        let list = |xs: &[f64]| Value::Array(xs.iter().map(|x| encode(*x, exact)).collect());
        json!({
            "xMasses": list(self.x_space().masses()),
            "yMasses": list(self.y_space().masses()),
            "values": list(self.values()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "product step function")?;
        let x = MeasureSpace::discrete(decode_list(field(obj, "xMasses"), "xMasses")?)?;
        let y = MeasureSpace::discrete(decode_list(field(obj, "yMasses"), "yMasses")?)?;
        let values = decode_list(field(obj, "values"), "values")?;
        ProductStepFunction::new(x, y, values)
    }
}
