//! JSON/CSV emission. Every float is written with 17 significant digits.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Number, Value};

pub fn fmt_f64(v: f64) -> String {
    let s = format!("{v:.16e}");
    match s.split_once('e') {
        Some((mant, exp)) if !exp.starts_with('-') => format!("{mant}e+{exp}"),
        _ => s,
    }
}

/// Rewrites every non-integer number in `v` to 17 significant digits.
fn widen(v: Value) -> Value {
    match v {
        Value::Number(n) if n.as_u64().is_none() && n.as_i64().is_none() => match n.as_f64() {
            Some(f) => Value::Number(
                fmt_f64(f)
                    .parse::<Number>()
                    .expect("formatted float is a JSON number"),
            ),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(widen).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, widen(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> anyhow::Result<Value> {
    Ok(widen(serde_json::to_value(x)?))
}

pub struct Meta {
    command: &'static str,
    config: Value,
    started: Instant,
}

impl Meta {
    pub fn new<C: Serialize>(command: &'static str, config: &C) -> anyhow::Result<Self> {
        Ok(Meta {
            command,
            config: to_value(config)?,
            started: Instant::now(),
        })
    }

    pub fn value(&self, with_time: bool) -> Value {
        let mut m = Map::new();
        m.insert(
            "version".into(),
            Value::String(env!("CARGO_PKG_VERSION").into()),
        );
        m.insert("command".into(), Value::String(self.command.into()));
        m.insert("config".into(), self.config.clone());
        if with_time {
            m.insert(
                "wall_time_s".into(),
                widen(Value::from(self.started.elapsed().as_secs_f64())),
            );
        }
        Value::Object(m)
    }
}

/// `{"meta": ..., "result": ...}` as one document.
pub fn emit_document(out: &mut dyn Write, meta: &Meta, result: Value) -> anyhow::Result<()> {
    let mut doc = Map::new();
    doc.insert("meta".into(), meta.value(true));
    doc.insert("result".into(), result);
    serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
    writeln!(out)?;
    Ok(())
}

pub fn emit_line(out: &mut dyn Write, key: &str, v: Value) -> anyhow::Result<()> {
    let mut m = Map::new();
    m.insert(key.into(), v);
    serde_json::to_writer(&mut *out, &Value::Object(m))?;
    writeln!(out)?;
    Ok(())
}
