//! The versioned envelope every file carries:
//! `{"format": "workbench/1", "kind": ..., "meta": {...}, "payload": {...}}`.

use std::io::Read;

use serde_json::{json, Value};

use crate::error::{schema, CliError, Result};

pub const FORMAT: &str = "workbench/1";
pub const TOOL: &str = concat!("workbench ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    WeakHopf,
    Tower,
    Action,
    CrossedProduct,
    Report,
    Element,
    Group,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::WeakHopf => "weak-hopf",
            Kind::Tower => "tower",
            Kind::Action => "action",
            Kind::CrossedProduct => "crossed-product",
            Kind::Report => "report",
            Kind::Element => "element",
            Kind::Group => "group",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        [Kind::WeakHopf, Kind::Tower, Kind::Action, Kind::CrossedProduct, Kind::Report, Kind::Element, Kind::Group]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Meta {
    pub tool: String,
    pub tolerance: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkbenchObject {
    pub kind: Kind,
    pub payload: Value,
    pub meta: Meta,
}

impl WorkbenchObject {
    pub fn new(kind: Kind, payload: Value, tolerance: f64, seed: u64) -> Self {
        WorkbenchObject { kind, payload, meta: Meta { tool: TOOL.into(), tolerance, seed } }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "format": FORMAT,
            "kind": self.kind.as_str(),
            "meta": { "tool": self.meta.tool, "tolerance": self.meta.tolerance, "seed": self.meta.seed },
            "payload": self.payload,
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let format = v.get("format").and_then(Value::as_str).ok_or_else(|| schema("missing \"format\""))?;
        if format != FORMAT {
            return Err(schema(format!("unsupported format \"{format}\" (expected \"{FORMAT}\")")));
        }
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| schema("missing \"kind\""))?;
        let kind = Kind::parse(kind).ok_or_else(|| schema(format!("unknown kind \"{kind}\"")))?;
        let meta = v.get("meta").ok_or_else(|| schema("missing \"meta\""))?;
        let meta = Meta {
            tool: meta.get("tool").and_then(Value::as_str).ok_or_else(|| schema("meta.tool"))?.to_string(),
            tolerance: meta.get("tolerance").and_then(Value::as_f64).ok_or_else(|| schema("meta.tolerance"))?,
            seed: meta.get("seed").and_then(Value::as_u64).ok_or_else(|| schema("meta.seed"))?,
        };
        let payload = v.get("payload").ok_or_else(|| schema("missing \"payload\""))?.clone();
        Ok(WorkbenchObject { kind, payload, meta })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn expect(self, kinds: &[Kind]) -> Result<Self> {
        if kinds.contains(&self.kind) {
            Ok(self)
        } else {
            let want: Vec<&str> = kinds.iter().map(|k| k.as_str()).collect();
            Err(schema(format!("expected a {} object, found {}", want.join(" or "), self.kind.as_str())))
        }
    }
}

/// Read a file, or standard input for `-`.
pub fn read_source(path: &str) -> Result<String> {
    let io = |e: std::io::Error| CliError::Io { path: path.to_string(), message: e.to_string() };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

pub fn load_object(path: &str) -> Result<WorkbenchObject> {
    WorkbenchObject::parse(&read_source(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_round_trips() {
        let o = WorkbenchObject::new(Kind::Tower, json!({"lambda": 0.1 + 0.2, "b": [1, 2]}), 1e-9, 7);
        let text = o.to_json();
        let back = WorkbenchObject::parse(&text).unwrap();
        assert_eq!(back, o);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rejects_other_formats() {
        let e = WorkbenchObject::parse(r#"{"format": "other/2", "kind": "tower"}"#).unwrap_err();
        assert!(matches!(e, CliError::Schema(_)));
        let e = WorkbenchObject::parse("{not json").unwrap_err();
        assert!(matches!(e, CliError::Parse(_)));
    }
}
