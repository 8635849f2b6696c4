//! Machine-readable run reports with byte-stable output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            path: path.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Wall time is only present when requested, so that default output is a
/// pure function of the inputs and options.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub verb: String,
    pub inputs: Vec<InputDigest>,
    pub options: Value,
    pub results: Value,
    pub passed: bool,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(Error::domain(format!("unknown report format `{other}`"))),
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            if map.is_empty() {
                let _ = writeln!(out, "{prefix} = {{}}");
            }
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                let _ = writeln!(out, "{prefix} = []");
            }
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        leaf => {
            let _ = writeln!(out, "{prefix} = {leaf}");
        }
    }
}

impl Report {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// JSON with sorted keys, or one `path = value` line per leaf of the same
    /// JSON value.
    pub fn emit(&self, format: ReportFormat) -> String {
        let v = self.to_value();
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(&v).expect("value serializes") + "\n",
            ReportFormat::Text => {
                let mut out = String::new();
                flatten("", &v, &mut out);
                out
            }
        }
    }
}

/// Leaves of a text report, keyed by path.
pub fn parse_text_leaves(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report {
            verb: "spectrum".into(),
            inputs: vec![InputDigest::of("x.pba", b"pba 1\n")],
            options: json!({"tolerance": 1e-9}),
            results: json!({"zeta": [1, 2], "alpha": {"b": true, "a": "s"}, "empty": []}),
            passed: true,
            summary: "ok".into(),
            wall_time_ms: None,
        }
    }

    #[test]
    fn json_keys_are_sorted_and_stable() {
        let r = sample();
        let text = r.emit(ReportFormat::Json);
        assert_eq!(text, r.clone().emit(ReportFormat::Json));
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(!text.contains("wall_time_ms"));
    }

    #[test]
    fn text_and_json_carry_the_same_leaves() {
        let r = sample();
        let leaves = parse_text_leaves(&r.emit(ReportFormat::Text));
        let v: Value = serde_json::from_str(&r.emit(ReportFormat::Json)).unwrap();
        assert!(leaves.contains(&("results.alpha.a".into(), "\"s\"".into())));
        assert!(leaves.contains(&("results.zeta[1]".into(), "2".into())));
        for (k, val) in &leaves {
            let ptr = format!("/{}", k.replace('.', "/").replace('[', "/").replace(']', ""));
            assert_eq!(v.pointer(&ptr).unwrap().to_string(), *val, "{k}");
        }
    }

    #[test]
    fn digest_tracks_content() {
        let a = InputDigest::of("f", b"abc");
        assert_eq!(a.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert_ne!(a.sha256, InputDigest::of("f", b"abd").sha256);
        assert!("yaml".parse::<ReportFormat>().is_err());
    }
}
