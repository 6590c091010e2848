//! Reports: canonical JSON, text rendering and structural comparison.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::schema::{InputRecord, SCHEMA_VERSION};
use crate::{Budgets, Command};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Evidence,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass | Verdict::Evidence => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

/// What a command computed, before the replay bookkeeping is attached.
#[derive(Debug)]
pub struct Outcome {
    pub kind: &'static str,
    pub verdict: Verdict,
    pub payload: Value,
}

impl Outcome {
    pub fn new(kind: &'static str, verdict: Verdict, payload: impl Serialize) -> Self {
        Outcome {
            kind,
            verdict,
            payload: serde_json::to_value(payload).expect("payloads serialize"),
        }
    }
}

/// Everything needed to re-run a command without touching the filesystem.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReplaySection {
    pub command: Command,
    pub budgets: Budgets,
    pub inputs: Vec<InputRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub kind: String,
    pub verdict: Verdict,
    pub payload: Value,
    pub replay: ReplaySection,
    pub tool_version: String,
    pub input_digest: String,
}

impl Report {
    pub fn new(outcome: Outcome, replay: ReplaySection, input_digest: String) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            kind: outcome.kind.to_string(),
            verdict: outcome.verdict,
            payload: outcome.payload,
            replay,
            tool_version: TOOL_VERSION.to_string(),
            input_digest,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        render_json(&self.to_value())
    }

    /// Human-readable rendering derived from the JSON form.
    pub fn to_text(&self) -> String {
        let v = self.to_value();
        let mut out = format!(
            "{} {}\n",
            self.kind,
            serde_json::to_string(&v["verdict"])
                .unwrap()
                .trim_matches('"')
        );
        flatten(&v["payload"], "payload", &mut out);
        out.push_str(&format!(
            "input_digest {}\ntool_version {}\n",
            self.input_digest, self.tool_version
        ));
        out
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn flatten(v: &Value, at: &str, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(x, &format!("{at}.{k}"), out);
            }
        }
        Value::Array(a) if !a.is_empty() && a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &format!("{at}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{at} = {v}\n")),
    }
}

/// JSON pointer of the first node where `a` and `b` differ, walking keys in
/// sorted order and arrays by index.
pub fn first_difference(a: &Value, b: &Value) -> Option<String> {
    fn walk(a: &Value, b: &Value, at: &str) -> Option<String> {
        match (a, b) {
            (Value::Object(x), Value::Object(y)) => {
                let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
                keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                    (Some(p), Some(q)) => walk(p, q, &format!("{at}/{k}")),
                    _ => Some(format!("{at}/{k}")),
                })
            }
            (Value::Array(x), Value::Array(y)) => {
                let shared = x
                    .iter()
                    .zip(y)
                    .enumerate()
                    .find_map(|(i, (p, q))| walk(p, q, &format!("{at}/{i}")));
                shared.or_else(|| {
                    (x.len() != y.len()).then(|| format!("{at}/{}", x.len().min(y.len())))
                })
            }
            _ => (a != b).then(|| at.to_string()),
        }
    }
    walk(a, b, "")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn difference_paths() {
        let a = json!({"a": [1, 2, {"b": 3}], "c": 1});
        assert_eq!(first_difference(&a, &a), None);
        let b = json!({"a": [1, 2, {"b": 4}], "c": 2});
        assert_eq!(first_difference(&a, &b).as_deref(), Some("/a/2/b"));
        let c = json!({"a": [1, 2], "c": 1});
        assert_eq!(first_difference(&a, &c).as_deref(), Some("/a/2"));
        let d = json!({"a": [1, 2, {"b": 3}]});
        assert_eq!(first_difference(&a, &d).as_deref(), Some("/c"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Verdict::Pass.exit_code(), 0);
        assert_eq!(Verdict::Evidence.exit_code(), 0);
        assert_eq!(Verdict::Fail.exit_code(), 1);
        assert_eq!(Verdict::Inconclusive.exit_code(), 2);
    }

    #[test]
    fn sorted_keys() {
        let v = json!({"z": 1, "a": {"y": 2, "b": 3}});
        assert_eq!(
            render_json(&v),
            "{\n  \"a\": {\n    \"b\": 3,\n    \"y\": 2\n  },\n  \"z\": 1\n}\n"
        );
    }
}
