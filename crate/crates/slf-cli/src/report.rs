//! JSON reports: every subcommand emits one report object on stdout.

use serde_json::{json, Value};

/// FNV-1a digest of an input, so reports pin down what they were run on.
pub fn digest(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

pub struct Report {
    body: serde_json::Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut body = serde_json::Map::new();
        body.insert("command".into(), json!(command));
        body.insert("inputs".into(), json!([]));
        Report { body }
    }

    pub fn input(&mut self, name: &str, content: &str) -> &mut Report {
        if let Some(Value::Array(arr)) = self.body.get_mut("inputs") {
            arr.push(json!({ "name": name, "digest": digest(content.as_bytes()) }));
        }
        self
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Report {
        self.body.insert(key.into(), value);
        self
    }

    /// Writes the report to stdout in one call.
    pub fn emit(&self, compact: bool) {
        let v = Value::Object(self.body.clone());
        let text = if compact {
            v.to_string()
        } else {
            serde_json::to_string_pretty(&v).expect("serializable")
        };
        println!("{text}");
    }
}
