use std::path::Path;

use hypermono::{DiGraph, Vertex};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input, bad flags: exit 2.
    Input { path: Option<String>, message: String },
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure::Input {
            path: None,
            message: message.into(),
        }
    }

    pub fn at(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Input {
            path: Some(path.display().to_string()),
            message: e.to_string(),
        }
    }

    /// One JSON object per line on the diagnostic stream.
    pub fn line(&self) -> String {
        let Failure::Input { path, message } = self;
        let mut m = Map::new();
        m.insert("level".into(), json!("error"));
        m.insert("kind".into(), json!("input"));
        if let Some(p) = path {
            m.insert("path".into(), json!(p));
        }
        m.insert("message".into(), json!(message));
        Value::Object(m).to_string()
    }
}

impl From<hypermono::Error> for Failure {
    fn from(e: hypermono::Error) -> Self {
        Failure::input(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, Failure>;

/// Report assembled by a subcommand; printed only once complete.
pub struct Report {
    command: Vec<String>,
    inputs: Vec<Value>,
    window: Map<String, Value>,
    results: Map<String, Value>,
    summary: Vec<String>,
    /// Every requested certificate or check succeeded.
    pub success: bool,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            window: Map::new(),
            results: Map::new(),
            summary: Vec::new(),
            success: true,
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(bytes)),
        }));
    }

    pub fn window(&mut self, key: &str, value: impl Into<Value>) {
        self.window.insert(key.into(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.into(), value.into());
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn fail(&mut self, line: impl Into<String>) {
        self.success = false;
        self.summary.push(line.into());
    }

    pub fn summary(&self) -> &[String] {
        &self.summary
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "window": self.window,
            "results": self.results,
            "status": if self.success { "ok" } else { "negative" },
        });
        serde_json::to_string_pretty(&v).expect("report values serialize")
    }
}

pub fn read(path: &Path, report: &mut Report) -> CmdResult<String> {
    let bytes = std::fs::read(path).map_err(|e| Failure::at(path, e))?;
    report.input(path, &bytes);
    String::from_utf8(bytes).map_err(|e| Failure::at(path, e))
}

pub fn name(d: &DiGraph, v: Vertex) -> Value {
    json!(d.name(v))
}

pub fn names<'a>(d: &DiGraph, vs: impl IntoIterator<Item = &'a Vertex>) -> Value {
    json!(vs.into_iter().map(|&v| d.name(v)).collect::<Vec<_>>())
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Replaces vertex indices stored under the given keys by vertex names.
pub fn rename(d: &DiGraph, mut v: Value, keys: &[&str]) -> Value {
    fn fix(d: &DiGraph, v: &mut Value) {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_u64() {
                    if let Some(w) = d.vertices().nth(i as usize) {
                        *v = json!(d.name(w));
                    }
                }
            }
            Value::Array(xs) => xs.iter_mut().for_each(|x| fix(d, x)),
            _ => {}
        }
    }
    if let Value::Object(m) = &mut v {
        for k in keys {
            if let Some(x) = m.get_mut(*k) {
                fix(d, x);
            }
        }
    }
    v
}
