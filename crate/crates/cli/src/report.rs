//! The JSON document every command prints.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "tool": {"name": "vkf", "version": "0.1.0"},
//!   "command": {"name": "height", "argv": ["height", "rp2_6"]},
//!   "inputs": [{"role": "complex", "source": "rp2_6", "sha256": "…"}],
//!   "result": { … },
//!   "timings": {"total_ms": 12}
//! }
//! ```
//!
//! Everything except `timings` is a function of the inputs and seeds.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: CommandEcho,
    pub inputs: Vec<InputDigest>,
    pub result: Value,
    pub timings: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub argv: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(role: &str, source: &str, bytes: &[u8]) -> Self {
        InputDigest {
            role: role.to_string(),
            source: source.to_string(),
            sha256: sha256_hex(bytes),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(name: &str, argv: Vec<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: "vkf",
                version: env!("CARGO_PKG_VERSION"),
            },
            command: CommandEcho {
                name: name.to_string(),
                argv,
            },
            inputs: Vec::new(),
            result: Value::Null,
            timings: BTreeMap::new(),
        }
    }

    pub fn to_pretty_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
