//! The versioned JSON report emitted by every CLI command.
//!
//! Re-running the echoed command under the same config reproduces the
//! `result` bit-for-bit; the timestamp is the only nondeterministic field
//! and is omitted under `--no-timestamp`.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "report/v1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    /// Echo of the invoking command line.
    pub command: String,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<f64>,
    pub inputs: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants_ledger: Option<Value>,
    pub diagnostics: Value,
}

impl Report {
    pub fn new(command: String, config_hash: String, with_timestamp: bool) -> Report {
        let timestamp_unix = if with_timestamp {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs_f64())
        } else {
            None
        };
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_hash,
            timestamp_unix,
            inputs: Value::Null,
            result: Value::Null,
            constants_ledger: None,
            diagnostics: Value::Object(serde_json::Map::new()),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
