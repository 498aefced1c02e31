//! Schema-versioned JSON reports.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::cache::CacheStatus;
use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance attached to a block of claims.
#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    Exact,
    Absolute(f64),
    /// Measured convergence order must lie in the closed interval.
    Order(f64, f64),
    Informational,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Block {
    pub name: String,
    pub pass: bool,
    pub tolerance: Tolerance,
    pub data: Value,
}

impl Block {
    pub fn new(name: &str, pass: bool, tolerance: Tolerance, data: impl Serialize) -> Self {
        Block { name: name.into(), pass, tolerance, data: serde_json::to_value(data).unwrap_or(Value::Null) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub core_version: String,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub timestamp: u64,
    pub config: RunConfig,
    pub cache: CacheStatus,
    pub blocks: Vec<Block>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: RunConfig, cache: CacheStatus, blocks: Vec<Block>) -> Self {
        let pass = blocks.iter().all(|b| b.pass);
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "spsym".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            core_version: spsym::VERSION.into(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            config,
            cache,
            blocks,
            pass,
        }
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without the timestamp and the cache status, for comparing runs.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timestamp");
            m.remove("cache");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}
