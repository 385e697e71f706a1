//! The report envelope written by every command.
//!
//! Keys appear in declaration order and nothing time- or host-dependent
//! beyond the resolved thread count is recorded, so two runs with the same
//! configuration print the same bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+", env!("FSZLAB_GIT_DESCRIBE"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub budget: u64,
    pub threads: usize,
    pub strategy: String,
    pub m_policy: String,
    pub seed: u64,
    pub full_tuples: bool,
    pub direct_limit: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    AsExpected,
    Deviation,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::AsExpected
        } else {
            Status::Deviation
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::AsExpected => 0,
            Status::Deviation => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Canonical form of the group expression, when the command takes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub config: Config,
    pub result: Value,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, input: Option<String>, config: Config, result: Value, status: Status) -> Self {
        Report {
            tool: "fszlab".into(),
            version: VERSION.into(),
            command: command.into(),
            input,
            config,
            result,
            status,
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
