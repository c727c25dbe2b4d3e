use lds_core::Budget;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::FORMAT;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engine {
    pub name: String,
    pub version: String,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            name: "lds-toolkit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Decided,
    Inconclusive,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Decided => 0,
            Status::Inconclusive => 2,
            Status::Error => 1,
        }
    }
}

/// Error surfaced with the module that raised it and a stable code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub module: String,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn new(module: &str, code: &str, message: impl Into<String>) -> Self {
        Failure {
            module: module.into(),
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn from_core(module: &str, e: lds_core::Error) -> Self {
        Failure::new(module, e.code(), e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub format: String,
    pub command: CommandEcho,
    pub engine: Engine,
    pub budget: Budget,
    pub status: Status,
    pub payload: Value,
    #[serde(default)]
    pub certificates: Vec<Value>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub metadata: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
    pub timing: Timing,
}

impl ResultEnvelope {
    pub fn new(command: CommandEcho, budget: Budget) -> Self {
        ResultEnvelope {
            format: FORMAT.into(),
            command,
            engine: Engine::default(),
            budget,
            status: Status::Decided,
            payload: Value::Null,
            certificates: Vec::new(),
            metadata: Value::Null,
            error: None,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}
