//! Versioned report payloads shared by the command-line front end and the
//! verification suite. Serialization uses sorted object keys throughout, so
//! byte-identical output for identical inputs is the default; timing lives
//! in dedicated `elapsed_ms` fields that consumers may normalize away.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: "pass".into(),
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: "fail".into(),
            witness: Some(witness.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub inputs: serde_json::Value,
    pub outputs: serde_json::Value,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            schema: "report/1".into(),
            command: command.into(),
            inputs: serde_json::Value::Null,
            outputs: serde_json::Value::Null,
            checks: Vec::new(),
            seed: 0,
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let mut r = Report::new("z");
        r.inputs = serde_json::json!({"form": "<2,3>", "sym": "++"});
        r.checks.push(Check::pass("square"));
        r.checks.push(Check::fail("other", "witness here"));
        assert!(!r.passed());
        let text = r.to_json_string();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks, r.checks);
        assert_eq!(back.schema, "report/1");
    }
}
