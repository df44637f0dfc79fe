use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Na,
}

/// Where a check failed: the stage, the element and the stores involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub stage: u64,
    pub element: Option<u64>,
    pub addresses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub detail: String,
}

impl CheckResult {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            detail: detail.into(),
        }
    }

    pub fn na(name: &str, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Na,
            witness: None,
            detail: detail.into(),
        }
    }

    pub fn fail(
        name: &str,
        stage: u64,
        element: Option<u64>,
        addresses: Vec<String>,
        detail: impl Into<String>,
    ) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            witness: Some(Witness {
                stage,
                element,
                addresses,
            }),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub run_id: String,
    pub stages: u64,
    /// The finiteness threshold the surrogate checks used.
    pub threshold: usize,
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
