use serde::{Deserialize, Serialize};

/// Outcome of a membership check, with the instantiated inequality for
/// every stratum that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub ok: bool,
    pub explanation: String,
}

impl Verdict {
    pub(crate) fn from_failures(check: &str, condition: &str, failures: Vec<String>) -> Self {
        let ok = failures.is_empty();
        let explanation = if ok { format!("{condition} holds") } else { failures.join("; ") };
        Verdict { check: check.to_string(), ok, explanation }
    }

    pub(crate) fn single(check: &str, ok: bool, explanation: impl Into<String>) -> Self {
        Verdict { check: check.to_string(), ok, explanation: explanation.into() }
    }
}
