use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// One inequality `lhs <= rhs + slack` of a proof trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Link {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl Link {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        Link { name: name.into(), lhs, rhs, slack, pass: lhs <= rhs + slack }
    }
}

/// Ordered record of every link of a discretized proof.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Certificate {
    pub theorem: String,
    pub links: Vec<Link>,
    pub metadata: BTreeMap<String, Value>,
    /// Reason the trace stopped early, if it did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halted: Option<String>,
}

impl Certificate {
    pub fn new(theorem: impl Into<String>) -> Self {
        Certificate { theorem: theorem.into(), ..Default::default() }
    }

    /// Appends `lhs <= rhs + slack` and returns its pass flag.
    pub fn push(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> bool {
        let link = Link::new(name, lhs, rhs, slack);
        let pass = link.pass;
        self.links.push(link);
        pass
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) {
        self.metadata.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn halt(&mut self, reason: impl Into<String>) {
        self.halted = Some(reason.into());
    }

    /// All links pass and the trace ran to completion.
    pub fn passed(&self) -> bool {
        self.halted.is_none() && self.links.iter().all(|l| l.pass)
    }

    pub fn link(&self, name: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.name == name)
    }

    pub fn to_json(&self) -> String {
        crate::report::to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_matches_inequality() {
        let mut c = Certificate::new("t");
        assert!(c.push("a", 1.0, 1.0, 0.0));
        assert!(c.push("b", 1.05, 1.0, 0.1));
        assert!(!c.push("c", 2.0, 1.0, 0.5));
        assert!(!c.passed());
        assert_eq!(c.links.len(), 3);
    }

    #[test]
    fn halted_certificate_fails() {
        let mut c = Certificate::new("t");
        c.push("a", 0.0, 1.0, 0.0);
        c.halt("hypothesis");
        assert!(!c.passed());
        assert!(c.to_json().contains("\"halted\""));
    }
}
