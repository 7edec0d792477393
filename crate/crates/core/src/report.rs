//! Report types shared by the suites and the CLI.
//!
//! Schema version "1": every top-level JSON document carries
//! `"schema": "1"`. Reports are deterministic given (seed, config) — maps
//! are ordered and no timestamps appear anywhere.

use serde::Serialize;

/// One identity check: `{"identity": "fourier-inversion", "g": 2,
/// "pass": true, "witness": null}`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub g: usize,
    pub pass: bool,
    pub witness: Option<serde_json::Value>,
}

impl IdentityCheck {
    pub fn pass(identity: &str, g: usize) -> Self {
        IdentityCheck {
            identity: identity.to_string(),
            g,
            pass: true,
            witness: None,
        }
    }

    pub fn fail(identity: &str, g: usize, witness: serde_json::Value) -> Self {
        IdentityCheck {
            identity: identity.to_string(),
            g,
            pass: false,
            witness: Some(witness),
        }
    }

    pub fn of(identity: &str, g: usize, pass: bool, witness: serde_json::Value) -> Self {
        if pass {
            IdentityCheck::pass(identity, g)
        } else {
            IdentityCheck::fail(identity, g, witness)
        }
    }
}

/// A named batch of identity checks.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: String,
    pub g: usize,
    pub seed: u64,
    pub trials: usize,
    pub pass: bool,
    pub checks: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn new(suite: &str, g: usize, seed: u64, trials: usize, checks: Vec<IdentityCheck>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            schema: "1",
            suite: suite.to_string(),
            g,
            seed,
            trials,
            pass,
            checks,
        }
    }

    pub fn merge(suite: &str, g: usize, seed: u64, trials: usize, parts: Vec<SuiteReport>) -> Self {
        let checks = parts.into_iter().flat_map(|p| p.checks).collect();
        SuiteReport::new(suite, g, seed, trials, checks)
    }
}
