//! Certificate rendering: a human-readable table and the line-delimited
//! `key = value` structured format (schema `chcert-cert/1`).
//!
//! Structured output is deterministic given the configuration and tool
//! version; only the `generated` timestamp line varies between runs.

use chcert::certificate::VerificationCertificate;
use chcert::henon::EpsilonScan;

use crate::config::RunConfig;

pub const SCHEMA: &str = "chcert-cert/1";

/// Everything a run produced.
pub struct RunOutcome {
    pub cert: VerificationCertificate,
    pub scan: Option<EpsilonScan>,
}

impl RunOutcome {
    pub fn exit_success(&self) -> bool {
        if self.scan.is_some() {
            return true;
        }
        self.cert.certified()
    }
}

pub fn render(cfg: &RunConfig, outcome: &RunOutcome, timestamp: &str) -> String {
    match cfg.format {
        crate::config::OutputFormat::Text => render_text(cfg, outcome, timestamp),
        crate::config::OutputFormat::Structured => render_structured(cfg, outcome, timestamp),
    }
}

fn render_text(cfg: &RunConfig, outcome: &RunOutcome, timestamp: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "chcert {} — covering/cone certification\ngenerated: {timestamp}\n\n",
        env!("CARGO_PKG_VERSION")
    ));
    for line in cfg.echo().lines() {
        s.push_str("  ");
        s.push_str(line);
        s.push('\n');
    }
    if let Some(v) = outcome.cert.resolved_v {
        s.push_str(&format!("  resolved atlas size: {v}\n"));
    }
    s.push('\n');

    if !outcome.cert.records.is_empty() {
        s.push_str(&format!(
            "  {:<26} {:>24} {:>3} {:>24} {:>13}  {}\n",
            "inequality", "bound", "", "threshold", "slack", "status"
        ));
        for r in &outcome.cert.records {
            s.push_str(&format!(
                "  {:<26} {:>24} {:>3} {:>24} {:>13.6e}  {}\n",
                r.name,
                format!("{}", r.bound),
                r.relation.symbol(),
                format!("{}", r.threshold),
                r.slack,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        s.push('\n');
        if outcome.cert.certified() {
            s.push_str("verdict: CERTIFIED\n");
        } else {
            s.push_str(&format!(
                "verdict: NOT CERTIFIED (failing: {})\n",
                outcome.cert.failures().join(", ")
            ));
        }
        if let Some(c) = &outcome.cert.conclusion {
            s.push_str(&format!("conclusion: {c}\n"));
        }
    }

    if let Some(scan) = &outcome.scan {
        s.push_str(&format!(
            "certified epsilon: {} (bracket [{}, {}], grid 2^-20)\n",
            scan.max_certified, scan.bracket.0, scan.bracket.1
        ));
    }
    s
}

fn render_structured(cfg: &RunConfig, outcome: &RunOutcome, timestamp: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!("schema = {SCHEMA}\n"));
    s.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("generated = {timestamp}\n"));
    s.push_str(&cfg.echo());
    if let Some(v) = outcome.cert.resolved_v {
        s.push_str(&format!("result.v = {v}\n"));
    }
    for r in &outcome.cert.records {
        s.push_str(&format!("check.{}.bound = {}\n", r.name, r.bound));
        s.push_str(&format!(
            "check.{}.relation = {}\n",
            r.name,
            r.relation.symbol()
        ));
        s.push_str(&format!("check.{}.threshold = {}\n", r.name, r.threshold));
        s.push_str(&format!("check.{}.slack = {}\n", r.name, r.slack));
        s.push_str(&format!("check.{}.pass = {}\n", r.name, r.pass));
    }
    if !outcome.cert.records.is_empty() {
        s.push_str(&format!(
            "result.records = {}\n",
            outcome.cert.records.len()
        ));
        s.push_str(&format!(
            "result.verdict = {}\n",
            if outcome.cert.certified() {
                "certified"
            } else {
                "not-certified"
            }
        ));
        if let Some(c) = &outcome.cert.conclusion {
            s.push_str(&format!("result.conclusion = {c}\n"));
        }
    }
    if let Some(scan) = &outcome.scan {
        s.push_str(&format!("result.epsilon_max = {}\n", scan.max_certified));
        s.push_str(&format!("result.bracket_lo = {}\n", scan.bracket.0));
        s.push_str(&format!("result.bracket_hi = {}\n", scan.bracket.1));
    }
    s
}
