//! The report schema shared by the CLI and the self-test: a config echo,
//! estimate records, analytic certificates, and pass/fail verdicts.
//!
//! Serialization is deterministic for a fixed configuration and seed; wall
//! clock data only appears when a timestamp is explicitly attached, so
//! fixed-clock runs are byte-identical.

use crate::adversaries::{AttackReport, Certificate};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: serde_json::Value,
    pub estimates: Vec<AttackReport>,
    pub certificates: Vec<Certificate>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn new(config: serde_json::Value) -> Self {
        Self {
            config,
            estimates: Vec::new(),
            certificates: Vec::new(),
            verdicts: Vec::new(),
            timestamp: None,
        }
    }

    /// Records an estimate, lifting its certificates into the top-level array
    /// and appending a prediction-match verdict.
    pub fn push_estimate(&mut self, label: &str, report: AttackReport) {
        for cert in &report.certificates {
            if !self.certificates.iter().any(|c| c.name == cert.name) {
                self.certificates.push(cert.clone());
            }
        }
        self.verdicts.push(Verdict::new(
            format!("{label}: prediction-match"),
            report.within_three_sigma,
            format!(
                "estimate {:.6} vs predicted {:.6} (3σ = {:.6})",
                report.stats.estimate,
                report.predicted,
                3.0 * report.sigma
            ),
        ));
        self.estimates.push(report);
    }

    pub fn push_certificates(&mut self, certs: &[Certificate]) {
        for cert in certs {
            self.verdicts.push(Verdict::new(
                format!("certificate: {}", cert.name),
                cert.passed,
                format!(
                    "value {:.12} expected {:.12} tol {:.1e}",
                    cert.value, cert.expected, cert.tolerance
                ),
            ));
            if !self.certificates.iter().any(|c| c.name == cert.name) {
                self.certificates.push(cert.clone());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed) && self.certificates.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV projection of the estimate records (one row per estimate).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "attack,protocol,n,successes,estimate,wilson_low,wilson_high,predicted,sigma,within_3sigma,completed,aborted_by_alice,aborted_by_bob,seed\n",
        );
        for e in &self.estimates {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                e.attack,
                e.protocol,
                e.stats.n,
                e.stats.successes,
                e.stats.estimate,
                e.stats.wilson_low,
                e.stats.wilson_high,
                e.predicted,
                e.sigma,
                e.within_three_sigma,
                e.stats.completed,
                e.stats.aborted_by_alice,
                e.stats.aborted_by_bob,
                e.stats.base_seed,
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::TrialStats;

    fn sample_report() -> Report {
        let mut r = Report::new(serde_json::json!({"protocol": "unfair-lt-rot"}));
        r.push_estimate(
            "demo",
            AttackReport {
                attack: "honest".into(),
                protocol: "unfair-lt-rot".into(),
                predicted: 1.0,
                stats: TrialStats::from_counts(100, 100, 0, 0, 7),
                sigma: 0.0,
                within_three_sigma: true,
                certificates: vec![Certificate::check("demo-cert", 0.5, 0.5, 1e-9)],
                passed: true,
            },
        );
        r
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = sample_report().to_json();
        let b = sample_report().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("timestamp"));
    }

    #[test]
    fn certificates_are_lifted_to_top_level() {
        let r = sample_report();
        assert_eq!(r.certificates.len(), 1);
        assert!(r.all_passed());
        assert!(r.to_csv().lines().count() == 2);
    }
}
