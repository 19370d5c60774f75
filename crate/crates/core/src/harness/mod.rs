//! Config-driven verification scenarios and their `KQR v1` reports.

pub mod config;
pub mod corpus;
pub mod report;
pub mod scenarios;

use std::time::Instant;

pub use config::{Caps, Config, Profile, ScenarioId, PROFILE_ENV};
pub use report::{replay_witness, Provenance, Report, ScenarioReport, Verdict, REPORT_SCHEMA};
pub use scenarios::run_scenario;

use crate::par;

/// Runs every enabled scenario concurrently; the report lists them in id order.
pub fn run_all(config: &Config) -> Report {
    let start = Instant::now();
    let mut warnings = Vec::new();
    if config.scenarios.is_empty() {
        warnings.push("no scenarios enabled; the report is vacuously PASS".to_string());
    }
    let beyond = config.caps.beyond_validated();
    if !beyond.is_empty() {
        warnings.push(format!("beyond-validated-range: {}", beyond.join(", ")));
    }
    let mut ids = config.scenarios.clone();
    ids.sort();
    ids.dedup();
    let scenarios = par::map(&ids, |&id| run_scenario(id, &config.caps));
    let status = scenarios.iter().map(|s| s.verdict).max().unwrap_or(Verdict::Pass);
    Report {
        schema: REPORT_SCHEMA.to_string(),
        profile: config.profile,
        caps: config.caps,
        warnings,
        status,
        scenarios,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_selection_passes_with_warning() {
        let r = run_all(&Config::only(Profile::Default, &[]));
        assert_eq!(r.status, Verdict::Pass);
        assert_eq!(r.exit_code(), 0);
        assert!(r.scenarios.is_empty());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn small_scenarios_round_trip() {
        let r = run_all(&Config::only(Profile::Small, &[ScenarioId::S1, ScenarioId::S10]));
        assert_eq!(r.status, Verdict::Pass, "{}", r.to_text());
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json());
        for s in &r.scenarios {
            for w in &s.witnesses {
                replay_witness(w).unwrap();
            }
            assert!(s.expectations.iter().all(|e| !e.oracle.is_empty()));
        }
    }
}
