//! `KQR v1` reports and witness replay.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bisimplicial::serial as bserial;
use crate::error::{Error, Result};
use crate::harness::config::{Caps, Profile, ScenarioId};
use crate::homotopy::CollapseCertificate;
use crate::sset::cells::cell_presentation;
use crate::sset::serial::{self, MapJson, SsxJson};
use crate::sset::SimplicialMap;
use crate::subdivision::ex::{transpose_to_ex, ExComplex};
use crate::subdivision::Subdivision;

pub const REPORT_SCHEMA: &str = "KQR v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Skip,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Skip => "SKIP",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Forced by a definition or a theorem about the construction.
    Definition,
    /// Computed by an independent procedure.
    Oracle,
    /// A closed-form value worked out by hand.
    Analytic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub check: String,
    pub expected: Value,
    pub observed: Value,
    pub provenance: Provenance,
    pub oracle: String,
    pub matched: bool,
}

/// A value reported without an expectation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub check: String,
    pub observed: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caveat {
    pub code: String,
    pub message: String,
    pub escalated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    pub description: String,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub id: ScenarioId,
    pub title: String,
    pub verdict: Verdict,
    pub skip_reason: Option<String>,
    pub expectations: Vec<Expectation>,
    pub observations: Vec<Observation>,
    pub witnesses: Vec<Witness>,
    pub oracles: Vec<String>,
    pub caveats: Vec<Caveat>,
    pub resources: BTreeMap<String, u64>,
    pub timing_ms: f64,
}

impl ScenarioReport {
    pub fn failed_expectations(&self) -> impl Iterator<Item = &Expectation> {
        self.expectations.iter().filter(|e| !e.matched)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub profile: Profile,
    pub caps: Caps,
    pub warnings: Vec<String>,
    pub status: Verdict,
    pub scenarios: Vec<ScenarioReport>,
    pub timing_ms: f64,
}

impl Report {
    /// 0 when everything passed, 1 on any failure, 3 when a resource cap left
    /// residuals and nothing failed.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Skip => 3,
        }
    }

    pub fn scenario(&self, id: ScenarioId) -> Option<&ScenarioReport> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The JSON report with every timing field set to zero.
    pub fn to_json_without_timings(&self) -> String {
        let mut r = self.clone();
        r.timing_ms = 0.0;
        for s in &mut r.scenarios {
            s.timing_ms = 0.0;
        }
        r.to_json()
    }

    pub fn from_json(s: &str) -> Result<Report> {
        let r: Report = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Serialization(format!("unsupported report schema {:?}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for s in &self.scenarios {
            out.push_str(&format!("{:<4} {:<5} {} ({:.0} ms)\n", s.id.to_string(), s.verdict, s.title, s.timing_ms));
            if let Some(r) = &s.skip_reason {
                out.push_str(&format!("       skipped: {r}\n"));
            }
            for e in s.failed_expectations() {
                out.push_str(&format!("       mismatch: {}: expected {} observed {}\n", e.check, e.expected, e.observed));
            }
            for c in s.caveats.iter().filter(|c| c.escalated) {
                out.push_str(&format!("       caveat {}: {}\n", c.code, c.message));
            }
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

fn payload_err(kind: &str, e: impl fmt::Display) -> Error {
    Error::Serialization(format!("{kind} witness: {e}"))
}

fn field<T: serde::de::DeserializeOwned>(w: &Witness, name: &str) -> Result<T> {
    let v = w.payload.get(name).ok_or_else(|| payload_err(&w.kind, format!("missing field {name:?}")))?;
    serde_json::from_value(v.clone()).map_err(|e| payload_err(&w.kind, e))
}

/// Re-validates a witness with the library's checkers.
pub fn replay_witness(w: &Witness) -> Result<()> {
    match w.kind.as_str() {
        "map" => {
            serial::map_from_json(&field::<MapJson>(w, "map")?)?;
            Ok(())
        }
        "bimap" => {
            bserial::map_from_json(&field::<bserial::BiMapJson>(w, "map")?)?;
            Ok(())
        }
        "collapse" => {
            let k = serial::from_json(&field::<SsxJson>(w, "complex")?)?;
            let pairs: Vec<((usize, usize), (usize, usize))> = field(w, "pairs")?;
            let remaining_vertex: usize = field(w, "remaining_vertex")?;
            CollapseCertificate { pairs, remaining_vertex }.replay(&k)
        }
        "cell-presentation" => {
            let mono = serial::map_from_json(&field::<MapJson>(w, "mono")?)?;
            let attachments: usize = field(w, "attachments")?;
            let pres = cell_presentation(&mono)?;
            if pres.attachments.len() != attachments
                || !pres.replay()?.same_structure(&pres.result)
                || !pres.comparison.is_isomorphism()
            {
                return Err(payload_err(&w.kind, "replay does not rebuild the codomain"));
            }
            Ok(())
        }
        "adjunction" => {
            let k = Arc::new(serial::from_json(&field::<SsxJson>(w, "k")?)?);
            let l = Arc::new(serial::from_json(&field::<SsxJson>(w, "l")?)?);
            let left = serial::map_from_json(&field::<MapJson>(w, "left")?)?;
            let right = serial::map_from_json(&field::<MapJson>(w, "right")?)?;
            let sd_k = Subdivision::new(&k);
            let ex_l = ExComplex::new(&l, k.top_dim().max(1))?;
            if !left.source().same_structure(&sd_k.object) || !right.target().same_structure(ex_l.object()) {
                return Err(payload_err(&w.kind, "maps do not live on sd K and Ex L"));
            }
            let g = SimplicialMap::new(sd_k.object.clone(), l.clone(), left.assignment().to_vec())?;
            if transpose_to_ex(&g, &sd_k, &ex_l)?.assignment() != right.assignment() {
                return Err(payload_err(&w.kind, "the transpose of the left map is not the right map"));
            }
            Ok(())
        }
        other => Err(payload_err(other, "unknown witness kind")),
    }
}
