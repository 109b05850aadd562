use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::io::MatrixJson;
use super::ExitStatus;
use crate::error::{Error, Result};
use crate::inequalities::{all_ids, lookup, run_registry, RegistryRun, TrialError, TrialOutcome};

/// Failing witnesses stored per suite.
pub const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    #[serde(flatten)]
    pub run: RegistryRun,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: all_ids().into_iter().map(String::from).collect(),
            run: RegistryRun::default(),
            out: None,
            csv: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub dim: usize,
    pub trial: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub track: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub dim: usize,
    pub trial: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<TrialError>,
    pub matrices: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub id: String,
    pub statement: String,
    /// Evaluated (trial, α) pairs.
    pub checks: usize,
    pub passes: usize,
    pub violations: usize,
    pub errors: usize,
    pub worst_margin: Option<f64>,
    pub worst: Option<Location>,
    pub tight_count: usize,
    pub failing_witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub generated_at: u64,
    pub config: SuiteConfig,
    pub suites: Vec<SuiteReport>,
    pub all_passed: bool,
    pub exit_code: i32,
}

impl Report {
    pub fn status(&self) -> ExitStatus {
        let violations = self.suites.iter().any(|s| s.violations > 0);
        let errors = self.suites.iter().any(|s| s.errors > 0);
        if violations {
            ExitStatus::Violation
        } else if errors {
            ExitStatus::Error
        } else {
            ExitStatus::Pass
        }
    }

    pub fn suite(&self, id: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn summarize(id: &str, outcomes: &[&TrialOutcome]) -> Result<SuiteReport> {
    let spec = lookup(id)?;
    let mut rep = SuiteReport {
        id: id.to_string(),
        statement: spec.statement.to_string(),
        checks: outcomes.len(),
        passes: 0,
        violations: 0,
        errors: 0,
        worst_margin: None,
        worst: None,
        tight_count: 0,
        failing_witnesses: Vec::new(),
    };
    for o in outcomes {
        match &o.result {
            Ok(r) => {
                rep.tight_count += r.tight_count;
                if r.pass {
                    rep.passes += 1;
                } else {
                    rep.violations += 1;
                }
                if !r.worst_track.is_empty() && rep.worst_margin.is_none_or(|w| r.worst_margin < w) {
                    rep.worst_margin = Some(r.worst_margin);
                    rep.worst = Some(Location {
                        dim: o.dim,
                        trial: o.trial,
                        seed: o.seed,
                        alpha: o.alpha,
                        track: r.worst_track.clone(),
                        index: r.worst_index,
                    });
                }
            }
            Err(_) => rep.errors += 1,
        }
        if !o.passed() && rep.failing_witnesses.len() < MAX_WITNESSES {
            let ok = o.result.as_ref().ok();
            rep.failing_witnesses.push(Witness {
                dim: o.dim,
                trial: o.trial,
                seed: o.seed,
                alpha: o.alpha,
                track: ok.map(|r| r.worst_track.clone()),
                index: ok.map(|r| r.worst_index),
                margin: ok.map(|r| r.worst_margin),
                error: o.result.as_ref().err().cloned(),
                matrices: o.inputs.iter().flatten().map(MatrixJson::from).collect(),
            });
        }
    }
    Ok(rep)
}

/// Runs the configured suites and writes the JSON report (and CSV if requested).
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let ids: Vec<&str> = config.suites.iter().map(String::as_str).collect();
    let outcomes = run_registry(&ids, &config.run)?;
    let mut suites = Vec::with_capacity(ids.len());
    for id in &ids {
        let mine: Vec<&TrialOutcome> = outcomes.iter().filter(|o| o.id == *id).collect();
        suites.push(summarize(id, &mine)?);
    }
    let generated_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let mut report = Report {
        generated_at,
        config: config.clone(),
        suites,
        all_passed: false,
        exit_code: 0,
    };
    let status = report.status();
    report.all_passed = status == ExitStatus::Pass;
    report.exit_code = status.code();
    if let Some(path) = &config.out {
        fs::write(path, report.to_json())?;
    }
    if let Some(path) = &config.csv {
        write_csv(path, &outcomes, config.run.tol.margin_tol)?;
    }
    Ok(report)
}

/// One row per compared index: `id,dim,trial,alpha,track,j,lhs,rhs,margin,tight`.
pub fn write_csv(path: &Path, outcomes: &[TrialOutcome], margin_tol: f64) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["id", "dim", "trial", "alpha", "track", "j", "lhs", "rhs", "margin", "tight"])
        .map_err(csv_err)?;
    for o in outcomes {
        let Ok(r) = &o.result else { continue };
        let alpha = o.alpha.map(|a| a.to_string()).unwrap_or_default();
        for t in r.tracks.iter().filter(|t| t.is_active()) {
            for (j, m) in t.margins.iter().enumerate() {
                let tight = m.abs() <= margin_tol;
                w.write_record([
                    o.id.to_string(),
                    o.dim.to_string(),
                    o.trial.to_string(),
                    alpha.clone(),
                    t.name.clone(),
                    (j + 1).to_string(),
                    t.lhs[j].to_string(),
                    t.rhs[j].to_string(),
                    m.to_string(),
                    tight.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    let mut inner = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    inner.flush()?;
    Ok(())
}
