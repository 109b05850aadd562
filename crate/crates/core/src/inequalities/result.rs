use serde::{Deserialize, Serialize};

use crate::linalg::{PsdReport, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackKind {
    /// `lhs_j ≤ rhs_j` for every index `j`.
    Spectrum,
    /// `λ_min ≥ 0` of an assembled block.
    Psd,
    /// `lhs_f ≤ rhs_f` for every norm `f` of a family list.
    Norm,
}

/// One compared inequality inside a check.
///
/// `margins[j] = (rhs[j] − lhs[j]) / max(1, scale)` where `scale` is the
/// largest magnitude on either side; PSD tracks store `λ_min / max(1, |λ_max|)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Track {
    pub name: String,
    pub kind: TrackKind,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub margins: Vec<f64>,
    pub scale: f64,
    pub threshold: f64,
    pub worst_margin: f64,
    /// 1-based.
    pub worst_index: usize,
    pub tight: usize,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl Track {
    /// Compares `lhs[j] ≤ rhs[j]` for `j < lhs.len()`; `rhs` is zero-padded.
    pub fn dominance(name: &str, kind: TrackKind, lhs: Vec<f64>, rhs: &[f64], tol: &Tolerances) -> Track {
        let rhs: Vec<f64> = (0..lhs.len())
            .map(|j| rhs.get(j).copied().unwrap_or(0.0))
            .collect();
        let scale = lhs
            .iter()
            .chain(&rhs)
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let denom = scale.max(1.0);
        let margins: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| (r - l) / denom).collect();
        Self::finish(name, kind, lhs, rhs, margins, scale, tol.margin_tol, tol)
    }

    pub fn spectrum(name: &str, lhs: Vec<f64>, rhs: &[f64], tol: &Tolerances) -> Track {
        Self::dominance(name, TrackKind::Spectrum, lhs, rhs, tol)
    }

    pub fn psd(name: &str, report: &PsdReport, tol: &Tolerances) -> Track {
        let scale = report.max_eigenvalue.abs();
        Self::finish(
            name,
            TrackKind::Psd,
            vec![0.0],
            vec![report.min_eigenvalue],
            vec![report.relative_min()],
            scale,
            tol.psd_tol,
            tol,
        )
    }

    pub fn skipped(name: &str, kind: TrackKind, reason: impl Into<String>) -> Track {
        Track {
            name: name.to_string(),
            kind,
            lhs: Vec::new(),
            rhs: Vec::new(),
            margins: Vec::new(),
            scale: 0.0,
            threshold: 0.0,
            worst_margin: 0.0,
            worst_index: 0,
            tight: 0,
            pass: true,
            skipped: Some(reason.into()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        name: &str,
        kind: TrackKind,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        margins: Vec<f64>,
        scale: f64,
        threshold: f64,
        tol: &Tolerances,
    ) -> Track {
        let (worst_index, worst_margin) = margins
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bm), (i, m)| if m < bm { (i, m) } else { (bi, bm) });
        let tight = margins.iter().filter(|m| m.abs() <= tol.margin_tol).count();
        Track {
            name: name.to_string(),
            kind,
            pass: worst_margin >= -threshold,
            lhs,
            rhs,
            margins,
            scale,
            threshold,
            worst_margin,
            worst_index: worst_index + 1,
            tight,
            skipped: None,
        }
    }

    pub fn is_active(&self) -> bool {
        self.skipped.is_none()
    }

    /// `lhs − rhs` at the worst index (positive means violated).
    pub fn violation(&self) -> f64 {
        if !self.is_active() {
            return 0.0;
        }
        let j = self.worst_index - 1;
        self.lhs[j] - self.rhs[j]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InputsDigest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub dims: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub pass: bool,
    pub worst_margin: f64,
    pub worst_track: String,
    /// 1-based index inside `worst_track`.
    pub worst_index: usize,
    pub tight_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub forced: bool,
    /// Hypotheses that failed but were overridden by `force`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypothesis_failures: Vec<String>,
    pub inputs_digest: InputsDigest,
    pub tracks: Vec<Track>,
}

impl CheckResult {
    pub(crate) fn assemble(
        id: &str,
        tracks: Vec<Track>,
        alpha: Option<f64>,
        forced: bool,
        hypothesis_failures: Vec<String>,
        dims: Vec<(usize, usize)>,
    ) -> CheckResult {
        let worst = tracks
            .iter()
            .filter(|t| t.is_active())
            .min_by(|a, b| a.worst_margin.total_cmp(&b.worst_margin));
        let (worst_margin, worst_track, worst_index) = worst.map_or((0.0, String::new(), 0), |t| {
            (t.worst_margin, t.name.clone(), t.worst_index)
        });
        CheckResult {
            id: id.to_string(),
            pass: tracks.iter().all(|t| t.pass),
            worst_margin,
            worst_track,
            worst_index,
            tight_count: tracks.iter().map(|t| t.tight).sum(),
            alpha,
            forced,
            hypothesis_failures,
            inputs_digest: InputsDigest { seed: None, dims },
            tracks,
        }
    }

    pub fn track(&self, name: &str) -> Option<&Track> {
        self.tracks.iter().find(|t| t.name == name)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.inputs_digest.seed = Some(seed);
        self
    }
}
