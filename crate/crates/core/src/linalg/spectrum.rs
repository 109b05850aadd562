use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every routine in the crate.
///
/// All values are relative to `max(1, scale)` of the operand they are
/// applied to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub psd_tol: f64,
    pub unitary_tol: f64,
    pub recon_tol: f64,
    pub margin_tol: f64,
    pub clip_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psd_tol: 1e-10,
            unitary_tol: 1e-10,
            recon_tol: 1e-9,
            margin_tol: 1e-8,
            clip_tol: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("psd_tol", self.psd_tol),
            ("unitary_tol", self.unitary_tol),
            ("recon_tol", self.recon_tol),
            ("margin_tol", self.margin_tol),
            ("clip_tol", self.clip_tol),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Parameter(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    pub fn with_margin_tol(mut self, margin_tol: f64) -> Self {
        self.margin_tol = margin_tol;
        self
    }
}

/// Non-negative, descending list of singular values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Wraps an already sorted, non-negative list. Unsorted input is a contract error.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Contract(format!(
                "spectrum entry {bad} = {} is negative or non-finite",
                values[bad]
            )));
        }
        if let Some(k) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::Contract(format!(
                "spectrum not sorted descending at index {k}: {} < {}",
                values[k],
                values[k + 1]
            )));
        }
        Ok(SingularSpectrum { values })
    }

    /// Sorts descending (stable) and clips values in `[-clip_tol * max(1, top), 0)` to zero.
    pub fn from_unsorted(mut values: Vec<f64>, clip_tol: f64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite singular value".into()));
        }
        let top = values.iter().copied().fold(0.0, f64::max).max(1.0);
        for v in values.iter_mut() {
            if *v < 0.0 {
                if *v < -clip_tol * top {
                    return Err(Error::Contract(format!(
                        "singular value {v} below clipping tolerance"
                    )));
                }
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SingularSpectrum { values })
    }

    pub fn empty() -> Self {
        SingularSpectrum { values: Vec::new() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Zero-based access, zero-padded past the end.
    pub fn get(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or(0.0)
    }

    pub fn largest(&self) -> f64 {
        self.get(0)
    }

    pub fn padded(&self, len: usize) -> Vec<f64> {
        (0..len).map(|j| self.get(j)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor >= 0.0);
        SingularSpectrum {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}
