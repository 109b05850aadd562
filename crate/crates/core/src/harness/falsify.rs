//! Random-restart hill climbing on the most negative margin of a check.

use serde::{Deserialize, Serialize};

use super::io::MatrixJson;
use crate::error::{Error, Result};
use crate::generators::derive_seed;
use crate::inequalities::{resolve_target, CheckOptions, CheckResult, InequalitySpec, Params, Sample};
use crate::linalg::{ComplexMatrix, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyConfig {
    /// `id` or `id-track`.
    pub target: String,
    pub drop: Option<String>,
    pub dim: usize,
    /// Total evaluation budget across restarts.
    pub iters: usize,
    pub seed: u64,
    pub alpha: f64,
    pub restarts: usize,
    pub steps: usize,
    pub initial_magnitude: f64,
    pub tol: Tolerances,
}

impl FalsifyConfig {
    pub fn new(target: &str, drop: Option<&str>, dim: usize, seed: u64) -> Self {
        FalsifyConfig {
            target: target.to_string(),
            drop: drop.map(String::from),
            dim,
            iters: 10_000,
            seed,
            alpha: 0.5,
            restarts: 100,
            steps: 100,
            initial_magnitude: 0.5,
            tol: Tolerances::default(),
        }
    }

    /// A violation must exceed this to count as a witness.
    pub fn witness_threshold(&self) -> f64 {
        10.0 * self.tol.margin_tol
    }
}

/// One accepted hill-climbing move.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsificationResult {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropped: Option<String>,
    pub alpha: f64,
    /// Replayable via `check --force`.
    pub matrices: Vec<MatrixJson>,
    pub violated_track: String,
    /// 1-based.
    pub violated_index: usize,
    /// `LHS_j − RHS_j`.
    pub violation: f64,
    pub margin: f64,
    pub iterations: usize,
    pub seed: u64,
    pub restart: usize,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exhausted {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropped: Option<String>,
    pub best_margin: f64,
    pub best_track: String,
    pub best_index: usize,
    pub iterations: usize,
    pub seed: u64,
    pub matrices: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FalsifyOutcome {
    Witness(FalsificationResult),
    Exhausted(Exhausted),
}

impl FalsifyOutcome {
    pub fn witness(&self) -> Option<&FalsificationResult> {
        match self {
            FalsifyOutcome::Witness(w) => Some(w),
            FalsifyOutcome::Exhausted(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes") + "\n"
    }
}

struct Search<'a> {
    spec: &'static InequalitySpec,
    track: Option<&'static str>,
    params: Params,
    opts: CheckOptions,
    config: &'a FalsifyConfig,
}

struct Scored {
    objective: f64,
    result: CheckResult,
    inputs: Vec<ComplexMatrix>,
}

impl Search<'_> {
    /// Worst margin over the targeted tracks; `None` when the point cannot be evaluated.
    fn score(&self, sample: &Sample) -> Option<Scored> {
        let inputs = sample.realize(&self.opts.tol).ok()?;
        let result = self.spec.evaluate(&inputs, &self.params, &self.opts).ok()?;
        let objective = result
            .tracks
            .iter()
            .filter(|t| t.is_active() && self.track.is_none_or(|name| t.name == name))
            .map(|t| t.worst_margin)
            .fold(f64::INFINITY, f64::min);
        objective.is_finite().then_some(Scored {
            objective,
            result,
            inputs,
        })
    }

    fn restart_sample(&self, restart: usize) -> Result<Sample> {
        let plan = self
            .spec
            .plan(self.config.dim, restart as u64, self.config.drop.as_deref())?;
        Ok(Sample::draw(plan, derive_seed(self.config.seed, "restart", &[restart as u64])))
    }

    fn step_seed(&self, restart: usize, step: usize) -> u64 {
        derive_seed(self.config.seed, "step", &[restart as u64, step as u64])
    }
}

fn worst_track<'r>(result: &'r CheckResult, track: Option<&str>) -> &'r crate::inequalities::Track {
    result
        .tracks
        .iter()
        .filter(|t| t.is_active() && track.is_none_or(|name| t.name == name))
        .min_by(|a, b| a.worst_margin.total_cmp(&b.worst_margin))
        .expect("scored results have an active target track")
}

/// Searches for inputs violating the target with `drop` removed from its hypotheses.
///
/// Each restart draws fresh latent matrices from the (possibly relaxed)
/// generator plan and climbs by perturbing them, halving the step size
/// whenever a move does not lower the margin. The search stops at the first
/// violation larger than `10·margin_tol`.
pub fn falsify(config: &FalsifyConfig) -> Result<FalsifyOutcome> {
    config.tol.validate()?;
    if config.dim == 0 || config.iters == 0 || config.restarts == 0 {
        return Err(Error::Parameter("dim, iters and restarts must be positive".into()));
    }
    let (spec, track) = resolve_target(&config.target)?;
    let search = Search {
        spec,
        track,
        params: Params {
            alpha: config.alpha,
            ..Params::default()
        },
        opts: CheckOptions {
            tol: config.tol,
            force: config.drop.is_some(),
        },
        config,
    };
    // Validates the dropped hypothesis before any work.
    search.restart_sample(0)?;

    let threshold = config.witness_threshold();
    let mut used = 0;
    let mut best: Option<Scored> = None;
    for restart in 0..config.restarts {
        if used >= config.iters {
            break;
        }
        let mut sample = search.restart_sample(restart)?;
        used += 1;
        let mut current = search.score(&sample);
        let mut trace = Vec::new();
        let mut magnitude = config.initial_magnitude;
        let mut step = 0;
        loop {
            if let Some(c) = &current {
                if c.objective < -threshold {
                    let t = worst_track(&c.result, track);
                    return Ok(FalsifyOutcome::Witness(FalsificationResult {
                        id: spec.id.to_string(),
                        track: track.map(String::from),
                        dropped: config.drop.clone(),
                        alpha: config.alpha,
                        matrices: c.inputs.iter().map(MatrixJson::from).collect(),
                        violated_track: t.name.clone(),
                        violated_index: t.worst_index,
                        violation: t.violation(),
                        margin: t.worst_margin,
                        iterations: used,
                        seed: config.seed,
                        restart,
                        trace,
                    }));
                }
            }
            if step >= config.steps || used >= config.iters {
                break;
            }
            let candidate = sample.perturbed(magnitude, search.step_seed(restart, step))?;
            used += 1;
            let scored = search.score(&candidate);
            let improved = match (&scored, &current) {
                (Some(n), Some(c)) => n.objective < c.objective,
                (Some(_), None) => true,
                (None, _) => false,
            };
            if improved {
                trace.push(TraceStep { step, magnitude });
                sample = candidate;
                current = scored;
            } else {
                magnitude *= 0.5;
            }
            step += 1;
        }
        if let Some(c) = current {
            if best.as_ref().is_none_or(|b| c.objective < b.objective) {
                best = Some(c);
            }
        }
    }
    let best = best.ok_or_else(|| Error::Contract(format!("no evaluable input found for `{}`", spec.id)))?;
    let t = worst_track(&best.result, track);
    Ok(FalsifyOutcome::Exhausted(Exhausted {
        id: spec.id.to_string(),
        track: track.map(String::from),
        dropped: config.drop.clone(),
        best_margin: best.objective,
        best_track: t.name.clone(),
        best_index: t.worst_index,
        iterations: used,
        seed: config.seed,
        matrices: best.inputs.iter().map(MatrixJson::from).collect(),
    }))
}

/// Rebuilds a witness from `(seed, restart, trace)` alone.
pub fn replay(config: &FalsifyConfig, restart: usize, trace: &[TraceStep]) -> Result<Vec<ComplexMatrix>> {
    let (spec, _) = resolve_target(&config.target)?;
    let plan = spec.plan(config.dim, restart as u64, config.drop.as_deref())?;
    let mut sample = Sample::draw(plan, derive_seed(config.seed, "restart", &[restart as u64]));
    for s in trace {
        let seed = derive_seed(config.seed, "step", &[restart as u64, s.step as u64]);
        sample = sample.perturbed(s.magnitude, seed)?;
    }
    sample.realize(&config.tol)
}
