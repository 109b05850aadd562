//! The registry of checks, their input plans, and the seeded trial runner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::result::CheckResult;
use crate::constructions::NormFamily;
use crate::error::{Error, Result};
use crate::generators::{derive_seed, perturb, rng_from_seed, Latent, MatrixClass};
use crate::linalg::{ComplexMatrix, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    SpectrumDominance,
    PsdClaim,
    NormDominance,
    TwoSidedSpectrum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    fn check(&self, got: usize) -> Result<()> {
        let ok = match *self {
            Arity::Exactly(k) => got == k,
            Arity::AtLeast(k) => got >= k,
        };
        if ok {
            return Ok(());
        }
        let expected = match *self {
            Arity::Exactly(k) => k.to_string(),
            Arity::AtLeast(k) => format!("at least {k}"),
        };
        Err(Error::Arity { expected, got })
    }
}

/// Which Ky Fan indices the pinching check evaluates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KPolicy {
    /// Every `k` in `1..=dim`.
    #[default]
    All,
    /// The listed `k`, dropping those above the block dimension.
    Only(Vec<usize>),
}

impl KPolicy {
    pub fn indices(&self, dim: usize) -> Vec<usize> {
        match self {
            KPolicy::All => (1..=dim).collect(),
            KPolicy::Only(ks) => ks.iter().copied().filter(|k| (1..=dim).contains(k)).collect(),
        }
    }
}

/// Operator norm, Schatten `p` for each listed `p`, and Ky Fan per policy.
pub fn norm_families(dim: usize, p_list: &[f64], k_policy: &KPolicy) -> Vec<NormFamily> {
    std::iter::once(NormFamily::Operator)
        .chain(p_list.iter().map(|&p| NormFamily::Schatten(p)))
        .chain(k_policy.indices(dim).into_iter().map(NormFamily::KyFan))
        .collect()
}

/// Parameters shared by every check of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub p_list: Vec<f64>,
    pub k_policy: KPolicy,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            alpha: 0.5,
            p_list: vec![1.0, 2.0, 3.0],
            k_policy: KPolicy::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub class: MatrixClass,
    pub rows: usize,
    pub cols: usize,
}

const fn draw(class: MatrixClass, rows: usize, cols: usize) -> Draw {
    Draw { class, rows, cols }
}

/// How realized class members map onto check inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arrange {
    AsIs,
    /// `(P, q(P)) → (P, P, q(P))`.
    SharedPsd,
    /// Block parts `(A, B, C) → (A, C, B*)`.
    BlockToIntertwined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub draws: Vec<Draw>,
    pub arrange: Arrange,
}

impl Plan {
    fn of(draws: Vec<Draw>) -> Plan {
        Plan {
            draws,
            arrange: Arrange::AsIs,
        }
    }
}

/// Latent Ginibre matrices behind one set of check inputs.
///
/// Perturbing the latents and realizing again keeps every class guarantee,
/// which is how the falsifier moves without leaving the hypotheses.
#[derive(Clone, Debug)]
pub struct Sample {
    pub plan: Plan,
    pub latent: Vec<Latent>,
}

impl Sample {
    pub fn draw(plan: Plan, seed: u64) -> Sample {
        let mut rng = rng_from_seed(seed);
        let latent = plan
            .draws
            .iter()
            .map(|d| d.class.draw_latent(&mut rng, d.rows, d.cols))
            .collect();
        Sample { plan, latent }
    }

    pub fn realize(&self, tol: &Tolerances) -> Result<Vec<ComplexMatrix>> {
        let mut out = Vec::new();
        for (d, z) in self.plan.draws.iter().zip(&self.latent) {
            out.extend(d.class.realize(z, d.rows, 1.0, tol)?);
        }
        Ok(match self.plan.arrange {
            Arrange::AsIs => out,
            Arrange::SharedPsd => vec![out[0].clone(), out[0].clone(), out[1].clone()],
            Arrange::BlockToIntertwined => vec![out[0].clone(), out[2].clone(), out[1].adjoint()],
        })
    }

    pub fn perturbed(&self, magnitude: f64, seed: u64) -> Result<Sample> {
        let mut latent = Vec::with_capacity(self.latent.len());
        for (i, group) in self.latent.iter().enumerate() {
            let moved = group
                .iter()
                .enumerate()
                .map(|(k, z)| perturb(z, magnitude, derive_seed(seed, "latent", &[i as u64, k as u64])))
                .collect::<Result<Vec<_>>>()?;
            latent.push(moved);
        }
        Ok(Sample {
            plan: self.plan.clone(),
            latent,
        })
    }
}

type PlanFn = fn(usize, u64, Option<&str>) -> Plan;
type EvalFn = fn(&[ComplexMatrix], &Params, &CheckOptions) -> Result<CheckResult>;

pub struct InequalitySpec {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: CheckKind,
    pub arity: Arity,
    pub hypotheses: &'static [&'static str],
    /// Hypotheses the check can still be evaluated without.
    pub droppable: &'static [&'static str],
    pub uses_alpha: bool,
    pub tracks: &'static [&'static str],
    plan: PlanFn,
    eval: EvalFn,
}

impl std::fmt::Debug for InequalitySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InequalitySpec").field("id", &self.id).finish_non_exhaustive()
    }
}

impl InequalitySpec {
    /// Input plan for `dim` and `trial`; `dropped` switches to the relaxed generators.
    pub fn plan(&self, dim: usize, trial: u64, dropped: Option<&str>) -> Result<Plan> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if let Some(h) = dropped {
            if !self.droppable.contains(&h) {
                return Err(Error::Contract(format!(
                    "`{}` cannot be evaluated without `{h}` (droppable: {:?})",
                    self.id, self.droppable
                )));
            }
        }
        Ok((self.plan)(dim, trial, dropped))
    }

    pub fn evaluate(&self, inputs: &[ComplexMatrix], params: &Params, opts: &CheckOptions) -> Result<CheckResult> {
        self.arity.check(inputs.len())?;
        (self.eval)(inputs, params, opts)
    }
}

/// Second block size for trial `t` at dimension `d`.
fn side(d: usize, t: u64) -> usize {
    1 + (t as usize) % d
}

fn block_plan(d: usize, t: u64, dropped: Option<&str>) -> Plan {
    let m = side(d, t);
    use MatrixClass::*;
    match dropped {
        Some(_) => Plan::of(vec![draw(Hermitian, d, d), draw(Ginibre, d, m), draw(Hermitian, m, m)]),
        None => Plan::of(vec![draw(BlockPsd, d, m)]),
    }
}

fn pinching_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    let m = side(d, t);
    use MatrixClass::*;
    if t.is_multiple_of(2) {
        Plan::of(vec![draw(BlockPsd, d, m)])
    } else {
        Plan::of(vec![draw(Ginibre, d, d), draw(Ginibre, d, m), draw(Ginibre, m, m)])
    }
}

fn cartesian_block_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    let cols = if t.is_multiple_of(2) { d } else { side(d, t) };
    Plan::of(vec![draw(MatrixClass::Ginibre, d, cols)])
}

fn kittaneh_plan(d: usize, t: u64, dropped: Option<&str>) -> Plan {
    use MatrixClass::*;
    if dropped.is_some() {
        return Plan {
            draws: vec![draw(BlockPsd, d, side(d, t))],
            arrange: Arrange::BlockToIntertwined,
        };
    }
    if t.is_multiple_of(2) {
        Plan {
            draws: vec![draw(CommutingPair, d, d)],
            arrange: Arrange::SharedPsd,
        }
    } else {
        Plan::of(vec![draw(CanonicalTriple, d, side(d, t))])
    }
}

fn sum_split_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    let class = if t % 4 == 3 { MatrixClass::Normal } else { MatrixClass::Ginibre };
    Plan::of(vec![draw(class, d, d), draw(class, d, d)])
}

fn product_split_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    use MatrixClass::*;
    let m = side(d, t);
    match t % 3 {
        0 => Plan::of(vec![draw(Ginibre, d, d), draw(Ginibre, d, d), draw(Normal, d, d)]),
        1 => Plan::of(vec![draw(Ginibre, d, d), draw(Ginibre, d, d), draw(Ginibre, d, d)]),
        _ => Plan::of(vec![draw(Ginibre, m, d), draw(Ginibre, d, d), draw(Ginibre, d, m)]),
    }
}

fn norm_bound_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    use MatrixClass::*;
    let m = side(d, t);
    if t.is_multiple_of(2) {
        Plan::of(vec![draw(Psd, d, d), draw(Psd, m, m), draw(Ginibre, d, m)])
    } else {
        Plan::of(vec![draw(Ginibre, m, d), draw(Ginibre, d, m), draw(Ginibre, d, m)])
    }
}

fn ab_star_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    let cols = if t.is_multiple_of(2) { d } else { side(d, t) };
    Plan::of(vec![draw(MatrixClass::Ginibre, d, cols), draw(MatrixClass::Ginibre, d, cols)])
}

fn sandwich_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    use MatrixClass::*;
    let x = if t.is_multiple_of(2) { Psd } else { PositiveDefinite };
    if t.is_multiple_of(3) {
        Plan::of(vec![draw(Psd, d, d), draw(Psd, d, d), draw(x, d, d)])
    } else {
        Plan::of(vec![draw(Ginibre, side(d, t), d), draw(Ginibre, d, d), draw(x, d, d)])
    }
}

fn parts(class: MatrixClass, d: usize, t: u64) -> Plan {
    let k = 1 + (t as usize) % 3;
    Plan::of(vec![draw(class, d, d); k])
}

fn normal_cartesian_plan(d: usize, t: u64, dropped: Option<&str>) -> Plan {
    let class = if dropped.is_some() { MatrixClass::Ginibre } else { MatrixClass::Normal };
    parts(class, d, t)
}

fn a_plus_ia_star_plan(d: usize, t: u64, _: Option<&str>) -> Plan {
    parts(MatrixClass::Ginibre, d, t)
}

static REGISTRY: [InequalitySpec; 12] = [
    InequalitySpec {
        id: "tao",
        statement: "2 s_j(B) ≤ s_j([[A, B], [B*, C]]) for a PSD block",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(3),
        hypotheses: &["block-psd"],
        droppable: &["block-psd"],
        uses_alpha: false,
        tracks: &["tao"],
        plan: block_plan,
        eval: |x, _, o| check_tao(&x[0], &x[1], &x[2], o),
    },
    InequalitySpec {
        id: "block-dominance",
        statement: "s_j(block) ≤ 2 s_j(A ⊕ C) and s_j(B) ≤ s_j(A ⊕ C) for a PSD block",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(3),
        hypotheses: &["block-psd"],
        droppable: &["block-psd"],
        uses_alpha: false,
        tracks: &["block", "off-diagonal"],
        plan: block_plan,
        eval: |x, _, o| check_block_dominance(&x[0], &x[1], &x[2], o),
    },
    InequalitySpec {
        id: "pinching-norms",
        statement: "|||A ⊕ C||| ≤ |||block||| ≤ 2 |||A ⊕ C||| (upper for PSD blocks), max(‖A‖, ‖C‖) ≤ ‖block‖",
        kind: CheckKind::NormDominance,
        arity: Arity::Exactly(3),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: false,
        tracks: &["lower", "upper", "operator-max"],
        plan: pinching_plan,
        eval: |x, p, o| {
            let dim = x[0].rows() + x[2].rows();
            check_pinching_norms(&x[0], &x[1], &x[2], &norm_families(dim, &p.p_list, &p.k_policy), o)
        },
    },
    InequalitySpec {
        id: "cartesian-block-psd",
        statement: "[[|A|^{2α}, A*], [A, |A*|^{2(1−α)}]] ≥ 0",
        kind: CheckKind::PsdClaim,
        arity: Arity::Exactly(1),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: true,
        tracks: &["block"],
        plan: cartesian_block_plan,
        eval: |x, p, o| check_cartesian_block_psd(&x[0], p.alpha, o),
    },
    InequalitySpec {
        id: "kittaneh-lemma",
        statement: "[[A, C*], [C, B]] ≥ 0 and BC = CA imply [[A^{2α}, C*], [C, B^{2(1−α)}]] ≥ 0",
        kind: CheckKind::PsdClaim,
        arity: Arity::Exactly(3),
        hypotheses: &["a-psd", "b-psd", "intertwining", "block-psd"],
        droppable: &["intertwining"],
        uses_alpha: true,
        tracks: &["transformed-block"],
        plan: kittaneh_plan,
        eval: |x, p, o| check_kittaneh_lemma(&x[0], &x[1], &x[2], p.alpha, o),
    },
    InequalitySpec {
        id: "sum-split",
        statement: "s_j(A + B) ≤ s_j((|A|^{2α} + |B|^{2α}) ⊕ (|A*|^{2(1−α)} + |B*|^{2(1−α)}))",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(2),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: true,
        tracks: &["split", "normal"],
        plan: sum_split_plan,
        eval: |x, p, o| check_sum_split(&x[0], &x[1], p.alpha, o),
    },
    InequalitySpec {
        id: "product-split",
        statement: "s_j(B* X A) ≤ s_j(A* |X|^{2α} A ⊕ B* |X*|^{2(1−α)} B)",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(3),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: true,
        tracks: &["split", "normal-x"],
        plan: product_split_plan,
        eval: |x, p, o| check_product_split(&x[0], &x[1], &x[2], p.alpha, o),
    },
    InequalitySpec {
        id: "product-norm-bound",
        statement: "s_j(A X B*) ≤ ‖X‖ s_j(A ⊕ B)²",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(3),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: false,
        tracks: &["bound", "positive"],
        plan: norm_bound_plan,
        eval: |x, _, o| check_product_norm_bound(&x[0], &x[1], &x[2], o),
    },
    InequalitySpec {
        id: "ab-star",
        statement: "s_j(AB*) ≤ s_j(A*A ⊕ B*B) and the commutator bound for XY* − YX*",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(2),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: false,
        tracks: &["corollary", "commutator"],
        plan: ab_star_plan,
        eval: |x, _, o| check_ab_star(&x[0], &x[1], o),
    },
    InequalitySpec {
        id: "positive-sandwich",
        statement: "s_j(A X B*) ≤ s_j(A X^{2α} A* ⊕ B X^{2(1−α)} B*) for X ≥ 0",
        kind: CheckKind::SpectrumDominance,
        arity: Arity::Exactly(3),
        hypotheses: &["x-psd"],
        droppable: &[],
        uses_alpha: true,
        tracks: &["sandwich", "max-norm", "positive"],
        plan: sandwich_plan,
        eval: |x, p, o| check_positive_sandwich(&x[0], &x[1], &x[2], p.alpha, o),
    },
    InequalitySpec {
        id: "normal-cartesian",
        statement: "(1/√2) s_j(⊕(Re A_i + Im A_i)) ≤ s_j(⊕A_i) ≤ s_j(⊕(|Re A_i| + |Im A_i|)) for normal A_i",
        kind: CheckKind::TwoSidedSpectrum,
        arity: Arity::AtLeast(1),
        hypotheses: &["normal"],
        droppable: &["normal"],
        uses_alpha: false,
        tracks: &["lower", "upper"],
        plan: normal_cartesian_plan,
        eval: |x, _, o| check_normal_cartesian(x, o),
    },
    InequalitySpec {
        id: "a-plus-ia-star",
        statement: "√2 s_j(⊕(Re A_i + Im A_i)) ≤ s_j(⊕(A_i + i A_i*)) ≤ 2 s_j(⊕(Re A_i + Im A_i))",
        kind: CheckKind::TwoSidedSpectrum,
        arity: Arity::AtLeast(1),
        hypotheses: &[],
        droppable: &[],
        uses_alpha: false,
        tracks: &["lower", "upper"],
        plan: a_plus_ia_star_plan,
        eval: |x, _, o| check_a_plus_ia_star(x, o),
    },
];

pub fn registry() -> &'static [InequalitySpec] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static InequalitySpec> {
    REGISTRY
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::Lookup(id.to_string()))
}

/// Resolves `id` or `id-track` (e.g. `normal-cartesian-upper`).
pub fn resolve_target(target: &str) -> Result<(&'static InequalitySpec, Option<&'static str>)> {
    if let Ok(spec) = lookup(target) {
        return Ok((spec, None));
    }
    for spec in &REGISTRY {
        if let Some(track) = target.strip_prefix(spec.id).and_then(|r| r.strip_prefix('-')) {
            if let Some(t) = spec.tracks.iter().find(|t| **t == track) {
                return Ok((spec, Some(*t)));
            }
        }
    }
    Err(Error::Lookup(target.to_string()))
}

/// Configuration of a seeded registry run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryRun {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub p_list: Vec<f64>,
    pub k_policy: KPolicy,
    pub tol: Tolerances,
}

pub const ALPHA_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

impl Default for RegistryRun {
    fn default() -> Self {
        RegistryRun {
            dims: (1..=6).collect(),
            trials: 1000,
            seed: 42,
            alphas: ALPHA_GRID.to_vec(),
            p_list: vec![1.0, 2.0, 3.0],
            k_policy: KPolicy::All,
            tol: Tolerances::default(),
        }
    }
}

impl RegistryRun {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Parameter(format!("dims {:?} must be non-empty and ≥ 1", self.dims)));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::Parameter(format!("alpha grid {:?} must lie in [0, 1]", self.alphas)));
        }
        if self.p_list.iter().any(|p| !(p.is_finite() && *p >= 1.0)) {
            return Err(Error::Parameter(format!("Schatten list {:?} needs p ≥ 1", self.p_list)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialError {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for TrialError {
    fn from(e: &Error) -> Self {
        TrialError {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub id: &'static str,
    pub dim: usize,
    pub trial: u64,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub result: std::result::Result<CheckResult, TrialError>,
    /// Kept only for failures and errors.
    pub inputs: Option<Vec<ComplexMatrix>>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        matches!(&self.result, Ok(r) if r.pass)
    }
}

/// Seed of one trial; independent of execution order.
pub fn trial_seed(base: u64, id: &str, dim: usize, trial: u64) -> u64 {
    derive_seed(base, id, &[dim as u64, trial])
}

fn run_trial(spec: &'static InequalitySpec, run: &RegistryRun, dim: usize, trial: u64) -> Vec<TrialOutcome> {
    let seed = trial_seed(run.seed, spec.id, dim, trial);
    let outcome = |alpha, result: std::result::Result<CheckResult, TrialError>, inputs: &[ComplexMatrix]| {
        let keep = !matches!(&result, Ok(r) if r.pass);
        TrialOutcome {
            id: spec.id,
            dim,
            trial,
            seed,
            alpha,
            result,
            inputs: keep.then(|| inputs.to_vec()),
        }
    };
    let opts = CheckOptions {
        tol: run.tol,
        force: false,
    };
    let inputs = match spec
        .plan(dim, trial, None)
        .and_then(|plan| Sample::draw(plan, seed).realize(&run.tol))
    {
        Ok(x) => x,
        Err(e) => return vec![outcome(None, Err(TrialError::from(&e)), &[])],
    };
    let alphas: Vec<Option<f64>> = if spec.uses_alpha {
        run.alphas.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    alphas
        .into_iter()
        .map(|alpha| {
            let params = Params {
                alpha: alpha.unwrap_or(0.5),
                p_list: run.p_list.clone(),
                k_policy: run.k_policy.clone(),
            };
            let result = spec
                .evaluate(&inputs, &params, &opts)
                .map(|r| r.with_seed(seed))
                .map_err(|e| TrialError::from(&e));
            outcome(alpha, result, &inputs)
        })
        .collect()
}

/// Runs every listed id over `dims × trials`, in parallel, ordered by
/// `(id, dim, trial, alpha)`.
pub fn run_registry(ids: &[&str], run: &RegistryRun) -> Result<Vec<TrialOutcome>> {
    run.validate()?;
    let specs = ids.iter().map(|id| lookup(id)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for spec in specs {
        let jobs: Vec<(usize, u64)> = run
            .dims
            .iter()
            .flat_map(|&d| (0..run.trials as u64).map(move |t| (d, t)))
            .collect();
        let chunks: Vec<Vec<TrialOutcome>> = jobs
            .par_iter()
            .map(|&(d, t)| run_trial(spec, run, d, t))
            .collect();
        out.extend(chunks.into_iter().flatten());
    }
    Ok(out)
}

/// Every registered id, in registry order.
pub fn all_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.id).collect()
}
