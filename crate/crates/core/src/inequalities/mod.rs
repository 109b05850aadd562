//! Executable singular value inequalities.
//!
//! Every check evaluates both sides of its inequality on concrete matrices
//! and reports signed, scale-relative margins per index. The [`registry`]
//! ties each check to generators that satisfy its hypotheses.

mod checks;
mod registry;
mod result;

pub use checks::{
    check_a_plus_ia_star, check_ab_star, check_block_dominance, check_cartesian_block_psd,
    check_kittaneh_lemma, check_normal_cartesian, check_pinching_norms, check_positive_sandwich,
    check_product_norm_bound, check_product_split, check_sum_split, check_tao, CheckOptions,
};
pub use registry::{
    all_ids, lookup, norm_families, registry, resolve_target, run_registry, trial_seed, Arity,
    Arrange, CheckKind, Draw, InequalitySpec, KPolicy, Params, Plan, RegistryRun, Sample,
    TrialError, TrialOutcome, ALPHA_GRID,
};
pub use result::{CheckResult, InputsDigest, Track, TrackKind};
