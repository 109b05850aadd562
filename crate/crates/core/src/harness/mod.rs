//! Suite runs, falsification searches and explicit checks behind the CLI.

mod falsify;
pub mod io;
mod suite;

use std::path::Path;

pub use falsify::{
    falsify, replay, Exhausted, FalsificationResult, FalsifyConfig, FalsifyOutcome, TraceStep,
};
pub use suite::{
    run_suite, write_csv, Location, Report, SuiteConfig, SuiteReport, Witness, MAX_WITNESSES,
};

use crate::error::{Error, Result};
use crate::inequalities::{lookup, CheckOptions, CheckResult, KPolicy, Params};
use crate::linalg::Tolerances;

/// Process exit status: 0 pass, 1 inequality violation, 2 hypothesis or configuration error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass,
    Violation,
    Error,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::Violation => 1,
            ExitStatus::Error => 2,
        }
    }

    pub fn of_check(result: &CheckResult) -> Self {
        if result.pass {
            ExitStatus::Pass
        } else {
            ExitStatus::Violation
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExplicitCheck {
    pub id: String,
    /// Overrides the file's `alpha`; defaults to 1/2.
    pub alpha: Option<f64>,
    pub p_list: Vec<f64>,
    pub force: bool,
    pub tol: Tolerances,
}

impl ExplicitCheck {
    pub fn new(id: &str) -> Self {
        ExplicitCheck {
            id: id.to_string(),
            alpha: None,
            p_list: Params::default().p_list,
            force: false,
            tol: Tolerances::default(),
        }
    }
}

/// Runs one registered check on the matrices of `input`.
pub fn check_explicit(config: &ExplicitCheck, input: &Path) -> Result<CheckResult> {
    let file = io::read_matrices(input)?;
    check_matrices(config, &file.matrices, file.alpha)
}

pub fn check_matrices(
    config: &ExplicitCheck,
    matrices: &[crate::linalg::ComplexMatrix],
    file_alpha: Option<f64>,
) -> Result<CheckResult> {
    config.tol.validate()?;
    let spec = lookup(&config.id)?;
    let params = Params {
        alpha: config.alpha.or(file_alpha).unwrap_or(0.5),
        p_list: config.p_list.clone(),
        k_policy: KPolicy::All,
    };
    let opts = CheckOptions {
        tol: config.tol,
        force: config.force,
    };
    spec.evaluate(matrices, &params, &opts).map_err(|e| match e {
        Error::Arity { expected, got } => Error::shape(
            "check",
            format!("`{}` takes {expected} matrices, the file has {got}", spec.id),
        ),
        other => other,
    })
}
