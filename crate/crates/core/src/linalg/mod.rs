//! Dense complex matrices and their spectral computations.

mod eig;
mod functions;
mod matrix;
mod spectrum;
mod svd;

pub use eig::{hermitian_eig, EigenDecomposition};
pub use functions::{
    abs_op, abs_power, cartesian, is_hermitian, is_normal, is_psd, is_unitary, normality_defect,
    operator_norm, power_op, PsdReport, MAX_CONDITION,
};
pub use matrix::{ComplexMatrix, C64};
pub use spectrum::{SingularSpectrum, Tolerances};
pub use svd::{singular_values, svd, SvdDecomposition};
