//! Direct sums, 2×2 block operators, spectrum merging and unitarily invariant norms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix, SingularSpectrum, Tolerances};

/// Block-diagonal assembly `A_1 ⊕ A_2 ⊕ … ⊕ A_k`.
pub fn direct_sum(parts: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if parts.is_empty() {
        return Err(Error::Arity {
            expected: "at least one".into(),
            got: 0,
        });
    }
    let rows = parts.iter().map(ComplexMatrix::rows).sum();
    let cols = parts.iter().map(ComplexMatrix::cols).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for p in parts {
        out.set_block(r, c, p);
        r += p.rows();
        c += p.cols();
    }
    Ok(out)
}

/// The 2×2 operator matrix `[[A, B], [B*, C]]`.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub realized: ComplexMatrix,
}

fn assemble(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.rows(), c.rows());
    let mut out = ComplexMatrix::zeros(n + m, n + m);
    out.set_block(0, 0, a);
    out.set_block(0, n, b);
    out.set_block(n, 0, &b.adjoint());
    out.set_block(n, n, c);
    out
}

impl BlockOperator {
    /// Sign-flipped companion `[[A, −B], [−B*, C]]`, a unitary conjugate of the original.
    pub fn companion(&self) -> BlockOperator {
        let minus_b = self.b.scale_real(-1.0);
        let realized = assemble(&self.a, &minus_b, &self.c);
        BlockOperator {
            a: self.a.clone(),
            b: minus_b,
            c: self.c.clone(),
            realized,
        }
    }

    /// Block diagonal `A ⊕ C`.
    pub fn pinching(&self) -> ComplexMatrix {
        direct_sum(&[self.a.clone(), self.c.clone()]).expect("two parts")
    }
}

/// Assembles `[[A, B], [B*, C]]` for `A: n×n`, `B: n×m`, `C: m×m`.
pub fn block2x2(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> Result<BlockOperator> {
    if !a.is_square() || !c.is_square() {
        return Err(Error::shape(
            "block2x2",
            format!("diagonal blocks {:?} and {:?} must be square", a.shape(), c.shape()),
        ));
    }
    if b.shape() != (a.rows(), c.rows()) {
        return Err(Error::shape(
            "block2x2",
            format!(
                "off-diagonal block is {:?}, expected {:?}",
                b.shape(),
                (a.rows(), c.rows())
            ),
        ));
    }
    Ok(BlockOperator {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        realized: assemble(a, b, c),
    })
}

/// Descending multiset union of two descending spectra.
pub fn merge_spectra(s1: &SingularSpectrum, s2: &SingularSpectrum) -> Result<SingularSpectrum> {
    // Re-validate: deserialized spectra bypass the constructor.
    SingularSpectrum::new(s1.values().to_vec())?;
    SingularSpectrum::new(s2.values().to_vec())?;
    let (x, y) = (s1.values(), s2.values());
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        if x[i] >= y[j] {
            out.push(x[i]);
            i += 1;
        } else {
            out.push(y[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    SingularSpectrum::new(out)
}

/// The implemented families of unitarily invariant norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum NormFamily {
    Operator,
    Schatten(f64),
    KyFan(usize),
}

impl fmt::Display for NormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormFamily::Operator => write!(f, "operator"),
            NormFamily::Schatten(p) => write!(f, "schatten({p})"),
            NormFamily::KyFan(k) => write!(f, "ky_fan({k})"),
        }
    }
}

impl NormFamily {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            NormFamily::Operator => Ok(()),
            NormFamily::Schatten(p) if p.is_finite() && p >= 1.0 => Ok(()),
            NormFamily::Schatten(p) => Err(Error::Parameter(format!("Schatten p = {p} < 1"))),
            NormFamily::KyFan(k) if (1..=dim).contains(&k) => Ok(()),
            NormFamily::KyFan(k) => Err(Error::Parameter(format!(
                "Ky Fan k = {k} outside 1..={dim}"
            ))),
        }
    }

    /// Evaluates the norm on a singular spectrum; `dim` bounds the Ky Fan index.
    pub fn of_spectrum(&self, s: &SingularSpectrum, dim: usize) -> Result<f64> {
        self.validate(dim)?;
        Ok(match *self {
            NormFamily::Operator => s.largest(),
            NormFamily::Schatten(p) => {
                let top = s.largest();
                if top == 0.0 {
                    0.0
                } else {
                    // Scaled to avoid overflow for large p.
                    let sum: f64 = s.values().iter().map(|v| (v / top).powf(p)).sum();
                    top * sum.powf(1.0 / p)
                }
            }
            NormFamily::KyFan(k) => s.values().iter().take(k).sum(),
        })
    }
}

pub fn norm(a: &ComplexMatrix, family: NormFamily, tol: &Tolerances) -> Result<f64> {
    let s = singular_values(a, tol)?;
    family.of_spectrum(&s, a.rows().min(a.cols()))
}
