//! Hermitian positive-definite solves on small dense complex matrices.

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = nalgebra::DVector<Complex64>;

pub(crate) fn cholesky(c: CMatrix, what: &'static str) -> Result<Cholesky<Complex64, Dyn>> {
    Cholesky::new(c).ok_or(Error::Singular(what))
}

/// `B C⁻¹` for Hermitian positive-definite `C`, computed as `(C⁻¹ B†)†`.
pub(crate) fn right_divide_hpd(b: &CMatrix, c: CMatrix, what: &'static str) -> Result<CMatrix> {
    let chol = cholesky(c, what)?;
    Ok(chol.solve(&b.adjoint()).adjoint())
}

/// Inverse and natural-log determinant of a Hermitian positive-definite matrix.
pub(crate) fn inverse_and_logdet(c: CMatrix, what: &'static str) -> Result<(CMatrix, f64)> {
    let chol = cholesky(c, what)?;
    let logdet = 2.0 * chol.l_dirty().diagonal().iter().map(|d| d.re.ln()).sum::<f64>();
    Ok((chol.inverse(), logdet))
}

/// `y† A y` for Hermitian `A`, returned as a real number.
pub(crate) fn quadratic_form(a: &CMatrix, y: &CVector) -> f64 {
    let ay = a * y;
    y.iter().zip(ay.iter()).map(|(yi, ai)| (yi.conj() * ai).re).sum()
}
