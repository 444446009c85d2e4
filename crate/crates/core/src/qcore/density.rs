use super::spectral::hermitian_eigenvalues;
use super::{CMatrix, StateVector, SubsystemShape, STRUCT_TOL};
use crate::error::{QError, Result};

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    shape: SubsystemShape,
    mat: CMatrix,
}

impl DensityOperator {
    pub fn new(shape: SubsystemShape, mat: CMatrix) -> Result<Self> {
        let dim = shape.total_dim();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(QError::DimensionMismatch {
                expected: dim,
                found: mat.nrows(),
            });
        }
        let herm = super::operator::max_abs(&(&mat - mat.adjoint()));
        if herm > STRUCT_TOL {
            return Err(QError::NotHermitian { deviation: herm });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > STRUCT_TOL {
            return Err(QError::NotUnitTrace { trace });
        }
        let min = hermitian_eigenvalues(&mat).first().copied().unwrap_or(0.0);
        if min < -STRUCT_TOL {
            return Err(QError::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { shape, mat })
    }

    /// Skips validation for matrices produced by trace-preserving maps of
    /// valid inputs.
    pub(crate) fn from_trusted(shape: SubsystemShape, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), shape.total_dim());
        Self { shape, mat }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amps();
        Self {
            shape: psi.shape().clone(),
            mat: a * a.adjoint(),
        }
    }

    pub fn maximally_mixed(shape: SubsystemShape) -> Self {
        let d = shape.total_dim();
        Self {
            mat: CMatrix::identity(d, d).scale(1.0 / d as f64),
            shape,
        }
    }

    /// Convex mixture Σ wᵢ ρᵢ.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| QError::InvalidArgument("empty mixture".into()))?;
        let d = first.1.dim();
        let mut mat = CMatrix::zeros(d, d);
        for (w, rho) in parts {
            if rho.dim() != d {
                return Err(QError::DimensionMismatch {
                    expected: d,
                    found: rho.dim(),
                });
            }
            mat += rho.mat.scale(*w);
        }
        Self::new(first.1.shape.clone(), mat)
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn fidelity_to_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(QError::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let a = psi.amps();
        Ok(a.dotc(&(&self.mat * a)).re)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        super::operator::max_abs(&(&self.mat - &other.mat))
    }

    /// Conjugation U ρ U† by a full-space matrix (no validation).
    pub(crate) fn conjugated(&self, u: &CMatrix) -> Self {
        Self {
            shape: self.shape.clone(),
            mat: u * &self.mat * u.adjoint(),
        }
    }
}

impl From<&StateVector> for DensityOperator {
    fn from(psi: &StateVector) -> Self {
        Self::from_pure(psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c64;

    #[test]
    fn validation() {
        let shape = SubsystemShape::qubits(1);
        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityOperator::new(shape.clone(), bad_trace),
            Err(QError::NotUnitTrace { .. })
        ));
        let not_psd = CMatrix::from_row_slice(
            2,
            2,
            &[c64(1.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-0.5, 0.0)],
        );
        assert!(matches!(
            DensityOperator::new(shape, not_psd),
            Err(QError::NotPositive { .. })
        ));
    }

    #[test]
    fn pure_state_fidelity() {
        let rho = DensityOperator::from_pure(&StateVector::plus());
        assert!((rho.fidelity_to_pure(&StateVector::zero()).unwrap() - 0.5).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }
}
