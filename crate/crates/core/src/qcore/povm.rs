use super::spectral::hermitian_eigenvalues;
use super::{CMatrix, StateVector, SubsystemShape, STRUCT_TOL};
use crate::error::{QError, Result};

/// Finite POVM: positive elements summing to the identity, each with a
/// label naming the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    shape: SubsystemShape,
    elements: Vec<CMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(shape: SubsystemShape, elements: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(QError::InvalidArgument("POVM without elements".into()));
        }
        if elements.len() != labels.len() {
            return Err(QError::InvalidArgument(format!(
                "{} elements but {} labels",
                elements.len(),
                labels.len()
            )));
        }
        let d = shape.total_dim();
        let mut sum = CMatrix::zeros(d, d);
        for e in &elements {
            if e.nrows() != d || e.ncols() != d {
                return Err(QError::DimensionMismatch {
                    expected: d,
                    found: e.nrows(),
                });
            }
            let herm = super::operator::max_abs(&(e - e.adjoint()));
            if herm > STRUCT_TOL {
                return Err(QError::NotHermitian { deviation: herm });
            }
            let min = hermitian_eigenvalues(e).first().copied().unwrap_or(0.0);
            if min < -STRUCT_TOL {
                return Err(QError::NotPositive {
                    min_eigenvalue: min,
                });
            }
            sum += e;
        }
        let deviation = super::operator::max_abs(&(sum - CMatrix::identity(d, d)));
        if deviation > STRUCT_TOL {
            return Err(QError::IncompletePovm { deviation });
        }
        Ok(Self {
            shape,
            elements,
            labels,
        })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(shape: SubsystemShape) -> Self {
        let d = shape.total_dim();
        let elements = (0..d)
            .map(|i| {
                let mut m = CMatrix::zeros(d, d);
                m[(i, i)] = super::c64(1.0, 0.0);
                m
            })
            .collect();
        let labels = (0..d).map(|i| i.to_string()).collect();
        Self {
            shape,
            elements,
            labels,
        }
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Outcome probabilities ⟨ψ|Πᵢ|ψ⟩ for a pure input.
    pub fn probabilities_pure(&self, psi: &StateVector) -> Result<Vec<f64>> {
        if psi.dim() != self.shape.total_dim() {
            return Err(QError::DimensionMismatch {
                expected: self.shape.total_dim(),
                found: psi.dim(),
            });
        }
        let a = psi.amps();
        Ok(self.elements.iter().map(|e| a.dotc(&(e * a)).re).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c64;

    #[test]
    fn incomplete_povm_rejected() {
        let shape = SubsystemShape::qubits(1);
        let mut half = CMatrix::identity(2, 2);
        half[(1, 1)] = c64(0.0, 0.0);
        let err = Povm::new(shape, vec![half], vec!["0".into()]).unwrap_err();
        assert!(matches!(err, QError::IncompletePovm { .. }));
    }

    #[test]
    fn computational_on_zero() {
        let povm = Povm::computational(SubsystemShape::qubits(1));
        let p = povm.probabilities_pure(&StateVector::zero()).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);
    }
}
