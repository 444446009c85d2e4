use nalgebra::DVector;
use num_complex::Complex64;

use super::{c64, CVector, SubsystemShape, NORM_TOL};
use crate::error::{QError, Result};

/// Normalized pure state over a tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    shape: SubsystemShape,
    amps: CVector,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(shape: SubsystemShape, amps: CVector) -> Result<Self> {
        if amps.len() != shape.total_dim() {
            return Err(QError::DimensionMismatch {
                expected: shape.total_dim(),
                found: amps.len(),
            });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QError::NotNormalized { norm });
        }
        Ok(Self { shape, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(shape: SubsystemShape, amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(QError::NotNormalized { norm });
        }
        Self::new(shape, amps.unscale(norm))
    }

    pub fn from_slice(shape: SubsystemShape, amps: &[Complex64]) -> Result<Self> {
        Self::new(shape, DVector::from_column_slice(amps))
    }

    pub fn basis(shape: SubsystemShape, index: usize) -> Result<Self> {
        let dim = shape.total_dim();
        if index >= dim {
            return Err(QError::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = c64(1.0, 0.0);
        Ok(Self { shape, amps })
    }

    /// Computational basis state of qubits, e.g. `&[0, 1]` for |01⟩.
    pub fn from_bits(bits: &[u8]) -> Self {
        let shape = SubsystemShape::qubits(bits.len());
        let index = bits
            .iter()
            .fold(0usize, |acc, &b| 2 * acc + (b & 1) as usize);
        Self::basis(shape, index).expect("in range")
    }

    /// Single qubit α|0⟩ + β|1⟩ (normalized on construction).
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::normalized(
            SubsystemShape::qubits(1),
            DVector::from_vec(vec![alpha, beta]),
        )
    }

    pub fn zero() -> Self {
        Self::from_bits(&[0])
    }

    pub fn one() -> Self {
        Self::from_bits(&[1])
    }

    pub fn plus() -> Self {
        Self::qubit(c64(1.0, 0.0), c64(1.0, 0.0)).expect("valid")
    }

    pub fn minus() -> Self {
        Self::qubit(c64(1.0, 0.0), c64(-1.0, 0.0)).expect("valid")
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amps(self) -> CVector {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(QError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// |⟨self|other⟩|, the overlap used throughout the discrimination formulas.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Relabels the subsystem structure without touching amplitudes.
    pub fn reshaped(&self, shape: SubsystemShape) -> Result<Self> {
        Self::new(shape, self.amps.clone())
    }

    /// Qubit orthogonal to this one: (α, β) ↦ (−β*, α*).
    pub fn orthogonal_qubit(&self) -> Result<Self> {
        if self.dim() != 2 {
            return Err(QError::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let (a, b) = (self.amps[0], self.amps[1]);
        Ok(Self {
            shape: self.shape.clone(),
            amps: DVector::from_vec(vec![-b.conj(), a.conj()]),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            amps: self.amps.map(|z| z.conj()),
        }
    }

    /// Largest absolute imaginary part over all amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.amps.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Distance between two states after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let ip = self.inner(other)?;
        let phase = if ip.norm() > 1e-15 {
            ip / ip.norm()
        } else {
            c64(1.0, 0.0)
        };
        Ok((&self.amps * phase - &other.amps).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        let amps = DVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(matches!(
            StateVector::new(SubsystemShape::qubits(1), amps),
            Err(QError::NotNormalized { .. })
        ));
    }

    #[test]
    fn orthogonal_qubit_is_orthogonal() {
        let psi = StateVector::qubit(c64(0.3, 0.2), c64(-0.5, 0.7)).unwrap();
        let perp = psi.orthogonal_qubit().unwrap();
        assert!(psi.inner(&perp).unwrap().norm() < 1e-15);
        assert!((perp.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_bits_index() {
        let s = StateVector::from_bits(&[1, 0, 1]);
        assert_eq!(s.amps()[5], c64(1.0, 0.0));
    }
}
