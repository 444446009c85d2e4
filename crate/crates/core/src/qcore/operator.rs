use num_complex::Complex64;

use super::{c64, CMatrix, CVector, SubsystemShape, STRUCT_TOL};
use crate::error::{QError, Result};

/// Square operator on a tensor-product space, with a cached unitarity flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    shape: SubsystemShape,
    mat: CMatrix,
    unitary: bool,
}

impl Operator {
    pub fn new(shape: SubsystemShape, mat: CMatrix) -> Result<Self> {
        let dim = shape.total_dim();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(QError::DimensionMismatch {
                expected: dim,
                found: if mat.nrows() != dim {
                    mat.nrows()
                } else {
                    mat.ncols()
                },
            });
        }
        let unitary = unitary_deviation(&mat) <= STRUCT_TOL;
        Ok(Self {
            shape,
            mat,
            unitary,
        })
    }

    /// Builds an operator and insists it is unitary.
    pub fn unitary(shape: SubsystemShape, mat: CMatrix) -> Result<Self> {
        let deviation = unitary_deviation(&mat);
        let op = Self::new(shape, mat)?;
        if !op.unitary {
            return Err(QError::NotUnitary { deviation });
        }
        Ok(op)
    }

    pub fn identity(shape: SubsystemShape) -> Self {
        let dim = shape.total_dim();
        Self {
            shape,
            mat: CMatrix::identity(dim, dim),
            unitary: true,
        }
    }

    /// Operator from a row-major list of real entries.
    pub fn from_real_rows(shape: SubsystemShape, rows: &[f64]) -> Result<Self> {
        let dim = shape.total_dim();
        if rows.len() != dim * dim {
            return Err(QError::DimensionMismatch {
                expected: dim * dim,
                found: rows.len(),
            });
        }
        Self::new(
            shape,
            CMatrix::from_row_iterator(dim, dim, rows.iter().map(|&x| c64(x, 0.0))),
        )
    }

    /// Permutation operator sending basis state |k⟩ to |perm[k]⟩.
    pub fn permutation(shape: SubsystemShape, perm: &[usize]) -> Result<Self> {
        let dim = shape.total_dim();
        if perm.len() != dim {
            return Err(QError::DimensionMismatch {
                expected: dim,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; dim];
        let mut mat = CMatrix::zeros(dim, dim);
        for (k, &image) in perm.iter().enumerate() {
            if image >= dim || seen[image] {
                return Err(QError::InvalidPermutation(format!("{perm:?}")));
            }
            seen[image] = true;
            mat[(image, k)] = c64(1.0, 0.0);
        }
        Ok(Self {
            shape,
            mat,
            unitary: true,
        })
    }

    /// Same matrix under a different factorization of the same dimension.
    pub fn with_shape(self, shape: SubsystemShape) -> Result<Self> {
        if shape.total_dim() != self.dim() {
            return Err(QError::DimensionMismatch {
                expected: self.dim(),
                found: shape.total_dim(),
            });
        }
        Ok(Self { shape, ..self })
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn adjoint(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            mat: self.mat.adjoint(),
            unitary: self.unitary,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(QError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mat = &self.mat * &other.mat;
        if self.unitary && other.unitary {
            return Ok(Self {
                shape: self.shape.clone(),
                mat,
                unitary: true,
            });
        }
        Self::new(self.shape.clone(), mat)
    }

    pub fn scaled(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.shape.clone(), &self.mat * factor)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Matrix-vector product that skips zero entries of `v`, so sparse inputs
    /// such as basis states cost O(dim · nnz).
    pub fn apply_vec(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(QError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut out = CVector::zeros(self.dim());
        for (j, &x) in v.iter().enumerate() {
            if x.re != 0.0 || x.im != 0.0 {
                out.axpy(x, &self.mat.column(j), c64(1.0, 0.0));
            }
        }
        Ok(out)
    }

    /// True when the two operators agree up to a global phase:
    /// |Tr(A†B)| = D within `tol`.
    pub fn equals_up_to_phase(&self, other: &Operator, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let overlap = self.mat.dotc(&other.mat).norm();
        let d = self.dim() as f64;
        (overlap - d).abs() <= tol
            && (self.mat.norm_squared() - d).abs() <= tol
            && (other.mat.norm_squared() - d).abs() <= tol
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn unitary_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_is_unitary() {
        let p = Operator::permutation(SubsystemShape::single(3).unwrap(), &[2, 0, 1]).unwrap();
        assert!(p.is_unitary());
        assert_eq!(p.mat()[(2, 0)], c64(1.0, 0.0));
        assert!(Operator::permutation(SubsystemShape::single(3).unwrap(), &[0, 0, 1]).is_err());
    }

    #[test]
    fn phase_equality() {
        let id = Operator::identity(SubsystemShape::qubits(1));
        let phased = id.scaled(c64(0.0, 1.0)).unwrap();
        assert!(id.equals_up_to_phase(&phased, 1e-8));
        let z =
            Operator::from_real_rows(SubsystemShape::qubits(1), &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(!id.equals_up_to_phase(&z, 1e-8));
    }

    #[test]
    fn sparse_apply_matches_dense() {
        let p = Operator::permutation(SubsystemShape::single(4).unwrap(), &[1, 2, 3, 0]).unwrap();
        let v = CVector::from_fn(4, |i, _| c64(i as f64, 0.5));
        let dense = p.mat() * &v;
        assert!((p.apply_vec(&v).unwrap() - dense).norm() < 1e-15);
    }
}
