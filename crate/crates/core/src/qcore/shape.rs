use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};

/// Ordered list of subsystem dimensions. Basis states are ordered
/// lexicographically with the leftmost subsystem most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    /// Builds a shape from subsystem dimensions.
    ///
    /// Physical subsystems have dimension at least 2; a one-dimensional
    /// factor is accepted for trivial registers (a program register holding
    /// a single program, for instance).
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(QError::InvalidShape("no subsystems".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d == 0) {
            return Err(QError::InvalidShape(format!("subsystem dimension {d}")));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n.max(1)]).expect("qubit shape")
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &SubsystemShape) -> SubsystemShape {
        SubsystemShape {
            dims: self.dims.iter().chain(other.dims.iter()).copied().collect(),
        }
    }

    /// Shape of the listed subsystems, in the listed order.
    pub fn select(&self, indices: &[usize]) -> Result<SubsystemShape> {
        self.check_indices(indices)?;
        SubsystemShape::new(indices.iter().map(|&i| self.dims[i]).collect())
    }

    pub fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if indices.is_empty() {
            return Err(QError::InvalidArgument("empty subsystem list".into()));
        }
        for (k, &i) in indices.iter().enumerate() {
            if i >= self.dims.len() {
                return Err(QError::InvalidIndex {
                    index: i,
                    count: self.dims.len(),
                });
            }
            if indices[..k].contains(&i) {
                return Err(QError::InvalidArgument(format!(
                    "subsystem {i} listed twice"
                )));
            }
        }
        Ok(())
    }

    /// Digits of a flat basis index, most significant first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(self.dims.iter()).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(self.dims.iter())
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

/// Splits the subsystems of a shape into a targeted set (in caller order)
/// and the complementary set (in natural order), and maps index pairs back
/// to flat indices of the full space.
#[derive(Debug, Clone)]
pub(crate) struct IndexSplit {
    target_dims: Vec<usize>,
    target_strides: Vec<usize>,
    rest_dims: Vec<usize>,
    rest_strides: Vec<usize>,
}

impl IndexSplit {
    pub(crate) fn new(shape: &SubsystemShape, targets: &[usize]) -> Result<Self> {
        shape.check_indices(targets)?;
        let dims = shape.dims();
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        Ok(Self {
            target_dims: targets.iter().map(|&t| dims[t]).collect(),
            target_strides: targets.iter().map(|&t| strides[t]).collect(),
            rest_dims: rest.iter().map(|&r| dims[r]).collect(),
            rest_strides: rest.iter().map(|&r| strides[r]).collect(),
        })
    }

    pub(crate) fn target_size(&self) -> usize {
        self.target_dims.iter().product()
    }

    pub(crate) fn rest_size(&self) -> usize {
        self.rest_dims.iter().product()
    }

    fn offset(dims: &[usize], strides: &[usize], mut index: usize) -> usize {
        let mut off = 0;
        for (&d, &s) in dims.iter().zip(strides.iter()).rev() {
            off += (index % d) * s;
            index /= d;
        }
        off
    }

    /// Flat index for target-subspace index `t` and complement index `r`.
    #[cfg(test)]
    pub(crate) fn flat(&self, t: usize, r: usize) -> usize {
        Self::offset(&self.target_dims, &self.target_strides, t)
            + Self::offset(&self.rest_dims, &self.rest_strides, r)
    }

    pub(crate) fn target_offsets(&self) -> Vec<usize> {
        (0..self.target_size())
            .map(|t| Self::offset(&self.target_dims, &self.target_strides, t))
            .collect()
    }

    pub(crate) fn rest_offsets(&self) -> Vec<usize> {
        (0..self.rest_size())
            .map(|r| Self::offset(&self.rest_dims, &self.rest_strides, r))
            .collect()
    }
}
