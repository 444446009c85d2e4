use super::{c64, CMatrix, CVector};
use crate::error::{QError, Result};

const DEPENDENT_TOL: f64 = 1e-10;

/// Orthonormal basis of span(`vectors`) via modified Gram–Schmidt, together
/// with the upper-triangular coefficients `r` such that `vectors[j] =
/// Σ_k q[k] · r[k][j]`.
fn gram_schmidt(vectors: &[CVector]) -> Result<(Vec<CVector>, Vec<Vec<num_complex::Complex64>>)> {
    let n = vectors.len();
    let mut q: Vec<CVector> = Vec::with_capacity(n);
    let mut r = vec![vec![c64(0.0, 0.0); n]; n];
    for (j, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (k, qk) in q.iter().enumerate() {
            let coeff = qk.dotc(&w);
            r[k][j] = coeff;
            w.axpy(-coeff, qk, c64(1.0, 0.0));
        }
        let norm = w.norm();
        if norm < DEPENDENT_TOL {
            return Err(QError::InvalidArgument(
                "input vectors are linearly dependent".into(),
            ));
        }
        r[j][j] = c64(norm, 0.0);
        q.push(w.unscale(norm));
    }
    Ok((q, r))
}

/// Extends an orthonormal family to a full orthonormal basis of C^dim.
fn complete_basis(mut q: Vec<CVector>, dim: usize) -> Vec<CVector> {
    for e in 0..dim {
        if q.len() == dim {
            break;
        }
        let mut w = CVector::zeros(dim);
        w[e] = c64(1.0, 0.0);
        for _pass in 0..2 {
            for qk in &q {
                let coeff = qk.dotc(&w);
                w.axpy(-coeff, qk, c64(1.0, 0.0));
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            q.push(w.unscale(norm));
        }
    }
    q
}

/// A unitary U on C^dim with U·inputs[i] = outputs[i] for every i.
///
/// Requires the two families to have the same Gram matrix; the map between
/// their spans is completed arbitrarily on the orthogonal complements.
pub fn unitary_extending(inputs: &[CVector], outputs: &[CVector], dim: usize) -> Result<CMatrix> {
    if inputs.len() != outputs.len() || inputs.is_empty() {
        return Err(QError::InvalidArgument(
            "need equally many non-zero input and output vectors".into(),
        ));
    }
    for v in inputs.iter().chain(outputs.iter()) {
        if v.len() != dim {
            return Err(QError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    for (i, (vi, wi)) in inputs.iter().zip(outputs).enumerate() {
        for (vj, wj) in inputs.iter().zip(outputs).skip(i) {
            let gap = (vi.dotc(vj) - wi.dotc(wj)).norm();
            if gap > 1e-9 {
                return Err(QError::InvalidArgument(format!(
                    "Gram matrices differ by {gap:e}"
                )));
            }
        }
    }
    let (q_in, r) = gram_schmidt(inputs)?;
    // Same triangular factor on the output side: q_out[k] solves
    // outputs[j] = Σ_k q_out[k] r[k][j] by forward substitution.
    let mut q_out: Vec<CVector> = Vec::with_capacity(outputs.len());
    for (j, w) in outputs.iter().enumerate() {
        let mut acc = w.clone();
        for (k, qk) in q_out.iter().enumerate() {
            acc.axpy(-r[k][j], qk, c64(1.0, 0.0));
        }
        q_out.push(acc / r[j][j]);
    }
    let b_in = complete_basis(q_in, dim);
    let b_out = complete_basis(q_out, dim);
    let mut u = CMatrix::zeros(dim, dim);
    for (a, b) in b_out.iter().zip(b_in.iter()) {
        u += a * b.adjoint();
    }
    Ok(u)
}
