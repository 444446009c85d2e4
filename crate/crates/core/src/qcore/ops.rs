//! Tensor products, partial traces, embedding of local operators,
//! measurement and sampling.

use super::shape::IndexSplit;
use super::{
    c64, CMatrix, CVector, DensityOperator, Operator, Povm, RngStream, StateVector, SubsystemShape,
    STRUCT_TOL,
};
use crate::error::{QError, Result};

/// Probability at or below which an outcome is reported as impossible.
pub const IMPOSSIBLE_PROB: f64 = 1e-12;

/// Kronecker product preserving lexicographic basis order.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let amps = self.amps().kronecker(other.amps());
        StateVector::new(self.shape().concat(other.shape()), amps)
            .expect("product of normalized states is normalized")
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        let mat = self.mat().kronecker(other.mat());
        Operator::new(self.shape().concat(other.shape()), mat).expect("square product")
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Self {
        DensityOperator::from_trusted(
            self.shape().concat(other.shape()),
            self.mat().kronecker(other.mat()),
        )
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Tensor product of a non-empty list, left to right.
pub fn tensor_all<T: Tensor + Clone>(parts: &[T]) -> Option<T> {
    let (first, rest) = parts.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, p| acc.tensor(p)))
}

/// Reduced density operator on the `keep` subsystems (in the order given).
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let shape = rho.shape();
    let split = IndexSplit::new(shape, keep)?;
    let kept_shape = shape.select(keep)?;
    let (t_off, r_off) = (split.target_offsets(), split.rest_offsets());
    let m = rho.mat();
    let dk = t_off.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (i, &ti) in t_off.iter().enumerate() {
        for (j, &tj) in t_off.iter().enumerate() {
            out[(i, j)] = r_off.iter().map(|&r| m[(ti + r, tj + r)]).sum();
        }
    }
    Ok(DensityOperator::from_trusted(kept_shape, out))
}

/// Reduced density operator of a pure state, without forming |ψ⟩⟨ψ|.
pub fn reduced_state(psi: &StateVector, keep: &[usize]) -> Result<DensityOperator> {
    let shape = psi.shape();
    let split = IndexSplit::new(shape, keep)?;
    let kept_shape = shape.select(keep)?;
    let (t_off, r_off) = (split.target_offsets(), split.rest_offsets());
    let a = psi.amps();
    let dk = t_off.len();
    let mut out = CMatrix::zeros(dk, dk);
    for &r in &r_off {
        for (i, &ti) in t_off.iter().enumerate() {
            let ai = a[ti + r];
            if ai.norm_sqr() == 0.0 {
                continue;
            }
            for (j, &tj) in t_off.iter().enumerate() {
                out[(i, j)] += ai * a[tj + r].conj();
            }
        }
    }
    Ok(DensityOperator::from_trusted(kept_shape, out))
}

fn check_target_dims(op: &Operator, shape: &SubsystemShape, targets: &[usize]) -> Result<()> {
    let target_dim: usize = shape.select(targets)?.total_dim();
    if op.dim() != target_dim {
        return Err(QError::DimensionMismatch {
            expected: target_dim,
            found: op.dim(),
        });
    }
    Ok(())
}

fn is_identity_layout(shape: &SubsystemShape, targets: &[usize]) -> bool {
    targets.len() == shape.len() && targets.iter().enumerate().all(|(k, &t)| k == t)
}

/// Lifts `op` acting on `targets` to the full space of `shape`, with the
/// identity on every other subsystem.
pub fn embed(op: &Operator, targets: &[usize], shape: &SubsystemShape) -> Result<Operator> {
    check_target_dims(op, shape, targets)?;
    if is_identity_layout(shape, targets) {
        return Operator::new(shape.clone(), op.mat().clone());
    }
    let split = IndexSplit::new(shape, targets)?;
    let (t_off, r_off) = (split.target_offsets(), split.rest_offsets());
    let d = shape.total_dim();
    let mut full = CMatrix::zeros(d, d);
    let m = op.mat();
    for &r in &r_off {
        for (i, &ti) in t_off.iter().enumerate() {
            for (j, &tj) in t_off.iter().enumerate() {
                full[(ti + r, tj + r)] = m[(i, j)];
            }
        }
    }
    Operator::new(shape.clone(), full)
}

/// Something a local operator can act on.
pub trait Evolve: Sized {
    fn subsystems(&self) -> &SubsystemShape;
    fn evolve(&self, op: &Operator, targets: &[usize]) -> Result<Self>;
}

impl Evolve for StateVector {
    fn subsystems(&self) -> &SubsystemShape {
        self.shape()
    }

    fn evolve(&self, op: &Operator, targets: &[usize]) -> Result<Self> {
        let shape = self.shape();
        check_target_dims(op, shape, targets)?;
        let amps = if is_identity_layout(shape, targets) {
            op.apply_vec(self.amps())?
        } else {
            let split = IndexSplit::new(shape, targets)?;
            let (t_off, r_off) = (split.target_offsets(), split.rest_offsets());
            let src = self.amps();
            let mut out = CVector::zeros(src.len());
            let mut local = CVector::zeros(t_off.len());
            for &r in &r_off {
                for (k, &t) in t_off.iter().enumerate() {
                    local[k] = src[t + r];
                }
                let mapped = op.mat() * &local;
                for (k, &t) in t_off.iter().enumerate() {
                    out[t + r] = mapped[k];
                }
            }
            out
        };
        if op.is_unitary() {
            StateVector::new(shape.clone(), amps)
        } else {
            StateVector::normalized(shape.clone(), amps)
        }
    }
}

impl Evolve for DensityOperator {
    fn subsystems(&self) -> &SubsystemShape {
        self.shape()
    }

    fn evolve(&self, op: &Operator, targets: &[usize]) -> Result<Self> {
        if !op.is_unitary() {
            return Err(QError::NotUnitary {
                deviation: super::operator::unitary_deviation(op.mat()),
            });
        }
        let full = embed(op, targets, self.shape())?;
        Ok(self.conjugated(full.mat()))
    }
}

/// Applies `op` to the listed subsystems of a state or density operator.
///
/// Non-unitary operators are accepted for pure states only, and the result
/// is renormalized.
pub fn apply<S: Evolve>(op: &Operator, targets: &[usize], s: &S) -> Result<S> {
    s.evolve(op, targets)
}

/// Unnormalized `op` applied to the listed subsystems of a pure state.
pub fn apply_raw(op: &Operator, targets: &[usize], s: &StateVector) -> Result<CVector> {
    let full = embed(op, targets, s.shape())?;
    full.apply_vec(s.amps())
}

/// Projective measurement: returns ⟨s|P|s⟩ and P|s⟩/‖P|s⟩‖.
pub fn measure_projective(
    s: &StateVector,
    projector: &Operator,
    targets: &[usize],
) -> Result<(f64, StateVector)> {
    let p = projector.mat();
    let idem = super::operator::max_abs(&(p * p - p));
    let herm = projector.hermitian_deviation();
    if idem > STRUCT_TOL || herm > STRUCT_TOL {
        return Err(QError::InvalidArgument(format!(
            "not an orthogonal projector (idempotence {idem:e}, hermiticity {herm:e})"
        )));
    }
    let v = apply_raw(projector, targets, s)?;
    let prob = v.norm_squared();
    if prob <= IMPOSSIBLE_PROB {
        return Err(QError::ImpossibleOutcome { prob });
    }
    let post = StateVector::new(s.shape().clone(), v.unscale(prob.sqrt()))?;
    Ok((prob, post))
}

/// Computational-basis outcome distribution of the listed subsystems.
pub fn outcome_distribution(s: &StateVector, targets: &[usize]) -> Result<Vec<f64>> {
    let split = IndexSplit::new(s.shape(), targets)?;
    let (t_off, r_off) = (split.target_offsets(), split.rest_offsets());
    let a = s.amps();
    Ok(t_off
        .iter()
        .map(|&t| r_off.iter().map(|&r| a[t + r].norm_sqr()).sum())
        .collect())
}

/// Conditions on computational outcome `outcome` of the listed subsystems
/// and returns its probability together with the normalized state of the
/// remaining subsystems.
pub fn condition_on(
    s: &StateVector,
    targets: &[usize],
    outcome: usize,
) -> Result<(f64, StateVector)> {
    let shape = s.shape();
    if targets.len() >= shape.len() {
        return Err(QError::InvalidArgument(
            "conditioning on every subsystem leaves nothing".into(),
        ));
    }
    let split = IndexSplit::new(shape, targets)?;
    if outcome >= split.target_size() {
        return Err(QError::InvalidArgument(format!(
            "outcome {outcome} out of range"
        )));
    }
    let t = split.target_offsets()[outcome];
    let a = s.amps();
    let branch: CVector = CVector::from_iterator(
        split.rest_size(),
        split.rest_offsets().iter().map(|&r| a[t + r]),
    );
    let prob = branch.norm_squared();
    if prob <= IMPOSSIBLE_PROB {
        return Err(QError::ImpossibleOutcome { prob });
    }
    let rest: Vec<usize> = (0..shape.len()).filter(|i| !targets.contains(i)).collect();
    let post = StateVector::new(shape.select(&rest)?, branch.unscale(prob.sqrt()))?;
    Ok((prob, post))
}

/// Outcome probabilities Tr(Πᵢ ρ).
pub fn povm_probabilities(rho: &DensityOperator, povm: &Povm) -> Result<Vec<f64>> {
    if rho.dim() != povm.shape().total_dim() {
        return Err(QError::DimensionMismatch {
            expected: povm.shape().total_dim(),
            found: rho.dim(),
        });
    }
    Ok(povm
        .elements()
        .iter()
        .map(|e| e.dotc(rho.mat()).re)
        .collect())
}

/// Draws an index distributed according to `probs`.
pub fn sample_outcome(probs: &[f64], rng: &mut RngStream) -> Result<usize> {
    if probs.is_empty() {
        return Err(QError::InvalidProbabilities("empty".into()));
    }
    if let Some(p) = probs
        .iter()
        .find(|&&p| p < -IMPOSSIBLE_PROB || !p.is_finite())
    {
        return Err(QError::InvalidProbabilities(format!("entry {p}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(QError::InvalidProbabilities(format!("sum {total}")));
    }
    let u = rng.uniform() * total;
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p.max(0.0);
        if u < acc {
            return Ok(i);
        }
    }
    // u landed in the rounding gap at the top; pick the last possible outcome
    Ok(probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1))
}

/// Haar-random pure state of the given shape, from normalized complex
/// Gaussians.
pub fn haar_random_state(shape: SubsystemShape, rng: &mut RngStream) -> StateVector {
    loop {
        let amps = CVector::from_fn(shape.total_dim(), |_, _| {
            c64(rng.standard_normal(), rng.standard_normal())
        });
        if let Ok(s) = StateVector::normalized(shape.clone(), amps) {
            return s;
        }
    }
}

pub fn haar_random_qubit(rng: &mut RngStream) -> StateVector {
    haar_random_state(SubsystemShape::qubits(1), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;

    #[test]
    fn basis_tensor() {
        let s = StateVector::zero().tensor(&StateVector::one());
        let expect: Vec<_> = [0.0, 1.0, 0.0, 0.0].iter().map(|&x| c64(x, 0.0)).collect();
        assert_eq!(s.amps().as_slice(), expect.as_slice());
        let id = gates::identity(2).tensor(&gates::identity(2));
        assert_eq!(id.mat(), &CMatrix::identity(4, 4));
    }

    #[test]
    fn x_on_second_qubit() {
        let s = StateVector::from_bits(&[0, 0]);
        let out = apply(&gates::pauli_x(), &[1], &s).unwrap();
        assert_eq!(out, StateVector::from_bits(&[0, 1]));
    }

    #[test]
    fn cnot_on_10() {
        let out = apply(&gates::cnot(), &[0, 1], &StateVector::from_bits(&[1, 0])).unwrap();
        assert_eq!(out, StateVector::from_bits(&[1, 1]));
        // reversed targets: control on qubit 1
        let out = apply(&gates::cnot(), &[1, 0], &StateVector::from_bits(&[0, 1])).unwrap();
        assert_eq!(out, StateVector::from_bits(&[1, 1]));
    }

    #[test]
    fn apply_dimension_mismatch() {
        let err = apply(&gates::cnot(), &[0], &StateVector::from_bits(&[0, 0])).unwrap_err();
        assert!(matches!(err, QError::DimensionMismatch { .. }));
        let err = apply(&gates::pauli_x(), &[3], &StateVector::from_bits(&[0, 0])).unwrap_err();
        assert!(matches!(err, QError::InvalidIndex { .. }));
    }

    #[test]
    fn maximally_entangled_marginal() {
        let rho = DensityOperator::from_pure(&gates::Bell::PsiPlus.state());
        let red = partial_trace(&rho, &[0]).unwrap();
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!((red.mat() - half).norm() < 1e-15);
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[2]).is_err());
    }

    #[test]
    fn projective_basics() {
        let zero_proj = DensityOperator::from_pure(&StateVector::zero());
        let p0 = Operator::new(SubsystemShape::qubits(1), zero_proj.mat().clone()).unwrap();
        let (prob, post) = measure_projective(&StateVector::zero(), &p0, &[0]).unwrap();
        assert!((prob - 1.0).abs() < 1e-15);
        assert_eq!(post, StateVector::zero());

        let one_proj = DensityOperator::from_pure(&StateVector::one());
        let p1 = Operator::new(SubsystemShape::qubits(1), one_proj.mat().clone()).unwrap();
        let (prob, post) = measure_projective(&StateVector::plus(), &p1, &[0]).unwrap();
        assert!((prob - 0.5).abs() < 1e-15);
        assert!(post.distance_up_to_phase(&StateVector::one()).unwrap() < 1e-15);

        assert!(matches!(
            measure_projective(&StateVector::zero(), &p1, &[0]),
            Err(QError::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn sample_degenerate_and_invalid() {
        let mut rng = RngStream::new(1);
        for _ in 0..1000 {
            assert_eq!(sample_outcome(&[1.0, 0.0], &mut rng).unwrap(), 0);
        }
        assert!(sample_outcome(&[1.2, -0.2], &mut rng).is_err());
        assert!(sample_outcome(&[0.5, 0.4], &mut rng).is_err());
    }

    #[test]
    fn condition_drops_measured_register() {
        // (|0⟩|+⟩ + |1⟩|−⟩)/√2, condition on qubit 0 = 1 → |−⟩
        let s = StateVector::zero()
            .tensor(&StateVector::plus())
            .amps()
            .clone()
            + StateVector::one().tensor(&StateVector::minus()).amps();
        let s = StateVector::normalized(SubsystemShape::qubits(2), s).unwrap();
        let (p, rest) = condition_on(&s, &[0], 1).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(rest.distance_up_to_phase(&StateVector::minus()).unwrap() < 1e-15);
    }
}
