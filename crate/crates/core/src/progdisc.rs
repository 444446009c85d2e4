//! Programmable unambiguous discriminator. Program qubits a and b carry
//! ψ₁ and ψ₂, data qubit c carries one of them. A singlet component on
//! (b, c) rules out ψ₂ at c; a singlet on (a, c) rules out ψ₁.

use crate::cloner::Which;
use crate::discrimination::{FAIL, IDENTIFY_1, IDENTIFY_2};
use crate::error::{QError, Result};
use crate::qcore::spectral::hermitian_eigenvalues;
use crate::qcore::{
    embed, gates, haar_random_qubit, run_batched, sample_outcome, CMatrix, DensityOperator,
    Operator, Povm, RngStream, StateVector, SubsystemShape, Tensor,
};

pub const QUBIT_A: usize = 0;
pub const QUBIT_B: usize = 1;
pub const QUBIT_C: usize = 2;

/// Singlet projector on the qubit pair, identity on the third qubit.
pub fn antisym_projector(pair: (usize, usize)) -> Result<Operator> {
    let (i, j) = pair;
    if i == j || i > 2 || j > 2 {
        return Err(QError::InvalidArgument(format!(
            "invalid qubit pair ({i}, {j})"
        )));
    }
    let singlet = gates::singlet();
    let p = Operator::new(
        SubsystemShape::qubits(2),
        DensityOperator::from_pure(&singlet).mat().clone(),
    )?;
    embed(&p, &[i, j], &SubsystemShape::qubits(3))
}

/// Π₁ = c·P(b,c), Π₂ = c·P(a,c), Π_fail = I − Π₁ − Π₂ with the largest c
/// keeping Π_fail positive.
pub fn discriminator_povm() -> Povm {
    let p1 = antisym_projector((QUBIT_B, QUBIT_C)).expect("valid pair");
    let p2 = antisym_projector((QUBIT_A, QUBIT_C)).expect("valid pair");
    let sum = p1.mat() + p2.mat();
    let top = *hermitian_eigenvalues(&sum).last().expect("8x8");
    let c = 1.0 / top;
    let pi1 = p1.mat().scale(c);
    let pi2 = p2.mat().scale(c);
    let fail = CMatrix::identity(8, 8) - &pi1 - &pi2;
    Povm::new(
        SubsystemShape::qubits(3),
        vec![pi1, pi2, fail],
        vec![IDENTIFY_1.into(), IDENTIFY_2.into(), FAIL.into()],
    )
    .expect("valid by construction")
}

/// The scale c used by [`discriminator_povm`].
pub fn discriminator_scale() -> f64 {
    let p1 = antisym_projector((QUBIT_B, QUBIT_C)).expect("valid pair");
    let p2 = antisym_projector((QUBIT_A, QUBIT_C)).expect("valid pair");
    1.0 / hermitian_eigenvalues(&(p1.mat() + p2.mat()))
        .last()
        .copied()
        .expect("8x8")
}

/// |ψ₁⟩_a |ψ₂⟩_b |ψ_which⟩_c.
#[derive(Debug, Clone)]
pub struct DiscriminatorInstance {
    psi1: StateVector,
    psi2: StateVector,
    which: Which,
    joint: StateVector,
}

impl DiscriminatorInstance {
    pub fn new(psi1: StateVector, psi2: StateVector, which: Which) -> Result<Self> {
        for s in [&psi1, &psi2] {
            if s.dim() != 2 {
                return Err(QError::DimensionMismatch {
                    expected: 2,
                    found: s.dim(),
                });
            }
        }
        let data = match which {
            Which::First => &psi1,
            Which::Second => &psi2,
        };
        let joint = psi1.tensor(&psi2).tensor(data);
        Ok(Self {
            psi1,
            psi2,
            which,
            joint,
        })
    }

    pub fn psi1(&self) -> &StateVector {
        &self.psi1
    }

    pub fn psi2(&self) -> &StateVector {
        &self.psi2
    }

    pub fn which(&self) -> Which {
        self.which
    }

    pub fn joint(&self) -> &StateVector {
        &self.joint
    }

    /// Probabilities of identify-1, identify-2, fail.
    pub fn probabilities(&self, povm: &Povm) -> Result<Vec<f64>> {
        povm.probabilities_pure(&self.joint)
    }
}

/// Correct-identification probability for a fixed pair, averaged over the
/// two equally likely inputs.
pub fn instance_success(povm: &Povm, psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    let mut total = 0.0;
    for which in Which::BOTH {
        let inst = DiscriminatorInstance::new(psi1.clone(), psi2.clone(), which)?;
        total += 0.5 * inst.probabilities(povm)?[which.index()];
    }
    Ok(total)
}

/// (1 − s²)/3 for overlap s = |⟨ψ₁|ψ₂⟩|.
pub fn analytic_success(overlap: f64) -> f64 {
    (1.0 - overlap * overlap) / 3.0
}

/// Haar average of [`analytic_success`].
pub const AVERAGE_SUCCESS: f64 = 1.0 / 6.0;

/// Monte Carlo tallies over Haar-random pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProgDiscStats {
    pub trials: u64,
    pub correct: u64,
    pub misidentified: u64,
    pub failed: u64,
}

impl ProgDiscStats {
    pub fn success_rate(&self) -> f64 {
        self.correct as f64 / self.trials.max(1) as f64
    }
}

pub const MIN_TRIALS: usize = 10_000;

/// Samples fresh Haar-random (ψ₁, ψ₂) and a fair-coin input for every
/// trial, then one outcome of the discriminator POVM.
pub fn trial_stats(trials: usize, rng: &mut RngStream) -> Result<ProgDiscStats> {
    if trials < MIN_TRIALS {
        return Err(QError::InvalidArgument(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    let povm = discriminator_povm();
    let batches = run_batched(rng, trials, |r, n| -> Result<ProgDiscStats> {
        let mut s = ProgDiscStats {
            trials: n as u64,
            ..Default::default()
        };
        for _ in 0..n {
            let psi1 = haar_random_qubit(r);
            let psi2 = haar_random_qubit(r);
            let which = Which::random(r);
            let inst = DiscriminatorInstance::new(psi1, psi2, which)?;
            let k = sample_outcome(&inst.probabilities(&povm)?, r)?;
            match k {
                2 => s.failed += 1,
                k if k == which.index() => s.correct += 1,
                _ => s.misidentified += 1,
            }
        }
        Ok(s)
    });
    batches
        .into_iter()
        .try_fold(ProgDiscStats::default(), |acc, b| {
            let b = b?;
            Ok(ProgDiscStats {
                trials: acc.trials + b.trials,
                correct: acc.correct + b.correct,
                misidentified: acc.misidentified + b.misidentified,
                failed: acc.failed + b.failed,
            })
        })
}

/// Monte Carlo estimate of the average success probability.
pub fn average_success(trials: usize, rng: &mut RngStream) -> Result<f64> {
    Ok(trial_stats(trials, rng)?.success_rate())
}
