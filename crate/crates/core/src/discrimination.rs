//! Minimum-error (Helstrom) and unambiguous discrimination of two known
//! qubit states with equal priors.

use crate::cloner::{TwoStateSet, Which};
use crate::error::{QError, Result};
use crate::qcore::spectral::hermitian_eigen;
use crate::qcore::{
    run_batched, sample_outcome, CMatrix, DensityOperator, Povm, RngStream, StateVector,
    SubsystemShape,
};

pub const IDENTIFY_1: &str = "identify-1";
pub const IDENTIFY_2: &str = "identify-2";
pub const FAIL: &str = "fail";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    MinimumError,
    Unambiguous,
}

/// A measurement for telling ψ₁ from ψ₂. Outcome 0 means "ψ₁", outcome 1
/// means "ψ₂", and unambiguous strategies carry a third "fail" outcome.
#[derive(Debug, Clone)]
pub struct DiscriminationStrategy {
    kind: StrategyKind,
    povm: Povm,
    priors: [f64; 2],
}

/// p_err = (1 − √(1 − s²))/2 for overlap s.
pub fn helstrom_error(overlap: f64) -> f64 {
    0.5 * (1.0 - (1.0 - overlap * overlap).max(0.0).sqrt())
}

/// p_succ = 1 − s for overlap s.
pub fn usd_success(overlap: f64) -> f64 {
    1.0 - overlap
}

fn projector(psi: &StateVector) -> CMatrix {
    DensityOperator::from_pure(psi).mat().clone()
}

/// Projectors onto the non-negative and negative eigenspaces of
/// |ψ₁⟩⟨ψ₁| − |ψ₂⟩⟨ψ₂|. A fully degenerate (identical) pair sends the whole
/// space to outcome 1.
pub fn helstrom_povm(set: &TwoStateSet) -> Result<DiscriminationStrategy> {
    let gamma = projector(set.psi1()) - projector(set.psi2());
    let (values, vectors) = hermitian_eigen(&gamma);
    let mut pi1 = CMatrix::zeros(2, 2);
    for (k, &lambda) in values.iter().enumerate() {
        if lambda > -1e-12 {
            let v = vectors.column(k);
            pi1 += v * v.adjoint();
        }
    }
    let pi2 = CMatrix::identity(2, 2) - &pi1;
    let povm = Povm::new(
        SubsystemShape::qubits(1),
        vec![pi1, pi2],
        vec![IDENTIFY_1.into(), IDENTIFY_2.into()],
    )?;
    Ok(DiscriminationStrategy {
        kind: StrategyKind::MinimumError,
        povm,
        priors: [0.5, 0.5],
    })
}

/// Π₁ = c|ψ₂⊥⟩⟨ψ₂⊥|, Π₂ = c|ψ₁⊥⟩⟨ψ₁⊥|, Π_fail = I − Π₁ − Π₂ with c the
/// largest weight keeping Π_fail positive.
pub fn usd_povm(set: &TwoStateSet) -> Result<DiscriminationStrategy> {
    set.require_distinguishable()?;
    let a = projector(&set.psi2().orthogonal_qubit()?);
    let b = projector(&set.psi1().orthogonal_qubit()?);
    let (values, _) = hermitian_eigen(&(&a + &b));
    let top = *values.last().expect("2x2");
    if top <= 0.0 {
        return Err(QError::Indistinguishable {
            overlap: set.overlap(),
        });
    }
    let c = 1.0 / top;
    let pi1 = a.scale(c);
    let pi2 = b.scale(c);
    let fail = CMatrix::identity(2, 2) - &pi1 - &pi2;
    let povm = Povm::new(
        SubsystemShape::qubits(1),
        vec![pi1, pi2, fail],
        vec![IDENTIFY_1.into(), IDENTIFY_2.into(), FAIL.into()],
    )?;
    Ok(DiscriminationStrategy {
        kind: StrategyKind::Unambiguous,
        povm,
        priors: [0.5, 0.5],
    })
}

impl DiscriminationStrategy {
    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    /// Outcome probabilities when `which` is presented.
    pub fn probabilities(&self, set: &TwoStateSet, which: Which) -> Result<Vec<f64>> {
        self.povm.probabilities_pure(set.get(which))
    }

    fn averaged(&self, set: &TwoStateSet, pick: impl Fn(Which, &[f64]) -> f64) -> Result<f64> {
        let mut total = 0.0;
        for which in Which::BOTH {
            let p = self.probabilities(set, which)?;
            total += self.priors[which.index()] * pick(which, &p);
        }
        Ok(total)
    }

    /// Average probability of naming the wrong state.
    pub fn error_probability(&self, set: &TwoStateSet) -> Result<f64> {
        self.averaged(set, |w, p| p[w.other().index()])
    }

    /// Average probability of naming the right state.
    pub fn success_probability(&self, set: &TwoStateSet) -> Result<f64> {
        self.averaged(set, |w, p| p[w.index()])
    }

    /// Average probability of the inconclusive outcome (0 for Helstrom).
    pub fn failure_probability(&self, set: &TwoStateSet) -> Result<f64> {
        self.averaged(set, |_, p| p.get(2).copied().unwrap_or(0.0))
    }
}

/// Outcome counts from simulated runs: `counts[which][outcome]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeTable {
    pub trials: u64,
    pub counts: [Vec<u64>; 2],
}

impl OutcomeTable {
    fn empty(outcomes: usize) -> Self {
        Self {
            trials: 0,
            counts: [vec![0; outcomes], vec![0; outcomes]],
        }
    }

    fn merge(mut self, other: &OutcomeTable) -> Self {
        self.trials += other.trials;
        for w in 0..2 {
            for (a, b) in self.counts[w].iter_mut().zip(&other.counts[w]) {
                *a += b;
            }
        }
        self
    }

    pub fn correct(&self) -> u64 {
        self.counts[0][0] + self.counts[1][1]
    }

    /// Runs that named the wrong state.
    pub fn misidentified(&self) -> u64 {
        self.counts[0][1] + self.counts[1][0]
    }

    pub fn failed(&self) -> u64 {
        self.counts
            .iter()
            .map(|row| row.get(2).copied().unwrap_or(0))
            .sum()
    }

    pub fn freq(&self, count: u64) -> f64 {
        count as f64 / self.trials.max(1) as f64
    }
}

/// Simulates `trials` runs with a fair coin choosing the input state.
pub fn simulate(
    strategy: &DiscriminationStrategy,
    set: &TwoStateSet,
    trials: usize,
    rng: &mut RngStream,
) -> Result<OutcomeTable> {
    if trials == 0 {
        return Err(QError::InvalidArgument("trials must be at least 1".into()));
    }
    let probs = [
        strategy.probabilities(set, Which::First)?,
        strategy.probabilities(set, Which::Second)?,
    ];
    let outcomes = strategy.povm.len();
    let batches = run_batched(rng, trials, |r, n| -> Result<OutcomeTable> {
        let mut table = OutcomeTable::empty(outcomes);
        for _ in 0..n {
            let which = Which::random(r);
            let k = sample_outcome(&probs[which.index()], r)?;
            table.counts[which.index()][k] += 1;
        }
        table.trials = n as u64;
        Ok(table)
    });
    batches
        .into_iter()
        .try_fold(OutcomeTable::empty(outcomes), |acc, b| Ok(acc.merge(&b?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c64;

    fn pair(overlap: f64) -> TwoStateSet {
        TwoStateSet::with_overlap(overlap).unwrap()
    }

    #[test]
    fn helstrom_closed_form() {
        let s = helstrom_povm(&pair(0.0)).unwrap();
        assert!(s.error_probability(&pair(0.0)).unwrap().abs() < 1e-12);
        let set = pair(0.5);
        let s = helstrom_povm(&set).unwrap();
        let expected = (1.0 - 3f64.sqrt() / 2.0) / 2.0;
        assert!((s.error_probability(&set).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.0670).abs() < 1e-4);
    }

    #[test]
    fn helstrom_identical_states() {
        let set = TwoStateSet::new(StateVector::plus(), StateVector::plus()).unwrap();
        let s = helstrom_povm(&set).unwrap();
        assert!((s.error_probability(&set).unwrap() - 0.5).abs() < 1e-12);
        // tie rule: everything to outcome 1
        assert!((&s.povm().elements()[0] - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn usd_closed_form_and_unambiguity() {
        let set = pair(0.5);
        let s = usd_povm(&set).unwrap();
        assert!((s.success_probability(&set).unwrap() - 0.5).abs() < 1e-12);
        let p = s.probabilities(&set, Which::First).unwrap();
        assert!(p[1].abs() < 1e-12);
        let p = s.probabilities(&set, Which::Second).unwrap();
        assert!(p[0].abs() < 1e-12);

        let ortho = pair(0.0);
        let s = usd_povm(&ortho).unwrap();
        assert!((s.success_probability(&ortho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn usd_rejects_identical() {
        let set = TwoStateSet::new(StateVector::zero(), StateVector::zero()).unwrap();
        assert!(matches!(
            usd_povm(&set),
            Err(QError::Indistinguishable { .. })
        ));
    }

    #[test]
    fn complex_pair_usd() {
        let a = StateVector::qubit(c64(0.6, 0.2), c64(0.1, -0.7)).unwrap();
        let b = StateVector::qubit(c64(-0.3, 0.4), c64(0.8, 0.1)).unwrap();
        let set = TwoStateSet::new(a, b).unwrap();
        let s = usd_povm(&set).unwrap();
        assert!((s.success_probability(&set).unwrap() - usd_success(set.overlap())).abs() < 1e-12);
        assert!(s.error_probability(&set).unwrap().abs() < 1e-12);
    }

    #[test]
    fn simulation_helstrom_orthogonal_never_errs() {
        let set = pair(0.0);
        let s = helstrom_povm(&set).unwrap();
        let t = simulate(&s, &set, 20_000, &mut RngStream::new(1)).unwrap();
        assert_eq!(t.trials, 20_000);
        assert_eq!(t.misidentified(), 0);
    }

    #[test]
    fn simulate_rejects_zero_trials() {
        let set = pair(0.3);
        let s = helstrom_povm(&set).unwrap();
        assert!(simulate(&s, &set, 0, &mut RngStream::new(1)).is_err());
    }
}
