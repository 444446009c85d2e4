//! Probabilistic programmable phase gate U(α) = exp(iασz).
//!
//! A CNOT from the data qubit onto a program qubit Ξ(α), followed by a
//! computational measurement of the program, applies U(α) or U(−α) with
//! equal probability. Failed runs can be repaired with doubled-angle
//! programs, or avoided up front with a second program qubit and a Toffoli.

use crate::error::{QError, Result};
use crate::qcore::{
    apply, c64, condition_on, gates, outcome_distribution, run_batched, sample_outcome, CMatrix,
    Operator, RngStream, StateVector, SubsystemShape, Tensor,
};

/// diag(e^{iα}, e^{−iα}).
pub fn phase_unitary(alpha: f64) -> Operator {
    let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c64(0.0, alpha).exp(),
        c64(0.0, -alpha).exp(),
    ]));
    Operator::new(SubsystemShape::qubits(1), m).expect("2x2")
}

/// U(α)|ψ⟩.
pub fn rotate(psi: &StateVector, alpha: f64) -> Result<StateVector> {
    apply(&phase_unitary(alpha), &[0], psi)
}

/// (e^{iα}|0⟩ + e^{−iα}|1⟩)/√2.
pub fn xi_program(alpha: f64) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::qubit(c64(0.0, alpha).exp() * h, c64(0.0, -alpha).exp() * h).expect("normalized")
}

/// What happened in one run of a phase-gate protocol.
#[derive(Debug, Clone)]
pub struct PhaseRunRecord {
    pub rounds_used: usize,
    pub success: bool,
    /// U(α)|ψ⟩ on success; the residual data state otherwise.
    pub final_state: StateVector,
    /// Program measurement outcome of each round.
    pub per_round_outcomes: Vec<usize>,
}

fn check_qubit(psi: &StateVector) -> Result<()> {
    if psi.dim() != 2 {
        return Err(QError::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Data ⊗ program after the CNOT, before measurement. Equals
/// (1/√2)[U(α)|ψ⟩|0⟩ + U(−α)|ψ⟩|1⟩].
pub fn single_shot_state(psi: &StateVector, alpha: f64) -> Result<StateVector> {
    check_qubit(psi)?;
    let joint = psi
        .reshaped(SubsystemShape::qubits(1))?
        .tensor(&xi_program(alpha));
    apply(&gates::cnot(), &[0, 1], &joint)
}

/// Measures `targets` of `joint` and returns the outcome with the state of
/// the rest.
fn measure(
    joint: &StateVector,
    targets: &[usize],
    rng: &mut RngStream,
) -> Result<(usize, StateVector)> {
    let probs = outcome_distribution(joint, targets)?;
    let k = sample_outcome(&probs, rng)?;
    let (_, rest) = condition_on(joint, targets, k)?;
    Ok((k, rest))
}

pub fn single_shot(psi: &StateVector, alpha: f64, rng: &mut RngStream) -> Result<PhaseRunRecord> {
    let (k, out) = measure(&single_shot_state(psi, alpha)?, &[1], rng)?;
    Ok(PhaseRunRecord {
        rounds_used: 1,
        success: k == 0,
        final_state: out,
        per_round_outcomes: vec![k],
    })
}

/// Round k uses Ξ(2^{k−1}α). After failing round k the data hold
/// U(−(2^k − 1)α)|ψ⟩, so the next success branch is again U(α)|ψ⟩.
pub fn repeat_until_success(
    psi: &StateVector,
    alpha: f64,
    max_rounds: usize,
    rng: &mut RngStream,
) -> Result<PhaseRunRecord> {
    if max_rounds == 0 {
        return Err(QError::InvalidArgument(
            "max_rounds must be at least 1".into(),
        ));
    }
    check_qubit(psi)?;
    let mut state = psi.reshaped(SubsystemShape::qubits(1))?;
    let mut outcomes = Vec::with_capacity(max_rounds);
    let mut angle = alpha;
    for round in 1..=max_rounds {
        let (k, out) = measure(&single_shot_state(&state, angle)?, &[1], rng)?;
        outcomes.push(k);
        state = out;
        if k == 0 {
            return Ok(PhaseRunRecord {
                rounds_used: round,
                success: true,
                final_state: state,
                per_round_outcomes: outcomes,
            });
        }
        angle *= 2.0;
    }
    Ok(PhaseRunRecord {
        rounds_used: max_rounds,
        success: false,
        final_state: state,
        per_round_outcomes: outcomes,
    })
}

/// Data ⊗ Ξ(α) ⊗ Ξ(2α) after CNOT(1→2) and Toffoli(1,2→3).
pub fn toffoli_state(psi: &StateVector, alpha: f64) -> Result<StateVector> {
    check_qubit(psi)?;
    let joint = psi
        .reshaped(SubsystemShape::qubits(1))?
        .tensor(&xi_program(alpha))
        .tensor(&xi_program(2.0 * alpha));
    let joint = apply(&gates::cnot(), &[0, 1], &joint)?;
    apply(&gates::toffoli(), &[0, 1, 2], &joint)
}

/// Data state expected in each program branch 00, 01, 10, 11 of
/// [`toffoli_state`], up to a phase per branch: U(α)ψ three times, then
/// U(−3α)ψ. Each branch has weight 1/4.
pub fn toffoli_branches(psi: &StateVector, alpha: f64) -> Result<[StateVector; 4]> {
    let good = rotate(psi, alpha)?;
    Ok([good.clone(), good.clone(), good, rotate(psi, -3.0 * alpha)?])
}

/// Accepts program outcomes 00, 01 and 10.
pub fn toffoli_processor_run(
    psi: &StateVector,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<PhaseRunRecord> {
    let (k, out) = measure(&toffoli_state(psi, alpha)?, &[1, 2], rng)?;
    Ok(PhaseRunRecord {
        rounds_used: 1,
        success: k != 3,
        final_state: out,
        per_round_outcomes: vec![k],
    })
}

/// Which protocol to sample in [`run_trials`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseProtocol {
    SingleShot,
    Repeat { max_rounds: usize },
    Toffoli,
}

impl PhaseProtocol {
    /// Exact success probability.
    pub fn success_probability(self) -> f64 {
        match self {
            PhaseProtocol::SingleShot => 0.5,
            PhaseProtocol::Repeat { max_rounds } => 1.0 - 0.5f64.powi(max_rounds as i32),
            PhaseProtocol::Toffoli => 0.75,
        }
    }

    pub fn run(self, psi: &StateVector, alpha: f64, rng: &mut RngStream) -> Result<PhaseRunRecord> {
        match self {
            PhaseProtocol::SingleShot => single_shot(psi, alpha, rng),
            PhaseProtocol::Repeat { max_rounds } => {
                repeat_until_success(psi, alpha, max_rounds, rng)
            }
            PhaseProtocol::Toffoli => toffoli_processor_run(psi, alpha, rng),
        }
    }
}

/// Aggregate of many runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStats {
    pub trials: u64,
    pub successes: u64,
    /// Worst 1 − F between an accepted output and U(α)|ψ⟩.
    pub max_accepted_infidelity: f64,
}

impl PhaseStats {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials.max(1) as f64
    }
}

pub fn run_trials(
    protocol: PhaseProtocol,
    psi: &StateVector,
    alpha: f64,
    trials: usize,
    rng: &mut RngStream,
) -> Result<PhaseStats> {
    if trials == 0 {
        return Err(QError::InvalidArgument("trials must be at least 1".into()));
    }
    let target = rotate(psi, alpha)?;
    let batches = run_batched(rng, trials, |r, n| -> Result<PhaseStats> {
        let mut stats = PhaseStats {
            trials: n as u64,
            successes: 0,
            max_accepted_infidelity: 0.0,
        };
        for _ in 0..n {
            let rec = protocol.run(psi, alpha, r)?;
            if rec.success {
                stats.successes += 1;
                let gap = 1.0 - rec.final_state.fidelity(&target)?;
                stats.max_accepted_infidelity = stats.max_accepted_infidelity.max(gap);
            }
        }
        Ok(stats)
    });
    let mut total = PhaseStats {
        trials: 0,
        successes: 0,
        max_accepted_infidelity: 0.0,
    };
    for b in batches {
        let b = b?;
        total.trials += b.trials;
        total.successes += b.successes;
        total.max_accepted_infidelity =
            total.max_accepted_infidelity.max(b.max_accepted_infidelity);
    }
    Ok(total)
}
