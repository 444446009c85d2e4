//! Three-qubit approximate cloner built from four CNOTs, its anticlone
//! output, and exact-or-fail cloning of a known pair of states.
//!
//! Qubit 1 carries the input, qubits 2 and 3 carry the two-qubit program
//! `c0|Ξ00⟩ + c1|Ξ0x⟩`. The program weights control how the input's
//! information is split between outputs 1 and 2.

use crate::error::{QError, Result};
use crate::qcore::isometry::unitary_extending;
use crate::qcore::{
    c64, condition_on, embed, gates, haar_random_qubit, outcome_distribution, reduced_state,
    sample_outcome, CMatrix, CVector, DensityOperator, Operator, RngStream, StateVector,
    SubsystemShape, Tensor, STRUCT_TOL,
};

/// (|00⟩ + |11⟩)/√2.
pub fn xi_00() -> StateVector {
    gates::Bell::PsiPlus.state()
}

/// |0⟩(|0⟩ + |1⟩)/√2.
pub fn xi_0x() -> StateVector {
    StateVector::zero().tensor(&StateVector::plus())
}

/// Real program weights for `c0|Ξ00⟩ + c1|Ξ0x⟩`.
///
/// Since ⟨Ξ00|Ξ0x⟩ = 1/2 the state is normalized iff c0² + c1² + c0·c1 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ClonerProgram {
    c0: f64,
    c1: f64,
    state: StateVector,
}

impl ClonerProgram {
    pub fn new(c0: f64, c1: f64) -> Result<Self> {
        let norm = c0 * c0 + c1 * c1 + c0 * c1;
        if !norm.is_finite() || (norm - 1.0).abs() > STRUCT_TOL {
            return Err(QError::NotNormalized {
                norm: norm.max(0.0).sqrt(),
            });
        }
        let amps = xi_00().amps() * c64(c0, 0.0) + xi_0x().amps() * c64(c1, 0.0);
        let state = StateVector::normalized(SubsystemShape::qubits(2), amps)?;
        Ok(Self { c0, c1, state })
    }

    /// Rescales arbitrary (not both zero) weights onto the normalization
    /// ellipse.
    pub fn from_weights(c0: f64, c1: f64) -> Result<Self> {
        let q = c0 * c0 + c1 * c1 + c0 * c1;
        if q <= 0.0 || !q.is_finite() {
            return Err(QError::InvalidArgument(format!(
                "weights ({c0}, {c1}) cannot be normalized"
            )));
        }
        let s = q.sqrt();
        Self::new(c0 / s, c1 / s)
    }

    /// c0 = c1 = 1/√3: information split equally between outputs 1 and 2.
    pub fn symmetric() -> Self {
        let c = 1.0 / 3f64.sqrt();
        Self::new(c, c).expect("normalized")
    }

    /// Random weights with a uniformly distributed direction.
    pub fn random(rng: &mut RngStream) -> Self {
        let t = rng.uniform() * std::f64::consts::TAU;
        Self::from_weights(t.cos(), t.sin()).expect("nonzero direction")
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// The program with c0 and c1 exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.c1, self.c0).expect("normalization is symmetric")
    }

    /// Closed-form fidelities (F₁, F₂) of outputs 1 and 2 to the input.
    pub fn clone_fidelities(&self) -> (f64, f64) {
        let (c0, c1) = (self.c0, self.c1);
        (
            c0 * c0 + c0 * c1 + c1 * c1 / 2.0,
            c1 * c1 + c0 * c1 + c0 * c0 / 2.0,
        )
    }
}

/// CNOT(1→2), CNOT(1→3), CNOT(2→1), CNOT(3→1) on three qubits.
pub fn cloner_circuit() -> Operator {
    let shape = SubsystemShape::qubits(3);
    let cnot = gates::cnot();
    [[0, 1], [0, 2], [1, 0], [2, 0]]
        .iter()
        .map(|pair| embed(&cnot, pair, &shape).expect("valid targets"))
        .fold(Operator::identity(shape.clone()), |acc, g| {
            g.compose(&acc).expect("same dimension")
        })
}

/// Reduced states of the three cloner outputs.
#[derive(Debug, Clone)]
pub struct CloneOutputs {
    pub rho1: DensityOperator,
    pub rho2: DensityOperator,
    pub rho3: DensityOperator,
}

fn check_qubit(psi: &StateVector) -> Result<()> {
    if psi.dim() != 2 || psi.shape().len() != 1 {
        return Err(QError::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Runs the cloner circuit on |ψ⟩₁ ⊗ program₂₃ and returns the three
/// single-qubit marginals.
pub fn clone(psi: &StateVector, prog: &ClonerProgram) -> Result<CloneOutputs> {
    check_qubit(psi)?;
    let input = psi.tensor(prog.state());
    let out = crate::qcore::apply(&cloner_circuit(), &[0, 1, 2], &input)?;
    Ok(CloneOutputs {
        rho1: reduced_state(&out, &[0])?,
        rho2: reduced_state(&out, &[1])?,
        rho3: reduced_state(&out, &[2])?,
    })
}

/// Closed-form marginals of outputs 1 and 2:
/// ρ₁ = (c0² + c0c1)|ψ⟩⟨ψ| + (c1²/2) I and ρ₂ = (c1² + c0c1)|ψ⟩⟨ψ| + (c0²/2) I.
pub fn closed_form_clones(
    psi: &StateVector,
    prog: &ClonerProgram,
) -> Result<(DensityOperator, DensityOperator)> {
    check_qubit(psi)?;
    let (c0, c1) = (prog.c0, prog.c1);
    let proj = DensityOperator::from_pure(psi).mat().clone();
    let id = CMatrix::identity(2, 2);
    let shape = SubsystemShape::qubits(1);
    let rho1 = proj.scale(c0 * c0 + c0 * c1) + id.scale(c1 * c1 / 2.0);
    let rho2 = proj.scale(c1 * c1 + c0 * c1) + id.scale(c0 * c0 / 2.0);
    Ok((
        DensityOperator::new(shape.clone(), rho1)?,
        DensityOperator::new(shape, rho2)?,
    ))
}

/// Fixed correction on output 3. The third port carries ψ*, the complex
/// conjugate of the input; σy maps ψ* to ψ⊥ for every ψ.
pub fn anticlone_correction() -> Operator {
    gates::pauli_y()
}

/// Anticlone output: σy ρ₃ σy for the symmetric program.
pub fn anticlone(psi: &StateVector) -> Result<DensityOperator> {
    let outputs = clone(psi, &ClonerProgram::symmetric())?;
    crate::qcore::apply(&anticlone_correction(), &[0], &outputs.rho3)
}

/// ⟨ψ⊥|ρ_anti|ψ⊥⟩ for the symmetric program; 2/3 for every input.
pub fn anticlone_fidelity(psi: &StateVector) -> Result<f64> {
    anticlone(psi)?.fidelity_to_pure(&psi.orthogonal_qubit()?)
}

/// Which member of a two-state set is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    First,
    Second,
}

impl Which {
    pub const BOTH: [Which; 2] = [Which::First, Which::Second];

    pub fn index(self) -> usize {
        match self {
            Which::First => 0,
            Which::Second => 1,
        }
    }

    pub fn other(self) -> Which {
        match self {
            Which::First => Which::Second,
            Which::Second => Which::First,
        }
    }

    /// Fair coin.
    pub fn random(rng: &mut RngStream) -> Which {
        if rng.coin() {
            Which::First
        } else {
            Which::Second
        }
    }
}

/// A known pair of single-qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStateSet {
    psi1: StateVector,
    psi2: StateVector,
    overlap: f64,
}

impl TwoStateSet {
    pub fn new(psi1: StateVector, psi2: StateVector) -> Result<Self> {
        check_qubit(&psi1)?;
        check_qubit(&psi2)?;
        let overlap = psi1.overlap(&psi2)?.min(1.0);
        Ok(Self {
            psi1,
            psi2,
            overlap,
        })
    }

    /// ψ₁ = |0⟩, ψ₂ = s|0⟩ + √(1 − s²)|1⟩.
    pub fn with_overlap(overlap: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&overlap) {
            return Err(QError::InvalidArgument(format!(
                "overlap {overlap} outside [0, 1]"
            )));
        }
        let psi2 = StateVector::qubit(
            c64(overlap, 0.0),
            c64((1.0 - overlap * overlap).sqrt(), 0.0),
        )?;
        Self::new(StateVector::zero(), psi2)
    }

    /// Independent Haar-random pair.
    pub fn random(rng: &mut RngStream) -> Self {
        let a = haar_random_qubit(rng);
        let b = haar_random_qubit(rng);
        Self::new(a, b).expect("qubits")
    }

    pub fn psi1(&self) -> &StateVector {
        &self.psi1
    }

    pub fn psi2(&self) -> &StateVector {
        &self.psi2
    }

    pub fn get(&self, which: Which) -> &StateVector {
        match which {
            Which::First => &self.psi1,
            Which::Second => &self.psi2,
        }
    }

    /// |⟨ψ₁|ψ₂⟩|.
    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub(crate) fn require_distinguishable(&self) -> Result<()> {
        if self.overlap >= 1.0 - STRUCT_TOL {
            return Err(QError::Indistinguishable {
                overlap: self.overlap,
            });
        }
        Ok(())
    }
}

/// Result of one probabilistic cloning attempt.
#[derive(Debug, Clone)]
pub struct CloneAttempt {
    pub success: bool,
    /// Two-qubit output, present only on success.
    pub output: Option<StateVector>,
}

/// Exact-or-fail cloner for a known pair.
///
/// Acts on input ⊗ blank ⊗ flag. For each member ψᵢ of the pair,
/// U|ψᵢ⟩|0⟩|0⟩ = √p |ψᵢψᵢ⟩|0⟩ + √(1−p) |00⟩|1⟩ (up to a phase on ψ₂), with
/// p = 1/(1 + |⟨ψ₁|ψ₂⟩|). Reading flag 0 heralds a perfect pair of copies.
#[derive(Debug, Clone)]
pub struct ProbabilisticCloner {
    set: TwoStateSet,
    unitary: Operator,
    success_prob: f64,
}

impl ProbabilisticCloner {
    pub fn new(set: TwoStateSet) -> Result<Self> {
        set.require_distinguishable()?;
        let ip = set.psi1.inner(&set.psi2)?;
        let r = ip.norm();
        let phase = if r > 1e-15 { ip / r } else { c64(1.0, 0.0) };
        let p = 1.0 / (1.0 + r);

        let blank = StateVector::zero();
        let flag0 = StateVector::zero();
        let flag1 = StateVector::one();
        let psi1 = set.psi1.clone();
        // rephase ψ₂ so that ⟨ψ₁|ψ₂'⟩ = r is real
        let psi2 = StateVector::new(set.psi2.shape().clone(), set.psi2.amps() * phase.conj())?;

        let failure = StateVector::from_bits(&[0, 0]).tensor(&flag1);
        let make_in = |s: &StateVector| s.tensor(&blank).tensor(&flag0).into_amps();
        let make_out = |s: &StateVector| -> CVector {
            s.tensor(s).tensor(&flag0).amps() * c64(p.sqrt(), 0.0)
                + failure.amps() * c64((1.0 - p).sqrt(), 0.0)
        };
        let inputs = [make_in(&psi1), make_in(&psi2)];
        let outputs = [make_out(&psi1), make_out(&psi2)];
        let mat = unitary_extending(&inputs, &outputs, 8)?;
        let unitary = Operator::unitary(SubsystemShape::qubits(3), mat)?;
        Ok(Self {
            set,
            unitary,
            success_prob: p,
        })
    }

    pub fn set(&self) -> &TwoStateSet {
        &self.set
    }

    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    /// Designed success probability 1/(1 + overlap).
    pub fn success_probability(&self) -> f64 {
        self.success_prob
    }

    /// Output state before the flag is read.
    pub fn pre_measurement(&self, which: Which) -> Result<StateVector> {
        let input = self
            .set
            .get(which)
            .tensor(&StateVector::zero())
            .tensor(&StateVector::zero());
        crate::qcore::apply(&self.unitary, &[0, 1, 2], &input)
    }

    pub fn run(&self, which: Which, rng: &mut RngStream) -> Result<CloneAttempt> {
        let out = self.pre_measurement(which)?;
        let probs = outcome_distribution(&out, &[2])?;
        if sample_outcome(&probs, rng)? == 0 {
            let (_, clones) = condition_on(&out, &[2], 0)?;
            Ok(CloneAttempt {
                success: true,
                output: Some(clones),
            })
        } else {
            Ok(CloneAttempt {
                success: false,
                output: None,
            })
        }
    }
}

/// One attempt at exact cloning of `set.get(which)`.
pub fn probabilistic_clone(
    set: &TwoStateSet,
    which: Which,
    rng: &mut RngStream,
) -> Result<CloneAttempt> {
    ProbabilisticCloner::new(set.clone())?.run(which, rng)
}

/// Fidelity of a two-qubit output to ψ ⊗ ψ.
pub fn copy_fidelity(output: &StateVector, psi: &StateVector) -> Result<f64> {
    output.fidelity(&psi.tensor(psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Largest entry-wise gap between a density operator and a·|ψ⟩⟨ψ| + b·I.
    fn deviation_from(rho: &DensityOperator, psi: &StateVector, a: f64, b: f64) -> f64 {
        let target =
            DensityOperator::from_pure(psi).mat().scale(a) + CMatrix::identity(2, 2).scale(b);
        (rho.mat() - target)
            .iter()
            .map(|z: &num_complex::Complex64| z.norm())
            .fold(0.0, f64::max)
    }

    fn d(a: &DensityOperator, b: &DensityOperator) -> f64 {
        a.max_abs_diff(b)
    }

    #[test]
    fn circuit_is_unitary_permutation() {
        let c = cloner_circuit();
        assert!(c.is_unitary());
        let dev = (c.mat().adjoint() * c.mat() - CMatrix::identity(8, 8)).norm();
        assert!(dev < 1e-12);
    }

    #[test]
    fn xi00_program_keeps_input_at_output_1() {
        let psi = StateVector::qubit(c64(0.6, 0.1), c64(-0.2, 0.7)).unwrap();
        let out =
            crate::qcore::apply(&cloner_circuit(), &[0, 1, 2], &psi.tensor(&xi_00())).unwrap();
        let expected = psi.tensor(&xi_00());
        assert!((out.amps() - expected.amps()).norm() < 1e-12);
    }

    #[test]
    fn xi0x_program_moves_input_to_output_2() {
        let psi = StateVector::qubit(c64(0.6, 0.1), c64(-0.2, 0.7)).unwrap();
        let out =
            crate::qcore::apply(&cloner_circuit(), &[0, 1, 2], &psi.tensor(&xi_0x())).unwrap();
        // |ψ⟩₂|Ξ00⟩₁₃: reorder (2,1,3) → (1,2,3)
        let amps = CVector::from_fn(8, |i, _| {
            let (q1, q2, q3) = (i >> 2 & 1, i >> 1 & 1, i & 1);
            psi.amps()[q2] * xi_00().amps()[2 * q1 + q3]
        });
        assert!((out.amps() - amps).norm() < 1e-12);
    }

    #[test]
    fn symmetric_program_gives_five_sixths() {
        let psi = StateVector::qubit(c64(0.8, 0.0), c64(0.0, 0.6)).unwrap();
        let out = clone(&psi, &ClonerProgram::symmetric()).unwrap();
        assert!(d(&out.rho1, &out.rho2) < 1e-12);
        let f = out.rho1.fidelity_to_pure(&psi).unwrap();
        assert!((f - 5.0 / 6.0).abs() < 1e-12);
        let perp = psi.orthogonal_qubit().unwrap();
        assert!(deviation_from(&out.rho1, &psi, 5.0 / 6.0 - 1.0 / 6.0, 1.0 / 6.0) < 1e-12);
        assert!((out.rho1.fidelity_to_pure(&perp).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn extreme_programs_route_information() {
        let psi = StateVector::qubit(c64(0.3, 0.4), c64(0.5, -0.7)).unwrap();
        let pure = DensityOperator::from_pure(&psi);
        let out = clone(&psi, &ClonerProgram::new(1.0, 0.0).unwrap()).unwrap();
        assert!(d(&out.rho1, &pure) < 1e-12);
        let out = clone(&psi, &ClonerProgram::new(0.0, 1.0).unwrap()).unwrap();
        assert!(d(&out.rho2, &pure) < 1e-12);
    }

    #[test]
    fn malformed_program_rejected() {
        assert!(matches!(
            ClonerProgram::new(1.0, 1.0),
            Err(QError::NotNormalized { .. })
        ));
        assert!(ClonerProgram::from_weights(0.0, 0.0).is_err());
    }

    #[test]
    fn raw_third_output_carries_conjugate() {
        // ρ₃ = (1/3) I + (1/3)|ψ*⟩⟨ψ*| for the symmetric program
        let psi = StateVector::qubit(c64(0.6, 0.3), c64(0.2, -0.5)).unwrap();
        let out = clone(&psi, &ClonerProgram::symmetric()).unwrap();
        assert!(deviation_from(&out.rho3, &psi.conj(), 1.0 / 3.0, 1.0 / 3.0) < 1e-12);
    }

    #[test]
    fn anticlone_two_thirds() {
        for psi in [StateVector::zero(), StateVector::plus()] {
            assert!((anticlone_fidelity(&psi).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_pair_always_clones() {
        let set = TwoStateSet::new(StateVector::zero(), StateVector::one()).unwrap();
        let cloner = ProbabilisticCloner::new(set).unwrap();
        assert!((cloner.success_probability() - 1.0).abs() < 1e-15);
        let mut rng = RngStream::new(3);
        for which in Which::BOTH {
            for _ in 0..200 {
                let a = cloner.run(which, &mut rng).unwrap();
                assert!(a.success);
            }
        }
    }

    #[test]
    fn identical_pair_rejected() {
        let set = TwoStateSet::new(StateVector::plus(), StateVector::plus()).unwrap();
        assert!(matches!(
            ProbabilisticCloner::new(set),
            Err(QError::Indistinguishable { .. })
        ));
    }

    #[test]
    fn heralded_branch_is_exact_copy() {
        let mut rng = RngStream::new(11);
        let set = TwoStateSet::random(&mut rng);
        let cloner = ProbabilisticCloner::new(set.clone()).unwrap();
        for which in Which::BOTH {
            let out = cloner.pre_measurement(which).unwrap();
            let (p, clones) = condition_on(&out, &[2], 0).unwrap();
            assert!((p - 1.0 / (1.0 + set.overlap())).abs() < 1e-12);
            assert!(copy_fidelity(&clones, set.get(which)).unwrap() > 1.0 - 1e-12);
        }
    }
}
