//! Programmable processors: a fixed unitary on data ⊗ program whose action
//! on the data is selected by the program state.
//!
//! In deterministic mode the program output is discarded and the data see a
//! channel. In probabilistic mode the program output is projected and the
//! data are kept only on acceptance.

use num_complex::Complex64;

use crate::cloner::cloner_circuit;
use crate::error::{QError, Result};
use crate::qcore::gates::{self, Bell};
use crate::qcore::spectral::{hermitian_eigen, numerical_rank};
use crate::qcore::{
    c64, CMatrix, CVector, DensityOperator, Operator, StateVector, SubsystemShape, Tensor,
    COMPOSED_TOL, STRUCT_TOL,
};

/// Unitary on data ⊗ program (data subsystems first).
#[derive(Debug, Clone)]
pub struct Processor {
    unitary: Operator,
    data: SubsystemShape,
    program: SubsystemShape,
}

impl Processor {
    pub fn new(unitary: Operator, data: SubsystemShape, program: SubsystemShape) -> Result<Self> {
        let dim = data.total_dim() * program.total_dim();
        if unitary.dim() != dim {
            return Err(QError::DimensionMismatch {
                expected: dim,
                found: unitary.dim(),
            });
        }
        if !unitary.is_unitary() {
            return Err(QError::NotUnitary {
                deviation: crate::qcore::operator::unitary_deviation(unitary.mat()),
            });
        }
        let unitary = unitary.with_shape(data.concat(&program))?;
        Ok(Self {
            unitary,
            data,
            program,
        })
    }

    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    pub fn data_shape(&self) -> &SubsystemShape {
        &self.data
    }

    pub fn program_shape(&self) -> &SubsystemShape {
        &self.program
    }

    pub fn data_dim(&self) -> usize {
        self.data.total_dim()
    }

    pub fn program_dim(&self) -> usize {
        self.program.total_dim()
    }

    fn check_data(&self, data: &StateVector) -> Result<()> {
        if data.dim() != self.data_dim() {
            return Err(QError::DimensionMismatch {
                expected: self.data_dim(),
                found: data.dim(),
            });
        }
        Ok(())
    }

    fn check_program(&self, program: &StateVector) -> Result<()> {
        if program.dim() != self.program_dim() {
            return Err(QError::DimensionMismatch {
                expected: self.program_dim(),
                found: program.dim(),
            });
        }
        Ok(())
    }

    /// Data-space block ⟨m|U|n⟩ between program basis states.
    pub fn program_block(&self, m: usize, n: usize) -> CMatrix {
        let (d, p) = (self.data_dim(), self.program_dim());
        let u = self.unitary.mat();
        CMatrix::from_fn(d, d, |a, i| u[(a * p + m, i * p + n)])
    }

    /// U(|data⟩ ⊗ |program⟩).
    pub fn run(&self, data: &StateVector, program: &StateVector) -> Result<StateVector> {
        self.check_data(data)?;
        self.check_program(program)?;
        let input = StateVector::new(
            self.data.concat(&self.program),
            data.tensor(program).into_amps(),
        )?;
        StateVector::new(input.shape().clone(), self.unitary.apply_vec(input.amps())?)
    }
}

/// The four-CNOT cloner circuit read as a processor: qubit 1 is data,
/// qubits 2 and 3 are the program.
pub fn cloner_processor() -> Processor {
    Processor::new(
        cloner_circuit(),
        SubsystemShape::qubits(1),
        SubsystemShape::qubits(2),
    )
    .expect("cloner circuit is unitary")
}

/// Trace-preserving completely positive map in Kraus form, with its Choi
/// state (I ⊗ T)(|Φ⟩⟨Φ|) computed on construction.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    shape: SubsystemShape,
    kraus: Vec<CMatrix>,
    choi: DensityOperator,
}

impl QuantumChannel {
    pub fn new(shape: SubsystemShape, kraus: Vec<CMatrix>) -> Result<Self> {
        let d = shape.total_dim();
        if kraus.is_empty() {
            return Err(QError::InvalidArgument(
                "channel needs a Kraus operator".into(),
            ));
        }
        let mut completeness = CMatrix::zeros(d, d);
        for k in &kraus {
            if k.nrows() != d || k.ncols() != d {
                return Err(QError::DimensionMismatch {
                    expected: d,
                    found: k.nrows(),
                });
            }
            completeness += k.adjoint() * k;
        }
        let deviation = crate::qcore::operator::max_abs(&(completeness - CMatrix::identity(d, d)));
        if deviation > COMPOSED_TOL {
            return Err(QError::InvalidArgument(format!(
                "Kraus operators are not trace preserving (deviation {deviation:e})"
            )));
        }
        let choi = choi_from_kraus(&shape, &kraus);
        Ok(Self { shape, kraus, choi })
    }

    /// Conjugation by a unitary.
    pub fn unitary(u: &Operator) -> Result<Self> {
        if !u.is_unitary() {
            return Err(QError::NotUnitary {
                deviation: crate::qcore::operator::unitary_deviation(u.mat()),
            });
        }
        Self::new(u.shape().clone(), vec![u.mat().clone()])
    }

    /// ρ ↦ Σᵢ pᵢ σᵢ ρ σᵢ over (I, σx, σy, σz).
    pub fn pauli(weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|&w| w < 0.0) {
            return Err(QError::InvalidProbabilities(format!("{weights:?}")));
        }
        let paulis = [
            gates::identity(2),
            gates::pauli_x(),
            gates::pauli_y(),
            gates::pauli_z(),
        ];
        let kraus = paulis
            .iter()
            .zip(weights)
            .filter(|(_, w)| *w > 0.0)
            .map(|(p, w)| p.mat().scale(w.sqrt()))
            .collect();
        Self::new(SubsystemShape::qubits(1), kraus)
    }

    /// Convex combination Σ wᵢ Tᵢ.
    pub fn mixture(parts: &[(f64, QuantumChannel)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| QError::InvalidArgument("empty mixture".into()))?;
        let mut kraus = Vec::new();
        for (w, t) in parts {
            if *w < 0.0 {
                return Err(QError::InvalidProbabilities(format!("weight {w}")));
            }
            if t.dim() != first.1.dim() {
                return Err(QError::DimensionMismatch {
                    expected: first.1.dim(),
                    found: t.dim(),
                });
            }
            kraus.extend(t.kraus.iter().map(|k| k.scale(w.sqrt())));
        }
        Self::new(first.1.shape.clone(), kraus)
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.total_dim()
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn choi(&self) -> &DensityOperator {
        &self.choi
    }

    /// Kraus rank, read off the Choi state.
    pub fn rank(&self) -> usize {
        numerical_rank(self.choi.mat(), COMPOSED_TOL)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim() {
            return Err(QError::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for k in &self.kraus {
            out += k * rho.mat() * k.adjoint();
        }
        Ok(DensityOperator::from_trusted(rho.shape().clone(), out))
    }

    pub fn apply_pure(&self, psi: &StateVector) -> Result<DensityOperator> {
        self.apply(&DensityOperator::from_pure(psi))
    }

    /// The unitary implemented by a rank-1 channel, with an arbitrary global
    /// phase.
    pub fn as_unitary(&self) -> Result<Operator> {
        let rank = self.rank();
        if rank != 1 {
            return Err(QError::NotUnitaryChannel { rank });
        }
        let d = self.dim();
        let (_, vectors) = hermitian_eigen(self.choi.mat());
        let top = vectors.column(d * d - 1);
        let scale = c64((d as f64).sqrt(), 0.0);
        let mat = CMatrix::from_fn(d, d, |a, i| top[i * d + a] * scale);
        Operator::new(self.shape.clone(), mat)
            .ok()
            .filter(|u| u.is_unitary() || unitary_close(u.mat()))
            .ok_or(QError::NotUnitaryChannel { rank })
    }

    /// Largest entry-wise gap between the Choi states.
    pub fn choi_distance(&self, other: &QuantumChannel) -> f64 {
        self.choi.max_abs_diff(&other.choi)
    }
}

fn unitary_close(m: &CMatrix) -> bool {
    crate::qcore::operator::unitary_deviation(m) <= COMPOSED_TOL
}

fn choi_from_kraus(shape: &SubsystemShape, kraus: &[CMatrix]) -> DensityOperator {
    let d = shape.total_dim();
    let mut choi = CMatrix::zeros(d * d, d * d);
    let norm = c64(1.0 / (d as f64).sqrt(), 0.0);
    for k in kraus {
        // (1/√D) Σᵢ |i⟩ ⊗ K|i⟩
        let v = CVector::from_fn(d * d, |idx, _| k[(idx % d, idx / d)] * norm);
        choi += &v * v.adjoint();
    }
    DensityOperator::from_trusted(shape.concat(shape), choi)
}

/// Channel on the data from tracing out the program output:
/// K_m = (I ⊗ ⟨m|) U (I ⊗ |program⟩) over the computational basis {|m⟩}.
pub fn deterministic_map(p: &Processor, program: &StateVector) -> Result<QuantumChannel> {
    p.check_program(program)?;
    let (d, pd) = (p.data_dim(), p.program_dim());
    let u = p.unitary.mat();
    let prog = program.amps();
    let support: Vec<usize> = (0..pd).filter(|&n| prog[n].norm() > 0.0).collect();
    let mut kraus = Vec::with_capacity(pd);
    for m in 0..pd {
        let k = CMatrix::from_fn(d, d, |a, i| {
            support
                .iter()
                .map(|&n| u[(a * pd + m, i * pd + n)] * prog[n])
                .sum::<Complex64>()
        });
        if k.norm() > 1e-14 {
            kraus.push(k);
        }
    }
    QuantumChannel::new(p.data.clone(), kraus)
}

/// c₀|Ψ₊⟩ + c₁|Φ₊⟩ + c₂|Φ₋⟩ + c₃|Ψ₋⟩. On the cloner processor this program
/// yields ρ ↦ Σ|cᵢ|² σᵢ ρ σᵢ with σ = (I, σx, σy, σz).
pub fn pauli_channel_program(c: [Complex64; 4]) -> Result<StateVector> {
    let bells = [Bell::PsiPlus, Bell::PhiPlus, Bell::PhiMinus, Bell::PsiMinus];
    let mut amps = CVector::zeros(4);
    for (b, ci) in bells.iter().zip(c) {
        amps += b.state().amps() * ci;
    }
    StateVector::new(SubsystemShape::qubits(2), amps)
}

/// The Pauli weights |cᵢ|² realized by [`pauli_channel_program`].
pub fn pauli_weights(c: [Complex64; 4]) -> [f64; 4] {
    c.map(|z| z.norm_sqr())
}

/// Accepted branch of a probabilistic run.
#[derive(Debug, Clone)]
pub struct Conditional {
    pub prob: f64,
    /// Data output when the projected joint state is a product; `None` when
    /// the accepted data remain entangled with the program register.
    pub output: Option<StateVector>,
}

/// Runs the processor and projects the program output onto
/// `accept_projector`.
pub fn probabilistic_execute(
    p: &Processor,
    program: &StateVector,
    accept_projector: &Operator,
    data_in: &StateVector,
) -> Result<Conditional> {
    if accept_projector.dim() != p.program_dim() {
        return Err(QError::DimensionMismatch {
            expected: p.program_dim(),
            found: accept_projector.dim(),
        });
    }
    let a = accept_projector.mat();
    let idem = crate::qcore::operator::max_abs(&(a * a - a));
    if idem > STRUCT_TOL || accept_projector.hermitian_deviation() > STRUCT_TOL {
        return Err(QError::InvalidArgument(
            "accept operator is not an orthogonal projector".into(),
        ));
    }
    let joint = p.run(data_in, program)?;
    let (d, pd) = (p.data_dim(), p.program_dim());
    // rows: data index, columns: program index
    let m = CMatrix::from_fn(d, pd, |i, j| joint.amps()[i * pd + j]);
    let projected = &m * a.transpose();
    let prob = projected.norm_squared();
    if prob <= 1e-12 {
        return Err(QError::ImpossibleOutcome { prob });
    }
    Ok(Conditional {
        prob,
        output: product_data_factor(&projected, prob)?,
    })
}

/// If `m` (data × program) is a rank-1 matrix d·pᵀ, returns d normalized,
/// with its phase fixed by the program column of largest weight.
fn product_data_factor(m: &CMatrix, prob: f64) -> Result<Option<StateVector>> {
    let (col, norm) = (0..m.ncols())
        .map(|j| (j, m.column(j).norm()))
        .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
    let dvec: CVector = m.column(col).unscale(norm);
    let residual = m - &dvec * (dvec.adjoint() * m);
    if residual.norm() > 1e-9 * prob.sqrt() {
        return Ok(None);
    }
    let shape = SubsystemShape::single(m.nrows())?;
    StateVector::new(shape, dvec).map(Some)
}

/// Projector |a⟩⟨a| onto a program-space vector.
pub fn rank_one_projector(shape: SubsystemShape, a: &StateVector) -> Result<Operator> {
    Operator::new(shape, DensityOperator::from_pure(a).mat().clone())
}

/// U₀: |00⟩ → −|10⟩, |01⟩ → |00⟩, |10⟩ → −|11⟩, |11⟩ → |01⟩.
pub fn u0() -> Operator {
    #[rustfmt::skip]
    let rows = [
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, -1.0, 0.0,
    ];
    Operator::from_real_rows(SubsystemShape::qubits(2), &rows).expect("4x4")
}

/// (1/√2) U₀ (|φ⟩|φ⊥⟩ + |φ⊥⟩|φ⟩), the program for A = I − 2|φ⟩⟨φ| on the
/// cloner processor.
pub fn a_operator_program(phi: &StateVector) -> Result<StateVector> {
    let perp = phi.orthogonal_qubit()?;
    let sym = (phi.tensor(&perp).into_amps() + perp.tensor(phi).into_amps())
        .scale(std::f64::consts::FRAC_1_SQRT_2);
    StateVector::new(SubsystemShape::qubits(2), u0().apply_vec(&sym)?)
}

/// Accepting program outcome (|Φ₊⟩ + |Φ₋⟩ + |Ψ₋⟩)/√3.
pub fn a_operator_accept_state() -> StateVector {
    let amps = Bell::PhiPlus.state().into_amps()
        + Bell::PhiMinus.state().into_amps()
        + Bell::PsiMinus.state().into_amps();
    StateVector::normalized(SubsystemShape::qubits(2), amps).expect("nonzero")
}

pub fn a_operator_accept() -> Operator {
    rank_one_projector(SubsystemShape::qubits(2), &a_operator_accept_state()).expect("4x4")
}

/// Dense reference I − 2|φ⟩⟨φ|.
pub fn a_operator(phi: &StateVector) -> Operator {
    let d = phi.dim();
    let proj = DensityOperator::from_pure(phi).mat().clone();
    Operator::new(
        phi.shape().clone(),
        CMatrix::identity(d, d) - proj.scale(2.0),
    )
    .expect("square")
}

/// Outcome of checking one program pair against the no-go theorem: programs
/// that deterministically implement distinct unitaries must be orthogonal.
#[derive(Debug, Clone)]
pub struct NoGoCheck {
    pub unitaries: (Operator, Operator),
    pub distinct: bool,
    /// |⟨prog1|prog2⟩|.
    pub overlap: f64,
}

impl NoGoCheck {
    /// Distinct unitaries and orthogonal programs.
    pub fn holds(&self) -> bool {
        self.distinct && self.overlap < COMPOSED_TOL
    }

    /// The theorem is respected: either the unitaries coincide up to phase or
    /// the programs are orthogonal.
    pub fn consistent(&self) -> bool {
        !self.distinct || self.overlap < COMPOSED_TOL
    }
}

pub fn nogo_orthogonality_check(
    p: &Processor,
    prog1: &StateVector,
    prog2: &StateVector,
) -> Result<NoGoCheck> {
    let u1 = deterministic_map(p, prog1)?.as_unitary()?;
    let u2 = deterministic_map(p, prog2)?.as_unitary()?;
    let distinct = !u1.equals_up_to_phase(&u2, 1e-8);
    let overlap = prog1.overlap(prog2)?;
    Ok(NoGoCheck {
        unitaries: (u1, u2),
        distinct,
        overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_random_qubit, partial_trace, RngStream};

    fn bell_unitary(b: Bell) -> Operator {
        deterministic_map(&cloner_processor(), &b.state())
            .unwrap()
            .as_unitary()
            .unwrap()
    }

    #[test]
    fn bell_programs_give_paulis() {
        assert!(bell_unitary(Bell::PsiPlus).equals_up_to_phase(&gates::identity(2), 1e-9));
        assert!(bell_unitary(Bell::PsiMinus).equals_up_to_phase(&gates::pauli_z(), 1e-9));
        assert!(bell_unitary(Bell::PhiPlus).equals_up_to_phase(&gates::pauli_x(), 1e-9));
        assert!(bell_unitary(Bell::PhiMinus).equals_up_to_phase(&gates::pauli_y(), 1e-9));
    }

    #[test]
    fn kraus_map_matches_partial_trace() {
        let p = cloner_processor();
        let mut rng = RngStream::new(5);
        let prog = crate::qcore::haar_random_state(SubsystemShape::qubits(2), &mut rng);
        let t = deterministic_map(&p, &prog).unwrap();
        for _ in 0..10 {
            let psi = haar_random_qubit(&mut rng);
            let joint = p.run(&psi, &prog).unwrap();
            let reduced = partial_trace(&DensityOperator::from_pure(&joint), &[0]).unwrap();
            let via_kraus = t.apply_pure(&psi).unwrap();
            assert!(reduced.max_abs_diff(&via_kraus) < 1e-10);
        }
    }

    #[test]
    fn depolarizing_program() {
        let h = c64(0.5, 0.0);
        let prog = pauli_channel_program([h; 4]).unwrap();
        let t = deterministic_map(&cloner_processor(), &prog).unwrap();
        let quarter = CMatrix::identity(4, 4).scale(0.25);
        assert!((t.choi().mat() - quarter).norm() < 1e-12);
        assert_eq!(t.rank(), 4);
    }

    #[test]
    fn pauli_program_rejects_unnormalized() {
        assert!(pauli_channel_program([c64(1.0, 0.0); 4]).is_err());
    }

    #[test]
    fn choi_of_identity_is_bell_projector() {
        let t = QuantumChannel::unitary(&gates::identity(2)).unwrap();
        let phi = DensityOperator::from_pure(&Bell::PsiPlus.state());
        assert!(t.choi().max_abs_diff(&phi) < 1e-15);
    }

    #[test]
    fn u0_matches_definition() {
        let u = u0();
        assert!(u.is_unitary());
        let img = |bits: &[u8]| u.apply_vec(StateVector::from_bits(bits).amps()).unwrap();
        assert!((img(&[0, 0]) + StateVector::from_bits(&[1, 0]).amps()).norm() < 1e-15);
        assert!((img(&[0, 1]) - StateVector::from_bits(&[0, 0]).amps()).norm() < 1e-15);
        assert!((img(&[1, 0]) + StateVector::from_bits(&[1, 1]).amps()).norm() < 1e-15);
        assert!((img(&[1, 1]) - StateVector::from_bits(&[0, 1]).amps()).norm() < 1e-15);
    }

    #[test]
    fn a_operator_probabilistic_run() {
        let p = cloner_processor();
        let mut rng = RngStream::new(11);
        for _ in 0..20 {
            let phi = haar_random_qubit(&mut rng);
            let psi = haar_random_qubit(&mut rng);
            let prog = a_operator_program(&phi).unwrap();
            let r = probabilistic_execute(&p, &prog, &a_operator_accept(), &psi).unwrap();
            assert!((r.prob - 1.0 / 3.0).abs() < 1e-12);
            let target = a_operator(&phi).apply_vec(psi.amps()).unwrap();
            let target = StateVector::new(SubsystemShape::qubits(1), target).unwrap();
            let out = r.output.unwrap();
            assert!((1.0 - out.fidelity(&target).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn a_operator_at_one_is_sigma_z() {
        assert!(a_operator(&StateVector::one()).equals_up_to_phase(&gates::pauli_z(), 1e-12));
    }

    #[test]
    fn identity_acceptance_is_certain() {
        let p = cloner_processor();
        let id = Operator::identity(SubsystemShape::qubits(2));
        let r =
            probabilistic_execute(&p, &Bell::PsiPlus.state(), &id, &StateVector::plus()).unwrap();
        assert!((r.prob - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nogo_on_bell_programs() {
        let p = cloner_processor();
        let c =
            nogo_orthogonality_check(&p, &Bell::PsiPlus.state(), &Bell::PhiPlus.state()).unwrap();
        assert!(c.holds() && c.consistent());
        let same =
            nogo_orthogonality_check(&p, &Bell::PsiPlus.state(), &Bell::PsiPlus.state()).unwrap();
        assert!(!same.distinct && same.consistent());
    }

    #[test]
    fn nogo_rejects_non_unitary_program() {
        let h = c64(0.5, 0.0);
        let prog = pauli_channel_program([h; 4]).unwrap();
        let r = nogo_orthogonality_check(&cloner_processor(), &prog, &Bell::PsiPlus.state());
        assert!(matches!(r, Err(QError::NotUnitaryChannel { rank: 4 })));
    }

    #[test]
    fn processor_rejects_bad_shapes() {
        let r = Processor::new(
            cloner_circuit(),
            SubsystemShape::qubits(1),
            SubsystemShape::qubits(1),
        );
        assert!(r.is_err());
        let bad = StateVector::zero();
        assert!(deterministic_map(&cloner_processor(), &bad).is_err());
    }
}
