//! Process fidelity through Choi states, controlled-U processors, and the
//! shift-group processor that approximates the one-parameter family
//! U(θ) = i(cos θ σx + sin θ σy) with an N-dimensional program.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{QError, Result};
use crate::processor::{deterministic_map, Processor, QuantumChannel};
use crate::qcore::spectral::{hermitian_eigen, hermitian_eigenvalues, psd_sqrt};
use crate::qcore::{
    c64, gates, herm_exp, CMatrix, CVector, DensityOperator, Operator, StateVector, SubsystemShape,
    Tensor,
};

/// Choi state (I ⊗ T)(|Φ⟩⟨Φ|) with |Φ⟩ = (1/√D) Σ|j⟩|j⟩.
pub fn jamiolkowski(t: &QuantumChannel) -> DensityOperator {
    t.choi().clone()
}

/// Dominant eigenvector when ρ is pure to within 1e-10 in purity.
fn pure_vector(rho: &DensityOperator) -> Option<CVector> {
    if rho.purity() < 1.0 - 1e-10 {
        return None;
    }
    let (_, vectors) = hermitian_eigen(rho.mat());
    Some(vectors.column(rho.dim() - 1).into_owned())
}

/// Uhlmann fidelity [Tr √(√ρ₁ ρ₂ √ρ₁)]² of two density matrices.
///
/// When either state is pure this reduces to ⟨v|ρ|v⟩, which avoids the
/// square roots of round-off eigenvalues.
pub fn state_fidelity(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(QError::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    for (pure, other) in [(rho1, rho2), (rho2, rho1)] {
        if let Some(v) = pure_vector(pure) {
            return Ok(v.dotc(&(other.mat() * &v)).re.clamp(0.0, 1.0));
        }
    }
    let s = psd_sqrt(rho1.mat())?;
    let inner = &s * rho2.mat() * &s;
    let root_trace: f64 = hermitian_eigenvalues(&inner)
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// Fidelity between the Choi states of two channels.
pub fn process_fidelity(t1: &QuantumChannel, t2: &QuantumChannel) -> Result<f64> {
    if t1.dim() != t2.dim() {
        return Err(QError::DimensionMismatch {
            expected: t1.dim(),
            found: t2.dim(),
        });
    }
    state_fidelity(t1.choi(), t2.choi())
}

/// |Tr(U†V)|² / D², the process fidelity of two unitary channels.
pub fn unitary_process_fidelity(u: &Operator, v: &Operator) -> f64 {
    let d = u.dim() as f64;
    u.mat().dotc(v.mat()).norm_sqr() / (d * d)
}

/// Block-diagonal Σⱼ Uⱼ ⊗ |j⟩⟨j| on data ⊗ program.
pub fn controlled_u_processor(us: &[Operator]) -> Result<Processor> {
    let first = us
        .first()
        .ok_or_else(|| QError::InvalidArgument("need at least one unitary".into()))?;
    let (d, n) = (first.dim(), us.len());
    let mut mat = CMatrix::zeros(d * n, d * n);
    for (j, u) in us.iter().enumerate() {
        if u.dim() != d {
            return Err(QError::DimensionMismatch {
                expected: d,
                found: u.dim(),
            });
        }
        if !u.is_unitary() {
            return Err(QError::NotUnitary {
                deviation: crate::qcore::operator::unitary_deviation(u.mat()),
            });
        }
        for a in 0..d {
            for i in 0..d {
                mat[(a * n + j, i * n + j)] = u.mat()[(a, i)];
            }
        }
    }
    let data = first.shape().clone();
    let program = SubsystemShape::single(n)?;
    Processor::new(Operator::new(data.concat(&program), mat)?, data, program)
}

/// Basis program j maximizing |Tr(U†Uⱼ)|; ties go to the lowest index.
pub fn best_basis_program(u: &Operator, proc: &Processor) -> Result<usize> {
    if u.dim() != proc.data_dim() {
        return Err(QError::DimensionMismatch {
            expected: proc.data_dim(),
            found: u.dim(),
        });
    }
    let mut best = (0, f64::NEG_INFINITY);
    for j in 0..proc.program_dim() {
        let score = u.mat().dotc(&proc.program_block(j, j)).norm();
        if score > best.1 + 1e-12 {
            best = (j, score);
        }
    }
    Ok(best.0)
}

/// U(θ) = i(cos θ σx + sin θ σy) = exp[i(π/2)(cos θ σx + sin θ σy)].
pub fn group_unitary(theta: f64) -> Operator {
    let m = gates::pauli_x().mat().scale(theta.cos()) + gates::pauli_y().mat().scale(theta.sin());
    Operator::new(SubsystemShape::qubits(1), m * c64(0.0, 1.0)).expect("2x2")
}

/// θₘ = 2πm/N.
pub fn grid_angle(m: usize, n: usize) -> f64 {
    TAU * m as f64 / n as f64
}

/// Index of the grid angle closest to θ (circularly).
pub fn nearest_grid_index(theta: f64, n: usize) -> usize {
    let t = theta.rem_euclid(TAU);
    ((t * n as f64 / TAU).round() as usize) % n
}

/// (1/√N) Σⱼ e^{−ijθ}|j⟩. θ is read modulo 2π.
pub fn theta_program(theta: f64, n: usize) -> Result<StateVector> {
    let shape = SubsystemShape::single(n)?;
    let t = theta.rem_euclid(TAU);
    let norm = 1.0 / (n as f64).sqrt();
    let amps = CVector::from_fn(n, |j, _| c64(0.0, -(j as f64) * t).exp() * norm);
    StateVector::normalized(shape, amps)
}

/// Which program to feed the shift-group processor for a target angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProgramStrategy {
    /// The grid program |θₘ⟩ with θₘ closest to θ.
    NearestGrid,
    /// The program |θ⟩ itself.
    DirectTheta,
}

/// Processor G = exp[i(π/2)(σ⁺ ⊗ E₋ + σ⁻ ⊗ E₊)] on qubit ⊗ C^N, where
/// E₊|j⟩ = |j+1 mod N⟩ and E₋ = E₊†. On a grid program it acts as
/// U(θₘ) ⊗ I exactly.
#[derive(Debug, Clone)]
pub struct ShiftGroupProcessor {
    n: usize,
    g: Operator,
    eplus: Operator,
    eminus: Operator,
    processor: Processor,
}

pub fn shift_group_processor(n: usize) -> Result<ShiftGroupProcessor> {
    if n < 2 {
        return Err(QError::InvalidArgument(format!(
            "program dimension must be at least 2, got {n}"
        )));
    }
    let program = SubsystemShape::single(n)?;
    let shift: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
    let eplus = Operator::permutation(program.clone(), &shift)?;
    let eminus = eplus.adjoint();
    let h = gates::sigma_plus().tensor(&eminus).mat() + gates::sigma_minus().tensor(&eplus).mat();
    let data = SubsystemShape::qubits(1);
    let h = Operator::new(data.concat(&program), h)?;
    let g = herm_exp(&h, c64(0.0, FRAC_PI_2))?;
    let processor = Processor::new(g.clone(), data, program)?;
    Ok(ShiftGroupProcessor {
        n,
        g,
        eplus,
        eminus,
        processor,
    })
}

impl ShiftGroupProcessor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> &Operator {
        &self.g
    }

    pub fn eplus(&self) -> &Operator {
        &self.eplus
    }

    pub fn eminus(&self) -> &Operator {
        &self.eminus
    }

    pub fn processor(&self) -> &Processor {
        &self.processor
    }

    pub fn program_for(&self, theta: f64, strategy: ProgramStrategy) -> Result<StateVector> {
        match strategy {
            ProgramStrategy::NearestGrid => theta_program(
                grid_angle(nearest_grid_index(theta, self.n), self.n),
                self.n,
            ),
            ProgramStrategy::DirectTheta => theta_program(theta, self.n),
        }
    }

    pub fn channel(&self, program: &StateVector) -> Result<QuantumChannel> {
        deterministic_map(&self.processor, program)
    }

    /// Process fidelity between U(θ) and the channel realized with the
    /// chosen program.
    pub fn fidelity(&self, theta: f64, strategy: ProgramStrategy) -> Result<f64> {
        let realized = self.channel(&self.program_for(theta, strategy)?)?;
        let target = QuantumChannel::unitary(&group_unitary(theta))?;
        process_fidelity(&realized, &target)
    }

    /// Mean fidelity over `samples` equally spaced angles (offset by half a
    /// step).
    pub fn average_fidelity(&self, strategy: ProgramStrategy, samples: usize) -> Result<f64> {
        use rayon::prelude::*;
        if samples == 0 {
            return Err(QError::InvalidArgument("need at least one sample".into()));
        }
        let values: Result<Vec<f64>> = (0..samples)
            .into_par_iter()
            .map(|k| self.fidelity(TAU * (k as f64 + 0.5) / samples as f64, strategy))
            .collect();
        Ok(values?.iter().sum::<f64>() / samples as f64)
    }
}

pub fn approx_group_fidelity(theta: f64, n: usize, strategy: ProgramStrategy) -> Result<f64> {
    shift_group_processor(n)?.fidelity(theta, strategy)
}

/// cos²(π/N): the nearest-grid fidelity at the worst angle, midway between
/// grid points. Every other angle does strictly better.
pub fn nearest_grid_bound(n: usize) -> f64 {
    (PI / n as f64).cos().powi(2)
}

/// 1 − (2/N) sin²(Nθ/2), the direct-θ fidelity. Its minimum over θ is
/// 1 − 2/N and its mean is 1 − 1/N.
pub fn direct_theta_fidelity(theta: f64, n: usize) -> f64 {
    let nf = n as f64;
    1.0 - (2.0 / nf) * (nf * theta / 2.0).sin().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::RngStream;

    #[test]
    fn identity_channel_fidelity() {
        let id = QuantumChannel::unitary(&gates::identity(2)).unwrap();
        assert!((process_fidelity(&id, &id).unwrap() - 1.0).abs() < 1e-12);
        let x = QuantumChannel::unitary(&gates::pauli_x()).unwrap();
        assert!(process_fidelity(&id, &x).unwrap() < 1e-12);
    }

    #[test]
    fn unitary_fidelity_reduction() {
        let a = group_unitary(0.3);
        let b = group_unitary(1.1);
        let ta = QuantumChannel::unitary(&a).unwrap();
        let tb = QuantumChannel::unitary(&b).unwrap();
        let f = process_fidelity(&ta, &tb).unwrap();
        assert!((f - unitary_process_fidelity(&a, &b)).abs() < 1e-9);
        assert!((f - (0.8f64).cos().powi(2)).abs() < 1e-9);
    }

    #[test]
    fn controlled_x_is_cnot_with_program_control() {
        let p = controlled_u_processor(&[gates::identity(2), gates::pauli_x()]).unwrap();
        // data ⊗ program ordering: program (second qubit) controls data
        let swap = Operator::permutation(SubsystemShape::qubits(2), &[0, 2, 1, 3]).unwrap();
        let cnot_rev = swap
            .compose(&gates::cnot())
            .unwrap()
            .compose(&swap)
            .unwrap();
        assert!((p.unitary().mat() - cnot_rev.mat()).norm() < 1e-15);
    }

    #[test]
    fn superposition_program_dephases() {
        let p = controlled_u_processor(&[gates::identity(2), gates::pauli_z()]).unwrap();
        let t = deterministic_map(&p, &StateVector::plus()).unwrap();
        let id = QuantumChannel::unitary(&gates::identity(2)).unwrap();
        let f = process_fidelity(&t, &id).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
        let basis = deterministic_map(&p, &StateVector::zero()).unwrap();
        assert!(f <= process_fidelity(&basis, &id).unwrap());
    }

    #[test]
    fn best_basis_agrees_with_brute_force() {
        let mut rng = RngStream::new(3);
        let us: Vec<Operator> = (0..6).map(|m| group_unitary(grid_angle(m, 6))).collect();
        let p = controlled_u_processor(&us).unwrap();
        for _ in 0..20 {
            let theta = rng.uniform() * TAU;
            let target = QuantumChannel::unitary(&group_unitary(theta)).unwrap();
            let best = best_basis_program(&group_unitary(theta), &p).unwrap();
            let fids: Vec<f64> = (0..6)
                .map(|j| {
                    let prog = StateVector::basis(SubsystemShape::single(6).unwrap(), j).unwrap();
                    process_fidelity(&deterministic_map(&p, &prog).unwrap(), &target).unwrap()
                })
                .collect();
            let max = fids.iter().cloned().fold(0.0, f64::max);
            assert!((fids[best] - max).abs() < 1e-9);
        }
    }

    #[test]
    fn shift_processor_exact_on_grid() {
        let s = shift_group_processor(8).unwrap();
        assert!(s.g().is_unitary());
        for m in 0..8 {
            let theta = grid_angle(m, 8);
            let prog = theta_program(theta, 8).unwrap();
            let psi = StateVector::normalized(
                SubsystemShape::qubits(1),
                CVector::from_vec(vec![c64(0.6, 0.3), c64(0.1, -0.74)]),
            )
            .unwrap();
            let out = s.processor().run(&psi, &prog).unwrap();
            let expected = StateVector::new(
                SubsystemShape::qubits(1),
                group_unitary(theta).apply_vec(psi.amps()).unwrap(),
            )
            .unwrap()
            .tensor(&prog);
            assert!((out.amps() - expected.amps()).norm() < 1e-9);
        }
    }

    #[test]
    fn shift_operators() {
        let s = shift_group_processor(5).unwrap();
        let prod = s.eplus().compose(s.eminus()).unwrap();
        assert!((prod.mat() - CMatrix::identity(5, 5)).norm() < 1e-15);
        assert!(shift_group_processor(1).is_err());
    }

    #[test]
    fn grid_programs_orthonormal() {
        for m in 0..6 {
            for k in 0..6 {
                let a = theta_program(grid_angle(m, 6), 6).unwrap();
                let b = theta_program(grid_angle(k, 6), 6).unwrap();
                let ip = a.inner(&b).unwrap().norm();
                assert!((ip - if m == k { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn direct_theta_closed_form() {
        let s = shift_group_processor(8).unwrap();
        for theta in [0.1, 0.4, 1.3, 2.9, 5.0] {
            let f = s.fidelity(theta, ProgramStrategy::DirectTheta).unwrap();
            assert!((f - direct_theta_fidelity(theta, 8)).abs() < 1e-9);
        }
    }

    #[test]
    fn midpoint_equals_bound() {
        let n = 16;
        let mid = PI / n as f64;
        let f = approx_group_fidelity(mid, n, ProgramStrategy::NearestGrid).unwrap();
        assert!((f - nearest_grid_bound(n)).abs() < 1e-9);
        let f = approx_group_fidelity(mid, n, ProgramStrategy::DirectTheta).unwrap();
        assert!((f - (1.0 - 2.0 / n as f64)).abs() < 1e-9);
    }

    #[test]
    fn theta_wraps() {
        let a = theta_program(0.5, 4).unwrap();
        let b = theta_program(0.5 + TAU, 4).unwrap();
        assert!((a.amps() - b.amps()).norm() < 1e-12);
    }
}
