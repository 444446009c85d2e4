//! Standard gates and states.

use super::{c64, CMatrix, Operator, StateVector, SubsystemShape};

fn qubit_op(entries: [num_complex::Complex64; 4]) -> Operator {
    Operator::new(
        SubsystemShape::qubits(1),
        CMatrix::from_row_slice(2, 2, &entries),
    )
    .expect("2x2")
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(SubsystemShape::single(dim).expect("dim > 0"))
}

pub fn pauli_x() -> Operator {
    let (o, l) = (c64(0.0, 0.0), c64(1.0, 0.0));
    qubit_op([o, l, l, o])
}

pub fn pauli_y() -> Operator {
    let o = c64(0.0, 0.0);
    qubit_op([o, c64(0.0, -1.0), c64(0.0, 1.0), o])
}

pub fn pauli_z() -> Operator {
    let (o, l) = (c64(0.0, 0.0), c64(1.0, 0.0));
    qubit_op([l, o, o, -l])
}

/// σ⁺ = (σx + iσy)/2 = |0⟩⟨1|.
pub fn sigma_plus() -> Operator {
    let (o, l) = (c64(0.0, 0.0), c64(1.0, 0.0));
    qubit_op([o, l, o, o])
}

/// σ⁻ = (σx − iσy)/2 = |1⟩⟨0|.
pub fn sigma_minus() -> Operator {
    let (o, l) = (c64(0.0, 0.0), c64(1.0, 0.0));
    qubit_op([o, o, l, o])
}

pub fn hadamard() -> Operator {
    let h = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    qubit_op([h, h, h, -h])
}

/// Two-qubit CNOT, control on the first qubit.
pub fn cnot() -> Operator {
    Operator::permutation(SubsystemShape::qubits(2), &[0, 1, 3, 2]).expect("permutation")
}

/// Three-qubit Toffoli, controls on the first two qubits.
pub fn toffoli() -> Operator {
    Operator::permutation(SubsystemShape::qubits(3), &[0, 1, 2, 3, 4, 5, 7, 6])
        .expect("permutation")
}

/// The four two-qubit Bell states, in the labelling used for the cloner
/// programs: Ψ± = (|00⟩ ± |11⟩)/√2 and Φ± = (|01⟩ ± |10⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PsiPlus, Bell::PsiMinus, Bell::PhiPlus, Bell::PhiMinus];

    pub fn state(self) -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = match self {
            Bell::PsiPlus => [h, 0.0, 0.0, h],
            Bell::PsiMinus => [h, 0.0, 0.0, -h],
            Bell::PhiPlus => [0.0, h, h, 0.0],
            Bell::PhiMinus => [0.0, h, -h, 0.0],
        };
        let amps: Vec<_> = amps.iter().map(|&x| c64(x, 0.0)).collect();
        StateVector::from_slice(SubsystemShape::qubits(2), &amps).expect("normalized")
    }
}

/// Singlet (|01⟩ − |10⟩)/√2.
pub fn singlet() -> StateVector {
    Bell::PhiMinus.state()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_pm_from_paulis() {
        let sp = (pauli_x().mat() + pauli_y().mat() * c64(0.0, 1.0)) * c64(0.5, 0.0);
        assert!((sp - sigma_plus().mat()).norm() < 1e-15);
        let sm = (pauli_x().mat() - pauli_y().mat() * c64(0.0, 1.0)) * c64(0.5, 0.0);
        assert!((sm - sigma_minus().mat()).norm() < 1e-15);
    }

    #[test]
    fn bell_states_orthonormal() {
        for (i, a) in Bell::ALL.iter().enumerate() {
            for (j, b) in Bell::ALL.iter().enumerate() {
                let ip = a.state().inner(&b.state()).unwrap().norm();
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }
}
