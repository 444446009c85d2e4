use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qmachine_core::cloner::{
    anticlone_fidelity, clone, closed_form_clones, ClonerProgram, TwoStateSet,
};
use qmachine_core::discrimination::{helstrom_error, helstrom_povm, usd_povm, usd_success};
use qmachine_core::groverperm::{grover_success, iteration_count, GroupTable};
use qmachine_core::phasegate::{phase_unitary, xi_program};
use qmachine_core::processor::{
    a_operator_accept, a_operator_program, cloner_processor, deterministic_map,
    pauli_channel_program, pauli_weights, probabilistic_execute, QuantumChannel,
};
use qmachine_core::procfid::{
    direct_theta_fidelity, nearest_grid_bound, shift_group_processor, ProgramStrategy,
};
use qmachine_core::progdisc::{analytic_success, discriminator_povm, instance_success};
use qmachine_core::qcore::{c64, haar_random_qubit, haar_random_state, RngStream, SubsystemShape};
use qmachine_core::StateVector;

fn qubit(seed: u64) -> StateVector {
    haar_random_qubit(&mut RngStream::new(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_clones_are_universal(seed in any::<u64>()) {
        let psi = qubit(seed);
        let out = clone(&psi, &ClonerProgram::symmetric()).unwrap();
        assert_abs_diff_eq!(out.rho1.fidelity_to_pure(&psi).unwrap(), 5.0 / 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(out.rho2.fidelity_to_pure(&psi).unwrap(), 5.0 / 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(anticlone_fidelity(&psi).unwrap(), 2.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn clone_marginals_match_closed_form(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let prog = ClonerProgram::random(&mut rng);
        let psi = haar_random_qubit(&mut rng);
        let out = clone(&psi, &prog).unwrap();
        let (r1, r2) = closed_form_clones(&psi, &prog).unwrap();
        prop_assert!(out.rho1.max_abs_diff(&r1) < 1e-10);
        prop_assert!(out.rho2.max_abs_diff(&r2) < 1e-10);
        prop_assert!((out.rho1.trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn discrimination_bounds(s in 0.0f64..1.0) {
        let set = TwoStateSet::with_overlap(s).unwrap();
        let h = helstrom_povm(&set).unwrap();
        let u = usd_povm(&set).unwrap();
        assert_abs_diff_eq!(h.error_probability(&set).unwrap(), helstrom_error(s), epsilon = 1e-10);
        assert_abs_diff_eq!(u.success_probability(&set).unwrap(), usd_success(s), epsilon = 1e-10);
        // unambiguous success never beats the minimum-error success
        prop_assert!(usd_success(s) <= 1.0 - helstrom_error(s) + 1e-12);
    }

    #[test]
    fn pauli_programs_give_pauli_channels(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let c = haar_random_state(SubsystemShape::qubits(2), &mut rng);
        let coeffs = [c.amps()[0], c.amps()[1], c.amps()[2], c.amps()[3]];
        let got = deterministic_map(&cloner_processor(), &pauli_channel_program(coeffs).unwrap()).unwrap();
        let want = QuantumChannel::pauli(pauli_weights(coeffs)).unwrap();
        prop_assert!(got.choi_distance(&want) < 1e-10);
    }

    #[test]
    fn a_operator_acceptance_is_one_third(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let phi = haar_random_qubit(&mut rng);
        let psi = haar_random_qubit(&mut rng);
        let prog = a_operator_program(&phi).unwrap();
        let r = probabilistic_execute(&cloner_processor(), &prog, &a_operator_accept(), &psi).unwrap();
        assert_abs_diff_eq!(r.prob, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn xi_programs_are_normalized(alpha in -10.0f64..10.0) {
        assert_abs_diff_eq!(xi_program(alpha).norm(), 1.0, epsilon = 1e-12);
        prop_assert!(phase_unitary(alpha).is_unitary());
    }

    #[test]
    fn direct_theta_fidelity_closed_form(theta in 0.0f64..std::f64::consts::TAU, n in 2usize..12) {
        let s = shift_group_processor(n).unwrap();
        let f = s.fidelity(theta, ProgramStrategy::DirectTheta).unwrap();
        assert_abs_diff_eq!(f, direct_theta_fidelity(theta, n), epsilon = 1e-9);
        prop_assert!(f >= 1.0 - 2.0 / n as f64 - 1e-9);
        let g = s.fidelity(theta, ProgramStrategy::NearestGrid).unwrap();
        prop_assert!(g >= nearest_grid_bound(n) - 1e-9);
    }

    #[test]
    fn progdisc_pair_success(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let a = haar_random_qubit(&mut rng);
        let b = haar_random_qubit(&mut rng);
        let got = instance_success(&discriminator_povm(), &a, &b).unwrap();
        assert_abs_diff_eq!(got, analytic_success(a.overlap(&b).unwrap()), epsilon = 1e-10);
    }

    #[test]
    fn grover_iterations_near_optimal(shift in 2u32..12) {
        let m = 1usize << shift;
        let k = iteration_count(m, 1);
        let p = grover_success(m, 1, k);
        // within 1/M of certainty, and one more iteration does not help
        prop_assert!(p >= 1.0 - 1.0 / m as f64 - 1e-12);
        prop_assert!(p >= grover_success(m, 1, k + 1) - 1e-12);
    }

    #[test]
    fn cyclic_groups_are_abelian(n in 1usize..12) {
        let g = GroupTable::cyclic(n).unwrap();
        prop_assert!(g.is_abelian());
        for a in 0..n {
            prop_assert_eq!(g.mul(a, g.inverse(a)), g.identity());
        }
    }
}

#[test]
fn depolarizing_program() {
    let half = c64(0.5, 0.0);
    let ch = deterministic_map(
        &cloner_processor(),
        &pauli_channel_program([half; 4]).unwrap(),
    )
    .unwrap();
    let psi = qubit(3);
    let out = ch.apply_pure(&psi).unwrap();
    assert_abs_diff_eq!(out.fidelity_to_pure(&psi).unwrap(), 0.5, epsilon = 1e-12);
}
