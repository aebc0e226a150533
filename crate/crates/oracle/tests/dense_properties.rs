use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fridge_core::Temperature;
use fridge_oracle::dense::{hamiltonian_diagonal, DenseState, UnitaryOp};
use fridge_oracle::haar::haar_unitary;
use fridge_oracle::apply_and_measure;

fn ground() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 3)
}

proptest! {
    #[test]
    fn haar_application_preserves_trace_and_positivity(g in ground(), seed in any::<u64>()) {
        let s = DenseState::product(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = UnitaryOp::general(haar_unitary(&mut rng, 8)).unwrap();
        let out = s.apply(&u).unwrap();
        prop_assert!(out.check_invariants().is_ok());
    }

    #[test]
    fn reset_keeps_untouched_marginal(g in ground(), fresh in 0.0f64..=1.0, seed in any::<u64>()) {
        let s = DenseState::product(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = UnitaryOp::general(haar_unitary(&mut rng, 8)).unwrap();
        let mixed = s.apply(&u).unwrap();
        let reset = mixed.reset(&[1, 2], &[fresh, 0.5]).unwrap();
        prop_assert!((reset.target_population() - mixed.target_population()).abs() < 1e-13);
        prop_assert!((reset.ground_population(1) - fresh).abs() < 1e-13);
        prop_assert!(reset.check_invariants().is_ok());
    }

    #[test]
    fn conserving_rotations_keep_energy(e in 0.1f64..3.0, e_c in 0.05f64..3.0, theta in 0.0f64..1.6, g in ground()) {
        let h = hamiltonian_diagonal(&[e, e + e_c, e_c]);
        let s = DenseState::product(&g).unwrap();
        let u = UnitaryOp::rotation(8, 2, 5, theta).conserving(&h).unwrap();
        let (_, de) = apply_and_measure(&s, &u, &h).unwrap();
        prop_assert!(de.abs() < 1e-14);
    }

    #[test]
    fn partial_swap_moves_the_stated_fraction(mix in 0.0f64..=1.0, g in ground()) {
        let s = DenseState::product(&g).unwrap();
        let d = s.diagonal();
        let out = s.apply(&UnitaryOp::partial_swap(8, 2, 5, mix)).unwrap().diagonal();
        prop_assert!((out[2] - ((1.0 - mix) * d[2] + mix * d[5])).abs() < 1e-15);
    }
}

#[test]
fn thermal_states_reject_bad_input() {
    use fridge_oracle::build_thermal_state;
    assert!(build_thermal_state(&[1.0, 1.0], &[Temperature::Finite(1.0)]).is_err());
    assert!(build_thermal_state(&[1.0; 4], &[Temperature::Finite(1.0); 4]).is_err());
    assert!(build_thermal_state(&[1.0], &[Temperature::Negative(-1.0)]).is_err());
}
