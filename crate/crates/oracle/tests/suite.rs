use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fridge_core::curves::coherent_single_curve;
use fridge_core::protocols::two_qubit_incoherent_single;
use fridge_core::{FridgeError, MachineSpec, Temperature};
use fridge_oracle::haar::haar_unitary;
use fridge_oracle::sweep::{audit_degeneracies, degenerate_subspace_sweep, sweep_machine};
use fridge_oracle::verify::{reference_machine, run_suite, VerifyOptions, CHECK_NAMES, DEFAULT_SEED};
use fridge_oracle::{build_thermal_state, haar_pareto_sweep, thermalization_gradient_check};

fn opts(samples: usize, mutate: Option<&str>) -> VerifyOptions {
    VerifyOptions {
        seed: DEFAULT_SEED,
        samples,
        mutate: mutate.map(str::to_string),
    }
}

#[test]
fn full_suite_passes() {
    let rep = run_suite(&opts(2_000, None)).unwrap();
    for c in &rep.checks {
        assert!(c.passed, "{} failed: {} (residual {:e})", c.name, c.detail, c.residual);
    }
    assert!(rep.passed);
    let names: Vec<_> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, CHECK_NAMES);
}

#[test]
fn every_mutation_fails_exactly_its_check() {
    for &name in CHECK_NAMES {
        let rep = run_suite(&opts(200, Some(name))).unwrap();
        let failed: Vec<_> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec![name], "mutating {name}");
        assert!(!rep.passed);
    }
}

#[test]
fn unknown_mutation_is_rejected() {
    assert!(matches!(
        run_suite(&opts(0, Some("no_such_check"))),
        Err(FridgeError::Configuration(_))
    ));
}

#[test]
fn zero_samples_skip_the_sweep() {
    let rep = run_suite(&opts(0, None)).unwrap();
    assert!(rep.dominance.is_none());
    let pareto = rep.checks.iter().find(|c| c.name == "pareto_dominance").unwrap();
    assert!(pareto.passed && pareto.detail.starts_with("skipped"));
}

#[test]
fn haar_sweep_is_reproducible() {
    let spec = reference_machine();
    let curve = coherent_single_curve(&spec, 101).unwrap();
    let a = haar_pareto_sweep(&spec, 3_000, &curve, 42).unwrap();
    let b = haar_pareto_sweep(&spec, 3_000, &curve, 42).unwrap();
    assert_eq!(a, b);
    assert!(a.is_clean());
    let draw = |seed| haar_unitary(&mut ChaCha8Rng::seed_from_u64(seed), 8);
    assert_eq!(draw(7), draw(7));
    assert_ne!(draw(7), draw(8));
}

#[test]
fn thermal_state_matches_core_product_diagonal() {
    let spec = MachineSpec::two_qubit_resonant(1.0, 0.7, Temperature::Finite(0.8), Some(Temperature::Finite(3.0))).unwrap();
    let temps = [spec.t_room, spec.t_room, Temperature::Finite(3.0)];
    let dense = build_thermal_state(&[1.0, 1.7, 0.7], &temps).unwrap();
    let pops: Vec<_> = [1.0, 1.7, 0.7]
        .iter()
        .zip(temps)
        .map(|(&g, t)| fridge_core::boltzmann_population(g, t).unwrap())
        .collect();
    let core = fridge_core::thermal::product_diagonal(&pops);
    for (a, b) in dense.diagonal().iter().zip(&core) {
        assert!((a - b).abs() < 1e-15);
    }
    dense.check_invariants().unwrap();
}

#[test]
fn resonance_sweep_matches_closed_form_gain() {
    let spec = MachineSpec::two_qubit_resonant(1.0, 0.4, Temperature::Finite(1.0), Some(Temperature::Finite(2.5))).unwrap();
    let closed = two_qubit_incoherent_single(&spec).unwrap();
    let rep = degenerate_subspace_sweep(&spec, (2, 5), 33).unwrap();
    assert!((rep.best_r - closed.r_final.r()).abs() < 1e-15);
}

#[test]
fn zero_gap_subspaces_are_proportional_to_identity() {
    let spec = sweep_machine(0.0, 1.3, 0.6, Temperature::Finite(1.0), Temperature::Finite(5.0)).unwrap();
    let audit = audit_degeneracies(&spec, 17).unwrap();
    assert!(!audit.pairs.is_empty());
    for p in &audit.pairs {
        assert!(p.improvement().abs() < 1e-16);
    }
    assert!((audit.block_r - audit.initial_r).abs() < 1e-16);
}

#[test]
fn gradient_vanishes_with_c_gap() {
    let t = Temperature::Finite(1.0);
    let spec = MachineSpec::two_qubit_resonant(1.0, 1e-8, t, Some(Temperature::Finite(2.0))).unwrap();
    let (db, dc) = thermalization_gradient_check(&spec, t, t).unwrap();
    assert!(db < 0.0);
    assert!(dc.abs() < 1e-8);
}
