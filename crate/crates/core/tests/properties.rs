mod common;

use proptest::prelude::*;
use urbench::channels::{
    avg_gate_fidelity, compose, depolarizing, diamond_bounds, fidelity_unitarity_bound_holds, unitarity,
    unitarity_pauli_sum,
};
use urbench::clifford::{gate_as_channel, sample_uniform, CliffordGroup};
use urbench::pauli::normalized_pauli_group;
use urbench::qmath::ComplexMatrix;
use urbench::simulator::{sample_expectation, RngStream};
use urbench::urb::{fit_decay, Q_FLOOR};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitarity_is_a_probability(seed in any::<u64>(), n in 1usize..=2, rank in 1usize..=4) {
        let mut rng = common::rng(seed);
        let ch = common::random_channel(1 << n, rank, &mut rng);
        let u = unitarity(&ch);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&u));
        prop_assert!((u - unitarity_pauli_sum(&ch)).abs() < 1e-10);
    }

    #[test]
    fn unitary_channels_have_unit_unitarity(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = common::rng(seed);
        let ch = common::random_mixed_unitary(1 << n, 1, &mut rng);
        prop_assert!((unitarity(&ch) - 1.0).abs() < 1e-10);
        let f = avg_gate_fidelity(&ch).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn depolarizing_unitarity_multiplies(p in 0.0f64..=1.0, q in 0.0f64..=1.0, n in 1usize..=2) {
        let ab = compose(&depolarizing(n, p).unwrap(), &depolarizing(n, q).unwrap()).unwrap();
        prop_assert!((unitarity(&ab) - (p * q).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn fidelity_bound_holds(seed in any::<u64>(), n in 1usize..=2, rank in 1usize..=4) {
        let mut rng = common::rng(seed);
        let ch = common::random_channel(1 << n, rank, &mut rng);
        prop_assert!(fidelity_unitarity_bound_holds(&ch).unwrap().holds);
    }

    #[test]
    fn diamond_bounds_are_ordered(p_rb in 0.5f64..1.0, t in 0.0f64..=1.0, wide in any::<bool>()) {
        let d = if wide { 4 } else { 2 };
        let u = 2.0 * p_rb - 1.0 + t * (2.0 - 2.0 * p_rb);
        let bounds = diamond_bounds(p_rb, u.min(1.0), d).unwrap();
        prop_assert!(bounds.lower >= 0.0);
        prop_assert!(bounds.lower <= bounds.upper);
    }

    #[test]
    fn fit_recovers_noiseless_decays(b in 0.05f64..2.0, u in 0.05f64..=1.0, len in 3usize..15) {
        let pts: Vec<(usize, f64)> = (1..=len).map(|m| (m, b * u.powi(m as i32 - 1))).collect();
        prop_assume!(pts[len - 1].1 > 10.0 * Q_FLOOR);
        let fit = fit_decay(&pts).unwrap();
        prop_assert!((fit.u - u).abs() < 1e-9);
        prop_assert!((fit.b - b).abs() < 1e-9 * b.max(1.0));
        prop_assert!(!fit.low_signal);
    }

    #[test]
    fn decays_into_the_floor_are_flagged(b in 0.05f64..1.0, u in 0.05f64..0.3) {
        let pts: Vec<(usize, f64)> = (1..=20).map(|m| (m, b * u.powi(m as i32 - 1))).collect();
        let fit = fit_decay(&pts).unwrap();
        prop_assert!(fit.low_signal);
        prop_assert!((0.0..=1.0).contains(&fit.u));
    }

    #[test]
    fn sampled_expectations_stay_in_range(p in 0.0f64..=1.0, shots in 2u64..4096, seed in any::<u64>()) {
        let e = sample_expectation(p, shots, &mut RngStream::new(seed, 0));
        prop_assert!((-1.0..=1.0).contains(&e));
    }

    #[test]
    fn clifford_conjugation_permutes_paulis(seed in any::<u64>(), n in 1usize..=2) {
        let group = CliffordGroup::shared(n).unwrap();
        let g = sample_uniform(group, &mut RngStream::new(seed, 0));
        let ptm = gate_as_channel(g).ptm().clone();
        let d2 = ptm.dim_sq();
        for i in 0..d2 {
            let row: Vec<f64> = (0..d2).map(|j| ptm.get(i, j)).collect();
            prop_assert_eq!(row.iter().filter(|x| x.abs() > 1e-9).count(), 1);
            prop_assert!(row.iter().all(|x| x.abs() < 1e-9 || (x.abs() - 1.0).abs() < 1e-9));
        }
    }
}

#[test]
fn two_qubit_cliffords_form_a_one_design() {
    let group = CliffordGroup::shared(2).unwrap();
    let members = normalized_pauli_group(2).unwrap().members();
    let mut worst: f64 = 0.0;
    for (label, sigma) in members {
        if label.is_identity() {
            continue;
        }
        let mut acc = ComplexMatrix::zeros(4, 4);
        for g in group.members() {
            acc = acc.add(&g.matrix().conjugate(sigma).unwrap()).unwrap();
        }
        worst = worst.max(acc.scale_real(1.0 / group.len() as f64).max_abs_diff(&ComplexMatrix::zeros(4, 4)));
    }
    assert!(worst < 1e-10, "{worst}");
}
