use std::collections::BTreeMap;

use cosmoqsim::cosmology::{self, CosmologyParams};
use cosmoqsim::paulicompile::{build_evolution_circuit, Circuit, Gate};
use cosmoqsim::simcore::{
    exact_oracle_state, expectation, fidelity, fidelity_first_order, init_state,
    partial_trace_mode, particle_number, run_circuit, theoretical_reduced_state, DensityMatrix,
    Mode, ObservableString, StateVector,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn gate() -> impl Strategy<Value = Gate> {
    let q = 0usize..4;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::S),
        q.clone().prop_map(Gate::Sdg),
        (q.clone(), -3.2f64..3.2).prop_map(|(q, t)| Gate::Rx(q, t)),
        (q.clone(), -3.2f64..3.2).prop_map(|(q, t)| Gate::Rz(q, t)),
        (0usize..4, 1usize..4).prop_map(|(c, d)| Gate::Cnot { control: c, target: (c + d) % 4 }),
    ]
}

fn random_state() -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v.iter().map(|&(a, b)| Complex64::new(a / norm, b / norm)).collect();
            StateVector::from_amplitudes(amps).unwrap()
        })
}

/// G G† / Tr for a random complex G of the given rank.
fn random_density(dim: usize, rank: usize) -> impl Strategy<Value = DensityMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * rank).prop_map(move |v| {
        let g = DMatrix::from_iterator(dim, rank, v.iter().map(|&(a, b)| Complex64::new(a, b)));
        let m = &g * g.adjoint();
        let tr = m.trace();
        DensityMatrix::new(m / tr).unwrap()
    })
}

fn pair_leakage(s: &StateVector) -> f64 {
    s.probabilities()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 0b0101 && *i != 0b1010)
        .map(|(_, p)| p)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gates_preserve_norm(gates in proptest::collection::vec(gate(), 1..40), s in random_state()) {
        let mut state = s;
        for g in &gates {
            state.apply_gate(g);
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tomography_identity(s in random_state()) {
        let p = s.probabilities();
        let direct = p[0b1010] + p[0b0110];
        prop_assert!((particle_number(&s).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn fidelity_bounds_and_symmetry(
        a in random_density(4, 4),
        b in random_density(4, 2),
    ) {
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&fab));
        prop_assert!((fab - fba).abs() < 1e-9);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_state_fidelity_is_overlap(s in random_state(), sigma in random_density(16, 3)) {
        let psi = DensityMatrix::from_state(&s);
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        let overlap = (v.adjoint() * sigma.matrix() * &v)[(0, 0)].re;
        prop_assert!((fidelity(&psi, &sigma).unwrap() - overlap).abs() < 1e-10);
    }

    #[test]
    fn reductions_are_valid_states(s in random_state()) {
        for mode in [Mode::First, Mode::Second] {
            let r = partial_trace_mode(&s, mode).unwrap();
            prop_assert!(r.validate().is_ok());
        }
    }
}

#[test]
fn circuit_leakage_and_oracle_agreement_on_grid() {
    for k in 0..41 {
        let rho = 10f64.powf(-2.0 + 0.1 * k as f64);
        let p = CosmologyParams::standard(rho);
        let coupling = cosmology::bogoliubov(&p).unwrap().coupling().norm();
        let omega = cosmology::frequencies(&p).unwrap().omega_out;
        let bound = 10.0 * (omega * p.time * coupling).powi(4);
        let circuit_state = run_circuit(
            &build_evolution_circuit(&p).unwrap(),
            &init_state(4, "0000").unwrap(),
        )
        .unwrap();
        let oracle = exact_oracle_state(&p).unwrap();
        assert!(pair_leakage(&circuit_state) <= bound + 1e-14, "rho = {rho}");
        assert!(pair_leakage(&oracle) < 1e-12);
        let n_c = particle_number(&circuit_state).unwrap();
        let n_o = particle_number(&oracle).unwrap();
        assert!((n_c - n_o).abs() < 1e-4, "rho = {rho}: {n_c} vs {n_o}");
    }
}

#[test]
fn reduced_oracle_matches_two_level_thermal_populations() {
    let p = CosmologyParams::standard(1.0);
    let red = partial_trace_mode(&exact_oracle_state(&p).unwrap(), Mode::Second).unwrap();
    let thermal = cosmology::thermal_distribution(&p, 1).unwrap();
    let norm = thermal[0] + thermal[1];
    let want = [0.0, thermal[0] / norm, thermal[1] / norm, 0.0];
    for i in 0..4 {
        for j in 0..4 {
            let w = if i == j { want[i] } else { 0.0 };
            assert!((red.matrix()[(i, j)] - Complex64::new(w, 0.0)).norm() < 1e-6);
        }
    }
}

#[test]
fn maximally_entangled_reduction() {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[0b0101] = h;
    amps[0b1010] = h;
    let s = StateVector::from_amplitudes(amps).unwrap();
    for mode in [Mode::First, Mode::Second] {
        let r = partial_trace_mode(&s, mode).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        assert!((r.matrix() - want).norm() < 1e-15);
    }
}

#[test]
fn first_order_fidelity_tracks_exact_at_slow_expansion() {
    for rho in [0.01, 0.03, 0.1] {
        let p = CosmologyParams::standard(rho);
        let state = run_circuit(&build_evolution_circuit(&p).unwrap(), &init_state(4, "0000").unwrap()).unwrap();
        let exact = fidelity(
            &theoretical_reduced_state(&p).unwrap(),
            &partial_trace_mode(&state, Mode::Second).unwrap(),
        )
        .unwrap();
        let expvals: BTreeMap<ObservableString, f64> = ["IIIZ", "IIZI", "IIZZ"]
            .iter()
            .map(|w| {
                let o: ObservableString = w.parse().unwrap();
                let v = expectation(&state, &o).unwrap();
                (o, v)
            })
            .collect();
        let approx = fidelity_first_order(&expvals, &p).unwrap();
        assert!((approx - exact).abs() < 5e-3, "rho = {rho}: {approx} vs {exact}");
    }
}

#[test]
fn reduction_rejects_non_four_qubit_input() {
    let c = Circuit::new(2);
    let s = run_circuit(&c, &init_state(2, "01").unwrap()).unwrap();
    assert!(partial_trace_mode(&s, Mode::First).is_err());
}
