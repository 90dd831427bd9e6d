use cosmoqsim::cosmology::CosmologyParams;
use cosmoqsim::mitigation::{fold_circuit, run_noisy, run_scaled, NoiseModel, ZneConfig};
use cosmoqsim::paulicompile::{build_evolution_circuit, Circuit, Gate};
use cosmoqsim::simcore::{expectation, init_state, particle_number_observables, run_circuit, ObservableString};
use proptest::prelude::*;

fn gate() -> impl Strategy<Value = Gate> {
    let q = 0usize..4;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::S),
        (q.clone(), -3.2f64..3.2).prop_map(|(q, t)| Gate::Rx(q, t)),
        (q.clone(), -3.2f64..3.2).prop_map(|(q, t)| Gate::Rz(q, t)),
        (0usize..4, 1usize..4).prop_map(|(c, d)| Gate::Cnot { control: c, target: (c + d) % 4 }),
    ]
}

fn zzzz() -> ObservableString {
    "ZZZZ".parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn noisy_outputs_are_density_matrices(
        gates in proptest::collection::vec(gate(), 1..30),
        eps1 in 0.0f64..0.2,
        eps2 in 0.0f64..0.3,
    ) {
        let mut c = Circuit::new(4);
        for g in gates {
            c.push(g).unwrap();
        }
        let rho = run_noisy(&c, "0110", &NoiseModel::new(eps1, eps2).unwrap()).unwrap();
        prop_assert!(rho.validate().is_ok());
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn folding_is_invisible_without_noise() {
    let p = CosmologyParams::standard(2.5);
    let c = build_evolution_circuit(&p).unwrap();
    let base = run_noisy(&c, "0000", &NoiseModel::noiseless()).unwrap();
    for s in [1, 3, 5] {
        let folded = run_noisy(&fold_circuit(&c, s).unwrap(), "0000", &NoiseModel::noiseless()).unwrap();
        for o in particle_number_observables() {
            let a = expectation(&base, &o).unwrap();
            let b = expectation(&folded, &o).unwrap();
            assert!((a - b).abs() < 1e-10, "scale {s}, {o}");
        }
    }
}

#[test]
fn bias_grows_with_scale() {
    for rho in [0.01, 1.0, 100.0] {
        let p = CosmologyParams::standard(rho);
        let c = build_evolution_circuit(&p).unwrap();
        let ideal = expectation(&run_circuit(&c, &init_state(4, "0000").unwrap()).unwrap(), &zzzz()).unwrap();
        let states = run_scaled(&c, &NoiseModel::default(), &ZneConfig::default()).unwrap();
        let bias: Vec<f64> = states
            .iter()
            .map(|r| (expectation(r, &zzzz()).unwrap() - ideal).abs())
            .collect();
        assert!(bias[0] <= bias[1] && bias[1] <= bias[2], "rho = {rho}: {bias:?}");
        assert!(bias[0] < bias[1], "rho = {rho}");
    }
}
