use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::fidelity::{partial_trace_mode, Mode};
use super::state::{init_state, StateVector};
use super::SimError;
use crate::cosmology::{self, BogoliubovPair, CosmologyParams, ModeFrequencies};

/// In-vacuum |0, in⟩ in the qubit encoding.
pub const VACUUM: &str = "0101";

fn mat2(a: [[Complex64; 2]; 2]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

/// 16×16 interaction Hamiltonian 2ω_out(αβ* σ₋σ₊σ₋σ₊ + h.c.), built from
/// the ladder operators σ± = (X ± iY)/2 rather than from Pauli strings.
pub fn interaction_matrix(bog: &BogoliubovPair, freqs: &ModeFrequencies) -> DMatrix<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    // (X - iY)/2 = |1⟩⟨0| and (X + iY)/2 = |0⟩⟨1| in the Z basis.
    let lower = mat2([[z, z], [o, z]]);
    let raise = mat2([[z, o], [z, z]]);
    let ladder = lower
        .kronecker(&raise)
        .kronecker(&lower)
        .kronecker(&raise);
    let coupling = bog.coupling();
    let h = &ladder * coupling + ladder.adjoint() * coupling.conj();
    h * Complex64::new(2.0 * freqs.omega_out, 0.0)
}

/// exp(-iHt) applied to `psi`, through the eigendecomposition of Hermitian `h`.
pub fn evolve_exact(h: &DMatrix<Complex64>, t: f64, psi: &StateVector) -> Result<StateVector, SimError> {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -lambda * t)),
    );
    let u = v * DMatrix::from_diagonal(&phases) * v.adjoint();
    let out = u * DVector::from_column_slice(psi.amplitudes());
    StateVector::from_amplitudes(out.iter().copied().collect())
}

/// Exact evolution of the in-vacuum under the truncated interaction
/// Hamiltonian, exp(-i H_int t)|0101⟩, with the same sign convention as the
/// compiled circuit.
pub fn exact_oracle_state(params: &CosmologyParams) -> Result<StateVector, SimError> {
    let bog = cosmology::bogoliubov(params)?;
    let freqs = cosmology::frequencies(params)?;
    let h = interaction_matrix(&bog, &freqs);
    evolve_exact(&h, params.time, &init_state(4, VACUUM)?)
}

/// Reference state for fidelities: the evolution operator expanded to second
/// order, (1 − iHt − H²t²/2)|0101⟩, normalised and reduced to the second mode.
pub fn theoretical_reduced_state(params: &CosmologyParams) -> Result<DensityMatrix, SimError> {
    let bog = cosmology::bogoliubov(params)?;
    let freqs = cosmology::frequencies(params)?;
    let h = interaction_matrix(&bog, &freqs);
    let t = params.time;
    let psi0 = DVector::from_column_slice(init_state(4, VACUUM)?.amplitudes());
    let h_psi = &h * &psi0;
    let h2_psi = &h * &h_psi;
    let psi = &psi0 - h_psi * Complex64::new(0.0, t) - h2_psi * Complex64::new(0.5 * t * t, 0.0);
    let norm = psi.norm();
    let psi = psi / Complex64::new(norm, 0.0);
    let state = StateVector::from_amplitudes(psi.iter().copied().collect())?;
    partial_trace_mode(&state, Mode::Second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::particle_number;

    fn sector_leakage(s: &StateVector) -> f64 {
        s.probabilities()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 0b0101 && *i != 0b1010)
            .map(|(_, p)| p)
            .sum()
    }

    #[test]
    fn hamiltonian_is_hermitian_and_couples_vacuum_to_pair() {
        let p = CosmologyParams::standard(2.0);
        let bog = cosmology::bogoliubov(&p).unwrap();
        let f = cosmology::frequencies(&p).unwrap();
        let h = interaction_matrix(&bog, &f);
        assert!((&h - h.adjoint()).camax() < 1e-15);
        let nonzero: Vec<(usize, usize)> = (0..16)
            .flat_map(|i| (0..16).map(move |j| (i, j)))
            .filter(|&(i, j)| h[(i, j)].norm() > 0.0)
            .collect();
        assert_eq!(nonzero, vec![(0b0101, 0b1010), (0b1010, 0b0101)]);
        let want = bog.coupling() * 2.0 * f.omega_out;
        assert!((h[(0b1010, 0b0101)] - want).norm() < 1e-15);
    }

    #[test]
    fn zero_coupling_leaves_vacuum() {
        let p = CosmologyParams::new(1.5, 0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let s = exact_oracle_state(&p).unwrap();
        assert!((s.amplitudes()[0b0101].norm() - 1.0).abs() < 1e-15);
        let red = theoretical_reduced_state(&p).unwrap();
        assert!((red.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_stays_in_pair_sector() {
        for rho in [0.05, 0.3, 1.0, 4.0, 30.0, 1e3] {
            let s = exact_oracle_state(&CosmologyParams::standard(rho).with_time(3.0)).unwrap();
            assert!(sector_leakage(&s) < 1e-12);
        }
    }

    #[test]
    fn oracle_population_is_sine_squared() {
        let p = CosmologyParams::standard(1.5);
        let r = cosmology::squeezing_parameter(&p).unwrap();
        let n = particle_number(&exact_oracle_state(&p).unwrap()).unwrap();
        assert!((n - r.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn sudden_limit_particle_number_between_analytic_curves() {
        // The two-level truncation oscillates as sin²r, which at r ≈ 0.354
        // sits 0.017 above the thermal truncated value.
        let p = CosmologyParams::standard(1e6);
        let n = particle_number(&exact_oracle_state(&p).unwrap()).unwrap();
        let nt = cosmology::n_expected_truncated(&p).unwrap();
        let nf = cosmology::n_expected_full(&p).unwrap();
        let r = cosmology::squeezing_parameter(&p).unwrap();
        assert!((nt - 0.103).abs() < 1e-3);
        assert!((n - r.sin().powi(2)).abs() < 1e-13);
        assert!((n - 0.11988).abs() < 1e-4, "n = {n}");
        assert!(nt < n && n < nf);
    }

    #[test]
    fn second_order_state_tracks_exact_reduction_at_small_coupling() {
        // choose t so that r = 2|α||β|ω_out t = 1e-3
        let base = CosmologyParams::standard(1.0);
        let r1 = cosmology::squeezing_parameter(&base).unwrap();
        let p = base.with_time(1e-3 / r1);
        let approx = theoretical_reduced_state(&p).unwrap();
        let exact = partial_trace_mode(&exact_oracle_state(&p).unwrap(), Mode::Second).unwrap();
        assert!((approx.matrix() - exact.matrix()).camax() < 1e-11);
        assert!((approx.trace() - 1.0).abs() < 1e-15);
        let p10 = approx.matrix()[(2, 2)].re;
        assert!((p10 - 1e-6).abs() < 1e-11);
    }
}
