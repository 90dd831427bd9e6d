use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::observables::{obs, ObservableString};
use super::state::StateVector;
use super::SimError;
use crate::cosmology::{self, CosmologyParams};

/// Which two-qubit mode survives a partial trace: qubits (0, 1) or (2, 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

impl Mode {
    fn qubits(self) -> [usize; 2] {
        match self {
            Mode::First => [0, 1],
            Mode::Second => [2, 3],
        }
    }
}

/// Borrowed pure or mixed state.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(d: &'a DensityMatrix) -> Self {
        StateRef::Mixed(d)
    }
}

/// Reduced state on the sorted qubit list `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, SimError> {
    let n = rho.n_qubits();
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&q| q >= n) {
        return Err(SimError::Dimension(format!(
            "cannot keep qubits {keep:?} of {n}"
        )));
    }
    let split = |i: usize| {
        let mut kept = 0usize;
        let mut rest = 0usize;
        for q in 0..n {
            let bit = (i >> (n - 1 - q)) & 1;
            if keep.contains(&q) {
                kept = (kept << 1) | bit;
            } else {
                rest = (rest << 1) | bit;
            }
        }
        (kept, rest)
    };
    let dim = rho.dim();
    let parts: Vec<(usize, usize)> = (0..dim).map(split).collect();
    let k = 1 << keep.len();
    let mut out = DMatrix::zeros(k, k);
    let m = rho.matrix();
    for i in 0..dim {
        for j in 0..dim {
            if parts[i].1 == parts[j].1 {
                out[(parts[i].0, parts[j].0)] += m[(i, j)];
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(out)
}

/// 4×4 reduced density matrix of one mode of a 4-qubit state.
pub fn partial_trace_mode<'a, S: Into<StateRef<'a>>>(
    state: S,
    keep: Mode,
) -> Result<DensityMatrix, SimError> {
    let owned;
    let rho = match state.into() {
        StateRef::Pure(s) => {
            owned = DensityMatrix::from_state(s);
            &owned
        }
        StateRef::Mixed(d) => d,
    };
    if rho.n_qubits() != 4 {
        return Err(SimError::Dimension(format!(
            "mode reduction needs 4 qubits, got {}",
            rho.n_qubits()
        )));
    }
    partial_trace(rho, &keep.qubits())
}

fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues below this are rounding noise; their square roots (~1e-8)
/// would otherwise leak into the fidelity.
const EIGEN_FLOOR: f64 = 1e-14;

/// Principal square root of a PSD matrix; eigenvalues below the floor,
/// including small negative ones, count as zero.
fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| {
            let r = if l > EIGEN_FLOOR { l.sqrt() } else { 0.0 };
            Complex64::new(r, 0.0)
        }),
    );
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Uhlmann fidelity Tr²(√(√ρ σ √ρ)), evaluated as the squared nuclear norm of
/// √ρ√σ.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, SimError> {
    if rho.dim() != sigma.dim() {
        return Err(SimError::Dimension(format!(
            "fidelity between {}- and {}-dimensional states",
            rho.dim(),
            sigma.dim()
        )));
    }
    rho.validate()?;
    sigma.validate()?;
    let product = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
    let nuclear: f64 = product.singular_values().iter().sum();
    Ok(nuclear * nuclear)
}

fn lookup(expvals: &BTreeMap<ObservableString, f64>, short: &str, long: &str) -> Result<f64, SimError> {
    expvals
        .get(&obs(short))
        .or_else(|| expvals.get(&obs(long)))
        .copied()
        .ok_or_else(|| SimError::Observable(format!("missing ⟨{short}⟩ (or ⟨{long}⟩)")))
}

/// Fidelity to the second-order reference state, expanded to first order in
/// ω_out·t, from ⟨IZ⟩, ⟨ZI⟩, ⟨ZZ⟩ on the kept mode. Four-qubit keys IIIZ,
/// IIZI, IIZZ are accepted in their place.
pub fn fidelity_first_order(
    expvals: &BTreeMap<ObservableString, f64>,
    params: &CosmologyParams,
) -> Result<f64, SimError> {
    let iz = lookup(expvals, "IZ", "IIIZ")?;
    let zi = lookup(expvals, "ZI", "IIZI")?;
    let zz = lookup(expvals, "ZZ", "IIZZ")?;
    let bog = cosmology::bogoliubov(params)?;
    let freqs = cosmology::frequencies(params)?;
    let radicand = ((1.0 - zz).powi(2) - (iz - zi).powi(2)).max(0.0);
    let scale = bog.alpha.norm() * bog.beta.norm() * freqs.omega_out * params.time;
    Ok(0.25 * (1.0 - iz + zi - zz) + radicand.sqrt() * scale)
}
