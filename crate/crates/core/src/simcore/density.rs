use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::state::{qubit_mask, single_qubit_matrix, Mat2, StateVector};
use super::SimError;
use crate::paulicompile::Gate;

pub(crate) const HERMITIAN_TOL: f64 = 1e-10;
pub(crate) const TRACE_TOL: f64 = 1e-10;
pub(crate) const PSD_TOL: f64 = 1e-9;

/// Mixed state on `n` qubits; same basis ordering as [`StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (eigenvalues ≥ −1e-9).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, SimError> {
        let dm = Self::from_matrix_unchecked(matrix)?;
        dm.validate()?;
        Ok(dm)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Result<Self, SimError> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || dim == 0 || !dim.is_power_of_two() {
            return Err(SimError::Dimension(format!(
                "{}×{} is not a square power-of-two matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let m = &self.matrix;
        let herm_err = (m - m.adjoint()).camax();
        if herm_err > HERMITIAN_TOL {
            return Err(SimError::NotDensityMatrix(format!(
                "not Hermitian (deviation {herm_err:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(SimError::NotDensityMatrix(format!("trace {tr}")));
        }
        let min_eig = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(SimError::NotDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    pub fn from_state(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            n_qubits: state.n_qubits(),
            matrix: &v * v.adjoint(),
        }
    }

    /// Diagonal density matrix from basis probabilities.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self, SimError> {
        let diag: Vec<Complex64> = probabilities
            .iter()
            .map(|&p| Complex64::new(p, 0.0))
            .collect();
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// ρ → M ρ M† for a 2×2 operator `m` on qubit `q`.
    pub fn conjugate_single(&mut self, q: usize, m: &Mat2) {
        let mask = qubit_mask(self.n_qubits, q);
        let dim = self.dim();
        let rho = &mut self.matrix;
        for col in 0..dim {
            for i in (0..dim).filter(|i| i & mask == 0) {
                let j = i | mask;
                let (a, b) = (rho[(i, col)], rho[(j, col)]);
                rho[(i, col)] = m[0][0] * a + m[0][1] * b;
                rho[(j, col)] = m[1][0] * a + m[1][1] * b;
            }
        }
        for row in 0..dim {
            for i in (0..dim).filter(|i| i & mask == 0) {
                let j = i | mask;
                let (a, b) = (rho[(row, i)], rho[(row, j)]);
                rho[(row, i)] = a * m[0][0].conj() + b * m[0][1].conj();
                rho[(row, j)] = a * m[1][0].conj() + b * m[1][1].conj();
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let cm = qubit_mask(self.n_qubits, control);
        let tm = qubit_mask(self.n_qubits, target);
        let dim = self.dim();
        for i in (0..dim).filter(|i| i & cm != 0 && i & tm == 0) {
            self.matrix.swap_rows(i, i | tm);
            self.matrix.swap_columns(i, i | tm);
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => {
                let m = single_qubit_matrix(gate).expect("single-qubit gate");
                self.conjugate_single(q, &m);
            }
        }
    }

    /// self ← (1 − w)·self + w·other, entrywise.
    pub(crate) fn mix_with(&mut self, other: &DMatrix<Complex64>, weight: f64) {
        self.matrix *= Complex64::new(1.0 - weight, 0.0);
        self.matrix += other * Complex64::new(weight, 0.0);
    }
}
