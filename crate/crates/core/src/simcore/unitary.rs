use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{init_state, run_circuit, StateVector, PAULI_X, PAULI_Y, PAULI_Z};
use super::SimError;
use crate::paulicompile::{Circuit, Pauli, PauliString};

/// Dense matrix of a Pauli word (coefficient ignored), qubit 0 as the
/// leftmost tensor factor.
pub fn pauli_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for &factor in &p.word {
        let f = match factor {
            Pauli::I => DMatrix::identity(2, 2),
            Pauli::X => DMatrix::from_fn(2, 2, |i, j| PAULI_X[i][j]),
            Pauli::Y => DMatrix::from_fn(2, 2, |i, j| PAULI_Y[i][j]),
            Pauli::Z => DMatrix::from_fn(2, 2, |i, j| PAULI_Z[i][j]),
        };
        m = m.kronecker(&f);
    }
    m
}

/// Unitary implemented by `c`, column k being the image of basis state k.
pub fn circuit_unitary(c: &Circuit) -> Result<DMatrix<Complex64>, SimError> {
    let n = c.n_qubits();
    let dim = 1usize << n;
    let mut u = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let bits: String = (0..n)
            .map(|q| if (k >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' })
            .collect();
        let out: StateVector = run_circuit(c, &init_state(n, &bits)?)?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            u[(row, k)] = *a;
        }
    }
    Ok(u)
}
