use num_complex::Complex64;

use super::SimError;
use crate::paulicompile::{Circuit, Gate};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Mat2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

/// Matrix of a single-qubit gate; `None` for CNOT.
pub fn single_qubit_matrix(gate: &Gate) -> Option<Mat2> {
    match *gate {
        Gate::X(_) => Some(PAULI_X),
        Gate::S(_) => Some([[ONE, ZERO], [ZERO, I]]),
        Gate::Sdg(_) => Some([[ONE, ZERO], [ZERO, -I]]),
        Gate::Rx(_, theta) => {
            let (s, c) = (0.5 * theta).sin_cos();
            Some([
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ])
        }
        Gate::Rz(_, theta) => Some([
            [Complex64::from_polar(1.0, -0.5 * theta), ZERO],
            [ZERO, Complex64::from_polar(1.0, 0.5 * theta)],
        ]),
        Gate::Cnot { .. } => None,
    }
}

/// Bit mask of qubit `q` in an `n`-qubit basis index (qubit 0 is the most
/// significant bit, so |q0 q1 q2 q3⟩ reads as a binary number).
#[inline]
pub fn qubit_mask(n_qubits: usize, q: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

/// Pure state on `n_qubits` qubits; amplitude `i` belongs to the basis ket
/// whose binary expansion (qubit 0 first) is `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps raw amplitudes; the norm must be 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(SimError::Dimension(format!(
                "{dim} amplitudes is not a power of two"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Born probabilities of the computational basis states.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_single(&mut self, q: usize, m: &Mat2) {
        let mask = qubit_mask(self.n_qubits, q);
        for i in 0..self.amplitudes.len() {
            if i & mask != 0 {
                continue;
            }
            let j = i | mask;
            let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let cm = qubit_mask(self.n_qubits, control);
        let tm = qubit_mask(self.n_qubits, target);
        for i in 0..self.amplitudes.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amplitudes.swap(i, i | tm);
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => {
                let m = single_qubit_matrix(gate).expect("single-qubit gate");
                self.apply_single(q, &m);
            }
        }
    }
}

/// Computational basis state from a string of '0'/'1', qubit 0 first.
pub fn init_state(n_qubits: usize, bitstring: &str) -> Result<StateVector, SimError> {
    if bitstring.chars().count() != n_qubits || n_qubits == 0 {
        return Err(SimError::Bitstring(bitstring.to_string()));
    }
    let mut index = 0usize;
    for ch in bitstring.chars() {
        index <<= 1;
        match ch {
            '0' => {}
            '1' => index |= 1,
            _ => return Err(SimError::Bitstring(bitstring.to_string())),
        }
    }
    let mut amplitudes = vec![ZERO; 1 << n_qubits];
    amplitudes[index] = ONE;
    Ok(StateVector {
        n_qubits,
        amplitudes,
    })
}

pub fn run_circuit(c: &Circuit, initial: &StateVector) -> Result<StateVector, SimError> {
    if c.n_qubits() != initial.n_qubits() {
        return Err(SimError::Dimension(format!(
            "circuit has {} qubits, state has {}",
            c.n_qubits(),
            initial.n_qubits()
        )));
    }
    let mut state = initial.clone();
    for g in c.gates() {
        state.apply_gate(g);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_states() {
        let s = init_state(4, "0101").unwrap();
        assert_eq!(s.amplitudes()[5], ONE);
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(init_state(1, "0").unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(init_state(2, "11").unwrap().amplitudes()[3], ONE);
    }

    #[test]
    fn malformed_bitstrings() {
        for (n, b) in [(4, "010"), (2, "1a"), (3, "0102"), (0, "")] {
            assert!(matches!(init_state(n, b), Err(SimError::Bitstring(_))), "{b}");
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = init_state(4, "1001").unwrap();
        assert_eq!(run_circuit(&Circuit::new(4), &s).unwrap(), s);
    }

    #[test]
    fn preparation_flips() {
        let mut c = Circuit::new(4);
        c.push(Gate::X(1)).unwrap();
        c.push(Gate::X(3)).unwrap();
        let out = run_circuit(&c, &init_state(4, "0000").unwrap()).unwrap();
        assert_eq!(out, init_state(4, "0101").unwrap());
    }

    #[test]
    fn cnot_truth_table() {
        for (input, output) in [("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")] {
            let mut s = init_state(2, input).unwrap();
            s.apply_cnot(0, 1);
            assert_eq!(s, init_state(2, output).unwrap());
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(run_circuit(&Circuit::new(3), &init_state(4, "0000").unwrap()).is_err());
    }

    #[test]
    fn s_squared_is_z_and_rx_pi_is_x_up_to_phase() {
        let mut s = init_state(1, "1").unwrap();
        s.apply_gate(&Gate::S(0));
        s.apply_gate(&Gate::S(0));
        assert!((s.amplitudes()[1] + ONE).norm() < 1e-15);

        let mut s = init_state(1, "0").unwrap();
        s.apply_gate(&Gate::Rx(0, std::f64::consts::PI));
        assert!((s.amplitudes()[1] + I).norm() < 1e-15);
    }
}
