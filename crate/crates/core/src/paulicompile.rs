//! Lowering of the pair-creation Hamiltonian to elementary gates.
//!
//! The interaction is a sum of sixteen weight-4 Pauli strings over {X, Y}:
//! eight from the real part of αβ* and eight from the imaginary part. Within
//! each group the strings commute, so the evolution is a product of sixteen
//! exponentials, each compiled with a CNOT ladder anchored on qubit 0 and
//! S/S† basis changes on the qubits that carry a Y.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::cosmology::{self, BogoliubovPair, CosmologyError, CosmologyParams, ModeFrequencies};

/// Qubit count of the two-mode, one-excitation-per-mode encoding.
pub const N_QUBITS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("cannot compile exponential of {0}: only X and Y factors are supported")]
    UnsupportedWord(String),
    #[error("word {word} has {len} factors, circuit has {n_qubits} qubits")]
    WordLength {
        word: String,
        len: usize,
        n_qubits: usize,
    },
    #[error("invalid Pauli character {0:?}")]
    BadPauli(char),
    #[error("gate {gate} does not fit a {n_qubits}-qubit circuit")]
    BadGate { gate: String, n_qubits: usize },
    #[error(transparent)]
    Cosmology(#[from] CosmologyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = CompileError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(CompileError::BadPauli(other)),
        }
    }
}

/// A tensor product of Pauli factors, qubit 0 leftmost, with a real weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub word: Vec<Pauli>,
    pub coeff: f64,
}

impl PauliString {
    pub fn new(word: Vec<Pauli>, coeff: f64) -> Self {
        Self { word, coeff }
    }

    pub fn parse(word: &str, coeff: f64) -> Result<Self, CompileError> {
        let word = word
            .chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { word, coeff })
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|p| p.as_char()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}·{}", self.coeff, self.word_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    S(usize),
    Sdg(usize),
    /// Rotation exp(-iθX/2).
    Rx(usize, f64),
    /// Rotation exp(-iθZ/2).
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rx(q, theta) => Gate::Rx(q, -theta),
            Gate::Rz(q, theta) => Gate::Rz(q, -theta),
            g @ (Gate::X(_) | Gate::Cnot { .. }) => g,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::X(q) => write!(f, "X{q}"),
            Gate::S(q) => write!(f, "S{q}"),
            Gate::Sdg(q) => write!(f, "Sdg{q}"),
            Gate::Rx(q, t) => write!(f, "RX{q}({t})"),
            Gate::Rz(q, t) => write!(f, "RZ{q}({t})"),
            Gate::Cnot { control, target } => write!(f, "CNOT{control}{target}"),
        }
    }
}

/// Ordered gate list; gates are applied first to last.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CompileError> {
        let bad = || CompileError::BadGate {
            gate: gate.to_string(),
            n_qubits: self.n_qubits,
        };
        if gate.qubits().iter().any(|&q| q >= self.n_qubits) {
            return Err(bad());
        }
        match gate {
            Gate::Cnot { control, target } if control == target => return Err(bad()),
            Gate::Rx(_, t) | Gate::Rz(_, t) if !t.is_finite() => return Err(bad()),
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<(), CompileError> {
        for &g in other.gates() {
            self.push(g)?;
        }
        Ok(())
    }

    /// Gate-by-gate inverse in reverse order.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn one_qubit_count(&self) -> usize {
        self.gates.len() - self.two_qubit_count()
    }
}

const A_TERMS: [(&str, f64); 8] = [
    ("XXXX", 1.0),
    ("YYYY", 1.0),
    ("XXYY", 1.0),
    ("XYXY", -1.0),
    ("YXXY", 1.0),
    ("XYYX", 1.0),
    ("YXYX", -1.0),
    ("YYXX", 1.0),
];

const B_TERMS: [(&str, f64); 8] = [
    ("XXXY", 1.0),
    ("XXYX", -1.0),
    ("XYXX", 1.0),
    ("YXXX", -1.0),
    ("XYYY", 1.0),
    ("YXYY", -1.0),
    ("YYXY", 1.0),
    ("YYYX", -1.0),
];

/// Strings of the real-part sum (`A`), with their signs.
pub fn a_sum() -> Vec<PauliString> {
    A_TERMS
        .iter()
        .map(|&(w, s)| PauliString::parse(w, s).expect("static word"))
        .collect()
}

/// Strings of the imaginary-part sum (`B`), with their signs.
pub fn b_sum() -> Vec<PauliString> {
    B_TERMS
        .iter()
        .map(|&(w, s)| PauliString::parse(w, s).expect("static word"))
        .collect()
}

/// The sixteen exponentials whose product is exp(-i t H_int), with
/// H_int = (ω_out/4)(Re(αβ*) A − Im(αβ*) B).
///
/// Each entry is a signed string and the angle θ of exp(-iθP) for its bare
/// word; the string's `coeff` is its ±1 sign inside A or B, already folded
/// into θ. A-terms come first, then B-terms.
pub fn hamiltonian_terms(
    bog: &BogoliubovPair,
    freqs: &ModeFrequencies,
    t: f64,
) -> Vec<(PauliString, f64)> {
    let coupling = bog.coupling();
    let quarter = 0.25 * freqs.omega_out * t;
    let re = quarter * coupling.re;
    let im = quarter * coupling.im;
    let mut out = Vec::with_capacity(16);
    for p in a_sum() {
        let angle = p.coeff * re;
        out.push((p, angle));
    }
    for p in b_sum() {
        let angle = -p.coeff * im;
        out.push((p, angle));
    }
    out
}

/// Circuit for exp(-iθP), P ∈ {X, Y}⁴, up to a global phase.
///
/// Layout (time order): S on every qubit carrying a Y, the ladder
/// CNOT₀₃ S₀ CNOT₀₂ S₀ CNOT₀₁, the central RX₀, the mirrored ladder with S₀†,
/// and S† on every qubit carrying a Y. The two S₀ pairs sit on the control of
/// the ladder and together conjugate the rotation by Z₀, which flips its
/// sign; S† X S = −Y flips it once more per Y.
pub fn compile_pauli_exponential(p: &PauliString, angle: f64) -> Result<Circuit, CompileError> {
    if p.word.len() != N_QUBITS {
        return Err(CompileError::WordLength {
            word: p.word_string(),
            len: p.word.len(),
            n_qubits: N_QUBITS,
        });
    }
    if p.word.iter().any(|&f| !matches!(f, Pauli::X | Pauli::Y)) {
        return Err(CompileError::UnsupportedWord(p.word_string()));
    }
    let y_qubits: Vec<usize> = (0..N_QUBITS).filter(|&q| p.word[q] == Pauli::Y).collect();
    let sign = if y_qubits.len().is_multiple_of(2) { -1.0 } else { 1.0 };

    let mut c = Circuit::new(N_QUBITS);
    for &q in y_qubits.iter().rev() {
        c.push(Gate::S(q))?;
    }
    c.push(Gate::Cnot { control: 0, target: 3 })?;
    c.push(Gate::S(0))?;
    c.push(Gate::Cnot { control: 0, target: 2 })?;
    c.push(Gate::S(0))?;
    c.push(Gate::Cnot { control: 0, target: 1 })?;
    c.push(Gate::Rx(0, sign * 2.0 * angle))?;
    c.push(Gate::Cnot { control: 0, target: 1 })?;
    c.push(Gate::Sdg(0))?;
    c.push(Gate::Cnot { control: 0, target: 2 })?;
    c.push(Gate::Sdg(0))?;
    c.push(Gate::Cnot { control: 0, target: 3 })?;
    for &q in &y_qubits {
        c.push(Gate::Sdg(q))?;
    }
    Ok(c)
}

/// X₁X₃ preparation of the in-vacuum |0101⟩ followed by the sixteen compiled
/// exponentials for the given physical parameters.
pub fn build_evolution_circuit(params: &CosmologyParams) -> Result<Circuit, CompileError> {
    let bog = cosmology::bogoliubov(params)?;
    let freqs = cosmology::frequencies(params)?;
    build_circuit_from_terms(&hamiltonian_terms(&bog, &freqs, params.time))
}

pub fn build_circuit_from_terms(terms: &[(PauliString, f64)]) -> Result<Circuit, CompileError> {
    let mut c = Circuit::new(N_QUBITS);
    c.push(Gate::X(1))?;
    c.push(Gate::X(3))?;
    for (p, angle) in terms {
        c.extend(&compile_pauli_exponential(p, *angle)?)?;
    }
    Ok(c)
}

/// Cancels adjacent inverse pairs (S·S†, CNOT·CNOT, X·X, opposite rotations)
/// and zero-angle rotations. "Adjacent" means no intervening gate touches any
/// of the pair's qubits. Off by default in every pipeline.
pub fn peephole(c: &Circuit) -> Circuit {
    let mut out: Vec<Gate> = Vec::with_capacity(c.len());
    for &g in c.gates() {
        if let Gate::Rx(_, t) | Gate::Rz(_, t) = g {
            if t == 0.0 {
                continue;
            }
        }
        let qs = g.qubits();
        let previous = out
            .iter()
            .rposition(|h| h.qubits().iter().any(|q| qs.contains(q)));
        if let Some(idx) = previous {
            let h = out[idx];
            let same_support = {
                let mut a = h.qubits();
                let mut b = qs.clone();
                a.sort_unstable();
                b.sort_unstable();
                a == b
            };
            if same_support && h == g.inverse() {
                out.remove(idx);
                continue;
            }
        }
        out.push(g);
    }
    Circuit {
        n_qubits: c.n_qubits,
        gates: out,
    }
}

/// OpenQASM 2.0 text for the circuit. Angles carry 17 significant digits so
/// binary doubles round-trip.
pub fn export_qasm(c: &Circuit) -> String {
    let mut s = String::new();
    s.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(s, "qreg q[{}];", c.n_qubits());
    for g in c.gates() {
        let _ = match *g {
            Gate::X(q) => writeln!(s, "x q[{q}];"),
            Gate::S(q) => writeln!(s, "s q[{q}];"),
            Gate::Sdg(q) => writeln!(s, "sdg q[{q}];"),
            Gate::Rx(q, t) => writeln!(s, "rx({t:.16e}) q[{q}];"),
            Gate::Rz(q, t) => writeln!(s, "rz({t:.16e}) q[{q}];"),
            Gate::Cnot { control, target } => writeln!(s, "cx q[{control}],q[{target}];"),
        };
    }
    s
}

impl FromStr for PauliString {
    type Err = CompileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PauliString::parse(s, 1.0)
    }
}
