use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::density::DensityMatrix;
use super::state::StateVector;
use super::SimError;

/// A diagonal observable: tensor product of I and Z, qubit 0 leftmost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObservableString {
    z_mask: Vec<bool>,
}

impl ObservableString {
    pub fn len(&self) -> usize {
        self.z_mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_mask.is_empty()
    }

    /// Eigenvalue (±1) on the computational basis state `index`.
    pub fn sign(&self, index: usize) -> f64 {
        let n = self.z_mask.len();
        let parity = self
            .z_mask
            .iter()
            .enumerate()
            .filter(|(q, &z)| z && (index >> (n - 1 - q)) & 1 == 1)
            .count();
        if parity % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl FromStr for ObservableString {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let z_mask = s
            .chars()
            .map(|c| match c {
                'I' => Ok(false),
                'Z' => Ok(true),
                _ => Err(SimError::Observable(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if z_mask.is_empty() {
            return Err(SimError::Observable(s.to_string()));
        }
        Ok(Self { z_mask })
    }
}

impl fmt::Display for ObservableString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &z in &self.z_mask {
            f.write_str(if z { "Z" } else { "I" })?;
        }
        Ok(())
    }
}

pub(crate) fn obs(word: &str) -> ObservableString {
    word.parse().expect("static observable")
}

/// The seven Z-strings whose expectations reconstruct the second-mode
/// particle number, with their weights in that reconstruction (the constant
/// term 1/8 is separate).
pub fn particle_number_terms() -> [(ObservableString, f64); 7] {
    [
        (obs("IIIZ"), 1.0),
        (obs("IIZI"), -1.0),
        (obs("IIZZ"), -1.0),
        (obs("ZZII"), -1.0),
        (obs("ZZIZ"), -1.0),
        (obs("ZZZI"), 1.0),
        (obs("ZZZZ"), 1.0),
    ]
}

/// The seven observables in measurement order.
pub fn particle_number_observables() -> Vec<ObservableString> {
    particle_number_terms().into_iter().map(|(o, _)| o).collect()
}

/// Anything with computational-basis populations: pure and mixed states.
pub trait BasisProbabilities {
    fn n_qubits(&self) -> usize;
    fn basis_probabilities(&self) -> Vec<f64>;
}

impl BasisProbabilities for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }

    fn basis_probabilities(&self) -> Vec<f64> {
        self.probabilities()
    }
}

impl BasisProbabilities for DensityMatrix {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }

    fn basis_probabilities(&self) -> Vec<f64> {
        self.probabilities()
    }
}

pub fn expectation_from_probabilities(probs: &[f64], o: &ObservableString) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| o.sign(i) * p)
        .sum()
}

/// Exact ⟨o⟩ on a pure or mixed state.
pub fn expectation<S: BasisProbabilities + ?Sized>(
    state: &S,
    o: &ObservableString,
) -> Result<f64, SimError> {
    if o.len() != state.n_qubits() {
        return Err(SimError::Dimension(format!(
            "observable {o} on a {}-qubit state",
            state.n_qubits()
        )));
    }
    Ok(expectation_from_probabilities(
        &state.basis_probabilities(),
        o,
    ))
}

/// P(|1010⟩) + P(|0110⟩) rebuilt from the seven Z-string expectations, in the
/// order of [`particle_number_observables`].
pub fn particle_number_from_expectations(values: &[f64]) -> f64 {
    assert_eq!(values.len(), 7, "need the seven particle-number expectations");
    let weighted: f64 = particle_number_terms()
        .iter()
        .zip(values)
        .map(|((_, w), v)| w * v)
        .sum();
    (1.0 + weighted) / 8.0
}

/// Mean number of particles in the second mode, reconstructed from the seven
/// Z-string expectation values.
pub fn particle_number<S: BasisProbabilities + ?Sized>(state: &S) -> Result<f64, SimError> {
    if state.n_qubits() != 4 {
        return Err(SimError::Dimension(format!(
            "particle number needs 4 qubits, got {}",
            state.n_qubits()
        )));
    }
    let probs = state.basis_probabilities();
    let values: Vec<f64> = particle_number_observables()
        .iter()
        .map(|o| expectation_from_probabilities(&probs, o))
        .collect();
    Ok(particle_number_from_expectations(&values))
}

/// Shot-noise estimates of Z-string expectations: draws `shots` basis
/// outcomes from `probs` and averages each observable's eigenvalue.
pub fn sample_expectations<R: Rng + ?Sized>(
    probs: &[f64],
    observables: &[ObservableString],
    shots: usize,
    rng: &mut R,
) -> Result<Vec<f64>, SimError> {
    if shots == 0 {
        return Err(SimError::Sampling("zero shots".into()));
    }
    let weights: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| SimError::Sampling(e.to_string()))?;
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    Ok(observables
        .iter()
        .map(|o| expectation_from_probabilities(&freqs, o))
        .collect())
}
