//! Depolarizing noise on a density-matrix backend, global unitary folding and
//! zero-noise extrapolation.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::paulicompile::{Circuit, CompileError, Gate};
use crate::simcore::{
    expectation, init_state, DensityMatrix, Mat2, ObservableString, SimError, PAULI_X, PAULI_Y,
    PAULI_Z,
};

/// Two-qubit depolarizing probability per gate used by default.
pub const DEFAULT_EPS2: f64 = 6.741e-3;
/// One-qubit depolarizing probability per gate used by default.
pub const DEFAULT_EPS1: f64 = 4.238e-4;

#[derive(Debug, Error)]
pub enum MitigationError {
    #[error("depolarizing probability {0} outside [0, 1)")]
    InvalidNoise(f64),
    #[error("invalid scale factors: {0}")]
    InvalidScales(String),
    #[error("{method} extrapolation needs at least {need} points, got {got}")]
    TooFewPoints {
        method: Extrapolator,
        need: usize,
        got: usize,
    },
    #[error("extrapolation points must have distinct scales")]
    DuplicateScale,
    #[error("non-finite extrapolation input or result")]
    NonFinite,
    #[error("unknown extrapolator {0:?}")]
    UnknownExtrapolator(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Per-gate depolarizing probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub eps1: f64,
    pub eps2: f64,
}

impl NoiseModel {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self, MitigationError> {
        let m = Self { eps1, eps2 };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self { eps1: 0.0, eps2: 0.0 }
    }

    pub fn validate(&self) -> Result<(), MitigationError> {
        for eps in [self.eps1, self.eps2] {
            if !(0.0..1.0).contains(&eps) {
                return Err(MitigationError::InvalidNoise(eps));
            }
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            eps1: DEFAULT_EPS1,
            eps2: DEFAULT_EPS2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extrapolator {
    Linear,
    RichardsonQuadratic,
    Exponential,
}

impl Extrapolator {
    fn min_points(self) -> usize {
        match self {
            Extrapolator::Linear => 2,
            Extrapolator::RichardsonQuadratic | Extrapolator::Exponential => 3,
        }
    }
}

impl fmt::Display for Extrapolator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extrapolator::Linear => "linear",
            Extrapolator::RichardsonQuadratic => "richardson-quadratic",
            Extrapolator::Exponential => "exponential",
        })
    }
}

impl FromStr for Extrapolator {
    type Err = MitigationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Extrapolator::Linear),
            "richardson-quadratic" | "richardson" | "quadratic" => {
                Ok(Extrapolator::RichardsonQuadratic)
            }
            "exponential" | "exp" => Ok(Extrapolator::Exponential),
            _ => Err(MitigationError::UnknownExtrapolator(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZneConfig {
    pub scale_factors: Vec<u32>,
    pub extrapolator: Extrapolator,
}

impl ZneConfig {
    pub fn new(scale_factors: Vec<u32>, extrapolator: Extrapolator) -> Result<Self, MitigationError> {
        let cfg = Self {
            scale_factors,
            extrapolator,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), MitigationError> {
        let s = &self.scale_factors;
        if s.first() != Some(&1) {
            return Err(MitigationError::InvalidScales(
                "first scale factor must be 1".into(),
            ));
        }
        if let Some(even) = s.iter().find(|&&k| k % 2 == 0) {
            return Err(MitigationError::InvalidScales(format!("{even} is even")));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MitigationError::InvalidScales(
                "scale factors must be strictly increasing".into(),
            ));
        }
        let need = self.extrapolator.min_points();
        if s.len() < need {
            return Err(MitigationError::TooFewPoints {
                method: self.extrapolator,
                need,
                got: s.len(),
            });
        }
        Ok(())
    }
}

impl Default for ZneConfig {
    fn default() -> Self {
        Self {
            scale_factors: vec![1, 3, 5],
            extrapolator: Extrapolator::RichardsonQuadratic,
        }
    }
}

const IDENTITY: Mat2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

fn depolarize_one(rho: &mut DensityMatrix, q: usize, eps: f64) {
    if eps == 0.0 {
        return;
    }
    let mut twirl = DMatrix::zeros(rho.dim(), rho.dim());
    for p in [PAULI_X, PAULI_Y, PAULI_Z] {
        let mut d = rho.clone();
        d.conjugate_single(q, &p);
        twirl += d.matrix();
    }
    rho.mix_with(&(twirl / Complex64::new(3.0, 0.0)), eps);
}

fn depolarize_two(rho: &mut DensityMatrix, a: usize, b: usize, eps: f64) {
    if eps == 0.0 {
        return;
    }
    let paulis = [IDENTITY, PAULI_X, PAULI_Y, PAULI_Z];
    let mut twirl = DMatrix::zeros(rho.dim(), rho.dim());
    for (i, pa) in paulis.iter().enumerate() {
        let mut da = rho.clone();
        if i > 0 {
            da.conjugate_single(a, pa);
        }
        for (j, pb) in paulis.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            let mut d = da.clone();
            if j > 0 {
                d.conjugate_single(b, pb);
            }
            twirl += d.matrix();
        }
    }
    rho.mix_with(&(twirl / Complex64::new(15.0, 0.0)), eps);
}

/// Applies `gate` and then the depolarizing channel on its support.
pub fn apply_noisy_gate(rho: &mut DensityMatrix, gate: &Gate, noise: &NoiseModel) {
    rho.apply_gate(gate);
    match *gate {
        Gate::Cnot { control, target } => depolarize_two(rho, control, target, noise.eps2),
        Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => {
            depolarize_one(rho, q, noise.eps1)
        }
    }
}

/// Density-matrix evolution of `bitstring` through `c`, every gate followed by
/// depolarizing noise.
pub fn run_noisy(
    c: &Circuit,
    bitstring: &str,
    noise: &NoiseModel,
) -> Result<DensityMatrix, MitigationError> {
    noise.validate()?;
    let initial = init_state(c.n_qubits(), bitstring)?;
    let mut rho = DensityMatrix::from_state(&initial);
    for g in c.gates() {
        apply_noisy_gate(&mut rho, g, noise);
    }
    Ok(rho)
}

/// Global folding C (C†C)^((scale−1)/2).
pub fn fold_circuit(c: &Circuit, scale: u32) -> Result<Circuit, MitigationError> {
    if scale == 0 || scale.is_multiple_of(2) {
        return Err(MitigationError::InvalidScales(format!(
            "fold scale {scale} is not a positive odd integer"
        )));
    }
    let inverse = c.inverse();
    let mut out = c.clone();
    for _ in 0..(scale - 1) / 2 {
        out.extend(&inverse)?;
        out.extend(c)?;
    }
    Ok(out)
}

/// Zero-noise estimate plus how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ZneEstimate {
    pub value: f64,
    pub method_used: Extrapolator,
    /// Set when the requested fit failed and a fallback was used.
    pub warning: Option<String>,
}

/// Least-squares polynomial of the given degree, evaluated at 0.
fn polyfit_at_zero(points: &[(f64, f64)], degree: usize) -> Option<f64> {
    let n = points.len();
    let design = DMatrix::from_fn(n, degree + 1, |i, j| points[i].0.powi(j as i32));
    let rhs = DVector::from_iterator(n, points.iter().map(|p| p.1));
    let coeffs = design.svd(true, true).solve(&rhs, 1e-14).ok()?;
    Some(coeffs[0])
}

/// Linear least squares for v ≈ a + b·exp(−c·s) at fixed c; returns
/// (a, b, residual sum of squares).
fn exp_linear_part(points: &[(f64, f64)], c: f64) -> Option<(f64, f64, f64)> {
    let n = points.len();
    let design = DMatrix::from_fn(n, 2, |i, j| {
        if j == 0 {
            1.0
        } else {
            (-c * points[i].0).exp()
        }
    });
    let rhs = DVector::from_iterator(n, points.iter().map(|p| p.1));
    let ab = design.clone().svd(true, true).solve(&rhs, 1e-14).ok()?;
    let rss = (design * &ab - rhs).norm_squared();
    Some((ab[0], ab[1], rss))
}

const LN_C_MIN: f64 = -12.0;
const LN_C_MAX: f64 = 6.0;

/// Variable projection: scan ln c, then golden-section refine around the best
/// grid cell. `None` for non-monotone data or when the optimum sits on the
/// search boundary.
fn exponential_fit(points: &[(f64, f64)]) -> Option<f64> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|p, q| p.0.total_cmp(&q.0));
    let diffs: Vec<f64> = sorted.windows(2).map(|w| w[1].1 - w[0].1).collect();
    if !(diffs.iter().all(|&d| d >= 0.0) || diffs.iter().all(|&d| d <= 0.0)) {
        return None;
    }
    let rss = |lnc: f64| exp_linear_part(points, lnc.exp()).map_or(f64::INFINITY, |r| r.2);
    let steps = 720;
    let h = (LN_C_MAX - LN_C_MIN) / steps as f64;
    let grid: Vec<f64> = (0..=steps).map(|k| rss(LN_C_MIN + k as f64 * h)).collect();
    let best = (0..=steps).min_by(|&i, &j| grid[i].total_cmp(&grid[j]))?;
    if best == 0 || best == steps {
        return None;
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (LN_C_MIN + (best - 1) as f64 * h, LN_C_MIN + (best + 1) as f64 * h);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (rss(x1), rss(x2));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rss(x2);
        }
    }
    let lnc = 0.5 * (lo + hi);
    let (a, b, _) = exp_linear_part(points, lnc.exp())?;
    let v = a + b;
    v.is_finite().then_some(v)
}

/// Extrapolates (scale, value) pairs to scale 0.
pub fn zne_extrapolate(
    points: &[(f64, f64)],
    method: Extrapolator,
) -> Result<ZneEstimate, MitigationError> {
    let need = method.min_points();
    if points.len() < need {
        return Err(MitigationError::TooFewPoints {
            method,
            need,
            got: points.len(),
        });
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(MitigationError::NonFinite);
    }
    let mut scales: Vec<f64> = points.iter().map(|p| p.0).collect();
    scales.sort_by(f64::total_cmp);
    if scales.windows(2).any(|w| w[0] == w[1]) {
        return Err(MitigationError::DuplicateScale);
    }
    let finite = |v: Option<f64>| v.filter(|x| x.is_finite()).ok_or(MitigationError::NonFinite);
    match method {
        Extrapolator::Linear => Ok(ZneEstimate {
            value: finite(polyfit_at_zero(points, 1))?,
            method_used: method,
            warning: None,
        }),
        Extrapolator::RichardsonQuadratic => Ok(ZneEstimate {
            value: finite(polyfit_at_zero(points, 2))?,
            method_used: method,
            warning: None,
        }),
        Extrapolator::Exponential => {
            let v0 = points[0].1;
            let spread = points.iter().map(|p| (p.1 - v0).abs()).fold(0.0, f64::max);
            if spread <= 1e-12 * v0.abs().max(1.0) {
                return Ok(ZneEstimate {
                    value: v0,
                    method_used: method,
                    warning: None,
                });
            }
            match exponential_fit(points) {
                Some(value) => Ok(ZneEstimate {
                    value,
                    method_used: method,
                    warning: None,
                }),
                None => Ok(ZneEstimate {
                    value: finite(polyfit_at_zero(points, 1))?,
                    method_used: Extrapolator::Linear,
                    warning: Some("exponential fit did not converge; linear fallback".into()),
                }),
            }
        }
    }
}

/// Noisy density matrices of the folded circuit at each configured scale,
/// starting from |0…0⟩.
pub fn run_scaled(
    c: &Circuit,
    noise: &NoiseModel,
    cfg: &ZneConfig,
) -> Result<Vec<DensityMatrix>, MitigationError> {
    cfg.validate()?;
    let zeros = "0".repeat(c.n_qubits());
    cfg.scale_factors
        .iter()
        .map(|&s| run_noisy(&fold_circuit(c, s)?, &zeros, noise))
        .collect()
}

/// Extrapolates each observable separately from states already produced by
/// [`run_scaled`] with the same `cfg`.
pub fn extrapolate_observables(
    states: &[DensityMatrix],
    observables: &[ObservableString],
    cfg: &ZneConfig,
) -> Result<Vec<ZneEstimate>, MitigationError> {
    if states.len() != cfg.scale_factors.len() {
        return Err(MitigationError::InvalidScales(format!(
            "{} states for {} scale factors",
            states.len(),
            cfg.scale_factors.len()
        )));
    }
    observables
        .iter()
        .map(|o| {
            let points = cfg
                .scale_factors
                .iter()
                .zip(states)
                .map(|(&s, rho)| Ok((f64::from(s), expectation(rho, o)?)))
                .collect::<Result<Vec<_>, SimError>>()?;
            zne_extrapolate(&points, cfg.extrapolator)
        })
        .collect()
}

/// ZNE estimates of several observables; the circuit must prepare its own
/// input from |0…0⟩.
pub fn mitigated_expectations(
    c: &Circuit,
    observables: &[ObservableString],
    noise: &NoiseModel,
    cfg: &ZneConfig,
) -> Result<Vec<ZneEstimate>, MitigationError> {
    let states = run_scaled(c, noise, cfg)?;
    extrapolate_observables(&states, observables, cfg)
}

/// ZNE estimate of a single observable.
pub fn mitigated_observable(
    c: &Circuit,
    obs: &ObservableString,
    noise: &NoiseModel,
    cfg: &ZneConfig,
) -> Result<f64, MitigationError> {
    let est = mitigated_expectations(c, std::slice::from_ref(obs), noise, cfg)?;
    Ok(est[0].value)
}

/// Probability that no gate fails, exp(−(n₂ε₂ + n₁ε₁)).
pub fn survival_factor(two_qubit: usize, eps2: f64, one_qubit: usize, eps1: f64) -> f64 {
    (-(two_qubit as f64 * eps2 + one_qubit as f64 * eps1)).exp()
}

/// Expected error 1 − exp(−(n₂ε₂ + n₁ε₁)) of an unmitigated run.
pub fn error_estimate(two_qubit: usize, eps2: f64, one_qubit: usize, eps1: f64) -> f64 {
    -(-(two_qubit as f64 * eps2 + one_qubit as f64 * eps1)).exp_m1()
}
