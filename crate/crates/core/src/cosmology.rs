//! Scale factor, asymptotic mode frequencies, Bogoliubov coefficients and the
//! closed-form particle numbers for a field on a `A + B tanh(ρη)` background.

use num_complex::Complex64;
use thiserror::Error;

use crate::specfun::{self, ComplexValue, SpecFunError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CosmologyError {
    #[error("metric requires A > |B| (got A = {a}, B = {b})")]
    InvalidMetric { a: f64, b: f64 },
    #[error("expansion rate must be positive and finite (got {0})")]
    InvalidRate(f64),
    #[error("field mass must be non-negative (got {0})")]
    NegativeMass(f64),
    #[error("evolution time must be non-negative (got {0})")]
    NegativeTime(f64),
    #[error("mode frequency is not real and positive: k² + m²C = {0}")]
    NonPositiveFrequency(f64),
    #[error(transparent)]
    Gamma(#[from] SpecFunError),
}

/// Physical knobs of the model. `a`, `b` are the metric offset and amplitude,
/// `rho` the expansion rate, `momentum` the mode momentum and `time` the
/// evolution time after the expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosmologyParams {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub mass: f64,
    pub momentum: f64,
    pub time: f64,
}

impl CosmologyParams {
    pub fn new(
        a: f64,
        b: f64,
        rho: f64,
        mass: f64,
        momentum: f64,
        time: f64,
    ) -> Result<Self, CosmologyError> {
        let params = Self {
            a,
            b,
            rho,
            mass,
            momentum,
            time,
        };
        params.validate()?;
        Ok(params)
    }

    /// A = 1.5, B = 0.5, m = 1, k = 1, t = 1 at the given expansion rate: a
    /// universe going from C = 1 to C = 2.
    pub fn standard(rho: f64) -> Self {
        Self {
            a: 1.5,
            b: 0.5,
            rho,
            mass: 1.0,
            momentum: 1.0,
            time: 1.0,
        }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        Self { rho, ..self }
    }

    pub fn with_time(self, time: f64) -> Self {
        Self { time, ..self }
    }

    pub fn validate(&self) -> Result<(), CosmologyError> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a > self.b.abs()) {
            return Err(CosmologyError::InvalidMetric {
                a: self.a,
                b: self.b,
            });
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(CosmologyError::InvalidRate(self.rho));
        }
        if !(self.mass >= 0.0) {
            return Err(CosmologyError::NegativeMass(self.mass));
        }
        if !(self.time >= 0.0) {
            return Err(CosmologyError::NegativeTime(self.time));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies {
    pub omega_in: f64,
    pub omega_out: f64,
    pub omega_plus: f64,
    /// Negative for a contracting background (B < 0).
    pub omega_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair {
    pub alpha: ComplexValue,
    pub beta: ComplexValue,
}

impl BogoliubovPair {
    /// α β*, the coupling that sets every rotation angle of the circuit.
    pub fn coupling(&self) -> ComplexValue {
        self.alpha * self.beta.conj()
    }
}

/// C(η) = A + B tanh(ρη).
pub fn scale_factor(params: &CosmologyParams, eta: f64) -> f64 {
    params.a + params.b * (params.rho * eta).tanh()
}

pub fn frequencies(params: &CosmologyParams) -> Result<ModeFrequencies, CosmologyError> {
    let k2 = params.momentum * params.momentum;
    let m2 = params.mass * params.mass;
    let radicand_in = k2 + m2 * (params.a - params.b);
    let radicand_out = k2 + m2 * (params.a + params.b);
    for r in [radicand_in, radicand_out] {
        if !(r > 0.0) {
            return Err(CosmologyError::NonPositiveFrequency(r));
        }
    }
    let omega_in = radicand_in.sqrt();
    let omega_out = radicand_out.sqrt();
    Ok(ModeFrequencies {
        omega_in,
        omega_out,
        omega_plus: 0.5 * (omega_out + omega_in),
        omega_minus: 0.5 * (omega_out - omega_in),
    })
}

/// In/out Bogoliubov coefficients from the Γ-function expressions.
///
/// Each coefficient is assembled as the exponential of a sum of log-Γ terms,
/// so |β| underflows cleanly to zero for slow expansions instead of producing
/// `inf/inf`. When ω₋ vanishes (no expansion, or a massless field) β is
/// exactly zero.
pub fn bogoliubov(params: &CosmologyParams) -> Result<BogoliubovPair, CosmologyError> {
    params.validate()?;
    let f = frequencies(params)?;
    let rho = params.rho;
    let i = Complex64::i();
    let lg = specfun::ln_gamma;

    let ln_prefactor = Complex64::new(0.5 * (f.omega_out / f.omega_in).ln(), 0.0);
    let ln_gamma_in = lg(1.0 - i * (f.omega_in / rho))?;

    let ln_alpha = ln_prefactor + ln_gamma_in + lg(-i * (f.omega_out / rho))?
        - lg(-i * (f.omega_plus / rho))?
        - lg(1.0 - i * (f.omega_plus / rho))?;
    let alpha = ln_alpha.exp();

    if f.omega_minus.abs() < 1e-14 * f.omega_plus {
        return Ok(BogoliubovPair {
            alpha,
            beta: Complex64::new(0.0, 0.0),
        });
    }

    let ln_beta = ln_prefactor + ln_gamma_in + lg(i * (f.omega_out / rho))?
        - lg(i * (f.omega_minus / rho))?
        - lg(1.0 + i * (f.omega_minus / rho))?;
    Ok(BogoliubovPair {
        alpha,
        beta: ln_beta.exp(),
    })
}

/// Two-mode squeezing strength r = 2|α||β| ω_out t.
pub fn squeezing_parameter(params: &CosmologyParams) -> Result<f64, CosmologyError> {
    let bog = bogoliubov(params)?;
    let f = frequencies(params)?;
    Ok(2.0 * bog.alpha.norm() * bog.beta.norm() * f.omega_out * params.time)
}

/// Mean particle number per mode for an unbounded bosonic mode: sinh²(r).
pub fn n_expected_full(params: &CosmologyParams) -> Result<f64, CosmologyError> {
    let r = squeezing_parameter(params)?;
    Ok(r.sinh().powi(2))
}

/// Mean particle number when each mode holds at most one excitation:
/// tanh²(r) / (1 + tanh²(r)).
pub fn n_expected_truncated(params: &CosmologyParams) -> Result<f64, CosmologyError> {
    let r = squeezing_parameter(params)?;
    let t2 = r.tanh().powi(2);
    Ok(t2 / (1.0 + t2))
}

/// Occupation probabilities p_n = tanh^{2n}(r) / cosh²(r) of the single-mode
/// thermal state, for n = 0..=n_max.
pub fn thermal_distribution(
    params: &CosmologyParams,
    n_max: usize,
) -> Result<Vec<f64>, CosmologyError> {
    let r = squeezing_parameter(params)?;
    Ok(thermal_weights(r, n_max))
}

pub(crate) fn thermal_weights(r: f64, n_max: usize) -> Vec<f64> {
    let ratio = r.tanh().powi(2);
    let mut p = 1.0 / r.cosh().powi(2);
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        out.push(p);
        p *= ratio;
    }
    out
}
