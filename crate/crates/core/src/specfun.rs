//! Gamma function on the complex plane.
//!
//! The right half-plane uses a 15-term Lanczos series (g = 607/128); the left
//! half-plane goes through the reflection formula. Everything is evaluated in
//! log space first so that products and ratios of Γ values with large
//! imaginary arguments neither overflow nor underflow before they are
//! combined.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// A complex number as used by the special functions and the Bogoliubov layer.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma function pole at z = {0}")]
    Pole(f64),
    #[error("non-finite argument {0}")]
    NonFinite(ComplexValue),
}

const LANCZOS_G_PLUS_HALF: f64 = 5.242_187_5;
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;
const LN_PI: f64 = 1.144_729_885_849_400_2;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

fn check_argument(z: ComplexValue) -> Result<(), SpecFunError> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(SpecFunError::NonFinite(z));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(SpecFunError::Pole(z.re));
    }
    Ok(())
}

/// Γ(z) for complex `z`.
///
/// Conjugate symmetry Γ(z̄) = conj Γ(z) holds exactly: the lower half-plane is
/// evaluated by conjugating the upper one. Arguments whose magnitude lies
/// below the smallest subnormal come back as zero with the phase lost, which
/// is the intended behaviour for the far tails along the imaginary axis.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue, SpecFunError> {
    Ok(ln_gamma(z)?.exp())
}

/// A logarithm of Γ(z).
///
/// This is *a* logarithm, not necessarily the principal branch of log Γ:
/// only `exp(ln_gamma(z)) == Γ(z)` is guaranteed. That is all the Bogoliubov
/// formulas need, since they only exponentiate sums and differences of these.
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue, SpecFunError> {
    check_argument(z)?;
    if z.im < 0.0 {
        return Ok(ln_gamma_upper(z.conj()).conj());
    }
    Ok(ln_gamma_upper(z))
}

// Im z >= 0, z not a pole.
fn ln_gamma_upper(z: ComplexValue) -> ComplexValue {
    if z.re >= 0.5 {
        return ln_gamma_lanczos(z);
    }
    // Γ(z) Γ(1 - z) = π / sin(πz); 1 - z has Re > 1/2 and Im <= 0.
    let reflected = ln_gamma_lanczos((1.0 - z).conj()).conj();
    LN_PI - ln_sin_pi(z) - reflected
}

fn ln_gamma_lanczos(z: ComplexValue) -> ComplexValue {
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (j, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += *c / (z + j as f64);
    }
    let shifted = z + LANCZOS_G_PLUS_HALF;
    (z + 0.5) * shifted.ln() - shifted + (SQRT_TWO_PI * series / z).ln()
}

/// log sin(πz) for Im z >= 0, with the real part reduced to [-1/2, 1/2] so
/// that arguments near the negative integers keep full relative accuracy.
fn ln_sin_pi(z: ComplexValue) -> ComplexValue {
    let n = z.re.round();
    let reduced = Complex64::new(z.re - n, z.im);
    // sin(π(w + n)) = (-1)^n sin(πw)
    let parity = if (n as i64).rem_euclid(2) == 1 {
        Complex64::new(0.0, PI)
    } else {
        Complex64::new(0.0, 0.0)
    };
    if reduced.im < 1.0 {
        return (PI * reduced).sin().ln() + parity;
    }
    // sin(πw) = e^{-iπw} (1 - e^{2iπw}) / (-2i), and |e^{2iπw}| = e^{-2π Im w} is small.
    let i = Complex64::i();
    let decaying = (2.0 * PI * i * reduced).exp();
    -i * PI * reduced + (1.0 - decaying).ln() - (-2.0 * i).ln() + parity
}
