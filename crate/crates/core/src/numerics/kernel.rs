//! Closed form of the decay kernel
//!
//! K(c, p, ω_c, t) = c ∫₀^∞ ω^{p−1} e^{−ω/ω_c} (1 − cos ωt) dω
//!                 = c Γ(p) ω_c^p [1 − cos(p θ) / (1 + ω_c²t²)^{p/2}],  θ = arctan(ω_c t),
//!
//! and its sine companion S(c, p, ω_c, t) = c ∫₀^∞ ω^{p−1} e^{−ω/ω_c} sin ωt dω.

use crate::error::{Error, Result};
use crate::numerics::gamma::gamma_unchecked;

/// Arguments of the decay kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    /// Prefactor c ≥ 0.
    pub c: f64,
    /// Exponent parameter p; the closed form needs p ≥ 0 (p = 0 is the ohmic limit).
    pub p: f64,
    /// Cutoff frequency ω_c > 0.
    pub omega_c: f64,
    /// Time t ≥ 0.
    pub t: f64,
}

impl KernelArgs {
    pub fn new(c: f64, p: f64, omega_c: f64, t: f64) -> Self {
        KernelArgs { c, p, omega_c, t }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0) || !self.c.is_finite() {
            return Err(Error::domain(format!(
                "kernel prefactor must be >= 0, got {}",
                self.c
            )));
        }
        if !(self.omega_c > 0.0) || !self.omega_c.is_finite() {
            return Err(Error::domain(format!(
                "cutoff must be > 0, got {}",
                self.omega_c
            )));
        }
        if !(self.t >= 0.0) {
            return Err(Error::domain(format!("time must be >= 0, got {}", self.t)));
        }
        if !(self.p > -1.0) || !self.p.is_finite() {
            return Err(Error::domain(format!(
                "kernel exponent must satisfy p > -1, got {}",
                self.p
            )));
        }
        if self.p < 0.0 {
            return Err(Error::domain(format!(
                "closed-form kernel needs p >= 0 (got {}); use the quadrature backend",
                self.p
            )));
        }
        Ok(())
    }
}

/// Returns (θ, ½ ln(1 + x²)) for x = ω_c t without overflowing for huge x.
fn angle_and_log_modulus(x: f64) -> (f64, f64) {
    let theta = x.atan();
    let half_log = if x > 1.0 {
        x.ln() + 0.5 * (1.0 / (x * x)).ln_1p()
    } else {
        0.5 * (x * x).ln_1p()
    };
    (theta, half_log)
}

/// Closed-form decay kernel.
///
/// The bracket 1 − cos(pθ) e^{−pL} is evaluated as
/// −expm1(−pL) + e^{−pL}·2 sin²(pθ/2), which has no cancellation for small p,
/// so the same expression serves the whole range p > 0. At p = 0 the kernel
/// takes its limit (c/2) ln(1 + ω_c²t²).
pub fn decay_kernel(args: KernelArgs) -> Result<f64> {
    args.validate()?;
    let KernelArgs { c, p, omega_c, t } = args;
    if t == 0.0 || c == 0.0 {
        return Ok(0.0);
    }
    let (theta, half_log) = angle_and_log_modulus(omega_c * t);
    if p == 0.0 {
        return Ok(c * half_log);
    }
    let damping = (-p * half_log).exp();
    let half_angle = (0.5 * p * theta).sin();
    let bracket = -(-p * half_log).exp_m1() + damping * 2.0 * half_angle * half_angle;
    Ok(c * gamma_unchecked(p) * omega_c.powf(p) * bracket)
}

/// Limit of [`decay_kernel`] as t → ∞: c Γ(p) ω_c^p, defined for p > 0.
pub fn decay_kernel_limit(c: f64, p: f64, omega_c: f64) -> Result<f64> {
    KernelArgs::new(c, p, omega_c, 0.0).validate()?;
    if p == 0.0 {
        return Err(Error::Divergent(
            "kernel grows without bound for p = 0".into(),
        ));
    }
    Ok(c * gamma_unchecked(p) * omega_c.powf(p))
}

/// Closed-form sine kernel c Γ(p) ω_c^p sin(pθ) / (1 + ω_c²t²)^{p/2}.
pub fn sine_kernel(args: KernelArgs) -> Result<f64> {
    args.validate()?;
    let KernelArgs { c, p, omega_c, t } = args;
    if t == 0.0 || c == 0.0 {
        return Ok(0.0);
    }
    let (theta, half_log) = angle_and_log_modulus(omega_c * t);
    if p == 0.0 {
        // Γ(p) sin(pθ) → θ
        return Ok(c * theta);
    }
    Ok(c * gamma_unchecked(p) * omega_c.powf(p) * (p * theta).sin() * (-p * half_log).exp())
}
