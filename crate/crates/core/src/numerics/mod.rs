//! Special functions and quadrature primitives.

mod gamma;
mod kernel;
mod quadrature;

pub use gamma::gamma;
pub use kernel::{decay_kernel, decay_kernel_limit, sine_kernel, KernelArgs};
pub use quadrature::{
    integrate_semi_infinite, integrate_semi_infinite_estimate, Estimate, QuadratureSettings,
    SemiInfiniteIntegrand,
};

use crate::error::{Error, Result};

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

fn check_quadrature_args(args: &KernelArgs) -> Result<()> {
    if !(args.p > -1.0) || !args.p.is_finite() {
        return Err(Error::domain(format!(
            "kernel exponent must satisfy p > -1, got {}",
            args.p
        )));
    }
    if !(args.c >= 0.0) || !(args.omega_c > 0.0) || !(args.t >= 0.0) || !args.t.is_finite() {
        return Err(Error::domain(format!("invalid kernel arguments {args:?}")));
    }
    Ok(())
}

/// Decay kernel by direct quadrature of c ∫ ω^{p−1} e^{−ω/ω_c} (1 − cos ωt) dω.
///
/// Valid for every p > −1. The factor (1 − cos ωt) is folded into the smooth
/// part as ω²·(t²/2) sinc²(ωt/2), lifting the endpoint exponent to p + 2.
pub fn decay_kernel_quadrature(args: KernelArgs, settings: &QuadratureSettings) -> Result<f64> {
    check_quadrature_args(&args)?;
    let KernelArgs { c, p, omega_c, t } = args;
    if t == 0.0 || c == 0.0 {
        return Ok(0.0);
    }
    let smooth = move |w: f64| {
        let s = sinc(0.5 * w * t);
        c * (-w / omega_c).exp() * 0.5 * t * t * s * s
    };
    let f = SemiInfiniteIntegrand::new(p + 2.0, omega_c, smooth).with_frequency(t);
    integrate_semi_infinite(&f, settings)
}

/// Sine kernel by direct quadrature of c ∫ ω^{p−1} e^{−ω/ω_c} sin ωt dω, p > −1.
pub fn sine_kernel_quadrature(args: KernelArgs, settings: &QuadratureSettings) -> Result<f64> {
    check_quadrature_args(&args)?;
    let KernelArgs { c, p, omega_c, t } = args;
    if t == 0.0 || c == 0.0 {
        return Ok(0.0);
    }
    let smooth = move |w: f64| c * (-w / omega_c).exp() * t * sinc(w * t);
    let f = SemiInfiniteIntegrand::new(p + 1.0, omega_c, smooth).with_frequency(t);
    integrate_semi_infinite(&f, settings)
}

/// c ∫ ω^{p−1} e^{−ω/ω_c} dω by quadrature, p > 0.
///
/// This is the t → ∞ value of the decay kernel and the squared norm of the
/// displacement profile.
pub fn power_exponential_quadrature(
    c: f64,
    p: f64,
    omega_c: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Divergent(format!(
            "∫ ω^(p-1) e^(-ω/ω_c) diverges for p = {p}"
        )));
    }
    if !(c >= 0.0) || !(omega_c > 0.0) {
        return Err(Error::domain("prefactor must be >= 0 and cutoff > 0"));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let f = SemiInfiniteIntegrand::new(p, omega_c, move |w: f64| c * (-w / omega_c).exp());
    integrate_semi_infinite(&f, settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_kernel_matches_frozen_value() {
        let s = QuadratureSettings::default();
        let v = decay_kernel_quadrature(KernelArgs::new(1.0, 0.5, 1.0, 1.0), &s).unwrap();
        assert!((v - 0.395_457_519_052_362_6).abs() < 1e-10);
    }

    #[test]
    fn quadrature_kernel_handles_subohmic_exponents() {
        // p = -0.5 is outside the closed form but the integral converges.
        let s = QuadratureSettings::default();
        let v = decay_kernel_quadrature(KernelArgs::new(1.0, -0.5, 1.0, 2.0), &s).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(decay_kernel(KernelArgs::new(1.0, -0.5, 1.0, 2.0)).is_err());
    }

    #[test]
    fn quadrature_limit_matches_gamma() {
        let s = QuadratureSettings::default();
        let v = power_exponential_quadrature(1.0, 0.05, 1.0, &s).unwrap();
        let g = gamma(0.05).unwrap();
        assert!((v / g - 1.0).abs() < 1e-8);
    }
}
