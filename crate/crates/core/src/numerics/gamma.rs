//! Euler gamma function on the positive real axis.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for finite `x > 0`.
///
/// Relative error stays below 1e-13 on (0, 50]. Arguments below 1/2 are
/// shifted up with Γ(x) = Γ(x + 1) / x so tiny arguments keep full precision.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!(
            "gamma requires finite x > 0, got {x}"
        )));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 20.0 {
        // exact factorials
        return (1..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        return lanczos(x + 1.0) / x;
    }
    lanczos(x)
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let series = LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| {
            acc + c / (x + (i + 1) as f64)
        });
    let w = x + LANCZOS_G + 0.5;
    // split the power so w^(x+1/2) cannot overflow before e^-w is applied
    let half = w.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-w).exp() * half * series
}
