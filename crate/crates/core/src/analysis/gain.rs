use serde::{Deserialize, Serialize};

use super::{DistanceConvention, Scenario};
use crate::bath::ModelSpec;
use crate::dynamics::QubitAmplitudes;
use crate::error::{Error, Result};

/// Initial distances at or below this (in units of |b₊b₋*|) count as zero.
/// Covers γ = 0, where both states coincide up to rounding in C_λ.
const DISTANCE_FLOOR: f64 = 1e-13;

/// D_∞ / D_0, or `Undefined` when the initial distance vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainRatio {
    Value(f64),
    Undefined,
}

impl GainRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            GainRatio::Value(v) => Some(v),
            GainRatio::Undefined => None,
        }
    }
}

/// Ratio of the long-time distance to the initial distance for states with
/// correlations λ₁ and λ₂. The amplitude factor |b₊b₋*| cancels, so the
/// result does not depend on the amplitudes.
pub fn gain_ratio(model: &ModelSpec, lambda1: f64, lambda2: f64) -> Result<GainRatio> {
    let scenario = Scenario::new(*model, lambda1, lambda2, QubitAmplitudes::balanced())?;
    scenario_gain_ratio(&scenario)
}

pub(crate) fn scenario_gain_ratio(scenario: &Scenario) -> Result<GainRatio> {
    if scenario.lambda1 == scenario.lambda2 {
        return Ok(GainRatio::Undefined);
    }
    let d0 = scenario.initial_distance(DistanceConvention::Normalized)?;
    if d0 <= DISTANCE_FLOOR {
        return Ok(GainRatio::Undefined);
    }
    let dinf = scenario.long_time_distance(DistanceConvention::Normalized)?;
    Ok(GainRatio::Value(dinf / d0))
}

/// Which of the two correlations is varied in a critical-point search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationSlot {
    Lambda1,
    Lambda2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCorrelation {
    pub lambda_c: f64,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
    pub iterations: usize,
}

/// λ_c for λ₁ at fixed λ₂: gain below λ_c, loss above.
pub fn find_lambda_c(
    model: &ModelSpec,
    lambda2: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<CriticalCorrelation> {
    find_critical_correlation(model, CorrelationSlot::Lambda1, lambda2, bracket, tol)
}

/// Bisects the varied correlation until the gain ratio crosses 1 within `tol`.
///
/// The bracket must show gain (ratio > 1) at its lower end and loss
/// (ratio < 1) at its upper end, otherwise [`Error::NoBracket`] is returned.
pub fn find_critical_correlation(
    model: &ModelSpec,
    vary: CorrelationSlot,
    fixed: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<CriticalCorrelation> {
    let (mut lo, mut hi) = bracket;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || !(lo < hi) {
        return Err(Error::domain(format!(
            "bracket must satisfy 0 <= lo < hi <= 1, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let ratio = |l: f64| -> Result<GainRatio> {
        match vary {
            CorrelationSlot::Lambda1 => gain_ratio(model, l, fixed),
            CorrelationSlot::Lambda2 => gain_ratio(model, fixed, l),
        }
    };
    let ratio_lo = ratio(lo)?.value();
    let ratio_hi = ratio(hi)?.value();
    match (ratio_lo, ratio_hi) {
        (Some(a), Some(b)) if a > 1.0 && b < 1.0 => {}
        _ => return Err(Error::NoBracket { ratio_lo, ratio_hi }),
    }

    let mut iterations = 0;
    while 0.5 * (hi - lo) > tol {
        let mid = 0.5 * (lo + hi);
        match ratio(mid)? {
            GainRatio::Value(v) if v > 1.0 => lo = mid,
            GainRatio::Value(_) => hi = mid,
            GainRatio::Undefined => {
                return Err(Error::domain(format!(
                    "gain ratio undefined at {mid} inside the bracket"
                )))
            }
        }
        iterations += 1;
    }
    Ok(CriticalCorrelation {
        lambda_c: 0.5 * (lo + hi),
        ratio_lo: ratio_lo.unwrap_or(f64::NAN),
        ratio_hi: ratio_hi.unwrap_or(f64::NAN),
        iterations,
    })
}
