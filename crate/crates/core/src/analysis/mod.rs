//! Time series, long-time gain ratios, the critical correlation, region maps
//! and distance extrema for pairs of states that differ only in λ.

mod extremum;
mod gain;
mod region;

pub use extremum::{find_extremum, Extremum, ExtremumKind};
pub use gain::{
    find_critical_correlation, find_lambda_c, gain_ratio, CorrelationSlot, CriticalCorrelation,
    GainRatio,
};
pub use region::{
    region_map, Axis, AxisRange, BoundaryPoint, CellLabel, Param, RegionMap, RegionRequest,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{ground_coherent_overlap, profile_at, profile_limit, Backend, ModelSpec};
use crate::dynamics::{
    coherence_factor, distance_same_amplitudes, pair_weights, PairWeights, QubitAmplitudes,
};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSettings;

/// Whether distances are reported as-is or divided by |b₊b₋*|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceConvention {
    #[default]
    Raw,
    Normalized,
}

/// Two initial states with common amplitudes and correlations λ₁, λ₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub model: ModelSpec,
    pub lambda1: f64,
    pub lambda2: f64,
    pub amplitudes: QubitAmplitudes,
}

impl Scenario {
    pub fn new(
        model: ModelSpec,
        lambda1: f64,
        lambda2: f64,
        amplitudes: QubitAmplitudes,
    ) -> Result<Self> {
        let s = Scenario {
            model,
            lambda1,
            lambda2,
            amplitudes,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        for (name, l) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::domain(format!("{name} must lie in [0, 1], got {l}")));
            }
        }
        let zero = num_complex::Complex64::new(0.0, 0.0);
        if self.amplitudes.b_plus == zero || self.amplitudes.b_minus == zero {
            return Err(Error::domain(
                "correlated scenarios need non-zero b+ and b-",
            ));
        }
        Ok(())
    }

    pub fn overlap(&self) -> Result<f64> {
        ground_coherent_overlap(&self.model.displacement, self.model.omega_c())
    }

    pub fn weights(&self) -> Result<PairWeights> {
        pair_weights(self.lambda1, self.lambda2, self.overlap()?)
    }

    fn scale(&self, convention: DistanceConvention) -> f64 {
        match convention {
            DistanceConvention::Raw => self.amplitudes.coherence_scale(),
            DistanceConvention::Normalized => 1.0,
        }
    }

    /// One series sample at time `t`.
    pub fn point(
        &self,
        t: f64,
        backend: Backend,
        settings: &QuadratureSettings,
        convention: DistanceConvention,
    ) -> Result<SeriesPoint> {
        let profile = profile_at(&self.model, t, backend, settings)?;
        let overlap = self.overlap()?;
        let w = pair_weights(self.lambda1, self.lambda2, overlap)?;
        let eps = self.model.epsilon;
        let a1 = coherence_factor(self.lambda1, &profile, eps, overlap)?;
        let a2 = coherence_factor(self.lambda2, &profile, eps, overlap)?;
        Ok(SeriesPoint {
            t,
            distance: distance_same_amplitudes(&w, &profile, self.scale(convention)),
            abs_a1: a1.norm(),
            abs_a2: a2.norm(),
            r: profile.r,
            s: profile.s,
            phi: profile.phi,
        })
    }

    /// Distance at t = 0.
    pub fn initial_distance(&self, convention: DistanceConvention) -> Result<f64> {
        let w = self.weights()?;
        Ok(self.scale(convention) * (w.a + w.b * self.overlap()?).abs())
    }

    /// Distance of the long-time limit states, from the analytic limit profile.
    /// Zero when μ ≤ 0, where every coherence decays completely.
    pub fn long_time_distance(&self, convention: DistanceConvention) -> Result<f64> {
        let w = self.weights()?;
        match profile_limit(&self.model) {
            Ok(lim) => Ok(distance_same_amplitudes(&w, &lim, self.scale(convention))),
            Err(Error::Divergent(_)) => Ok(0.0),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Linear,
    Log,
}

/// Strictly increasing sampling times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub kind: GridKind,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(kind: GridKind, t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        let g = TimeGrid {
            kind,
            t_min,
            t_max,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    /// 400 log-spaced points over [1e-3, 1e4] / ω_c.
    pub fn default_for(omega_c: f64) -> Self {
        TimeGrid {
            kind: GridKind::Log,
            t_min: 1e-3 / omega_c,
            t_max: 1e4 / omega_c,
            points: 400,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min >= 0.0) || !self.t_max.is_finite() || !(self.t_max > self.t_min) {
            return Err(Error::domain(format!(
                "time grid needs 0 <= t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.points < 2 {
            return Err(Error::domain("time grid needs at least 2 points"));
        }
        if self.kind == GridKind::Log && self.t_min <= 0.0 {
            return Err(Error::domain("log time grid needs t_min > 0"));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        let mut ts: Vec<f64> = match self.kind {
            GridKind::Linear => (0..n)
                .map(|i| self.t_min + (self.t_max - self.t_min) * i as f64 / last)
                .collect(),
            GridKind::Log => {
                let (lo, hi) = (self.t_min.ln(), self.t_max.ln());
                (0..n)
                    .map(|i| (lo + (hi - lo) * i as f64 / last).exp())
                    .collect()
            }
        };
        // pin the endpoints exactly
        ts[0] = self.t_min;
        ts[n - 1] = self.t_max;
        ts
    }
}

/// One row of a distance series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub distance: f64,
    pub abs_a1: f64,
    pub abs_a2: f64,
    pub r: f64,
    pub s: f64,
    pub phi: f64,
}

/// Distance between the λ₁ and λ₂ states sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSeries {
    pub grid: TimeGrid,
    pub points: Vec<SeriesPoint>,
    pub scenario: Scenario,
    pub backend: Backend,
    pub settings: QuadratureSettings,
    pub convention: DistanceConvention,
}

impl DistanceSeries {
    pub fn distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.distance)
    }
}

/// Evaluates the scenario on every grid point. Points are computed in
/// parallel and assembled in grid order.
pub fn distance_series(
    scenario: &Scenario,
    grid: &TimeGrid,
    backend: Backend,
    settings: &QuadratureSettings,
    convention: DistanceConvention,
) -> Result<DistanceSeries> {
    scenario.validate()?;
    grid.validate()?;
    settings.validate()?;
    let points = grid
        .times()
        .into_par_iter()
        .map(|t| scenario.point(t, backend, settings, convention))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceSeries {
        grid: *grid,
        points,
        scenario: *scenario,
        backend,
        settings: *settings,
        convention,
    })
}
