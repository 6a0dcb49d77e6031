use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gain::{scenario_gain_ratio, GainRatio};
use super::Scenario;
use crate::error::{Error, Result};

/// Scenario parameters that can span a region-map axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Alpha,
    Gamma,
    Mu,
    Nu,
    Lambda1,
    Lambda2,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::Alpha,
        Param::Gamma,
        Param::Mu,
        Param::Nu,
        Param::Lambda1,
        Param::Lambda2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Gamma => "gamma",
            Param::Mu => "mu",
            Param::Nu => "nu",
            Param::Lambda1 => "lambda1",
            Param::Lambda2 => "lambda2",
        }
    }

    /// Copy of `scenario` with this parameter set to `value`, revalidated.
    pub fn apply(self, scenario: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = *scenario;
        match self {
            Param::Alpha => s.model.bath.alpha = value,
            Param::Gamma => s.model.displacement.gamma_coef = value,
            Param::Mu => s.model.bath.mu = value,
            Param::Nu => s.model.displacement.nu = value,
            Param::Lambda1 => s.lambda1 = value,
            Param::Lambda2 => s.lambda2 = value,
        }
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown parameter '{s}'")))
    }
}

/// `n` evenly spaced values over [lo, hi]; a single value when lo == hi or n == 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::domain(format!(
                "axis range needs lo <= hi, got {lo}:{hi}"
            )));
        }
        if n == 0 {
            return Err(Error::domain("axis range needs at least one point"));
        }
        Ok(AxisRange { lo, hi, n })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 || self.lo == self.hi {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        let mut v: Vec<f64> = (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / last)
            .collect();
        v[self.n - 1] = self.hi;
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellLabel {
    /// D_∞ > D_0: the long-time states are further apart.
    #[serde(rename = "+")]
    Gain,
    #[serde(rename = "-")]
    Loss,
    /// Tie within tolerance, or undefined ratio (D_0 = 0).
    #[serde(rename = "0")]
    Boundary,
}

impl CellLabel {
    pub fn classify(ratio: GainRatio, tie_tol: f64) -> Self {
        match ratio {
            GainRatio::Value(v) if v > 1.0 + tie_tol => CellLabel::Gain,
            GainRatio::Value(v) if v < 1.0 - tie_tol => CellLabel::Loss,
            _ => CellLabel::Boundary,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CellLabel::Gain => "+",
            CellLabel::Loss => "-",
            CellLabel::Boundary => "0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRequest {
    pub x: Param,
    pub x_range: AxisRange,
    pub y: Param,
    pub y_range: AxisRange,
    /// Relative tie tolerance around a ratio of 1.
    pub tie_tol: f64,
    /// Resolution of the boundary bisection along grid edges, if wanted.
    pub refine: Option<f64>,
}

impl RegionRequest {
    pub fn new(x: Param, x_range: AxisRange, y: Param, y_range: AxisRange) -> Self {
        RegionRequest {
            x,
            x_range,
            y,
            y_range,
            tie_tol: 1e-9,
            refine: None,
        }
    }
}

/// A crossing between a gain and a loss cell, located by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub x: f64,
    pub y: f64,
}

/// Gain/loss classification over a parameter plane. Rows follow the y axis,
/// columns the x axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub x: Axis,
    pub y: Axis,
    pub labels: Vec<Vec<CellLabel>>,
    pub gain_ratio: Vec<Vec<Option<f64>>>,
    pub boundary: Vec<BoundaryPoint>,
}

impl RegionMap {
    pub fn count(&self, label: CellLabel) -> usize {
        self.labels
            .iter()
            .flatten()
            .filter(|&&l| l == label)
            .count()
    }
}

pub fn region_map(template: &Scenario, req: &RegionRequest) -> Result<RegionMap> {
    if req.x == req.y {
        return Err(Error::domain(format!(
            "plane axes must differ, got {0}×{0}",
            req.x
        )));
    }
    if !(req.tie_tol >= 0.0) {
        return Err(Error::domain("tie tolerance must be >= 0"));
    }
    if let Some(res) = req.refine {
        if !(res > 0.0) {
            return Err(Error::domain("boundary resolution must be positive"));
        }
    }
    let xs = req.x_range.values();
    let ys = req.y_range.values();
    let cells: Vec<(f64, f64)> = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
        .collect();

    let ratios = cells
        .par_iter()
        .map(|&(x, y)| cell_ratio(template, req, x, y))
        .collect::<Result<Vec<_>>>()?;

    let nx = xs.len();
    let labels: Vec<Vec<CellLabel>> = ratios
        .chunks(nx)
        .map(|row| {
            row.iter()
                .map(|&r| CellLabel::classify(r, req.tie_tol))
                .collect()
        })
        .collect();
    let gain_ratio: Vec<Vec<Option<f64>>> = ratios
        .chunks(nx)
        .map(|row| {
            row.iter()
                .map(|r| r.value().filter(|v| v.is_finite()))
                .collect()
        })
        .collect();

    let boundary = match req.refine {
        Some(res) => refine_boundary(template, req, &xs, &ys, &labels, res)?,
        None => Vec::new(),
    };

    Ok(RegionMap {
        x: Axis {
            param: req.x,
            values: xs,
        },
        y: Axis {
            param: req.y,
            values: ys,
        },
        labels,
        gain_ratio,
        boundary,
    })
}

fn cell_ratio(template: &Scenario, req: &RegionRequest, x: f64, y: f64) -> Result<GainRatio> {
    let s = req.x.apply(template, x)?;
    let s = req.y.apply(&s, y)?;
    scenario_gain_ratio(&s)
}

fn is_crossing(a: CellLabel, b: CellLabel) -> bool {
    matches!(
        (a, b),
        (CellLabel::Gain, CellLabel::Loss) | (CellLabel::Loss, CellLabel::Gain)
    )
}

fn refine_boundary(
    template: &Scenario,
    req: &RegionRequest,
    xs: &[f64],
    ys: &[f64],
    labels: &[Vec<CellLabel>],
    resolution: f64,
) -> Result<Vec<BoundaryPoint>> {
    // (x0, y0, x1, y1, label at the first end)
    let mut edges = Vec::new();
    for (j, row) in labels.iter().enumerate() {
        for i in 0..row.len() {
            if i + 1 < row.len() && is_crossing(row[i], row[i + 1]) {
                edges.push((xs[i], ys[j], xs[i + 1], ys[j], row[i]));
            }
            if j + 1 < labels.len() && is_crossing(row[i], labels[j + 1][i]) {
                edges.push((xs[i], ys[j], xs[i], ys[j + 1], row[i]));
            }
        }
    }
    edges
        .par_iter()
        .map(|&(x0, y0, x1, y1, start)| {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let span = (x1 - x0).abs().max((y1 - y0).abs());
            while (hi - lo) * span > resolution {
                let mid = 0.5 * (lo + hi);
                let label = CellLabel::classify(
                    cell_ratio(template, req, x0 + mid * (x1 - x0), y0 + mid * (y1 - y0))?,
                    req.tie_tol,
                );
                if label == start {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let f = 0.5 * (lo + hi);
            Ok(BoundaryPoint {
                x: x0 + f * (x1 - x0),
                y: y0 + f * (y1 - y0),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::tests::fig_scenario;

    #[test]
    fn param_names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        assert!("epsilon".parse::<Param>().is_err());
    }

    #[test]
    fn axis_values() {
        assert_eq!(
            AxisRange::new(0.0, 1.0, 3).unwrap().values(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(AxisRange::new(0.3, 0.3, 5).unwrap().values(), vec![0.3]);
        assert!(AxisRange::new(1.0, 0.0, 3).is_err());
        assert!(AxisRange::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn alpha_lambda_plane_has_both_regions() {
        let base = fig_scenario(0.0025, 0.25, 0.0);
        let req = RegionRequest::new(
            Param::Alpha,
            AxisRange::new(0.0025, 0.01, 2).unwrap(),
            Param::Lambda1,
            AxisRange::new(0.25, 0.25, 1).unwrap(),
        );
        let map = region_map(&base, &req).unwrap();
        assert_eq!(map.labels, vec![vec![CellLabel::Gain, CellLabel::Loss]]);
    }

    #[test]
    fn diagonal_of_lambda_plane_is_boundary() {
        let base = fig_scenario(0.0025, 0.25, 0.0);
        let r = AxisRange::new(0.0, 1.0, 5).unwrap();
        let map = region_map(
            &base,
            &RegionRequest::new(Param::Lambda1, r, Param::Lambda2, r),
        )
        .unwrap();
        for i in 0..5 {
            assert_eq!(map.labels[i][i], CellLabel::Boundary);
            assert_eq!(map.gain_ratio[i][i], None);
        }
    }

    #[test]
    fn no_gain_without_displacement() {
        let base = fig_scenario(0.0025, 0.25, 0.0);
        let base = Param::Gamma.apply(&base, 0.0).unwrap();
        let req = RegionRequest::new(
            Param::Alpha,
            AxisRange::new(1e-5, 0.02, 4).unwrap(),
            Param::Lambda1,
            AxisRange::new(0.02, 0.98, 4).unwrap(),
        );
        let map = region_map(&base, &req).unwrap();
        assert_eq!(map.count(CellLabel::Gain), 0);
    }

    #[test]
    fn boundary_refinement_matches_critical_lambda() {
        let base = fig_scenario(0.0025, 0.25, 0.0);
        let mut req = RegionRequest::new(
            Param::Lambda1,
            AxisRange::new(0.05, 0.95, 4).unwrap(),
            Param::Alpha,
            AxisRange::new(0.0025, 0.0025, 1).unwrap(),
        );
        req.refine = Some(1e-4);
        let map = region_map(&base, &req).unwrap();
        assert_eq!(map.boundary.len(), 1);
        assert!(
            (map.boundary[0].x - 0.4929).abs() < 2e-4,
            "{:?}",
            map.boundary
        );
    }

    #[test]
    fn rejects_degenerate_plane() {
        let base = fig_scenario(0.0025, 0.25, 0.0);
        let r = AxisRange::new(0.0, 1.0, 3).unwrap();
        assert!(region_map(&base, &RegionRequest::new(Param::Alpha, r, Param::Alpha, r)).is_err());
    }
}
