use serde::{Deserialize, Serialize};

use super::DistanceSeries;
use crate::error::Result;

const GOLDEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub t: f64,
    pub distance: f64,
    pub kind: ExtremumKind,
}

/// Global interior extremum of a series, refined by golden-section search
/// between the neighbours of the best grid point.
///
/// The global minimum is preferred; the global maximum is reported only when
/// the minimum sits on an endpoint. Flat and monotone series give `None`.
pub fn find_extremum(series: &DistanceSeries) -> Result<Extremum> {
    let pts = &series.points;
    let none = Extremum {
        t: f64::NAN,
        distance: f64::NAN,
        kind: ExtremumKind::None,
    };
    if pts.len() < 3 {
        return Ok(none);
    }
    let (imin, imax) = pts.iter().enumerate().fold((0, 0), |(lo, hi), (i, p)| {
        (
            if p.distance < pts[lo].distance { i } else { lo },
            if p.distance > pts[hi].distance { i } else { hi },
        )
    });
    let (dmin, dmax) = (pts[imin].distance, pts[imax].distance);
    if dmax - dmin <= 1e-15 * dmax.abs() || dmax == dmin {
        return Ok(none);
    }
    let interior = |i: usize| i > 0 && i + 1 < pts.len();
    let (index, kind) = if interior(imin) {
        (imin, ExtremumKind::Minimum)
    } else if interior(imax) {
        (imax, ExtremumKind::Maximum)
    } else {
        return Ok(none);
    };

    let sign = if kind == ExtremumKind::Minimum {
        1.0
    } else {
        -1.0
    };
    let eval = |t: f64| -> Result<f64> {
        let p = series
            .scenario
            .point(t, series.backend, &series.settings, series.convention)?;
        Ok(sign * p.distance)
    };
    let (t, value) = golden_section(eval, pts[index - 1].t, pts[index + 1].t)?;
    let grid_value = sign * pts[index].distance;
    let (t, value) = if value <= grid_value {
        (t, value)
    } else {
        (pts[index].t, grid_value)
    };
    Ok(Extremum {
        t,
        distance: sign * value,
        kind,
    })
}

fn golden_section<F>(f: F, mut a: f64, mut b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}
