//! Flat `key = value` scenario files.
//!
//! ```text
//! # weak coupling, gain scenario
//! alpha = 0.0025
//! mu = 0.01
//! gamma = 0.05
//! nu = 0.05
//! lambda1 = 0.25
//! lambda2 = 0
//! ```
//!
//! Blank lines and `#` comments are ignored, unknown or repeated keys are
//! rejected. Amplitudes take `re` or `re,im`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use qdephase::{
    Backend, BathSpec, Complex64, DisplacementSpec, GridKind, ModelSpec, QuadratureSettings,
    QubitAmplitudes, Scenario, TimeGrid,
};

use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &[
    "epsilon",
    "omega_c",
    "alpha",
    "mu",
    "gamma",
    "nu",
    "lambda1",
    "lambda2",
    "b_plus",
    "b_minus",
    "grid",
    "t_min",
    "t_max",
    "points",
    "backend",
    "normalized",
    "out",
    "abs_tol",
    "rel_tol",
    "max_subdivisions",
    "tail_cut_multiplier",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub grid: TimeGrid,
    pub backend: Backend,
    pub normalized: bool,
    pub out: Option<PathBuf>,
    pub settings: QuadratureSettings,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(line, v)| (*line, v.as_str()))
    }

    fn real(&self, key: &str) -> CliResult<Option<f64>> {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<f64>().map_err(|_| CliError::Config {
                    line,
                    msg: format!("{key}: '{v}' is not a number"),
                })
            })
            .transpose()
    }

    fn real_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn required(&self, key: &str) -> CliResult<f64> {
        self.real(key)?
            .ok_or_else(|| CliError::Usage(format!("config: missing required key '{key}'")))
    }

    fn count(&self, key: &str) -> CliResult<Option<usize>> {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<usize>().map_err(|_| CliError::Config {
                    line,
                    msg: format!("{key}: '{v}' is not a non-negative integer"),
                })
            })
            .transpose()
    }

    fn complex(&self, key: &str) -> CliResult<Option<Complex64>> {
        self.raw(key)
            .map(|(line, v)| {
                parse_complex(v).ok_or_else(|| CliError::Config {
                    line,
                    msg: format!("{key}: '{v}' is not 're' or 're,im'"),
                })
            })
            .transpose()
    }
}

fn parse_complex(v: &str) -> Option<Complex64> {
    let mut parts = v.split(',').map(str::trim);
    let re = parts.next()?.parse().ok()?;
    let im = match parts.next() {
        Some(s) => s.parse().ok()?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return None;
    }
    Some(Complex64::new(re, im))
}

pub fn parse_backend(v: &str) -> Option<Backend> {
    match v {
        "closed" | "closed_form" => Some(Backend::ClosedForm),
        "quad" | "quadrature" => Some(Backend::Quadrature),
        _ => None,
    }
}

pub fn parse_grid_kind(v: &str) -> Option<GridKind> {
    match v {
        "linear" => Some(GridKind::Linear),
        "log" => Some(GridKind::Log),
        _ => None,
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

fn tokenize(text: &str) -> CliResult<Entries> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| CliError::Config {
            line,
            msg: format!("expected 'key = value', got '{content}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Config {
                line,
                msg: format!("unknown key '{key}'"),
            });
        }
        if value.is_empty() {
            return Err(CliError::Config {
                line,
                msg: format!("{key}: empty value"),
            });
        }
        if map
            .insert(key.to_string(), (line, value.to_string()))
            .is_some()
        {
            return Err(CliError::Config {
                line,
                msg: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(Entries { map })
}

fn amplitudes(e: &Entries) -> CliResult<QubitAmplitudes> {
    let plus = e.complex("b_plus")?;
    let minus = e.complex("b_minus")?;
    let real_partner = |b: Complex64| Complex64::new((1.0 - b.norm_sqr()).max(0.0).sqrt(), 0.0);
    let (bp, bm) = match (plus, minus) {
        (None, None) => return Ok(QubitAmplitudes::balanced()),
        (Some(p), None) => (p, real_partner(p)),
        (None, Some(m)) => (real_partner(m), m),
        (Some(p), Some(m)) => (p, m),
    };
    Ok(QubitAmplitudes::correlated(bp, bm)?)
}

pub fn parse(text: &str) -> CliResult<ScenarioConfig> {
    let e = tokenize(text)?;
    let omega_c = e.real_or("omega_c", 1.0)?;
    let bath = BathSpec::new(e.required("alpha")?, e.required("mu")?, omega_c)?;
    let displacement = DisplacementSpec::new(e.required("gamma")?, e.required("nu")?)?;
    let model = ModelSpec::new(e.real_or("epsilon", 1.0)?, bath, displacement)?;
    let scenario = Scenario::new(
        model,
        e.required("lambda1")?,
        e.real_or("lambda2", 0.0)?,
        amplitudes(&e)?,
    )?;

    let default_grid = TimeGrid::default_for(omega_c);
    let kind = match e.raw("grid") {
        Some((line, v)) => parse_grid_kind(v).ok_or_else(|| CliError::Config {
            line,
            msg: format!("grid: expected 'linear' or 'log', got '{v}'"),
        })?,
        None => default_grid.kind,
    };
    let default_t_min = match kind {
        GridKind::Log => default_grid.t_min,
        GridKind::Linear => 0.0,
    };
    let grid = TimeGrid {
        kind,
        t_min: e.real_or("t_min", default_t_min)?,
        t_max: e.real_or("t_max", default_grid.t_max)?,
        points: e.count("points")?.unwrap_or(default_grid.points),
    };

    let backend = match e.raw("backend") {
        Some((line, v)) => parse_backend(v).ok_or_else(|| CliError::Config {
            line,
            msg: format!("backend: expected 'closed' or 'quad', got '{v}'"),
        })?,
        None => Backend::ClosedForm,
    };
    let normalized = match e.raw("normalized") {
        Some((line, v)) => parse_bool(v).ok_or_else(|| CliError::Config {
            line,
            msg: format!("normalized: expected true or false, got '{v}'"),
        })?,
        None => false,
    };

    let d = QuadratureSettings::default();
    let settings = QuadratureSettings {
        abs_tol: e.real_or("abs_tol", d.abs_tol)?,
        rel_tol: e.real_or("rel_tol", d.rel_tol)?,
        max_subdivisions: e.count("max_subdivisions")?.unwrap_or(d.max_subdivisions),
        tail_cut_multiplier: e.real_or("tail_cut_multiplier", d.tail_cut_multiplier)?,
    };
    settings.validate()?;

    Ok(ScenarioConfig {
        scenario,
        grid,
        backend,
        normalized,
        out: e.raw("out").map(|(_, v)| PathBuf::from(v)),
        settings,
    })
}

pub fn load(path: &std::path::Path) -> CliResult<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "alpha = 0.0025\nmu = 0.01\ngamma = 0.05\nnu = 0.05\nlambda1 = 0.25\n";

    #[test]
    fn defaults() {
        let c = parse(BASE).unwrap();
        assert_eq!(c.scenario.model.epsilon, 1.0);
        assert_eq!(c.scenario.model.bath.omega_c, 1.0);
        assert_eq!(c.scenario.lambda2, 0.0);
        assert_eq!(c.scenario.amplitudes, QubitAmplitudes::balanced());
        assert_eq!(c.grid, TimeGrid::default_for(1.0));
        assert_eq!(c.backend, Backend::ClosedForm);
        assert!(!c.normalized);
        assert_eq!(c.settings, QuadratureSettings::default());
    }

    #[test]
    fn comments_and_overrides() {
        let text = format!(
            "# header\n{BASE}\nepsilon = 10 # trailing\nbackend = quad\ngrid = linear\n\
             t_max = 50\npoints = 11\nb_plus = 0.6\nnormalized = true\nout = series.csv\n"
        );
        let c = parse(&text).unwrap();
        assert_eq!(c.scenario.model.epsilon, 10.0);
        assert_eq!(c.backend, Backend::Quadrature);
        assert_eq!(
            c.grid,
            TimeGrid {
                kind: GridKind::Linear,
                t_min: 0.0,
                t_max: 50.0,
                points: 11
            }
        );
        assert!((c.scenario.amplitudes.b_minus.re - 0.8).abs() < 1e-15);
        assert!(c.normalized);
        assert_eq!(c.out, Some(PathBuf::from("series.csv")));
    }

    #[test]
    fn complex_amplitudes() {
        let c = parse(&format!("{BASE}b_plus = 0.6\nb_minus = 0,0.8\n")).unwrap();
        assert_eq!(c.scenario.amplitudes.b_minus, Complex64::new(0.0, 0.8));
    }

    #[test]
    fn rejections() {
        let cases = [
            format!("{BASE}colour = blue\n"),
            format!("{BASE}alpha = 0.1\n"),
            format!("{BASE}epsilon\n"),
            format!("{BASE}epsilon = one\n"),
            format!("{BASE}lambda2 = 1.5\n"),
            format!("{BASE}b_plus = 1\n"),
            format!("{BASE}b_plus = 0.6\nb_minus = 0.6\n"),
            format!("{BASE}backend = fast\n"),
            format!("{BASE}abs_tol = 0\n"),
            BASE.replace("alpha = 0.0025\n", ""),
            BASE.replace("alpha = 0.0025", "alpha = -1"),
        ];
        for text in cases {
            let err = parse(&text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }
}
