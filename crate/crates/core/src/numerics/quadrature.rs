//! Adaptive Gauss–Kronrod quadrature over [0, ∞) for integrands of the form
//! ω^{p−1} g(ω) with an exponentially decaying, possibly oscillating, smooth
//! factor g.
//!
//! The half-line is truncated at `tail_cut_multiplier` decay scales and cut
//! into panels aligned with the oscillation period. The first panel absorbs
//! the endpoint power through ω = u^{1/p} when p < 1, which turns ω^{p−1} dω
//! into du / p. All panels then enter a single global error queue and the
//! worst one is bisected until the summed error estimate meets the tolerance.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and limits of the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisections allowed on top of the initial panel partition.
    pub max_subdivisions: usize,
    /// Upper integration limit in units of the decay scale.
    pub tail_cut_multiplier: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
            tail_cut_multiplier: 200.0,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        if !(self.tail_cut_multiplier >= 10.0) || !self.tail_cut_multiplier.is_finite() {
            return Err(Error::domain(
                "tail_cut_multiplier must be a finite value >= 10",
            ));
        }
        Ok(())
    }
}

/// The integrand ω^{p−1} g(ω) on [0, ∞).
///
/// `smooth` is g. It must be bounded near the origin and, beyond its peak,
/// bounded by an envelope that decays on the scale `decay_scale`.
/// `frequency` is the angular frequency of any oscillation in g (0 if none);
/// it only sets the panel width.
#[derive(Debug, Clone, Copy)]
pub struct SemiInfiniteIntegrand<F> {
    pub endpoint_exponent: f64,
    pub decay_scale: f64,
    pub frequency: f64,
    pub smooth: F,
}

impl<F: Fn(f64) -> f64> SemiInfiniteIntegrand<F> {
    pub fn new(endpoint_exponent: f64, decay_scale: f64, smooth: F) -> Self {
        SemiInfiniteIntegrand {
            endpoint_exponent,
            decay_scale,
            frequency: 0.0,
            smooth,
        }
    }

    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.frequency = frequency;
        self
    }

    fn eval(&self, map: Map, x: f64) -> f64 {
        let p = self.endpoint_exponent;
        match map {
            Map::Direct => {
                if p == 1.0 {
                    (self.smooth)(x)
                } else {
                    x.powf(p - 1.0) * (self.smooth)(x)
                }
            }
            Map::Power => (self.smooth)(x.powf(1.0 / p)) / p,
        }
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

/// ∫₀^∞ ω^{p−1} g(ω) dω within max(abs_tol, rel_tol·|value|).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    integrand: &SemiInfiniteIntegrand<F>,
    settings: &QuadratureSettings,
) -> Result<f64> {
    integrate_semi_infinite_estimate(integrand, settings).map(|e| e.value)
}

/// Same as [`integrate_semi_infinite`] but also reports the error estimate.
pub fn integrate_semi_infinite_estimate<F: Fn(f64) -> f64>(
    integrand: &SemiInfiniteIntegrand<F>,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    settings.validate()?;
    let p = integrand.endpoint_exponent;
    let scale = integrand.decay_scale;
    let freq = integrand.frequency;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!(
            "endpoint exponent must be positive and finite, got {p}"
        )));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain(format!(
            "decay scale must be positive, got {scale}"
        )));
    }
    if !(freq >= 0.0) || !freq.is_finite() {
        return Err(Error::domain(format!(
            "frequency must be finite and >= 0, got {freq}"
        )));
    }

    let cut = settings.tail_cut_multiplier * scale;
    let width = if freq > 0.0 {
        (2.0 * PI / freq).min(scale)
    } else {
        scale
    };

    let mut queue = BinaryHeap::new();
    let head_map = if p < 1.0 { Map::Power } else { Map::Direct };
    let head_hi = match head_map {
        Map::Power => width.powf(p),
        Map::Direct => width,
    };
    let head = Segment::evaluate(integrand, head_map, 0.0, head_hi);
    let mut total = head.value;
    queue.push(head);

    // Panels past the envelope peak are dropped once they stop mattering.
    let peak = scale * (2.0 * (p - 1.0)).max(1.0);
    let tail_factor = (scale / width).max(1.0);
    let mut k = 1usize;
    loop {
        let lo = k as f64 * width;
        if lo >= cut {
            break;
        }
        let hi = ((k + 1) as f64 * width).min(cut);
        let seg = Segment::evaluate(integrand, Map::Direct, lo, hi);
        total += seg.value;
        let negligible = seg.abs_value * tail_factor
            <= 1e-3 * settings.abs_tol.max(settings.rel_tol * total.abs());
        queue.push(seg);
        if lo >= peak && negligible {
            break;
        }
        k += 1;
    }

    let mut subdivisions = 0usize;
    let mut value: f64 = queue.iter().map(|s| s.value).sum();
    let mut error: f64 = queue.iter().map(|s| s.error).sum();
    loop {
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target {
            // running sums drift; confirm with exact ones
            value = queue.iter().map(|s| s.value).sum();
            error = queue.iter().map(|s| s.error).sum();
            if error <= settings.abs_tol.max(settings.rel_tol * value.abs()) {
                return Ok(Estimate {
                    value,
                    error,
                    subdivisions,
                });
            }
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::NonConvergence {
                value,
                error,
                target,
                subdivisions,
            });
        }
        let worst = queue.pop().expect("queue is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval exhausted at machine resolution; keep its estimate
            return Err(Error::NonConvergence {
                value,
                error,
                target,
                subdivisions,
            });
        }
        let left = Segment::evaluate(integrand, worst.map, worst.lo, mid);
        let right = Segment::evaluate(integrand, worst.map, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        subdivisions += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Map {
    Direct,
    Power,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl Segment {
    fn evaluate<F: Fn(f64) -> f64>(
        integrand: &SemiInfiniteIntegrand<F>,
        map: Map,
        lo: f64,
        hi: f64,
    ) -> Self {
        let rule = gauss_kronrod_21(|x| integrand.eval(map, x), lo, hi);
        Segment {
            lo,
            hi,
            map,
            value: rule.value,
            error: rule.error,
            abs_value: rule.abs_value,
        }
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct RuleResult {
    value: f64,
    error: f64,
    abs_value: f64,
}

/// 10-point Gauss / 21-point Kronrod pair with the QUADPACK error heuristic.
fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> RuleResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = fc * WGK[10];
    let mut res_abs = fc.abs() * WGK[10];
    let mut f1 = [0.0; 10];
    let mut f2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        f1[j] = lo;
        f2[j] = hi;
        let pair = lo + hi;
        res_kronrod += WGK[j] * pair;
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * pair;
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    RuleResult {
        value,
        error,
        abs_value: res_abs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn kronrod_weights_sum_to_interval_length() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_rule_is_exact_for_high_degree_polynomials() {
        // ∫_0^1 x^30 dx = 1/31
        let r = gauss_kronrod_21(|x| x.powi(30), 0.0, 1.0);
        assert!((r.value - 1.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn exponential() {
        let f = SemiInfiniteIntegrand::new(1.0, 1.0, |w: f64| (-w).exp());
        let v = integrate_semi_infinite(&f, &settings()).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn damped_sine() {
        let f =
            SemiInfiniteIntegrand::new(1.0, 1.0, |w: f64| (-w).exp() * w.sin()).with_frequency(1.0);
        let v = integrate_semi_infinite(&f, &settings()).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn strong_endpoint_singularity() {
        // ∫ ω^{-0.99} e^{-ω} dω = Γ(0.01)
        let f = SemiInfiniteIntegrand::new(0.01, 1.0, |w: f64| (-w).exp());
        let v = integrate_semi_infinite(&f, &settings()).unwrap();
        assert!((v - 99.432_585_119_150_59).abs() < 1e-6 * 99.43, "{v}");
    }

    #[test]
    fn fast_oscillation() {
        // ∫ e^{-ω} cos(ωt) dω = 1/(1+t²)
        let t = 250.0;
        let f = SemiInfiniteIntegrand::new(1.0, 1.0, move |w: f64| (-w).exp() * (w * t).cos())
            .with_frequency(t);
        let v = integrate_semi_infinite(&f, &settings()).unwrap();
        assert!((v - 1.0 / (1.0 + t * t)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn rescaled_cutoff() {
        // ∫ ω e^{-ω/3} dω = 9
        let f = SemiInfiniteIntegrand::new(2.0, 3.0, |w: f64| (-w / 3.0).exp());
        let v = integrate_semi_infinite(&f, &settings()).unwrap();
        assert!((v - 9.0).abs() < 1e-8);
    }

    #[test]
    fn reports_non_convergence() {
        let s = QuadratureSettings {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_subdivisions: 3,
            ..settings()
        };
        let f = SemiInfiniteIntegrand::new(0.5, 1.0, |w: f64| (-w).exp() * (1.0 + w.sqrt()));
        match integrate_semi_infinite(&f, &s) {
            Err(Error::NonConvergence {
                subdivisions,
                error,
                ..
            }) => {
                assert_eq!(subdivisions, 3);
                assert!(error > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let f = SemiInfiniteIntegrand::new(0.3, 1.5, |w: f64| {
            (-w / 1.5).exp() * (1.0 - (7.0 * w).cos())
        })
        .with_frequency(7.0);
        let a = integrate_semi_infinite(&f, &settings()).unwrap();
        let b = integrate_semi_infinite(&f, &settings()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn settings_validation() {
        let bad = [
            QuadratureSettings {
                abs_tol: 0.0,
                ..settings()
            },
            QuadratureSettings {
                rel_tol: -1.0,
                ..settings()
            },
            QuadratureSettings {
                max_subdivisions: 0,
                ..settings()
            },
            QuadratureSettings {
                tail_cut_multiplier: 5.0,
                ..settings()
            },
        ];
        for s in bad {
            assert!(s.validate().is_err(), "{s:?}");
        }
        let f = SemiInfiniteIntegrand::new(-0.5, 1.0, |w: f64| (-w).exp());
        assert!(integrate_semi_infinite(&f, &settings()).is_err());
    }
}
