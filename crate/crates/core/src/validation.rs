//! Self-validation suites: closed forms against quadrature, physicality of
//! the reduced state, and the distance formulas against the generic trace
//! distance. Deterministic for a fixed seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bath::{
    closed_form_profile, ground_coherent_overlap, quadrature_profile, BathSpec, DecoherenceProfile,
    DisplacementSpec, ModelSpec, NormOffset,
};
use crate::dynamics::{
    coherence_factor, distance_closed_form, distance_same_amplitudes, distance_same_environment,
    pair_weights, reduced_state, trace_distance, QubitAmplitudes,
};
use crate::error::Result;
use crate::numerics::{
    decay_kernel, decay_kernel_quadrature, gamma, KernelArgs, QuadratureSettings,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    pub samples: usize,
    /// Relative tolerance for closed form against quadrature.
    pub tol: f64,
    pub seed: u64,
    /// Constant term used by the closed-form s(t) under test.
    pub norm_offset: NormOffset,
    pub settings: QuadratureSettings,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            samples: 100,
            tol: 1e-6,
            seed: 42,
            norm_offset: NormOffset::Half,
            settings: QuadratureSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Worst error relative to the suite's allowance (≤ 1 passes).
    pub worst: f64,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }
}

struct Tally {
    name: &'static str,
    passed: usize,
    total: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            passed: 0,
            total: 0,
            worst: 0.0,
        }
    }

    /// Records `err / allowance`; NaN counts as a failure.
    fn record(&mut self, err: f64, allowance: f64) {
        let score = err / allowance;
        self.total += 1;
        if score <= 1.0 {
            self.passed += 1;
        }
        if !(score <= self.worst) {
            self.worst = score;
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            passed: self.passed,
            total: self.total,
            worst: self.worst,
        }
    }
}

fn rng_for(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(suite))
}

/// Value in (0, hi].
fn open_low(rng: &mut ChaCha8Rng, hi: f64) -> f64 {
    hi * (1.0 - rng.random::<f64>())
}

/// Random model with α, γ ∈ [1e-4, 1], μ, ν ∈ (0, 2], ω_c ∈ [0.5, 2], ε ∈ [0, 10].
pub fn random_model(rng: &mut ChaCha8Rng) -> ModelSpec {
    let bath = BathSpec {
        alpha: rng.random_range(1e-4..=1.0),
        mu: open_low(rng, 2.0),
        omega_c: rng.random_range(0.5..=2.0),
    };
    let displacement = DisplacementSpec {
        gamma_coef: rng.random_range(1e-4..=1.0),
        nu: open_low(rng, 2.0),
    };
    ModelSpec {
        epsilon: rng.random_range(0.0..=10.0),
        bath,
        displacement,
    }
}

fn random_amplitudes(rng: &mut ChaCha8Rng) -> QubitAmplitudes {
    let theta = rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    QubitAmplitudes {
        b_plus: Complex64::new(theta.cos(), 0.0),
        b_minus: Complex64::from_polar(theta.sin(), phase),
    }
}

fn rel_allowance(value: f64, tol: f64) -> f64 {
    1e-8f64.max(tol * value.abs())
}

pub fn run_validation(opts: &ValidationOptions) -> Result<ValidationReport> {
    let n = opts.samples;
    let suites = vec![
        gamma_recurrence(n, opts.seed),
        kernel_oracle(n, opts)?,
        backend_agreement(n, opts)?,
        overlap_consistency(n, opts)?,
        physicality(n, opts)?,
        distance_equivalence(n, opts)?,
    ];
    Ok(ValidationReport { suites })
}

fn gamma_recurrence(n: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_for(seed, 0);
    let mut tally = Tally::new("gamma_recurrence");
    for _ in 0..n {
        let x = rng.random_range(0.01..10.0);
        match (gamma(x), gamma(x + 1.0)) {
            (Ok(g), Ok(g1)) => tally.record((g1 - x * g).abs(), 1e-12 * g1),
            _ => tally.record(f64::NAN, 1.0),
        }
    }
    tally.finish()
}

fn kernel_oracle(n: usize, opts: &ValidationOptions) -> Result<SuiteReport> {
    let mut rng = rng_for(opts.seed, 1);
    let mut tally = Tally::new("kernel_oracle");
    for _ in 0..n {
        let args = KernelArgs::new(
            rng.random_range(1e-4..=1.0),
            open_low(&mut rng, 2.0),
            rng.random_range(0.5..=2.0),
            rng.random_range(0.0..=100.0),
        );
        let closed = decay_kernel(args)?;
        let quad = decay_kernel_quadrature(args, &opts.settings)?;
        tally.record((closed - quad).abs(), rel_allowance(quad, opts.tol));
    }
    Ok(tally.finish())
}

fn backend_agreement(n: usize, opts: &ValidationOptions) -> Result<SuiteReport> {
    let mut rng = rng_for(opts.seed, 2);
    let mut tally = Tally::new("backend_agreement");
    for _ in 0..n {
        let m = random_model(&mut rng);
        let t = rng.random_range(0.0..=100.0);
        let c = closed_form_profile(&m, t, opts.norm_offset)?;
        let q = quadrature_profile(&m, t, &opts.settings)?;
        let worst = [(c.r, q.r), (c.s, q.s), (c.phi, q.phi)]
            .iter()
            .map(|&(a, b)| (a - b).abs() / rel_allowance(b, opts.tol))
            .fold(0.0, f64::max);
        tally.record(worst, 1.0);
    }
    Ok(tally.finish())
}

fn overlap_consistency(n: usize, opts: &ValidationOptions) -> Result<SuiteReport> {
    let mut rng = rng_for(opts.seed, 3);
    let mut tally = Tally::new("overlap_consistency");
    for _ in 0..n {
        let m = random_model(&mut rng);
        let x = ground_coherent_overlap(&m.displacement, m.omega_c())?;
        let p = closed_form_profile(&m, 0.0, opts.norm_offset)?;
        tally.record((p.s.exp() - x).abs(), 1e-12 * x);
    }
    Ok(tally.finish())
}

fn physicality(n: usize, opts: &ValidationOptions) -> Result<SuiteReport> {
    let mut rng = rng_for(opts.seed, 4);
    let mut tally = Tally::new("physicality");
    for i in 0..n {
        let m = random_model(&mut rng);
        let t = rng.random_range(0.0..=100.0);
        let lambda = rng.random_range(0.0..=1.0);
        let amps = random_amplitudes(&mut rng);
        let x = ground_coherent_overlap(&m.displacement, m.omega_c())?;
        let profile = if i % 2 == 0 {
            closed_form_profile(&m, t, opts.norm_offset)?
        } else {
            quadrature_profile(&m, t, &opts.settings)?
        };
        let a = coherence_factor(lambda, &profile, m.epsilon, x)?;
        let excess = (a.norm() - 1.0).max(0.0);
        let state_ok = reduced_state(&amps, a).is_ok();
        tally.record(if state_ok { excess } else { f64::INFINITY }, 1e-9);
    }
    Ok(tally.finish())
}

fn distance_equivalence(n: usize, opts: &ValidationOptions) -> Result<SuiteReport> {
    let mut rng = rng_for(opts.seed, 5);
    let mut tally = Tally::new("distance_equivalence");
    for _ in 0..n {
        let m = random_model(&mut rng);
        let t = rng.random_range(0.0..=100.0);
        let x = ground_coherent_overlap(&m.displacement, m.omega_c())?;
        let p: DecoherenceProfile = closed_form_profile(&m, t, NormOffset::Half)?;
        let (l1, l2) = (rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0));
        let a1 = coherence_factor(l1, &p, m.epsilon, x)?;
        let a2 = coherence_factor(l2, &p, m.epsilon, x)?;
        let b = random_amplitudes(&mut rng);
        let b2 = random_amplitudes(&mut rng);

        let rho1 = reduced_state(&b, a1)?;
        let rho2 = reduced_state(&b, a2)?;
        let generic = trace_distance(&rho1, &rho2);
        let w = pair_weights(l1, l2, x)?;
        let same_amp = distance_same_amplitudes(&w, &p, b.coherence_scale());

        let rho3 = reduced_state(&b2, a1)?;
        let generic_env = trace_distance(&rho1, &rho3);
        let same_env = distance_same_environment(&b, &b2, a1);

        let general = distance_closed_form(&b, a1, &b2, a2);
        let generic_general = trace_distance(&rho1, &reduced_state(&b2, a2)?);

        let err = (same_amp - generic)
            .abs()
            .max((same_env - generic_env).abs())
            .max((general - generic_general).abs());
        tally.record(err, 1e-12);
    }
    Ok(tally.finish())
}
