//! Bath parameters and the decoherence functions r(t), s(t), Φ(t).
//!
//! The environment enters only through the ratio g_h = g/h of coupling and
//! spectrum, with g_h²(ω) = α ω^{μ−1} e^{−ω/ω_c}, and through the displacement
//! profile f²(ω) = γ ω^{ν−1} e^{−ω/ω_c}. In terms of those,
//!
//! ```text
//! r(t) = 4 ∫ g_h²(ω) (1 − cos ωt) dω
//! s(t) = 2 ∫ g_h(ω) f(ω) (1 − cos ωt) dω − ½ ∫ f²(ω) dω
//! Φ(t) =   ∫ g_h(ω) f(ω) sin ωt dω
//! ```
//!
//! Both backends evaluate exactly these integrals: [`Backend::ClosedForm`]
//! through the gamma-function kernels, [`Backend::Quadrature`] numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    decay_kernel, decay_kernel_limit, decay_kernel_quadrature, gamma, power_exponential_quadrature,
    sine_kernel, sine_kernel_quadrature, KernelArgs, QuadratureSettings,
};

/// Coupling of the qubit to the bath: g_h²(ω) = α ω^{μ−1} e^{−ω/ω_c}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub alpha: f64,
    /// Ohmicity: 0 is ohmic, positive values are super-ohmic.
    pub mu: f64,
    pub omega_c: f64,
}

impl BathSpec {
    pub fn new(alpha: f64, mu: f64, omega_c: f64) -> Result<Self> {
        let spec = BathSpec { alpha, mu, omega_c };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::domain(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if !(self.mu > -1.0) || !self.mu.is_finite() {
            return Err(Error::domain(format!("mu must be > -1, got {}", self.mu)));
        }
        if !(self.omega_c > 0.0) || !self.omega_c.is_finite() {
            return Err(Error::domain(format!(
                "omega_c must be > 0, got {}",
                self.omega_c
            )));
        }
        Ok(())
    }
}

/// Displacement profile of the coherent environment branch:
/// f²(ω) = γ ω^{ν−1} e^{−ω/ω_c}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSpec {
    /// γ ≥ 0; zero means the coherent branch coincides with the vacuum.
    pub gamma_coef: f64,
    pub nu: f64,
}

impl DisplacementSpec {
    pub fn new(gamma_coef: f64, nu: f64) -> Result<Self> {
        let spec = DisplacementSpec { gamma_coef, nu };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_coef >= 0.0) || !self.gamma_coef.is_finite() {
            return Err(Error::domain(format!(
                "gamma must be >= 0, got {}",
                self.gamma_coef
            )));
        }
        if !(self.nu > 0.0) || !self.nu.is_finite() {
            return Err(Error::domain(format!("nu must be > 0, got {}", self.nu)));
        }
        Ok(())
    }

    /// ∫ f²(ω) dω = γ Γ(ν) ω_c^ν.
    pub fn norm_squared(&self, omega_c: f64) -> Result<f64> {
        self.validate()?;
        if !(omega_c > 0.0) {
            return Err(Error::domain(format!("omega_c must be > 0, got {omega_c}")));
        }
        Ok(self.gamma_coef * gamma(self.nu)? * omega_c.powf(self.nu))
    }
}

/// Full model: qubit splitting, bath coupling and displacement profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub epsilon: f64,
    pub bath: BathSpec,
    pub displacement: DisplacementSpec,
}

impl ModelSpec {
    pub fn new(epsilon: f64, bath: BathSpec, displacement: DisplacementSpec) -> Result<Self> {
        let m = ModelSpec {
            epsilon,
            bath,
            displacement,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() {
            return Err(Error::domain("epsilon must be finite"));
        }
        self.bath.validate()?;
        self.displacement.validate()
    }

    /// κ = (μ + ν)/2, the exponent of the cross term g_h f.
    pub fn kappa(&self) -> f64 {
        0.5 * (self.bath.mu + self.displacement.nu)
    }

    /// √(αγ), the prefactor of the cross term g_h f.
    pub fn cross_coupling(&self) -> f64 {
        (self.bath.alpha * self.displacement.gamma_coef).sqrt()
    }

    pub fn omega_c(&self) -> f64 {
        self.bath.omega_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ClosedForm,
    Quadrature,
}

/// The triple (r, s, Φ) at one time. `t` is infinite for long-time limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceProfile {
    pub t: f64,
    pub r: f64,
    pub s: f64,
    pub phi: f64,
    pub backend: Backend,
}

impl DecoherenceProfile {
    pub fn is_limit(&self) -> bool {
        self.t.is_infinite()
    }
}

/// Constant term of s(t) in the closed form.
///
/// Only [`NormOffset::Half`] is consistent with the defining integral and
/// with the vacuum overlap; `Full` exists so the validation suite can show
/// that the doubled constant breaks e^{s(0)} = ⟨Ω₀|Ω_f⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormOffset {
    /// −½ γ Γ(ν) ω_c^ν
    #[default]
    Half,
    /// −γ Γ(ν) ω_c^ν
    Full,
}

/// Re⟨Ω₀|Ω_f⟩ = exp(−½ ∫ f²) for the vacuum and the displaced vacuum.
pub fn ground_coherent_overlap(d: &DisplacementSpec, omega_c: f64) -> Result<f64> {
    Ok((-0.5 * d.norm_squared(omega_c)?).exp())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

/// r, s, Φ at time `t` from the requested backend.
pub fn profile_at(
    m: &ModelSpec,
    t: f64,
    backend: Backend,
    settings: &QuadratureSettings,
) -> Result<DecoherenceProfile> {
    match backend {
        Backend::ClosedForm => closed_form_profile(m, t, NormOffset::Half),
        Backend::Quadrature => quadrature_profile(m, t, settings),
    }
}

/// Closed-form profile with a selectable constant term in s.
///
/// Requires μ ≥ 0; μ = 0 uses the ohmic limit of the kernel.
pub fn closed_form_profile(
    m: &ModelSpec,
    t: f64,
    offset: NormOffset,
) -> Result<DecoherenceProfile> {
    m.validate()?;
    check_time(t)?;
    let wc = m.omega_c();
    if m.bath.mu < 0.0 {
        return Err(Error::domain(format!(
            "closed form needs mu >= 0 (got {}); use the quadrature backend",
            m.bath.mu
        )));
    }
    let cross = m.cross_coupling();
    let kappa = m.kappa();
    let r = 4.0 * decay_kernel(KernelArgs::new(m.bath.alpha, m.bath.mu, wc, t))?;
    let offset_factor = match offset {
        NormOffset::Half => 0.5,
        NormOffset::Full => 1.0,
    };
    let s = 2.0 * decay_kernel(KernelArgs::new(cross, kappa, wc, t))?
        - offset_factor * m.displacement.norm_squared(wc)?;
    let phi = sine_kernel(KernelArgs::new(cross, kappa, wc, t))?;
    Ok(DecoherenceProfile {
        t,
        r,
        s,
        phi,
        backend: Backend::ClosedForm,
    })
}

/// Profile by direct quadrature of the defining integrals. Serves μ ∈ (−1, 0)
/// where no closed form is offered.
pub fn quadrature_profile(
    m: &ModelSpec,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<DecoherenceProfile> {
    m.validate()?;
    check_time(t)?;
    let wc = m.omega_c();
    let cross = m.cross_coupling();
    let kappa = m.kappa();
    let r =
        4.0 * decay_kernel_quadrature(KernelArgs::new(m.bath.alpha, m.bath.mu, wc, t), settings)?;
    let norm =
        power_exponential_quadrature(m.displacement.gamma_coef, m.displacement.nu, wc, settings)?;
    let s =
        2.0 * decay_kernel_quadrature(KernelArgs::new(cross, kappa, wc, t), settings)? - 0.5 * norm;
    let phi = sine_kernel_quadrature(KernelArgs::new(cross, kappa, wc, t), settings)?;
    Ok(DecoherenceProfile {
        t,
        r,
        s,
        phi,
        backend: Backend::Quadrature,
    })
}

/// Long-time limit: r_∞ = 4αΓ(μ)ω_c^μ, s_∞ = 2√(αγ)Γ(κ)ω_c^κ − ½γΓ(ν)ω_c^ν, Φ_∞ = 0.
///
/// For μ ≤ 0 r(t) grows without bound and [`Error::Divergent`] is returned;
/// every coherence then decays to zero.
pub fn profile_limit(m: &ModelSpec) -> Result<DecoherenceProfile> {
    m.validate()?;
    if m.bath.mu <= 0.0 {
        return Err(Error::Divergent(format!(
            "r(t) is unbounded for mu = {} <= 0; long-time coherences vanish",
            m.bath.mu
        )));
    }
    let wc = m.omega_c();
    let r = 4.0 * decay_kernel_limit(m.bath.alpha, m.bath.mu, wc)?;
    let s = 2.0 * decay_kernel_limit(m.cross_coupling(), m.kappa(), wc)?
        - 0.5 * m.displacement.norm_squared(wc)?;
    Ok(DecoherenceProfile {
        t: f64::INFINITY,
        r,
        s,
        phi: 0.0,
        backend: Backend::ClosedForm,
    })
}

/// Long-time limit by quadrature of the cosine-free integrands
/// (the oscillating parts vanish as t → ∞).
pub fn profile_limit_quadrature(
    m: &ModelSpec,
    settings: &QuadratureSettings,
) -> Result<DecoherenceProfile> {
    m.validate()?;
    let wc = m.omega_c();
    let r = 4.0 * power_exponential_quadrature(m.bath.alpha, m.bath.mu, wc, settings)?;
    let cross = power_exponential_quadrature(m.cross_coupling(), m.kappa(), wc, settings)?;
    let norm =
        power_exponential_quadrature(m.displacement.gamma_coef, m.displacement.nu, wc, settings)?;
    Ok(DecoherenceProfile {
        t: f64::INFINITY,
        r,
        s: 2.0 * cross - 0.5 * norm,
        phi: 0.0,
        backend: Backend::Quadrature,
    })
}
