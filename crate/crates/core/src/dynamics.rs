//! Reduced qubit state, decoherence factor and trace distances.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::DecoherenceProfile;
use crate::error::{Error, Result};

const STATE_TOL: f64 = 1e-12;
const PHYSICALITY_TOL: f64 = 1e-9;

/// Qubit amplitudes b₊, b₋ of the joint initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitAmplitudes {
    pub b_plus: Complex64,
    pub b_minus: Complex64,
}

impl QubitAmplitudes {
    /// Normalized amplitudes; either may vanish.
    pub fn new(b_plus: Complex64, b_minus: Complex64) -> Result<Self> {
        let norm = b_plus.norm_sqr() + b_minus.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::domain(format!(
                "amplitudes must satisfy |b+|^2 + |b-|^2 = 1, got {norm}"
            )));
        }
        Ok(QubitAmplitudes { b_plus, b_minus })
    }

    /// Amplitudes for a correlated initial state, where both must be non-zero.
    pub fn correlated(b_plus: Complex64, b_minus: Complex64) -> Result<Self> {
        let amps = Self::new(b_plus, b_minus)?;
        if b_plus == Complex64::new(0.0, 0.0) || b_minus == Complex64::new(0.0, 0.0) {
            return Err(Error::domain(
                "correlated initial states need non-zero b+ and b-",
            ));
        }
        Ok(amps)
    }

    /// Real amplitudes (b₊, √(1 − b₊²)).
    pub fn real(b_plus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&b_plus) {
            return Err(Error::domain(format!(
                "real b+ must lie in [0, 1], got {b_plus}"
            )));
        }
        Self::new(
            Complex64::new(b_plus, 0.0),
            Complex64::new((1.0 - b_plus * b_plus).sqrt(), 0.0),
        )
    }

    /// b₊ = b₋ = 1/√2.
    pub fn balanced() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        QubitAmplitudes {
            b_plus: Complex64::new(h, 0.0),
            b_minus: Complex64::new(h, 0.0),
        }
    }

    /// b₊ b₋*, the coherence of the state before decoherence.
    pub fn coherence(&self) -> Complex64 {
        self.b_plus * self.b_minus.conj()
    }

    /// |b₊ b₋*|, the scale that converts |A₁ − A₂| into a trace distance.
    pub fn coherence_scale(&self) -> f64 {
        self.coherence().norm()
    }

    pub fn population_plus(&self) -> f64 {
        self.b_plus.norm_sqr()
    }
}

impl Default for QubitAmplitudes {
    fn default() -> Self {
        Self::balanced()
    }
}

/// Amplitudes plus the correlation weight λ ∈ [0, 1] of the environment state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialStateSpec {
    pub amplitudes: QubitAmplitudes,
    pub lambda: f64,
}

impl InitialStateSpec {
    pub fn new(amplitudes: QubitAmplitudes, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(InitialStateSpec { amplitudes, lambda })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    Ok(())
}

fn check_overlap(overlap: f64) -> Result<()> {
    if !(overlap > 0.0 && overlap <= 1.0) {
        return Err(Error::domain(format!(
            "overlap must lie in (0, 1], got {overlap}"
        )));
    }
    Ok(())
}

/// 2×2 qubit density matrix in the basis |1⟩, |−1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitDensityMatrix {
    entries: [[Complex64; 2]; 2],
}

impl QubitDensityMatrix {
    /// Checks Hermiticity, unit trace and positivity, each to 1e-12.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let [[p, c], [c_conj, q]] = entries;
        if entries
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::domain("density matrix has non-finite entries"));
        }
        if p.im.abs() > STATE_TOL
            || q.im.abs() > STATE_TOL
            || (c - c_conj.conj()).norm() > STATE_TOL
        {
            return Err(Error::domain("density matrix is not Hermitian"));
        }
        if (p.re + q.re - 1.0).abs() > STATE_TOL {
            return Err(Error::domain(format!(
                "density matrix trace is {}",
                p.re + q.re
            )));
        }
        if p.re < -STATE_TOL || q.re < -STATE_TOL {
            return Err(Error::domain("density matrix has a negative population"));
        }
        let bound = (p.re.max(0.0) * q.re.max(0.0)).sqrt();
        if c.norm() > bound + STATE_TOL {
            return Err(Error::domain("density matrix is not positive semidefinite"));
        }
        Ok(QubitDensityMatrix { entries })
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn coherence(&self) -> Complex64 {
        self.entries[0][1]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn determinant(&self) -> f64 {
        let [[p, c], [d, q]] = self.entries;
        (p * q - c * d).re
    }

    fn as_matrix(&self) -> Matrix2<Complex64> {
        let [[a, b], [c, d]] = self.entries;
        Matrix2::new(a, b, c, d)
    }
}

/// C_λ = √((1−λ)² + λ² + 2λ(1−λ)x), the norm of (1−λ)|Ω₀⟩ + λ|Ω_f⟩ with x = Re⟨Ω₀|Ω_f⟩.
pub fn normalization_c(lambda: f64, overlap: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_overlap(overlap)?;
    let one_minus = 1.0 - lambda;
    Ok((one_minus * one_minus + lambda * lambda + 2.0 * lambda * one_minus * overlap).sqrt())
}

/// A_λ(t) = C_λ⁻¹ e^{−2iεt} e^{−r} [1 − λ + λ e^{−2iΦ} e^{s}].
///
/// `overlap` is Re⟨Ω₀|Ω_f⟩, i.e. e^{s(0)}. For a long-time profile the global
/// rotation e^{−2iεt} has no limit and is dropped; every distance is blind to it.
pub fn coherence_factor(
    lambda: f64,
    profile: &DecoherenceProfile,
    epsilon: f64,
    overlap: f64,
) -> Result<Complex64> {
    let norm = normalization_c(lambda, overlap)?;
    let rotation = if profile.t.is_finite() {
        Complex64::from_polar(1.0, -2.0 * epsilon * profile.t)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let bracket =
        (1.0 - lambda) + lambda * Complex64::from_polar(profile.s.exp(), -2.0 * profile.phi);
    Ok(rotation * bracket * ((-profile.r).exp() / norm))
}

/// ρ = [[|b₊|², b₊b₋*A], [b₊*b₋A*, |b₋|²]].
pub fn reduced_state(amplitudes: &QubitAmplitudes, a: Complex64) -> Result<QubitDensityMatrix> {
    let modulus = a.norm();
    if !modulus.is_finite() || modulus > 1.0 + PHYSICALITY_TOL {
        return Err(Error::Unphysical { modulus });
    }
    let c = amplitudes.coherence() * a;
    QubitDensityMatrix::new([
        [Complex64::new(amplitudes.b_plus.norm_sqr(), 0.0), c],
        [c.conj(), Complex64::new(amplitudes.b_minus.norm_sqr(), 0.0)],
    ])
}

/// Trace distance ½ Tr|ρ₁ − ρ₂| from the eigenvalues of the Hermitian difference.
pub fn trace_distance(rho1: &QubitDensityMatrix, rho2: &QubitDensityMatrix) -> f64 {
    let diff = rho1.as_matrix() - rho2.as_matrix();
    // symmetrize away representation noise before the Hermitian solver
    let herm = (diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigenvalues();
    0.5 * eig.iter().map(|v| v.abs()).sum::<f64>()
}

/// Distance between two states with arbitrary amplitudes and factors:
/// D² = (|b₊⁽¹⁾|² − |b₊⁽²⁾|²)² + |b₊⁽¹⁾b₋⁽¹⁾* A₁ − b₊⁽²⁾b₋⁽²⁾* A₂|².
pub fn distance_closed_form(
    b1: &QubitAmplitudes,
    a1: Complex64,
    b2: &QubitAmplitudes,
    a2: Complex64,
) -> f64 {
    let gap = b1.population_plus() - b2.population_plus();
    let coh = b1.coherence() * a1 - b2.coherence() * a2;
    gap.hypot(coh.norm())
}

/// Distance when both states share the environment state, hence the factor A:
/// D² = (|b₊⁽¹⁾|² − |b₊⁽²⁾|²)² + |b₊⁽¹⁾b₋⁽¹⁾* − b₊⁽²⁾b₋⁽²⁾*|² |A|².
pub fn distance_same_environment(b1: &QubitAmplitudes, b2: &QubitAmplitudes, a: Complex64) -> f64 {
    let gap = b1.population_plus() - b2.population_plus();
    let coh = (b1.coherence() - b2.coherence()).norm() * a.norm();
    gap.hypot(coh)
}

/// Weights a, b of the difference A_{λ₁} − A_{λ₂} at fixed amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairWeights {
    /// (1−λ₁)/C_{λ₁} − (1−λ₂)/C_{λ₂}
    pub a: f64,
    /// λ₁/C_{λ₁} − λ₂/C_{λ₂}
    pub b: f64,
}

pub fn pair_weights(lambda1: f64, lambda2: f64, overlap: f64) -> Result<PairWeights> {
    if lambda1 == lambda2 {
        check_lambda(lambda1)?;
        check_overlap(overlap)?;
        return Ok(PairWeights { a: 0.0, b: 0.0 });
    }
    let c1 = normalization_c(lambda1, overlap)?;
    let c2 = normalization_c(lambda2, overlap)?;
    Ok(PairWeights {
        a: (1.0 - lambda1) / c1 - (1.0 - lambda2) / c2,
        b: lambda1 / c1 - lambda2 / c2,
    })
}

/// D = |b₊b₋*| e^{−r} √(a² + b²e^{2s} + 2ab e^{s} cos 2Φ).
///
/// The root is evaluated as the modulus of a + b e^{s} e^{−2iΦ}, which avoids
/// cancellation where the distance dips towards zero.
pub fn distance_same_amplitudes(w: &PairWeights, profile: &DecoherenceProfile, bscale: f64) -> f64 {
    let es = profile.s.exp();
    let two_phi = 2.0 * profile.phi;
    let re = w.a + w.b * es * two_phi.cos();
    let im = w.b * es * two_phi.sin();
    bscale * (-profile.r).exp() * re.hypot(im)
}
