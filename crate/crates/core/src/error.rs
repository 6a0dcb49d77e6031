use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (value {value:e}, error estimate {error:e}, target {target:e})"
    )]
    NonConvergence {
        value: f64,
        error: f64,
        target: f64,
        subdivisions: usize,
    },

    /// A coherence factor whose modulus exceeds one cannot describe a qubit state.
    #[error("unphysical coherence factor: |A| = {modulus} > 1")]
    Unphysical { modulus: f64 },

    /// The long-time limit does not exist for the requested parameters.
    #[error("divergent long-time limit: {0}")]
    Divergent(String),

    /// The gain ratio does not change sign across the requested interval.
    #[error("no bracket: gain ratio {ratio_lo:?} at lower end, {ratio_hi:?} at upper end")]
    NoBracket {
        ratio_lo: Option<f64>,
        ratio_hi: Option<f64>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
