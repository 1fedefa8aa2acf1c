use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WkbError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no classically allowed region at E = {energy}, M = {angular_momentum}{}", if *.circular_orbit { " (circular orbit)" } else { "" })]
    NoBoundRegion {
        energy: f64,
        angular_momentum: f64,
        circular_orbit: bool,
    },

    #[error("outer region unbounded at E = {energy}: scattering regime")]
    Scattering { energy: f64 },

    #[error("no bound state for n_r = {n_r}, M = {angular_momentum}: {reason}")]
    NoBoundState {
        n_r: u32,
        angular_momentum: f64,
        reason: String,
    },

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("shooting oracle failed: {0}")]
    OracleFailure(String),
}

impl WkbError {
    /// Failures that indicate a bug or an exhausted numerical budget rather
    /// than a physical absence of the requested state.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            WkbError::NotBracketed { .. } | WkbError::NoConvergence(_) | WkbError::OracleFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, WkbError>;
