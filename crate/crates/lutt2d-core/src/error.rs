use alloc::string::String;

/// Errors raised by parameter validation and by operations evaluated
/// outside their domain.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violates one of the model's admissibility constraints.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An operation was evaluated outside its domain (zero mode, τ = 0, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The nodal Hamiltonian is unstable (γ ≥ 1).
    #[error("nodal Hamiltonian is not bounded below: gamma = {0} >= 1")]
    Unstable(f64),
    /// A Bardeen–Pines denominator hit a boson pole.
    #[error("resonant denominator: omega_s = {omega}, energy transfer = {delta_e}")]
    Resonance { omega: f64, delta_e: f64 },
    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    /// Fock-space request larger than the memory guard allows.
    #[error("mode set too large: {0} modes (limit {1})")]
    TooManyModes(usize, usize),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
