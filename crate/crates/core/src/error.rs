use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("{what}: argument outside the validated domain ({detail})")]
    OutOfRange { what: &'static str, detail: String },
    #[error("integration failed at tau = {tau}: {reason}")]
    IntegrationFailure { tau: f64, reason: String },
    #[error("mixing angle undefined at the conical point Omega = Delta = 0")]
    UndefinedAngle,
    #[error("validity condition violated: {0}")]
    Validity(String),
    #[error("adiabaticity condition violated: {0}")]
    Adiabaticity(String),
    #[error("pulse area {area} is below the required minimum {min}")]
    AreaTooSmall { area: f64, min: f64 },
    #[error("junction at tau = {tau} is not adiabatic (gamma~ = {gamma_tilde}, threshold {threshold})")]
    NonAdiabaticJunction { tau: f64, gamma_tilde: f64, threshold: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
