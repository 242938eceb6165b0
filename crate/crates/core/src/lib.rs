pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod lineshape;
pub mod ode;
pub mod propagator;
pub mod pulses;
pub mod quad;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
pub use propagator::{SU2Operator, StateVector};
pub use pulses::{pulse_area, rabi_at, rabi_derivative, ExpSign, PulseKind, PulseShape, SystemParams};
