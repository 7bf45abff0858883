//! Two-qubit teleportation channels: Bell-CHSH violation, teleportation
//! fidelity, and Bell teleportation inequalities.
//!
//! Everything is generic over [`Real`] (`f64` or `f32`); the aliases below fix
//! the scalar to `f64` or `f32` for the common types.

pub mod bellchsh;
pub mod protocol;
pub mod qlinalg;
pub mod real;
pub mod states;
pub mod telebell;

pub use real::Real;

pub use bellchsh::{beta_max, beta_oracle, chsh_value, optimal_settings};
pub use protocol::{fidelity_average, fidelity_for_state, fidelity_standard_closed, FidelityClass, Quadrature};
pub use states::{correlation_matrix, parse_state_spec, BellState, StateSpec};
pub use telebell::{
    tau_lower_bound, tau_max, tele_value, threshold_check, AssignmentClass, BivalentAssignment, ConditionFlags,
    OptimizerConfig,
};

pub type ComplexMatrixF64 = qlinalg::ComplexMatrix<f64>;
pub type ComplexMatrixF32 = qlinalg::ComplexMatrix<f32>;
pub type DensityOperatorF64 = states::DensityOperator<f64>;
pub type DensityOperatorF32 = states::DensityOperator<f32>;
pub type PureQubitStateF64 = states::PureQubitState<f64>;
pub type PureQubitStateF32 = states::PureQubitState<f32>;
pub type CorrelationMatrixF64 = states::CorrelationMatrix<f64>;
pub type CorrelationMatrixF32 = states::CorrelationMatrix<f32>;
pub type StrategyF64 = protocol::Strategy<f64>;
pub type StrategyF32 = protocol::Strategy<f32>;
pub type ChshSettingsF64 = bellchsh::ChshSettings<f64>;
pub type ChshSettingsF32 = bellchsh::ChshSettings<f32>;
pub type TeleSettingsF64 = telebell::TeleSettings<f64>;
pub type TeleSettingsF32 = telebell::TeleSettings<f32>;
pub type TauResultF64 = telebell::TauResult<f64>;
pub type TauResultF32 = telebell::TauResult<f32>;
pub type ThresholdCheckF64 = telebell::ThresholdCheck<f64>;
pub type ThresholdCheckF32 = telebell::ThresholdCheck<f32>;
