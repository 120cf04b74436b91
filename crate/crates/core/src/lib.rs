//! Simulation of pseudo-pure state preparation with line-selective pulses in
//! liquid-state NMR: selective-pulse angle solving, the pulse/crusher pipeline,
//! readout spectra and tomography, and Hogg's 1-SAT search on the prepared state.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod dsl;
pub mod error;
pub mod hogg;
pub mod io;
pub mod prep;
pub mod presets;
pub mod scalar;
pub mod spectro;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Operator = spin::Operator<f64>;
pub type DeviationMatrix = spin::DeviationMatrix<f64>;
pub type SpinSystem = spin::SpinSystem<f64>;
pub type PurePart = spin::PurePart<f64>;
pub type SolverResult = prep::SolverResult<f64>;
pub type Preparation = prep::Preparation<f64>;
pub type ChannelSequence = dsl::ChannelSequence<f64>;
pub type StickSpectrum = spectro::StickSpectrum<f64>;
pub type MeasurementSet = spectro::MeasurementSet<f64>;
pub type TomographyResult = spectro::TomographyResult<f64>;
pub type HoggOutcome = hogg::HoggOutcome<f64>;
