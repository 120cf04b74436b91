//! Simulated readout: stick spectra after hard pulses and linear-inversion tomography.

mod readout;
mod tomo;

pub use readout::{
    line_amplitudes, line_frequency, readout_spectrum, readout_unitary, spin_transitions,
    LineAmplitude, ReadoutPulse, SpectralLine, StickSpectrum,
};
pub use tomo::{
    max_thermal_amplitude, product_operator_basis, reconstruct, simulate_measurements,
    tomography_settings, MeasurementSet, ReadoutSetting, TomographyResult,
};
