use super::cascade::CascadeSpec;
use crate::error::{Error, Result};
use crate::scalar::{deg_to_rad, Real};
use crate::spin::{
    evolve, expm_unitary, generator, thermal_deviation, DeviationMatrix, Operator, Pulse,
    SpinSystem,
};

/// Simultaneous x-phase pulses of the cascade with the given angles (radians).
pub fn cascade_pulses<T: Real>(spec: &CascadeSpec, angles_rad: &[T]) -> Result<Vec<Pulse<T>>> {
    if angles_rad.len() != spec.len() {
        return Err(Error::Input(format!(
            "got {} angles for a cascade of {} steps",
            angles_rad.len(),
            spec.len()
        )));
    }
    Ok(spec
        .steps
        .iter()
        .zip(angles_rad)
        .map(|(s, a)| Pulse::x(s.from, s.to, *a))
        .collect())
}

pub fn cascade_unitary<T: Real>(spec: &CascadeSpec, angles_rad: &[T]) -> Result<Operator<T>> {
    let pulses = cascade_pulses(spec, angles_rad)?;
    expm_unitary(&generator(&pulses, spec.n_spins)?)
}

/// State right after the simultaneous pulses, before the crusher.
pub fn pulsed_state<T: Real>(
    system: &SpinSystem<T>,
    spec: &CascadeSpec,
    angles_rad: &[T],
) -> Result<DeviationMatrix<T>> {
    if system.n_spins() != spec.n_spins {
        return Err(Error::Input(format!(
            "cascade is for {} spins but the system has {}",
            spec.n_spins,
            system.n_spins()
        )));
    }
    let u = cascade_unitary(spec, angles_rad)?;
    evolve(&thermal_deviation(system), &u)
}

/// Population-equalisation residual with angles in degrees.
///
/// Components are `rho(l,l) - rho(l0,l0)` for every non-target level `l` other than
/// the reference `l0` (the first non-target level), in index order.
pub fn residual<T: Real>(
    angles_deg: &[T],
    system: &SpinSystem<T>,
    spec: &CascadeSpec,
) -> Result<Vec<T>> {
    let rad: Vec<T> = angles_deg.iter().map(|a| deg_to_rad(*a)).collect();
    residual_rad(&rad, system, spec)
}

pub fn residual_rad<T: Real>(
    angles_rad: &[T],
    system: &SpinSystem<T>,
    spec: &CascadeSpec,
) -> Result<Vec<T>> {
    let rho = pulsed_state(system, spec, angles_rad)?;
    let levels = spec.non_target_levels();
    let Some((reference, rest)) = levels.split_first() else {
        return Ok(vec![]);
    };
    let r0 = rho.population(*reference);
    Ok(rest.iter().map(|l| rho.population(*l) - r0).collect())
}
