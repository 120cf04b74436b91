use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::{
    evolve, expm_unitary, spin_op, Axis, DeviationMatrix, LevelIndex, Operator, SpinSystem,
};

/// Hard readout pulse on one spin.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ReadoutPulse {
    #[default]
    None,
    X90,
    Y90,
}

impl ReadoutPulse {
    pub const ALL: [ReadoutPulse; 3] = [ReadoutPulse::None, ReadoutPulse::X90, ReadoutPulse::Y90];

    fn axis(self) -> Option<Axis> {
        match self {
            ReadoutPulse::None => None,
            ReadoutPulse::X90 => Some(Axis::X),
            ReadoutPulse::Y90 => Some(Axis::Y),
        }
    }
}

impl fmt::Display for ReadoutPulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReadoutPulse::None => "none",
            ReadoutPulse::X90 => "x90",
            ReadoutPulse::Y90 => "y90",
        })
    }
}

impl FromStr for ReadoutPulse {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(ReadoutPulse::None),
            "x90" => Ok(ReadoutPulse::X90),
            "y90" => Ok(ReadoutPulse::Y90),
            other => Err(Error::Input(format!(
                "unknown readout pulse `{other}` (expected none, x90 or y90)"
            ))),
        }
    }
}

/// Propagator of simultaneous hard pi/2 pulses, `pulses[i]` acting on spin `i + 1`.
pub fn readout_unitary<T: Real>(pulses: &[ReadoutPulse], n: usize) -> Result<Operator<T>> {
    if pulses.len() != n {
        return Err(Error::Input(format!(
            "{} readout pulses given for {n} spins",
            pulses.len()
        )));
    }
    let quarter = T::frac_pi_2();
    let mut h = Operator::zeros(n)?;
    for (i, p) in pulses.iter().enumerate() {
        if let Some(axis) = p.axis() {
            h = &h + &spin_op(i + 1, axis, n)?.scale(quarter);
        }
    }
    expm_unitary(&h)
}

/// Single-quantum transitions of `spin` as (m, k): `m` holds the spin in |0>, `k` in |1>.
pub fn spin_transitions(spin: usize, n: usize) -> Result<Vec<(LevelIndex, LevelIndex)>> {
    if spin == 0 || spin > n {
        return Err(Error::Input(format!("spin {spin} out of range 1..={n}")));
    }
    let mask = 1usize << (n - spin);
    Ok((0..1usize << n)
        .filter(|m| m & mask == 0)
        .map(|m| {
            (
                LevelIndex::from_zero_based(m),
                LevelIndex::from_zero_based(m | mask),
            )
        })
        .collect())
}

/// A transition `(m, k)` with its complex line amplitude.
pub type LineAmplitude<T> = ((LevelIndex, LevelIndex), Complex<T>);

/// Line amplitudes `2 rho_{k,m}` of every transition of `spin`, no pulse applied.
pub fn line_amplitudes<T: Real>(
    rho: &DeviationMatrix<T>,
    spin: usize,
) -> Result<Vec<LineAmplitude<T>>> {
    let two = T::lit(2.0);
    Ok(spin_transitions(spin, rho.n_spins())?
        .into_iter()
        .map(|(m, k)| ((m, k), rho.entry(k, m) * two))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralLine<T: Real> {
    /// Offset from the spin's carrier.
    pub freq_hz: T,
    pub amplitude: Complex<T>,
    pub transition: (LevelIndex, LevelIndex),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StickSpectrum<T: Real> {
    pub spin: usize,
    pub lines: Vec<SpectralLine<T>>,
}

/// Weak-coupling line position: spin offset plus `+J/2` for each partner in |0>, `-J/2` in |1>.
pub fn line_frequency<T: Real>(system: &SpinSystem<T>, spin: usize, m: LevelIndex) -> Result<T> {
    let n = system.n_spins();
    let offset = system
        .offset_hz()
        .map(|o| o[spin - 1])
        .unwrap_or_else(T::zero);
    if n == 1 {
        return Ok(offset);
    }
    let j = system.j_hz().ok_or_else(|| {
        Error::Input("spin system has no j_hz couplings; line frequencies need them".into())
    })?;
    let half = T::lit(0.5);
    Ok((1..=n).filter(|&p| p != spin).fold(offset, |f, p| {
        let coupling = j[spin - 1][p - 1] * half;
        if m.spin_bit(p, n) == 0 {
            f + coupling
        } else {
            f - coupling
        }
    }))
}

/// Applies a hard pi/2 pulse (or none) to the observed spin and reads its lines.
pub fn readout_spectrum<T: Real>(
    rho: &DeviationMatrix<T>,
    spin: usize,
    system: &SpinSystem<T>,
    pulse: ReadoutPulse,
) -> Result<StickSpectrum<T>> {
    let n = system.n_spins();
    if rho.n_spins() != n {
        return Err(Error::Input(format!(
            "state has {} spins but the system has {n}",
            rho.n_spins()
        )));
    }
    let mut pulses = vec![ReadoutPulse::None; n];
    if spin == 0 || spin > n {
        return Err(Error::Input(format!("spin {spin} out of range 1..={n}")));
    }
    pulses[spin - 1] = pulse;
    let rotated = evolve(rho, &readout_unitary(&pulses, n)?)?;
    let lines = line_amplitudes(&rotated, spin)?
        .into_iter()
        .map(|((m, k), amplitude)| {
            Ok(SpectralLine {
                freq_hz: line_frequency(system, spin, m)?,
                amplitude,
                transition: (m, k),
            })
        })
        .collect::<Result<_>>()?;
    Ok(StickSpectrum { spin, lines })
}
