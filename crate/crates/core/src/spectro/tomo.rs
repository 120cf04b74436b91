use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::readout::{line_amplitudes, readout_unitary, ReadoutPulse};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::{
    evolve, max_rel_error, spin_op, thermal_deviation, Axis, CMatrix, DeviationMatrix, Operator,
    SpinSystem,
};

/// One readout setting: the hard pulse applied to each spin, spin 1 first.
pub type ReadoutSetting = Vec<ReadoutPulse>;

/// Product set `{none, x90, y90}^n`, spin 1 varying slowest.
pub fn tomography_settings(n: usize) -> Result<Vec<ReadoutSetting>> {
    if n == 0 || n > 3 {
        return Err(Error::Input(format!(
            "tomography settings are defined for 1 to 3 spins, got {n}"
        )));
    }
    let mut out: Vec<ReadoutSetting> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                ReadoutPulse::ALL.into_iter().map(move |p| {
                    let mut s = prefix.clone();
                    s.push(p);
                    s
                })
            })
            .collect();
    }
    Ok(out)
}

/// Line amplitudes of every spin after the setting's pulses, spin-major then transition order.
fn setting_amplitudes<T: Real>(
    rho: &DeviationMatrix<T>,
    setting: &[ReadoutPulse],
) -> Result<Vec<Complex<T>>> {
    let n = rho.n_spins();
    let rotated = evolve(rho, &readout_unitary(setting, n)?)?;
    let mut out = Vec::with_capacity(n << (n - 1));
    for spin in 1..=n {
        out.extend(line_amplitudes(&rotated, spin)?.into_iter().map(|(_, a)| a));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet<T: Real> {
    pub n_spins: usize,
    pub settings: Vec<ReadoutSetting>,
    /// `amplitudes[s]` holds the lines recorded under `settings[s]`.
    pub amplitudes: Vec<Vec<Complex<T>>>,
    pub noise_sigma: T,
    pub seed: Option<u64>,
    /// Trace of the measured state; line amplitudes are blind to it.
    pub trace: T,
}

/// Largest line magnitude of the thermal state under a single-spin x90 readout.
pub fn max_thermal_amplitude<T: Real>(system: &SpinSystem<T>) -> Result<T> {
    let rho = thermal_deviation(system);
    let n = system.n_spins();
    let mut best = T::zero();
    for spin in 1..=n {
        let mut setting = vec![ReadoutPulse::None; n];
        setting[spin - 1] = ReadoutPulse::X90;
        for a in setting_amplitudes(&rho, &setting)? {
            best = best.max(a.modulus());
        }
    }
    Ok(best)
}

/// Records all single-quantum line amplitudes for each setting.
///
/// With `noise_sigma > 0`, independent Gaussian noise of standard deviation
/// `noise_sigma * max_thermal_amplitude` is added to the real and imaginary parts,
/// drawn from a ChaCha stream seeded with `seed`.
pub fn simulate_measurements<T: Real>(
    rho: &DeviationMatrix<T>,
    system: &SpinSystem<T>,
    settings: &[ReadoutSetting],
    noise_sigma: T,
    seed: u64,
) -> Result<MeasurementSet<T>> {
    if rho.n_spins() != system.n_spins() {
        return Err(Error::Input(format!(
            "state has {} spins but the system has {}",
            rho.n_spins(),
            system.n_spins()
        )));
    }
    if !noise_sigma.is_finite() || noise_sigma < T::zero() {
        return Err(Error::Input(format!(
            "noise sigma must be >= 0, got {noise_sigma}"
        )));
    }
    let mut amplitudes = settings
        .iter()
        .map(|s| setting_amplitudes(rho, s))
        .collect::<Result<Vec<_>>>()?;
    let noisy = noise_sigma > T::zero();
    if noisy {
        let sd = (noise_sigma * max_thermal_amplitude(system)?).as_f64();
        let normal = Normal::new(0.0, sd).map_err(|e| Error::Input(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for row in &mut amplitudes {
            for a in row.iter_mut() {
                let re = T::lit(normal.sample(&mut rng));
                let im = T::lit(normal.sample(&mut rng));
                *a += Complex::new(re, im);
            }
        }
    }
    Ok(MeasurementSet {
        n_spins: rho.n_spins(),
        settings: settings.to_vec(),
        amplitudes,
        noise_sigma,
        seed: noisy.then_some(seed),
        trace: rho.trace(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TomographyResult<T: Real> {
    pub reconstructed: DeviationMatrix<T>,
    /// Euclidean norm of the least-squares residual.
    pub residual_norm: T,
    pub settings_used: usize,
    pub max_rel_error: Option<T>,
}

impl<T: Real> TomographyResult<T> {
    /// Fills `max_rel_error` against a known reference state.
    pub fn with_reference(mut self, reference: &DeviationMatrix<T>) -> Result<Self> {
        self.max_rel_error = Some(max_rel_error(&self.reconstructed, reference)?);
        Ok(self)
    }
}

/// Non-identity Pauli products `sigma_{a_1} x ... x sigma_{a_n}`, in base-4 order.
pub fn product_operator_basis<T: Real>(n: usize) -> Result<Vec<Operator<T>>> {
    let axes = [None, Some(Axis::X), Some(Axis::Y), Some(Axis::Z)];
    let two = T::lit(2.0);
    (1..1usize << (2 * n))
        .map(|code| {
            let mut op = Operator::identity(n)?;
            for spin in 1..=n {
                let digit = (code >> (2 * (n - spin))) & 3;
                if let Some(axis) = axes[digit] {
                    op = &op * &spin_op(spin, axis, n)?.scale(two);
                }
            }
            Ok(op)
        })
        .collect()
}

/// Real design matrix: rows alternate re/im of each recorded line, columns are basis elements.
fn design_matrix<T: Real>(
    n: usize,
    settings: &[ReadoutSetting],
    basis: &[Operator<T>],
) -> Result<DMatrix<T>> {
    let per_setting = n << (n - 1);
    let mut a = DMatrix::zeros(2 * per_setting * settings.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        let rho = DeviationMatrix::from_matrix(n, b.matrix().clone())?;
        for (s, setting) in settings.iter().enumerate() {
            for (l, amp) in setting_amplitudes(&rho, setting)?.into_iter().enumerate() {
                let row = 2 * (s * per_setting + l);
                a[(row, col)] = amp.re;
                a[(row + 1, col)] = amp.im;
            }
        }
    }
    Ok(a)
}

/// Linear-inversion tomography over the product-operator basis.
///
/// Each amplitude is a real-linear functional of the `4^n - 1` coefficients; the
/// normal equations are solved after checking the design has full column rank.
pub fn reconstruct<T: Real>(
    measurements: &MeasurementSet<T>,
    system: &SpinSystem<T>,
) -> Result<TomographyResult<T>> {
    let n = measurements.n_spins;
    if n != system.n_spins() {
        return Err(Error::Input(format!(
            "measurements cover {n} spins but the system has {}",
            system.n_spins()
        )));
    }
    if measurements.amplitudes.len() != measurements.settings.len() {
        return Err(Error::Input(
            "one amplitude row per setting is required".into(),
        ));
    }
    let per_setting = n << (n - 1);
    let basis = product_operator_basis::<T>(n)?;
    let a = design_matrix(n, &measurements.settings, &basis)?;
    let mut y = DVector::zeros(a.nrows());
    for (s, row) in measurements.amplitudes.iter().enumerate() {
        if row.len() != per_setting {
            return Err(Error::Input(format!(
                "setting {s} has {} amplitudes, expected {per_setting}",
                row.len()
            )));
        }
        for (l, amp) in row.iter().enumerate() {
            y[2 * (s * per_setting + l)] = amp.re;
            y[2 * (s * per_setting + l) + 1] = amp.im;
        }
    }

    let needed = basis.len();
    let normal = a.transpose() * &a;
    let eig = SymmetricEigen::new(normal.clone()).eigenvalues;
    let top = eig.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let floor = top * T::lit(1e-10);
    let rank = eig.iter().filter(|v| v.abs() > floor).count();
    if rank < needed || top == T::zero() {
        return Err(Error::ProtocolIncomplete { rank, needed });
    }
    let rhs = a.transpose() * &y;
    let x = normal
        .cholesky()
        .map(|c| c.solve(&rhs))
        .ok_or(Error::ProtocolIncomplete { rank, needed })?;
    let residual_norm = (&a * &x - &y).norm();

    let d = 1usize << n;
    let mut mat: CMatrix<T> = CMatrix::zeros(d, d);
    for (coeff, b) in x.iter().zip(&basis) {
        mat += b.matrix() * Complex::new(*coeff, T::zero());
    }
    let bg = measurements.trace / T::lit(d as f64);
    for i in 0..d {
        mat[(i, i)] += Complex::new(bg, T::zero());
    }
    // Exact Hermitian symmetrization removes rounding asymmetry.
    let mat = (&mat + mat.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    Ok(TomographyResult {
        reconstructed: DeviationMatrix::from_matrix(n, mat)?,
        residual_norm,
        settings_used: measurements.settings.len(),
        max_rel_error: None,
    })
}
