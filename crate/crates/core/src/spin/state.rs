//! Deviation density matrices and the channels acting on them.

use nalgebra::{Complex, ComplexField};

use super::basis::{dim_of, LevelIndex};
use super::operator::{c, max_abs, max_abs_diff, CMatrix, Operator};
use super::system::SpinSystem;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Traceless-deviation density matrix in units of the omitted factor hbar*B/2kT.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationMatrix<T: Real> {
    n_spins: usize,
    mat: CMatrix<T>,
}

impl<T: Real> DeviationMatrix<T> {
    /// Wraps a matrix after checking its dimension and Hermiticity.
    pub fn from_matrix(n_spins: usize, mat: CMatrix<T>) -> Result<Self> {
        let op = Operator::from_matrix(n_spins, mat)?;
        let herr = op.hermiticity_error();
        if herr > T::lit(T::CONTRACT_TOL) {
            return Err(Error::Input(format!(
                "deviation matrix is not Hermitian (max deviation {herr})"
            )));
        }
        Ok(Self {
            n_spins,
            mat: op.into_matrix(),
        })
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let n = diag.len().trailing_zeros() as usize;
        if !diag.len().is_power_of_two() || n == 0 {
            return Err(Error::Input(format!(
                "diagonal length {} is not 2^n",
                diag.len()
            )));
        }
        let mut mat = CMatrix::zeros(diag.len(), diag.len());
        for (i, v) in diag.iter().enumerate() {
            mat[(i, i)] = c(*v, T::zero());
        }
        Ok(Self { n_spins: n, mat })
    }

    /// Deviation of the pure basis state |bits>: `|b><b| - 1/2^n`.
    pub fn basis_state(level: LevelIndex, n_spins: usize) -> Result<Self> {
        let d = dim_of(n_spins)?;
        LevelIndex::new(level.value(), n_spins)?;
        let bg = T::one() / T::lit(d as f64);
        let mut diag = vec![-bg; d];
        diag[level.zero_based()] += T::one();
        Self::from_diagonal(&diag)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn entry(&self, row: LevelIndex, col: LevelIndex) -> Complex<T> {
        self.mat[(row.zero_based(), col.zero_based())]
    }

    /// Population of a level (real part of the diagonal entry).
    pub fn population(&self, level: LevelIndex) -> T {
        self.mat[(level.zero_based(), level.zero_based())].re
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn trace(&self) -> T {
        self.diagonal().into_iter().fold(T::zero(), |a, b| a + b)
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.mat)
    }

    pub fn max_off_diagonal(&self) -> T {
        let mut m = T::zero();
        for r in 0..self.dim() {
            for s in 0..self.dim() {
                if r != s {
                    m = m.max(self.mat[(r, s)].modulus());
                }
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        self.max_off_diagonal() <= tol
    }

    pub fn hermiticity_error(&self) -> T {
        max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            n_spins: self.n_spins,
            mat: self.mat.map(|z| z * s),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Input("dimension mismatch".into()));
        }
        Ok(Self {
            n_spins: self.n_spins,
            mat: self.mat.map(|z| z * a) + other.mat.map(|z| z * b),
        })
    }

    pub fn as_operator(&self) -> Operator<T> {
        Operator::from_matrix(self.n_spins, self.mat.clone()).expect("valid dims")
    }
}

/// Thermal-equilibrium deviation `sum_i gamma_i sigma_z^(i)` (diagonal).
pub fn thermal_deviation<T: Real>(system: &SpinSystem<T>) -> DeviationMatrix<T> {
    let n = system.n_spins();
    let diag: Vec<T> = (0..system.dim())
        .map(|s| {
            let level = LevelIndex::from_zero_based(s);
            system
                .gamma()
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (i, g)| {
                    if level.spin_bit(i + 1, n) == 0 {
                        acc + *g
                    } else {
                        acc - *g
                    }
                })
        })
        .collect();
    DeviationMatrix::from_diagonal(&diag).expect("system dim is a power of two")
}

/// `U rho U^dagger`.
pub fn evolve<T: Real>(rho: &DeviationMatrix<T>, u: &Operator<T>) -> Result<DeviationMatrix<T>> {
    if rho.dim() != u.dim() {
        return Err(Error::Input(format!(
            "dimension mismatch: state {} vs propagator {}",
            rho.dim(),
            u.dim()
        )));
    }
    let out = u.matrix() * &rho.mat * u.matrix().adjoint();
    let herm = (&out + out.adjoint()) * c(T::lit(0.5), T::zero());
    Ok(DeviationMatrix {
        n_spins: rho.n_spins,
        mat: herm,
    })
}

/// Which coherences a crusher gradient removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CrushMode {
    /// Zero every off-diagonal element.
    #[default]
    AllOffDiagonal,
    /// Zero only coherences of nonzero order; zero-quantum terms survive.
    CoherenceOrder,
}

/// Coherence order of element `(j, k)`: weight(k) - weight(j).
pub fn coherence_order(j: LevelIndex, k: LevelIndex) -> i32 {
    k.hamming_weight() as i32 - j.hamming_weight() as i32
}

pub fn crush<T: Real>(rho: &DeviationMatrix<T>, mode: CrushMode) -> DeviationMatrix<T> {
    let mut out = rho.clone();
    let d = rho.dim();
    for r in 0..d {
        for s in 0..d {
            if r == s {
                continue;
            }
            let kill = match mode {
                CrushMode::AllOffDiagonal => true,
                CrushMode::CoherenceOrder => {
                    coherence_order(
                        LevelIndex::from_zero_based(r),
                        LevelIndex::from_zero_based(s),
                    ) != 0
                }
            };
            if kill {
                out.mat[(r, s)] = c(T::zero(), T::zero());
            }
        }
    }
    out
}

/// Decomposition `diag = uniform * 1 + pure * e_target` of a pseudo-pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurePart<T> {
    pub uniform_coeff: T,
    pub pure_coeff: T,
    pub target: LevelIndex,
}

pub const DEFAULT_PURE_TOL: f64 = 1e-6;

/// Spread (max - min) of the populations of every level other than `target`.
pub fn population_spread<T: Real>(rho: &DeviationMatrix<T>, target: LevelIndex) -> T {
    let diag = rho.diagonal();
    let others = diag
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != target.zero_based())
        .map(|(_, v)| *v);
    let (lo, hi) = others.fold(
        (T::max_value().unwrap(), T::min_value().unwrap()),
        |(lo, hi), v| (lo.min(v), hi.max(v)),
    );
    if lo > hi {
        T::zero()
    } else {
        hi - lo
    }
}

pub fn pure_part<T: Real>(rho: &DeviationMatrix<T>) -> Result<PurePart<T>> {
    pure_part_with_tol(rho, T::lit(DEFAULT_PURE_TOL))
}

/// Splits a diagonal deviation matrix into uniform background plus one distinct level.
pub fn pure_part_with_tol<T: Real>(rho: &DeviationMatrix<T>, tol: T) -> Result<PurePart<T>> {
    let off = rho.max_off_diagonal();
    if off > tol {
        return Err(Error::NotPseudoPure {
            reason: "matrix has off-diagonal coherences".into(),
            spread: off.as_f64(),
        });
    }
    let diag = rho.diagonal();
    let d = diag.len();
    let mut best: Option<(T, PurePart<T>)> = None;
    for t in 0..d {
        let target = LevelIndex::from_zero_based(t);
        let spread = population_spread(rho, target);
        let others = d - 1;
        let mean = diag
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != t)
            .fold(T::zero(), |a, (_, v)| a + *v)
            / T::lit(others as f64);
        let part = PurePart {
            uniform_coeff: mean,
            pure_coeff: diag[t] - mean,
            target,
        };
        let better = match &best {
            None => true,
            Some((s, p)) => spread < *s || (spread == *s && part.pure_coeff > p.pure_coeff),
        };
        if better {
            best = Some((spread, part));
        }
    }
    let (spread, part) = best.expect("dimension >= 2");
    if spread > tol {
        return Err(Error::NotPseudoPure {
            reason: "more than one distinct population".into(),
            spread: spread.as_f64(),
        });
    }
    if part.pure_coeff.abs() <= tol {
        return Err(Error::NotPseudoPure {
            reason: "no distinct level".into(),
            spread: spread.as_f64(),
        });
    }
    Ok(part)
}

/// `max |a - b| / max |b|` over all entries.
pub fn max_rel_error<T: Real>(a: &DeviationMatrix<T>, b: &DeviationMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::Input("dimension mismatch".into()));
    }
    let scale = b.max_abs();
    if scale == T::zero() {
        return Err(Error::UndefinedMetric);
    }
    Ok(max_abs_diff(&a.mat, &b.mat) / scale)
}

/// Like [`max_rel_error`] but normalised by the larger of the two matrices.
pub fn max_rel_error_symmetric<T: Real>(
    a: &DeviationMatrix<T>,
    b: &DeviationMatrix<T>,
) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::Input("dimension mismatch".into()));
    }
    let scale = a.max_abs().max(b.max_abs());
    if scale == T::zero() {
        return Err(Error::UndefinedMetric);
    }
    Ok(max_abs_diff(&a.mat, &b.mat) / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::basis::{level_of, Axis};
    use crate::spin::expm::expm_unitary;
    use crate::spin::operator::{generator, spin_op, Pulse};

    fn lvl(v: usize) -> LevelIndex {
        LevelIndex::new(v, 2).unwrap()
    }

    fn diag_close(rho: &DeviationMatrix<f64>, want: &[f64], tol: f64) {
        let d = rho.diagonal();
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() <= tol, "{d:?} vs {want:?}");
        }
    }

    #[test]
    fn thermal_states() {
        let homo = SpinSystem::new(vec![1.0, 1.0]).unwrap();
        diag_close(&thermal_deviation(&homo), &[2.0, 0.0, 0.0, -2.0], 0.0);
        let cf = SpinSystem::new(vec![1.4048, 5.5857]).unwrap();
        diag_close(
            &thermal_deviation(&cf),
            &[6.9905, -4.1809, 4.1809, -6.9905],
            1e-12,
        );
    }

    #[test]
    fn thermal_three_spin_matches_bitstring_loop() {
        let g = [1.4048, 1.4048, 5.5857];
        let sys = SpinSystem::new(g.to_vec()).unwrap();
        let rho = thermal_deviation(&sys);
        for s in 0..8usize {
            let bits = format!("{s:03b}");
            let mut want = 0.0;
            for (i, ch) in bits.chars().enumerate() {
                want += if ch == '0' { g[i] } else { -g[i] };
            }
            assert!((rho.diagonal()[s] - want).abs() < 1e-14);
        }
        // Same state via the operator route: sum_i 2 gamma_i I_z^(i).
        let mut acc = Operator::<f64>::zeros(3).unwrap();
        for (i, gi) in g.iter().enumerate() {
            acc = &acc + &spin_op(i + 1, Axis::Z, 3).unwrap().scale(2.0 * gi);
        }
        assert!(max_abs_diff(acc.matrix(), rho.matrix()) < 1e-14);
    }

    #[test]
    fn evolve_identity_and_mismatch() {
        let rho = thermal_deviation(&SpinSystem::new(vec![1.0, 2.0]).unwrap());
        let out = evolve(&rho, &Operator::identity(2).unwrap()).unwrap();
        assert_eq!(out, rho);
        assert!(evolve(&rho, &Operator::identity(3).unwrap()).is_err());
    }

    #[test]
    fn single_pulse_population_mixing() {
        let rho = DeviationMatrix::from_diagonal(&[0.3, -1.2, 2.0, 0.7]).unwrap();
        let beta = 1.1;
        let u = expm_unitary(&generator(&[Pulse::x(lvl(2), lvl(4), beta)], 2).unwrap()).unwrap();
        let out = evolve(&rho, &u).unwrap();
        let (cs, sn) = ((beta / 2.0).cos().powi(2), (beta / 2.0).sin().powi(2));
        diag_close(
            &out,
            &[0.3, cs * -1.2 + sn * 0.7, 2.0, cs * 0.7 + sn * -1.2],
            1e-14,
        );
    }

    #[test]
    fn homonuclear_pipeline_gives_pseudo_pure() {
        let b = 2f64.sqrt() * (1.0 / 3f64.sqrt()).acos();
        let rho = thermal_deviation(&SpinSystem::new(vec![1.0, 1.0]).unwrap());
        let u = expm_unitary(
            &generator(
                &[Pulse::x(lvl(3), lvl(4), b), Pulse::x(lvl(4), lvl(2), b)],
                2,
            )
            .unwrap(),
        )
        .unwrap();
        let t = evolve(&rho, &u).unwrap();
        assert!(t.max_off_diagonal() > 0.1);
        let out = crush(&t, CrushMode::AllOffDiagonal);
        diag_close(&out, &[2.0, -2.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0], 1e-13);
        assert!(out.is_diagonal(0.0));
    }

    #[test]
    fn coherence_orders() {
        assert_eq!(coherence_order(lvl(1), lvl(4)), 2);
        assert_eq!(coherence_order(lvl(2), lvl(3)), 0);
        assert_eq!(coherence_order(lvl(3), lvl(4)), 1);
        assert_eq!(coherence_order(lvl(4), lvl(3)), -1);
    }

    #[test]
    fn crush_modes() {
        let mut m = CMatrix::<f64>::zeros(4, 4);
        m[(1, 2)] = Complex::new(0.3, 0.1);
        m[(2, 1)] = Complex::new(0.3, -0.1);
        m[(0, 3)] = Complex::new(0.2, 0.0);
        m[(3, 0)] = Complex::new(0.2, 0.0);
        let rho = DeviationMatrix::from_matrix(2, m).unwrap();
        let zq = crush(&rho, CrushMode::CoherenceOrder);
        assert_eq!(zq.matrix()[(1, 2)], Complex::new(0.3, 0.1));
        assert_eq!(zq.matrix()[(0, 3)], Complex::new(0.0, 0.0));
        let all = crush(&rho, CrushMode::AllOffDiagonal);
        assert!(all.is_diagonal(0.0));
        let d = DeviationMatrix::from_diagonal(&[1.0, 2.0, -3.0, 0.0]).unwrap();
        assert_eq!(crush(&d, CrushMode::AllOffDiagonal), d);
    }

    #[test]
    fn pure_part_decompositions() {
        let rho =
            DeviationMatrix::from_diagonal(&[2.0, -2.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0]).unwrap();
        let p = pure_part(&rho).unwrap();
        assert!((p.uniform_coeff + 0.6667).abs() < 1e-4);
        assert!((p.pure_coeff - 2.6667).abs() < 1e-4);
        assert_eq!(p.target, level_of("00").unwrap());

        let rho = DeviationMatrix::from_diagonal(&[6.9905, -2.3303, -2.3303, -2.3303]).unwrap();
        let p = pure_part(&rho).unwrap();
        assert!((p.uniform_coeff + 2.3303).abs() < 1e-12);
        assert!((p.pure_coeff - 9.3208).abs() < 1e-12);
        assert_eq!(p.target.value(), 1);

        let flat = DeviationMatrix::from_diagonal(&[0.5; 4]).unwrap();
        assert!(matches!(pure_part(&flat), Err(Error::NotPseudoPure { .. })));

        let two = DeviationMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.5]).unwrap();
        match pure_part(&two) {
            Err(Error::NotPseudoPure { spread, .. }) => assert!((spread - 0.5).abs() < 1e-12),
            other => panic!("expected spread error, got {other:?}"),
        }
    }

    #[test]
    fn relative_error_metric() {
        let b = DeviationMatrix::from_diagonal(&[2.0, -1.0, 0.0, -1.0]).unwrap();
        assert_eq!(max_rel_error(&b, &b).unwrap(), 0.0);
        let a = DeviationMatrix::from_diagonal(&[2.06, -1.0, 0.0, -1.0]).unwrap();
        assert!((max_rel_error(&a, &b).unwrap() - 0.03).abs() < 1e-12);
        assert!((max_rel_error_symmetric(&a, &b).unwrap() - 0.06 / 2.06).abs() < 1e-12);
        let z = DeviationMatrix::from_diagonal(&[0.0; 4]).unwrap();
        assert_eq!(max_rel_error(&a, &z), Err(Error::UndefinedMetric));
    }

    #[test]
    fn basis_state_deviation_is_traceless() {
        let rho = DeviationMatrix::<f64>::basis_state(level_of("10").unwrap(), 2).unwrap();
        assert!(rho.trace().abs() < 1e-15);
        assert_eq!(pure_part(&rho).unwrap().target.value(), 3);
    }
}
