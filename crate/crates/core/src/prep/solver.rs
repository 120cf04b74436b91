//! Multi-start damped Newton search for population-equalising pulse angles.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::cascade::{validate_cascade, CascadeSpec};
use super::residual::residual_rad;
use crate::error::{Error, Result};
use crate::scalar::{deg_to_rad, rad_to_deg, Real};
use crate::spin::SpinSystem;

/// Angle vectors (degrees) reported for the two- and three-spin systems; used as
/// extra starting points when their length matches the cascade.
pub const PUBLISHED_ANGLES_DEG: &[&[f64]] = &[
    &[77.40, 77.40],
    &[127.13, 186.01],
    &[182.02, 179.04, 229.38, 193.46, 200.28, 105.75],
    &[201.89, 258.83, 313.40, 346.31, 295.37, 234.18],
];

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Grid points per dimension; `None` picks 5 for k <= 2, 3 for k <= 6, else 2.
    pub grid_per_dim: Option<usize>,
    /// Required Euclidean norm of the residual at a root.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Forward-difference step for the Jacobian, radians.
    pub fd_step: f64,
    /// Add [`PUBLISHED_ANGLES_DEG`] entries of matching length as starts.
    pub published_seeds: bool,
    /// Additional starting points in degrees.
    pub extra_seeds: Vec<Vec<f64>>,
    /// Roots closer than this (degrees, componentwise) are merged.
    pub dedup_deg: f64,
    /// Upper end of the open search box (0, max)^k in degrees; `None` uses 360 for
    /// k <= 2 and 720 (the spin-1/2 rotation period) for longer cascades.
    pub max_angle_deg: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            grid_per_dim: None,
            newton_tol: 1e-10,
            max_iter: 100,
            fd_step: 1e-6,
            published_seeds: true,
            extra_seeds: Vec::new(),
            dedup_deg: 0.01,
            max_angle_deg: None,
        }
    }
}

/// Outcome of a single Newton start.
#[derive(Clone, Debug, PartialEq)]
pub struct StartTrace<T> {
    pub start_deg: Vec<T>,
    pub converged: bool,
    pub iterations: usize,
    pub final_norm: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult<T> {
    /// Distinct roots in degrees inside the search box, sorted lexicographically.
    pub roots: Vec<Vec<T>>,
    pub residual_norms: Vec<T>,
    pub starts_tried: usize,
    /// Per start: converged to a root inside the search box.
    pub converged: Vec<bool>,
    pub traces: Vec<StartTrace<T>>,
    pub best_residual: T,
}

impl<T: Real> SolverResult<T> {
    /// Root with the smallest residual norm.
    pub fn best_root(&self) -> Option<&[T]> {
        self.residual_norms
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite norms"))
            .map(|(i, _)| self.roots[i].as_slice())
    }

    /// Root closest (max-norm, degrees) to `target`.
    pub fn nearest_root(&self, target: &[f64]) -> Option<(&[T], f64)> {
        self.roots
            .iter()
            .map(|r| {
                let d = r
                    .iter()
                    .zip(target)
                    .map(|(a, b)| (a.as_f64() - b).abs())
                    .fold(0.0, f64::max);
                (r.as_slice(), d)
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distance"))
    }
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, x| a + *x * *x).sqrt()
}

fn default_grid(k: usize) -> usize {
    match k {
        0..=2 => 5,
        3..=6 => 3,
        _ => 2,
    }
}

/// Uniform cell-centred grid over (0, 360)^k, in degrees.
pub fn start_grid(k: usize, per_dim: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..per_dim)
        .map(|j| (j as f64 + 0.5) * 360.0 / per_dim as f64)
        .collect();
    let total = per_dim.checked_pow(k as u32).expect("grid size overflow");
    (0..total)
        .map(|mut idx| {
            let mut p = vec![0.0; k];
            for slot in p.iter_mut().rev() {
                *slot = axis[idx % per_dim];
                idx /= per_dim;
            }
            p
        })
        .collect()
}

struct Newton<'a, T: Real> {
    system: &'a SpinSystem<T>,
    spec: &'a CascadeSpec,
    tol: T,
    max_iter: usize,
    h: T,
    upper: T,
}

impl<T: Real> Newton<'_, T> {
    fn f(&self, x: &[T]) -> Vec<T> {
        residual_rad(x, self.system, self.spec).expect("lengths validated before the search")
    }

    fn inside(&self, x: &[T]) -> bool {
        x.iter().all(|a| *a > T::zero() && *a < self.upper)
    }

    fn run(&self, start_rad: Vec<T>) -> (Vec<T>, T, usize, bool) {
        let k = start_rad.len();
        let m = self.spec.non_target_levels().len().saturating_sub(1);
        let mut x = start_rad;
        let mut r = self.f(&x);
        let mut rn = norm(&r);
        for iter in 0..self.max_iter {
            if rn < self.tol {
                return (x, rn, iter, true);
            }
            let mut jac = DMatrix::<T>::zeros(m, k);
            for j in 0..k {
                let mut xp = x.clone();
                xp[j] += self.h;
                let rp = self.f(&xp);
                for i in 0..m {
                    jac[(i, j)] = (rp[i] - r[i]) / self.h;
                }
            }
            let rhs = DVector::from_iterator(m, r.iter().map(|v| -*v));
            let step = match jac.clone().lu().solve(&rhs) {
                Some(s) if s.iter().all(|v| v.is_finite()) => s,
                _ => match jac.svd(true, true).solve(&rhs, T::lit(1e-12)) {
                    Ok(s) => s,
                    Err(_) => return (x, rn, iter, false),
                },
            };
            let mut lambda = T::one();
            let mut accepted = false;
            for _ in 0..30 {
                let trial: Vec<T> = x
                    .iter()
                    .zip(step.iter())
                    .map(|(a, d)| *a + lambda * *d)
                    .collect();
                if !self.inside(&trial) {
                    lambda *= T::lit(0.5);
                    continue;
                }
                let tr = self.f(&trial);
                let tn = norm(&tr);
                if tn < rn {
                    x = trial;
                    r = tr;
                    rn = tn;
                    accepted = true;
                    break;
                }
                lambda *= T::lit(0.5);
            }
            if !accepted {
                return (x, rn, iter + 1, rn < self.tol);
            }
        }
        (x, rn, self.max_iter, rn < self.tol)
    }
}

/// Finds all angle vectors (degrees, inside the open search box) reached from the
/// configured starts for which the cascade equalises every non-target population.
pub fn solve_angles<T: Real>(
    system: &SpinSystem<T>,
    spec: &CascadeSpec,
    opts: &SolveOptions,
) -> Result<SolverResult<T>> {
    validate_cascade(spec).into_result()?;
    if system.n_spins() != spec.n_spins {
        return Err(Error::Input(format!(
            "cascade is for {} spins but the system has {}",
            spec.n_spins,
            system.n_spins()
        )));
    }
    let k = spec.len();
    if k == 0 {
        // A single non-target level is trivially equalised.
        return Ok(SolverResult {
            roots: vec![vec![]],
            residual_norms: vec![T::zero()],
            starts_tried: 0,
            converged: vec![],
            traces: vec![],
            best_residual: T::zero(),
        });
    }
    let max_angle = opts
        .max_angle_deg
        .unwrap_or(if k <= 2 { 360.0 } else { 720.0 });
    if max_angle.is_nan() || max_angle <= 0.0 {
        return Err(Error::Input(
            "search box upper bound must be positive".into(),
        ));
    }
    let per_dim = opts.grid_per_dim.unwrap_or_else(|| default_grid(k));
    if per_dim == 0 {
        return Err(Error::Input(
            "grid must have at least one point per dimension".into(),
        ));
    }
    let mut starts = start_grid(k, per_dim);
    if opts.published_seeds {
        starts.extend(
            PUBLISHED_ANGLES_DEG
                .iter()
                .filter(|s| s.len() == k)
                .map(|s| s.to_vec()),
        );
    }
    for s in &opts.extra_seeds {
        if s.len() != k {
            return Err(Error::Input(format!(
                "seed has {} angles, expected {k}",
                s.len()
            )));
        }
        starts.push(s.clone());
    }

    let newton = Newton {
        system,
        spec,
        tol: T::lit(opts.newton_tol),
        max_iter: opts.max_iter,
        h: T::lit(opts.fd_step),
        upper: deg_to_rad(T::lit(max_angle)),
    };
    let traces: Vec<(StartTrace<T>, Option<Vec<T>>)> = starts
        .par_iter()
        .map(|s| {
            let start: Vec<T> = s.iter().map(|d| deg_to_rad(T::lit(*d))).collect();
            let (x, rn, iterations, ok) = newton.run(start);
            let converged = ok && newton.inside(&x);
            let trace = StartTrace {
                start_deg: s.iter().map(|d| T::lit(*d)).collect(),
                converged,
                iterations,
                final_norm: rn,
            };
            (
                trace,
                converged.then(|| x.into_iter().map(rad_to_deg).collect()),
            )
        })
        .collect();

    let best_residual = traces
        .iter()
        .map(|(t, _)| t.final_norm)
        .fold(T::max_value().expect("bounded"), |a, b| a.min(b));
    let mut found: Vec<(Vec<T>, T)> = traces
        .iter()
        .filter_map(|(t, root)| root.clone().map(|r| (r, t.final_norm)))
        .collect();
    found.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.partial_cmp(y).expect("finite angles"))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let dedup = T::lit(opts.dedup_deg);
    let mut roots: Vec<Vec<T>> = Vec::new();
    let mut residual_norms: Vec<T> = Vec::new();
    for (r, n) in found {
        let dup = roots
            .iter()
            .position(|q| q.iter().zip(&r).all(|(a, b)| (*a - *b).abs() < dedup));
        match dup {
            Some(i) if n < residual_norms[i] => {
                roots[i] = r;
                residual_norms[i] = n;
            }
            Some(_) => {}
            None => {
                roots.push(r);
                residual_norms.push(n);
            }
        }
    }
    if roots.is_empty() {
        return Err(Error::NoSolution {
            starts: starts.len(),
            best_residual: best_residual.as_f64(),
        });
    }
    let (traces, _): (Vec<_>, Vec<_>) = traces.into_iter().unzip();
    Ok(SolverResult {
        roots,
        residual_norms,
        starts_tried: starts.len(),
        converged: traces.iter().map(|t| t.converged).collect(),
        traces,
        best_residual,
    })
}
