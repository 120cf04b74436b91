use super::cascade::{default_cascade, validate_cascade, CascadeSpec};
use super::residual::pulsed_state;
use super::solver::{solve_angles, SolveOptions, SolverResult};
use crate::error::{Error, Result};
use crate::scalar::{deg_to_rad, Real};
use crate::spin::{
    crush, population_spread, CrushMode, DeviationMatrix, LevelIndex, PurePart, SpinSystem,
    DEFAULT_PURE_TOL,
};

#[derive(Clone, Debug, PartialEq)]
pub struct PrepareOptions {
    pub solve: SolveOptions,
    /// Largest non-target population spread accepted for solver-produced angles.
    pub pure_tol: f64,
}

impl Default for PrepareOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            pure_tol: DEFAULT_PURE_TOL,
        }
    }
}

/// Output of the selective-pulse + crusher pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct Preparation<T: Real> {
    pub state: DeviationMatrix<T>,
    pub cascade: CascadeSpec,
    pub angles_deg: Vec<T>,
    /// Decomposition anchored at the requested target level.
    pub pure: PurePart<T>,
    /// Spread of the non-target populations.
    pub spread: T,
    /// Present when the angles were solved for rather than supplied.
    pub solver: Option<SolverResult<T>>,
}

/// Runs `(beta_1)_x ... (beta_k)_x -> Gz` on the thermal state.
///
/// Without `angles_deg` the angles come from [`solve_angles`] on the default cascade
/// (best-residual root), and the result must then be pseudo-pure within
/// `opts.pure_tol`. Supplied angles are simulated as given and the spread reported.
pub fn prepare_pseudo_pure<T: Real>(
    system: &SpinSystem<T>,
    target: LevelIndex,
    angles_deg: Option<&[T]>,
    opts: &PrepareOptions,
) -> Result<Preparation<T>> {
    let cascade = default_cascade(system.n_spins(), target)?;
    prepare_with_cascade(system, cascade, angles_deg, opts)
}

pub fn prepare_with_cascade<T: Real>(
    system: &SpinSystem<T>,
    cascade: CascadeSpec,
    angles_deg: Option<&[T]>,
    opts: &PrepareOptions,
) -> Result<Preparation<T>> {
    validate_cascade(&cascade).into_result()?;
    let (angles_deg, solver) = match angles_deg {
        Some(a) => (a.to_vec(), None),
        None => {
            let res = solve_angles(system, &cascade, &opts.solve)?;
            let best = res
                .best_root()
                .expect("solver returns at least one root")
                .to_vec();
            (best, Some(res))
        }
    };
    let rad: Vec<T> = angles_deg.iter().map(|a| deg_to_rad(*a)).collect();
    let state = crush(
        &pulsed_state(system, &cascade, &rad)?,
        CrushMode::AllOffDiagonal,
    );
    let target = cascade.target;
    let spread = population_spread(&state, target);
    let diag = state.diagonal();
    let others = T::lit((diag.len() - 1) as f64);
    let mean = diag
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != target.zero_based())
        .fold(T::zero(), |a, (_, v)| a + *v)
        / others;
    let pure = PurePart {
        uniform_coeff: mean,
        pure_coeff: diag[target.zero_based()] - mean,
        target,
    };
    if solver.is_some() && spread > T::lit(opts.pure_tol) {
        return Err(Error::NotPseudoPure {
            reason: format!("non-target populations differ at target {target}"),
            spread: spread.as_f64(),
        });
    }
    Ok(Preparation {
        state,
        cascade,
        angles_deg,
        pure,
        spread,
        solver,
    })
}
