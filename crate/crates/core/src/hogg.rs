//! Hogg's single-step quantum search for maximally constrained 1-SAT on two
//! variables, run by conjugation on a pseudo-pure deviation matrix.
//!
//! The step is `U = M R W`: `W` is the Walsh-Hadamard transform, `R` the
//! conflict-counting phase `R_ss = i^{c(s)}` and `M = W D W` the mixing matrix
//! with `D_rr = i^{h(r) - 1}`, `h` the Hamming weight. Bit value 1 means the
//! variable is true; variable 1 is spin 1 (the most significant bit).

use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::{
    evolve, level_of_n, pure_part_with_tol, DeviationMatrix, LevelIndex, Operator, DEFAULT_PURE_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn holds(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "V{}", self.var)
    }
}

/// Conjunction of single-literal clauses, each variable used at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSatFormula {
    n_vars: usize,
    clauses: Vec<Literal>,
}

impl OneSatFormula {
    pub fn new(n_vars: usize, clauses: Vec<Literal>) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::Input("formula needs at least one variable".into()));
        }
        let mut seen = vec![false; n_vars];
        for lit in &clauses {
            if lit.var == 0 || lit.var > n_vars {
                return Err(Error::Input(format!(
                    "variable V{} out of range 1..={n_vars}",
                    lit.var
                )));
            }
            if std::mem::replace(&mut seen[lit.var - 1], true) {
                return Err(Error::Input(format!("variable V{} appears twice", lit.var)));
            }
        }
        Ok(Self { n_vars, clauses })
    }

    /// Parses `V1&!V2`-style formulas over `n_vars` variables; empty text is the empty formula.
    pub fn parse(text: &str, n_vars: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Self::new(n_vars, vec![]);
        }
        let clauses = text
            .split('&')
            .map(|raw| {
                let raw = raw.trim();
                let (negated, rest) = match raw.strip_prefix('!') {
                    Some(r) => (true, r.trim_start()),
                    None => (false, raw),
                };
                let var = rest
                    .strip_prefix('V')
                    .or_else(|| rest.strip_prefix('v'))
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| Error::Input(format!("malformed literal `{raw}`")))?;
                Ok(Literal { var, negated })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_vars, clauses)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Literal] {
        &self.clauses
    }

    pub fn is_maximally_constrained(&self) -> bool {
        self.clauses.len() == self.n_vars
    }

    /// The unique satisfying assignment of a maximally constrained formula.
    pub fn solution(&self) -> Option<String> {
        if !self.is_maximally_constrained() {
            return None;
        }
        let mut bits = vec!['0'; self.n_vars];
        for lit in &self.clauses {
            bits[lit.var - 1] = if lit.negated { '0' } else { '1' };
        }
        Some(bits.into_iter().collect())
    }

    /// Conflict count of a zero-based basis index.
    fn conflicts_at(&self, index: usize) -> usize {
        self.clauses
            .iter()
            .filter(|lit| {
                let value = (index >> (self.n_vars - lit.var)) & 1 == 1;
                !lit.holds(value)
            })
            .count()
    }
}

impl fmt::Display for OneSatFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("&")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

impl FromStr for OneSatFormula {
    type Err = Error;

    /// Two-variable formula, the only size the search supports.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 2)
    }
}

/// Number of clauses violated by `assignment` (e.g. `"01"`).
pub fn conflicts(assignment: &str, formula: &OneSatFormula) -> Result<usize> {
    let level = level_of_n(assignment, formula.n_vars)?;
    Ok(formula.conflicts_at(level.zero_based()))
}

fn i_pow<T: Real>(k: i64) -> Complex<T> {
    match k.rem_euclid(4) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// Diagonal phase `R_ss = i^{c(s)}`.
pub fn phase_oracle<T: Real>(formula: &OneSatFormula) -> Result<Operator<T>> {
    let dim = 1usize << formula.n_vars;
    let diag: Vec<Complex<T>> = (0..dim)
        .map(|s| i_pow(formula.conflicts_at(s) as i64))
        .collect();
    Operator::from_diagonal(&diag)
}

/// `n`-spin Walsh-Hadamard transform.
pub fn walsh_hadamard<T: Real>(n: usize) -> Result<Operator<T>> {
    let mut op = Operator::<T>::zeros(n)?;
    let dim = op.dim();
    let norm = T::one() / T::lit(dim as f64).sqrt();
    let mut mat = op.matrix().clone();
    for r in 0..dim {
        for s in 0..dim {
            let sign = if (r & s).count_ones() % 2 == 0 {
                norm
            } else {
                -norm
            };
            mat[(r, s)] = Complex::new(sign, T::zero());
        }
    }
    op = Operator::from_matrix(n, mat)?;
    Ok(op)
}

/// Mixing diagonal `D_rr = i^{h(r) - 1}`.
pub fn mixing_diagonal<T: Real>(n: usize) -> Result<Operator<T>> {
    if n != 2 {
        return Err(Error::Input(format!(
            "mixing is only defined for 2 variables, got {n}"
        )));
    }
    let diag: Vec<Complex<T>> = (0..4usize)
        .map(|r| i_pow(r.count_ones() as i64 - 1))
        .collect();
    Operator::from_diagonal(&diag)
}

/// `M = W D W`.
pub fn mixing<T: Real>(n: usize) -> Result<Operator<T>> {
    let d = mixing_diagonal(n)?;
    let w = walsh_hadamard(n)?;
    Ok(&(&w * &d) * &w)
}

/// Full search step `M R W`.
pub fn hogg_unitary<T: Real>(formula: &OneSatFormula) -> Result<Operator<T>> {
    let n = formula.n_vars;
    let r = phase_oracle(formula)?;
    let m = mixing(n)?;
    let w = walsh_hadamard(n)?;
    Ok(&(&m * &r) * &w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoggOutcome<T: Real> {
    pub rho_final: DeviationMatrix<T>,
    /// Weight of each assignment in the pure part, indexed by zero-based level.
    pub probabilities: Vec<T>,
    pub uniform_coeff: T,
    pub pure_coeff: T,
}

impl<T: Real> HoggOutcome<T> {
    /// Assignment carrying the largest weight.
    pub fn most_likely(&self) -> String {
        let n = self.probabilities.len().trailing_zeros() as usize;
        let best = self
            .probabilities
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite weights"))
            .map(|(i, _)| i)
            .unwrap_or(0);
        LevelIndex::from_zero_based(best).bits(n)
    }
}

/// Runs the search on a deviation matrix that is pseudo-pure at |00>.
///
/// The uniform background is invariant under conjugation, so the weights are the
/// diagonal of `(rho_final - uniform * 1) / pure`.
pub fn hogg_run<T: Real>(
    rho_pp: &DeviationMatrix<T>,
    formula: &OneSatFormula,
) -> Result<HoggOutcome<T>> {
    if rho_pp.n_spins() != formula.n_vars {
        return Err(Error::Input(format!(
            "state has {} spins but the formula has {} variables",
            rho_pp.n_spins(),
            formula.n_vars
        )));
    }
    let part = pure_part_with_tol(rho_pp, T::lit(DEFAULT_PURE_TOL))
        .map_err(|e| Error::Precondition(format!("input is not pseudo-pure: {e}")))?;
    if part.target.value() != 1 {
        return Err(Error::Precondition(format!(
            "input is pseudo-pure at level {} instead of |00>",
            part.target
        )));
    }
    let u = hogg_unitary(formula)?;
    let rho_final = evolve(rho_pp, &u)?;
    let probabilities = rho_final
        .diagonal()
        .into_iter()
        .map(|v| (v - part.uniform_coeff) / part.pure_coeff)
        .collect();
    Ok(HoggOutcome {
        rho_final,
        probabilities,
        uniform_coeff: part.uniform_coeff,
        pure_coeff: part.pure_coeff,
    })
}
