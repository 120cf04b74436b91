use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spin-1/2 system: relative gyromagnetic ratios plus optional readout data.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinSystem<T: Real> {
    gamma: Vec<T>,
    labels: Vec<String>,
    larmor_mhz: Option<Vec<T>>,
    offset_hz: Option<Vec<T>>,
    j_hz: Option<Vec<Vec<T>>>,
}

impl<T: Real> SpinSystem<T> {
    pub fn new(gamma: Vec<T>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Input("spin system needs at least one spin".into()));
        }
        crate::spin::dim_of(gamma.len())?;
        for (i, g) in gamma.iter().enumerate() {
            if !g.is_finite() || *g == T::zero() {
                return Err(Error::Input(format!(
                    "gamma of spin {} must be finite and nonzero, got {g}",
                    i + 1
                )));
            }
        }
        let labels = (1..=gamma.len()).map(|i| format!("S{i}")).collect();
        Ok(Self {
            gamma,
            labels,
            larmor_mhz: None,
            offset_hz: None,
            j_hz: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        self.check_len("labels", labels.len())?;
        self.labels = labels;
        Ok(self)
    }

    pub fn with_larmor_mhz(mut self, larmor: Vec<T>) -> Result<Self> {
        self.check_len("larmor_mhz", larmor.len())?;
        self.larmor_mhz = Some(larmor);
        Ok(self)
    }

    pub fn with_offset_hz(mut self, offsets: Vec<T>) -> Result<Self> {
        self.check_len("offset_hz", offsets.len())?;
        self.offset_hz = Some(offsets);
        Ok(self)
    }

    /// Attaches the pairwise coupling table; must be square, symmetric, zero diagonal.
    pub fn with_j_hz(mut self, j: Vec<Vec<T>>) -> Result<Self> {
        let n = self.n_spins();
        self.check_len("j_hz", j.len())?;
        for (a, row) in j.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "j_hz row {} has length {}",
                    a + 1,
                    row.len()
                )));
            }
            if row[a] != T::zero() {
                return Err(Error::Input("j_hz diagonal must be zero".into()));
            }
            for b in 0..n {
                if row[b] != j[b][a] || !row[b].is_finite() {
                    return Err(Error::Input(format!(
                        "j_hz must be finite and symmetric (entry {},{})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        self.j_hz = Some(j);
        Ok(self)
    }

    fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.n_spins() {
            return Err(Error::Input(format!(
                "{what} has {len} entries but the system has {} spins",
                self.n_spins()
            )));
        }
        Ok(())
    }

    pub fn n_spins(&self) -> usize {
        self.gamma.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins()
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn larmor_mhz(&self) -> Option<&[T]> {
        self.larmor_mhz.as_deref()
    }

    pub fn offset_hz(&self) -> Option<&[T]> {
        self.offset_hz.as_deref()
    }

    pub fn j_hz(&self) -> Option<&[Vec<T>]> {
        self.j_hz.as_deref()
    }

    /// True when all spins share one gyromagnetic ratio.
    pub fn is_homonuclear(&self) -> bool {
        self.gamma.iter().all(|g| *g == self.gamma[0])
    }
}
