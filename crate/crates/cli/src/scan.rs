use rayon::prelude::*;
use squeezed_core::{AtomParams, BathParams, Params};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// Mean photon number; `|M|` follows it when squeezing is minimum-uncertainty.
    N,
    /// Antisymmetric fidelity; the parameters stay fixed.
    F,
    Delta,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Self::N => "N",
            Self::F => "F",
            Self::Delta => "delta",
        }
    }
}

/// A one-dimensional sweep over an evenly spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub variable: Variable,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub bath: BathParams,
    pub atoms: AtomParams,
    pub min_uncertainty: bool,
}

impl ScanSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(CliError::usage(format!("scan range needs lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.count < 2 {
            return Err(CliError::usage("scan needs at least 2 points"));
        }
        if self.variable == Variable::F && (self.lo < 0.0 || self.hi > 1.0) {
            return Err(CliError::usage("fidelity range must lie in [0, 1]"));
        }
        for x in [self.lo, self.hi] {
            self.params_at(x)?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / n
                }
            })
            .collect()
    }

    pub fn params_at(&self, x: f64) -> CliResult<Params> {
        let mut bath = self.bath;
        let mut atoms = self.atoms;
        match self.variable {
            Variable::N => bath.n_mean = x,
            Variable::Delta => atoms.delta = x,
            Variable::F => {}
        }
        if self.min_uncertainty {
            bath = BathParams::min_uncertainty(bath.n_mean, bath.m_phase);
        }
        Ok(Params::new(bath, atoms)?)
    }

    /// Evaluates `f` at every grid point in parallel; results come back in
    /// grid order.
    pub fn run<F>(&self, f: F) -> CliResult<Vec<f64>>
    where
        F: Fn(&Params, f64) -> squeezed_core::Result<f64> + Sync,
    {
        self.grid()
            .par_iter()
            .map(|&x| Ok(f(&self.params_at(x)?, x)?))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ScanSpec {
        ScanSpec {
            variable: Variable::N,
            lo: 0.0,
            hi: 3.0,
            count: 301,
            bath: BathParams::vacuum(),
            atoms: AtomParams::new(0.85, 0.0, 0.0),
            min_uncertainty: true,
        }
    }

    #[test]
    fn grid_hits_endpoints() {
        let g = spec().grid();
        assert_eq!(g.len(), 301);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[300], 3.0);
        assert!((g[100] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn results_are_in_grid_order() {
        let out = spec().run(|p, x| Ok(p.n() + x)).unwrap();
        assert!(out.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(out[150], 3.0);
    }

    #[test]
    fn minimum_uncertainty_follows_n() {
        let p = spec().params_at(2.0).unwrap();
        assert!((p.m_abs() - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(spec().validate().is_ok());
        assert!(ScanSpec { count: 1, ..spec() }.validate().is_err());
        assert!(ScanSpec { lo: 3.0, ..spec() }.validate().is_err());
        assert!(ScanSpec { lo: -1.0, ..spec() }.validate().is_err());
        let fixed = ScanSpec {
            min_uncertainty: false,
            bath: BathParams::new(0.0, 1.0, 0.0),
            ..spec()
        };
        assert!(matches!(fixed.validate(), Err(CliError::Core(_))));
    }
}
