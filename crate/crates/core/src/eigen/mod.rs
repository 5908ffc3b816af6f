//! Numerical verification of the constructed problems.
//!
//! The operator `-d/dx (1/(2m)) d/dx + V` is discretized on a uniform grid
//! with Dirichlet walls using midpoint masses, which keeps the matrix
//! symmetric and the discrete flux `(1/m) ψ'` continuous across cells.

mod solve;
pub mod tridiag;

use std::time::Duration;

use crate::error::{PdmError, Result};

pub use solve::{
    converge, discretize, eigenstates, lift_wavefunction, lowest_eigenpairs, lowest_energies,
    matching_residual, measured_order, solve_constant_mass, ConvergeOptions, LiftedWavefunction,
    POTENTIAL_CLAMP,
};

pub const DEFAULT_NODES: usize = 8001;
pub const DEFAULT_MAX_DOUBLINGS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(PdmError::invalid(format!(
                "grid needs finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < 3 {
            return Err(PdmError::invalid(format!(
                "grid needs at least 3 nodes, got {n}"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Same interval with half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n - 1,
            ..*self
        }
    }

    pub fn interior_len(&self) -> usize {
        self.n - 2
    }
}

/// Symmetric tridiagonal matrix on the interior nodes of a grid.
#[derive(Debug, Clone)]
pub struct DiscretizedHamiltonian {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub grid: Grid,
}

#[derive(Debug, Clone)]
pub struct WavefunctionOnGrid {
    pub grid: Grid,
    /// Values on all nodes; the two boundary values are zero.
    pub values: Vec<f64>,
    pub energy: f64,
    pub node_count: usize,
}

impl WavefunctionOnGrid {
    /// Trapezoidal `∫ |ψ|² dx`.
    pub fn norm_squared(&self) -> f64 {
        trapezoid_sq(&self.values, self.grid.spacing())
    }
}

pub(crate) fn trapezoid_sq(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values.iter().map(|v| v * v).sum();
    h * (inner - 0.5 * (values[0] * values[0] + values[n - 1] * values[n - 1]))
}

/// Sign changes among components larger than `1e-8` of the peak magnitude.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Flip `values` so the first component above `1e-8` of the peak magnitude
/// is positive.
pub fn fix_sign(values: &mut [f64]) {
    let peak = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if let Some(first) = values.iter().find(|v| v.abs() > 1e-8 * peak) {
        if *first < 0.0 {
            values.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub n: usize,
    /// Raw eigenvalue on the finest grid.
    pub numeric: f64,
    /// Richardson value from the two finest grids.
    pub extrapolated: f64,
    pub exact: Option<f64>,
    pub abs_error: Option<f64>,
    /// Below the continuum threshold of the reference potential.
    pub bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub label: String,
    pub initial_grid: Grid,
    pub final_grid: Grid,
    pub levels: Vec<LevelReport>,
    pub converged: bool,
    pub doublings: usize,
    /// Max change between the last two extrapolations.
    pub last_change: f64,
    pub partial_spectrum: bool,
    pub runtime: Duration,
}

impl SpectrumReport {
    pub fn extrapolated(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.extrapolated).collect()
    }

    pub fn max_abs_error(&self) -> Option<f64> {
        self.levels
            .iter()
            .filter_map(|l| l.abs_error)
            .fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.max(e))))
    }

    pub fn bound_count(&self) -> usize {
        self.levels.iter().filter(|l| l.bound).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.nodes(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let r = g.refined();
        assert_eq!(r.len(), 9);
        assert_eq!(r.spacing(), 0.25);
        assert!(Grid::new(1.0, 1.0, 5).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 9).is_err());
    }

    #[test]
    fn node_counting_ignores_tails() {
        assert_eq!(count_nodes(&[0.0, 1.0, 2.0, -1.0, -3.0, 0.5, 0.0]), 2);
        assert_eq!(count_nodes(&[0.0, -1e-20, 1.0, 1.0, 1e-20, 0.0]), 0);
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.0, -1e-30, -0.5, 1.0];
        fix_sign(&mut v);
        assert_eq!(v, vec![-0.0, 1e-30, 0.5, -1.0]);
    }
}
