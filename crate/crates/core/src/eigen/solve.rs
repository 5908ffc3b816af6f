use std::time::Instant;

use super::tridiag;
use super::{
    count_nodes, fix_sign, trapezoid_sq, DiscretizedHamiltonian, Grid, LevelReport, SpectrumReport,
    WavefunctionOnGrid, DEFAULT_MAX_DOUBLINGS,
};
use crate::error::{PdmError, Result};
use crate::interp;
use crate::mass::MassProfile;
use crate::problem::{ConstantMassProblem, EffectiveMassProblem, SturmLiouville};
use crate::reference::ReferencePotential;

/// Finite potential values above this are replaced by it.
pub const POTENTIAL_CLAMP: f64 = 1e8;

/// Flux-form stencil on the interior nodes:
/// `H[i][i±1] = −1/(2 m_{i±½} h²)`, `H[i][i] = 1/(2 m_{i−½} h²) + 1/(2 m_{i+½} h²) + V(x_i)`.
pub fn discretize<P: SturmLiouville + ?Sized>(
    problem: &P,
    grid: &Grid,
) -> Result<DiscretizedHamiltonian> {
    let n = grid.len();
    let h = grid.spacing();
    let h2 = h * h;
    // coupling[i] joins nodes i and i + 1
    let coupling: Vec<f64> = (0..n - 1)
        .map(|i| {
            let mid = grid.x_min() + (i as f64 + 0.5) * h;
            1.0 / (2.0 * problem.mass(mid) * h2)
        })
        .collect();
    let mut diagonal = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let x = grid.node(i);
        let v = problem.potential(x)?;
        if !v.is_finite() {
            return Err(PdmError::GridDomain { x, value: v });
        }
        diagonal.push(coupling[i - 1] + coupling[i] + v.min(POTENTIAL_CLAMP));
    }
    let off_diagonal = coupling[1..n - 2].iter().map(|c| -c).collect();
    Ok(DiscretizedHamiltonian {
        diagonal,
        off_diagonal,
        grid: *grid,
    })
}

fn check_levels(h: &DiscretizedHamiltonian, k: usize) -> Result<()> {
    if k == 0 || k > h.diagonal.len() {
        return Err(PdmError::invalid(format!(
            "requested {k} levels from {} interior nodes",
            h.diagonal.len()
        )));
    }
    Ok(())
}

pub fn lowest_energies(h: &DiscretizedHamiltonian, k: usize) -> Result<Vec<f64>> {
    check_levels(h, k)?;
    tridiag::lowest_eigenvalues(&h.diagonal, &h.off_diagonal, k)
}

/// The `k` lowest eigenpairs, ascending. Vectors carry the boundary zeros,
/// have unit trapezoidal norm, and are signed so that the first significant
/// component is positive.
pub fn lowest_eigenpairs(h: &DiscretizedHamiltonian, k: usize) -> Result<Vec<WavefunctionOnGrid>> {
    let energies = lowest_energies(h, k)?;
    let vectors = tridiag::eigenvectors(&h.diagonal, &h.off_diagonal, &energies)?;
    let scale = 1.0 / h.grid.spacing().sqrt();
    Ok(energies
        .into_iter()
        .zip(vectors)
        .map(|(energy, v)| {
            let mut values = Vec::with_capacity(h.grid.len());
            values.push(0.0);
            values.extend(v.iter().map(|x| x * scale));
            values.push(0.0);
            fix_sign(&mut values);
            WavefunctionOnGrid {
                grid: h.grid,
                node_count: count_nodes(&values),
                values,
                energy,
            }
        })
        .collect())
}

pub fn eigenstates<P: SturmLiouville + ?Sized>(
    problem: &P,
    grid: &Grid,
    k: usize,
) -> Result<Vec<WavefunctionOnGrid>> {
    lowest_eigenpairs(&discretize(problem, grid)?, k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeOptions {
    /// Successive Richardson values must agree to this.
    pub target_tol: f64,
    pub max_doublings: usize,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        Self {
            target_tol: 1e-7,
            max_doublings: DEFAULT_MAX_DOUBLINGS,
        }
    }
}

/// Solve on `grid`, then keep halving the spacing. After each halving the
/// pair `(E_h, E_{h/2})` gives `(4E_{h/2} − E_h)/3`; convergence is declared
/// once two successive extrapolations agree to `target_tol` in every level.
pub fn converge<P: SturmLiouville + ?Sized>(
    problem: &P,
    grid: Grid,
    k: usize,
    opts: &ConvergeOptions,
) -> Result<SpectrumReport> {
    if opts.target_tol.is_nan() || opts.target_tol <= 0.0 {
        return Err(PdmError::invalid(format!(
            "target tolerance must be positive, got {}",
            opts.target_tol
        )));
    }
    if opts.max_doublings == 0 {
        return Err(PdmError::invalid("at least one grid doubling is required"));
    }
    let start = Instant::now();
    let mut current = grid;
    let mut raw = lowest_energies(&discretize(problem, &current)?, k)?;
    let mut prev_extrap: Option<Vec<f64>> = None;
    let mut last_change = f64::INFINITY;
    let mut doublings = 0;
    let mut extrap = raw.clone();
    let mut converged = false;
    while doublings < opts.max_doublings {
        current = current.refined();
        doublings += 1;
        let fine = lowest_energies(&discretize(problem, &current)?, k)?;
        extrap = fine
            .iter()
            .zip(&raw)
            .map(|(f, c)| (4.0 * f - c) / 3.0)
            .collect();
        raw = fine;
        if let Some(prev) = &prev_extrap {
            last_change = extrap
                .iter()
                .zip(prev)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if last_change < opts.target_tol {
                converged = true;
                break;
            }
        }
        prev_extrap = Some(extrap.clone());
    }

    let reference = problem.reference();
    let threshold = reference.and_then(|r| r.continuum_threshold());
    let mut levels: Vec<LevelReport> = raw
        .iter()
        .zip(&extrap)
        .enumerate()
        .map(|(n, (&numeric, &extrapolated))| LevelReport {
            n,
            numeric,
            extrapolated,
            exact: None,
            abs_error: None,
            bound: threshold.is_none_or(|t| extrapolated < t),
        })
        .collect();
    let mut partial_spectrum = false;
    if let Some(Ok(exact)) = reference.map(|r| r.exact_spectrum(k)) {
        partial_spectrum = exact.partial_spectrum;
        for level in &exact.levels {
            let slot = if exact.partial_spectrum {
                nearest(&extrap, level.energy)
            } else {
                level.n
            };
            if let Some(row) = levels.get_mut(slot) {
                row.exact = Some(level.energy);
                row.abs_error = Some((row.extrapolated - level.energy).abs());
            }
        }
    }
    let report = SpectrumReport {
        label: problem.label(),
        initial_grid: grid,
        final_grid: current,
        levels,
        converged,
        doublings,
        last_change,
        partial_spectrum,
        runtime: start.elapsed(),
    };
    if converged {
        Ok(report)
    } else {
        Err(PdmError::NotConverged {
            doublings,
            last_change,
            report: Box::new(report),
        })
    }
}

fn nearest(values: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if (v - target).abs() < (values[best] - target).abs() {
            best = i;
        }
    }
    best
}

/// Constant-mass oracle: `-d²/dx̄² + V₂` on a grid in the barred coordinate,
/// converged with the default options.
pub fn solve_constant_mass(
    reference: &ReferencePotential,
    barred_grid: Grid,
    k: usize,
) -> Result<SpectrumReport> {
    converge(
        &ConstantMassProblem::new(reference.clone()),
        barred_grid,
        k,
        &ConvergeOptions::default(),
    )
}

#[derive(Debug, Clone)]
pub struct LiftedWavefunction {
    pub psi: WavefunctionOnGrid,
    /// `∫|ψ|² dx` before renormalization; equals `∫|φ|² dx̄` in the continuum.
    pub norm_before_renormalization: f64,
}

/// `ψ(x) = (2m(x))^{1/4} φ(x̄(x))`, with `φ` interpolated cubically from a
/// grid in the barred coordinate, then renormalized on `x_grid`.
pub fn lift_wavefunction(
    phi: &WavefunctionOnGrid,
    problem: &EffectiveMassProblem,
    x_grid: &Grid,
) -> Result<LiftedWavefunction> {
    let bar_nodes = phi.grid.nodes();
    let lo = phi.grid.x_min();
    let hi = phi.grid.x_max();
    let slack = 1e-9 * lo.abs().max(hi.abs()).max(1.0);
    let map = problem.map();
    let profile = problem.profile();
    let mut values = Vec::with_capacity(x_grid.len());
    for x in x_grid.nodes() {
        let xbar = map.forward(x)?;
        if xbar < lo - slack || xbar > hi + slack {
            return Err(PdmError::DomainMismatch(format!(
                "x = {x} maps to x̄ = {xbar}, outside [{lo}, {hi}]"
            )));
        }
        let phi_here =
            interp::cubic(&bar_nodes, &phi.values, xbar.clamp(lo, hi)).expect("clamped into range");
        values.push((2.0 * profile.mass(x)).powf(0.25) * phi_here);
    }
    let norm = trapezoid_sq(&values, x_grid.spacing());
    if norm.is_nan() || norm <= 0.0 {
        return Err(PdmError::NumericFailure(
            "lifted wavefunction vanishes".into(),
        ));
    }
    let s = 1.0 / norm.sqrt();
    values.iter_mut().for_each(|v| *v *= s);
    fix_sign(&mut values);
    Ok(LiftedWavefunction {
        psi: WavefunctionOnGrid {
            grid: *x_grid,
            node_count: count_nodes(&values),
            values,
            energy: phi.energy,
        },
        norm_before_renormalization: norm,
    })
}

/// Largest jump of the discrete flux `(1/m_{i+½}) (ψ_{i+1} − ψ_i)/h` between
/// neighbouring cells.
pub fn matching_residual(psi: &WavefunctionOnGrid, profile: &MassProfile) -> f64 {
    let g = &psi.grid;
    let h = g.spacing();
    let flux: Vec<f64> = psi
        .values
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let mid = g.x_min() + (i as f64 + 0.5) * h;
            (w[1] - w[0]) / (h * profile.mass(mid))
        })
        .collect();
    flux.windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
}

/// Observed order `log₂((E_h − E_{h/2}) / (E_{h/2} − E_{h/4}))`.
pub fn measured_order(e_h: f64, e_h2: f64, e_h4: f64) -> f64 {
    ((e_h - e_h2) / (e_h2 - e_h4)).log2()
}
