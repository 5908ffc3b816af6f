//! End-to-end verification of the cataloged problems against their exact
//! spectra, and of isospectrality between the two mass families.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::eigen::{converge, ConvergeOptions, Grid, SpectrumReport, DEFAULT_NODES};
use crate::error::{PdmError, Result};
use crate::mass::MassProfile;
use crate::output::{fmt_f64, CsvSink};
use crate::problem::{EffectiveMassProblem, SturmLiouville};
use crate::reference::{ReferencePotential, DEFAULT_MORSE_LAMBDA, DEFAULT_SOLITON_LAMBDA};

/// Relaxed tolerance for the near-threshold Morse level outside strict mode.
pub const MORSE_EDGE_TOL: f64 = 1e-3;
pub const THREADS_ENV: &str = "PDM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub tol: f64,
    pub strict: bool,
    pub alpha: f64,
    pub nodes: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            strict: false,
            alpha: 2.0,
            nodes: DEFAULT_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelCheck {
    pub n: usize,
    pub numeric: f64,
    pub extrapolated: f64,
    pub exact: Option<f64>,
    pub abs_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub label: String,
    pub checks: Vec<LevelCheck>,
    pub report: Option<SpectrumReport>,
    pub diagnostics: Vec<String>,
    pub pass: bool,
}

impl CaseOutcome {
    pub fn levels_checked(&self) -> usize {
        self.checks.iter().filter(|c| c.exact.is_some()).count()
    }

    pub fn max_abs_error(&self) -> f64 {
        self.checks
            .iter()
            .filter_map(|c| c.abs_error)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct VerificationSuite {
    pub outcomes: Vec<CaseOutcome>,
    pub runtime: Duration,
}

impl VerificationSuite {
    pub fn pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// One problem to solve and how to judge it.
pub struct Case<'a> {
    pub problem: &'a (dyn SturmLiouville + 'a),
    pub grid: Grid,
    pub levels: usize,
    pub options: ConvergeOptions,
    /// Tolerance for each numeric level index that has an exact value.
    pub tolerance: Box<dyn Fn(usize) -> f64 + Sync + 'a>,
    /// Expected number of levels flagged as bound, if checked.
    pub expected_bound: Option<usize>,
    /// Expected values by numeric index, overriding the reference spectrum.
    pub expected: Option<Vec<f64>>,
}

pub fn run_case(case: &Case<'_>) -> CaseOutcome {
    let label = case.problem.label();
    let (report, mut diagnostics) =
        match converge(case.problem, case.grid, case.levels, &case.options) {
            Ok(r) => (Some(r), Vec::new()),
            Err(PdmError::NotConverged { report, .. }) => {
                let msg = format!(
                    "not converged after {} doublings (last change {:e})",
                    report.doublings, report.last_change
                );
                (Some(*report), vec![msg])
            }
            Err(e) => (None, vec![e.to_string()]),
        };
    let Some(report) = report else {
        return CaseOutcome {
            label,
            checks: Vec::new(),
            report: None,
            diagnostics,
            pass: false,
        };
    };
    let checks: Vec<LevelCheck> = report
        .levels
        .iter()
        .map(|l| {
            let exact = match &case.expected {
                Some(values) => values.get(l.n).copied(),
                None => l.exact,
            };
            let abs_error = exact.map(|e| (l.extrapolated - e).abs());
            let tolerance = (case.tolerance)(l.n);
            LevelCheck {
                n: l.n,
                numeric: l.numeric,
                extrapolated: l.extrapolated,
                exact,
                abs_error,
                tolerance,
                pass: abs_error.is_none_or(|e| e < tolerance),
            }
        })
        .collect();
    let mut pass = report.converged && checks.iter().all(|c| c.pass);
    if checks.iter().all(|c| c.exact.is_none()) {
        diagnostics.push("no exact levels to compare".into());
        pass = false;
    }
    if let Some(expected) = case.expected_bound {
        let found = report.bound_count();
        if found != expected {
            diagnostics.push(format!("{found} bound levels, expected {expected}"));
            pass = false;
        }
    }
    for c in checks.iter().filter(|c| !c.pass) {
        diagnostics.push(format!(
            "level {}: |{} − {}| = {:e} ≥ {:e}",
            c.n,
            c.extrapolated,
            c.exact.unwrap_or(f64::NAN),
            c.abs_error.unwrap_or(f64::NAN),
            c.tolerance
        ));
    }
    CaseOutcome {
        label,
        checks,
        report: Some(report),
        diagnostics,
        pass,
    }
}

fn thread_count(cases: usize) -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(cases)
        .max(1)
}

/// Run cases concurrently (one deterministic solve per case), bounded by
/// `PDM_THREADS`. Outcomes keep the input order.
pub fn run_cases(cases: &[Case<'_>]) -> Result<VerificationSuite> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cases.len()))
        .build()
        .map_err(|e| PdmError::NumericFailure(format!("thread pool: {e}")))?;
    let outcomes = pool.install(|| cases.par_iter().map(run_case).collect());
    Ok(VerificationSuite {
        outcomes,
        runtime: start.elapsed(),
    })
}

fn grid_for(problem: &EffectiveMassProblem, strict: bool, nodes: usize) -> Result<Grid> {
    let (lo, hi) = problem.domain(strict)?;
    Grid::new(lo, hi, nodes)
}

/// The four cataloged targets on the power-2 mass with parameter `cfg.alpha`.
pub fn catalog_problems(alpha: f64) -> Result<Vec<EffectiveMassProblem>> {
    let m = MassProfile::rational(2, alpha)?;
    [
        ReferencePotential::Harmonic,
        ReferencePotential::morse(DEFAULT_MORSE_LAMBDA)?,
        ReferencePotential::soliton(DEFAULT_SOLITON_LAMBDA)?,
        ReferencePotential::sextic(0.5)?,
    ]
    .into_iter()
    .map(|r| EffectiveMassProblem::build(m, r))
    .collect()
}

/// Solve every cataloged problem and compare with its exact levels.
pub fn verify_catalog(cfg: &VerifyConfig) -> Result<VerificationSuite> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(PdmError::invalid(format!(
            "tolerance must be positive, got {}",
            cfg.tol
        )));
    }
    let problems = catalog_problems(cfg.alpha)?;
    let tol = cfg.tol;
    let options = ConvergeOptions {
        target_tol: 0.1 * tol,
        ..ConvergeOptions::default()
    };
    let mut cases = Vec::new();
    for p in &problems {
        let (levels, expected_bound, nodes, opts) = match p.reference_potential() {
            ReferencePotential::Harmonic => (10, None, cfg.nodes, options),
            ReferencePotential::Morse { .. } if cfg.strict => (
                5,
                Some(4),
                2 * cfg.nodes - 1,
                ConvergeOptions {
                    max_doublings: options.max_doublings + 1,
                    ..options
                },
            ),
            ReferencePotential::Morse { .. } => (5, Some(4), cfg.nodes, options),
            ReferencePotential::Soliton { .. } => (5, Some(3), cfg.nodes, options),
            _ => (6, None, cfg.nodes, options),
        };
        let edge = match p.reference_potential() {
            ReferencePotential::Morse { .. } if !cfg.strict => p
                .reference_potential()
                .exact_spectrum(levels)?
                .levels
                .last()
                .map(|l| l.n),
            _ => None,
        };
        cases.push(Case {
            problem: p,
            grid: grid_for(p, cfg.strict, nodes)?,
            levels,
            options: opts,
            tolerance: Box::new(move |n| {
                if Some(n) == edge {
                    tol.max(MORSE_EDGE_TOL)
                } else {
                    tol
                }
            }),
            expected_bound,
            expected: None,
        });
    }
    run_cases(&cases)
}

#[derive(Debug, Clone)]
pub struct IsospectralOutcome {
    pub suite: VerificationSuite,
    /// `max_n |E_A(n) − E_B(n)|` over the compared levels.
    pub max_pair_difference: f64,
    pub pass: bool,
}

/// Compare two operators level by level, and each against `expected`.
pub fn isospectral_check<'a>(
    a: (&'a dyn SturmLiouville, Grid),
    b: (&'a dyn SturmLiouville, Grid),
    expected: &[f64],
    tol: f64,
) -> Result<IsospectralOutcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(PdmError::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let levels = expected.len();
    if levels == 0 {
        return Err(PdmError::invalid("at least one level is required"));
    }
    let options = ConvergeOptions {
        target_tol: 0.1 * tol,
        ..ConvergeOptions::default()
    };
    let case = |(problem, grid): (&'a dyn SturmLiouville, Grid)| -> Case<'a> {
        Case {
            problem,
            grid,
            levels,
            options,
            tolerance: Box::new(move |_| tol),
            expected_bound: None,
            expected: Some(expected.to_vec()),
        }
    };
    let suite = run_cases(&[case(a), case(b)])?;
    let ea = &suite.outcomes[0].checks;
    let eb = &suite.outcomes[1].checks;
    let max_pair_difference = if ea.len() == levels && eb.len() == levels {
        ea.iter()
            .zip(eb)
            .map(|(x, y)| (x.extrapolated - y.extrapolated).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let pass = suite.pass() && max_pair_difference < tol;
    Ok(IsospectralOutcome {
        suite,
        max_pair_difference,
        pass,
    })
}

/// Harmonic target on the power-2 and power-4 masses with the same `alpha`:
/// different masses, different potentials, one oscillator ladder.
pub fn verify_isospectral(alpha: f64, levels: usize, tol: f64) -> Result<IsospectralOutcome> {
    let a = EffectiveMassProblem::build(
        MassProfile::rational(2, alpha)?,
        ReferencePotential::Harmonic,
    )?;
    let b = EffectiveMassProblem::build(
        MassProfile::rational(4, alpha)?,
        ReferencePotential::Harmonic,
    )?;
    let expected: Vec<f64> = (0..levels).map(|n| n as f64 + 0.5).collect();
    isospectral_check(
        (&a, grid_for(&a, false, DEFAULT_NODES)?),
        (&b, grid_for(&b, false, DEFAULT_NODES)?),
        &expected,
        tol,
    )
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Write `<label>.csv` per case and `summary.csv`. Returns the written paths,
/// summary last.
pub fn emit_report(suite: &VerificationSuite, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| PdmError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for o in &suite.outcomes {
        let path = dir.join(format!("{}.csv", file_stem(&o.label)));
        let mut sink = CsvSink::create(&path)?;
        sink.row([
            "n",
            "E_numeric",
            "E_extrapolated",
            "E_exact",
            "abs_error",
            "tolerance",
            "pass",
        ])?;
        for c in &o.checks {
            sink.row([
                c.n.to_string(),
                fmt_f64(c.numeric),
                fmt_f64(c.extrapolated),
                c.exact.map(fmt_f64).unwrap_or_default(),
                c.abs_error.map(fmt_f64).unwrap_or_default(),
                fmt_f64(c.tolerance),
                c.pass.to_string(),
            ])?;
        }
        sink.finish()?;
        written.push(path);
    }
    let path = dir.join("summary.csv");
    let mut sink = CsvSink::create(&path)?;
    sink.row(["case", "levels_checked", "max_abs_error", "pass"])?;
    for o in &suite.outcomes {
        sink.row([
            o.label.clone(),
            o.levels_checked().to_string(),
            fmt_f64(o.max_abs_error()),
            o.pass.to_string(),
        ])?;
    }
    sink.finish()?;
    written.push(path);
    Ok(written)
}
