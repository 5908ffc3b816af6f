//! Constant-mass reference potentials `V₂(x̄)` with closed-form spectra.
//!
//! The constant-mass operator is `-d²/dx̄² + V₂(x̄)`, with no factor ½.

use std::fmt;
use std::sync::Arc;

use crate::error::{ensure_finite, PdmError, Result};
use crate::interp;

/// `e^{-x̄}` is capped here before squaring; beyond it the Morse wall is flat.
pub const MORSE_EXP_CLAMP: f64 = 1e8;

pub const DEFAULT_MORSE_LAMBDA: f64 = 4.0;
pub const DEFAULT_SOLITON_LAMBDA: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferencePotential {
    /// `x̄²/4`
    Harmonic,
    /// `λ²(1 − e^{−x̄})²`
    Morse { lambda: f64 },
    /// `−λ(λ+1) sech² x̄`
    Soliton { lambda: f64 },
    /// `x̄⁶ − (8j+3) x̄²`, stored as `2j`.
    SexticQes { two_j: u32 },
    /// User-supplied samples of `V₂`, cubic between nodes, flat outside.
    Tabulated(Arc<TabulatedPotential>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    xbar: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(xbar: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xbar.len() != values.len() || xbar.len() < 2 {
            return Err(PdmError::invalid(
                "tabulated potential needs at least two (xbar, V) pairs",
            ));
        }
        if xbar.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(PdmError::invalid(
                "tabulated potential has non-finite entries",
            ));
        }
        if xbar.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PdmError::invalid(
                "tabulated xbar must be strictly increasing",
            ));
        }
        Ok(Self { xbar, values })
    }

    pub fn evaluate(&self, xbar: f64) -> f64 {
        let n = self.xbar.len();
        if xbar <= self.xbar[0] {
            self.values[0]
        } else if xbar >= self.xbar[n - 1] {
            self.values[n - 1]
        } else {
            interp::cubic(&self.xbar, &self.values, xbar).expect("inside table range")
        }
    }
}

/// One analytically known level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactLevel {
    /// Overall level index when `partial_spectrum` is false; index within the
    /// algebraic family otherwise.
    pub n: usize,
    pub energy: f64,
    pub parity: Option<Parity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSpectrum {
    pub levels: Vec<ExactLevel>,
    /// The listed values are a subset of the spectrum whose overall indices
    /// are not known analytically.
    pub partial_spectrum: bool,
}

impl ExactSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

impl ReferencePotential {
    pub fn morse(lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        Ok(Self::Morse { lambda })
    }

    pub fn soliton(lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        Ok(Self::Soliton { lambda })
    }

    pub fn sextic(j: f64) -> Result<Self> {
        ensure_finite("j", j)?;
        let two_j = 2.0 * j;
        if j < 0.0 || two_j.fract() != 0.0 || two_j > u32::MAX as f64 {
            return Err(PdmError::invalid(format!(
                "j must be a non-negative half-integer, got {j}"
            )));
        }
        Ok(Self::SexticQes {
            two_j: two_j as u32,
        })
    }

    pub fn tabulated(table: TabulatedPotential) -> Self {
        Self::Tabulated(Arc::new(table))
    }

    pub fn label(&self) -> String {
        match self {
            Self::Harmonic => "harmonic".to_string(),
            Self::Morse { lambda } => format!("morse-l{lambda}"),
            Self::Soliton { lambda } => format!("soliton-l{lambda}"),
            Self::SexticQes { two_j } => format!("sextic-j{}", *two_j as f64 / 2.0),
            Self::Tabulated(_) => "table".to_string(),
        }
    }

    pub fn evaluate(&self, xbar: f64) -> Result<f64> {
        ensure_finite("xbar", xbar)?;
        Ok(self.eval_unchecked(xbar))
    }

    pub(crate) fn eval_unchecked(&self, xbar: f64) -> f64 {
        match self {
            Self::Harmonic => 0.25 * xbar * xbar,
            Self::Morse { lambda } => {
                let e = (-xbar).exp().min(MORSE_EXP_CLAMP);
                lambda * lambda * (1.0 - e) * (1.0 - e)
            }
            Self::Soliton { lambda } => {
                let s = 1.0 / xbar.cosh();
                -lambda * (lambda + 1.0) * s * s
            }
            Self::SexticQes { two_j } => {
                let x2 = xbar * xbar;
                let g = 4.0 * *two_j as f64 + 3.0;
                x2 * x2 * x2 - g * x2
            }
            Self::Tabulated(t) => t.evaluate(xbar),
        }
    }

    /// Energy above which states are not normalizable on the whole line.
    /// `None` for confining potentials.
    pub fn continuum_threshold(&self) -> Option<f64> {
        match self {
            Self::Harmonic | Self::SexticQes { .. } => None,
            Self::Morse { lambda } => Some(lambda * lambda),
            Self::Soliton { .. } => Some(0.0),
            Self::Tabulated(t) => {
                let n = t.values.len();
                Some(t.values[0].min(t.values[n - 1]))
            }
        }
    }

    /// Analytically known levels, ascending, truncated to `max_levels`.
    pub fn exact_spectrum(&self, max_levels: usize) -> Result<ExactSpectrum> {
        if max_levels == 0 {
            return Err(PdmError::invalid("max_levels must be at least 1"));
        }
        let full = |levels: Vec<ExactLevel>| ExactSpectrum {
            levels,
            partial_spectrum: false,
        };
        let parity_of = |n: usize| {
            if n.is_multiple_of(2) {
                Parity::Even
            } else {
                Parity::Odd
            }
        };
        match self {
            Self::Harmonic => Ok(full(
                (0..max_levels)
                    .map(|n| ExactLevel {
                        n,
                        energy: n as f64 + 0.5,
                        parity: Some(parity_of(n)),
                    })
                    .collect(),
            )),
            Self::Morse { lambda } => {
                // 0 <= n <= floor(λ − 1)
                let top = (lambda - 1.0).floor();
                let count = if top < 0.0 { 0 } else { top as usize + 1 };
                Ok(full(
                    (0..count.min(max_levels))
                        .map(|n| {
                            let k = n as f64 + 0.5;
                            ExactLevel {
                                n,
                                energy: 2.0 * lambda * k - k * k,
                                parity: None,
                            }
                        })
                        .collect(),
                ))
            }
            Self::Soliton { lambda } => {
                // n < λ
                let count = lambda.ceil() as usize;
                Ok(full(
                    (0..count.min(max_levels))
                        .map(|n| {
                            let d = lambda - n as f64;
                            ExactLevel {
                                n,
                                energy: -d * d,
                                parity: Some(parity_of(n)),
                            }
                        })
                        .collect(),
                ))
            }
            Self::SexticQes { two_j: 1 } => {
                let e = 2.0 * std::f64::consts::SQRT_2;
                let levels = [-e, e]
                    .into_iter()
                    .enumerate()
                    .take(max_levels)
                    .map(|(n, energy)| ExactLevel {
                        n,
                        energy,
                        parity: Some(Parity::Even),
                    })
                    .collect();
                Ok(ExactSpectrum {
                    levels,
                    partial_spectrum: true,
                })
            }
            Self::SexticQes { two_j } => Err(PdmError::UnsupportedAnalyticSpectrum(format!(
                "sextic levels are tabulated only for j = 1/2 (got j = {})",
                *two_j as f64 / 2.0
            ))),
            Self::Tabulated(_) => Err(PdmError::UnsupportedAnalyticSpectrum(
                "tabulated potential".to_string(),
            )),
        }
    }
}

impl fmt::Display for ReferencePotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Harmonic => write!(f, "V2 = xbar^2/4"),
            Self::Morse { lambda } => write!(f, "V2 = {lambda}^2 (1 - exp(-xbar))^2"),
            Self::Soliton { lambda } => write!(f, "V2 = -{lambda}({lambda}+1) sech^2 xbar"),
            Self::SexticQes { two_j } => {
                write!(f, "V2 = xbar^6 - {} xbar^2", 4 * two_j + 3)
            }
            Self::Tabulated(t) => write!(f, "V2 tabulated on {} nodes", t.xbar.len()),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    ensure_finite(name, v)?;
    if v <= 0.0 {
        return Err(PdmError::invalid(format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * y);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unnormalized eigenfunction of `-φ'' + (x̄²/4) φ = (n + ½) φ`:
/// `H_n(x̄/√2) exp(−x̄²/4)`.
pub fn harmonic_wavefunction(n: usize, xbar: f64) -> f64 {
    hermite(n, xbar * std::f64::consts::FRAC_1_SQRT_2) * (-0.25 * xbar * xbar).exp()
}
