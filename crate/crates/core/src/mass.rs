//! Position-dependent mass profiles.
//!
//! The rational family is `m(x) = f(x)^p` with `f(x) = (α + x²)/(1 + x²)`,
//! `p ∈ {2, 4}`. It is even in `x`, equals `α^p` at the origin and tends to 1
//! at infinity. Units are natural (ħ = 1) with kinetic operator
//! `-d/dx (1/(2m)) d/dx`.

use std::fmt;

use crate::error::{ensure_finite, PdmError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassKind {
    Rational { power: u32, alpha: f64 },
    Constant { value: f64 },
}

/// A validated mass profile. Construct through [`MassProfile::rational`] or
/// [`MassProfile::constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassProfile {
    kind: MassKind,
}

/// Mass and its first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassValue {
    pub m: f64,
    pub dm: f64,
    pub d2m: f64,
}

impl MassProfile {
    pub fn rational(power: u32, alpha: f64) -> Result<Self> {
        if power != 2 && power != 4 {
            return Err(PdmError::invalid(format!(
                "rational mass power must be 2 or 4, got {power}"
            )));
        }
        ensure_finite("alpha", alpha)?;
        if alpha <= 0.0 {
            return Err(PdmError::invalid(format!("alpha must be > 0, got {alpha}")));
        }
        Ok(Self {
            kind: MassKind::Rational { power, alpha },
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        ensure_finite("mass value", value)?;
        if value <= 0.0 {
            return Err(PdmError::invalid(format!(
                "constant mass must be > 0, got {value}"
            )));
        }
        Ok(Self {
            kind: MassKind::Constant { value },
        })
    }

    pub fn kind(&self) -> MassKind {
        self.kind
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            MassKind::Rational { alpha, .. } => Some(alpha),
            MassKind::Constant { .. } => None,
        }
    }

    /// Short token used in labels and file names, e.g. `rational2-a2`.
    pub fn label(&self) -> String {
        match self.kind {
            MassKind::Rational { power, alpha } => format!("rational{power}-a{alpha}"),
            MassKind::Constant { value } => format!("constant-m{value}"),
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<MassValue> {
        ensure_finite("x", x)?;
        Ok(self.eval_unchecked(x))
    }

    /// Mass only; `x` is assumed finite.
    #[inline]
    pub fn mass(&self, x: f64) -> f64 {
        match self.kind {
            MassKind::Rational { power, alpha } => {
                let f = 1.0 + (alpha - 1.0) / (1.0 + x * x);
                f.powi(power as i32)
            }
            MassKind::Constant { value } => value,
        }
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> MassValue {
        match self.kind {
            MassKind::Constant { value } => MassValue {
                m: value,
                dm: 0.0,
                d2m: 0.0,
            },
            MassKind::Rational { power, alpha } => {
                let c = alpha - 1.0;
                let g = 1.0 / (1.0 + x * x);
                let dg = -2.0 * x * g * g;
                let d2g = (6.0 * x * x - 2.0) * g * g * g;
                let f = 1.0 + c * g;
                let df = c * dg;
                let d2f = c * d2g;
                let p = power as i32;
                let pf = p as f64;
                let f_pm1 = f.powi(p - 1);
                let f_pm2 = f.powi(p - 2);
                MassValue {
                    m: f_pm1 * f,
                    dm: pf * f_pm1 * df,
                    d2m: pf * (pf - 1.0) * f_pm2 * df * df + pf * f_pm1 * d2f,
                }
            }
        }
    }

    /// Gauge potential `V₁ = 7m'²/(32m³) − m''/(8m²)` generated by the
    /// substitution `ψ = (2m)^{1/4} φ` together with `x̄ = ∫√(2m)`.
    ///
    /// The bracket `(4m'' − 7m'²)/(32m³)` that appears in some printed
    /// derivations has inconsistent powers of `m` and the wrong sign; the
    /// form used here reproduces the closed forms for both rational powers.
    pub fn gauge_potential(&self, x: f64) -> Result<f64> {
        ensure_finite("x", x)?;
        Ok(self.gauge_unchecked(x))
    }

    pub(crate) fn gauge_unchecked(&self, x: f64) -> f64 {
        let MassValue { m, dm, d2m } = self.eval_unchecked(x);
        7.0 * dm * dm / (32.0 * m * m * m) - d2m / (8.0 * m * m)
    }
}

impl fmt::Display for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MassKind::Rational { power, alpha } => {
                write!(f, "m(x) = ((α + x²)/(1 + x²))^{power}, α = {alpha}")
            }
            MassKind::Constant { value } => write!(f, "m(x) = {value}"),
        }
    }
}
