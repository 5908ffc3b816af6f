//! Cross-checks of published closed-form potentials against the pipeline.
//!
//! The pipeline (`V₂(x̄(x)) − V₁(x)` with a quadrature map) is authoritative.
//! Each published form is evaluated on a sample grid and either agrees with
//! the pipeline or is reported with its deviation. Nothing is corrected.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use crate::coordinate::CoordinateMap;
use crate::error::{PdmError, Result};
use crate::mass::{MassKind, MassProfile};
use crate::problem::EffectiveMassProblem;
use crate::reference::ReferencePotential;

const SAMPLE_HALF_WIDTH: f64 = 3.0;
const SAMPLE_COUNT: usize = 241;
const CONSISTENT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PublishedForm {
    /// `½u² + G₂`, `u = x + (α−1) atan x`.
    HarmonicRational2,
    /// `λ²{1 − exp(−u)}² + G₂`.
    MorseRational2,
    /// `−λ(λ+1) sech²(√2 u) + G₂`.
    SolitonRational2,
    /// `u⁶ − 7u² + G₂`.
    SexticRational2,
    /// `w²/8 + G₄`, `w = 2x + (α−1)² x/(1+x²) + (α−1)(α−3) atan x`.
    HarmonicRational4,
}

impl PublishedForm {
    pub const ALL: [PublishedForm; 5] = [
        PublishedForm::HarmonicRational2,
        PublishedForm::MorseRational2,
        PublishedForm::SolitonRational2,
        PublishedForm::SexticRational2,
        PublishedForm::HarmonicRational4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::HarmonicRational2 => "harmonic/rational2",
            Self::MorseRational2 => "morse/rational2",
            Self::SolitonRational2 => "soliton/rational2",
            Self::SexticRational2 => "sextic/rational2",
            Self::HarmonicRational4 => "harmonic/rational4",
        }
    }

    /// Identify the published form for a (mass, target) pair.
    pub fn for_problem(profile: &MassProfile, reference: &ReferencePotential) -> Option<Self> {
        let MassKind::Rational { power, .. } = profile.kind() else {
            return None;
        };
        match (power, reference) {
            (2, ReferencePotential::Harmonic) => Some(Self::HarmonicRational2),
            (2, ReferencePotential::Morse { .. }) => Some(Self::MorseRational2),
            (2, ReferencePotential::Soliton { .. }) => Some(Self::SolitonRational2),
            (2, ReferencePotential::SexticQes { two_j: 1 }) => Some(Self::SexticRational2),
            (4, ReferencePotential::Harmonic) => Some(Self::HarmonicRational4),
            _ => None,
        }
    }

    /// Evaluate the published potential at `x`.
    pub fn evaluate(&self, alpha: f64, reference: &ReferencePotential, x: f64) -> f64 {
        let c = alpha - 1.0;
        let x2 = x * x;
        let u = x + c * x.atan();
        let g2 =
            c / (2.0 * (alpha + x2).powi(4)) * (3.0 * x2 * x2 + (4.0 - 2.0 * alpha) * x2 - alpha);
        let lambda = match reference {
            ReferencePotential::Morse { lambda } | ReferencePotential::Soliton { lambda } => {
                *lambda
            }
            _ => 0.0,
        };
        match self {
            Self::HarmonicRational2 => 0.5 * u * u + g2,
            Self::MorseRational2 => {
                let e = 1.0 - (-u).exp();
                lambda * lambda * e * e + g2
            }
            Self::SolitonRational2 => {
                let s = 1.0 / (SQRT_2 * u).cosh();
                -lambda * (lambda + 1.0) * s * s + g2
            }
            Self::SexticRational2 => u.powi(6) - 7.0 * u * u + g2,
            Self::HarmonicRational4 => {
                let w = 2.0 * x + c * c * x / (1.0 + x2) + c * (alpha - 3.0) * x.atan();
                let g4 = c * (1.0 + x2).powi(2) / (alpha + x2).powi(6)
                    * (3.0 * x2 * x2 + (7.0 - 5.0 * alpha) * x2 - alpha);
                w * w / 8.0 + g4
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub form: PublishedForm,
    pub label: String,
    pub samples: usize,
    pub max_abs_deviation: f64,
    /// Max of `|published − pipeline| / max(1, |pipeline|)`.
    pub max_scaled_deviation: f64,
    pub worst_x: f64,
    pub verdict: Verdict,
}

/// Compare the published closed form of `problem`'s potential with the
/// pipeline on a uniform sample of `[-3, 3]`.
pub fn published_form_report(problem: &EffectiveMassProblem) -> Result<DiscrepancyReport> {
    let profile = problem.profile();
    let reference = problem.reference_potential();
    let form = PublishedForm::for_problem(profile, reference).ok_or_else(|| {
        PdmError::NoPrintedForm(format!("{} with {}", profile.label(), reference.label()))
    })?;
    let alpha = profile.alpha().expect("rational profile");
    let mut max_abs: f64 = 0.0;
    let mut max_scaled: f64 = 0.0;
    let mut worst_x = 0.0;
    for i in 0..SAMPLE_COUNT {
        let x = -SAMPLE_HALF_WIDTH + 2.0 * SAMPLE_HALF_WIDTH * i as f64 / (SAMPLE_COUNT - 1) as f64;
        let pipeline = problem.evaluate_potential(x)?;
        let published = form.evaluate(alpha, reference, x);
        let d = (published - pipeline).abs();
        let scaled = d / pipeline.abs().max(1.0);
        if scaled > max_scaled {
            max_scaled = scaled;
            worst_x = x;
        }
        max_abs = max_abs.max(d);
    }
    let verdict = if max_scaled <= CONSISTENT_REL_TOL {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(DiscrepancyReport {
        form,
        label: problem_label(problem),
        samples: SAMPLE_COUNT,
        max_abs_deviation: max_abs,
        max_scaled_deviation: max_scaled,
        worst_x,
        verdict,
    })
}

fn problem_label(problem: &EffectiveMassProblem) -> String {
    use crate::problem::SturmLiouville;
    problem.label()
}

/// Constants of the power-4 map `c·[2x + (α−1)² x/(1+x²) + k·atan x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rational4MapConstants {
    pub alpha: f64,
    /// Least-squares fit of `c` against quadrature.
    pub fitted_prefactor: f64,
    /// Least-squares fit of `k` against quadrature.
    pub fitted_atan_coefficient: f64,
    /// Term-by-term integration: `1/√2`.
    pub derived_prefactor: f64,
    /// Term-by-term integration: `(α−1)(α+3)`.
    pub derived_atan_coefficient: f64,
    /// Published: `2√2`.
    pub published_prefactor: f64,
    /// Published: `(α−1)(α−3)`.
    pub published_atan_coefficient: f64,
}

impl Rational4MapConstants {
    pub fn published_matches(&self, tol: f64) -> bool {
        (self.published_prefactor - self.fitted_prefactor).abs() <= tol
            && (self.published_atan_coefficient - self.fitted_atan_coefficient).abs() <= tol
    }
}

/// Fit the power-4 map constants to the quadrature map by linear least
/// squares in the two basis functions `2x + (α−1)²x/(1+x²)` and `atan x`.
pub fn fit_rational4_constants(alpha: f64) -> Result<Rational4MapConstants> {
    let profile = MassProfile::rational(4, alpha)?;
    let map = CoordinateMap::new(profile)?;
    let c = alpha - 1.0;
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 1..=120 {
        let x = 0.05 * i as f64;
        let g1 = 2.0 * x + c * c * x / (1.0 + x * x);
        let g2 = x.atan();
        let y = map.forward(x)?;
        s11 += g1 * g1;
        s12 += g1 * g2;
        s22 += g2 * g2;
        r1 += g1 * y;
        r2 += g2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() <= f64::EPSILON * s11 * s22 {
        return Err(PdmError::NumericFailure(
            "singular normal equations fitting the power-4 map".into(),
        ));
    }
    let a = (r1 * s22 - r2 * s12) / det;
    let b = (s11 * r2 - s12 * r1) / det;
    Ok(Rational4MapConstants {
        alpha,
        fitted_prefactor: a,
        fitted_atan_coefficient: b / a,
        derived_prefactor: FRAC_1_SQRT_2,
        derived_atan_coefficient: c * (alpha + 3.0),
        published_prefactor: 2.0 * SQRT_2,
        published_atan_coefficient: c * (alpha - 3.0),
    })
}

/// Reports for every published form, built with mass parameter `alpha` and
/// the default Morse and soliton strengths.
pub fn catalog_reports(alpha: f64) -> Result<Vec<DiscrepancyReport>> {
    use crate::reference::{DEFAULT_MORSE_LAMBDA, DEFAULT_SOLITON_LAMBDA};
    let r2 = MassProfile::rational(2, alpha)?;
    let r4 = MassProfile::rational(4, alpha)?;
    let pairs = [
        (r2, ReferencePotential::Harmonic),
        (r2, ReferencePotential::morse(DEFAULT_MORSE_LAMBDA)?),
        (r2, ReferencePotential::soliton(DEFAULT_SOLITON_LAMBDA)?),
        (r2, ReferencePotential::sextic(0.5)?),
        (r4, ReferencePotential::Harmonic),
    ];
    pairs
        .into_iter()
        .map(|(m, r)| published_form_report(&EffectiveMassProblem::build(m, r)?))
        .collect()
}
