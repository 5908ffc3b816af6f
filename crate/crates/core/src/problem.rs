//! Assembly of position-dependent-mass problems.
//!
//! Given a mass `m` and a solvable constant-mass potential `V₂`, the potential
//! `V(x) = V₂(x̄(x)) − V₁(x)` makes `-d/dx (1/(2m)) d/dx + V` isospectral with
//! `-d²/dx̄² + V₂(x̄)`.

use crate::coordinate::{CoordinateMap, DEFAULT_PRIMED_EXTENT};
use crate::error::{ensure_finite, Result};
use crate::mass::MassProfile;
use crate::reference::ReferencePotential;

/// Default Dirichlet half-width in `x` for confining and soliton targets.
pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
/// Range of `x̄` covered by the default Morse domain.
pub const MORSE_XBAR_SPAN: (f64, f64) = (-6.0, 25.0);
/// Morse `x̄` span used under strict verification.
pub const MORSE_XBAR_SPAN_STRICT: (f64, f64) = (-7.0, 40.0);

/// A one-dimensional operator `-d/dx (1/(2m(x))) d/dx + V(x)`.
pub trait SturmLiouville: Sync {
    fn mass(&self, x: f64) -> f64;
    fn potential(&self, x: f64) -> Result<f64>;
    fn label(&self) -> String;
    /// The reference potential whose exact levels this operator should reproduce.
    fn reference(&self) -> Option<&ReferencePotential> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialComponents {
    pub x: f64,
    pub xbar: f64,
    pub v2: f64,
    pub v1: f64,
    pub v: f64,
}

#[derive(Debug, Clone)]
pub struct EffectiveMassProblem {
    profile: MassProfile,
    map: CoordinateMap,
    reference: ReferencePotential,
    label: String,
}

impl EffectiveMassProblem {
    pub fn build(profile: MassProfile, reference: ReferencePotential) -> Result<Self> {
        Self::build_primed(profile, reference, DEFAULT_PRIMED_EXTENT)
    }

    /// Build with the coordinate map primed over `|x| ≤ extent`.
    pub fn build_primed(
        profile: MassProfile,
        reference: ReferencePotential,
        extent: f64,
    ) -> Result<Self> {
        let map = CoordinateMap::new(profile)?.primed(extent)?;
        let label = format!("{}-{}", profile.label(), reference.label());
        Ok(Self {
            profile,
            map,
            reference,
            label,
        })
    }

    pub fn profile(&self) -> &MassProfile {
        &self.profile
    }

    pub fn map(&self) -> &CoordinateMap {
        &self.map
    }

    pub fn reference_potential(&self) -> &ReferencePotential {
        &self.reference
    }

    pub fn components(&self, x: f64) -> Result<PotentialComponents> {
        ensure_finite("x", x)?;
        let xbar = self.map.forward(x)?;
        let v2 = self.reference.eval_unchecked(xbar);
        let v1 = self.profile.gauge_unchecked(x);
        Ok(PotentialComponents {
            x,
            xbar,
            v2,
            v1,
            v: v2 - v1,
        })
    }

    pub fn evaluate_potential(&self, x: f64) -> Result<f64> {
        self.components(x).map(|c| c.v)
    }

    /// Default Dirichlet domain in `x`. Morse targets use an asymmetric domain
    /// whose image under the map is [`MORSE_XBAR_SPAN`].
    pub fn default_domain(&self) -> Result<(f64, f64)> {
        self.domain(false)
    }

    pub fn domain(&self, strict: bool) -> Result<(f64, f64)> {
        match self.reference {
            ReferencePotential::Morse { .. } => {
                let (lo, hi) = if strict {
                    MORSE_XBAR_SPAN_STRICT
                } else {
                    MORSE_XBAR_SPAN
                };
                Ok((self.map.inverse(lo)?, self.map.inverse(hi)?))
            }
            _ => Ok((-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH)),
        }
    }

    /// The equivalent constant-mass problem in the barred coordinate.
    pub fn constant_mass_oracle(&self) -> ConstantMassProblem {
        ConstantMassProblem::new(self.reference.clone())
    }
}

impl SturmLiouville for EffectiveMassProblem {
    fn mass(&self, x: f64) -> f64 {
        self.profile.mass(x)
    }

    fn potential(&self, x: f64) -> Result<f64> {
        self.evaluate_potential(x)
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn reference(&self) -> Option<&ReferencePotential> {
        Some(&self.reference)
    }
}

/// `-d²/dx̄² + V₂(x̄)`, encoded with `m ≡ ½`.
#[derive(Debug, Clone)]
pub struct ConstantMassProblem {
    reference: ReferencePotential,
}

impl ConstantMassProblem {
    pub fn new(reference: ReferencePotential) -> Self {
        Self { reference }
    }
}

impl SturmLiouville for ConstantMassProblem {
    fn mass(&self, _x: f64) -> f64 {
        0.5
    }

    fn potential(&self, x: f64) -> Result<f64> {
        self.reference.evaluate(x)
    }

    fn label(&self) -> String {
        format!("oracle-{}", self.reference.label())
    }

    fn reference(&self) -> Option<&ReferencePotential> {
        Some(&self.reference)
    }
}

/// Adds a fixed perturbation to another operator's potential. Used as a
/// sensitivity control in isospectrality checks.
pub struct Perturbed<'a, P: ?Sized, F> {
    pub base: &'a P,
    pub delta: F,
}

impl<P, F> SturmLiouville for Perturbed<'_, P, F>
where
    P: SturmLiouville + ?Sized,
    F: Fn(f64) -> f64 + Sync,
{
    fn mass(&self, x: f64) -> f64 {
        self.base.mass(x)
    }

    fn potential(&self, x: f64) -> Result<f64> {
        Ok(self.base.potential(x)? + (self.delta)(x))
    }

    fn label(&self) -> String {
        format!("{}-perturbed", self.base.label())
    }

    fn reference(&self) -> Option<&ReferencePotential> {
        self.base.reference()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn rational(p: u32, a: f64) -> MassProfile {
        MassProfile::rational(p, a).unwrap()
    }

    #[test]
    fn constant_half_is_identity() {
        let p = EffectiveMassProblem::build(
            MassProfile::constant(0.5).unwrap(),
            ReferencePotential::Harmonic,
        )
        .unwrap();
        assert_eq!(p.evaluate_potential(2.0).unwrap(), 1.0);
        for x in [-5.0, -0.3, 0.0, 7.7] {
            let c = p.components(x).unwrap();
            assert_eq!(c.xbar, x);
            assert_eq!(c.v, 0.25 * x * x);
        }
    }

    #[test]
    fn harmonic_rational2_values() {
        let p =
            EffectiveMassProblem::build(rational(2, 2.0), ReferencePotential::Harmonic).unwrap();
        assert!((p.evaluate_potential(0.0).unwrap() + 0.0625).abs() < 1e-15);
        // Independent evaluation at x = 1: ½(1 + π/4)² minus the closed-form gauge term
        // (α−1)/(2(α+x²)⁴)·(−3x⁴ + (2α−4)x² + α) = (1/162)·(−3 + 0 + 2).
        let expected = 0.5 * (1.0 + FRAC_PI_4).powi(2) - (-1.0 / 162.0);
        assert!((p.evaluate_potential(1.0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn harmonic_rational4_origin() {
        let p =
            EffectiveMassProblem::build(rational(4, 2.0), ReferencePotential::Harmonic).unwrap();
        assert!((p.evaluate_potential(0.0).unwrap() + 0.03125).abs() < 1e-15);
    }

    #[test]
    fn soliton_origin() {
        let p = EffectiveMassProblem::build(
            rational(2, 2.0),
            ReferencePotential::soliton(3.0).unwrap(),
        )
        .unwrap();
        assert!((p.evaluate_potential(0.0).unwrap() + 12.0625).abs() < 1e-14);
        assert_eq!(p.label(), "rational2-a2-soliton-l3");
    }

    #[test]
    fn morse_domain_spans_requested_xbar() {
        let p =
            EffectiveMassProblem::build(rational(2, 2.0), ReferencePotential::morse(4.0).unwrap())
                .unwrap();
        let (lo, hi) = p.default_domain().unwrap();
        assert!((p.map().forward(lo).unwrap() + 6.0).abs() < 1e-10);
        assert!((p.map().forward(hi).unwrap() - 25.0).abs() < 1e-10);
        assert!(lo < 0.0 && hi > 0.0);
    }

    #[test]
    fn non_finite_input_rejected() {
        let p =
            EffectiveMassProblem::build(rational(2, 2.0), ReferencePotential::Harmonic).unwrap();
        assert!(p.evaluate_potential(f64::NAN).is_err());
    }
}
