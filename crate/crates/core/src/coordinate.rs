//! The monotone change of variable `x̄(x) = ∫₀ˣ √(2m(y)) dy` and its inverse.
//!
//! Quadrature is the single source of truth. Panel sums over `[k·w, (k+1)·w]`
//! are cached during priming, so evaluating the map on a grid costs one short
//! partial panel per node. All supported profiles are even, so the map is
//! evaluated on `|x|` and made odd exactly.

use crate::error::{ensure_finite, PdmError, Result};
use crate::mass::{MassKind, MassProfile};
use crate::quadrature;

pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-12;
pub const DEFAULT_PRIMED_EXTENT: f64 = 64.0;
const PANEL_WIDTH: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct CoordinateMap {
    profile: MassProfile,
    quadrature_tol: f64,
    // cumulative[k] = x̄(k · PANEL_WIDTH)
    cumulative: Vec<f64>,
}

impl CoordinateMap {
    /// A map primed over `|x| ≤ 64` with the default tolerance.
    pub fn new(profile: MassProfile) -> Result<Self> {
        Self::with_tolerance(profile, DEFAULT_QUADRATURE_TOL)?.primed(DEFAULT_PRIMED_EXTENT)
    }

    /// An unprimed map. Correct everywhere, slower on long spans until
    /// [`CoordinateMap::primed`] is called.
    pub fn with_tolerance(profile: MassProfile, quadrature_tol: f64) -> Result<Self> {
        if !(quadrature_tol > 0.0 && quadrature_tol.is_finite()) {
            return Err(PdmError::invalid(format!(
                "quadrature tolerance must be positive, got {quadrature_tol}"
            )));
        }
        Ok(Self {
            profile,
            quadrature_tol,
            cumulative: vec![0.0],
        })
    }

    /// Extend the panel cache to cover `|x| ≤ extent`.
    pub fn primed(mut self, extent: f64) -> Result<Self> {
        ensure_finite("priming extent", extent)?;
        let panels = (extent.abs() / PANEL_WIDTH).ceil() as usize;
        while self.cumulative.len() <= panels {
            let k = self.cumulative.len() - 1;
            let lo = k as f64 * PANEL_WIDTH;
            let last = self.cumulative[k];
            let tol = self.quadrature_tol * last.abs().max(1.0) / (panels as f64).max(1.0);
            let piece = quadrature::integrate(|y| self.derivative(y), lo, lo + PANEL_WIDTH, tol)?;
            self.cumulative.push(last + piece);
        }
        Ok(self)
    }

    pub fn profile(&self) -> &MassProfile {
        &self.profile
    }

    pub fn quadrature_tol(&self) -> f64 {
        self.quadrature_tol
    }

    pub fn primed_extent(&self) -> f64 {
        (self.cumulative.len() - 1) as f64 * PANEL_WIDTH
    }

    /// `dx̄/dx = √(2m(x))`.
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        (2.0 * self.profile.mass(x)).sqrt()
    }

    pub fn forward(&self, x: f64) -> Result<f64> {
        ensure_finite("x", x)?;
        if let MassKind::Constant { value } = self.profile.kind() {
            return Ok((2.0 * value).sqrt() * x);
        }
        let ax = x.abs();
        let k = ((ax / PANEL_WIDTH).floor() as usize).min(self.cumulative.len() - 1);
        let start = k as f64 * PANEL_WIDTH;
        let base = self.cumulative[k];
        let tol = self.quadrature_tol * base.abs().max(1.0);
        let tail = quadrature::integrate(|y| self.derivative(y), start, ax, tol)?;
        Ok((base + tail).copysign(x))
    }

    /// Solve `forward(x) = xbar` by bracket expansion followed by Illinois
    /// false position with a bisection fallback.
    pub fn inverse(&self, xbar: f64) -> Result<f64> {
        ensure_finite("xbar", xbar)?;
        if xbar == 0.0 {
            return Ok(0.0);
        }
        if let MassKind::Constant { value } = self.profile.kind() {
            return Ok(xbar / (2.0 * value).sqrt());
        }
        let target = xbar.abs();
        let res_tol = 64.0 * f64::EPSILON * target.max(1.0);

        let (mut a, mut fa) = (0.0, -target);
        let mut b = (target / self.derivative(target)).max(1e-3);
        let mut fb = self.forward(b)? - target;
        let mut expansions = 0;
        while fb < 0.0 {
            a = b;
            fa = fb;
            b *= 2.0;
            fb = self.forward(b)? - target;
            expansions += 1;
            if expansions > 200 {
                return Err(PdmError::NumericFailure(format!(
                    "could not bracket inverse of x̄ = {xbar}"
                )));
            }
        }

        let mut side = 0i8;
        for _ in 0..400 {
            if fb.abs() <= res_tol {
                return Ok(b.copysign(xbar));
            }
            if fa.abs() <= res_tol {
                return Ok(a.copysign(xbar));
            }
            let width = b - a;
            if width <= 4.0 * f64::EPSILON * b.abs() {
                return Ok((0.5 * (a + b)).copysign(xbar));
            }
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > a && c < b) {
                c = 0.5 * (a + b);
            }
            let fc = self.forward(c)? - target;
            if fc < 0.0 {
                a = c;
                fa = fc;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = c;
                fb = fc;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
            if b - a > 0.75 * width {
                let m = 0.5 * (a + b);
                let fm = self.forward(m)? - target;
                if fm < 0.0 {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                    fb = fm;
                }
                side = 0;
            }
        }
        Err(PdmError::NumericFailure(format!(
            "inverse of x̄ = {xbar} did not converge"
        )))
    }
}

/// Analytically integrated map, where one exists.
///
/// * power 2: `√2 [x + (α−1) atan x]`
/// * power 4: `(1/√2) [2x + (α−1)² x/(1+x²) + (α−1)(α+3) atan x]`
///
/// The power-4 constants come from integrating `√2 (1 + (α−1)/(1+x²))²`
/// term by term, and are confirmed against quadrature by
/// [`crate::discrepancy::fit_rational4_constants`].
pub fn closed_form_map(profile: &MassProfile, x: f64) -> Option<f64> {
    match profile.kind() {
        MassKind::Rational { power: 2, alpha } => {
            Some(std::f64::consts::SQRT_2 * (x + (alpha - 1.0) * x.atan()))
        }
        MassKind::Rational { power: 4, alpha } => {
            let c = alpha - 1.0;
            Some(
                std::f64::consts::FRAC_1_SQRT_2
                    * (2.0 * x + c * c * x / (1.0 + x * x) + c * (alpha + 3.0) * x.atan()),
            )
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn map(power: u32, alpha: f64) -> CoordinateMap {
        CoordinateMap::new(MassProfile::rational(power, alpha).unwrap()).unwrap()
    }

    #[test]
    fn anchor_and_known_value() {
        let m = map(2, 2.0);
        assert_eq!(m.forward(0.0).unwrap(), 0.0);
        let expected = SQRT_2 * (1.0 + FRAC_PI_4);
        assert!((m.forward(1.0).unwrap() - expected).abs() < 1e-10);
        assert!((expected - 2.524_94).abs() < 1e-5);
        assert!((m.inverse(expected).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(m.inverse(0.0).unwrap(), 0.0);
    }

    #[test]
    fn constant_half_is_identity() {
        let m = CoordinateMap::new(MassProfile::constant(0.5).unwrap()).unwrap();
        for x in [-7.5, -1.0, 0.0, 0.3, 12.0] {
            assert_eq!(m.forward(x).unwrap(), x);
            assert_eq!(m.inverse(x).unwrap(), x);
        }
        assert!(closed_form_map(m.profile(), 1.0).is_none());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for (p, a) in [(2, 0.5), (2, 1.0), (2, 2.0), (4, 0.5), (4, 2.0), (4, 5.0)] {
            let m = map(p, a);
            for i in -40..=40 {
                let x = i as f64 * 1.37;
                let q = m.forward(x).unwrap();
                let c = closed_form_map(m.profile(), x).unwrap();
                assert!(
                    (q - c).abs() <= 1e-10 * q.abs().max(1.0),
                    "p={p} a={a} x={x}"
                );
            }
        }
        let flat = MassProfile::rational(2, 1.0).unwrap();
        assert_eq!(closed_form_map(&flat, 3.0), Some(SQRT_2 * 3.0));
    }

    #[test]
    fn beyond_primed_extent() {
        let m = map(2, 2.0);
        let x = 250.0;
        let c = closed_form_map(m.profile(), x).unwrap();
        assert!((m.forward(x).unwrap() - c).abs() <= 1e-10 * c);
        let unprimed =
            CoordinateMap::with_tolerance(MassProfile::rational(2, 2.0).unwrap(), 1e-12).unwrap();
        assert!((unprimed.forward(x).unwrap() - c).abs() <= 1e-10 * c);
        assert!((unprimed.inverse(c).unwrap() - x).abs() <= 1e-10 * x);
    }

    #[test]
    fn odd_symmetry_exact() {
        let m = map(4, 0.5);
        for x in [0.1, 1.0, 3.3, 17.25] {
            assert_eq!(m.forward(-x).unwrap(), -m.forward(x).unwrap());
        }
    }

    #[test]
    fn slope_matches_sqrt_two_m() {
        let m = map(2, 5.0);
        let h = 1e-5;
        for x in [-4.0, -0.5, 0.0, 0.25, 2.0, 9.0] {
            let fd = (m.forward(x + h).unwrap() - m.forward(x - h).unwrap()) / (2.0 * h);
            assert!((fd - m.derivative(x)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = map(2, 2.0);
        assert!(m.forward(f64::NAN).is_err());
        assert!(m.inverse(f64::INFINITY).is_err());
        assert!(CoordinateMap::with_tolerance(*m.profile(), 0.0).is_err());
    }
}
