use std::f64::consts::{FRAC_PI_4, SQRT_2};

use pdm_core::{EffectiveMassProblem, MassProfile, ReferencePotential, SturmLiouville};

fn targets() -> Vec<ReferencePotential> {
    vec![
        ReferencePotential::Harmonic,
        ReferencePotential::morse(4.0).unwrap(),
        ReferencePotential::soliton(3.0).unwrap(),
        ReferencePotential::sextic(0.5).unwrap(),
    ]
}

fn catalog() -> Vec<EffectiveMassProblem> {
    let mut out = Vec::new();
    for alpha in [0.5, 2.0, 5.0] {
        for power in [2, 4] {
            for t in targets() {
                let m = MassProfile::rational(power, alpha).unwrap();
                out.push(EffectiveMassProblem::build(m, t).unwrap());
            }
        }
    }
    out
}

// Test-side reference potentials, written out independently of the library.
fn v2(target: &ReferencePotential, y: f64) -> f64 {
    match target.label().as_str() {
        "harmonic" => y * y / 4.0,
        "morse-l4" => 16.0 * (1.0 - (-y).exp()).powi(2),
        "soliton-l3" => -12.0 / y.cosh().powi(2),
        "sextic-j0.5" => y.powi(6) - 7.0 * y * y,
        other => panic!("no oracle for {other}"),
    }
}

fn map_power2(alpha: f64, x: f64) -> f64 {
    SQRT_2 * (x + (alpha - 1.0) * x.atan())
}

fn v1_power2(alpha: f64, x: f64) -> f64 {
    let x2 = x * x;
    (alpha - 1.0) / (2.0 * (alpha + x2).powi(4))
        * (-3.0 * x2 * x2 + (2.0 * alpha - 4.0) * x2 + alpha)
}

#[test]
fn omega_identity_on_ten_thousand_points() {
    for p in catalog() {
        let (lo, hi) = p.default_domain().unwrap();
        for i in 0..10_000 {
            let x = lo + (hi - lo) * i as f64 / 9_999.0;
            let c = p.components(x).unwrap();
            let v2 = p
                .reference_potential()
                .evaluate(p.map().forward(x).unwrap())
                .unwrap();
            let v1 = p.profile().gauge_potential(x).unwrap();
            let residual = c.v + v1 - v2;
            assert!(
                residual.abs() <= 1e-12 * v2.abs().max(1.0),
                "{} x={x}: residual {residual:e}",
                p.label()
            );
        }
    }
}

#[test]
fn power2_potentials_match_independent_assembly() {
    for alpha in [0.5, 2.0, 5.0] {
        let m = MassProfile::rational(2, alpha).unwrap();
        for t in targets() {
            let p = EffectiveMassProblem::build(m, t.clone()).unwrap();
            for i in 0..=200 {
                let x = -4.0 + 8.0 * i as f64 / 200.0;
                let want = v2(&t, map_power2(alpha, x)) - v1_power2(alpha, x);
                let got = p.evaluate_potential(x).unwrap();
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                    "{} x={x}",
                    p.label()
                );
            }
        }
    }
}

#[test]
fn constant_half_is_identity() {
    let m = MassProfile::constant(0.5).unwrap();
    for t in targets() {
        let p = EffectiveMassProblem::build(m, t.clone()).unwrap();
        for i in 0..=400 {
            let x = -10.0 + 20.0 * i as f64 / 400.0;
            let c = p.components(x).unwrap();
            assert_eq!(c.xbar, x);
            assert_eq!(c.v1, 0.0);
            assert_eq!(c.v, t.evaluate(x).unwrap());
        }
    }
    let osc = EffectiveMassProblem::build(m, ReferencePotential::Harmonic).unwrap();
    assert_eq!(osc.evaluate_potential(2.0).unwrap(), 1.0);
}

#[test]
fn point_values() {
    let m2 = MassProfile::rational(2, 2.0).unwrap();
    let osc = EffectiveMassProblem::build(m2, ReferencePotential::Harmonic).unwrap();
    // ½(1+π/4)² − [−3 + 0 + 2]/(2·3⁴)
    let want = 0.5 * (1.0 + FRAC_PI_4).powi(2) + 1.0 / 162.0;
    assert!((osc.evaluate_potential(1.0).unwrap() - want).abs() < 1e-12);
    assert!((osc.evaluate_potential(0.0).unwrap() + 0.0625).abs() < 1e-15);

    let sol = EffectiveMassProblem::build(m2, ReferencePotential::soliton(3.0).unwrap()).unwrap();
    assert!((sol.evaluate_potential(0.0).unwrap() + 12.0625).abs() < 1e-12);

    let m4 = MassProfile::rational(4, 2.0).unwrap();
    let osc4 = EffectiveMassProblem::build(m4, ReferencePotential::Harmonic).unwrap();
    assert!((osc4.evaluate_potential(0.0).unwrap() + 0.03125).abs() < 1e-15);

    assert_eq!(osc.label(), "rational2-a2-harmonic");
}

#[test]
fn gauge_term_vanishes_far_out() {
    for p in catalog() {
        assert!(
            p.profile().gauge_potential(1e3).unwrap().abs() < 1e-8,
            "{}",
            p.label()
        );
    }
}

#[test]
fn reference_point_values() {
    assert_eq!(ReferencePotential::Harmonic.evaluate(2.0).unwrap(), 1.0);
    assert_eq!(
        ReferencePotential::soliton(3.0)
            .unwrap()
            .evaluate(0.0)
            .unwrap(),
        -12.0
    );
    assert_eq!(
        ReferencePotential::sextic(0.5)
            .unwrap()
            .evaluate(1.0)
            .unwrap(),
        -6.0
    );
    let morse = ReferencePotential::morse(4.0).unwrap();
    assert_eq!(morse.evaluate(0.0).unwrap(), 0.0);
    assert!(morse.evaluate(-1e3).unwrap().is_finite());
}

#[test]
fn exact_spectra() {
    let e = |r: ReferencePotential, k| r.exact_spectrum(k).unwrap().energies();
    assert_eq!(e(ReferencePotential::Harmonic, 3), vec![0.5, 1.5, 2.5]);
    // 8(n+½) − (n+½)²
    let morse: Vec<f64> = (0..4)
        .map(|n| 8.0 * (n as f64 + 0.5) - (n as f64 + 0.5).powi(2))
        .collect();
    assert_eq!(morse, vec![3.75, 9.75, 13.75, 15.75]);
    assert_eq!(e(ReferencePotential::morse(4.0).unwrap(), 10), morse);
    assert_eq!(
        e(ReferencePotential::soliton(3.0).unwrap(), 10),
        vec![-9.0, -4.0, -1.0]
    );
    let q = ReferencePotential::sextic(0.5)
        .unwrap()
        .exact_spectrum(10)
        .unwrap();
    assert!(q.partial_spectrum);
    assert_eq!(q.energies(), vec![-2.0 * SQRT_2, 2.0 * SQRT_2]);

    for lambda in [1.5, 2.0, 3.7, 6.0] {
        let m = e(ReferencePotential::morse(lambda).unwrap(), 20);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
        assert!(m.iter().all(|&v| v < lambda * lambda));
        let s = e(ReferencePotential::soliton(lambda).unwrap(), 20);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&v| v < 0.0));
    }
    assert!(ReferencePotential::sextic(1.5)
        .unwrap()
        .exact_spectrum(2)
        .is_err());
}
