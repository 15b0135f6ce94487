//! Cross-checks of the closed-form flow maps against the brute-force RK4
//! oracle. The closed forms are the product; the oracle only ever trusts
//! the source term itself.

use charburg::oracle::{integrate_characteristic, integrate_equivalent, OracleConfig};
use charburg::{Error, Horizon, InitialCondition, SourceFamily};

/// F(t, h0) extracted from the oracle: integrate the coupled system over a
/// constant profile from y = 0, so the arrival x equals the primitive.
fn primitive_by_oracle(family: &SourceFamily, t: f64, h0: f64, cfg: &OracleConfig) -> f64 {
    let constant = InitialCondition::affine(0.0, h0);
    let (x, _) = integrate_characteristic(family, &constant, 0.0, t, cfg).unwrap();
    x
}

#[test]
fn quadratic_flow_against_rk4_and_frozen_value() {
    let family = SourceFamily::Quadratic { beta: -2.0 };
    let cfg = OracleConfig::default();
    let closed = family.flow(0.15, 1.0).unwrap();
    let rk4 = integrate_equivalent(&family, 1.0, 0.15, &cfg).unwrap();
    println!("quadratic flow: closed = {closed:.16}, rk4 = {rk4:.16}");
    assert!((closed - rk4).abs() <= 1e-9);
    // 1 / 1.3
    assert!((closed - 0.7692307692307692).abs() <= 1e-15);
}

#[test]
fn exponential_flow_against_rk4_and_frozen_value() {
    let family = SourceFamily::Exponential { beta: -1.0 };
    let cfg = OracleConfig::default();
    let closed = family.flow(0.26, 2.0).unwrap();
    let rk4 = integrate_equivalent(&family, 2.0, 0.26, &cfg).unwrap();
    println!("exponential flow: closed = {closed:.16}, rk4 = {rk4:.16}");
    assert!((closed - rk4).abs() <= 1e-9);
    // 2 + ln(1 + 0.26 e^{-2})
    assert!((closed - 2.034_582_254_465_096).abs() <= 1e-14);
}

#[test]
fn primitives_against_coupled_rk4() {
    let cfg = OracleConfig::default();
    let cases = [
        (SourceFamily::Linear { beta: -2.0 }, 0.2, 2.0, 0.329_679_953_964_360_7, 1e-10),
        (SourceFamily::Quadratic { beta: -2.0 }, 0.15, 1.0, 0.131_182_132_233_745_53, 1e-10),
        (SourceFamily::Exponential { beta: -1.0 }, 0.26, 2.0, 0.524_521_604_431_014_1, 1e-8),
    ];
    for (family, t, h0, frozen, tol) in cases {
        let closed = family.flow_primitive(t, h0).unwrap();
        let oracle = primitive_by_oracle(&family, t, h0, &cfg);
        println!(
            "{family:?}: F({t}, {h0}) closed = {closed:.16}, oracle = {oracle:.16}"
        );
        assert!((closed - oracle).abs() <= tol, "oracle gap {}", (closed - oracle).abs());
        assert!((closed - frozen).abs() <= 1e-12, "frozen gap {}", (closed - frozen).abs());
    }
}

#[test]
fn every_family_tracks_the_oracle_over_a_sweep() {
    let cfg = OracleConfig::default();
    let sweeps: [(SourceFamily, &[(f64, f64)]); 4] = [
        (SourceFamily::Zero, &[(0.5, 1.0), (2.0, -0.7), (4.0, 0.3)]),
        (SourceFamily::Linear { beta: -2.0 }, &[(0.1, 3.0), (0.7, 0.5), (1.5, -1.2)]),
        (SourceFamily::Quadratic { beta: 2.0 }, &[(0.05, 1.0), (0.2, 1.5), (0.4, 1.0)]),
        (SourceFamily::Exponential { beta: 1.0 }, &[(0.02, 2.0), (0.1, 1.0), (0.2, 0.5)]),
    ];
    for (family, pairs) in sweeps {
        for &(t, h0) in pairs {
            let closed = family.flow(t, h0).unwrap();
            let rk4 = integrate_equivalent(&family, h0, t, &cfg).unwrap();
            let f_closed = family.flow_primitive(t, h0).unwrap();
            let f_oracle = primitive_by_oracle(&family, t, h0, &cfg);
            println!(
                "{family:?} t={t} h0={h0}: |dE| = {:.2e}, |dF| = {:.2e}",
                (closed - rk4).abs(),
                (f_closed - f_oracle).abs()
            );
            assert!((closed - rk4).abs() <= 1e-9);
            assert!((f_closed - f_oracle).abs() <= 1e-8);
        }
    }
}

#[test]
fn validity_time_matches_observed_blow_up() {
    // drive the oracle into the quadratic blow-up and compare the reported
    // time against the closed-form horizon 1/(beta h0) = 0.5
    let family = SourceFamily::Quadratic { beta: 2.0 };
    let cfg = OracleConfig::default();
    let horizon = family.validity_time(1.0).finite().expect("finite blow-up");
    let err = integrate_equivalent(&family, 1.0, 1.0, &cfg).unwrap_err();
    match err {
        Error::BlowUpDetected { t, .. } => {
            println!("closed-form horizon = {horizon}, oracle blow-up at t = {t}");
            assert!((t - horizon).abs() <= 1e-3, "blow-up at {t}, horizon {horizon}");
        }
        other => panic!("expected BlowUpDetected, got {other:?}"),
    }
    assert_eq!(
        SourceFamily::Quadratic { beta: -2.0 }.validity_time(1.0),
        Horizon::Infinite
    );
}
