//! Self-checking property suite behind the CLI `verify` command.
//!
//! Every property is deterministic: random samples come from a fixed-seed
//! ChaCha stream, so two runs agree bit-for-bit. Properties never panic on
//! mathematical failure — they return a failed [`PropertyReport`] with the
//! worst observed value, so the whole suite always runs to completion.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::initial::InitialCondition;
use crate::oracle::{integrate_characteristic, OracleConfig};
use crate::solver::{CharacteristicSolution, RootConfig};
use crate::source::{Horizon, SourceFamily};

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl PropertyReport {
    fn pass(name: &str, detail: String) -> Self {
        PropertyReport { name: name.to_string(), passed: true, detail }
    }

    fn check(name: &str, passed: bool, detail: String) -> Self {
        PropertyReport { name: name.to_string(), passed, detail }
    }
}

/// The three figure setups used throughout the suite (and exposed to the
/// CLI presets): piecewise profile with linear decay, sine with quadratic
/// decay, and a smoothed step with exponential source. Each entry pairs the
/// solution with its display time.
pub fn figure_configs() -> Vec<(CharacteristicSolution, f64)> {
    vec![
        (
            CharacteristicSolution::new(
                SourceFamily::Linear { beta: -2.0 },
                InitialCondition::trapezoid(),
            ),
            0.2,
        ),
        (
            CharacteristicSolution::new(
                SourceFamily::Quadratic { beta: -2.0 },
                InitialCondition::sine(1.0, std::f64::consts::TAU),
            ),
            0.15,
        ),
        (
            CharacteristicSolution::new(
                SourceFamily::Exponential { beta: -1.0 },
                InitialCondition::smoothed_step(2.0, 1.0, 0.3, 1e-4),
            ),
            0.26,
        ),
    ]
}

/// Families with two-sided rate coefficients, used by the identity checks.
fn identity_families() -> Vec<SourceFamily> {
    vec![
        SourceFamily::Linear { beta: -2.0 },
        SourceFamily::Linear { beta: 3.0 },
        SourceFamily::Quadratic { beta: -2.0 },
        SourceFamily::Quadratic { beta: 2.0 },
        SourceFamily::Exponential { beta: -1.0 },
        SourceFamily::Exponential { beta: 1.0 },
    ]
}

/// A time strictly inside the validity window for the given foot value.
fn time_within(family: &SourceFamily, h0: f64, frac: f64, rng: &mut ChaCha8Rng) -> f64 {
    let cap = match family.validity_time(h0) {
        Horizon::Finite(tv) => tv * frac,
        Horizon::Infinite => 2.0,
    };
    rng.random_range(0.0..cap)
}

/// x positions of the reference grid, excluding neighbourhoods where the
/// exact solution is not smooth, thinned to exactly `n` points.
fn smooth_points(lo: f64, hi: f64, exclusions: &[(f64, f64)], n: usize) -> Vec<f64> {
    let candidates: Vec<f64> = (0..2000)
        .map(|i| lo + (hi - lo) * i as f64 / 1999.0)
        .filter(|x| exclusions.iter().all(|&(c, r)| (x - c).abs() >= r))
        .collect();
    assert!(candidates.len() >= n, "exclusions ate the grid");
    (0..n)
        .map(|i| candidates[i * (candidates.len() - 1) / (n - 1)])
        .collect()
}

/// Images under the characteristic map of the abscissae where the profile
/// can kink (piecewise breakpoints) or is near-singular (step center).
fn nonsmooth_images(sol: &CharacteristicSolution, t: f64) -> Vec<f64> {
    use crate::initial::Profile;
    let feet: Vec<f64> = match &sol.ic.profile {
        Profile::PiecewiseLinear { breakpoints } => breakpoints.iter().map(|b| b.0).collect(),
        Profile::SmoothedStep { center, .. } => vec![*center],
        _ => Vec::new(),
    };
    feet.iter()
        .filter_map(|&y| {
            let f = sol.family.flow_primitive(t, sol.ic.evaluate(y)).ok()?;
            Some(y + f)
        })
        .collect()
}

fn worst(max_so_far: f64, value: f64) -> f64 {
    if value > max_so_far {
        value
    } else {
        max_so_far
    }
}

/// Flow identity G(E(t,h0)) - G(h0) = t for families with a closed-form
/// primitive of 1/s; it pins E against an integral never used to build it.
pub fn check_flow_identity(samples: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = 1e-9;
    let mut max_err = 0.0_f64;
    for family in identity_families() {
        for _ in 0..samples {
            let h0 = rng.random_range(0.2..3.0);
            let t = time_within(&family, h0, 0.8, &mut rng);
            let q = match family.flow(t, h0) {
                Ok(q) => q,
                Err(e) => {
                    return PropertyReport::check(
                        "flow-identity",
                        false,
                        format!("unexpected domain error: {e}"),
                    )
                }
            };
            let g1 = family.reciprocal_source_primitive(q).expect("has a primitive");
            let g0 = family.reciprocal_source_primitive(h0).expect("has a primitive");
            max_err = worst(max_err, (g1 - g0 - t).abs());
        }
    }
    PropertyReport::check(
        "flow-identity",
        max_err <= tol,
        format!("max |G(E)-G(h0)-t| = {max_err:.3e} over {} samples (tol {tol:.0e})", 6 * samples),
    )
}

/// The time derivative of F is E (centered difference, delta = 1e-6).
pub fn check_primitive_identity(samples: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let delta = 1e-6;
    let mut max_rel = 0.0_f64;
    let mut families = identity_families();
    families.push(SourceFamily::Zero);
    for family in families {
        for _ in 0..samples {
            let h0 = rng.random_range(0.2..3.0);
            let t = delta + time_within(&family, h0, 0.7, &mut rng);
            let (e, fp, fm) = match (
                family.flow(t, h0),
                family.flow_primitive(t + delta, h0),
                family.flow_primitive(t - delta, h0),
            ) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => continue, // t + delta may leave validity; skip the sample
            };
            let fd = (fp - fm) / (2.0 * delta);
            max_rel = worst(max_rel, (fd - e).abs() / e.abs().max(1.0));
        }
    }
    PropertyReport::check(
        "primitive-identity",
        max_rel <= 1e-6,
        format!("max scaled |dF/dt - E| = {max_rel:.3e} (tol 1e-6)"),
    )
}

/// The flow map solves dq/dt = s(q) (centered difference in t).
pub fn check_ode_identity(samples: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let delta = 1e-6;
    let mut max_rel = 0.0_f64;
    for family in identity_families() {
        for _ in 0..samples {
            let h0 = rng.random_range(0.2..3.0);
            let t = delta + time_within(&family, h0, 0.7, &mut rng);
            let (e, ep, em) = match (
                family.flow(t, h0),
                family.flow(t + delta, h0),
                family.flow(t - delta, h0),
            ) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => continue,
            };
            let s = family.source_value(e);
            let fd = (ep - em) / (2.0 * delta);
            max_rel = worst(max_rel, (fd - s).abs() / s.abs().max(1.0));
        }
    }
    PropertyReport::check(
        "ode-identity",
        max_rel <= 1e-6,
        format!("max scaled |dE/dt - s(E)| = {max_rel:.3e} (tol 1e-6)"),
    )
}

/// flow(t1+t2, h0) = flow(t2, flow(t1, h0)).
pub fn check_semigroup(samples: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut max_err = 0.0_f64;
    for family in identity_families() {
        for _ in 0..samples {
            let h0 = rng.random_range(0.2..2.0);
            let total = time_within(&family, h0, 0.8, &mut rng);
            let t1 = rng.random_range(0.0..total.max(f64::MIN_POSITIVE));
            let t2 = total - t1;
            let direct = family.flow(total, h0);
            let staged = family.flow(t1, h0).and_then(|mid| family.flow(t2, mid));
            match (direct, staged) {
                (Ok(a), Ok(b)) => {
                    max_err = worst(max_err, (a - b).abs() / a.abs().max(1.0))
                }
                _ => {
                    return PropertyReport::check(
                        "semigroup",
                        false,
                        "staging left the validity window".to_string(),
                    )
                }
            }
        }
    }
    PropertyReport::check(
        "semigroup",
        max_err <= 1e-9,
        format!("max scaled |E(t1+t2) - E(t2)oE(t1)| = {max_err:.3e} (tol 1e-9)"),
    )
}

/// Tiny rates reduce every family to the sourceless limits.
pub fn check_beta_limits() -> PropertyReport {
    let beta = 1e-10;
    let mut max_err = 0.0_f64;
    for sign in [1.0, -1.0] {
        let b = sign * beta;
        for &(t, h0) in &[(0.3, 1.7), (1.0, 0.4), (2.0, 2.5)] {
            let cases = [
                (SourceFamily::Linear { beta: b }, h0, t * h0),
                (SourceFamily::Quadratic { beta: b }, h0, t * h0),
                (SourceFamily::Exponential { beta: b }, h0 + t, t * h0 + 0.5 * t * t),
            ];
            for (family, e_limit, f_limit) in cases {
                let e = family.flow(t, h0).unwrap();
                let f = family.flow_primitive(t, h0).unwrap();
                max_err = worst(max_err, (e - e_limit).abs());
                max_err = worst(max_err, (f - f_limit).abs());
            }
        }
    }
    PropertyReport::check(
        "beta-limit",
        max_err <= 1e-8,
        format!("max deviation from sourceless limits at |beta|=1e-10: {max_err:.3e} (tol 1e-8)"),
    )
}

/// E(0, h0) = h0 and F(0, h0) = 0, exactly.
pub fn check_normalization() -> PropertyReport {
    let mut families = identity_families();
    families.push(SourceFamily::Zero);
    for family in &families {
        for &h0 in &[-1.5, 0.0, 0.3, 2.0] {
            if family.flow(0.0, h0) != Ok(h0) || family.flow_primitive(0.0, h0) != Ok(0.0) {
                return PropertyReport::check(
                    "normalization",
                    false,
                    format!("E(0,{h0}) or F(0,{h0}) off for {family:?}"),
                );
            }
        }
    }
    PropertyReport::pass("normalization", "E(0,h0)=h0 and F(0,h0)=0 exactly".to_string())
}

/// Sourceless solutions satisfy the classical implicit form q = h0(x - t q).
pub fn check_homogeneous_implicit() -> PropertyReport {
    let cases = [
        (InitialCondition::sine(1.0, std::f64::consts::TAU), 0.1),
        (InitialCondition::trapezoid(), 0.05),
        (InitialCondition::affine(1.0, 0.0), 1.0),
    ];
    let mut max_err = 0.0_f64;
    for (ic, t) in cases {
        let sol = CharacteristicSolution::new(SourceFamily::Zero, ic);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let s = match sol.solve_point(x, t) {
                Ok(s) => s,
                Err(e) => {
                    return PropertyReport::check(
                        "homogeneous-implicit",
                        false,
                        format!("solve failed at x={x}: {e}"),
                    )
                }
            };
            max_err = worst(max_err, (s.q - sol.ic.evaluate(x - t * s.q)).abs());
        }
    }
    PropertyReport::check(
        "homogeneous-implicit",
        max_err <= 1e-10,
        format!("max |q - h0(x - t q)| = {max_err:.3e} (tol 1e-10)"),
    )
}

/// The worked closed forms: the sourceless ramp x/(1+t) and the linear-rate
/// profile beta*x/(beta-1), whose solution is beta*x*e^{bt}/(beta-2+e^{bt}).
pub fn check_closed_forms() -> PropertyReport {
    let mut max_err = 0.0_f64;

    let ramp = CharacteristicSolution::new(SourceFamily::Zero, InitialCondition::affine(1.0, 0.0));
    for &t in &[0.25, 1.0, 4.0] {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            match ramp.solve_point(x, t) {
                Ok(s) => max_err = worst(max_err, (s.q - x / (1.0 + t)).abs()),
                Err(e) => {
                    return PropertyReport::check(
                        "closed-forms",
                        false,
                        format!("ramp solve failed at x={x}, t={t}: {e}"),
                    )
                }
            }
        }
    }

    for &beta in &[3.0, -2.0, 0.5] {
        let slope = beta / (beta - 1.0);
        // feet can wander past x=1 when the profile decreases (down to
        // y ~ 1.8 for beta = 0.5 at t = 0.4); a wide definition interval
        // keeps the constant extension out of play
        let ic = InitialCondition::with_domain(
            crate::initial::Profile::Affine { slope, intercept: 0.0 },
            -2.0,
            2.0,
        );
        let sol = CharacteristicSolution::new(SourceFamily::Linear { beta }, ic);
        for &t in &[0.1, 0.25, 0.4] {
            let ebt = (beta * t).exp();
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let expect = beta * x * ebt / (beta - 2.0 + ebt);
                match sol.solve_point(x, t) {
                    Ok(s) => max_err = worst(max_err, (s.q - expect).abs()),
                    Err(e) => {
                        return PropertyReport::check(
                            "closed-forms",
                            false,
                            format!("linear-rate solve failed at x={x}, t={t}, beta={beta}: {e}"),
                        )
                    }
                }
            }
        }
    }
    PropertyReport::check(
        "closed-forms",
        max_err <= 1e-10,
        format!("max closed-form deviation = {max_err:.3e} (tol 1e-10)"),
    )
}

/// Largest scaled PDE defect |dq/dt + q dq/dx - s(q)| over smooth points,
/// via centered differences with spacing 1e-4.
pub fn pde_defect(
    sol: &CharacteristicSolution,
    t: f64,
    xs: &[f64],
) -> Result<f64, Error> {
    let h = 1e-4;
    assert!(t > h, "need room for the centered difference in t");
    let mut max_scaled = 0.0_f64;
    for &x in xs {
        let q = sol.solve_point(x, t)?.q;
        let qt = (sol.solve_point(x, t + h)?.q - sol.solve_point(x, t - h)?.q) / (2.0 * h);
        let qx = (sol.solve_point(x + h, t)?.q - sol.solve_point(x - h, t)?.q) / (2.0 * h);
        let s = sol.family.source_value(q);
        let defect = (qt + q * qx - s).abs();
        max_scaled = worst(max_scaled, defect / (1.0 + q.abs() + s.abs()));
    }
    Ok(max_scaled)
}

/// PDE defect on the three figure setups, away from kink/layer images.
pub fn check_pde_residual() -> PropertyReport {
    // the sine case is checked early (t=0.05): close to the fold the third
    // derivatives blow up and centered differences stop being meaningful
    let configs = figure_configs();
    let cases = [
        (&configs[0].0, configs[0].1, 0.005),
        (&configs[1].0, 0.05, 0.0),
        (&configs[2].0, configs[2].1, 0.16),
    ];
    let mut max_scaled = 0.0_f64;
    for (sol, t, radius) in cases {
        let exclusions: Vec<(f64, f64)> = nonsmooth_images(sol, t)
            .into_iter()
            .map(|c| (c, radius))
            .collect();
        let xs = smooth_points(0.02, 0.98, &exclusions, 200);
        match pde_defect(sol, t, &xs) {
            Ok(d) => max_scaled = worst(max_scaled, d),
            Err(e) => {
                return PropertyReport::check(
                    "pde-residual",
                    false,
                    format!("sampling failed: {e}"),
                )
            }
        }
    }
    PropertyReport::check(
        "pde-residual",
        max_scaled <= 1e-4,
        format!("max scaled PDE defect = {max_scaled:.3e} over 3 configs x 200 points (tol 1e-4)"),
    )
}

/// Coupled brute-force integration lands on the same (x, q) as the solver.
pub fn check_oracle_equivalence(samples: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let cfg = OracleConfig::default();
    let cases = [
        (SourceFamily::Zero, InitialCondition::affine(1.0, 0.0), 0.5),
        (SourceFamily::Linear { beta: -2.0 }, InitialCondition::trapezoid(), 0.2),
        (
            SourceFamily::Quadratic { beta: -2.0 },
            InitialCondition::sine(1.0, std::f64::consts::TAU),
            0.12,
        ),
        (
            SourceFamily::Exponential { beta: -1.0 },
            InitialCondition::smoothed_step(2.0, 1.0, 0.3, 1e-4),
            0.26,
        ),
    ];
    let mut max_err = 0.0_f64;
    for (family, ic, t_max) in cases {
        let sol = CharacteristicSolution::new(family.clone(), ic.clone());
        for _ in 0..samples {
            let y = rng.random_range(0.0..1.0);
            let t = rng.random_range(0.01..t_max);
            let (x_rk, q_rk) = match integrate_characteristic(&family, &ic, y, t, &cfg) {
                Ok(v) => v,
                Err(e) => {
                    return PropertyReport::check(
                        "oracle-equivalence",
                        false,
                        format!("oracle blew up: {e}"),
                    )
                }
            };
            let x = y + match family.flow_primitive(t, ic.evaluate(y)) {
                Ok(f) => f,
                Err(e) => {
                    return PropertyReport::check(
                        "oracle-equivalence",
                        false,
                        format!("primitive failed: {e}"),
                    )
                }
            };
            let s = match sol.solve_point(x, t) {
                Ok(s) => s,
                Err(e) => {
                    return PropertyReport::check(
                        "oracle-equivalence",
                        false,
                        format!("solver refused forward-constructed point x={x}, t={t}: {e}"),
                    )
                }
            };
            max_err = worst(max_err, (x_rk - x).abs());
            max_err = worst(max_err, (q_rk - s.q).abs());
        }
    }
    PropertyReport::check(
        "oracle-equivalence",
        max_err <= 1e-7,
        format!(
            "max |RK4 - closed form| = {max_err:.3e} over {} characteristics (tol 1e-7)",
            4 * samples
        ),
    )
}

/// Foot points never decrease along a grid sweep, and every accepted sample
/// meets the residual contract.
pub fn check_grid_invariants() -> PropertyReport {
    let xs: Vec<f64> = (0..400).map(|i| i as f64 / 399.0).collect();
    let mut max_res = 0.0_f64;
    for (sol, t) in figure_configs() {
        let samples = match sol.sample_grid(t, &xs) {
            Ok(s) => s,
            Err(e) => {
                return PropertyReport::check(
                    "grid-invariants",
                    false,
                    format!("sweep failed: {e}"),
                )
            }
        };
        for pair in samples.windows(2) {
            if pair[1].y < pair[0].y {
                return PropertyReport::check(
                    "grid-invariants",
                    false,
                    format!("feet decreased between x={} and x={}", pair[0].x, pair[1].x),
                );
            }
        }
        for s in &samples {
            max_res = worst(max_res, s.residual);
        }
    }
    let tol = RootConfig::default().residual_tol;
    PropertyReport::check(
        "grid-invariants",
        max_res <= tol,
        format!("feet monotone; max residual = {max_res:.3e} (tol {tol:.0e})"),
    )
}

/// Crossed characteristics are refused, single-valued configurations are not.
pub fn check_shock_refusal() -> PropertyReport {
    let sine = CharacteristicSolution::new(
        SourceFamily::Zero,
        InitialCondition::sine(1.0, std::f64::consts::TAU),
    );
    let refused = matches!(
        sine.solve_point(0.5, 0.2),
        Err(Error::MultivaluedSolution { .. })
    );
    if !refused {
        return PropertyReport::check(
            "shock-refusal",
            false,
            "folded sine at t=0.2 was not refused".to_string(),
        );
    }
    let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    if let Err(e) = sine.sample_grid(0.1, &xs) {
        return PropertyReport::check(
            "shock-refusal",
            false,
            format!("pre-fold sine sweep failed: {e}"),
        );
    }
    let quad = CharacteristicSolution::new(
        SourceFamily::Quadratic { beta: -2.0 },
        InitialCondition::sine(1.0, std::f64::consts::TAU),
    );
    match quad.sample_grid(0.15, &xs) {
        Ok(_) => PropertyReport::pass(
            "shock-refusal",
            "fold refused at t=0.2; single-valued sweeps at t=0.1 and t=0.15 accepted".to_string(),
        ),
        Err(e) => PropertyReport::check(
            "shock-refusal",
            false,
            format!("quadratic sine sweep at t=0.15 failed: {e}"),
        ),
    }
}

/// t = 0 sampling returns the profile itself.
pub fn check_t0_identity() -> PropertyReport {
    for (sol, _) in figure_configs() {
        for i in 0..=50 {
            let x = -0.2 + 1.4 * i as f64 / 50.0;
            let s = sol.solve_point(x, 0.0).expect("t=0 never fails");
            if s.q != sol.ic.evaluate(x) || s.y != x {
                return PropertyReport::check(
                    "t0-identity",
                    false,
                    format!("mismatch at x={x}"),
                );
            }
        }
    }
    PropertyReport::pass("t0-identity", "q(x,0) = h0(x) exactly".to_string())
}

/// The full deterministic suite, in a stable order.
pub fn run_default_suite() -> Vec<PropertyReport> {
    vec![
        check_normalization(),
        check_flow_identity(100),
        check_primitive_identity(100),
        check_ode_identity(100),
        check_semigroup(100),
        check_beta_limits(),
        check_t0_identity(),
        check_homogeneous_implicit(),
        check_closed_forms(),
        check_grid_invariants(),
        check_shock_refusal(),
        check_pde_residual(),
        check_oracle_equivalence(50),
    ]
}

/// Suite for one user-supplied configuration. Domain errors while sampling
/// (validity loss, folds) are returned as `Err`, distinct from property
/// failures.
pub fn run_config_suite(
    family: SourceFamily,
    ic: InitialCondition,
    t: f64,
    solver: RootConfig,
) -> Result<Vec<PropertyReport>, Error> {
    let sol = CharacteristicSolution::with_config(family, ic, solver);
    let (lo, hi) = sol.ic.domain();
    let xs: Vec<f64> = (0..=200).map(|i| lo + (hi - lo) * i as f64 / 200.0).collect();
    let samples = sol.sample_grid(t, &xs)?;

    let mut reports = Vec::new();

    let mut max_res = 0.0_f64;
    for s in &samples {
        max_res = worst(max_res, s.residual);
    }
    reports.push(PropertyReport::check(
        "sample-residuals",
        max_res <= sol.solver.residual_tol,
        format!("max residual = {max_res:.3e} (tol {:.0e})", sol.solver.residual_tol),
    ));

    let monotone = samples.windows(2).all(|p| p[1].y >= p[0].y);
    reports.push(PropertyReport::check(
        "foot-monotonicity",
        monotone,
        "foot points nondecreasing across the sweep".to_string(),
    ));

    if sol
        .family
        .reciprocal_source_primitive(1.0)
        .is_some()
    {
        let mut max_err = 0.0_f64;
        let mut checked = 0usize;
        for s in &samples {
            let h0 = sol.ic.evaluate(s.y);
            if let (Some(gq), Some(g0)) = (
                sol.family.reciprocal_source_primitive(s.q),
                sol.family.reciprocal_source_primitive(h0),
            ) {
                // G is finite only away from the source's zeros; skip the rest
                if gq.is_finite() && g0.is_finite() && h0.abs() > 1e-6 {
                    max_err = worst(max_err, (gq - g0 - t).abs());
                    checked += 1;
                }
            }
        }
        reports.push(PropertyReport::check(
            "flow-identity",
            max_err <= 1e-8,
            format!("max |G(q)-G(h0)-t| = {max_err:.3e} at {checked} feet (tol 1e-8)"),
        ));
    }

    if matches!(sol.family, SourceFamily::Zero) {
        let mut max_err = 0.0_f64;
        for s in &samples {
            max_err = worst(max_err, (s.q - sol.ic.evaluate(s.x - t * s.q)).abs());
        }
        reports.push(PropertyReport::check(
            "homogeneous-implicit",
            max_err <= 1e-10,
            format!("max |q - h0(x - t q)| = {max_err:.3e} (tol 1e-10)"),
        ));
    }

    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_is_green() {
        for report in run_default_suite() {
            assert!(report.passed, "{}: {}", report.name, report.detail);
        }
    }

    #[test]
    fn config_suite_flags_validity_loss() {
        let err = run_config_suite(
            SourceFamily::Quadratic { beta: 2.0 },
            InitialCondition::affine(0.0, 1.0),
            0.6,
            RootConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::AtX { source, .. } => {
                assert!(matches!(*source, Error::OutOfValidity { .. }))
            }
            other => panic!("expected an annotated validity error, got {other:?}"),
        }
    }

    #[test]
    fn config_suite_reports_on_a_good_setup() {
        let reports = run_config_suite(
            SourceFamily::Linear { beta: -2.0 },
            InitialCondition::trapezoid(),
            0.2,
            RootConfig::default(),
        )
        .unwrap();
        assert!(reports.iter().any(|r| r.name == "sample-residuals"));
        assert!(reports.iter().all(|r| r.passed), "{reports:?}");
    }

    #[test]
    fn smooth_point_selection_respects_exclusions() {
        let pts = smooth_points(0.0, 1.0, &[(0.5, 0.1)], 50);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|x| (x - 0.5).abs() >= 0.1));
        assert!(pts[0] < 0.01 && pts[49] > 0.99);
    }
}
