//! Foot-point inversion along characteristics.
//!
//! The characteristic through the foot point (y, 0) reaches
//! x = y + F(t, h0(y)) at time t, carrying the constant-in-y value
//! q = E(t, h0(y)). Solving the balance law at a point (x, t) therefore
//! means inverting the scalar equation
//!
//! ```text
//! residual(y) = y + F(t, h0(y)) - x = 0
//! ```
//!
//! for y. [`CharacteristicSolution::solve_point`] does this with a uniform
//! scan (which doubles as a crossing detector: more than one sign change
//! means the classical solution has broken down) followed by bisection,
//! which only needs continuity of h0 — kinked profiles are fine.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::initial::InitialCondition;
use crate::source::{Horizon, SourceFamily};

/// Window expansions attempted when the initial scan sees no sign change.
const MAX_EXPANSIONS: usize = 8;

/// Upper bound on the crossing-time probe in [`CharacteristicSolution::classical_horizon`];
/// no compression by then counts as never.
const HORIZON_PROBE_LIMIT: f64 = 1e9;

#[derive(Debug, Clone, Copy)]
pub struct RootConfig {
    /// Interval half-width stop for the auxiliary bisections (the horizon
    /// search). The foot-point bisection itself runs until the residual
    /// target is met or floats stagnate: a width-based stop would reject
    /// genuine roots of steep profiles whose residual still exceeds
    /// `residual_tol` at that width.
    pub abs_tol: f64,
    /// Absolute bound on |y + F(t, h0(y)) - x| accepted as a root.
    pub residual_tol: f64,
    /// Bisection iteration cap.
    pub max_iter: usize,
    /// Nodes in the uniform bracketing scan.
    pub scan_points: usize,
    /// The scan window is the profile domain extended by this multiple of
    /// its span on each side.
    pub search_margin: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            abs_tol: 1e-12,
            residual_tol: 1e-12,
            max_iter: 200,
            scan_points: 1024,
            search_margin: 2.0,
        }
    }
}

impl RootConfig {
    fn validate(&self) {
        assert!(self.abs_tol > 0.0, "abs_tol must be positive");
        assert!(self.residual_tol > 0.0, "residual_tol must be positive");
        assert!(self.max_iter >= 1, "max_iter must be at least 1");
        assert!(self.scan_points >= 8, "scan_points must be at least 8");
        assert!(self.search_margin >= 0.0, "search_margin must be nonnegative");
    }
}

/// One solved point of the balance law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample {
    pub x: f64,
    pub t: f64,
    /// Solution value q(x, t).
    pub q: f64,
    /// Foot point of the characteristic through (x, t).
    pub y: f64,
    /// |y + F(t, h0(y)) - x| at the accepted root.
    pub residual: f64,
}

/// Exact solver for one (family, initial condition) pair.
#[derive(Debug, Clone)]
pub struct CharacteristicSolution {
    pub family: SourceFamily,
    pub ic: InitialCondition,
    pub solver: RootConfig,
}

enum ScanHit {
    Empty,
    /// The residual was exactly zero at a scan node.
    Exact { y: f64 },
    Bracket { a: f64, fa: f64, b: f64 },
    Multiple { count: usize },
}

impl CharacteristicSolution {
    pub fn new(family: SourceFamily, ic: InitialCondition) -> Self {
        Self::with_config(family, ic, RootConfig::default())
    }

    pub fn with_config(family: SourceFamily, ic: InitialCondition, solver: RootConfig) -> Self {
        solver.validate();
        CharacteristicSolution { family, ic, solver }
    }

    /// Signed foot-point residual y + F(t, h0(y)) - x.
    pub fn residual(&self, y: f64, x: f64, t: f64) -> Result<f64, Error> {
        let f = self.family.flow_primitive(t, self.ic.evaluate(y))?;
        Ok(y + f - x)
    }

    /// Solve the balance law at (x, t).
    pub fn solve_point(&self, x: f64, t: f64) -> Result<SolutionSample, Error> {
        self.solve_point_from(x, t, None)
    }

    /// Exact solution values on a strictly increasing grid at one time.
    ///
    /// Fails with the first error in grid order, annotated with the
    /// offending x. With the `parallel` feature the points are solved
    /// independently on the rayon pool; the output (including which error
    /// wins) is identical either way.
    pub fn sample_grid(&self, t: f64, xs: &[f64]) -> Result<Vec<SolutionSample>, Error> {
        assert!(
            xs.windows(2).all(|w| w[0] < w[1]),
            "sample_grid needs strictly increasing abscissae"
        );
        #[cfg(feature = "parallel")]
        {
            self.sample_grid_parallel(t, xs)
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.sample_grid_sequential(t, xs)
        }
    }

    /// Sequential grid sweep. Each accepted root becomes a scan floor for
    /// the next point: foot points increase with x while the solution is
    /// classical, so nodes left of the previous root can be skipped without
    /// changing the outcome (the scan lattice itself is unchanged).
    pub fn sample_grid_sequential(&self, t: f64, xs: &[f64]) -> Result<Vec<SolutionSample>, Error> {
        let mut out = Vec::with_capacity(xs.len());
        let mut floor = None;
        for &x in xs {
            let sample = self
                .solve_point_from(x, t, floor)
                .map_err(|e| e.at_x(x))?;
            floor = Some(sample.y);
            out.push(sample);
        }
        Ok(out)
    }

    /// Grid sweep over the rayon pool. Points are independent, so the scan
    /// floor of the sequential sweep is simply dropped.
    #[cfg(feature = "parallel")]
    pub fn sample_grid_parallel(&self, t: f64, xs: &[f64]) -> Result<Vec<SolutionSample>, Error> {
        let results: Vec<Result<SolutionSample, Error>> = xs
            .par_iter()
            .map(|&x| self.solve_point(x, t).map_err(|e| e.at_x(x)))
            .collect();
        // surface the first failure in grid order, not rayon order
        results.into_iter().collect()
    }

    fn solve_point_from(
        &self,
        x: f64,
        t: f64,
        scan_floor: Option<f64>,
    ) -> Result<SolutionSample, Error> {
        self.solver.validate();
        assert!(t >= 0.0, "the characteristic construction runs forward in time");
        if t == 0.0 {
            // every characteristic has zero length: q(x, 0) = h0(x) exactly
            return Ok(SolutionSample { x, t, q: self.ic.evaluate(x), y: x, residual: 0.0 });
        }

        let (base_lo, base_hi) = self.scan_window();
        let center = 0.5 * (base_lo + base_hi);
        let half = 0.5 * (base_hi - base_lo);
        for expansion in 0..=MAX_EXPANSIONS {
            let scale = (1u64 << expansion) as f64;
            let (lo, hi) = (center - scale * half, center + scale * half);
            // the floor shortcut only applies to the unexpanded window,
            // where the lattice matches the full sweep's
            let floor = if expansion == 0 { scan_floor } else { None };
            match self.scan(x, t, lo, hi, floor)? {
                ScanHit::Exact { y } => return self.sample_at(y, x, t, 0.0),
                ScanHit::Bracket { a, fa, b } => return self.bisect(x, t, a, fa, b),
                ScanHit::Multiple { count } => {
                    return Err(Error::MultivaluedSolution { x, t, count })
                }
                ScanHit::Empty => {}
            }
        }
        Err(Error::BracketNotFound { x, t, expansions: MAX_EXPANSIONS })
    }

    /// Scan window: profile domain padded by `search_margin` times its span.
    fn scan_window(&self) -> (f64, f64) {
        let (lo, hi) = self.ic.domain();
        let pad = self.solver.search_margin * (hi - lo);
        (lo - pad, hi + pad)
    }

    /// Walk the uniform lattice on [lo, hi] and classify what it sees:
    /// nothing, exactly one root indication (an exact zero at a node, or one
    /// sign change between adjacent nodes), or several of them — the
    /// signature of crossed characteristics.
    fn scan(
        &self,
        x: f64,
        t: f64,
        lo: f64,
        hi: f64,
        floor: Option<f64>,
    ) -> Result<ScanHit, Error> {
        let n = self.solver.scan_points;
        let step = (hi - lo) / (n - 1) as f64;
        let start = match floor {
            Some(y0) => (((y0 - lo) / step).floor() as isize).clamp(0, n as isize - 2) as usize,
            None => 0,
        };

        let mut hits = 0usize;
        let mut first = ScanHit::Empty;
        let mut prev: Option<(f64, f64)> = None;
        for j in start..n {
            let yj = lo + j as f64 * step;
            let rj = self.residual(yj, x, t)?;
            if rj == 0.0 {
                hits += 1;
                if hits == 1 {
                    first = ScanHit::Exact { y: yj };
                }
            } else if let Some((yp, rp)) = prev {
                if rp != 0.0 && rp.signum() != rj.signum() {
                    hits += 1;
                    if hits == 1 {
                        first = ScanHit::Bracket { a: yp, fa: rp, b: yj };
                    }
                }
            }
            prev = Some((yj, rj));
        }
        if hits > 1 {
            return Ok(ScanHit::Multiple { count: hits });
        }
        Ok(first)
    }

    /// Bisection on a bracketing interval. Succeeds as soon as the residual
    /// drops to `residual_tol`; gives up when the bracket is below `abs_tol`
    /// and floats cannot split it further, or after `max_iter` steps.
    fn bisect(&self, x: f64, t: f64, mut a: f64, fa: f64, mut b: f64) -> Result<SolutionSample, Error> {
        let cfg = &self.solver;
        let negative_left = fa < 0.0;
        let mut iterations = 0;
        let mut r = fa;
        while iterations < cfg.max_iter {
            let mid = 0.5 * (a + b);
            r = self.residual(mid, x, t)?;
            iterations += 1;
            if r.abs() <= cfg.residual_tol {
                return self.sample_at(mid, x, t, r);
            }
            if mid == a || mid == b {
                // floats cannot split the bracket any further
                break;
            }
            if (r < 0.0) == negative_left {
                a = mid;
            } else {
                b = mid;
            }
        }
        Err(Error::NoConvergence { x, residual: r.abs(), iterations })
    }

    fn sample_at(&self, y: f64, x: f64, t: f64, residual: f64) -> Result<SolutionSample, Error> {
        let q = self.family.flow(t, self.ic.evaluate(y))?;
        Ok(SolutionSample { x, t, q, y, residual: residual.abs() })
    }

    /// First time at which neighbouring characteristics compress to zero
    /// width, i.e. the classical solution can break: the minimum over the
    /// foot grid of the first root of
    ///
    /// ```text
    /// d(t) = 1 + (F(t, h0(y + delta)) - F(t, h0(y - delta))) / (2 delta)
    /// ```
    ///
    /// with delta the grid spacing, capped by the smallest validity horizon
    /// seen on the grid. `Infinite` when nothing compresses. Intended grid:
    /// at least 256 uniform points covering the profile's support.
    pub fn classical_horizon(&self, y_grid: &[f64]) -> Horizon {
        assert!(y_grid.len() >= 2, "need a grid to estimate the horizon");
        let delta = y_grid[1] - y_grid[0];
        assert!(delta > 0.0, "grid must increase");

        let mut horizon = Horizon::Infinite;
        for &y in y_grid {
            horizon = horizon.min(self.family.validity_time(self.ic.evaluate(y)));
        }
        for &y in y_grid {
            let hm = self.ic.evaluate(y - delta);
            let hp = self.ic.evaluate(y + delta);
            let cap = self
                .family
                .validity_time(hm)
                .min(self.family.validity_time(hp))
                .min(horizon);
            if let Some(tc) = self.first_compression_time(hm, hp, delta, cap) {
                horizon = horizon.min(Horizon::Finite(tc));
            }
        }
        horizon
    }

    /// Smallest t > 0 with d(t) <= 0 (see `classical_horizon`), found by a
    /// doubling probe followed by bisection; `None` if d stays positive up
    /// to the cap.
    fn first_compression_time(&self, hm: f64, hp: f64, delta: f64, cap: Horizon) -> Option<f64> {
        let d = |t: f64| -> Option<f64> {
            let fm = self.family.flow_primitive(t, hm).ok()?;
            let fp = self.family.flow_primitive(t, hp).ok()?;
            Some(1.0 + (fp - fm) / (2.0 * delta))
        };
        let t_cap = match cap {
            Horizon::Finite(tv) => tv * (1.0 - 1e-9),
            Horizon::Infinite => HORIZON_PROBE_LIMIT,
        };

        // expand until d turns nonpositive
        let mut lo = 0.0;
        let mut hi = t_cap.min(1e-3);
        loop {
            match d(hi) {
                Some(v) if v <= 0.0 => break,
                Some(_) => {
                    if hi >= t_cap {
                        return None;
                    }
                    lo = hi;
                    hi = (hi * 2.0).min(t_cap);
                }
                // beyond validity despite the cap margin: nothing below it
                None => return None,
            }
        }

        for _ in 0..self.solver.max_iter {
            let mid = 0.5 * (lo + hi);
            let width_tol = self.solver.abs_tol.max(1e-13 * hi.max(1.0));
            if mid == lo || mid == hi || hi - lo <= width_tol {
                break;
            }
            match d(mid) {
                Some(v) if v > 0.0 => lo = mid,
                _ => hi = mid,
            }
        }
        Some(0.5 * (lo + hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::source::CustomSource;

    fn homogeneous_ramp() -> CharacteristicSolution {
        CharacteristicSolution::new(SourceFamily::Zero, InitialCondition::affine(1.0, 0.0))
    }

    #[test]
    fn residual_examples() {
        let sol = homogeneous_ramp();
        // x = y(1 + t) for the homogeneous ramp: y = 0.25 is the foot of x = 0.5 at t = 1
        assert_eq!(sol.residual(0.25, 0.5, 1.0).unwrap(), 0.0);
        assert_eq!(sol.residual(0.3, 0.5, 0.0).unwrap(), -0.2);
        let lin = CharacteristicSolution::new(
            SourceFamily::Linear { beta: -2.0 },
            InitialCondition::trapezoid(),
        );
        // forward-constructed point: x = y + F(t, h0(y))
        let y = 0.3;
        let x = y + lin.family.flow_primitive(0.2, 3.0).unwrap();
        assert!(lin.residual(y, x, 0.2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn ramp_solution_contracts_like_x_over_one_plus_t() {
        let sol = homogeneous_ramp();
        let s = sol.solve_point(0.5, 1.0).unwrap();
        assert!((s.q - 0.25).abs() <= 1e-12, "q = {}", s.q);
        assert!((s.y - 0.25).abs() <= 1e-11);
        assert!(s.residual <= sol.solver.residual_tol);
    }

    #[test]
    fn t_zero_returns_the_profile_exactly() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Exponential { beta: -1.0 },
            InitialCondition::smoothed_step(2.0, 1.0, 0.3, 1e-4),
        );
        for &x in &[-0.2, 0.0, 0.3, 0.77, 1.4] {
            let s = sol.solve_point(x, 0.0).unwrap();
            assert_eq!(s.q, sol.ic.evaluate(x));
            assert_eq!(s.y, x);
            assert_eq!(s.residual, 0.0);
        }
    }

    #[test]
    fn linear_closed_form_point() {
        // h0 = beta x / (beta - 1) turns the solution into
        // q = beta x e^{beta t} / (beta - 2 + e^{beta t})
        let beta = 3.0;
        let sol = CharacteristicSolution::new(
            SourceFamily::Linear { beta },
            InitialCondition::affine(beta / (beta - 1.0), 0.0),
        );
        let s = sol.solve_point(1.0, 0.1).unwrap();
        let expect = beta * 1.0 * (beta * 0.1f64).exp() / (beta - 2.0 + (beta * 0.1f64).exp());
        assert!((expect - 1.723327550434977).abs() < 1e-14); // frozen
        assert!((s.q - expect).abs() < 1e-11, "q = {}, expect {expect}", s.q);
    }

    #[test]
    fn stagnation_point_of_the_quadratic_sine_stays_put() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Quadratic { beta: -2.0 },
            InitialCondition::sine(1.0, std::f64::consts::TAU),
        );
        // h0(0.5) = sin(pi) = 0 is a fixed point of the flow and F(t, 0) = 0
        let s = sol.solve_point(0.5, 0.15).unwrap();
        assert!(s.q.abs() <= 1e-12, "q = {}", s.q);
        assert!((s.y - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn grid_sweep_matches_pointwise_solves() {
        let sol = homogeneous_ramp();
        let xs = [0.0, 0.5, 1.0];
        let got = sol.sample_grid(1.0, &xs).unwrap();
        for (s, expect) in got.iter().zip([0.0, 0.25, 0.5]) {
            assert!((s.q - expect).abs() <= 1e-12, "{s:?}");
        }
    }

    #[test]
    fn sequential_floor_reuse_changes_nothing() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Quadratic { beta: -2.0 },
            InitialCondition::sine(1.0, std::f64::consts::TAU),
        );
        let xs: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
        let seq = sol.sample_grid_sequential(0.12, &xs).unwrap();
        let pointwise: Vec<_> = xs.iter().map(|&x| sol.solve_point(x, 0.12).unwrap()).collect();
        assert_eq!(seq, pointwise);
        #[cfg(feature = "parallel")]
        assert_eq!(sol.sample_grid_parallel(0.12, &xs).unwrap(), pointwise);
    }

    #[test]
    fn crossed_characteristics_are_refused() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Zero,
            InitialCondition::sine(1.0, std::f64::consts::TAU),
        );
        // the sine steepens at x = 0.5 and folds at t = 1/(2 pi) ~ 0.159
        let err = sol.solve_point(0.5, 0.2).unwrap_err();
        match err {
            Error::MultivaluedSolution { count, .. } => assert_eq!(count, 3),
            other => panic!("expected MultivaluedSolution, got {other:?}"),
        }
        // pre-fold times still work everywhere
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        assert!(sol.sample_grid(0.1, &xs).is_ok());
    }

    #[test]
    fn grid_error_reports_the_offending_abscissa() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Zero,
            InitialCondition::sine(1.0, std::f64::consts::TAU),
        );
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let err = sol.sample_grid(0.2, &xs).unwrap_err();
        match err {
            Error::MultivaluedSolution { x, .. } => {
                assert!((0.4..=0.6).contains(&x), "first bad point at x = {x}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn out_of_validity_is_annotated_with_x() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Quadratic { beta: 2.0 },
            InitialCondition::affine(0.0, 1.0),
        );
        // every foot value is 1, so validity ends at t = 0.5
        let err = sol.sample_grid(0.6, &[0.2, 0.4]).unwrap_err();
        match err {
            Error::AtX { x, source } => {
                assert_eq!(x, 0.2);
                assert!(matches!(*source, Error::OutOfValidity { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unreachable_abscissa_exhausts_the_expansions() {
        let sol = homogeneous_ramp();
        let err = sol.solve_point(1e9, 1.0).unwrap_err();
        assert!(matches!(err, Error::BracketNotFound { .. }), "{err:?}");
    }

    #[test]
    fn pathological_custom_family_reports_no_convergence() {
        // a discontinuous "primitive" makes the residual jump across zero
        // without a root: bisection must give up, not loop
        let family = SourceFamily::Custom(Arc::new(CustomSource {
            source: Box::new(|_| 0.0),
            flow: Box::new(|_, h0| Ok(h0)),
            primitive: Box::new(|t, h0| {
                Ok(if h0 < 0.5 { -t } else { t })
            }),
            validity: Box::new(|_| Horizon::Infinite),
        }));
        let sol = CharacteristicSolution::new(family, InitialCondition::affine(1.0, 0.0));
        let err = sol.solve_point(0.5, 1.0).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }), "{err:?}");
    }

    #[test]
    fn horizon_of_a_spreading_ramp_is_infinite() {
        let sol = homogeneous_ramp();
        let grid: Vec<f64> = (0..256).map(|i| i as f64 / 255.0).collect();
        assert_eq!(sol.classical_horizon(&grid), Horizon::Infinite);
    }

    #[test]
    fn horizon_of_the_homogeneous_sine() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Zero,
            InitialCondition::sine(1.0, std::f64::consts::TAU),
        );
        let grid: Vec<f64> = (0..512).map(|i| i as f64 / 511.0).collect();
        let h = sol.classical_horizon(&grid).finite().expect("sine must fold");
        // steepest descent of sin(2 pi x) is 2 pi, so the fold time is 1/(2 pi)
        assert!(
            (h - 0.15915494309189535).abs() < 1e-3,
            "horizon {h} vs 1/(2 pi)"
        );
    }

    #[test]
    fn horizon_is_capped_by_validity() {
        let sol = CharacteristicSolution::new(
            SourceFamily::Quadratic { beta: 2.0 },
            InitialCondition::affine(0.0, 1.0),
        );
        let grid: Vec<f64> = (0..256).map(|i| i as f64 / 255.0).collect();
        match sol.classical_horizon(&grid) {
            Horizon::Finite(h) => assert!((h - 0.5).abs() < 1e-9, "horizon {h}"),
            Horizon::Infinite => panic!("expected the validity cap"),
        }
    }
}
