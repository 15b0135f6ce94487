//! First-order finite-volume scheme measured against the exact solver.
//!
//! The scheme is deliberately plain: Godunov flux for the convex flux
//! q^2/2 (exact scalar Riemann solver), source handled by operator
//! splitting, ghost cells filled from the exact characteristic solution so
//! that boundary treatment never dominates the error. The point is not the
//! scheme itself but the assessment loop: run it, compare against
//! [`CharacteristicSolution`] point values at cell centers, and report
//! L1/Linf errors with observed convergence orders.

use std::io::{self, Write};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::initial::InitialCondition;
use crate::solver::CharacteristicSolution;
use crate::source::SourceFamily;

/// How the transport and source operators are composed each time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    /// First-order Lie splitting: transport, then a full source step.
    GodunovSplit,
    /// Strang splitting: half source, transport, half source.
    StrangSplit,
}

/// How the source substep dq/dt = s(q) is advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceUpdate {
    /// Apply the family's exact flow map per cell.
    ExactFlow,
    /// One Runge-Kutta 4 step per substep.
    Rk4Step,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Ghost cells take exact characteristic values at their centers.
    ExactInflow,
    /// Wrap around; only meaningful for periodic data.
    Periodic,
}

#[derive(Debug, Clone, Copy)]
pub struct FvConfig {
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub splitting: Splitting,
    pub source_update: SourceUpdate,
    pub boundary: Boundary,
}

impl FvConfig {
    pub fn new(cells: usize, t_end: f64) -> Self {
        let cfg = FvConfig {
            cells,
            cfl: 0.9,
            t_end,
            splitting: Splitting::GodunovSplit,
            source_update: SourceUpdate::ExactFlow,
            boundary: Boundary::ExactInflow,
        };
        cfg.validate();
        cfg
    }

    pub fn validate(&self) {
        assert!(self.cells >= 8, "need at least 8 cells");
        assert!(self.cfl > 0.0 && self.cfl < 1.0, "cfl must lie in (0, 1)");
        assert!(self.t_end >= 0.0, "t_end must be nonnegative");
    }
}

/// Godunov flux for f(q) = q^2 / 2: the exact Riemann solution sampled at
/// the interface. Shock for ql > qr (pick the side the shock moves away
/// from), rarefaction otherwise (sonic point 0 if straddled).
pub fn godunov_flux(ql: f64, qr: f64) -> f64 {
    let f = |q: f64| 0.5 * q * q;
    if ql > qr {
        // shock with speed (ql + qr) / 2
        if ql + qr > 0.0 {
            f(ql)
        } else {
            f(qr)
        }
    } else if ql > 0.0 {
        f(ql)
    } else if qr < 0.0 {
        f(qr)
    } else {
        0.0 // transonic rarefaction
    }
}

/// One in-progress finite-volume run; stepped explicitly so tests can watch
/// per-step invariants (mass, CFL) instead of only the final field.
pub struct FvRun {
    cfg: FvConfig,
    exact: CharacteristicSolution,
    q: Vec<f64>,
    t: f64,
    x_lo: f64,
    dx: f64,
}

impl FvRun {
    pub fn new(cfg: FvConfig, family: SourceFamily, ic: InitialCondition) -> Self {
        cfg.validate();
        let (x_lo, x_hi) = ic.domain();
        let dx = (x_hi - x_lo) / cfg.cells as f64;
        // initial cell averages by Simpson's rule per cell
        let q = (0..cfg.cells)
            .map(|i| {
                let a = x_lo + i as f64 * dx;
                let vals = (ic.evaluate(a), ic.evaluate(a + 0.5 * dx), ic.evaluate(a + dx));
                (vals.0 + 4.0 * vals.1 + vals.2) / 6.0
            })
            .collect();
        let exact = CharacteristicSolution::new(family, ic);
        FvRun { cfg, exact, q, t: 0.0, x_lo, dx }
    }

    pub fn state(&self) -> &[f64] {
        &self.q
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn finished(&self) -> bool {
        self.t >= self.cfg.t_end
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.cfg.cells)
            .map(|i| self.x_lo + (i as f64 + 0.5) * self.dx)
            .collect()
    }

    /// Total integral of the field, sum(q_i) * dx.
    pub fn mass(&self) -> f64 {
        self.q.iter().sum::<f64>() * self.dx
    }

    /// Advance one time step (clipped to land exactly on t_end).
    pub fn step(&mut self) -> Result<(), Error> {
        assert!(!self.finished(), "stepping past t_end");
        let speed = self.max_speed();
        let dt_cfl = if speed > 0.0 {
            self.cfg.cfl * self.dx / speed
        } else {
            self.cfg.t_end - self.t
        };
        let dt = dt_cfl.min(self.cfg.t_end - self.t);

        match self.cfg.splitting {
            Splitting::GodunovSplit => {
                self.transport(dt, 0.0)?;
                self.source(dt)?;
            }
            Splitting::StrangSplit => {
                self.source(0.5 * dt)?;
                self.transport(dt, 0.5 * dt)?;
                self.source(0.5 * dt)?;
            }
        }
        self.t += dt;

        // a stiff source can outrun the transport-based dt choice; refuse
        // the run rather than silently leave the stability region
        let bound = self.dx / dt;
        let post_speed = self.max_speed();
        if post_speed * dt / self.dx > 1.0 {
            return Err(Error::CflViolation { t: self.t, speed: post_speed, bound });
        }
        Ok(())
    }

    /// Run to completion and return the final cell field.
    pub fn run(mut self) -> Result<Vec<f64>, Error> {
        while !self.finished() {
            self.step()?;
        }
        Ok(self.q)
    }

    fn max_speed(&self) -> f64 {
        self.q.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    /// Conservative update with Godunov fluxes. `ghost_shift` is the source
    /// substep already applied to the interior (nonzero under Strang), so
    /// exact-solution ghosts get the same half update before transporting.
    fn transport(&mut self, dt: f64, ghost_shift: f64) -> Result<(), Error> {
        let n = self.cfg.cells;
        let (gl, gr) = match self.cfg.boundary {
            Boundary::Periodic => (self.q[n - 1], self.q[0]),
            Boundary::ExactInflow => {
                let xl = self.x_lo - 0.5 * self.dx;
                let xr = self.x_lo + (n as f64 + 0.5) * self.dx;
                let mut gl = self.exact.solve_point(xl, self.t)?.q;
                let mut gr = self.exact.solve_point(xr, self.t)?.q;
                if ghost_shift > 0.0 {
                    gl = self.source_substep(gl, ghost_shift)?;
                    gr = self.source_substep(gr, ghost_shift)?;
                }
                (gl, gr)
            }
        };

        let mut flux = Vec::with_capacity(n + 1);
        flux.push(godunov_flux(gl, self.q[0]));
        for i in 1..n {
            flux.push(godunov_flux(self.q[i - 1], self.q[i]));
        }
        flux.push(godunov_flux(self.q[n - 1], gr));

        let r = dt / self.dx;
        for i in 0..n {
            self.q[i] -= r * (flux[i + 1] - flux[i]);
        }
        Ok(())
    }

    fn source(&mut self, dt: f64) -> Result<(), Error> {
        if dt == 0.0 || matches!(self.exact.family, SourceFamily::Zero) {
            return Ok(());
        }
        for i in 0..self.cfg.cells {
            self.q[i] = self.source_substep(self.q[i], dt)?;
        }
        Ok(())
    }

    fn source_substep(&self, q: f64, dt: f64) -> Result<f64, Error> {
        match self.cfg.source_update {
            SourceUpdate::ExactFlow => self.exact.family.flow(dt, q),
            SourceUpdate::Rk4Step => {
                let s = |v: f64| self.exact.family.source_value(v);
                let k1 = s(q);
                let k2 = s(q + 0.5 * dt * k1);
                let k3 = s(q + 0.5 * dt * k2);
                let k4 = s(q + dt * k3);
                Ok(q + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
            }
        }
    }
}

/// Convenience wrapper: build, run, return the final field.
pub fn run_scheme(
    cfg: FvConfig,
    family: SourceFamily,
    ic: InitialCondition,
) -> Result<Vec<f64>, Error> {
    FvRun::new(cfg, family, ic).run()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub cells: usize,
    pub l1: f64,
    pub linf: f64,
    /// log2(previous L1 / this L1); absent on the first row and whenever a
    /// level is exact to roundoff.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    /// Observed order of the finest refinement, if defined.
    pub fn final_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }

    /// CSV with columns cells,L1,Linf,order (order blank where undefined).
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "cells,L1,Linf,order")?;
        for row in &self.rows {
            match row.order {
                Some(p) => writeln!(out, "{},{:.6e},{:.6e},{:.3}", row.cells, row.l1, row.linf, p)?,
                None => writeln!(out, "{},{:.6e},{:.6e},", row.cells, row.l1, row.linf)?,
            }
        }
        Ok(())
    }
}

/// L1 and Linf errors of one run against exact point values at cell centers.
fn level_errors(
    cfg: FvConfig,
    family: &SourceFamily,
    ic: &InitialCondition,
) -> Result<(f64, f64), Error> {
    let run = FvRun::new(cfg, family.clone(), ic.clone());
    let centers = run.cell_centers();
    let dx = centers[1] - centers[0];
    let field = run.run()?;
    let exact = CharacteristicSolution::new(family.clone(), ic.clone());
    let reference = exact.sample_grid(cfg.t_end, &centers)?;
    let mut l1 = 0.0;
    let mut linf = 0.0_f64;
    for (qh, s) in field.iter().zip(&reference) {
        let e = (qh - s.q).abs();
        l1 += e * dx;
        linf = linf.max(e);
    }
    Ok((l1, linf))
}

/// Refinement study: doubles the cell count per level starting at
/// `base.cells` and reports errors against the exact solution.
pub fn convergence_study(
    base: FvConfig,
    family: &SourceFamily,
    ic: &InitialCondition,
    levels: usize,
) -> Result<ErrorReport, Error> {
    base.validate();
    assert!(levels >= 3, "a convergence study needs at least 3 levels");

    let configs: Vec<FvConfig> = (0..levels)
        .map(|l| FvConfig { cells: base.cells << l, ..base })
        .collect();

    #[cfg(feature = "parallel")]
    let errors: Result<Vec<(f64, f64)>, Error> = configs
        .par_iter()
        .map(|cfg| level_errors(*cfg, family, ic))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let errors: Result<Vec<(f64, f64)>, Error> = configs
        .iter()
        .map(|cfg| level_errors(*cfg, family, ic))
        .collect();
    let errors = errors?;

    let mut rows = Vec::with_capacity(levels);
    let mut prev_l1: Option<f64> = None;
    for (cfg, (l1, linf)) in configs.iter().zip(errors) {
        let order = match prev_l1 {
            Some(p) if p > 0.0 && l1 > 0.0 => Some((p / l1).log2()),
            _ => None,
        };
        rows.push(ErrorRow { cells: cfg.cells, l1, linf, order });
        prev_l1 = Some(l1);
    }
    Ok(ErrorReport { rows })
}
