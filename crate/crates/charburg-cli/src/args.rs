//! Flag surface of the `charburg` binary.
//!
//! Everything is plain clap derive; [`RunSpec`] is the parsed, resolved run.
//! Its `to_args` inverse exists so round-tripping (parse, print, re-parse)
//! can be asserted — the CLI promises that a printed spec reproduces the
//! run exactly.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(
    name = "charburg",
    version,
    about = "Exact characteristic solutions of the Burgers balance law, plus a finite-volume assessment harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: RunSpec,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum RunSpec {
    /// Sample the exact solution on a grid and emit CSV
    Sample(SampleArgs),
    /// Emit the data behind one of the three built-in plots
    Figure(FigureArgs),
    /// Run the property suite (whole library, or one configuration)
    Verify(VerifyArgs),
    /// Finite-volume refinement study against the exact solution
    Converge(ConvergeArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Zero,
    Linear,
    Quadratic,
    Exponential,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    /// a*x + b
    Affine,
    /// the built-in trapezoidal pulse (2 up to 3 and back)
    Trapezoid,
    /// amp * sin(freq * x)
    Sine,
    /// smooth step between two plateaus
    Smoothstep,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    /// transport then a full source step (Lie)
    Godunov,
    /// half source, transport, half source
    Strang,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    /// exact per-cell flow map
    Exact,
    /// one RK4 step per source substep
    Rk4,
}

pub fn parse_level_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI but got '{s}'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad level '{v}': {e}"))
    };
    Ok((parse(lo)?, parse(hi)?))
}

/// Source-term selection, shared by all commands.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct FamilyArgs {
    /// source term family
    #[arg(long, value_enum, default_value = "zero")]
    pub source: FamilyKind,
    /// rate coefficient of the source (ignored for zero)
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub beta: f64,
}

/// Initial-profile selection, shared by all commands.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct ProfileArgs {
    /// initial-condition shape
    #[arg(long, value_enum, default_value = "affine")]
    pub ic: IcKind,
    /// affine slope
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a: f64,
    /// affine intercept
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b: f64,
    /// sine amplitude
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub amp: f64,
    /// sine frequency in radians per unit x
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    pub freq: f64,
    /// smoothstep center
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub center: f64,
    /// smoothstep transition width parameter (squared length scale)
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
}

/// Root-solver overrides, shared by the sampling commands.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct SolverArgs {
    /// accepted bound on the foot-point residual |y + F - x|
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// bisection iteration cap
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct SampleArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// smoothstep plateau pair: value right of the step, value left of it
    #[arg(long, value_parser = parse_level_pair, default_value = "2,1")]
    pub levels: (f64, f64),
    /// evaluation time
    #[arg(long)]
    pub t: f64,
    /// left edge of the sampling grid
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub xmin: f64,
    /// right edge of the sampling grid
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub xmax: f64,
    /// number of grid points
    #[arg(long, default_value_t = 101)]
    pub nx: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<String>,
    /// also write a gnuplot script next to the CSV (needs --out)
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct FigureArgs {
    /// which built-in configuration: 1 (trapezoid, linear decay),
    /// 2 (sine, quadratic decay) or 3 (smoothed step, exponential source)
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub preset: u8,
    /// number of grid points
    #[arg(long, default_value_t = 400)]
    pub nx: usize,
    /// write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<String>,
    /// also write a gnuplot script next to the CSV (needs --out)
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct VerifyArgs {
    /// check one family instead of running the whole suite
    #[arg(long, value_enum)]
    pub source: Option<FamilyKind>,
    /// rate coefficient of the source
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub beta: f64,
    /// initial condition for the single-configuration mode
    #[arg(long, value_enum)]
    pub ic: Option<IcKind>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub amp: f64,
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    pub freq: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub center: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    /// smoothstep plateau pair: value right of the step, value left of it
    #[arg(long, value_parser = parse_level_pair, default_value = "2,1")]
    pub levels: (f64, f64),
    /// evaluation time for the single-configuration mode
    #[arg(long)]
    pub t: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

impl VerifyArgs {
    /// Explicit flags switch from the whole-library suite to one setup.
    pub fn single_config(&self) -> bool {
        self.source.is_some() || self.ic.is_some() || self.t.is_some()
    }
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// refinement levels (cells double per level)
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// cell count of the coarsest level
    #[arg(long, default_value_t = 64)]
    pub cells: usize,
    /// CFL number
    #[arg(long, default_value_t = 0.9)]
    pub cfl: f64,
    /// end time of every run
    #[arg(long, default_value_t = 0.1)]
    pub t: f64,
    /// operator splitting
    #[arg(long, value_enum, default_value = "godunov")]
    pub split: SplitKind,
    /// source substep integrator
    #[arg(long, value_enum, default_value = "exact")]
    pub update: UpdateKind,
    /// write the CSV table here instead of stdout
    #[arg(long)]
    pub out: Option<String>,
}

fn push(v: &mut Vec<String>, name: &str, value: String) {
    v.push(format!("--{name}"));
    v.push(value);
}

impl RunSpec {
    /// The exact argument vector (without the binary name) that reproduces
    /// this run. Floats print in Rust's shortest round-trip form.
    pub fn to_args(&self) -> Vec<String> {
        match self {
            RunSpec::Sample(s) => {
                let mut v = vec!["sample".to_string()];
                push(&mut v, "source", kind_name(s.family.source));
                push(&mut v, "beta", s.family.beta.to_string());
                push_profile(&mut v, &s.profile);
                push(&mut v, "levels", format!("{},{}", s.levels.0, s.levels.1));
                push(&mut v, "t", s.t.to_string());
                push(&mut v, "xmin", s.xmin.to_string());
                push(&mut v, "xmax", s.xmax.to_string());
                push(&mut v, "nx", s.nx.to_string());
                push(&mut v, "tol", s.solver.tol.to_string());
                push(&mut v, "max-iter", s.solver.max_iter.to_string());
                if let Some(o) = &s.out {
                    push(&mut v, "out", o.clone());
                }
                if s.gnuplot {
                    v.push("--gnuplot".to_string());
                }
                v
            }
            RunSpec::Figure(f) => {
                let mut v = vec!["figure".to_string(), f.preset.to_string()];
                push(&mut v, "nx", f.nx.to_string());
                if let Some(o) = &f.out {
                    push(&mut v, "out", o.clone());
                }
                if f.gnuplot {
                    v.push("--gnuplot".to_string());
                }
                v
            }
            RunSpec::Verify(c) => {
                let mut v = vec!["verify".to_string()];
                if let Some(k) = c.source {
                    push(&mut v, "source", kind_name(k));
                }
                push(&mut v, "beta", c.beta.to_string());
                if let Some(k) = c.ic {
                    push(&mut v, "ic", ic_name(k));
                }
                push(&mut v, "a", c.a.to_string());
                push(&mut v, "b", c.b.to_string());
                push(&mut v, "amp", c.amp.to_string());
                push(&mut v, "freq", c.freq.to_string());
                push(&mut v, "center", c.center.to_string());
                push(&mut v, "eps", c.eps.to_string());
                push(&mut v, "levels", format!("{},{}", c.levels.0, c.levels.1));
                if let Some(t) = c.t {
                    push(&mut v, "t", t.to_string());
                }
                push(&mut v, "tol", c.solver.tol.to_string());
                push(&mut v, "max-iter", c.solver.max_iter.to_string());
                v
            }
            RunSpec::Converge(c) => {
                let mut v = vec!["converge".to_string()];
                push(&mut v, "source", kind_name(c.family.source));
                push(&mut v, "beta", c.family.beta.to_string());
                push_profile(&mut v, &c.profile);
                push(&mut v, "levels", c.levels.to_string());
                push(&mut v, "cells", c.cells.to_string());
                push(&mut v, "cfl", c.cfl.to_string());
                push(&mut v, "t", c.t.to_string());
                push(
                    &mut v,
                    "split",
                    match c.split {
                        SplitKind::Godunov => "godunov",
                        SplitKind::Strang => "strang",
                    }
                    .to_string(),
                );
                push(
                    &mut v,
                    "update",
                    match c.update {
                        UpdateKind::Exact => "exact",
                        UpdateKind::Rk4 => "rk4",
                    }
                    .to_string(),
                );
                if let Some(o) = &c.out {
                    push(&mut v, "out", o.clone());
                }
                v
            }
        }
    }
}

fn kind_name(k: FamilyKind) -> String {
    match k {
        FamilyKind::Zero => "zero",
        FamilyKind::Linear => "linear",
        FamilyKind::Quadratic => "quadratic",
        FamilyKind::Exponential => "exponential",
    }
    .to_string()
}

fn ic_name(k: IcKind) -> String {
    match k {
        IcKind::Affine => "affine",
        IcKind::Trapezoid => "trapezoid",
        IcKind::Sine => "sine",
        IcKind::Smoothstep => "smoothstep",
    }
    .to_string()
}

fn push_profile(v: &mut Vec<String>, p: &ProfileArgs) {
    push(v, "ic", ic_name(p.ic));
    push(v, "a", p.a.to_string());
    push(v, "b", p.b.to_string());
    push(v, "amp", p.amp.to_string());
    push(v, "freq", p.freq.to_string());
    push(v, "center", p.center.to_string());
    push(v, "eps", p.eps.to_string());
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn reparse(spec: &RunSpec) -> RunSpec {
        let mut argv = vec!["charburg".to_string()];
        argv.extend(spec.to_args());
        Cli::try_parse_from(argv).expect("printed spec must re-parse").command
    }

    #[test]
    fn sample_spec_round_trips_awkward_floats() {
        let cli = Cli::try_parse_from([
            "charburg",
            "sample",
            "--source",
            "exponential",
            "--beta",
            "-1.0000000000000002",
            "--ic",
            "smoothstep",
            "--levels",
            "2.5,0.30000000000000004",
            "--eps",
            "1e-17",
            "--t",
            "0.1",
            "--xmin",
            "-3.5e300",
            "--nx",
            "7",
        ])
        .unwrap();
        assert_eq!(reparse(&cli.command), cli.command);
    }

    #[test]
    fn every_command_round_trips_with_defaults() {
        for argv in [
            vec!["charburg", "sample", "--t", "0.2"],
            vec!["charburg", "figure", "2"],
            vec!["charburg", "verify"],
            vec!["charburg", "verify", "--source", "quadratic", "--beta", "2", "--t", "0.6"],
            vec!["charburg", "converge", "--levels", "3", "--cells", "16"],
        ] {
            let cli = Cli::try_parse_from(&argv).unwrap();
            assert_eq!(reparse(&cli.command), cli.command, "{argv:?}");
        }
    }

    #[test]
    fn negative_numbers_pass_flag_parsing() {
        let cli = Cli::try_parse_from([
            "charburg", "sample", "--beta", "-2", "--a", "-1", "--t", "0.3", "--xmin", "-0.5",
        ])
        .unwrap();
        match cli.command {
            RunSpec::Sample(s) => {
                assert_eq!(s.family.beta, -2.0);
                assert_eq!(s.profile.a, -1.0);
                assert_eq!(s.xmin, -0.5);
            }
            _ => unreachable!(),
        }
    }
}
