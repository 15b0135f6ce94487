//! Command bodies behind the thin `main`.
//!
//! Every command returns an exit code through [`dispatch`]; failures carry
//! enough context for a one-line stderr diagnostic. Data output is rendered
//! into a buffer first and written in one shot, so grid parallelism never
//! touches the byte stream.

use std::fs;
use std::io::{self, Write};

use charburg::fv::{Boundary, FvConfig, SourceUpdate, Splitting};
use charburg::solver::SolutionSample;
use charburg::verify::{self, PropertyReport};
use charburg::{CharacteristicSolution, Error, InitialCondition, RootConfig, SourceFamily};

use crate::args::{
    ConvergeArgs, FamilyArgs, FamilyKind, FigureArgs, IcKind, ProfileArgs, RunSpec, SampleArgs,
    SolverArgs, SplitKind, UpdateKind, VerifyArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
/// Filesystem/stream trouble is neither a math error nor a usage error;
/// use the sysexits code that 64 already comes from.
pub const EXIT_IO: i32 = 74;

enum Failure {
    Usage(String),
    Domain(Error),
    Io(io::Error),
}

impl Failure {
    fn report(&self) -> i32 {
        match self {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                EXIT_USAGE
            }
            Failure::Domain(e) => {
                eprintln!("error: {e}");
                EXIT_DOMAIN
            }
            Failure::Io(e) => {
                eprintln!("error: {e}");
                EXIT_IO
            }
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

pub fn dispatch(spec: &RunSpec) -> i32 {
    let outcome = match spec {
        RunSpec::Sample(a) => cmd_sample(a),
        RunSpec::Figure(a) => cmd_figure(a),
        RunSpec::Verify(a) => cmd_verify(a),
        RunSpec::Converge(a) => cmd_converge(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => f.report(),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn build_family(f: &FamilyArgs) -> SourceFamily {
    match f.source {
        FamilyKind::Zero => SourceFamily::Zero,
        FamilyKind::Linear => SourceFamily::Linear { beta: f.beta },
        FamilyKind::Quadratic => SourceFamily::Quadratic { beta: f.beta },
        FamilyKind::Exponential => SourceFamily::Exponential { beta: f.beta },
    }
}

fn build_profile(p: &ProfileArgs, levels: (f64, f64)) -> Result<InitialCondition, Failure> {
    match p.ic {
        IcKind::Affine => Ok(InitialCondition::affine(p.a, p.b)),
        IcKind::Trapezoid => Ok(InitialCondition::trapezoid()),
        IcKind::Sine => Ok(InitialCondition::sine(p.amp, p.freq)),
        IcKind::Smoothstep => {
            if p.eps.is_nan() || p.eps <= 0.0 {
                return Err(usage(format!("--eps must be positive, got {}", p.eps)));
            }
            Ok(InitialCondition::smoothed_step(
                levels.0, levels.1, p.center, p.eps,
            ))
        }
    }
}

fn build_solver(s: &SolverArgs) -> Result<RootConfig, Failure> {
    if !(s.tol > 0.0 && s.tol.is_finite()) {
        return Err(usage(format!("--tol must be a positive number, got {}", s.tol)));
    }
    if s.max_iter == 0 {
        return Err(usage("--max-iter must be at least 1"));
    }
    Ok(RootConfig {
        residual_tol: s.tol,
        max_iter: s.max_iter,
        ..RootConfig::default()
    })
}

fn check_time(t: f64) -> Result<(), Failure> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--t must be a finite time >= 0, got {t}")))
    }
}

fn grid(xmin: f64, xmax: f64, nx: usize) -> Result<Vec<f64>, Failure> {
    if nx < 2 {
        return Err(usage(format!("--nx must be at least 2, got {nx}")));
    }
    let ordered = xmin < xmax;
    if !ordered {
        return Err(usage(format!(
            "--xmin must lie strictly below --xmax, got [{xmin}, {xmax}]"
        )));
    }
    let h = (xmax - xmin) / (nx - 1) as f64;
    Ok((0..nx)
        .map(|i| if i == nx - 1 { xmax } else { xmin + i as f64 * h })
        .collect())
}

fn render_samples(rows: &[SolutionSample]) -> String {
    use std::fmt::Write as _;
    let mut s = String::with_capacity(32 + rows.len() * 120);
    s.push_str("x,t,q,y,residual\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.x, r.t, r.q, r.y, r.residual
        );
    }
    s
}

fn write_data(out: Option<&str>, data: &str, gnuplot: bool) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, data)?;
            if gnuplot {
                fs::write(format!("{path}.gp"), plot_script(path))?;
            }
            Ok(())
        }
        None => {
            if gnuplot {
                return Err(usage("--gnuplot needs --out so the script can reference the CSV"));
            }
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(data.as_bytes())?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn plot_script(csv: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'x'\n\
         set ylabel 'q'\n\
         plot '{csv}' using 1:3 with lines title 'q(x,t)'\n"
    )
}

fn sample_to_csv(
    sol: &CharacteristicSolution,
    t: f64,
    xs: &[f64],
    out: Option<&str>,
    gnuplot: bool,
) -> Result<i32, Failure> {
    let rows = sol.sample_grid(t, xs).map_err(Failure::Domain)?;
    write_data(out, &render_samples(&rows), gnuplot)?;
    Ok(EXIT_OK)
}

fn cmd_sample(a: &SampleArgs) -> Result<i32, Failure> {
    check_time(a.t)?;
    let xs = grid(a.xmin, a.xmax, a.nx)?;
    if a.gnuplot && a.out.is_none() {
        return Err(usage("--gnuplot needs --out so the script can reference the CSV"));
    }
    let sol = CharacteristicSolution::with_config(
        build_family(&a.family),
        build_profile(&a.profile, a.levels)?,
        build_solver(&a.solver)?,
    );
    sample_to_csv(&sol, a.t, &xs, a.out.as_deref(), a.gnuplot)
}

fn cmd_figure(a: &FigureArgs) -> Result<i32, Failure> {
    if a.gnuplot && a.out.is_none() {
        return Err(usage("--gnuplot needs --out so the script can reference the CSV"));
    }
    let (sol, t) = verify::figure_configs()
        .into_iter()
        .nth((a.preset - 1) as usize)
        .expect("preset range is enforced by the parser");
    let (lo, hi) = sol.ic.domain();
    let xs = grid(lo, hi, a.nx)?;
    sample_to_csv(&sol, t, &xs, a.out.as_deref(), a.gnuplot)
}

fn print_reports(reports: &[PropertyReport]) -> bool {
    let mut all = true;
    for r in reports {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} — {}", r.name, r.detail);
        all &= r.passed;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!(
        "{} properties checked, {}",
        reports.len(),
        if failed == 0 {
            "all passed".to_string()
        } else {
            format!("{failed} FAILED")
        }
    );
    all
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32, Failure> {
    let solver = build_solver(&a.solver)?;
    let reports = if a.single_config() {
        let t = a.t.unwrap_or(0.2);
        check_time(t)?;
        let family = build_family(&FamilyArgs {
            source: a.source.unwrap_or(FamilyKind::Zero),
            beta: a.beta,
        });
        let ic = build_profile(
            &ProfileArgs {
                ic: a.ic.unwrap_or(IcKind::Affine),
                a: a.a,
                b: a.b,
                amp: a.amp,
                freq: a.freq,
                center: a.center,
                eps: a.eps,
            },
            a.levels,
        )?;
        verify::run_config_suite(family, ic, t, solver).map_err(Failure::Domain)?
    } else {
        verify::run_default_suite()
    };
    Ok(if print_reports(&reports) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_converge(a: &ConvergeArgs) -> Result<i32, Failure> {
    if a.levels < 3 {
        return Err(usage(format!(
            "--levels must be at least 3 for an order estimate, got {}",
            a.levels
        )));
    }
    if a.cells < 8 {
        return Err(usage(format!("--cells must be at least 8, got {}", a.cells)));
    }
    if !(a.cfl > 0.0 && a.cfl < 1.0) {
        return Err(usage(format!("--cfl must lie in (0, 1), got {}", a.cfl)));
    }
    check_time(a.t)?;
    let family = build_family(&a.family);
    let ic = build_profile(&a.profile, (2.0, 1.0))?;
    let cfg = FvConfig {
        cells: a.cells,
        cfl: a.cfl,
        t_end: a.t,
        splitting: match a.split {
            SplitKind::Godunov => Splitting::GodunovSplit,
            SplitKind::Strang => Splitting::StrangSplit,
        },
        source_update: match a.update {
            UpdateKind::Exact => SourceUpdate::ExactFlow,
            UpdateKind::Rk4 => SourceUpdate::Rk4Step,
        },
        boundary: Boundary::ExactInflow,
    };
    let report = charburg::fv::convergence_study(cfg, &family, &ic, a.levels)
        .map_err(Failure::Domain)?;
    let mut buf: Vec<u8> = Vec::new();
    report.write_csv(&mut buf).map_err(Failure::Io)?;
    let data = String::from_utf8(buf).expect("CSV is ASCII");
    write_data(a.out.as_deref(), &data, false)?;
    Ok(EXIT_OK)
}
