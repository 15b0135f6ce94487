use thiserror::Error;

/// Failure modes shared by the exact solver, the RK4 reference integrators
/// and the finite-volume scheme.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The flow map (or its time primitive) is not defined at `t` for this
    /// initial value: the equivalent ODE blows up earlier.
    #[error("OutOfValidity: flow map undefined at t = {t} for initial value {h0}")]
    OutOfValidity { t: f64, h0: f64 },

    /// The foot-point equation y + F(t, h0(y)) = x has more than one root:
    /// characteristics have crossed and the classical solution is gone.
    #[error("MultivaluedSolution: {count} foot-point candidates at x = {x}, t = {t}")]
    MultivaluedSolution { x: f64, t: f64, count: usize },

    /// No sign change of the foot-point residual was found, even after
    /// expanding the scan window.
    #[error("BracketNotFound: no residual sign change near x = {x} at t = {t} after {expansions} window expansions")]
    BracketNotFound { x: f64, t: f64, expansions: usize },

    /// Bisection stalled with the residual still above `residual_tol`.
    #[error("NoConvergence: residual {residual:e} after {iterations} bisection steps at x = {x}")]
    NoConvergence { x: f64, residual: f64, iterations: usize },

    /// |q| passed the blow-up guard during numerical integration.
    #[error("BlowUpDetected: |q| exceeded {limit:e} near t = {t}")]
    BlowUpDetected { t: f64, limit: f64 },

    /// A wave-speed estimate broke the CFL bound mid-run.
    #[error("CflViolation: wave speed {speed} exceeds the stable bound {bound} at t = {t}")]
    CflViolation { t: f64, speed: f64, bound: f64 },

    /// A lower-level error annotated with the grid abscissa it occurred at.
    #[error("{source} (x = {x})")]
    AtX {
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the offending grid abscissa to errors that do not already
    /// carry one. Used by grid sweeps so a caller can always report where
    /// a run failed.
    pub fn at_x(self, x: f64) -> Error {
        match self {
            Error::OutOfValidity { .. } | Error::BlowUpDetected { .. } => Error::AtX {
                x,
                source: Box::new(self),
            },
            other => other,
        }
    }
}
