//! Source-term families and their exact flow maps.
//!
//! For the balance law q_t + (q^2/2)_x = s(q) each family knows three things
//! in closed form:
//!
//! * `source_value`: s(q) itself,
//! * `flow`: the flow map E(t, h0) of the equivalent ODE dq/dt = s(q) with
//!   q(0) = h0,
//! * `flow_primitive`: F(t, h0) = integral of E(tau, h0) over tau in [0, t],
//!   with F(0, h0) = 0.
//!
//! Characteristics of the balance law are then straight reads of these maps:
//! the characteristic through the foot point (y, 0) reaches x = y + F(t, h0(y))
//! carrying the value q = E(t, h0(y)).
//!
//! Families with a blow-up (Quadratic with beta*h0 > 0, Exponential with
//! beta > 0) report their horizon through [`SourceFamily::validity_time`];
//! `flow`/`flow_primitive` refuse arguments at or past that horizon.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Largest |beta| still treated as the beta -> 0 limit of a family. Below
/// this the closed forms degenerate to 0/0 and the series limits are used
/// instead.
pub const BETA_LIMIT: f64 = 1e-8;

/// Logarithm arguments and denominators must stay above this margin,
/// otherwise the input counts as past the validity horizon.
pub const VALIDITY_MARGIN: f64 = 1e-14;

/// Clears the validity margin; NaN fails the test and is rejected upstream.
fn above_margin(v: f64) -> bool {
    v > VALIDITY_MARGIN
}

/// An extended-real time horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

impl Horizon {
    pub fn min(self, other: Horizon) -> Horizon {
        match (self, other) {
            (Horizon::Infinite, h) | (h, Horizon::Infinite) => h,
            (Horizon::Finite(a), Horizon::Finite(b)) => Horizon::Finite(a.min(b)),
        }
    }

    /// Whether `t` lies strictly inside the horizon.
    pub fn contains(self, t: f64) -> bool {
        match self {
            Horizon::Infinite => true,
            Horizon::Finite(h) => t < h,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Horizon::Finite(h) => Some(h),
            Horizon::Infinite => None,
        }
    }
}

pub type SourceFn = dyn Fn(f64) -> f64 + Send + Sync;
pub type FlowFn = dyn Fn(f64, f64) -> Result<f64, Error> + Send + Sync;
pub type HorizonFn = dyn Fn(f64) -> Horizon + Send + Sync;

/// A user-supplied family: s plus the matching flow map, primitive and
/// validity horizon. The handles must satisfy the same contracts as the
/// built-in families (dF/dt = E, F(0, .) = 0, dE/dt = s(E)).
pub struct CustomSource {
    pub source: Box<SourceFn>,
    pub flow: Box<FlowFn>,
    pub primitive: Box<FlowFn>,
    pub validity: Box<HorizonFn>,
}

impl fmt::Debug for CustomSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomSource")
    }
}

#[derive(Debug, Clone)]
pub enum SourceFamily {
    /// s = 0: the homogeneous Burgers equation.
    Zero,
    /// s = beta * q.
    Linear { beta: f64 },
    /// s = beta * q^2.
    Quadratic { beta: f64 },
    /// s = exp(beta * q).
    Exponential { beta: f64 },
    /// Caller-provided (s, E, F, validity) handles.
    Custom(Arc<CustomSource>),
}

impl SourceFamily {
    /// s(q).
    pub fn source_value(&self, q: f64) -> f64 {
        match self {
            SourceFamily::Zero => 0.0,
            SourceFamily::Linear { beta } => beta * q,
            SourceFamily::Quadratic { beta } => beta * q * q,
            SourceFamily::Exponential { beta } => (beta * q).exp(),
            SourceFamily::Custom(c) => (c.source)(q),
        }
    }

    /// The flow map E(t, h0) of dq/dt = s(q), q(0) = h0.
    ///
    /// Closed forms: h0 (Zero), h0 e^{beta t} (Linear),
    /// h0 / (1 - beta t h0) (Quadratic) and
    /// -ln(e^{-beta h0} - beta t) / beta (Exponential). For |beta| below
    /// [`BETA_LIMIT`] the beta -> 0 limits are used: h0, h0 and h0 + t.
    pub fn flow(&self, t: f64, h0: f64) -> Result<f64, Error> {
        match self {
            SourceFamily::Zero => Ok(h0),
            SourceFamily::Linear { beta } => {
                if beta.abs() < BETA_LIMIT {
                    Ok(h0)
                } else {
                    Ok(h0 * (beta * t).exp())
                }
            }
            SourceFamily::Quadratic { beta } => {
                if beta.abs() < BETA_LIMIT {
                    return Ok(h0);
                }
                let denom = 1.0 - beta * t * h0;
                if !above_margin(denom) {
                    return Err(Error::OutOfValidity { t, h0 });
                }
                Ok(h0 / denom)
            }
            SourceFamily::Exponential { beta } => {
                if beta.abs() < BETA_LIMIT {
                    return Ok(h0 + t);
                }
                let a = (-beta * h0).exp() - beta * t;
                if !above_margin(a) {
                    return Err(Error::OutOfValidity { t, h0 });
                }
                // Written as h0 - ln(1 - r)/beta with r = beta t e^{beta h0},
                // which stays accurate as beta -> 0; fall back to the direct
                // form when the rearrangement overflows.
                let r = beta * t * (beta * h0).exp();
                let e = h0 - (-r).ln_1p() / beta;
                if e.is_finite() {
                    Ok(e)
                } else {
                    Ok(-a.ln() / beta)
                }
            }
            SourceFamily::Custom(c) => (c.flow)(t, h0),
        }
    }

    /// F(t, h0): the time primitive of the flow map, normalized to F(0, .) = 0.
    ///
    /// Closed forms: t h0 (Zero), (e^{beta t} - 1) h0 / beta (Linear),
    /// -ln(1 - beta t h0) / beta (Quadratic) and
    /// [A ln A + beta t + beta h0 e^{-beta h0}] / beta^2 with
    /// A = e^{-beta h0} - beta t (Exponential). Limits for |beta| below
    /// [`BETA_LIMIT`]: t h0, t h0 and t h0 + t^2 / 2.
    pub fn flow_primitive(&self, t: f64, h0: f64) -> Result<f64, Error> {
        match self {
            SourceFamily::Zero => Ok(t * h0),
            SourceFamily::Linear { beta } => {
                if beta.abs() < BETA_LIMIT {
                    Ok(t * h0)
                } else {
                    Ok(h0 * (beta * t).exp_m1() / beta)
                }
            }
            SourceFamily::Quadratic { beta } => {
                if beta.abs() < BETA_LIMIT {
                    return Ok(t * h0);
                }
                let denom = 1.0 - beta * t * h0;
                if !above_margin(denom) {
                    return Err(Error::OutOfValidity { t, h0 });
                }
                Ok(-(-beta * t * h0).ln_1p() / beta)
            }
            SourceFamily::Exponential { beta } => {
                if beta.abs() < BETA_LIMIT {
                    return Ok(t * h0 + 0.5 * t * t);
                }
                let a = (-beta * h0).exp() - beta * t;
                if !above_margin(a) {
                    return Err(Error::OutOfValidity { t, h0 });
                }
                // The direct form cancels to O(beta^2) between its three
                // summands. Substituting A = e^{-beta h0}(1 - r) with
                // r = beta t e^{beta h0} gives the equivalent
                //   F = t h0 + e^{-beta h0} g(r) / beta^2,
                //   g(r) = (1 - r) ln(1 - r) + r,
                // where g is evaluated cancellation-free below.
                let r = beta * t * (beta * h0).exp();
                let f = t * h0 + (-beta * h0).exp() * xlnx_shift(r) / (beta * beta);
                if f.is_finite() {
                    Ok(f)
                } else {
                    Ok((a * a.ln() + beta * t + beta * h0 * (-beta * h0).exp()) / (beta * beta))
                }
            }
            SourceFamily::Custom(c) => (c.primitive)(t, h0),
        }
    }

    /// Largest time window [0, T) on which `flow`/`flow_primitive` accept
    /// this initial value. Finite only for Quadratic with beta*h0 > 0
    /// (T = 1/(beta h0)) and Exponential with beta > 0 (T = e^{-beta h0}/beta).
    pub fn validity_time(&self, h0: f64) -> Horizon {
        match self {
            SourceFamily::Zero | SourceFamily::Linear { .. } => Horizon::Infinite,
            SourceFamily::Quadratic { beta } => {
                if beta.abs() < BETA_LIMIT || beta * h0 <= 0.0 {
                    Horizon::Infinite
                } else {
                    Horizon::Finite(1.0 / (beta * h0))
                }
            }
            SourceFamily::Exponential { beta } => {
                if *beta < BETA_LIMIT {
                    Horizon::Infinite
                } else {
                    Horizon::Finite((-beta * h0).exp() / beta)
                }
            }
            SourceFamily::Custom(c) => (c.validity)(h0),
        }
    }

    /// G(q), a primitive of 1/s(q), where one exists in closed form:
    /// ln|q|/beta (Linear, on sign-definite q), -1/(beta q) (Quadratic),
    /// -e^{-beta q}/beta (Exponential). Satisfies G(E(t, h0)) - G(h0) = t
    /// inside the validity window. `None` for Zero (1/s is undefined),
    /// Custom, and the beta -> 0 limit branches.
    pub fn reciprocal_source_primitive(&self, q: f64) -> Option<f64> {
        match self {
            SourceFamily::Zero | SourceFamily::Custom(_) => None,
            SourceFamily::Linear { beta } => {
                (beta.abs() >= BETA_LIMIT).then(|| q.abs().ln() / beta)
            }
            SourceFamily::Quadratic { beta } => {
                (beta.abs() >= BETA_LIMIT).then(|| -1.0 / (beta * q))
            }
            SourceFamily::Exponential { beta } => {
                (beta.abs() >= BETA_LIMIT).then(|| -(-beta * q).exp() / beta)
            }
        }
    }
}

/// g(r) = (1 - r) ln(1 - r) + r, the convex function with g(0) = g'(0) = 0.
/// For small |r| the two terms cancel to O(r^2), so the series
/// sum_{k>=2} r^k / (k (k-1)) is used there.
fn xlnx_shift(r: f64) -> f64 {
    if r.abs() < 0.5 {
        let mut term = 0.5 * r * r;
        let mut acc = term;
        let mut k = 3.0;
        loop {
            term *= r * (k - 2.0) / k;
            if term.abs() <= 1e-18 * acc.abs() {
                break;
            }
            acc += term;
            k += 1.0;
            if k > 200.0 {
                break;
            }
        }
        acc
    } else {
        (1.0 - r) * (-r).ln_1p() + r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> SourceFamily {
        SourceFamily::Quadratic { beta: -2.0 }
    }

    #[test]
    fn source_values() {
        assert_eq!(SourceFamily::Zero.source_value(7.0), 0.0);
        assert_eq!(SourceFamily::Linear { beta: -2.0 }.source_value(3.0), -6.0);
        assert_eq!(quadratic().source_value(3.0), -18.0);
        assert_eq!(SourceFamily::Exponential { beta: -1.0 }.source_value(0.0), 1.0);
    }

    #[test]
    fn zero_flow_is_identity() {
        let f = SourceFamily::Zero;
        assert_eq!(f.flow(3.0, 1.25).unwrap(), 1.25);
        assert_eq!(f.flow_primitive(3.0, 1.25).unwrap(), 3.75);
        assert_eq!(f.validity_time(-4.0), Horizon::Infinite);
    }

    #[test]
    fn linear_flow_decays_exponentially() {
        let f = SourceFamily::Linear { beta: -2.0 };
        let e = f.flow(0.2, 2.0).unwrap();
        assert!((e - 2.0 * (-0.4f64).exp()).abs() < 1e-15, "e = {e}");
        // frozen: integral of 2 e^{-2 tau} over [0, 0.2]
        let fp = f.flow_primitive(0.2, 2.0).unwrap();
        assert!((fp - 0.3296799539643607).abs() < 1e-15, "F = {fp}");
    }

    #[test]
    fn quadratic_flow_matches_closed_form() {
        // frozen from the RK4 cross-check: 1/1.3
        let e = quadratic().flow(0.15, 1.0).unwrap();
        assert!((e - 0.7692307692307692).abs() < 1e-15, "e = {e}");
        // frozen from quadrature of E: ln(1.3)/2
        let fp = quadratic().flow_primitive(0.15, 1.0).unwrap();
        assert!((fp - 0.13118213223374553).abs() < 1e-15, "F = {fp}");
    }

    #[test]
    fn exponential_flow_matches_closed_form() {
        let f = SourceFamily::Exponential { beta: -1.0 };
        // frozen from the RK4 cross-check: ln(e^2 + 0.26)
        let e = f.flow(0.26, 2.0).unwrap();
        assert!((e - 2.034_582_254_465_096).abs() < 1e-14, "e = {e}");
        assert_eq!(f.flow_primitive(0.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn exponential_primitive_agrees_with_direct_form() {
        // moderate beta: the rearranged and the textbook expressions must agree
        let beta = -1.0f64;
        for &(t, h0) in &[(0.26, 1.5), (0.1, -0.75), (2.0, 0.3)] {
            let f = SourceFamily::Exponential { beta }
                .flow_primitive(t, h0)
                .unwrap();
            let a = (-beta * h0).exp() - beta * t;
            let direct = (a * a.ln() + beta * t + beta * h0 * (-beta * h0).exp()) / (beta * beta);
            assert!((f - direct).abs() < 1e-12 * direct.abs().max(1.0), "{f} vs {direct}");
        }
    }

    #[test]
    fn validity_windows() {
        let q = SourceFamily::Quadratic { beta: 2.0 };
        assert_eq!(q.validity_time(1.0), Horizon::Finite(0.5));
        assert_eq!(quadratic().validity_time(1.0), Horizon::Infinite);
        assert_eq!(q.validity_time(-1.0), Horizon::Infinite);

        let e = SourceFamily::Exponential { beta: 1.0 };
        assert_eq!(e.validity_time(0.0), Horizon::Finite(1.0));
        assert_eq!(
            SourceFamily::Exponential { beta: -1.0 }.validity_time(5.0),
            Horizon::Infinite
        );
    }

    #[test]
    fn flow_refuses_arguments_past_the_horizon() {
        let q = SourceFamily::Quadratic { beta: 2.0 };
        assert_eq!(
            q.flow(0.6, 1.0),
            Err(Error::OutOfValidity { t: 0.6, h0: 1.0 })
        );
        assert!(q.flow_primitive(0.5, 1.0).is_err());
        assert!(q.flow(0.49, 1.0).is_ok());

        let e = SourceFamily::Exponential { beta: 1.0 };
        assert!(e.flow(2.0, 1.0).is_err());
        assert!(e.flow(0.3, 0.0).is_ok());
    }

    #[test]
    fn small_beta_branches_match_the_limits() {
        let t = 0.7;
        let h0 = -1.3;
        let lin = SourceFamily::Linear { beta: 1e-10 };
        assert_eq!(lin.flow(t, h0).unwrap(), h0);
        assert_eq!(lin.flow_primitive(t, h0).unwrap(), t * h0);

        let quad = SourceFamily::Quadratic { beta: -1e-12 };
        assert_eq!(quad.flow(t, h0).unwrap(), h0);
        assert_eq!(quad.validity_time(h0), Horizon::Infinite);

        let exp = SourceFamily::Exponential { beta: 1e-10 };
        assert_eq!(exp.flow(t, h0).unwrap(), h0 + t);
        assert_eq!(exp.flow_primitive(t, h0).unwrap(), t * h0 + 0.5 * t * t);
        assert_eq!(exp.validity_time(h0), Horizon::Infinite);
    }

    #[test]
    fn reciprocal_primitive_recovers_elapsed_time() {
        for family in [
            SourceFamily::Linear { beta: -2.0 },
            quadratic(),
            SourceFamily::Exponential { beta: -1.0 },
        ] {
            let (t, h0) = (0.37, 1.7);
            let e = family.flow(t, h0).unwrap();
            let g = family.reciprocal_source_primitive(e).unwrap()
                - family.reciprocal_source_primitive(h0).unwrap();
            assert!((g - t).abs() < 1e-12, "{family:?}: {g}");
        }
        assert!(SourceFamily::Zero.reciprocal_source_primitive(1.0).is_none());
    }

    #[test]
    fn xlnx_shift_series_joins_the_direct_branch() {
        for &r in &[0.4999, 0.5001, -0.4999, -0.5001] {
            let series = xlnx_shift(r);
            let direct = (1.0 - r) * (1.0 - r).ln() + r;
            assert!((series - direct).abs() < 1e-15, "r = {r}");
        }
        assert_eq!(xlnx_shift(0.0), 0.0);
    }

    #[test]
    fn custom_family_delegates_to_the_handles() {
        let custom = SourceFamily::Custom(Arc::new(CustomSource {
            source: Box::new(|q| -2.0 * q),
            flow: Box::new(|t, h0| Ok(h0 * (-2.0 * t).exp())),
            primitive: Box::new(|t, h0| Ok(h0 * (-2.0 * t).exp_m1() / -2.0)),
            validity: Box::new(|_| Horizon::Infinite),
        }));
        let lin = SourceFamily::Linear { beta: -2.0 };
        assert_eq!(custom.source_value(3.0), lin.source_value(3.0));
        assert_eq!(custom.flow(0.2, 2.0).unwrap(), lin.flow(0.2, 2.0).unwrap());
        assert_eq!(
            custom.flow_primitive(0.2, 2.0).unwrap(),
            lin.flow_primitive(0.2, 2.0).unwrap()
        );
    }

    #[test]
    fn horizon_ordering_helpers() {
        assert_eq!(
            Horizon::Finite(1.0).min(Horizon::Finite(0.5)),
            Horizon::Finite(0.5)
        );
        assert_eq!(Horizon::Infinite.min(Horizon::Finite(2.0)), Horizon::Finite(2.0));
        assert!(Horizon::Infinite.contains(1e300));
        assert!(Horizon::Finite(1.0).contains(0.999));
        assert!(!Horizon::Finite(1.0).contains(1.0));
        assert_eq!(Horizon::Finite(1.0).finite(), Some(1.0));
        assert_eq!(Horizon::Infinite.finite(), None);
    }
}
