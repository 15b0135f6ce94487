//! Fixed-step RK4 reference integrators.
//!
//! These deliberately ignore the closed-form flow maps: they march the
//! equivalent ODE dq/dt = s(q) (and the characteristic system dx/dt = q)
//! numerically, so the closed forms can be validated against an independent
//! path. Global accuracy is O(step^4).

use crate::error::Error;
use crate::initial::InitialCondition;
use crate::source::SourceFamily;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Nominal step size; the actual step divides `t` evenly and is never
    /// larger than this.
    pub step: f64,
    /// Integration aborts with `BlowUpDetected` once |q| exceeds this.
    pub blow_up_limit: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { step: 1e-5, blow_up_limit: 1e12 }
    }
}

impl OracleConfig {
    pub fn with_step(step: f64) -> Self {
        OracleConfig { step, ..Self::default() }
    }

    fn steps_for(&self, t: f64) -> usize {
        assert!(self.step > 0.0, "oracle step must be positive");
        ((t / self.step).ceil() as usize).max(1)
    }
}

/// One classical RK4 step of size `h` for dq/dt = f(q).
fn rk4_step(f: impl Fn(f64) -> f64, q: f64, h: f64) -> f64 {
    let k1 = f(q);
    let k2 = f(q + 0.5 * h * k1);
    let k3 = f(q + 0.5 * h * k2);
    let k4 = f(q + h * k3);
    q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrate dq/dt = s(q) from q(0) = h0 up to time t.
pub fn integrate_equivalent(
    family: &SourceFamily,
    h0: f64,
    t: f64,
    cfg: &OracleConfig,
) -> Result<f64, Error> {
    assert!(t >= 0.0, "oracle integrates forward in time only");
    if t == 0.0 {
        return Ok(h0);
    }
    let n = cfg.steps_for(t);
    let h = t / n as f64;
    let mut q = h0;
    for i in 0..n {
        q = rk4_step(|v| family.source_value(v), q, h);
        if !q.is_finite() || q.abs() > cfg.blow_up_limit {
            return Err(Error::BlowUpDetected {
                t: (i + 1) as f64 * h,
                limit: cfg.blow_up_limit,
            });
        }
    }
    Ok(q)
}

/// Integrate the characteristic system dx/dt = q, dq/dt = s(q) from the
/// foot point (y, h0(y)) up to time t; returns the arrival (x, q).
///
/// The q-component uses exactly the same stage values as
/// [`integrate_equivalent`], so both agree bit-for-bit at equal steps.
pub fn integrate_characteristic(
    family: &SourceFamily,
    ic: &InitialCondition,
    y: f64,
    t: f64,
    cfg: &OracleConfig,
) -> Result<(f64, f64), Error> {
    assert!(t >= 0.0, "oracle integrates forward in time only");
    let mut q = ic.evaluate(y);
    let mut x = y;
    if t == 0.0 {
        return Ok((x, q));
    }
    let n = cfg.steps_for(t);
    let h = t / n as f64;
    for i in 0..n {
        let k1 = family.source_value(q);
        let q2 = q + 0.5 * h * k1;
        let k2 = family.source_value(q2);
        let q3 = q + 0.5 * h * k2;
        let k3 = family.source_value(q3);
        let q4 = q + h * k3;
        let k4 = family.source_value(q4);
        // dx/dt = q evaluated at the same stages
        x += h / 6.0 * (q + 2.0 * q2 + 2.0 * q3 + q4);
        q += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !q.is_finite() || q.abs() > cfg.blow_up_limit {
            return Err(Error::BlowUpDetected {
                t: (i + 1) as f64 * h,
                limit: cfg.blow_up_limit,
            });
        }
    }
    Ok((x, q))
}
