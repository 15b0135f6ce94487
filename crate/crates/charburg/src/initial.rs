//! Initial-condition profiles h0(x).
//!
//! A profile lives on a bounded domain [x_lo, x_hi] and is extended by its
//! boundary values outside, so h0 is defined (and continuous) on all of R.
//! That matters because foot-point searches routinely probe outside the
//! domain of interest.

/// The shape of h0 on its domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// slope * x + intercept.
    Affine { slope: f64, intercept: f64 },
    /// Linear interpolation through `(x, value)` nodes with strictly
    /// increasing x; constant beyond the first/last node.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
    /// amplitude * sin(frequency * x).
    Sine { amplitude: f64, frequency: f64 },
    /// A smooth step blending `lower` and `upper` around `center`:
    /// lower*(1-w)/2 + upper*(1+w)/2 with
    /// w(x) = (center - x) / sqrt((center - x)^2 + epsilon).
    /// The value tends to `upper` left of the center and to `lower` right
    /// of it, over a transition of width ~sqrt(epsilon).
    SmoothedStep {
        lower: f64,
        upper: f64,
        center: f64,
        epsilon: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialCondition {
    pub profile: Profile,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl InitialCondition {
    /// Profile on the default domain [0, 1].
    pub fn new(profile: Profile) -> Self {
        Self::with_domain(profile, 0.0, 1.0)
    }

    pub fn with_domain(profile: Profile, x_lo: f64, x_hi: f64) -> Self {
        assert!(
            x_lo < x_hi,
            "initial-condition domain must be a proper interval, got [{x_lo}, {x_hi}]"
        );
        match &profile {
            Profile::PiecewiseLinear { breakpoints } => {
                assert!(!breakpoints.is_empty(), "need at least one breakpoint");
                assert!(
                    breakpoints.windows(2).all(|w| w[0].0 < w[1].0),
                    "breakpoints must be strictly increasing in x"
                );
            }
            Profile::SmoothedStep { epsilon, .. } => {
                assert!(*epsilon > 0.0, "smoothing width epsilon must be positive");
            }
            _ => {}
        }
        Self { profile, x_lo, x_hi }
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        Self::new(Profile::Affine { slope, intercept })
    }

    pub fn sine(amplitude: f64, frequency: f64) -> Self {
        Self::new(Profile::Sine { amplitude, frequency })
    }

    pub fn smoothed_step(lower: f64, upper: f64, center: f64, epsilon: f64) -> Self {
        Self::new(Profile::SmoothedStep { lower, upper, center, epsilon })
    }

    /// The trapezoidal pulse on [0, 1]: 2 up to x = 0.1, ramp to 3 at 0.2,
    /// plateau to 0.4, ramp back to 2 at 0.6, then 2.
    pub fn trapezoid() -> Self {
        Self::new(Profile::PiecewiseLinear {
            breakpoints: vec![(0.1, 2.0), (0.2, 3.0), (0.4, 3.0), (0.6, 2.0)],
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x_lo, self.x_hi)
    }

    /// h0 at `x`, with constant extension outside [x_lo, x_hi].
    pub fn evaluate(&self, x: f64) -> f64 {
        let x = x.clamp(self.x_lo, self.x_hi);
        match &self.profile {
            Profile::Affine { slope, intercept } => slope * x + intercept,
            Profile::PiecewiseLinear { breakpoints } => {
                let first = breakpoints[0];
                let last = breakpoints[breakpoints.len() - 1];
                if x <= first.0 {
                    return first.1;
                }
                if x >= last.0 {
                    return last.1;
                }
                // index of the first node to the right of x
                let i = breakpoints.partition_point(|&(bx, _)| bx < x);
                let (x0, v0) = breakpoints[i - 1];
                let (x1, v1) = breakpoints[i];
                v0 + (v1 - v0) * (x - x0) / (x1 - x0)
            }
            Profile::Sine { amplitude, frequency } => amplitude * (frequency * x).sin(),
            Profile::SmoothedStep { lower, upper, center, epsilon } => {
                let c = center - x;
                let w = c / (c * c + epsilon).sqrt();
                0.5 * (lower * (1.0 - w) + upper * (1.0 + w))
            }
        }
    }
}
