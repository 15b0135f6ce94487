//! Exact characteristic-method solutions of the Burgers balance law
//!
//! ```text
//! dq/dt + d(q^2/2)/dx = s(q),    q(x, 0) = h0(x)
//! ```
//!
//! for source terms whose reciprocal has a closed-form primitive (zero,
//! linear, quadratic, exponential — plus a custom extension point), used as
//! reference oracles for assessing a finite-volume scheme.
//!
//! The construction: along the characteristic through foot point (y, 0) the
//! state obeys dq/dt = s(q) with exact flow map E(t, h0(y)), and the
//! characteristic position is x = y + F(t, h0(y)) with F the time primitive
//! of E. [`CharacteristicSolution`] inverts that relation by bisection and
//! returns q(x, t) = E(t, h0(y)).
//!
//! Modules:
//! - [`source`]: the families with their flow maps, primitives and validity
//!   horizons;
//! - [`initial`]: continuous initial profiles;
//! - [`solver`]: the foot-point inversion, grid sweeps, and the classical
//!   horizon estimate;
//! - [`oracle`]: brute-force RK4 cross-check integrators;
//! - [`fv`]: a first-order Godunov scheme assessed against the exact
//!   solution;
//! - [`verify`]: the deterministic property suite behind `charburg verify`.
//!
//! With the default `parallel` feature, grid sweeps and convergence studies
//! fan out over rayon; disable default features for a fully sequential
//! build with identical results.

pub mod error;
pub mod fv;
pub mod initial;
pub mod oracle;
pub mod solver;
pub mod source;
pub mod verify;

pub use error::Error;
pub use initial::{InitialCondition, Profile};
pub use solver::{CharacteristicSolution, RootConfig, SolutionSample};
pub use source::{Horizon, SourceFamily};

/// Cap the global rayon pool at `threads` workers. Must run before any
/// parallel work; returns false if a pool already exists (the cap is then
/// ignored). No-op without the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn set_thread_cap(threads: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .is_ok()
}

#[cfg(not(feature = "parallel"))]
pub fn set_thread_cap(_threads: usize) -> bool {
    false
}
