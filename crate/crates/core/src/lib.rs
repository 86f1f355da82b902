//! One-dimensional quantum walks on a finite lattice window.
//!
//! Three models share the same state and measurement types:
//!
//! * [`dtqw`]: the discrete-time walk, an SU(2) coin followed by a
//!   coin-conditioned shift, with a position-space and a momentum-space shift
//!   backend.
//! * [`ctqw`]: the continuous-time walk `exp(iHt)` under the lattice Hamiltonian,
//!   evaluated exactly in a diagonal basis.
//! * [`generic`]: the coin-embedded shift walk, where an external two-level
//!   resource decides the shift direction and the coin toss disappears.
//!
//! [`reduction`] checks how the generic walk collapses onto the other two, and
//! [`analysis`] fits spreading exponents.
//!
//! ```
//! use qwalk::{dtqw, state, Lattice};
//! use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
//!
//! let lattice = Lattice::guarded(101);
//! let init = state::initial_particle_state(FRAC_PI_4, FRAC_PI_2, lattice);
//! let out = dtqw::dtqw_evolve(&init, dtqw::CoinParams::hadamard(), 100, dtqw::ShiftBackend::Permutation)?;
//! let dist = state::measure_position(&out);
//! assert!(dist.mean().abs() < 1e-10);
//! assert!(dist.variance() > 2000.0);
//! # Ok::<(), qwalk::WalkError>(())
//! ```

pub mod analysis;
pub mod ctqw;
pub mod dtqw;
mod error;
pub mod generic;
pub mod lattice;
pub mod operator;
pub mod reduction;
pub mod spectral;
pub mod state;

pub use error::{Result, WalkError};
pub use lattice::{Boundary, Lattice};
pub use state::{Distribution, WalkState};

pub use num_complex::Complex64;

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/states.md")]
    pub struct States;
    #[doc = include_str!("../../../book/src/discrete-time.md")]
    pub struct DiscreteTime;
    #[doc = include_str!("../../../book/src/continuous-time.md")]
    pub struct ContinuousTime;
    #[doc = include_str!("../../../book/src/generic-walk.md")]
    pub struct GenericWalk;
    #[doc = include_str!("../../../book/src/reductions.md")]
    pub struct Reductions;
    #[doc = include_str!("../../../book/src/analysis.md")]
    pub struct Analysis;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
