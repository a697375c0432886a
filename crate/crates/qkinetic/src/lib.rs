//! Solver library for the quantum (Uehling–Uhlenbeck) Boltzmann equation in
//! 1-D space × 2-D velocity.
//!
//! The collision operator is evaluated by a Fourier-spectral method on a
//! periodized velocity box: the quadratic (classical) part and the four cubic
//! quantum terms are all reduced to zero-padded fast convolutions of
//! kernel-weighted mode sequences. Time integration offers an explicit scheme
//! for kinetic regimes and BGK-penalized asymptotic-preserving schemes that
//! remain stable for arbitrarily small Knudsen number without per-step
//! fugacity inversion. A kinetic flux vector splitting (KFVS) solver for the
//! quantum Euler system serves as the hydrodynamic-regime reference.
//!
//! Modules:
//! - [`grid`]: uniform periodic velocity mesh.
//! - [`spectral`]: forward/inverse transforms and padded-convolution helpers.
//! - [`collision`]: kernel tables, the spectral collision operator, and a
//!   direct-quadrature oracle used by the test suite.
//! - [`quantum`]: Bose/Fermi special functions, quantum Maxwellians, and the
//!   (ρ,e) ↔ (z,T) constitutive inversion.
//! - [`moments`]: macroscopic moments, stress/heat flux, entropy.
//! - [`dynamics`]: finite-volume transport and the time-stepping schemes.
//! - [`euler`]: KFVS reference solver for the quantum Euler equations.
//! - [`fields`]: parametric distribution families used by tests and drivers.
//! - [`harness`]: experiment configuration, scenario drivers, CSV/JSON output.

pub mod collision;
pub mod dynamics;
pub mod error;
pub mod euler;
pub mod fields;
pub mod grid;
pub mod harness;
pub mod moments;
pub mod quantum;
pub mod spectral;

pub use error::SolverError;
