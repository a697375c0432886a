//! The quantum collision operator in two velocity dimensions, evaluated
//! spectrally.
//!
//! For Maxwellian molecules (angle-independent kernel) the operator splits as
//!
//! ```text
//! Q_q(f) = Q_c(f) + sign·θ0·(Q_1 + Q_2 - Q_3 - Q_4)(f),
//! ```
//!
//! where `Q_c` is the classical quadratic part, the four cubic terms carry the
//! quantum correction, and `sign` is `+1` for Bose statistics (stimulated
//! scattering), `-1` for Fermi (Pauli blocking). All five terms are evaluated
//! in Fourier space through a factorized angular decomposition of the
//! collision kernel ([`tables::KernelTables`]) and zero-padded convolutions
//! ([`operator`]). A direct quadrature oracle ([`oracle`]) provides an
//! independent check at small grid sizes.

pub mod operator;
pub mod oracle;
pub mod tables;

pub use operator::CollisionOperator;
pub use tables::KernelTables;

use crate::error::SolverError;
use crate::quantum::Statistics;

/// Statistics selector for collision evaluation, including the classical
/// (quadratic-only) gas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionStatistics {
    /// Classical gas: the cubic terms are dropped entirely.
    Classical,
    /// Bose–Einstein: cubic terms enter with `+θ0`.
    Bose,
    /// Fermi–Dirac: cubic terms enter with `-θ0`.
    Fermi,
}

impl CollisionStatistics {
    /// Sign of the cubic correction, 0 for the classical gas.
    #[inline]
    pub fn cubic_sign(self) -> f64 {
        match self {
            CollisionStatistics::Classical => 0.0,
            CollisionStatistics::Bose => 1.0,
            CollisionStatistics::Fermi => -1.0,
        }
    }

    /// The equilibrium-statistics counterpart, if quantum.
    pub fn statistics(self) -> Option<Statistics> {
        match self {
            CollisionStatistics::Classical => None,
            CollisionStatistics::Bose => Some(Statistics::Bose),
            CollisionStatistics::Fermi => Some(Statistics::Fermi),
        }
    }
}

impl From<Statistics> for CollisionStatistics {
    fn from(s: Statistics) -> Self {
        match s {
            Statistics::Bose => CollisionStatistics::Bose,
            Statistics::Fermi => CollisionStatistics::Fermi,
        }
    }
}

/// Parameters of the collision model: statistics, occupancy scale, and the
/// overall kernel strength.
#[derive(Debug, Clone, Copy)]
pub struct CollisionConfig {
    /// Which gas is being simulated.
    pub statistics: CollisionStatistics,
    /// Quantum occupancy scale `θ0` (ignored for [`CollisionStatistics::Classical`]).
    pub theta0: f64,
    /// Constant kernel strength `C₀` multiplying the whole operator
    /// (Maxwellian molecules: the kernel is velocity-independent).
    pub kernel_constant: f64,
}

/// Default kernel strength: 1, i.e. the bare Carleman-form operator
/// `∫∫ δ(x·y)[…] dx dy` with no extra prefactor. A unit-density gas then
/// relaxes on an O(0.1) timescale, putting equilibration of the standard
/// relaxation runs comfortably inside their `t_end = 0.5` horizon.
pub const DEFAULT_KERNEL_CONSTANT: f64 = 1.0;

impl CollisionConfig {
    /// Classical gas with the default kernel strength.
    pub fn classical() -> Self {
        CollisionConfig {
            statistics: CollisionStatistics::Classical,
            theta0: 0.0,
            kernel_constant: DEFAULT_KERNEL_CONSTANT,
        }
    }

    /// Quantum gas with the default kernel strength.
    pub fn quantum(statistics: Statistics, theta0: f64) -> Result<Self, SolverError> {
        if !(theta0 > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "quantum collision config requires theta0 > 0, got {theta0}"
            )));
        }
        Ok(CollisionConfig {
            statistics: statistics.into(),
            theta0,
            kernel_constant: DEFAULT_KERNEL_CONSTANT,
        })
    }

    /// Same configuration with a different kernel strength.
    pub fn with_kernel_constant(mut self, c: f64) -> Self {
        self.kernel_constant = c;
        self
    }
}
