//! Numerical tolerances used across the crate.
//!
//! Every residual threshold asserted by a contract lives here so that the
//! library, the CLI, and the test suites agree on one set of numbers.

/// Relative off-diagonal Frobenius mass at which Jacobi sweeps stop.
pub const JACOBI_OFF_REL: f64 = 1e-14;

/// Maximum number of Jacobi sweeps before the iteration is abandoned.
pub const JACOBI_MAX_SWEEPS: usize = 50;

/// Allowed asymmetry `max |a_ij - a_ji|` relative to the matrix scale.
pub const SYMMETRY_ABS: f64 = 1e-12;

/// Eigenpair residual `max ||A xi - lambda xi||_inf` relative to `||A||_inf`.
pub const EIG_RESIDUAL_REL: f64 = 1e-10;

/// Kernel eigenvalues below `NULL_CLAMP_REL * max(1, lambda_max)` are
/// treated as exact zeros and removed from the effective span.
pub const NULL_CLAMP_REL: f64 = 1e-10;

/// Positive-semidefiniteness slack: `min lambda >= -PSD_REL * max(1, lambda_max)`.
pub const PSD_REL: f64 = 1e-10;

/// Per-vertex residual allowed after a dipole or Poisson solve.
pub const DIPOLE_RESIDUAL: f64 = 1e-12;

/// Zero-sum slack for solvable charge distributions.
pub const CHARGE_ZERO_SUM: f64 = 1e-12;

/// Agreement required between the charge-decomposition solve and the
/// direct grounded solve.
pub const POISSON_CROSS_CHECK: f64 = 1e-10;

/// Entrywise residual of the rank-one identity for the truncated Laplacian.
pub const RANK_ONE_RESIDUAL: f64 = 1e-10;

/// Entrywise error allowed when a factorization reproduces its Gram matrix.
pub const FACTORIZATION_ROUNDTRIP: f64 = 1e-9;

/// Slack used when asserting eigenvalue-extreme monotonicity over nested
/// sections.
pub const INTERLACING_SLACK: f64 = 1e-10;
