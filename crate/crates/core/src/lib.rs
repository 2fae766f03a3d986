//! # lapgram
//!
//! Spectral analysis of graph Laplacians on weighted graphs, carried out in
//! the energy Hilbert space `H_E` (functions on vertices modulo constants,
//! normed by the weighted sum of squared edge differences).
//!
//! The toolkit is organized around a small chain of objects:
//!
//! 1. a finite [`WeightedGraph`] with a designated base point,
//! 2. dipole potentials `v_x` solving `Δv = δ_x − δ_base` ([`dipole`]),
//! 3. the positive-semidefinite Gram kernel `M(x,y) = ⟨v_x, v_y⟩_E`
//!    ([`kernel`]),
//! 4. eigendecompositions of finite kernel sections ([`eigen`]),
//! 5. the truncated Laplacian `P_F Δ P_F`, which is a rank-one perturbation
//!    of the diagonal of inverse kernel eigenvalues ([`truncation`]),
//! 6. Green's-function residual diagnostics ([`greens`]).
//!
//! Two built-in graph families (the integer segment and the binary tree,
//! both with unit conductances) come with exact integer closed forms for
//! dipoles and kernels, used throughout as oracles for the floating-point
//! paths. Spectral-gap sweeps over exhaustion sequences provide finite
//! evidence for boundedness and invertibility of the Laplacian on `H_E`.

pub mod dipole;
pub mod eigen;
pub mod energy;
pub mod error;
pub mod family;
pub mod graph;
pub mod greens;
pub mod kernel;
pub mod tol;
pub mod truncation;

pub use dipole::{dipole_closed_form, solve_dipole, solve_poisson, ChargeDistribution};
pub use eigen::{eig_residual, symmetric_eig, SpectralDecomposition};
pub use energy::{energy_inner, EnergyVector};
pub use error::{Error, Result};
pub use family::{make_family, path_to_root, ExhaustionRule, Family};
pub use graph::{load_graph, EdgePath, GraphBuilder, LoadedGraph, VertexId, WeightedGraph};
pub use greens::{greens_column, greens_laplacian_check, GreensReport};
pub use kernel::{
    gram_closed_form, gram_from_energy, gram_factorization, kernel_vector_inner, psd_check,
    szego_gram, tree_level_recursion, KernelMatrix, KernelVector,
};
pub use truncation::{
    build_truncation, build_truncation_from_gram, diagonal_limit_sweep, gap_sweep,
    symmetry_criterion, symmetry_criterion_kernel, SweepReport, SweepRow, TruncationData,
};
