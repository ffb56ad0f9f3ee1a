//! Collocation solver for low-lying spectra of coupled anharmonic
//! oscillators.
//!
//! The basis is a set of localized functions built from particle-in-a-box
//! modes on (-L, L); collocation at the grid nodes turns the Schrodinger
//! operator into a symmetric matrix with Kronecker-sum kinetic structure and
//! a diagonal potential. The free parameters (grid scale, per-axis scales,
//! rotation angles) are fixed variationally by minimizing the matrix trace,
//! and the low end of the spectrum is extracted with a Lanczos iteration
//! checked against dense oracles.

pub mod eigen;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod indexing;
pub mod linalg;
pub mod pms;
pub mod potential;
pub mod reference;
pub mod transform;

pub use eigen::{dense_eigen, lowest_eigenpairs, EigenRequest, EigenResult};
pub use error::{Result, SolverError};
pub use grid::{build_diff_matrices, interpolate, lsf_eval, DiffMatrices, GridSpec};
pub use hamiltonian::{trace_terms, HamiltonianOperator, TraceTerms};
pub use indexing::{decode, encode, node_offset, offset_to_label, FlatIndex, MultiIndex};
pub use pms::{
    optimize_full, optimize_scale, strategy_by_name, strategy_names, OptimizationStrategy,
    StrategyKind, TraceMinimizer,
};
pub use potential::{
    builtin_model, make_coupled_harmonic, make_pe_radial_effective, make_pullen_edmonds,
    make_quartic_pair, make_sextic, make_witwit_quartic, parse_potential_text, Monomial,
    PolynomialPotential, BUILTIN_MODELS,
};
pub use reference::{
    exact_harmonic_levels, reference_values, HarmonicSpectrum, ReferenceRow, REFERENCE_TABLE,
};
pub use transform::{rotation_matrix, transformed_problem, RotationMatrix, TransformParams};
