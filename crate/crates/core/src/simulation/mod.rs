//! Monte Carlo side: reproducible permutation sampling, matrix-free operators
//! on the complement of the all-ones vector, residual-certified extreme
//! eigenvalues, and the tail/staircase/weak-convergence experiments.

pub mod experiments;
pub mod lanczos;
pub mod operator;
pub mod rng;

pub use experiments::{
    rho_m, staircase_experiment, tail_experiment, weak_convergence_probe, StaircaseExperiment,
    StaircaseRow, TailExperiment, TailRow, WeakConvergenceReport, WeakConvergenceRow,
};
pub use lanczos::{extreme_eigs, jacobi_eigenvalues};
pub use operator::{PermTuple, SparsePermOperator, SpectralReport};
pub use rng::stream_rng;
