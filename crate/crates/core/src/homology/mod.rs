//! Coefficient modules, the chain complex `M ⊗ V^{⊗n}` and its homology.

mod betti;
mod complex;
mod module;
mod structure;

pub use betti::{
    betti_check, betti_formula, betti_from_ranks, r_ranks, r_ranks_stacked, stacked_presentation, BettiReport,
};
pub use complex::{
    boundary, chain_slice, homology_dims, Boundary, ChainComplex, ChainSlice, HomologyRecord, HomologyReport,
};
pub use module::{
    check_wall, require_valid, run_wall_trials, validate_module, Entry, ModuleJson, VModuleSpec, WallReport,
    WallTrial, DEFAULT_TRUNCATION,
};
pub use structure::{
    koszul_check, verify_complex_splitting, DeltaExactness, KoszulReport, KoszulSquare, SplittingDegree,
    SplittingReport,
};

use thiserror::Error;

use crate::kernel::KernelError;
use crate::scalar::ScalarError;
use crate::tensor::TensorError;
use crate::ybop::YbError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid module JSON: {0}")]
    Json(String),
    #[error("wall condition fails: A_{i} and A_{j} do not commute")]
    WallCondition { i: usize, j: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Yb(#[from] YbError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub(crate) fn binom_usize(n: usize, k: usize) -> usize {
    crate::kernel::binom(n, k) as usize
}

/// Strictly increasing `k`-subsets of `0..m`, lexicographic.
pub(crate) fn increasing_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            cur.push(x);
            rec(x + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}
