//! Tensor-power bookkeeping and sparse exact linear algebra over `Q(y)`.

mod elim;
mod index;
mod linmap;
mod rank;
mod subspace;

pub use elim::{kernel_vectors, primes, rank_both, rank_eval, rank_eval_auto, rank_exact, EvalRank};
pub use index::{decode, encode, tensor_dim, TensorIndex};
pub use linmap::{LinMap, MatrixJson, SparseVec};
pub use rank::{RankMismatch, RankMode, RankStats, Ranker};
pub use subspace::{EchelonBuilder, Subspace, SubspaceJson};

use thiserror::Error;

use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("letter {letter} outside 1..={m}")]
    LetterOutOfRange { letter: usize, m: usize },
    #[error("too few pole-free sample points: need {needed}, had {valid}; resample")]
    TooFewPoints { needed: usize, valid: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
