//! Exact linear algebra over `ℚ(y)` for the `sl_m` Yang-Baxter operators
//! `R_m`, the kernels of `σ_n`, and one-term Yang-Baxter homology.

pub mod cli;
pub mod homology;
pub mod kernel;
pub mod scalar;
pub mod tensor;
pub mod ybop;
