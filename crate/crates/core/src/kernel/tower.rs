use std::sync::Arc;

use super::{binom, KernelError};
use crate::tensor::{EchelonBuilder, SparseVec, Subspace};
use crate::ybop::YBData;

/// One sealed degree of the tower.
#[derive(Clone, Debug)]
pub struct TowerDegree {
    pub n: usize,
    pub kernel: Arc<Subspace>,
    /// The chosen complement of the decomposable part inside `ker σ_n`.
    pub tilde: Subspace,
    /// Dimension of `Σ_k ker σ_{n-k} ⊗ tilde(k)` over `2 ≤ k < n`.
    pub decomposable_dim: usize,
    /// The spanning products of the decomposable part are independent.
    pub products_independent: bool,
}

impl TowerDegree {
    pub fn m_dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn b(&self) -> usize {
        self.tilde.dim()
    }
}

/// `ker σ_n` for `n = 0..=n_max` with generator complements `tilde(n)`.
#[derive(Clone, Debug)]
pub struct KernelTower {
    m: usize,
    degrees: Vec<TowerDegree>,
}

/// Products `x ⊗ t` with `x ∈ ker σ_{n-k}` and `t ∈ tilde(k)`, `2 ≤ k ≤ k_max`.
fn decomposable_products(degrees: &[TowerDegree], n: usize, k_max: usize) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for k in 2..=k_max.min(n) {
        let (left, right) = (&degrees[n - k], &degrees[k]);
        for x in left.kernel.basis() {
            for t in right.tilde.basis() {
                out.push(x.tensor(t));
            }
        }
    }
    out
}

impl KernelTower {
    /// Builds degrees `0..=n_max` in order; degree `n` depends on all lower
    /// tilde complements.
    pub fn build(yb: &YBData, n_max: usize) -> Result<Self, KernelError> {
        let mut tower = KernelTower { m: yb.m(), degrees: Vec::with_capacity(n_max + 1) };
        for n in 0..=n_max {
            tower.extend(yb, n)?;
        }
        Ok(tower)
    }

    fn extend(&mut self, yb: &YBData, n: usize) -> Result<(), KernelError> {
        let kernel = yb.kernel_sigma(n)?;
        let ambient = yb.dim(n);
        if n < 2 {
            self.degrees.push(TowerDegree {
                n,
                kernel,
                tilde: Subspace::zero(ambient),
                decomposable_dim: 0,
                products_independent: true,
            });
            return Ok(());
        }
        let products = decomposable_products(&self.degrees, n, n - 1);
        let mut builder = EchelonBuilder::new(ambient);
        for p in &products {
            builder.insert(p);
        }
        let decomposable_dim = builder.dim();
        let mut chosen = Vec::new();
        for v in kernel.basis() {
            if builder.insert(v) {
                chosen.push(v.clone());
            }
        }
        let tilde = Subspace::span(ambient, &chosen)?;
        self.degrees.push(TowerDegree {
            n,
            kernel,
            tilde,
            decomposable_dim,
            products_independent: decomposable_dim == products.len(),
        });
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_max(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degrees(&self) -> &[TowerDegree] {
        &self.degrees
    }

    pub fn degree(&self, n: usize) -> Result<&TowerDegree, KernelError> {
        self.degrees.get(n).ok_or(KernelError::MissingDegree { n })
    }

    pub fn tilde(&self, n: usize) -> Result<&Subspace, KernelError> {
        Ok(&self.degree(n)?.tilde)
    }

    /// `(n-1) C(m+1, n)` for `2 ≤ n ≤ m+1`, else 0.
    pub fn expected_tilde_dim(m: usize, n: usize) -> usize {
        if (2..=m + 1).contains(&n) {
            ((n as i128 - 1) * binom(m + 1, n)) as usize
        } else {
            0
        }
    }

    /// `tilde(n)` together with the decomposable part has dimension `M(n)`,
    /// and the decomposable products are independent.
    pub fn direct_sum_ok(&self, n: usize) -> Result<bool, KernelError> {
        let d = self.degree(n)?;
        if n == 0 {
            // the unit
            return Ok(d.m_dim() == 1);
        }
        Ok(d.products_independent && d.decomposable_dim + d.b() == d.m_dim())
    }

    /// For `n > m+1`: `ker σ_n = ⊕_{k=2}^{m+1} ker σ_{n-k} ⊗ tilde(k)` as
    /// subspaces.
    pub fn check_kernel_vanishing(&self, n: usize) -> Result<bool, KernelError> {
        if n <= self.m + 1 {
            return Err(KernelError::Precondition(format!("vanishing needs n > m+1, got n = {n}")));
        }
        let d = self.degree(n)?;
        let products = decomposable_products(&self.degrees, n, self.m + 1);
        let span = Subspace::span(d.kernel.ambient_dim(), &products)?;
        Ok(span == *d.kernel && d.tilde.is_zero())
    }

    /// `ker σ_s ⊗ ker σ_t ⊆ ker σ_{s+t}`.
    pub fn check_graded_algebra(&self, yb: &YBData, s: usize, t: usize) -> Result<bool, KernelError> {
        let (a, b) = (yb.kernel_sigma(s)?, yb.kernel_sigma(t)?);
        let sigma = yb.sigma(s + t)?;
        for x in a.basis() {
            for z in b.basis() {
                if !sigma.apply(&x.tensor(z))?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
