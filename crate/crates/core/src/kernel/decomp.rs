use serde::Serialize;

use super::KernelError;
use crate::scalar::quantum_int;
use crate::tensor::SparseVec;
use crate::ybop::{bracket_space, YBData};

/// One summand `[V]_k ⊗ ker σ_{n-k}` (`k = 0` is `ker σ_n`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompPart {
    pub k: usize,
    pub dim: usize,
    pub eigenvalue: String,
    /// `σ_n w = [k] w` on every spanning vector.
    pub eigen_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub m: usize,
    pub n: usize,
    pub parts: Vec<DecompPart>,
    /// Every pair of nonzero parts spans the sum of their dimensions.
    pub pairwise_ok: bool,
    /// All parts together span `V^{⊗n}` with no overlap.
    pub direct_sum_ok: bool,
    pub dims_sum: usize,
    /// `[j] ≠ [k]` for `j ≠ k ≤ n`.
    pub eigenvalues_distinct: bool,
}

impl DecompositionReport {
    pub fn ok(&self) -> bool {
        self.pairwise_ok
            && self.direct_sum_ok
            && self.eigenvalues_distinct
            && self.parts.iter().all(|p| p.eigen_ok)
    }
}

/// Spanning vectors of `[V]_k ⊗ ker σ_{n-k}`.
fn part_vectors(yb: &YBData, n: usize, k: usize) -> Result<Vec<SparseVec>, KernelError> {
    let ker = yb.kernel_sigma(n - k)?;
    if k == 0 {
        return Ok(ker.basis().to_vec());
    }
    let brackets = bracket_space(yb.m(), k);
    Ok(brackets
        .bracket_of
        .values()
        .flat_map(|b| ker.basis().iter().map(move |x| b.tensor(x)))
        .collect())
}

/// Checks `V^{⊗n} = ⊕_k [V]_k ⊗ ker σ_{n-k}` with `σ_n` acting on the
/// `k`-th part as the quantum integer `[k]`.
pub fn verify_decomposition(yb: &YBData, n: usize) -> Result<DecompositionReport, KernelError> {
    if n == 0 {
        return Err(KernelError::Precondition("decomposition needs n >= 1".into()));
    }
    let sigma = yb.sigma(n)?;
    let total_dim = yb.dim(n);
    let ranker = yb.ranker();
    let mut parts = Vec::new();
    let mut spans = Vec::new();
    for k in 0..=n {
        let vectors = part_vectors(yb, n, k)?;
        let q = quantum_int(k);
        let mut eigen_ok = true;
        for w in &vectors {
            if sigma.apply(w)? != w.scale(&q) {
                eigen_ok = false;
                break;
            }
        }
        let dim = if vectors.is_empty() {
            0
        } else {
            ranker.span_dim(total_dim, &vectors, &format!("part {k} of V^{n} (m={})", yb.m()))
        };
        parts.push(DecompPart { k, dim, eigenvalue: q.to_string(), eigen_ok });
        spans.push(vectors);
    }
    let mut pairwise_ok = true;
    for a in 0..=n {
        for b in a + 1..=n {
            if parts[a].dim == 0 || parts[b].dim == 0 {
                continue;
            }
            let mut both = spans[a].clone();
            both.extend(spans[b].iter().cloned());
            let d = ranker.span_dim(total_dim, &both, &format!("parts {a}+{b} of V^{n} (m={})", yb.m()));
            if d != parts[a].dim + parts[b].dim {
                pairwise_ok = false;
            }
        }
    }
    let dims_sum: usize = parts.iter().map(|p| p.dim).sum();
    let all: Vec<SparseVec> = spans.into_iter().flatten().collect();
    let spanned = ranker.span_dim(total_dim, &all, &format!("all parts of V^{n} (m={})", yb.m()));
    let direct_sum_ok = spanned == dims_sum && dims_sum == total_dim;
    let eigenvalues_distinct =
        (0..=n).all(|j| (j + 1..=n).all(|k| quantum_int(j) != quantum_int(k)));
    Ok(DecompositionReport {
        m: yb.m(),
        n,
        parts,
        pairwise_ok,
        direct_sum_ok,
        dims_sum,
        eigenvalues_distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(r: &DecompositionReport) -> Vec<usize> {
        r.parts.iter().map(|p| p.dim).collect()
    }

    #[test]
    fn m2_small_degrees() {
        let yb = YBData::new(2).unwrap();
        let r2 = verify_decomposition(&yb, 2).unwrap();
        assert!(r2.ok());
        assert_eq!(dims(&r2), vec![3, 0, 1]);
        let ev: Vec<&str> = r2.parts.iter().map(|p| p.eigenvalue.as_str()).collect();
        assert_eq!(ev, ["0", "1", "1 + y^2"]);
        let r3 = verify_decomposition(&yb, 3).unwrap();
        assert!(r3.ok());
        assert_eq!(dims(&r3), vec![2, 6, 0, 0]);
    }

    #[test]
    fn m1_degenerate() {
        let yb = YBData::new(1).unwrap();
        for n in 1..=4 {
            let r = verify_decomposition(&yb, n).unwrap();
            assert!(r.ok());
            assert_eq!(r.dims_sum, 1);
            // M(n) for m = 1 alternates 0, 1, 0, 1
            assert_eq!(r.parts[0].dim, (n + 1) % 2);
        }
    }
}
