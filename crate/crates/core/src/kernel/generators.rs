use std::collections::BTreeMap;

use serde::Serialize;

use super::{tower::KernelTower, KernelError};
use crate::scalar::RatFunc;
use crate::tensor::{decode, encode, tensor_dim, EchelonBuilder, SparseVec};
use crate::ybop::{bracket, YBData};

/// `ω_k(x) = v_k ⊗ x + (-1)^n x ⊗ v_k ∈ ker σ_n` for `x ∈ ker σ_{n-1}` and
/// `k` (0-based) no larger than any letter occurring in `x`.
pub fn omega_k(yb: &YBData, x: &SparseVec, k: usize, n: usize) -> Result<SparseVec, KernelError> {
    let m = yb.m();
    if n < 2 || x.dim() != tensor_dim(m, n - 1) {
        return Err(KernelError::Precondition(format!(
            "omega needs a vector of V^(n-1) for n >= 2, got dimension {} at n = {n}",
            x.dim()
        )));
    }
    if k >= m {
        return Err(KernelError::Precondition(format!("letter {} outside 1..={m}", k + 1)));
    }
    let min_letter = x
        .entries()
        .iter()
        .flat_map(|(p, _)| decode(m, n - 1, *p))
        .min();
    if let Some(low) = min_letter {
        if k > low {
            return Err(KernelError::Precondition(format!(
                "omega_{} needs k <= {}, the smallest letter of x",
                k + 1,
                low + 1
            )));
        }
    }
    if !yb.sigma(n - 1)?.apply(x)?.is_zero() {
        return Err(KernelError::Precondition(format!("x is not in ker sigma_{}", n - 1)));
    }
    let vk = SparseVec::basis(m, k);
    let sign = RatFunc::from_int(if n.is_multiple_of(2) { 1 } else { -1 });
    let w = vk.tensor(x).add_scaled(&sign, &x.tensor(&vk));
    if !yb.sigma(n)?.apply(&w)?.is_zero() {
        return Err(KernelError::Postcondition(format!("omega_{}(x) is not in ker sigma_{n}", k + 1)));
    }
    Ok(w)
}

/// Generators of `B(V)` grouped by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub m: usize,
    pub by_degree: BTreeMap<usize, Vec<SparseVec>>,
}

fn word(m: usize, letters: &[usize]) -> SparseVec {
    let zero_based: Vec<usize> = letters.iter().map(|l| l - 1).collect();
    SparseVec::basis(tensor_dim(m, letters.len()), encode(m, &zero_based))
}

fn y2() -> RatFunc {
    RatFunc::monomial(1, 2)
}

/// `v_i⊗v_j + y² v_j⊗v_i` (1-based letters)
fn twisted(m: usize, i: usize, j: usize) -> SparseVec {
    word(m, &[i, j]).add_scaled(&y2(), &word(m, &[j, i]))
}

/// The explicit generating sets listed for `m = 2` and `m = 3`.
pub fn listed_generators(yb: &YBData) -> Result<GeneratorSet, KernelError> {
    let m = yb.m();
    let om = |x: &SparseVec, k: usize, n: usize| omega_k(yb, x, k - 1, n);
    let mut by_degree = BTreeMap::new();
    match m {
        2 => {
            by_degree.insert(2, vec![word(2, &[1, 1]), word(2, &[2, 2]), twisted(2, 1, 2)]);
            by_degree.insert(3, vec![om(&word(2, &[2, 2]), 1, 3)?, om(&twisted(2, 1, 2), 1, 3)?]);
        }
        3 => {
            let mut d2 = Vec::new();
            for i in 1..=3 {
                d2.push(word(3, &[i, i]));
            }
            for i in 1..=3 {
                for j in i + 1..=3 {
                    d2.push(twisted(3, i, j));
                }
            }
            let mut d3 = Vec::new();
            for i in 1..=3 {
                for j in i + 1..=3 {
                    d3.push(om(&word(3, &[j, j]), i, 3)?);
                }
            }
            for i in 1..=3 {
                for j in i + 1..=3 {
                    for s in 1..=i {
                        d3.push(om(&twisted(3, i, j), s, 3)?);
                    }
                }
            }
            // y²[v1,v2,v3] + (1+y²+y⁴)(v1⊗v3⊗v2 - v2⊗v3⊗v1)
            let special = bracket(3, &[0, 1, 2]).scale(&y2()).add_scaled(
                &RatFunc::from_poly(crate::scalar::IntPoly::from_i64s(&[1, 0, 1, 0, 1])),
                &word(3, &[1, 3, 2]).sub(&word(3, &[2, 3, 1])),
            );
            d3.push(special.clone());
            let d4 = vec![
                om(&om(&word(3, &[3, 3]), 2, 3)?, 1, 4)?,
                om(&om(&twisted(3, 2, 3), 2, 3)?, 1, 4)?,
                om(&special, 1, 4)?,
            ];
            by_degree.insert(2, d2);
            by_degree.insert(3, d3);
            by_degree.insert(4, d4);
        }
        _ => {
            return Err(KernelError::Precondition(format!(
                "explicit generators are known only for m = 2, 3 (got m = {m})"
            )))
        }
    }
    Ok(GeneratorSet { m, by_degree })
}

/// Dimension of the degree-`n` part of the algebra generated under
/// concatenation, for `n = 0..=n_max`, with a reduced spanning set per degree.
fn generated_parts(
    yb: &YBData,
    set: &GeneratorSet,
    n_max: usize,
) -> Vec<Vec<SparseVec>> {
    let mut parts: Vec<Vec<SparseVec>> = vec![vec![SparseVec::basis(1, 0)]];
    for n in 1..=n_max {
        let mut builder = EchelonBuilder::new(yb.dim(n));
        for (&d, gens) in &set.by_degree {
            if d > n {
                continue;
            }
            for left in &parts[n - d] {
                for g in gens {
                    builder.insert(&left.tensor(g));
                }
            }
        }
        parts.push(builder.accepted().to_vec());
    }
    parts
}

pub fn generated_dims(yb: &YBData, set: &GeneratorSet, n_max: usize) -> Vec<usize> {
    generated_parts(yb, set, n_max).iter().map(Vec::len).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedDegree {
    pub n: usize,
    pub dim: usize,
    pub kernel_dim: usize,
    pub inside_kernel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub m: usize,
    /// `(degree, listed count, span dimension, expected tilde dimension)`
    pub listed: Vec<(usize, usize, usize, usize)>,
    pub listed_in_kernel: bool,
    pub generated: Vec<GeneratedDegree>,
    pub omega_checked: usize,
    pub omega_failures: usize,
}

impl GeneratorReport {
    pub fn ok(&self) -> bool {
        self.listed_in_kernel
            && self.listed.iter().all(|(_, c, s, e)| c == s && s == e)
            && self.generated.iter().all(|g| g.inside_kernel && g.dim == g.kernel_dim)
            && self.omega_failures == 0
    }
}

/// The listed generators lie in their kernels, have the predicted counts,
/// and generate `ker σ_n` for `n ≤ n_max`; every admissible `ω_k` of a
/// kernel basis vector or listed generator lands in the next kernel.
pub fn verify_generator_examples(yb: &YBData, n_max: usize) -> Result<GeneratorReport, KernelError> {
    let m = yb.m();
    let set = listed_generators(yb)?;
    let mut listed = Vec::new();
    let mut listed_in_kernel = true;
    for (&d, gens) in &set.by_degree {
        let sigma = yb.sigma(d)?;
        for g in gens {
            listed_in_kernel &= sigma.apply(g)?.is_zero();
        }
        let span = yb.ranker().span_dim(yb.dim(d), gens, &format!("listed generators deg {d} (m={m})"));
        listed.push((d, gens.len(), span, KernelTower::expected_tilde_dim(m, d)));
    }
    let parts = generated_parts(yb, &set, n_max);
    let mut generated = Vec::new();
    for (n, part) in parts.iter().enumerate() {
        let sigma = yb.sigma(n)?;
        let inside_kernel = n == 0 || part.iter().all(|v| sigma.apply(v).map(|w| w.is_zero()).unwrap_or(false));
        let kernel_dim = yb.kernel_sigma(n)?.dim();
        generated.push(GeneratedDegree { n, dim: part.len(), kernel_dim, inside_kernel });
    }
    let mut omega_checked = 0;
    let mut omega_failures = 0;
    for n in 3..=n_max {
        let mut sources: Vec<SparseVec> = yb.kernel_sigma(n - 1)?.basis().to_vec();
        if let Some(gens) = set.by_degree.get(&(n - 1)) {
            sources.extend(gens.iter().cloned());
        }
        for x in &sources {
            let low = x.entries().iter().flat_map(|(p, _)| decode(m, n - 1, *p)).min().unwrap_or(m - 1);
            for k in 0..=low {
                omega_checked += 1;
                if omega_k(yb, x, k, n).is_err() {
                    omega_failures += 1;
                }
            }
        }
    }
    Ok(GeneratorReport { m, listed, listed_in_kernel, generated, omega_checked, omega_failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_examples() {
        let yb = YBData::new(2).unwrap();
        let w = omega_k(&yb, &word(2, &[2, 2]), 0, 3).unwrap();
        assert_eq!(w, word(2, &[1, 2, 2]).sub(&word(2, &[2, 2, 1])));
        assert!(omega_k(&yb, &word(2, &[1, 1]), 0, 3).unwrap().is_zero());
        let w = omega_k(&yb, &twisted(2, 1, 2), 0, 3).unwrap();
        let expect = word(2, &[1, 1, 2])
            .add_scaled(&y2(), &word(2, &[1, 2, 1]))
            .sub(&word(2, &[1, 2, 1]))
            .add_scaled(&-&y2(), &word(2, &[2, 1, 1]));
        assert_eq!(w, expect);
        // k larger than the smallest letter
        assert!(matches!(omega_k(&yb, &twisted(2, 1, 2), 1, 3), Err(KernelError::Precondition(_))));
        // x outside the kernel
        assert!(omega_k(&yb, &word(2, &[1, 2]), 0, 3).is_err());
    }

    #[test]
    fn m2_generators() {
        let yb = YBData::new(2).unwrap();
        let rep = verify_generator_examples(&yb, 5).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let mut only_two = listed_generators(&yb).unwrap();
        only_two.by_degree.remove(&3);
        let dims = generated_dims(&yb, &only_two, 3);
        assert_eq!(dims, vec![1, 0, 3, 0]);
    }

    #[test]
    fn m3_generators() {
        let yb = YBData::new(3).unwrap();
        let rep = verify_generator_examples(&yb, 4).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let dims: Vec<usize> = rep.generated.iter().map(|g| g.dim).collect();
        assert_eq!(dims, vec![1, 0, 6, 8, 39]);
    }
}
