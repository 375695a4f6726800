use serde::Serialize;

use super::complex::ChainComplex;
use super::module::{require_valid, VModuleSpec};
use super::{increasing_subsets, HomologyError};
use crate::kernel::kernel_dims_recurrence;
use crate::scalar::{quantum_factorial, RatFunc};
use crate::tensor::{tensor_dim, LinMap, SparseVec, Subspace};
use crate::ybop::{bracket, bracket_space, YBData};

/// Spanning vectors of `M_d ⊗ [V]_k ⊗ ker σ_{n-k}`.
fn split_part(cx: &ChainComplex, n: usize, k: usize, d: usize) -> Result<Vec<SparseVec>, HomologyError> {
    let m = cx.spec().m();
    if k > m.min(n) {
        return Ok(Vec::new());
    }
    let ker = cx.yb().kernel_sigma(n - k)?;
    let brackets = bracket_space(m, k);
    let p = cx.spec().piece_dim(d);
    let mut out = Vec::new();
    for q in 0..p {
        let e = SparseVec::basis(p, q);
        for b in brackets.bracket_of.values() {
            let eb = e.tensor(b);
            for x in ker.basis() {
                out.push(eb.tensor(x));
            }
        }
    }
    Ok(out)
}

/// `M_d ⊗ [V]_k`, the finite complex, spanned by increasing brackets.
fn finite_part(spec: &VModuleSpec, k: usize, d: usize) -> Vec<SparseVec> {
    let m = spec.m();
    let p = spec.piece_dim(d);
    let mut out = Vec::new();
    for q in 0..p {
        let e = SparseVec::basis(p, q);
        for s in increasing_subsets(m, k) {
            out.push(e.tensor(&bracket(m, &s)));
        }
    }
    out
}

/// Rank of `∂_k` restricted to `M_d ⊗ [V]_k`.
fn finite_rank(cx: &ChainComplex, k: usize, d: usize) -> Result<usize, HomologyError> {
    if k == 0 || k > cx.spec().m() || cx.spec().piece_dim(d) == 0 {
        return Ok(0);
    }
    let b = cx.boundary(k, d)?;
    let images = finite_part(cx.spec(), k, d)
        .iter()
        .map(|v| b.map.apply(v))
        .collect::<Result<Vec<_>, _>>()?;
    let label = format!("finite part boundary_{k} deg {d} (m={})", cx.spec().m());
    Ok(cx.yb().ranker().span_dim(b.map.rows(), &images, &label))
}

/// `dim H^f_k` on the degree-`d` piece.
fn finite_homology(cx: &ChainComplex, k: usize, d: usize) -> Result<usize, HomologyError> {
    let dim = finite_part(cx.spec(), k, d).len();
    let out = finite_rank(cx, k, d)?;
    let inc = match cx.incoming_degree(d) {
        Some(e) => finite_rank(cx, k + 1, e)?,
        None => 0,
    };
    Ok(dim - out - inc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingDegree {
    pub module_degree: usize,
    /// `∂_n` maps `M⊗[V]_k⊗ker σ_{n-k}` into `M⊗[V]_{k-1}⊗ker σ_{n-k}` for every `k`.
    pub maps_into_ok: bool,
    /// `dim H^f_k` for `k = 0..=n`.
    pub hf_dims: Vec<usize>,
    pub dim_h: usize,
    pub dim_h_from_splitting: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub n: usize,
    pub degrees: Vec<SplittingDegree>,
}

impl SplittingReport {
    pub fn ok(&self) -> bool {
        self.degrees.iter().all(|d| d.maps_into_ok && d.dim_h as i128 == d.dim_h_from_splitting)
    }
}

/// The chain complex splits as the finite complex tensored with
/// `⊕ ker σ_j`: `∂_n` respects the pieces and
/// `dim H_n = Σ_j dim H^f_{n-j} · M(j)` on every module degree (every
/// `d ≤ truncation − n` for the free module).
pub fn verify_complex_splitting(spec: &VModuleSpec, yb: &YBData, n: usize) -> Result<SplittingReport, HomologyError> {
    require_valid(spec, yb)?;
    let cx = ChainComplex::new(spec, yb)?;
    let m = spec.m();
    let big_m = kernel_dims_recurrence(m, n)?;
    let bound = spec.truncation().map_or(0, |t| t.saturating_sub(n));
    let mut degrees = Vec::new();
    for d in spec.degrees(bound) {
        let mut maps_into_ok = true;
        if n >= 1 {
            let b = cx.boundary(n, d)?;
            let target_d = d + spec.step();
            for k in 0..=n.min(m) {
                let images = split_part(&cx, n, k, d)?
                    .iter()
                    .map(|v| b.map.apply(v))
                    .collect::<Result<Vec<_>, _>>()?;
                if k == 0 {
                    maps_into_ok &= images.iter().all(SparseVec::is_zero);
                    continue;
                }
                // M ⊗ [V]_{k-1} ⊗ ker σ_{n-k} inside M ⊗ V^{⊗(n-1)}
                let target = split_part(&cx, n - 1, k - 1, target_d)?;
                let space = Subspace::span(cx.dim(n - 1, target_d), &target)?;
                for img in &images {
                    maps_into_ok &= space.contains(img)?;
                }
            }
        }
        let hf_dims = (0..=n).map(|k| finite_homology(&cx, k, d)).collect::<Result<Vec<_>, _>>()?;
        let dim_h_from_splitting = (0..=n).map(|j| hf_dims[n - j] as i128 * big_m[j]).sum();
        let dim_h = cx.homology_dim(n, d)?;
        degrees.push(SplittingDegree { module_degree: d, maps_into_ok, hf_dims, dim_h, dim_h_from_splitting });
    }
    Ok(SplittingReport { n, degrees })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulSquare {
    pub k: usize,
    pub module_degree: usize,
    pub commutes: bool,
}

/// Exactness of `(F ⊗ [V]_k, δ_k)` at one Koszul degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaExactness {
    pub total_degree: usize,
    pub k: usize,
    pub squared_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub squares: Vec<KoszulSquare>,
    /// Empty for a finite module.
    pub delta: Vec<DeltaExactness>,
}

impl KoszulReport {
    pub fn ok(&self) -> bool {
        self.squares.iter().all(|s| s.commutes) && self.delta.iter().all(|d| d.squared_zero && d.exact)
    }
}

/// `M_d ⊗ Λ^k → M_d ⊗ V^{⊗k}`, `e_p ⊗ e_S ↦ c · e_p ⊗ [v_S]`.
fn wedge_to_tensor(spec: &VModuleSpec, k: usize, d: usize, c: &RatFunc) -> Result<LinMap, HomologyError> {
    let m = spec.m();
    let cols: Vec<SparseVec> = finite_part(spec, k, d).iter().map(|v| v.scale(c)).collect();
    Ok(LinMap::from_columns(spec.piece_dim(d) * tensor_dim(m, k), cols)?)
}

/// Koszul differential `M_d ⊗ Λ^k → M_{d+step} ⊗ Λ^{k-1}`,
/// `e_p ⊗ e_S ↦ Σ_j (-1)^{j+1} e_p v_{i_j} ⊗ e_{S \ i_j}`.
fn koszul_differential(spec: &VModuleSpec, k: usize, d: usize) -> Result<LinMap, HomologyError> {
    let m = spec.m();
    let act = spec.action(d);
    let src = increasing_subsets(m, k);
    let dst = increasing_subsets(m, k - 1);
    let out_dim = spec.piece_dim(d + spec.step());
    let mut trip = Vec::new();
    for p in 0..spec.piece_dim(d) {
        for (si, s) in src.iter().enumerate() {
            let col = p * src.len() + si;
            for (j, &i) in s.iter().enumerate() {
                let t: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
                let ti = dst.binary_search(&t).expect("subset listed");
                let sign = RatFunc::from_int(if j % 2 == 0 { 1 } else { -1 });
                for (q, v) in act.column(p * m + i).entries() {
                    trip.push((q * dst.len() + ti, col, &sign * v));
                }
            }
        }
    }
    Ok(LinMap::from_triplets(out_dim * dst.len(), spec.piece_dim(d) * src.len(), trip)?)
}

/// Commuting squares `∂_k ∘ f_k = f_{k-1} ∘ (id ⊗ d_k)` with
/// `f_k = (1/[k]!) e ⊗ [v_S]`, and for the free module exactness of
/// `δ_k = (R_F ⊗ id)|_{F⊗[V]_k}` in Koszul degrees `k ≥ 1` within the truncation.
pub fn koszul_check(spec: &VModuleSpec, yb: &YBData) -> Result<KoszulReport, HomologyError> {
    require_valid(spec, yb)?;
    let cx = ChainComplex::new(spec, yb)?;
    let m = spec.m();
    let t = spec.truncation().unwrap_or(0);
    let mut squares = Vec::new();
    for k in 1..=m {
        let bound = t.saturating_sub(k);
        for d in spec.degrees(bound) {
            let dd = d + spec.step();
            let f_k = wedge_to_tensor(spec, k, d, &quantum_factorial(k).inv()?)?;
            let f_prev = wedge_to_tensor(spec, k - 1, dd, &quantum_factorial(k - 1).inv()?)?;
            let lhs = cx.boundary(k, d)?.map.compose(&f_k)?;
            let rhs = f_prev.compose(&koszul_differential(spec, k, d)?)?;
            squares.push(KoszulSquare { k, module_degree: d, commutes: lhs == rhs });
        }
    }
    let mut delta = Vec::new();
    if spec.is_free() {
        let ranker = yb.ranker();
        // δ_k on F_d ⊗ [V]_k, as a map out of F_d ⊗ Λ^k
        let delta_map = |k: usize, d: usize| -> Result<LinMap, HomologyError> {
            Ok(cx.head(k, d).compose(&wedge_to_tensor(spec, k, d, &RatFunc::one())?)?)
        };
        let rank = |k: usize, d: usize| -> Result<usize, HomologyError> {
            if k == 0 || k > m {
                return Ok(0);
            }
            let f = delta_map(k, d)?;
            Ok(ranker.rank(&f, &format!("delta_{k} deg {d} (m={m})")))
        };
        for total in 1..=t {
            for k in 1..=m.min(total) {
                let d = total - k;
                let dim = spec.piece_dim(d) * super::binom_usize(m, k);
                let rank_in = if d >= 1 { rank(k + 1, d - 1)? } else { 0 };
                let exact = dim - rank(k, d)? == rank_in;
                let squared_zero = if k >= 2 {
                    cx.head(k - 1, d + 1).compose(&delta_map(k, d)?)?.is_zero()
                } else {
                    true
                };
                delta.push(DeltaExactness { total_degree: total, k, squared_zero, exact });
            }
        }
    }
    Ok(KoszulReport { squares, delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_action_splitting() {
        let yb = YBData::new(2).unwrap();
        let rep = verify_complex_splitting(&VModuleSpec::zero_action(1, 2), &yb, 2).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.degrees[0].hf_dims, vec![1, 2, 1]);
    }

    #[test]
    fn triangular_splitting() {
        let yb = YBData::new(3).unwrap();
        let rep = verify_complex_splitting(&VModuleSpec::triangular_example(), &yb, 3).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.degrees[0].dim_h, 27);
    }

    #[test]
    fn free_splitting() {
        let yb = YBData::new(2).unwrap();
        let spec = VModuleSpec::free(2, 4).unwrap();
        for n in 0..=4 {
            let rep = verify_complex_splitting(&spec, &yb, n).unwrap();
            assert!(rep.ok(), "n={n}: {rep:?}");
        }
    }

    #[test]
    fn koszul_squares() {
        let yb2 = YBData::new(2).unwrap();
        let rep = koszul_check(&VModuleSpec::free(2, 4).unwrap(), &yb2).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert!(!rep.delta.is_empty());
        let yb3 = YBData::new(3).unwrap();
        let rep = koszul_check(&VModuleSpec::triangular_example(), &yb3).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.squares.len(), 3);
    }

    #[test]
    fn unscaled_square_fails() {
        // without 1/[k]! the k = 2 square is off by [2] = 1 + y^2
        let yb = YBData::new(2).unwrap();
        let spec = VModuleSpec::identity_action(1, 2);
        let cx = ChainComplex::new(&spec, &yb).unwrap();
        let f2 = wedge_to_tensor(&spec, 2, 0, &RatFunc::one()).unwrap();
        let f1 = wedge_to_tensor(&spec, 1, 0, &RatFunc::one()).unwrap();
        let lhs = cx.boundary(2, 0).unwrap().map.compose(&f2).unwrap();
        let rhs = f1.compose(&koszul_differential(&spec, 2, 0).unwrap()).unwrap();
        assert_ne!(lhs, rhs);
    }
}
