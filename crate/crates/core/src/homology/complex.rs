use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::betti::{betti_from_ranks, r_ranks};
use super::module::{require_valid, VModuleSpec};
use super::HomologyError;
use crate::kernel::kernel_dims_recurrence;
use crate::scalar::RatFunc;
use crate::tensor::{tensor_dim, LinMap};
use crate::ybop::YBData;

/// `∂_n` on one module-degree piece, with the outcome of comparing its two
/// constructions.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub map: LinMap,
    pub faces_agree: bool,
}

/// The Yang-Baxter chain complex `M ⊗ V^{⊗n}` with cached boundaries.
/// Keys are `(n, d)` with `d` the module degree of the source.
pub struct ChainComplex<'a> {
    spec: &'a VModuleSpec,
    yb: &'a YBData,
    boundaries: Mutex<HashMap<(usize, usize), Arc<Boundary>>>,
    ranks: Mutex<HashMap<(usize, usize), usize>>,
}

impl<'a> ChainComplex<'a> {
    pub fn new(spec: &'a VModuleSpec, yb: &'a YBData) -> Result<Self, HomologyError> {
        if spec.m() != yb.m() {
            return Err(HomologyError::InvalidModule(format!(
                "module has m = {}, operator has m = {}",
                spec.m(),
                yb.m()
            )));
        }
        Ok(ChainComplex { spec, yb, boundaries: Mutex::new(HashMap::new()), ranks: Mutex::new(HashMap::new()) })
    }

    pub fn spec(&self) -> &VModuleSpec {
        self.spec
    }

    pub fn yb(&self) -> &YBData {
        self.yb
    }

    /// `dim M_d ⊗ V^{⊗n}`.
    pub fn dim(&self, n: usize, d: usize) -> usize {
        self.spec.piece_dim(d) * tensor_dim(self.spec.m(), n)
    }

    /// `R_M ⊗ id_{V^{⊗(n-1)}}` on `M_d ⊗ V^{⊗n}`.
    pub fn head(&self, n: usize, d: usize) -> LinMap {
        self.spec.action(d).kron(&LinMap::identity(tensor_dim(self.spec.m(), n - 1)))
    }

    fn label(&self, n: usize, d: usize) -> String {
        let kind = if self.spec.is_free() { "free" } else { "finite" };
        format!("boundary_{n} deg {d} ({kind}, m={})", self.spec.m())
    }

    /// `∂_n` built as `Σ (-1)^{i-1} d_{i,n}` with `d_{i,n} = (R_M⊗id)(id_M⊗d_i^n)`,
    /// and as `(R_M⊗id)(id_M⊗σ_n)`.
    pub fn boundary(&self, n: usize, d: usize) -> Result<Arc<Boundary>, HomologyError> {
        if n == 0 {
            return Err(HomologyError::Precondition("boundary needs n >= 1".into()));
        }
        if let Some(b) = self.boundaries.lock().expect("poisoned").get(&(n, d)) {
            return Ok(b.clone());
        }
        let p = self.spec.piece_dim(d);
        let head = self.head(n, d);
        let id_m = LinMap::identity(p);
        let mut faces = LinMap::zero(head.rows(), self.dim(n, d));
        for i in 1..=n {
            let face = head.compose(&id_m.kron(&*self.yb.d(i, n)?))?;
            let sign = RatFunc::from_int(if i % 2 == 1 { 1 } else { -1 });
            faces = faces.add_scaled(&sign, &face)?;
        }
        let map = head.compose(&id_m.kron(&*self.yb.sigma(n)?))?;
        let b = Arc::new(Boundary { faces_agree: faces == map, map });
        Ok(self.boundaries.lock().expect("poisoned").entry((n, d)).or_insert(b).clone())
    }

    /// Rank of `∂_n` on the degree-`d` piece; zero for `n = 0`.
    pub fn boundary_rank(&self, n: usize, d: usize) -> Result<usize, HomologyError> {
        if n == 0 || self.dim(n, d) == 0 {
            return Ok(0);
        }
        if let Some(r) = self.ranks.lock().expect("poisoned").get(&(n, d)) {
            return Ok(*r);
        }
        let b = self.boundary(n, d)?;
        let r = self.yb.ranker().rank(&b.map, &self.label(n, d));
        self.ranks.lock().expect("poisoned").insert((n, d), r);
        Ok(r)
    }

    /// Source degree of the boundary landing in `M_d ⊗ V^{⊗n}`.
    pub fn incoming_degree(&self, d: usize) -> Option<usize> {
        d.checked_sub(self.spec.step())
    }

    /// `dim H_n` on the degree-`d` piece.
    pub fn homology_dim(&self, n: usize, d: usize) -> Result<usize, HomologyError> {
        let out = self.boundary_rank(n, d)?;
        let inc = match self.incoming_degree(d) {
            Some(e) => self.boundary_rank(n + 1, e)?,
            None => 0,
        };
        Ok(self.dim(n, d) - out - inc)
    }

    /// Computes every listed rank in parallel.
    pub fn prefetch_ranks(&self, keys: &[(usize, usize)]) -> Result<(), HomologyError> {
        keys.par_iter().map(|&(n, d)| self.boundary_rank(n, d).map(|_| ())).collect()
    }
}

/// `∂_n` on the degree-`d` piece (use `d = 0` for a finite module).
pub fn boundary(spec: &VModuleSpec, yb: &YBData, n: usize, d: usize) -> Result<LinMap, HomologyError> {
    require_valid(spec, yb)?;
    let cx = ChainComplex::new(spec, yb)?;
    let b = cx.boundary(n, d)?;
    if !b.faces_agree {
        return Err(HomologyError::Postcondition(format!("face-map sum and sigma form of boundary_{n} differ")));
    }
    Ok(b.map.clone())
}

/// `C_n` on one piece with its incoming and outgoing boundaries.
#[derive(Clone, Debug)]
pub struct ChainSlice {
    pub n: usize,
    pub module_degree: usize,
    pub dim: usize,
    pub boundary_in: Option<LinMap>,
    pub boundary_out: Option<LinMap>,
}

impl ChainSlice {
    /// `boundary_out ∘ boundary_in = 0`.
    pub fn squares_to_zero(&self) -> Result<bool, HomologyError> {
        match (&self.boundary_out, &self.boundary_in) {
            (Some(out), Some(inc)) => Ok(out.compose(inc)?.is_zero()),
            _ => Ok(true),
        }
    }
}

pub fn chain_slice(cx: &ChainComplex, n: usize, d: usize) -> Result<ChainSlice, HomologyError> {
    let boundary_out = if n >= 1 { Some(cx.boundary(n, d)?.map.clone()) } else { None };
    let boundary_in = match cx.incoming_degree(d) {
        Some(e) => Some(cx.boundary(n + 1, e)?.map.clone()),
        None => None,
    };
    Ok(ChainSlice { n, module_degree: d, dim: cx.dim(n, d), boundary_in, boundary_out })
}

/// One row of a homology report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyRecord {
    pub n: usize,
    pub module_degree: usize,
    #[serde(rename = "dim_C")]
    pub dim_c: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    pub betti_formula: Option<i128>,
    pub checks: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub kind: String,
    pub m: usize,
    pub l: Option<usize>,
    pub truncation: Option<usize>,
    /// `r_1, ..., r_m` for a finite module.
    pub r: Option<Vec<usize>>,
    pub records: Vec<HomologyRecord>,
}

impl HomologyReport {
    pub fn ok(&self) -> bool {
        self.records.iter().all(|r| r.checks.values().all(|&b| b))
    }

    /// `dim H_n` for `n = 0, 1, ...` at module degree 0.
    pub fn dims(&self) -> Vec<usize> {
        self.records.iter().filter(|r| r.module_degree == 0).map(|r| r.dim_h).collect()
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.records
            .iter()
            .flat_map(|r| {
                r.checks
                    .iter()
                    .filter(|(_, &ok)| !ok)
                    .map(move |(name, _)| format!("{name} at n={} deg={}", r.n, r.module_degree))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,module_degree,dim_C,rank_out,rank_in,dim_H,betti_formula,checks_ok\n");
        for r in &self.records {
            let betti = r.betti_formula.map(|b| b.to_string()).unwrap_or_default();
            let ok = r.checks.values().all(|&b| b);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n, r.module_degree, r.dim_c, r.rank_out, r.rank_in, r.dim_h, betti, ok
            ));
        }
        out
    }
}

/// `(n, d)` pairs reported: `n ≤ n_max`, and `n + d ≤ truncation` for the
/// free module.
fn report_keys(spec: &VModuleSpec, n_max: usize) -> Vec<(usize, usize)> {
    match spec.truncation() {
        None => (0..=n_max).map(|n| (n, 0)).collect(),
        Some(t) => (0..=n_max.min(t)).flat_map(|n| (0..=t - n).map(move |d| (n, d))).collect(),
    }
}

/// `dim H_n = dim ker ∂_n − rank ∂_{n+1}` for `0 ≤ n ≤ n_max`, with
/// `H_0 = M / im ∂_1`. Every record also checks `∂² = 0`, agreement of the
/// two boundary constructions, and the closed Betti formula (finite) or
/// concentration in module degree 0 (free).
pub fn homology_dims(spec: &VModuleSpec, yb: &YBData, n_max: usize) -> Result<HomologyReport, HomologyError> {
    require_valid(spec, yb)?;
    let cx = ChainComplex::new(spec, yb)?;
    let keys = report_keys(spec, n_max);
    let mut needed = BTreeSet::new();
    for &(n, d) in &keys {
        if n >= 1 {
            needed.insert((n, d));
        }
        if let Some(e) = cx.incoming_degree(d) {
            needed.insert((n + 1, e));
        }
    }
    let needed: Vec<(usize, usize)> = needed.into_iter().filter(|&(n, d)| cx.dim(n, d) > 0).collect();
    cx.prefetch_ranks(&needed)?;

    let m = spec.m();
    let top = keys.iter().map(|k| k.0 + k.1).max().unwrap_or(0) + 1;
    let big_m = kernel_dims_recurrence(m, top)?;
    let r = match spec {
        VModuleSpec::Finite { .. } => Some(r_ranks(spec, yb)?),
        VModuleSpec::Free { .. } => None,
    };
    let records = keys
        .par_iter()
        .map(|&(n, d)| -> Result<HomologyRecord, HomologyError> {
            let rank_out = cx.boundary_rank(n, d)?;
            let rank_in = match cx.incoming_degree(d) {
                Some(e) => cx.boundary_rank(n + 1, e)?,
                None => 0,
            };
            let dim_c = cx.dim(n, d);
            let dim_h = dim_c - rank_out - rank_in;
            let mut checks = BTreeMap::new();
            let slice = chain_slice(&cx, n, d)?;
            checks.insert("boundary_squared_zero".to_string(), slice.squares_to_zero()?);
            let mut faces = true;
            if n >= 1 {
                faces &= cx.boundary(n, d)?.faces_agree;
            }
            if let Some(e) = cx.incoming_degree(d) {
                faces &= cx.boundary(n + 1, e)?.faces_agree;
            }
            checks.insert("faces_match_sigma".to_string(), faces);
            let betti_formula = match (&r, spec) {
                (Some(r), VModuleSpec::Finite { l, .. }) => {
                    let b = betti_from_ranks(*l, m, r, n, &big_m);
                    checks.insert("betti_formula".to_string(), b == dim_h as i128);
                    Some(b)
                }
                _ => {
                    let expect = if d == 0 { big_m[n] } else { 0 };
                    checks.insert("concentrated_in_degree_0".to_string(), dim_h as i128 == expect);
                    None
                }
            };
            Ok(HomologyRecord { n, module_degree: d, dim_c, rank_out, rank_in, dim_h, betti_formula, checks })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (kind, l) = match spec {
        VModuleSpec::Finite { l, .. } => ("finite", Some(*l)),
        VModuleSpec::Free { .. } => ("free", None),
    };
    Ok(HomologyReport { kind: kind.into(), m, l, truncation: spec.truncation(), r, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SparseVec;

    #[test]
    fn boundary_one_is_action() {
        let spec = VModuleSpec::triangular_example();
        let yb = YBData::new(3).unwrap();
        let b1 = boundary(&spec, &yb, 1, 0).unwrap();
        assert_eq!(b1, spec.action(0));
        // ∂_1(e_1 ⊗ v_1) = e_1 + e_3
        assert_eq!(b1.column(0), SparseVec::basis(3, 0).add(&SparseVec::basis(3, 2)));
    }

    #[test]
    fn boundary_squares_vanish() {
        let spec = VModuleSpec::triangular_example();
        let yb = YBData::new(3).unwrap();
        let cx = ChainComplex::new(&spec, &yb).unwrap();
        for n in 1..=3 {
            let s = chain_slice(&cx, n, 0).unwrap();
            assert!(s.squares_to_zero().unwrap());
            assert!(cx.boundary(n, 0).unwrap().faces_agree);
        }
    }

    #[test]
    fn zero_action_dims() {
        let yb = YBData::new(2).unwrap();
        let rep = homology_dims(&VModuleSpec::zero_action(1, 2), &yb, 4).unwrap();
        assert_eq!(rep.dims(), vec![1, 2, 4, 8, 16]);
        assert!(rep.ok(), "{:?}", rep.failed_checks());
        assert_eq!(rep.r, Some(vec![0, 0]));
    }

    #[test]
    fn identity_action_dims() {
        // e ⊗ [v_1, v_2] ↦ e ⊗ v_2 − e ⊗ v_1 ≠ 0, so r = (1, 1); the finite
        // part is the Koszul complex of (1, 1), which is exact
        let yb = YBData::new(2).unwrap();
        let rep = homology_dims(&VModuleSpec::identity_action(1, 2), &yb, 4).unwrap();
        assert_eq!(rep.r, Some(vec![1, 1]));
        assert_eq!(rep.dims(), vec![0, 0, 0, 0, 0]);
        assert!(rep.ok(), "{:?}", rep.failed_checks());
    }

    #[test]
    fn free_module_small() {
        let yb = YBData::new(2).unwrap();
        let spec = VModuleSpec::free(2, 4).unwrap();
        let rep = homology_dims(&spec, &yb, 4).unwrap();
        assert!(rep.ok(), "{:?}", rep.failed_checks());
        assert_eq!(rep.dims(), vec![1, 0, 3, 2, 9]);
        // ∂_2 at module degree 0 lands in degree-1 polynomials ⊗ V
        let b2 = boundary(&spec, &yb, 2, 0).unwrap();
        assert_eq!((b2.rows(), b2.cols()), (4, 4));
        let csv = rep.to_csv();
        assert!(csv.starts_with("n,module_degree,dim_C"));
        assert_eq!(csv.lines().count(), rep.records.len() + 1);
    }

    #[test]
    fn invalid_module_rejected() {
        let yb = YBData::new(2).unwrap();
        let a = vec![
            LinMap::from_triplets(2, 2, [(0, 1, RatFunc::one())]).unwrap(),
            LinMap::from_triplets(2, 2, [(1, 0, RatFunc::one())]).unwrap(),
        ];
        let bad = VModuleSpec::finite(2, a).unwrap();
        assert!(matches!(homology_dims(&bad, &yb, 2), Err(HomologyError::WallCondition { i: 1, j: 2 })));
    }
}
