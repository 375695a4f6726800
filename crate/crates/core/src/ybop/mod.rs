//! The operators `R_m`, `d_k^n`, `σ_n`, `ψ_n`, `φ_n^i` and the n-bracket.

mod bracket;

pub use bracket::{
    bracket, bracket_space, check_bracket_recursions, check_phi_formula, inv_count, BracketSpace,
    PhiReport,
};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::scalar::RatFunc;
use crate::tensor::{encode, tensor_dim, LinMap, RankMode, Ranker, Subspace, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YbError {
    #[error("index k = {k} outside 1..={n}")]
    OutOfRange { k: usize, n: usize },
    #[error("operator of size {0} is not square on V⊗V")]
    NotSquareOnPair(usize),
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum OpKey {
    D { k: usize, n: usize },
    Sigma(usize),
    Psi(usize),
    Phi { n: usize, i: usize },
}

/// `R_m` together with a cache of the operators derived from it.
#[derive(Debug)]
pub struct YBData {
    m: usize,
    r: LinMap,
    ranker: Ranker,
    cache: Mutex<HashMap<OpKey, Arc<LinMap>>>,
    kernels: Mutex<HashMap<usize, Arc<Subspace>>>,
}

/// `R_m` on `V⊗V`, `dim V = m`.
///
/// `v_i⊗v_j ↦ (1-y²) v_i⊗v_j + y² v_j⊗v_i` and `v_j⊗v_i ↦ v_i⊗v_j` for
/// `i < j`; `v_i⊗v_i` is fixed.
pub fn build_r(m: usize) -> LinMap {
    let y2 = RatFunc::monomial(1, 2);
    let one_minus = &RatFunc::one() - &y2;
    let mut trip = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let col = encode(m, &[i, j]);
            let swapped = encode(m, &[j, i]);
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => trip.push((col, col, RatFunc::one())),
                std::cmp::Ordering::Less => {
                    trip.push((col, col, one_minus.clone()));
                    trip.push((swapped, col, y2.clone()));
                }
                std::cmp::Ordering::Greater => trip.push((swapped, col, RatFunc::one())),
            }
        }
    }
    LinMap::from_triplets(m * m, m * m, trip).expect("indices in range")
}

/// Exact check of `(R⊗id)(id⊗R)(R⊗id) = (id⊗R)(R⊗id)(id⊗R)`.
pub fn check_ybe(r: &LinMap) -> Result<bool, YbError> {
    let m = (r.rows() as f64).sqrt().round() as usize;
    if r.rows() != r.cols() || m * m != r.rows() {
        return Err(YbError::NotSquareOnPair(r.rows()));
    }
    let a = LinMap::place(r, m, 0, 1);
    let b = LinMap::place(r, m, 1, 0);
    let lhs = a.compose(&b)?.compose(&a)?;
    let rhs = b.compose(&a)?.compose(&b)?;
    Ok(lhs == rhs)
}

impl YBData {
    pub fn new(m: usize) -> Result<Self, YbError> {
        Self::with_mode(m, RankMode::default())
    }

    pub fn with_mode(m: usize, mode: RankMode) -> Result<Self, YbError> {
        if m == 0 {
            return Err(YbError::EmptyAlphabet);
        }
        Ok(YBData {
            m,
            r: build_r(m),
            ranker: Ranker::new(mode),
            cache: Mutex::new(HashMap::new()),
            kernels: Mutex::new(HashMap::new()),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> &LinMap {
        &self.r
    }

    pub fn ranker(&self) -> &Ranker {
        &self.ranker
    }

    /// `dim V^{⊗n}`
    pub fn dim(&self, n: usize) -> usize {
        tensor_dim(self.m, n)
    }

    /// `id^{⊗left} ⊗ op ⊗ id^{⊗right}`
    pub fn place(&self, op: &LinMap, left: usize, right: usize) -> LinMap {
        LinMap::place(op, self.m, left, right)
    }

    fn cached(&self, key: OpKey, build: impl FnOnce() -> Result<LinMap, YbError>) -> Result<Arc<LinMap>, YbError> {
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(build()?);
        // first write wins; concurrent builders produce identical values
        Ok(self.cache.lock().unwrap().entry(key).or_insert(value).clone())
    }

    /// `d_k^n = (R⊗id)(id⊗R⊗id)...(id^{k-2}⊗R⊗id^{n-k})`, moving the `k`-th
    /// factor to the front; `d_1^n = id`.
    pub fn d(&self, k: usize, n: usize) -> Result<Arc<LinMap>, YbError> {
        if k == 0 || k > n {
            return Err(YbError::OutOfRange { k, n });
        }
        self.cached(OpKey::D { k, n }, || {
            if k == 1 {
                return Ok(LinMap::identity(self.dim(n)));
            }
            let prev = self.d(k - 1, n)?;
            let layer = self.place(&self.r, k - 2, n - k);
            Ok(prev.compose(&layer)?)
        })
    }

    /// `σ_n = Σ (-1)^{i-1} d_i^n`; `σ_0` is the zero map on a line.
    pub fn sigma(&self, n: usize) -> Result<Arc<LinMap>, YbError> {
        self.cached(OpKey::Sigma(n), || {
            let dim = self.dim(n);
            let mut acc = LinMap::zero(dim, dim);
            for i in 1..=n {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                acc = acc.add_scaled(&RatFunc::from_int(sign), &*self.d(i, n)?)?;
            }
            Ok(acc)
        })
    }

    /// `ψ_n = Σ_{1 ≤ i ≤ j ≤ n-1} (-1)^{i+j} (id⊗d_j^{n-1}) d_i^n`
    pub fn psi(&self, n: usize) -> Result<Arc<LinMap>, YbError> {
        if n < 2 {
            return Err(YbError::OutOfRange { k: 2, n });
        }
        self.cached(OpKey::Psi(n), || {
            let dim = self.dim(n);
            let mut acc = LinMap::zero(dim, dim);
            for j in 1..n {
                let outer = self.place(&*self.d(j, n - 1)?, 1, 0);
                for i in 1..=j {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    acc = acc.add_scaled(&RatFunc::from_int(sign), &outer.compose(&*self.d(i, n)?)?)?;
                }
            }
            Ok(acc)
        })
    }

    /// `ker σ_n` in canonical echelon form; `ker σ_0` is the whole line.
    pub fn kernel_sigma(&self, n: usize) -> Result<Arc<Subspace>, YbError> {
        if let Some(hit) = self.kernels.lock().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let sigma = self.sigma(n)?;
        let k = Arc::new(self.ranker.kernel(&sigma, &format!("sigma_{n} (m={})", self.m)));
        Ok(self.kernels.lock().unwrap().entry(n).or_insert(k).clone())
    }

    /// `φ_n^i = (id^{⊗n-i}⊗σ_i) ∘ ... ∘ (id⊗σ_{n-1}) ∘ σ_n`
    pub fn phi(&self, n: usize, i: usize) -> Result<Arc<LinMap>, YbError> {
        if i == 0 || i > n {
            return Err(YbError::OutOfRange { k: i, n });
        }
        self.cached(OpKey::Phi { n, i }, || {
            if i == n {
                return Ok((*self.sigma(n)?).clone());
            }
            let inner = self.phi(n, i + 1)?;
            let layer = self.place(&*self.sigma(i)?, n - i, 0);
            Ok(layer.compose(&inner)?)
        })
    }

    /// Structural identities for `σ_n`, checked exactly.
    pub fn check_sigma_identities(&self, n: usize) -> Result<SigmaIdentityReport, YbError> {
        if n < 2 {
            return Err(YbError::OutOfRange { k: 2, n });
        }
        let sigma_n = self.sigma(n)?;
        let mut report = SigmaIdentityReport { n, ..Default::default() };

        for k in 1..n {
            let head = self.place(&*self.sigma(k)?, 0, n - k);
            let tail = self
                .place(&*self.d(k + 1, k + 1)?, 0, n - k - 1)
                .compose(&self.place(&*self.sigma(n - k)?, k, 0))?;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let rhs = head.add_scaled(&RatFunc::from_int(sign), &tail)?;
            report.splitting_checked += 1;
            if rhs != *sigma_n {
                report.failures.push(format!("splitting identity fails at n={n}, k={k}"));
            }
        }

        let sigma2_left = self.place(&*self.sigma(2)?, 0, n - 2);
        for j in 1..n {
            for i in 1..=j {
                let a = self.place(&*self.d(j, n - 1)?, 1, 0).compose(&*self.d(i, n)?)?;
                let b = self.place(&*self.d(i, n - 1)?, 1, 0).compose(&*self.d(j + 1, n)?)?;
                report.exchange_checked += 1;
                if a.sub(&b)? != sigma2_left.compose(&a)? {
                    report.failures.push(format!("exchange identity fails at n={n}, i={i}, j={j}"));
                }
            }
        }

        let lhs = self.place(&*self.sigma(n - 1)?, 1, 0).compose(&sigma_n)?;
        let rhs = sigma2_left.compose(&*self.psi(n)?)?;
        report.psi_checked = true;
        if lhs != rhs {
            report.failures.push(format!("psi factorisation fails at n={n}"));
        }
        Ok(report)
    }
}

/// Outcome of the `σ_n` identity suite at one degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SigmaIdentityReport {
    pub n: usize,
    pub splitting_checked: usize,
    pub exchange_checked: usize,
    pub psi_checked: bool,
    pub failures: Vec<String>,
}

impl SigmaIdentityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{rank_exact, SparseVec, TensorIndex};

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn basis(m: usize, letters: &[usize]) -> SparseVec {
        let t = TensorIndex::from_one_based(m, letters).unwrap();
        SparseVec::basis(tensor_dim(m, letters.len()), t.position())
    }

    #[test]
    fn r2_matches_displayed_matrix() {
        let expect = LinMap::from_dense(&[
            vec![r("1"), r("0"), r("0"), r("0")],
            vec![r("0"), r("1 - y^2"), r("1"), r("0")],
            vec![r("0"), r("y^2"), r("0"), r("0")],
            vec![r("0"), r("0"), r("0"), r("1")],
        ])
        .unwrap();
        assert_eq!(build_r(2), expect);
        assert_eq!(build_r(1), LinMap::identity(1));
    }

    #[test]
    fn r3_shape() {
        let r3 = build_r(3);
        let diag_ones = (0..3).filter(|&i| r3.get(4 * i, 4 * i).is_one()).count();
        assert_eq!(diag_ones, 3);
        // each column with i > j holds a single 1 (swap); i < j holds a 2-term mix
        let swaps = (0..9).filter(|&c| r3.column(c).entries().len() == 1).count();
        assert_eq!(swaps, 6);
        assert_eq!(r3.nnz(), 3 + 3 + 6);
        assert_eq!(rank_exact(&r3), 9);
    }

    #[test]
    fn ybe_examples() {
        for m in 1..=3 {
            assert!(check_ybe(&build_r(m)).unwrap());
        }
        assert!(check_ybe(&LinMap::identity(4)).unwrap());
        let mut bad = LinMap::identity(4).to_rows();
        bad[0].push((1, RatFunc::one()));
        let trip = bad.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v.clone())));
        let bad = LinMap::from_triplets(4, 4, trip).unwrap();
        assert!(!check_ybe(&bad).unwrap());
        assert!(check_ybe(&LinMap::identity(3)).is_err());
    }

    #[test]
    fn d_and_sigma_small_cases() {
        let yb = YBData::new(2).unwrap();
        assert_eq!(*yb.d(1, 3).unwrap(), LinMap::identity(8));
        assert_eq!(*yb.d(2, 2).unwrap(), build_r(2));
        assert_eq!(*yb.sigma(1).unwrap(), LinMap::identity(2));
        assert_eq!(*yb.sigma(2).unwrap(), LinMap::identity(4).sub(&build_r(2)).unwrap());
        assert!(yb.sigma(0).unwrap().is_zero());
        assert_eq!(yb.sigma(0).unwrap().rows(), 1);
        let s = yb.sigma(2).unwrap().apply(&basis(2, &[1, 2])).unwrap();
        let expect = basis(2, &[1, 2]).scale(&r("y^2")).sub(&basis(2, &[2, 1]).scale(&r("y^2")));
        assert_eq!(s, expect);
        assert!(yb.d(0, 2).is_err());
        assert!(yb.d(3, 2).is_err());
    }

    #[test]
    fn d33_on_v2v1v1() {
        // hand oracle: first (id⊗R) fixes v2⊗v1⊗v1, then (R⊗id) sends v2⊗v1 to v1⊗v2
        let yb = YBData::new(2).unwrap();
        let out = yb.d(3, 3).unwrap().apply(&basis(2, &[2, 1, 1])).unwrap();
        assert_eq!(out, basis(2, &[1, 2, 1]));
        // v1⊗v1⊗v2: (id⊗R) gives (1-y²)v1v1v2 + y² v1v2v1, then (R⊗id) fixes v1v1v2
        // and sends v1v2v1 to (1-y²)v1v2v1 + y² v2v1v1
        let out = yb.d(3, 3).unwrap().apply(&basis(2, &[1, 1, 2])).unwrap();
        let expect = basis(2, &[1, 1, 2])
            .scale(&r("1 - y^2"))
            .add(&basis(2, &[1, 2, 1]).scale(&r("y^2 - y^4")))
            .add(&basis(2, &[2, 1, 1]).scale(&r("y^4")));
        assert_eq!(out, expect);
    }

    #[test]
    fn sigma_identities_hold() {
        for (m, n_max) in [(1, 4), (2, 4), (3, 3)] {
            let yb = YBData::new(m).unwrap();
            for n in 2..=n_max {
                let rep = yb.check_sigma_identities(n).unwrap();
                assert!(rep.ok(), "m={m} n={n}: {:?}", rep.failures);
            }
        }
    }

    #[test]
    fn phi_top_is_sigma() {
        let yb = YBData::new(2).unwrap();
        for n in 1..=3 {
            assert_eq!(yb.phi(n, n).unwrap(), yb.sigma(n).unwrap());
        }
    }
}
