use serde::{Deserialize, Serialize};

use super::elim::{
    clear_row, combine, entry_at, kernel_vectors, rank_of_rows, rref_rows, ElimRing, PolyRing, Row,
};
use super::linmap::{LinMap, MatrixJson, SparseVec};
use super::TensorError;
use crate::scalar::{IntPoly, RatFunc};

/// A subspace of `Q(y)^n` held in reduced echelon form.
///
/// Basis vectors have a leading 1 at their pivot, pivots increase, and every
/// basis vector vanishes at the other pivots. The form is unique, so derived
/// equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(|i| SparseVec::basis(ambient, i)).collect() }
    }

    pub fn span(ambient: usize, vectors: &[SparseVec]) -> Result<Self, TensorError> {
        check_dims(ambient, vectors)?;
        let rows: Vec<Vec<(usize, RatFunc)>> = vectors
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.entries().to_vec())
            .collect();
        let basis = rref_rows(&rows, ambient, false)
            .into_iter()
            .map(|r| SparseVec::from_sorted(ambient, r))
            .collect();
        Ok(Subspace { ambient, basis })
    }

    /// Dimension of the span without building the echelon form.
    pub fn span_dim(ambient: usize, vectors: &[SparseVec]) -> Result<usize, TensorError> {
        check_dims(ambient, vectors)?;
        let rows: Vec<Vec<(usize, RatFunc)>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
        Ok(rank_of_rows(&rows, ambient))
    }

    /// Right kernel of `f`.
    pub fn kernel(f: &LinMap) -> Self {
        Subspace { ambient: f.cols(), basis: kernel_vectors(f) }
    }

    /// Column span of `f`.
    pub fn image(f: &LinMap) -> Self {
        let rows: Vec<Vec<(usize, RatFunc)>> = f.transpose().to_rows();
        let basis = rref_rows(&rows, f.rows(), false)
            .into_iter()
            .map(|r| SparseVec::from_sorted(f.rows(), r))
            .collect();
        Subspace { ambient: f.rows(), basis }
    }

    /// Image of this subspace under `f`.
    pub fn map(&self, f: &LinMap) -> Result<Self, TensorError> {
        let imgs = self.basis.iter().map(|b| f.apply(b)).collect::<Result<Vec<_>, _>>()?;
        Subspace::span(f.rows(), &imgs)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.leading().unwrap().0).collect()
    }

    /// Basis vectors as columns.
    pub fn as_linmap(&self) -> LinMap {
        LinMap::from_columns(self.ambient, self.basis.clone()).expect("basis dimensions agree")
    }

    /// Remainder of `v` after reduction against the basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for b in &self.basis {
            let (p, _) = b.leading().unwrap();
            let c = r.get(*p);
            if !c.is_zero() {
                r = r.add_scaled(&-&c, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, TensorError> {
        if v.dim() != self.ambient {
            return Err(TensorError::DimensionMismatch { expected: self.ambient, found: v.dim() });
        }
        Ok(self.reduce(v).is_zero())
    }

    pub fn contains_space(&self, other: &Subspace) -> Result<bool, TensorError> {
        self.same_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(other.basis.iter().all(|b| self.reduce(b).is_zero()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, TensorError> {
        self.same_ambient(other)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    /// Intersection from the kernel of `[U | -W]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, TensorError> {
        self.same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let u = self.as_linmap();
        let w = other.as_linmap().scale(&RatFunc::from_int(-1));
        let k = kernel_vectors(&u.hstack(&w)?);
        let du = self.dim();
        let vectors: Vec<SparseVec> = k
            .iter()
            .map(|kv| {
                let coeffs: Vec<(usize, RatFunc)> =
                    kv.entries().iter().filter(|(i, _)| *i < du).cloned().collect();
                u.apply(&SparseVec::from_sorted(du, coeffs)).expect("dimension checked")
            })
            .collect();
        Subspace::span(self.ambient, &vectors)
    }

    /// `{x : <b, x> = 0 for every basis vector b}`
    pub fn annihilator(&self) -> Subspace {
        let rows = LinMap::from_columns(self.ambient, self.basis.clone())
            .expect("basis dimensions agree")
            .transpose();
        Subspace::kernel(&rows)
    }

    /// `self ⊗ other` inside the tensor product of the ambients.
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let ambient = self.ambient * other.ambient;
        let basis: Vec<SparseVec> = self
            .basis
            .iter()
            .flat_map(|a| other.basis.iter().map(move |b| a.tensor(b)))
            .collect();
        // products of reduced bases are independent but need re-reduction
        Subspace::span(ambient, &basis).expect("dimensions agree")
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), TensorError> {
        if self.ambient != other.ambient {
            return Err(TensorError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn to_json(&self) -> SubspaceJson {
        SubspaceJson { ambient_dim: self.ambient, basis: self.as_linmap().to_json() }
    }

    pub fn from_json(j: &SubspaceJson) -> Result<Subspace, TensorError> {
        let m = LinMap::from_json(&j.basis)?;
        if m.rows() != j.ambient_dim {
            return Err(TensorError::DimensionMismatch { expected: j.ambient_dim, found: m.rows() });
        }
        let cols: Vec<SparseVec> = (0..m.cols()).map(|c| m.column(c)).collect();
        Subspace::span(j.ambient_dim, &cols)
    }
}

fn check_dims(ambient: usize, vectors: &[SparseVec]) -> Result<(), TensorError> {
    match vectors.iter().find(|v| v.dim() != ambient) {
        Some(v) => Err(TensorError::DimensionMismatch { expected: ambient, found: v.dim() }),
        None => Ok(()),
    }
}

/// `{ "ambient_dim": n, "basis": <matrix JSON with basis vectors as columns> }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub basis: MatrixJson,
}

/// Incremental independence filter.
///
/// Incoming vectors are cleared to integer polynomial rows and reduced,
/// fraction-free, against the pivot rows accepted so far. Each pivot row
/// vanishes at the pivot columns of earlier rows, so reducing in insertion
/// order is complete.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    ambient: usize,
    pivots: Vec<(usize, Row<IntPoly>)>,
    accepted: Vec<SparseVec>,
}

impl EchelonBuilder {
    pub fn new(ambient: usize) -> Self {
        EchelonBuilder { ambient, pivots: Vec::new(), accepted: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, v: &SparseVec) -> Row<IntPoly> {
        let mut row = clear_row(v.entries());
        for (col, prow) in &self.pivots {
            if row.is_empty() {
                break;
            }
            if entry_at(&row, *col).is_some() {
                row = combine::<PolyRing>(&row, prow, *col);
            }
        }
        row
    }

    pub fn is_independent(&self, v: &SparseVec) -> bool {
        !self.reduce(v).is_empty()
    }

    /// Adds `v` if it is independent of the vectors accepted so far.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        assert_eq!(v.dim(), self.ambient, "vector dimension mismatch");
        let row = self.reduce(v);
        if row.is_empty() {
            return false;
        }
        let col = row
            .iter()
            .min_by_key(|(c, e)| (PolyRing::class(e), PolyRing::cost(e), *c))
            .map(|(c, _)| *c)
            .unwrap();
        self.pivots.push((col, row));
        self.accepted.push(v.clone());
        true
    }

    /// The accepted vectors, in insertion order.
    pub fn accepted(&self) -> &[SparseVec] {
        &self.accepted
    }

    pub fn finish(self) -> Subspace {
        Subspace::span(self.ambient, &self.accepted).expect("dimensions agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn v(dim: usize, terms: &[(usize, &str)]) -> SparseVec {
        SparseVec::from_terms(dim, terms.iter().map(|(i, s)| (*i, r(s))))
    }

    #[test]
    fn span_is_canonical() {
        let a = Subspace::span(3, &[v(3, &[(0, "1"), (1, "y")]), v(3, &[(1, "1"), (2, "1")])]).unwrap();
        let b = Subspace::span(3, &[v(3, &[(0, "1"), (1, "y + 1"), (2, "1")]), v(3, &[(1, "y"), (2, "y")])])
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pivots(), vec![0, 1]);
        assert_eq!(a.basis()[0], v(3, &[(0, "1"), (2, "-y")]));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, &[v(3, &[(0, "1")]), v(3, &[(1, "1")])]).unwrap();
        let b = Subspace::span(3, &[v(3, &[(1, "1"), (0, "y")]), v(3, &[(2, "1")])]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(3, &[(0, "y"), (1, "1")])).unwrap());
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(3));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn annihilator_dimension() {
        let a = Subspace::span(4, &[v(4, &[(0, "1"), (3, "1 - y^2")])]).unwrap();
        let perp = a.annihilator();
        assert_eq!(perp.dim(), 3);
        assert_eq!(perp.annihilator(), a);
    }

    #[test]
    fn builder_filters_dependencies() {
        let mut b = EchelonBuilder::new(3);
        assert!(b.insert(&v(3, &[(0, "1"), (1, "y")])));
        assert!(!b.insert(&v(3, &[(0, "y"), (1, "y^2")])));
        assert!(b.insert(&v(3, &[(1, "1")])));
        assert!(!b.insert(&v(3, &[(0, "3")])));
        assert_eq!(b.dim(), 2);
    }
}
