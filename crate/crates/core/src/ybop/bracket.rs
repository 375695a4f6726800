use std::collections::BTreeMap;

use serde::Serialize;

use super::{YBData, YbError};
use crate::scalar::RatFunc;
use crate::tensor::{decode, encode, tensor_dim, SparseVec, Subspace};

/// All permutations of `0..n` with their signs.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i64;
    out.push((perm.clone(), sign));
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `[v_{i_1}, ..., v_{i_n}] = Σ_τ sgn(τ) v_{i_{τ(1)}} ⊗ ... ⊗ v_{i_{τ(n)}}`
/// for 0-based letters. The empty bracket is `1 ∈ V^{⊗0}`.
pub fn bracket(m: usize, letters: &[usize]) -> SparseVec {
    let n = letters.len();
    let terms = signed_permutations(n).into_iter().map(|(p, s)| {
        let word: Vec<usize> = p.iter().map(|&k| letters[k]).collect();
        (encode(m, &word), RatFunc::from_int(s))
    });
    SparseVec::from_terms(tensor_dim(m, n), terms)
}

/// `[V]_n` with its spanning brackets of strictly decreasing tuples.
#[derive(Clone, Debug)]
pub struct BracketSpace {
    pub n: usize,
    pub space: Subspace,
    /// Keyed by 0-based strictly decreasing tuples, in lexicographic order.
    pub bracket_of: BTreeMap<Vec<usize>, SparseVec>,
}

fn decreasing_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(top: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..top {
            cur.push(l);
            rec(l, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn bracket_space(m: usize, n: usize) -> BracketSpace {
    let bracket_of: BTreeMap<Vec<usize>, SparseVec> =
        decreasing_tuples(m, n).into_iter().map(|t| (t.clone(), bracket(m, &t))).collect();
    let vectors: Vec<SparseVec> = bracket_of.values().cloned().collect();
    let space = Subspace::span(tensor_dim(m, n), &vectors).expect("dimensions agree");
    BracketSpace { n, space, bracket_of }
}

/// Number of pairs `p < q` with `seq[p] > seq[q]`.
pub fn inv_count(seq: &[usize]) -> usize {
    (0..seq.len()).map(|p| (p + 1..seq.len()).filter(|&q| seq[p] > seq[q]).count()).sum()
}

fn without(letters: &[usize], drop: &[usize]) -> Vec<usize> {
    letters.iter().enumerate().filter(|(p, _)| !drop.contains(p)).map(|(_, l)| *l).collect()
}

fn sign(e: usize) -> RatFunc {
    RatFunc::from_int(if e.is_multiple_of(2) { 1 } else { -1 })
}

/// Both expansions of the bracket (one factor pulled out, and a 2-bracket
/// pulled out) plus adjacent antisymmetry, on every tuple of length `n` when
/// that is cheap, otherwise on the strictly decreasing ones.
pub fn check_bracket_recursions(m: usize, n: usize) -> bool {
    if n < 2 {
        return true;
    }
    let dim = tensor_dim(m, n);
    let tuples: Vec<Vec<usize>> = if dim <= 4096 {
        (0..dim).map(|p| decode(m, n, p)).collect()
    } else {
        decreasing_tuples(m, n)
    };
    tuples.iter().all(|t| {
        let full = bracket(m, t);
        let mut single = SparseVec::zero(dim);
        for s in 0..n {
            let head = SparseVec::basis(m, t[s]);
            let term = head.tensor(&bracket(m, &without(t, &[s])));
            single = single.add_scaled(&sign(s), &term);
        }
        let mut pair = SparseVec::zero(dim);
        for s in 0..n {
            for u in s + 1..n {
                let term = bracket(m, &[t[s], t[u]]).tensor(&bracket(m, &without(t, &[s, u])));
                // 1-based (s+1)+(u+1)+1 has the parity of s+u+1
                pair = pair.add_scaled(&sign(s + u + 1), &term);
            }
        }
        let antisym = (0..n - 1).all(|p| {
            let mut sw = t.clone();
            sw.swap(p, p + 1);
            bracket(m, &sw) == full.scale(&RatFunc::from_int(-1))
        });
        single == full && pair == full && antisym
    })
}

/// Outcome of the `φ` checks at one degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub n: usize,
    /// `φ_n^1(v_I) = y^{2 inv(reverse I)} [v_I]` on every basis vector.
    pub formula_ok: bool,
    /// `im φ_n^i ⊆ [V]_{n-i+1} ⊗ V^{⊗ i-1}` for every `i`.
    pub image_ok: bool,
    /// `φ_n^1 = 0`; expected exactly when `n > m`.
    pub phi1_zero: bool,
    pub failures: Vec<String>,
}

impl PhiReport {
    pub fn ok(&self, m: usize) -> bool {
        self.formula_ok && self.image_ok && (self.phi1_zero == (self.n > m))
    }
}

pub fn check_phi_formula(yb: &YBData, n: usize) -> Result<PhiReport, YbError> {
    let m = yb.m();
    let dim = yb.dim(n);
    let mut rep = PhiReport { n, formula_ok: true, image_ok: true, ..Default::default() };
    if n == 0 {
        rep.phi1_zero = false;
        return Ok(rep);
    }
    let phi1 = yb.phi(n, 1)?;
    rep.phi1_zero = phi1.is_zero();
    for pos in 0..dim {
        let word = decode(m, n, pos);
        let mut rev = word.clone();
        rev.reverse();
        let scale = RatFunc::monomial(1, 2 * inv_count(&rev));
        let expect = bracket(m, &word).scale(&scale);
        if phi1.column(pos) != expect {
            rep.formula_ok = false;
            rep.failures.push(format!("phi formula fails on basis word {word:?}"));
        }
    }
    for i in 1..=n {
        let phi = yb.phi(n, i)?;
        let target = bracket_space(m, n - i + 1).space.tensor(&Subspace::full(tensor_dim(m, i - 1)));
        let inside = (0..dim).all(|c| target.contains(&phi.column(c)).expect("dimensions agree"));
        if !inside {
            rep.image_ok = false;
            rep.failures.push(format!("image of phi_{n}^{i} escapes its bracket space"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_based(ls: &[usize]) -> Vec<usize> {
        ls.iter().map(|l| l - 1).collect()
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn small_brackets() {
        let b = bracket(2, &one_based(&[1, 2]));
        assert_eq!(b, SparseVec::from_terms(4, [(1, RatFunc::one()), (2, RatFunc::from_int(-1))]));
        assert!(bracket(2, &[0, 0]).is_zero());
        let b3 = bracket(3, &one_based(&[1, 2, 3]));
        assert_eq!(b3.entries().len(), 6);
        // oracle: sign of each arrangement by inversion parity
        for (pos, v) in b3.entries() {
            let w = decode(3, 3, *pos);
            let parity = inv_count(&w) % 2;
            assert_eq!(*v, RatFunc::from_int(if parity == 0 { 1 } else { -1 }));
        }
        assert_eq!(signed_permutations(4).len(), 24);
    }

    #[test]
    fn bracket_space_dims() {
        for m in 1..=4 {
            for n in 0..=5 {
                assert_eq!(bracket_space(m, n).space.dim(), binom(m, n), "m={m} n={n}");
            }
        }
        let b = bracket_space(2, 2);
        assert!(b.space.contains(&bracket(2, &[0, 1])).unwrap());
        assert_eq!(b.bracket_of.keys().next().unwrap(), &vec![1, 0]);
    }

    #[test]
    fn recursions() {
        assert!(check_bracket_recursions(3, 3));
        assert!(check_bracket_recursions(2, 2));
        assert!(check_bracket_recursions(4, 3));
    }

    #[test]
    fn inversions() {
        assert_eq!(inv_count(&[1, 2, 3]), 0);
        assert_eq!(inv_count(&[2, 1]), 1);
        assert_eq!(inv_count(&[3, 1, 2]), 2);
    }

    #[test]
    fn phi_examples() {
        let yb = YBData::new(2).unwrap();
        let phi = yb.phi(2, 1).unwrap();
        // v2⊗v1 is position 2, v1⊗v2 position 1
        assert_eq!(phi.column(2), bracket(2, &[1, 0]));
        assert_eq!(phi.column(1), bracket(2, &[0, 1]).scale(&RatFunc::monomial(1, 2)));
        for n in 1..=3 {
            let rep = check_phi_formula(&yb, n).unwrap();
            assert!(rep.ok(2), "{rep:?}");
        }
        assert!(check_phi_formula(&yb, 3).unwrap().phi1_zero);
    }
}
