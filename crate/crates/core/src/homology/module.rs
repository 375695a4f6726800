use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HomologyError;
use crate::scalar::RatFunc;
use crate::tensor::LinMap;
use crate::ybop::YBData;

/// Default total-degree truncation for the free module.
pub const DEFAULT_TRUNCATION: usize = 6;

/// A coefficient module: `l`-dimensional with `v_i` acting from the right by
/// `A_i`, or the polynomial ring `𝕂[v_1, ..., v_m]` graded by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VModuleSpec {
    Finite { m: usize, l: usize, a: Vec<LinMap> },
    Free { m: usize, max_total_degree: usize },
}

/// Exponent vectors of total degree `d` in `m` variables, lexicographically
/// descending (`v_1^d` first).
pub(crate) fn monomials(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(m, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, d, &mut Vec::new(), &mut out);
    }
    out
}

impl VModuleSpec {
    /// Checks the count and shapes of the action matrices.
    pub fn finite(m: usize, a: Vec<LinMap>) -> Result<Self, HomologyError> {
        if m == 0 {
            return Err(HomologyError::InvalidModule("alphabet size must be at least 1".into()));
        }
        if a.len() != m {
            return Err(HomologyError::InvalidModule(format!("expected {m} action matrices, got {}", a.len())));
        }
        let l = a[0].rows();
        for (i, ai) in a.iter().enumerate() {
            if ai.rows() != ai.cols() {
                return Err(HomologyError::InvalidModule(format!(
                    "A[{i}] is {}x{}, not square",
                    ai.rows(),
                    ai.cols()
                )));
            }
            if ai.rows() != l {
                return Err(HomologyError::InvalidModule(format!(
                    "A[{i}] has size {} but A[0] has size {l}",
                    ai.rows()
                )));
            }
        }
        Ok(VModuleSpec::Finite { m, l, a })
    }

    pub fn free(m: usize, max_total_degree: usize) -> Result<Self, HomologyError> {
        if m == 0 {
            return Err(HomologyError::InvalidModule("alphabet size must be at least 1".into()));
        }
        Ok(VModuleSpec::Free { m, max_total_degree })
    }

    /// Every `A_i` zero.
    pub fn zero_action(l: usize, m: usize) -> Self {
        VModuleSpec::Finite { m, l, a: vec![LinMap::zero(l, l); m] }
    }

    /// Every `A_i` the identity.
    pub fn identity_action(l: usize, m: usize) -> Self {
        VModuleSpec::Finite { m, l, a: vec![LinMap::identity(l); m] }
    }

    /// The three-dimensional module over `m = 3` with
    /// `A_1 = [[1,0,1],[0,0,1],[0,0,0]]`, `A_2 = A_3 = [[1,0,1],[0,0,0],[0,0,0]]`.
    pub fn triangular_example() -> Self {
        let mat = |rows: [[i64; 3]; 3]| {
            let data: Vec<Vec<RatFunc>> =
                rows.iter().map(|r| r.iter().map(|&x| RatFunc::from_int(x)).collect()).collect();
            LinMap::from_dense(&data).expect("rectangular")
        };
        let a1 = mat([[1, 0, 1], [0, 0, 1], [0, 0, 0]]);
        let a2 = mat([[1, 0, 1], [0, 0, 0], [0, 0, 0]]);
        VModuleSpec::Finite { m: 3, l: 3, a: vec![a1, a2.clone(), a2] }
    }

    pub fn m(&self) -> usize {
        match self {
            VModuleSpec::Finite { m, .. } | VModuleSpec::Free { m, .. } => *m,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, VModuleSpec::Free { .. })
    }

    /// How far the action raises module degree.
    pub fn step(&self) -> usize {
        usize::from(self.is_free())
    }

    /// Module degrees that occur: `{0}` for a finite module, `0..=bound` for
    /// the free one.
    pub fn degrees(&self, bound: usize) -> Vec<usize> {
        if self.is_free() {
            (0..=bound).collect()
        } else {
            vec![0]
        }
    }

    pub fn truncation(&self) -> Option<usize> {
        match self {
            VModuleSpec::Free { max_total_degree, .. } => Some(*max_total_degree),
            VModuleSpec::Finite { .. } => None,
        }
    }

    /// Dimension of the degree-`d` piece.
    pub fn piece_dim(&self, d: usize) -> usize {
        match self {
            VModuleSpec::Finite { l, .. } => {
                if d == 0 {
                    *l
                } else {
                    0
                }
            }
            VModuleSpec::Free { m, .. } => super::binom_usize(d + m - 1, m - 1),
        }
    }

    /// `R_M` on the degree-`d` piece: `M_d ⊗ V → M_{d+step}`, column `p*m + i`
    /// holding `e_p · v_i`.
    pub fn action(&self, d: usize) -> LinMap {
        match self {
            VModuleSpec::Finite { m, l, a } => {
                if d != 0 {
                    return LinMap::zero(0, 0);
                }
                // e_s · A_i is row s of A_i: entry (s, t) lands in coordinate t
                let mut trip = Vec::new();
                for (i, ai) in a.iter().enumerate() {
                    for (s, t, c) in ai.triplets() {
                        trip.push((t, s * m + i, c.clone()));
                    }
                }
                LinMap::from_triplets(*l, l * m, trip).expect("in range")
            }
            VModuleSpec::Free { m, .. } => {
                let src = monomials(*m, d);
                let dst = monomials(*m, d + 1);
                let mut trip = Vec::with_capacity(src.len() * m);
                for (p, mono) in src.iter().enumerate() {
                    for i in 0..*m {
                        let mut up = mono.clone();
                        up[i] += 1;
                        let q = dst.binary_search_by(|x| up.cmp(x)).expect("monomial present");
                        trip.push((q, p * m + i, RatFunc::one()));
                    }
                }
                LinMap::from_triplets(dst.len(), src.len() * m, trip).expect("in range")
            }
        }
    }

    /// `e_p · v_i` in the degree-`d + step` piece.
    pub fn act_on_basis(&self, d: usize, p: usize, i: usize) -> crate::tensor::SparseVec {
        self.action(d).column(p * self.m() + i)
    }

    pub fn to_json(&self) -> ModuleJson {
        match self {
            VModuleSpec::Finite { m, l, a } => ModuleJson::Finite {
                m: *m,
                l: *l,
                a: a.iter()
                    .map(|ai| {
                        (0..*l)
                            .map(|r| (0..*l).map(|c| Entry::Text(ai.get(r, c).to_string())).collect())
                            .collect()
                    })
                    .collect(),
            },
            VModuleSpec::Free { m, max_total_degree } => {
                ModuleJson::Free { m: *m, max_total_degree: *max_total_degree }
            }
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<Self, HomologyError> {
        match j {
            ModuleJson::Free { m, max_total_degree } => VModuleSpec::free(*m, *max_total_degree),
            ModuleJson::Finite { m, l, a } => {
                let mut mats = Vec::with_capacity(a.len());
                for (i, rows) in a.iter().enumerate() {
                    if rows.len() != *l {
                        return Err(HomologyError::InvalidModule(format!(
                            "A[{i}] has {} rows, expected l = {l}",
                            rows.len()
                        )));
                    }
                    let mut data = Vec::with_capacity(*l);
                    for (r, row) in rows.iter().enumerate() {
                        if row.len() != *l {
                            return Err(HomologyError::InvalidModule(format!(
                                "A[{i}][{r}] has {} entries, expected l = {l}",
                                row.len()
                            )));
                        }
                        let parsed = row
                            .iter()
                            .enumerate()
                            .map(|(c, e)| {
                                e.value().map_err(|err| {
                                    HomologyError::InvalidModule(format!("A[{i}][{r}][{c}]: {err}"))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        data.push(parsed);
                    }
                    let mat = if *l == 0 { LinMap::zero(0, 0) } else { LinMap::from_dense(&data)? };
                    mats.push(mat);
                }
                if *l == 0 {
                    return Err(HomologyError::InvalidModule("l must be at least 1".into()));
                }
                VModuleSpec::finite(*m, mats)
            }
        }
    }

    pub fn parse_json(text: &str) -> Result<Self, HomologyError> {
        let j: ModuleJson = serde_json::from_str(text).map_err(|e| HomologyError::Json(e.to_string()))?;
        Self::from_json(&j)
    }
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

/// Serialized module description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModuleJson {
    Finite {
        l: usize,
        m: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<Vec<Entry>>>,
    },
    Free {
        m: usize,
        #[serde(default = "default_truncation")]
        max_total_degree: usize,
    },
}

/// A matrix entry: an integer or a rational-function string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub fn value(&self) -> Result<RatFunc, crate::scalar::ScalarError> {
        match self {
            Entry::Int(x) => Ok(RatFunc::from_int(*x)),
            Entry::Text(s) => RatFunc::parse(s),
        }
    }
}

/// Outcome of the two compatibility checks on a coefficient module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallReport {
    /// `R_M∘(R_M⊗id) = R_M∘(R_M⊗id)∘(id⊗R)` as operators.
    pub wall_ok: bool,
    /// `A_i A_j = A_j A_i` for all pairs.
    pub commute_ok: bool,
    /// First failing pair `(i, j)`, 1-based with `i < j`.
    pub offending: Option<(usize, usize)>,
}

impl WallReport {
    pub fn agree(&self) -> bool {
        self.wall_ok == self.commute_ok
    }
}

/// Runs the operator-level wall check and, separately, pairwise
/// commutativity. For the free module both are checked on every piece below
/// the truncation.
pub fn check_wall(spec: &VModuleSpec, yb: &YBData) -> Result<WallReport, HomologyError> {
    let m = spec.m();
    if m != yb.m() {
        return Err(HomologyError::InvalidModule(format!("module has m = {m}, operator has m = {}", yb.m())));
    }
    let top = spec.truncation().map_or(0, |t| t.saturating_sub(2));
    let mut wall_ok = true;
    let mut offending = None;
    for d in spec.degrees(top) {
        let inner = spec.action(d).kron(&LinMap::identity(m));
        let outer = spec.action(d + spec.step());
        let lhs = outer.compose(&inner)?;
        let rhs = lhs.compose(&LinMap::identity(spec.piece_dim(d)).kron(yb.r()))?;
        let diff = lhs.sub(&rhs)?;
        if !diff.is_zero() {
            wall_ok = false;
            if offending.is_none() {
                // column (p, i, j) of M ⊗ V ⊗ V
                let (_, col, _) = diff.triplets().next().expect("nonzero");
                let (i, j) = ((col / m) % m, col % m);
                offending = Some((i.min(j) + 1, i.max(j) + 1));
            }
        }
    }
    let mut commute_ok = true;
    if let VModuleSpec::Finite { a, .. } = spec {
        'outer: for i in 0..m {
            for j in i + 1..m {
                if a[i].compose(&a[j])? != a[j].compose(&a[i])? {
                    commute_ok = false;
                    if offending.is_none() {
                        offending = Some((i + 1, j + 1));
                    }
                    break 'outer;
                }
            }
        }
    }
    Ok(WallReport { wall_ok, commute_ok, offending })
}

/// True iff the module satisfies the wall condition; errors if the operator
/// check and the commutativity check disagree.
pub fn validate_module(spec: &VModuleSpec, yb: &YBData) -> Result<bool, HomologyError> {
    let rep = check_wall(spec, yb)?;
    if !rep.agree() {
        return Err(HomologyError::Postcondition(format!(
            "wall check ({}) and commutativity ({}) disagree",
            rep.wall_ok, rep.commute_ok
        )));
    }
    Ok(rep.wall_ok)
}

/// Validation that names the offending pair on failure.
pub fn require_valid(spec: &VModuleSpec, yb: &YBData) -> Result<(), HomologyError> {
    let rep = check_wall(spec, yb)?;
    if !rep.agree() {
        return Err(HomologyError::Postcondition("wall check and commutativity disagree".into()));
    }
    match rep.offending {
        None => Ok(()),
        Some((i, j)) => Err(HomologyError::WallCondition { i, j }),
    }
}

/// One randomized wall-condition trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallTrial {
    pub commuting_by_construction: bool,
    pub wall_ok: bool,
    pub commute_ok: bool,
}

impl WallTrial {
    pub fn agree(&self) -> bool {
        self.wall_ok == self.commute_ok && self.commute_ok == self.commuting_by_construction
    }
}

fn random_rational<R: Rng>(rng: &mut R) -> RatFunc {
    let p = rng.gen_range(-5i64..=5);
    let q = rng.gen_range(1i64..=4);
    RatFunc::from_int(p).checked_div(&RatFunc::from_int(q)).expect("nonzero denominator")
}

fn random_matrix<R: Rng>(rng: &mut R, l: usize) -> LinMap {
    let data: Vec<Vec<RatFunc>> = (0..l).map(|_| (0..l).map(|_| random_rational(rng)).collect()).collect();
    LinMap::from_dense(&data).expect("rectangular")
}

/// `c0 + c1 B + c2 B²` with random rational coefficients.
fn random_polynomial_in<R: Rng>(rng: &mut R, b: &LinMap) -> LinMap {
    let l = b.rows();
    let b2 = b.compose(b).expect("square");
    LinMap::scalar(l, &random_rational(rng))
        .add_scaled(&random_rational(rng), b)
        .and_then(|x| x.add_scaled(&random_rational(rng), &b2))
        .expect("same shape")
}

/// `trials` commuting modules (polynomials in one random `3×3` matrix) and
/// `trials` generic non-commuting ones, each run through both checks.
pub fn run_wall_trials(yb: &YBData, trials: usize, seed: u64) -> Result<Vec<WallTrial>, HomologyError> {
    let m = yb.m();
    let l = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * trials);
    for commuting in [true, false] {
        let mut made = 0;
        while made < trials {
            let a: Vec<LinMap> = if commuting {
                let b = random_matrix(&mut rng, l);
                (0..m).map(|_| random_polynomial_in(&mut rng, &b)).collect()
            } else {
                (0..m).map(|_| random_matrix(&mut rng, l)).collect()
            };
            let spec = VModuleSpec::finite(m, a)?;
            let rep = check_wall(&spec, yb)?;
            if !commuting && rep.commute_ok {
                // a random draw that happens to commute is not a generic sample
                continue;
            }
            out.push(WallTrial { commuting_by_construction: commuting, wall_ok: rep.wall_ok, commute_ok: rep.commute_ok });
            made += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> LinMap {
        let data: Vec<Vec<RatFunc>> =
            rows.iter().map(|r| r.iter().map(|&x| RatFunc::from_int(x)).collect()).collect();
        LinMap::from_dense(&data).unwrap()
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(monomials(3, 2).len(), 6);
    }

    #[test]
    fn action_is_row_of_a() {
        let spec = VModuleSpec::triangular_example();
        let act = spec.action(0);
        // e_2 · v_1 = row 2 of A_1 = e_3
        assert_eq!(act.column(3), crate::tensor::SparseVec::basis(3, 2));
        // e_1 · v_2 = e_1 + e_3
        let expect = crate::tensor::SparseVec::basis(3, 0).add(&crate::tensor::SparseVec::basis(3, 2));
        assert_eq!(act.column(1), expect);
    }

    #[test]
    fn wall_examples() {
        let yb3 = YBData::new(3).unwrap();
        assert!(validate_module(&VModuleSpec::triangular_example(), &yb3).unwrap());
        let yb2 = YBData::new(2).unwrap();
        assert!(validate_module(&VModuleSpec::zero_action(2, 2), &yb2).unwrap());
        let bad = VModuleSpec::finite(2, vec![mat(&[&[0, 1], &[0, 0]]), mat(&[&[0, 0], &[1, 0]])]).unwrap();
        let rep = check_wall(&bad, &yb2).unwrap();
        assert!(!rep.wall_ok && !rep.commute_ok);
        assert_eq!(rep.offending, Some((1, 2)));
        assert!(matches!(require_valid(&bad, &yb2), Err(HomologyError::WallCondition { i: 1, j: 2 })));
        assert!(validate_module(&VModuleSpec::free(2, 4).unwrap(), &yb2).unwrap());
    }

    #[test]
    fn shape_errors() {
        assert!(VModuleSpec::finite(2, vec![LinMap::identity(2)]).is_err());
        assert!(VModuleSpec::finite(2, vec![LinMap::identity(2), LinMap::zero(2, 3)]).is_err());
        assert!(VModuleSpec::finite(2, vec![LinMap::identity(2), LinMap::identity(3)]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let spec = VModuleSpec::triangular_example();
        let text = serde_json::to_string(&spec.to_json()).unwrap();
        assert_eq!(VModuleSpec::parse_json(&text).unwrap(), spec);
        let free = VModuleSpec::parse_json(r#"{"kind":"free","m":2}"#).unwrap();
        assert_eq!(free, VModuleSpec::Free { m: 2, max_total_degree: DEFAULT_TRUNCATION });
        let ints = VModuleSpec::parse_json(r#"{"kind":"finite","l":1,"m":2,"A":[[[1]],[["1/2"]]]}"#).unwrap();
        assert_eq!(ints.action(0).get(0, 1), RatFunc::parse("1/2").unwrap());
        let err = VModuleSpec::parse_json(r#"{"kind":"finite","l":2,"m":1,"A":[[["1","0"],["0"]]]}"#);
        assert!(matches!(err, Err(HomologyError::InvalidModule(msg)) if msg.contains("A[0][1]")));
        assert!(matches!(VModuleSpec::parse_json("{"), Err(HomologyError::Json(_))));
    }

    #[test]
    fn random_trials_agree() {
        let yb = YBData::new(2).unwrap();
        let trials = run_wall_trials(&yb, 3, 7).unwrap();
        assert_eq!(trials.len(), 6);
        assert!(trials.iter().all(WallTrial::agree));
    }
}
