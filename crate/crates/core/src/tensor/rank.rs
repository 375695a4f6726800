use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use super::elim::{rank_both, rank_eval_auto, rank_exact, rank_of_rows};
use super::linmap::{LinMap, SparseVec};
use super::subspace::Subspace;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    #[default]
    Exact,
    Eval,
    Both,
}

impl FromStr for RankMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(RankMode::Exact),
            "eval" => Ok(RankMode::Eval),
            "both" => Ok(RankMode::Both),
            other => Err(format!("unknown rank mode '{other}' (expected exact, eval or both)")),
        }
    }
}

/// A matrix whose evaluated rank disagreed with its exact rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankMismatch {
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    pub exact: usize,
    pub eval: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RankStats {
    pub exact_ranks: usize,
    pub eval_ranks: usize,
    pub cross_checked: usize,
    pub tripwires: usize,
    pub mismatches: Vec<RankMismatch>,
}

/// Routes rank computations through the selected mode and keeps a tally.
#[derive(Debug, Default)]
pub struct Ranker {
    mode: RankMode,
    exact: AtomicUsize,
    eval: AtomicUsize,
    checked: AtomicUsize,
    tripwires: AtomicUsize,
    mismatches: Mutex<Vec<RankMismatch>>,
}

impl Ranker {
    pub fn new(mode: RankMode) -> Self {
        Ranker { mode, ..Default::default() }
    }

    pub fn mode(&self) -> RankMode {
        self.mode
    }

    /// Rank of `f` over `Q(y)`.
    pub fn rank(&self, f: &LinMap, label: &str) -> usize {
        match self.mode {
            RankMode::Exact => {
                self.exact.fetch_add(1, Ordering::Relaxed);
                rank_exact(f)
            }
            RankMode::Eval => {
                self.eval.fetch_add(1, Ordering::Relaxed);
                match rank_eval_auto(f) {
                    Ok(ev) if !ev.varied => ev.rank,
                    other => {
                        // sampled ranks disagreed or sampling failed: confirm exactly
                        self.tripwires.fetch_add(1, Ordering::Relaxed);
                        self.exact.fetch_add(1, Ordering::Relaxed);
                        let exact = rank_exact(f);
                        let ev = other.ok().map(|e| e.rank);
                        if ev != Some(exact) {
                            self.record(label, f, exact, ev);
                        }
                        exact
                    }
                }
            }
            RankMode::Both => {
                self.exact.fetch_add(1, Ordering::Relaxed);
                self.eval.fetch_add(1, Ordering::Relaxed);
                self.checked.fetch_add(1, Ordering::Relaxed);
                match rank_both(f) {
                    Ok((exact, ev)) => {
                        if ev.rank != exact {
                            self.record(label, f, exact, Some(ev.rank));
                        }
                        exact
                    }
                    Err(_) => {
                        let exact = rank_exact(f);
                        self.record(label, f, exact, None);
                        exact
                    }
                }
            }
        }
    }

    /// Kernel of `f`; the dimension is cross-checked in the non-exact modes.
    pub fn kernel(&self, f: &LinMap, label: &str) -> Subspace {
        let k = Subspace::kernel(f);
        if self.mode != RankMode::Exact {
            let r = self.rank(f, label);
            if r + k.dim() != f.cols() {
                self.record(label, f, f.cols() - k.dim(), Some(r));
            }
        }
        k
    }

    /// Dimension of the span of `vectors` in an `ambient`-dimensional space.
    pub fn span_dim(&self, ambient: usize, vectors: &[SparseVec], label: &str) -> usize {
        if self.mode == RankMode::Exact {
            self.exact.fetch_add(1, Ordering::Relaxed);
            let rows: Vec<Vec<_>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
            return rank_of_rows(&rows, ambient);
        }
        let m = LinMap::from_columns(ambient, vectors.to_vec()).expect("vector dimensions agree");
        self.rank(&m, label)
    }

    fn record(&self, label: &str, f: &LinMap, exact: usize, eval: Option<usize>) {
        self.mismatches.lock().unwrap().push(RankMismatch {
            label: label.to_string(),
            rows: f.rows(),
            cols: f.cols(),
            exact,
            eval,
        });
    }

    pub fn stats(&self) -> RankStats {
        let mut mismatches = self.mismatches.lock().unwrap().clone();
        mismatches.sort_by(|a, b| a.label.cmp(&b.label));
        RankStats {
            exact_ranks: self.exact.load(Ordering::Relaxed),
            eval_ranks: self.eval.load(Ordering::Relaxed),
            cross_checked: self.checked.load(Ordering::Relaxed),
            tripwires: self.tripwires.load(Ordering::Relaxed),
            mismatches,
        }
    }
}
