//! Fraction-free sparse elimination.
//!
//! Rows over `Q(y)` are cleared to `Z[y]` and reduced with cross
//! multiplication, dividing every new row by the gcd of its entries. Matrices
//! are first split into connected components of the row/column incidence
//! graph so each component is eliminated on its own.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::linmap::{LinMap, SparseVec};
use super::TensorError;
use crate::scalar::{IntPoly, RatFunc};

pub(crate) type Row<E> = Vec<(usize, E)>;

/// Integral domain with a gcd, enough for fraction-free elimination.
pub(crate) trait ElimRing {
    type E: Clone + Send + Sync;
    fn is_zero(e: &Self::E) -> bool;
    /// 0 for units, 1 for other constants, 2 otherwise.
    fn class(e: &Self::E) -> u8;
    fn cost(e: &Self::E) -> u64;
    fn mul(a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(a: &Self::E) -> Self::E;
    /// Divide a nonzero row by the gcd of its entries.
    fn normalize(row: &mut Row<Self::E>);
}

pub(crate) struct PolyRing;

impl ElimRing for PolyRing {
    type E = IntPoly;

    fn is_zero(e: &IntPoly) -> bool {
        e.is_zero()
    }

    fn class(e: &IntPoly) -> u8 {
        if !e.is_constant() {
            2
        } else if e.leading().is_some_and(|c| c.magnitude().is_one()) {
            0
        } else {
            1
        }
    }

    fn cost(e: &IntPoly) -> u64 {
        e.size_hint()
    }

    fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
        a * b
    }

    fn sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
        a - b
    }

    fn neg(a: &IntPoly) -> IntPoly {
        -a
    }

    fn normalize(row: &mut Row<IntPoly>) {
        if row.is_empty() {
            return;
        }
        let mut c = BigInt::zero();
        for (_, e) in row.iter() {
            c = c.gcd(&e.content());
            if c.is_one() {
                break;
            }
        }
        let mut g = IntPoly::one();
        if row.iter().all(|(_, e)| !e.is_constant()) {
            let shortest = row.iter().min_by_key(|(_, e)| e.degree()).unwrap();
            g = shortest.1.primitive();
            for (_, e) in row.iter() {
                if g.is_constant() {
                    break;
                }
                g = g.gcd(e);
            }
        }
        if row[0].1.leading().unwrap().is_negative() {
            c = -c;
        }
        let c_unit = c.is_one();
        let g_unit = g.is_constant();
        if c_unit && g_unit {
            return;
        }
        for (_, e) in row.iter_mut() {
            if !g_unit {
                *e = e.div_exact(&g).expect("row gcd divides entries");
            }
            if !c_unit {
                *e = e.div_scalar_exact(&c);
            }
        }
    }
}

pub(crate) struct IntRing;

impl ElimRing for IntRing {
    type E = BigInt;

    fn is_zero(e: &BigInt) -> bool {
        e.is_zero()
    }

    fn class(e: &BigInt) -> u8 {
        if e.magnitude().is_one() {
            0
        } else {
            1
        }
    }

    fn cost(e: &BigInt) -> u64 {
        e.bits()
    }

    fn mul(a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn sub(a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn neg(a: &BigInt) -> BigInt {
        -a
    }

    fn normalize(row: &mut Row<BigInt>) {
        let mut g = BigInt::zero();
        for (_, e) in row.iter() {
            g = g.gcd(e);
            if g.is_one() {
                return;
            }
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for (_, e) in row.iter_mut() {
            *e /= &g;
        }
    }
}

pub(crate) fn entry_at<E>(row: &Row<E>, col: usize) -> Option<&E> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|p| &row[p].1)
}

/// Eliminate `col` from `target` using `pivot`.
pub(crate) fn combine<R: ElimRing>(target: &Row<R::E>, pivot: &Row<R::E>, col: usize) -> Row<R::E> {
    let p = entry_at(pivot, col).expect("pivot entry present");
    let q = entry_at(target, col).expect("target entry present");
    let (tscale, pscale) = if R::class(p) == 0 {
        // p = ±1, so p^{-1} = p and target - q p pivot clears the column
        (None, R::mul(q, p))
    } else {
        (Some(p.clone()), q.clone())
    };
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut a, mut b) = (target.iter().peekable(), pivot.iter().peekable());
    let scaled = |x: &R::E| match &tscale {
        Some(s) => R::mul(s, x),
        None => x.clone(),
    };
    loop {
        let next = match (a.peek(), b.peek()) {
            (Some((i, _)), Some((j, _))) => {
                if i < j {
                    1
                } else if j < i {
                    2
                } else {
                    3
                }
            }
            (Some(_), None) => 1,
            (None, Some(_)) => 2,
            (None, None) => break,
        };
        match next {
            1 => {
                let (i, x) = a.next().unwrap();
                out.push((*i, scaled(x)));
            }
            2 => {
                let (j, z) = b.next().unwrap();
                out.push((*j, R::neg(&R::mul(&pscale, z))));
            }
            _ => {
                let (i, x) = a.next().unwrap();
                let (_, z) = b.next().unwrap();
                if *i == col {
                    continue;
                }
                let v = R::sub(&scaled(x), &R::mul(&pscale, z));
                if !R::is_zero(&v) {
                    out.push((*i, v));
                }
            }
        }
    }
    R::normalize(&mut out);
    out
}

/// Connected components of the row/column graph; returns row groups.
fn components<E>(rows: &[Row<E>], ncols: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for row in rows {
        if let Some(&(first, _)) = row.first() {
            let a = find(&mut parent, first);
            for (c, _) in &row[1..] {
                let b = find(&mut parent, *c);
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, row) in rows.iter().enumerate() {
        if let Some(&(first, _)) = row.first() {
            let root = find(&mut parent, first);
            groups.entry(root).or_default().push(i);
        }
    }
    groups.into_values().collect()
}

const PAR_ROWS: usize = 48;

fn eliminate_column<R: ElimRing>(rows: &mut [Row<R::E>], pivot: &Row<R::E>, col: usize) {
    let step = |row: &mut Row<R::E>| {
        if entry_at(row, col).is_some() {
            *row = combine::<R>(row, pivot, col);
        }
    };
    if rows.len() >= PAR_ROWS {
        rows.par_iter_mut().for_each(step);
    } else {
        rows.iter_mut().for_each(step);
    }
}

/// Rank of one component with free (Markowitz-style) pivoting.
fn rank_block<R: ElimRing>(mut rows: Vec<Row<R::E>>, ncols: usize, cap: usize) -> usize {
    let mut rank = 0;
    let mut counts = vec![0usize; ncols];
    rows.retain(|r| !r.is_empty());
    while !rows.is_empty() && rank < cap {
        counts.iter_mut().for_each(|c| *c = 0);
        for row in &rows {
            for (c, _) in row {
                counts[*c] += 1;
            }
        }
        let mut best: Option<((u8, usize, u64), usize, usize)> = None;
        for (ri, row) in rows.iter().enumerate() {
            for (c, e) in row {
                let key = (R::class(e), (row.len() - 1) * (counts[*c] - 1), R::cost(e));
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, ri, *c));
                }
            }
        }
        let (_, ri, col) = best.unwrap();
        let pivot = rows.swap_remove(ri);
        rank += 1;
        eliminate_column::<R>(&mut rows, &pivot, col);
        rows.retain(|r| !r.is_empty());
    }
    rank
}

/// Echelon form of one component, columns processed in increasing order,
/// fully reduced. Each returned row starts at its pivot.
fn rref_block<R: ElimRing>(mut rows: Vec<Row<R::E>>) -> Vec<Row<R::E>> {
    let mut pivots: Vec<Row<R::E>> = Vec::new();
    rows.retain(|r| !r.is_empty());
    while !rows.is_empty() {
        let lead = rows.iter().map(|r| r[0].0).min().unwrap();
        let ri = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r[0].0 == lead)
            .min_by_key(|(_, r)| (R::class(&r[0].1), r.len(), R::cost(&r[0].1)))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = rows.swap_remove(ri);
        eliminate_column::<R>(&mut rows, &pivot, lead);
        rows.retain(|r| !r.is_empty());
        pivots.push(pivot);
    }
    for i in (0..pivots.len()).rev() {
        let col = pivots[i][0].0;
        let (head, tail) = pivots.split_at_mut(i);
        let pivot = &tail[0];
        eliminate_column::<R>(head, pivot, col);
    }
    pivots
}

/// Clear denominators of a row and remove common factors.
pub(crate) fn clear_row(row: &[(usize, RatFunc)]) -> Row<IntPoly> {
    let mut l = IntPoly::one();
    for (_, v) in row {
        let d = v.denom();
        if d.is_one() {
            continue;
        }
        let g = l.gcd(d);
        l = &l * &d.div_exact(&g).expect("primitive gcd divides");
    }
    let mut out: Row<IntPoly> = if l.is_one() {
        row.iter().map(|(c, v)| (*c, v.numer().clone())).collect()
    } else {
        row.iter()
            .map(|(c, v)| (*c, v.numer() * &l.div_exact(v.denom()).expect("common denominator")))
            .collect()
    };
    PolyRing::normalize(&mut out);
    out
}

fn split<E: Clone>(rows: Vec<Row<E>>, ncols: usize) -> Vec<Vec<Row<E>>> {
    let groups = components(&rows, ncols);
    let mut slots: Vec<Option<Row<E>>> = rows.into_iter().map(Some).collect();
    groups
        .into_iter()
        .map(|g| g.into_iter().map(|i| slots[i].take().unwrap()).collect())
        .collect()
}

/// Rank over `Q(y)` of the matrix whose rows are given.
pub(crate) fn rank_of_rows(rows: &[Vec<(usize, RatFunc)>], ncols: usize) -> usize {
    let cleared: Vec<Row<IntPoly>> = rows.par_iter().map(|r| clear_row(r)).collect();
    split(cleared, ncols)
        .into_par_iter()
        .map(|block| {
            let cap = block.len();
            rank_block::<PolyRing>(block, ncols, cap)
        })
        .sum()
}

/// Exact rank over `Q(y)`.
pub fn rank_exact(f: &LinMap) -> usize {
    if f.rows() <= f.cols() {
        rank_of_rows(&f.to_rows(), f.cols())
    } else {
        rank_of_rows(&f.transpose().to_rows(), f.rows())
    }
}

/// Reduced echelon rows over `Q(y)`: unit pivots at the first entry of each
/// row, pivots increasing, pivot columns cleared elsewhere. With `reversed`,
/// pivots are chosen preferring the highest column indices instead.
pub(crate) fn rref_rows(
    rows: &[Vec<(usize, RatFunc)>],
    ncols: usize,
    reversed: bool,
) -> Vec<Vec<(usize, RatFunc)>> {
    let flip = |c: usize| if reversed { ncols - 1 - c } else { c };
    let cleared: Vec<Row<IntPoly>> = rows
        .par_iter()
        .map(|r| {
            let mut row = clear_row(r);
            if reversed {
                row.iter_mut().for_each(|e| e.0 = flip(e.0));
                row.reverse();
            }
            row
        })
        .collect();
    let blocks: Vec<Vec<Row<IntPoly>>> =
        split(cleared, ncols).into_par_iter().map(rref_block::<PolyRing>).collect();
    let mut out: Vec<Vec<(usize, RatFunc)>> = blocks
        .into_iter()
        .flatten()
        .map(|row| {
            let lead = row[0].1.clone();
            let mut r: Vec<(usize, RatFunc)> = row
                .into_iter()
                .map(|(c, e)| (flip(c), RatFunc::new(e, lead.clone()).expect("pivot is nonzero")))
                .collect();
            if reversed {
                r.reverse();
            }
            r
        })
        .collect();
    if reversed {
        out.sort_by_key(|r| std::cmp::Reverse(r.last().unwrap().0));
    } else {
        out.sort_by_key(|r| r[0].0);
    }
    out
}

/// Canonical basis of the right kernel: one vector per free column `f`, with
/// a 1 at `f` as its first nonzero entry.
pub fn kernel_vectors(f: &LinMap) -> Vec<SparseVec> {
    let n = f.cols();
    let reduced = rref_rows(&f.to_rows(), n, true);
    let mut is_pivot = vec![false; n];
    for row in &reduced {
        // with reversed order the pivot is the last entry
        is_pivot[row.last().unwrap().0] = true;
    }
    let mut terms: Vec<Vec<(usize, RatFunc)>> = vec![Vec::new(); n];
    for row in &reduced {
        let p = row.last().unwrap().0;
        for (c, v) in &row[..row.len() - 1] {
            terms[*c].push((p, -v));
        }
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|c| {
            let mut t = std::mem::take(&mut terms[c]);
            t.push((c, RatFunc::one()));
            t.sort_by_key(|e| e.0);
            SparseVec::from_sorted(n, t)
        })
        .collect()
}

/// First `k` primes.
pub fn primes(k: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(k);
    let mut c = 2u64;
    while out.len() < k {
        if (2..).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            out.push(BigInt::from(c));
        }
        c += 1;
    }
    out
}

/// Upper bound on the number of roots of a nonvanishing maximal minor.
fn degree_bound(rows: &[Row<IntPoly>]) -> usize {
    let r = rows.len().min(rows.iter().flat_map(|row| row.iter().map(|e| e.0)).collect::<std::collections::BTreeSet<_>>().len());
    let mut row_deg: Vec<usize> = rows.iter().map(|row| row.iter().map(|e| e.1.degree()).max().unwrap_or(0)).collect();
    let mut col_deg: std::collections::BTreeMap<usize, usize> = Default::default();
    for row in rows {
        for (c, e) in row {
            let d = col_deg.entry(*c).or_insert(0);
            *d = (*d).max(e.degree());
        }
    }
    let mut col_deg: Vec<usize> = col_deg.into_values().collect();
    row_deg.sort_unstable_by(|a, b| b.cmp(a));
    col_deg.sort_unstable_by(|a, b| b.cmp(a));
    let a: usize = row_deg.iter().take(r).sum();
    let b: usize = col_deg.iter().take(r).sum();
    a.min(b)
}

/// Outcome of an evaluation-based rank computation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalRank {
    pub rank: usize,
    pub points_used: usize,
    pub poles_skipped: usize,
    /// True when the sampled ranks were not all equal.
    pub varied: bool,
}

impl EvalRank {
    fn absorb(&mut self, other: EvalRank) {
        self.rank += other.rank;
        self.points_used = self.points_used.max(other.points_used);
        self.poles_skipped += other.poles_skipped;
        self.varied |= other.varied;
    }
}

fn has_pole(row: &[(usize, RatFunc)], p: &BigInt) -> bool {
    row.iter().any(|(_, v)| !v.is_polynomial() && v.denom().eval_int(p).is_zero())
}

fn oriented_blocks(f: &LinMap) -> (Vec<Vec<Row<RatFunc>>>, usize) {
    let (rows, ncols) = if f.rows() <= f.cols() {
        (f.to_rows(), f.cols())
    } else {
        (f.transpose().to_rows(), f.rows())
    };
    let rows: Vec<Row<RatFunc>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    (split(rows, ncols), ncols)
}

/// Rank over `Q(y)` from ranks of the integer matrices obtained by
/// substituting `y = p` for `p` in `points`.
///
/// Per component, `D + 1` pole-free points are used, where `D` bounds the
/// degree of a nonvanishing maximal minor, unless the sampled rank already
/// reaches the component size. Evaluated ranks never exceed the true rank,
/// so the maximum is exact.
pub fn rank_eval(f: &LinMap, points: &[BigInt]) -> Result<EvalRank, TensorError> {
    let (blocks, ncols) = oriented_blocks(f);
    let results: Vec<Result<EvalRank, TensorError>> =
        blocks.par_iter().map(|b| eval_block(b, ncols, points, None)).collect();
    let mut total = EvalRank::default();
    for r in results {
        total.absorb(r?);
    }
    Ok(total)
}

/// Exact rank together with the evaluated rank, component by component.
/// Sampling stops once the exact rank of a component is reached; the
/// evaluated rank differs from the exact one only if the sample budget of
/// `D + 1` points is exhausted first, which the degree bound rules out.
pub fn rank_both(f: &LinMap) -> Result<(usize, EvalRank), TensorError> {
    let (blocks, ncols) = oriented_blocks(f);
    let results: Vec<Result<(usize, EvalRank), TensorError>> = blocks
        .into_par_iter()
        .map(|b| {
            let cleared: Vec<Row<IntPoly>> = b.iter().map(|r| clear_row(r)).collect();
            let cap = cleared.len();
            let exact = rank_block::<PolyRing>(cleared, ncols, cap);
            let points = primes(sample_budget(&b));
            let ev = eval_block(&b, ncols, &points, Some(exact))?;
            Ok((exact, ev))
        })
        .collect();
    let mut exact = 0;
    let mut total = EvalRank::default();
    for r in results {
        let (e, ev) = r?;
        exact += e;
        total.absorb(ev);
    }
    Ok((exact, total))
}

/// Rank by evaluation with an automatically sized prime sample.
pub fn rank_eval_auto(f: &LinMap) -> Result<EvalRank, TensorError> {
    let (blocks, ncols) = oriented_blocks(f);
    let results: Vec<Result<EvalRank, TensorError>> = blocks
        .par_iter()
        .map(|b| eval_block(b, ncols, &primes(sample_budget(b)), None))
        .collect();
    let mut total = EvalRank::default();
    for r in results {
        total.absorb(r?);
    }
    Ok(total)
}

/// Enough primes to cover the degree bound plus every possible pole.
fn sample_budget(block: &[Row<RatFunc>]) -> usize {
    let cleared: Vec<Row<IntPoly>> = block.iter().map(|r| clear_row(r)).collect();
    let poles: usize = block
        .iter()
        .flat_map(|r| r.iter().map(|(_, v)| v.denom().degree()))
        .sum();
    degree_bound(&cleared) + 1 + poles
}

fn eval_block(
    block: &[Row<RatFunc>],
    ncols: usize,
    points: &[BigInt],
    stop_at: Option<usize>,
) -> Result<EvalRank, TensorError> {
    let cleared: Vec<Row<IntPoly>> = block.iter().map(|r| clear_row(r)).collect();
    let width = cleared
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let cap = stop_at.unwrap_or(cleared.len().min(width));
    let needed = degree_bound(&cleared) + 1;
    let mut seen: Option<usize> = None;
    let mut out = EvalRank::default();
    for p in points {
        if block.iter().any(|r| has_pole(r, p)) {
            out.poles_skipped += 1;
            continue;
        }
        let evaluated: Vec<Row<BigInt>> = cleared
            .iter()
            .map(|r| {
                let mut row: Row<BigInt> = r
                    .iter()
                    .filter_map(|(c, e)| {
                        let v = e.eval_int(p);
                        (!v.is_zero()).then_some((*c, v))
                    })
                    .collect();
                IntRing::normalize(&mut row);
                row
            })
            .collect();
        let r = rank_block::<IntRing>(evaluated, ncols, usize::MAX);
        out.points_used += 1;
        if seen.is_some_and(|s| s != r) {
            out.varied = true;
        }
        seen = Some(r);
        out.rank = out.rank.max(r);
        if out.rank >= cap || out.points_used >= needed {
            return Ok(out);
        }
    }
    Err(TensorError::TooFewPoints { needed, valid: out.points_used })
}
