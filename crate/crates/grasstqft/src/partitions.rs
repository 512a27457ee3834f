//! Young-diagram combinatorics.
//!
//! `Partition` and `Multipartition` index the TQFT basis: diagrams with at
//! most `r` rows and at most `k` columns form the set P_{r,k}. The star
//! conjugate and the transpose are the two involutions the theory needs, and
//! `TupleEnumerator` streams the distinct-root tuples underlying every
//! roots-of-unity sum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing row lengths, trailing zeros trimmed. The box bounds
/// (r, k) are contextual and supplied at call sites, so the same diagram can
/// be read in P_{r,k} and in P_{k,r} for level-rank checks.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    rows: Vec<u32>,
}

impl Partition {
    pub fn new(mut rows: Vec<u32>) -> Result<Partition> {
        if !rows.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::NotAPartition(rows));
        }
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Ok(Partition { rows })
    }

    pub fn empty() -> Partition {
        Partition { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Row length with the convention λ_i = 0 beyond the last row (0-based).
    pub fn row(&self, i: usize) -> u32 {
        self.rows.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Total number of boxes.
    pub fn weight(&self) -> u64 {
        self.rows.iter().map(|&x| x as u64).sum()
    }

    pub fn fits(&self, r: u32, k: u32) -> bool {
        self.rows.len() <= r as usize && self.row(0) <= k
    }

    pub fn ensure_fits(&self, r: u32, k: u32) -> Result<()> {
        if self.fits(r, k) {
            Ok(())
        } else {
            Err(Error::PartitionOutOfBox {
                rows: self.rows.clone(),
                r,
                k,
            })
        }
    }

    /// The star conjugate (k − λ_r, ..., k − λ_1) inside the r × k box.
    pub fn star(&self, r: u32, k: u32) -> Result<Partition> {
        self.ensure_fits(r, k)?;
        let rows = (0..r as usize)
            .rev()
            .map(|i| k - self.row(i))
            .collect::<Vec<_>>();
        Partition::new(rows)
    }

    /// Column-length diagram; maps P_{r,k} onto P_{k,r}.
    pub fn transpose(&self) -> Partition {
        let cols = self.row(0) as usize;
        let rows = (0..cols)
            .map(|j| self.rows.iter().filter(|&&x| x as usize > j).count() as u32)
            .collect::<Vec<_>>();
        Partition::new(rows).expect("transpose of a partition is a partition")
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(rows: Vec<u32>) -> Result<Partition> {
        Partition::new(rows)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.rows
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// Graded lexicographic: by weight, then lexicographic on rows. This is the
/// basis order used everywhere (matrix serialization, cache files).
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.weight(), &self.rows).cmp(&(other.weight(), &other.rows))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An ordered tuple of partitions; points of the labeling set are labeled,
/// so permutation symmetry of invariants is a theorem to test, not a
/// normalization applied here.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Multipartition {
    parts: Vec<Partition>,
}

impl Multipartition {
    pub fn new(parts: Vec<Partition>) -> Multipartition {
        Multipartition { parts }
    }

    pub fn empty() -> Multipartition {
        Multipartition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[Partition] {
        &self.parts
    }

    /// Number of components (empty partitions count).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total number of boxes in all parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(Partition::weight).sum()
    }

    pub fn fits(&self, r: u32, k: u32) -> bool {
        self.parts.iter().all(|p| p.fits(r, k))
    }

    pub fn ensure_fits(&self, r: u32, k: u32) -> Result<()> {
        for p in &self.parts {
            p.ensure_fits(r, k)?;
        }
        Ok(())
    }

    /// Componentwise star conjugate.
    pub fn star(&self, r: u32, k: u32) -> Result<Multipartition> {
        let parts = self
            .parts
            .iter()
            .map(|p| p.star(r, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Multipartition { parts })
    }

    /// Componentwise transpose.
    pub fn transpose(&self) -> Multipartition {
        Multipartition {
            parts: self.parts.iter().map(Partition::transpose).collect(),
        }
    }

    /// Concatenation (disjoint union of labeled points).
    pub fn concat(&self, other: &Multipartition) -> Multipartition {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Multipartition { parts }
    }

    pub fn with_part(&self, part: &Partition) -> Multipartition {
        let mut parts = self.parts.clone();
        parts.push(part.clone());
        Multipartition { parts }
    }
}

impl fmt::Debug for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, "]")
    }
}

/// All of P_{r,k} in graded lexicographic order; C(r+k, r) diagrams.
pub fn enumerate_basis(r: u32, k: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rows: Vec<u32> = Vec::new();
    fn rec(out: &mut Vec<Partition>, rows: &mut Vec<u32>, r: u32, max: u32) {
        out.push(Partition::new(rows.clone()).unwrap());
        if rows.len() < r as usize {
            for v in (1..=max).rev() {
                rows.push(v);
                rec(out, rows, r, v);
                rows.pop();
            }
        }
    }
    rec(&mut out, &mut rows, r, k);
    out.sort();
    debug_assert_eq!(out.len() as u64, binomial((r + k) as u64, r as u64));
    out
}

/// Binomial coefficient, panicking on u64 overflow (far beyond any supported
/// envelope).
pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc
            .checked_mul(n - i)
            .expect("binomial overflow")
            / (i + 1);
    }
    acc
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TupleMode {
    /// Subsets {a_1 < ... < a_r} of {1, ..., n}.
    Subsets,
    /// Integer vectors n_1 > ... > n_r with 0 ≤ n_i < n.
    DecreasingVectors,
}

/// Streams all C(n, r) distinct-entry tuples in a fixed lexicographic order,
/// splittable into contiguous chunks for parallel consumption.
#[derive(Clone)]
pub struct TupleEnumerator {
    n: u32,
    r: u32,
    mode: TupleMode,
    /// Ascending 0-based combination driving the stream.
    state: Option<Vec<u32>>,
    remaining: u64,
}

impl TupleEnumerator {
    pub fn new(n: u32, r: u32, mode: TupleMode) -> Result<TupleEnumerator> {
        if r > n {
            return Err(Error::IndexOutOfRange {
                index: r as usize,
                limit: n as usize,
            });
        }
        Ok(TupleEnumerator {
            n,
            r,
            mode,
            state: Some((0..r).collect()),
            remaining: binomial(n as u64, r as u64),
        })
    }

    pub fn total(n: u32, r: u32) -> u64 {
        binomial(n as u64, r as u64)
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Split the remaining stream into at most `chunks` contiguous pieces.
    pub fn split(self, chunks: usize) -> Vec<TupleEnumerator> {
        let chunks = chunks.max(1) as u64;
        let total = self.remaining;
        if total == 0 {
            return vec![];
        }
        let consumed = binomial(self.n as u64, self.r as u64) - total;
        let per = total.div_ceil(chunks);
        let mut out = Vec::new();
        let mut start = consumed;
        while start < consumed + total {
            let len = per.min(consumed + total - start);
            out.push(TupleEnumerator {
                n: self.n,
                r: self.r,
                mode: self.mode,
                state: Some(unrank_combination(self.n, self.r, start)),
                remaining: len,
            });
            start += len;
        }
        out
    }
}

/// The combination of lexicographic rank `index` among ascending 0-based
/// r-combinations of {0, ..., n-1}.
fn unrank_combination(n: u32, r: u32, mut index: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    let mut x = 0u32;
    for j in 0..r {
        loop {
            let c = binomial((n - 1 - x) as u64, (r - 1 - j) as u64);
            if index < c {
                out.push(x);
                x += 1;
                break;
            }
            index -= c;
            x += 1;
        }
    }
    out
}

fn next_combination(state: &mut Vec<u32>, n: u32) -> bool {
    let r = state.len();
    if r == 0 {
        return false;
    }
    let mut i = r;
    while i > 0 {
        i -= 1;
        if state[i] < n - (r - i) as u32 {
            state[i] += 1;
            for j in i + 1..r {
                state[j] = state[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for TupleEnumerator {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.remaining == 0 {
            return None;
        }
        let state = self.state.as_mut()?;
        let item = match self.mode {
            TupleMode::Subsets => state.iter().map(|&x| x + 1).collect(),
            TupleMode::DecreasingVectors => state.iter().rev().copied().collect(),
        };
        self.remaining -= 1;
        if !next_combination(state, self.n) {
            self.state = None;
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[u32]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn basis_enumeration() {
        let basis = enumerate_basis(2, 2);
        let expected: Vec<Partition> = vec![
            p(&[]),
            p(&[1]),
            p(&[1, 1]),
            p(&[2]),
            p(&[2, 1]),
            p(&[2, 2]),
        ];
        assert_eq!(basis, expected);

        assert_eq!(
            enumerate_basis(1, 3),
            vec![p(&[]), p(&[1]), p(&[2]), p(&[3])]
        );
        assert_eq!(enumerate_basis(3, 0), vec![p(&[])]);

        for r in 1..=6u32 {
            for k in 0..=6u32 {
                if r + k > 7 {
                    continue;
                }
                let basis = enumerate_basis(r, k);
                assert_eq!(basis.len() as u64, binomial((r + k) as u64, r as u64));
                assert!(basis.windows(2).all(|w| w[0] < w[1]), "strict graded lex");
                assert!(basis.iter().all(|q| q.fits(r, k)));
            }
        }
    }

    #[test]
    fn star_examples() {
        assert_eq!(p(&[2, 0]).star(2, 3).unwrap(), p(&[3, 1]));
        assert_eq!(Partition::empty().star(2, 2).unwrap(), p(&[2, 2]));
        for lam in enumerate_basis(3, 3) {
            assert_eq!(lam.star(3, 3).unwrap().star(3, 3).unwrap(), lam);
            assert!(lam.star(3, 3).unwrap().fits(3, 3));
            assert_eq!(
                lam.star(3, 3).unwrap().weight(),
                9 - lam.weight(),
                "|star| = rk - |lambda|"
            );
        }
        assert!(p(&[4]).star(2, 3).is_err());
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
        let basis = enumerate_basis(2, 3);
        let mut images: Vec<Partition> = basis.iter().map(|q| q.transpose()).collect();
        for (lam, im) in basis.iter().zip(&images) {
            assert!(im.fits(3, 2));
            assert_eq!(&im.transpose(), lam);
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), basis.len(), "transpose is a bijection");
    }

    #[test]
    fn multipartition_weight() {
        let mp = Multipartition::new(vec![p(&[2, 1]), p(&[1])]);
        assert_eq!(mp.weight(), 4);
        assert_eq!(Multipartition::empty().weight(), 0);

        // weight(mp) + weight(mp*) = parts * r * k, componentwise star.
        let samples = vec![
            Multipartition::new(vec![p(&[2, 1])]),
            Multipartition::new(vec![p(&[1]), p(&[2, 2])]),
            Multipartition::new(vec![p(&[]), p(&[1, 1]), p(&[2])]),
        ];
        for mp in samples {
            let starred = mp.star(2, 2).unwrap();
            assert_eq!(
                mp.weight() + starred.weight(),
                mp.len() as u64 * 2 * 2,
                "{mp}"
            );
        }
    }

    #[test]
    fn multipartition_serde() {
        let mp = Multipartition::new(vec![p(&[2, 1]), p(&[])]);
        let json = serde_json::to_string(&mp).unwrap();
        assert_eq!(json, "[[2,1],[]]");
        let back: Multipartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, mp);
        assert!(serde_json::from_str::<Multipartition>("[[1,2]]").is_err());
        assert!(serde_json::from_str::<Partition>("[2,1]").is_ok());
    }

    #[test]
    fn tuple_enumeration() {
        let items: Vec<Vec<u32>> = TupleEnumerator::new(3, 2, TupleMode::Subsets)
            .unwrap()
            .collect();
        assert_eq!(items, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);

        let items: Vec<Vec<u32>> = TupleEnumerator::new(4, 4, TupleMode::Subsets)
            .unwrap()
            .collect();
        assert_eq!(items, vec![vec![1, 2, 3, 4]]);

        assert_eq!(
            TupleEnumerator::new(7, 3, TupleMode::Subsets)
                .unwrap()
                .count(),
            35
        );

        for n in 0..=10u32 {
            for r in 0..=n {
                for mode in [TupleMode::Subsets, TupleMode::DecreasingVectors] {
                    let e = TupleEnumerator::new(n, r, mode).unwrap();
                    let items: Vec<Vec<u32>> = e.collect();
                    assert_eq!(items.len() as u64, binomial(n as u64, r as u64));
                    let mut dedup = items.clone();
                    dedup.sort();
                    dedup.dedup();
                    assert_eq!(dedup.len(), items.len(), "no repeats across the stream");
                }
            }
        }

        let dec: Vec<Vec<u32>> = TupleEnumerator::new(4, 2, TupleMode::DecreasingVectors)
            .unwrap()
            .collect();
        assert!(dec.iter().all(|v| v[0] > v[1] && v[0] < 4));
    }

    #[test]
    fn tuple_split_preserves_stream() {
        for chunks in 1..=7usize {
            let whole: Vec<Vec<u32>> = TupleEnumerator::new(8, 3, TupleMode::Subsets)
                .unwrap()
                .collect();
            let split = TupleEnumerator::new(8, 3, TupleMode::Subsets)
                .unwrap()
                .split(chunks);
            assert!(split.len() <= chunks);
            let glued: Vec<Vec<u32>> = split.into_iter().flatten().collect();
            assert_eq!(glued, whole, "chunks={chunks}");
        }
        // Splitting an r = 0 enumerator still yields the single empty tuple.
        let glued: Vec<Vec<u32>> = TupleEnumerator::new(5, 0, TupleMode::Subsets)
            .unwrap()
            .split(3)
            .into_iter()
            .flatten()
            .collect();
        assert_eq!(glued, vec![Vec::<u32>::new()]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(TupleEnumerator::new(3, 4, TupleMode::Subsets).is_err());
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
    }
}
