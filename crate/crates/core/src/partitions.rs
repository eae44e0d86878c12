//! Set partitions of `{1..n}` and the index sets attached to them.
//!
//! A [`SetPartition`] is stored as its restricted growth string: element
//! `j` carries the index of its block, blocks numbered by least element.
//! That labelling is canonical, so derived equality and hashing are exact.

use std::fmt;
use std::str::FromStr;

use crate::error::{arg, Error, Result};

/// Default ceiling on `n` for full enumeration (Bell(10) = 115975).
pub const DEFAULT_PARTITION_GUARD: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<u8>,
}

impl SetPartition {
    /// Builds from arbitrary block labels, one per element, renumbering
    /// blocks by first occurrence.
    pub fn from_labels<T: Copy + Eq>(raw: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let labels = raw
            .iter()
            .map(|x| match seen.iter().position(|y| y == x) {
                Some(i) => i as u8,
                None => {
                    seen.push(*x);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        SetPartition { labels }
    }

    /// Builds from 1-based blocks; they must cover `{1..n}` disjointly.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return arg("empty block");
            }
            for &j in block {
                if j == 0 || j > n {
                    return arg(format!("element {j} outside 1..{n}"));
                }
                if raw[j - 1] != usize::MAX {
                    return arg(format!("element {j} appears twice"));
                }
                raw[j - 1] = b;
            }
        }
        if let Some(j) = raw.iter().position(|&b| b == usize::MAX) {
            return arg(format!("element {} not covered", j + 1));
        }
        Ok(Self::from_labels(&raw))
    }

    /// `0_n`: all singletons.
    pub fn zero(n: usize) -> Self {
        SetPartition {
            labels: (0..n as u8).collect(),
        }
    }

    /// `1_n`: a single block.
    pub fn one(n: usize) -> Self {
        SetPartition { labels: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Restricted growth string, 0-based.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Index of the block containing 1-based element `j`.
    pub fn block_index(&self, j: usize) -> usize {
        self.labels[j - 1] as usize
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.labels[a - 1] == self.labels[b - 1]
    }

    /// Blocks as ascending 1-based lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i + 1);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.num_blocks() == self.n()
    }

    pub fn is_one(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// Map each element through `f` (a bijection of `{1..n}`).
    fn relabel(&self, f: impl Fn(usize) -> usize) -> SetPartition {
        let mut raw = vec![0u8; self.n()];
        for j in 1..=self.n() {
            raw[f(j) - 1] = self.labels[j - 1];
        }
        Self::from_labels(&raw)
    }

    /// `ℓ(π)` with `ℓ(j) = j − 1 mod n`, so `1 ↦ n`.
    pub fn rotate_left(&self) -> SetPartition {
        let n = self.n();
        self.relabel(|j| if j == 1 { n } else { j - 1 })
    }

    /// `ℓᵏ(π)`.
    pub fn rotate_left_by(&self, k: usize) -> SetPartition {
        let n = self.n();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        self.relabel(|j| (j + n - 1 - k) % n + 1)
    }

    /// Restriction to `keep` (1-based), relabelled order-preservingly.
    pub fn restrict(&self, keep: &[usize]) -> Result<SetPartition> {
        if keep.is_empty() {
            return arg("restriction to the empty set");
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep[0] == 0 || *keep.last().unwrap() > self.n() {
            return arg(format!("restriction set not inside 1..{}", self.n()));
        }
        let raw: Vec<u8> = keep.iter().map(|&j| self.labels[j - 1]).collect();
        Ok(Self::from_labels(&raw))
    }

    /// Restriction to the contiguous range `lo..=hi`.
    pub fn restrict_range(&self, lo: usize, hi: usize) -> SetPartition {
        Self::from_labels(&self.labels[lo - 1..hi])
    }

    /// Removes `k + 1`, merging it into `k`; requires `k ~ k+1`.
    pub fn glue(&self, k: usize) -> SetPartition {
        debug_assert!(self.same_block(k, k + 1));
        let mut raw = self.labels.clone();
        raw.remove(k);
        Self::from_labels(&raw)
    }

    /// `π₁ ⊕ π₂`: `π₂` translated to the right of `π₁`.
    pub fn direct_sum(&self, other: &SetPartition) -> SetPartition {
        let shift = self.num_blocks() as u8;
        let raw: Vec<u8> = self
            .labels
            .iter()
            .copied()
            .chain(other.labels.iter().map(|&l| l + shift))
            .collect();
        Self::from_labels(&raw)
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.n() != other.n() {
            return arg(format!("join of partitions of {} and {}", self.n(), other.n()));
        }
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for labels in [&self.labels, &other.labels] {
            let mut first: Vec<Option<usize>> = vec![None; n];
            for (i, &l) in labels.iter().enumerate() {
                match first[l as usize] {
                    None => first[l as usize] = Some(i),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, i));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let raw: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Ok(Self::from_labels(&raw))
    }

    /// True iff the contiguous range `lo..=hi` is a union of blocks.
    pub fn interval_splits(&self, lo: usize, hi: usize) -> bool {
        let inside = |j: usize| (lo..=hi).contains(&j);
        let labels_in: Vec<u8> = (lo..=hi).map(|j| self.labels[j - 1]).collect();
        (1..=self.n()).all(|j| inside(j) || !labels_in.contains(&self.labels[j - 1]))
    }

    /// Least `k ∈ 1..n−1` with `k ~ k+1`.
    pub fn adjacent_pair(&self) -> Option<usize> {
        (1..self.n()).find(|&k| self.same_block(k, k + 1))
    }

    pub fn is_noncrossing(&self) -> bool {
        let blocks = self.blocks();
        // two blocks cross iff some consecutive pair of one straddles an element of the other
        for (i, a) in blocks.iter().enumerate() {
            for w in a.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                for (k, b) in blocks.iter().enumerate() {
                    if k == i {
                        continue;
                    }
                    let inside = b.iter().any(|&x| lo < x && x < hi);
                    let outside = b.iter().any(|&x| x < lo || x > hi);
                    if inside && outside {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn classify(&self) -> Classification {
        let n = self.n();
        let mut splits_interval = None;
        'outer: for len in 1..n {
            for lo in 1..=n - len + 1 {
                if self.interval_splits(lo, lo + len - 1) {
                    splits_interval = Some((lo, lo + len - 1));
                    break 'outer;
                }
            }
        }
        let neighbours = n == 0 || self.adjacent_pair().is_some() || self.same_block(1, n);
        Classification {
            noncrossing: self.is_noncrossing(),
            purely_crossing: splits_interval.is_none() && !neighbours,
            splits_interval,
        }
    }

    pub fn geometry(&self) -> PartitionGeometry {
        let n = self.n();
        let mut block_max = vec![0usize; self.num_blocks()];
        for j in 1..=n {
            block_max[self.block_index(j)] = j;
        }
        let j_set: Vec<usize> = (1..=n).filter(|&j| block_max[self.block_index(j)] != j).collect();
        let i_sets = (1..=n)
            .map(|p| {
                (1..=p)
                    .filter(|&j| block_max[self.block_index(j)] > p)
                    .collect()
            })
            .collect();
        PartitionGeometry {
            pi: self.clone(),
            j_set,
            i_sets,
        }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses `{1,3|2,4}` in canonical block order.
    fn from_str(s: &str) -> Result<Self> {
        let (p, blocks) = parse_blocks(s)?;
        if p.blocks() != blocks {
            return arg(format!("partition {s:?} is not in canonical order"));
        }
        Ok(p)
    }
}

/// Parses `{1,3|2,4}` with blocks and elements in any order; the ground set
/// is inferred as `{1..max}`.
pub fn parse_partition(s: &str) -> Result<SetPartition> {
    Ok(parse_blocks(s)?.0)
}

fn parse_blocks(s: &str) -> Result<(SetPartition, Vec<Vec<usize>>)> {
    {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Argument(format!("partition {s:?} must be braced")))?;
        let blocks = inner
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Argument(format!("bad element {x:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        let p = SetPartition::from_blocks(n, &blocks)?;
        Ok((p, blocks))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub noncrossing: bool,
    pub purely_crossing: bool,
    /// A proper subinterval `(lo, hi)` that is a union of blocks.
    pub splits_interval: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionGeometry {
    pub pi: SetPartition,
    /// `J_π`, ascending.
    pub j_set: Vec<usize>,
    /// `i_sets[p-1] = I_π(p)`, ascending.
    pub i_sets: Vec<Vec<usize>>,
}

impl PartitionGeometry {
    pub fn i_set(&self, p: usize) -> &[usize] {
        &self.i_sets[p - 1]
    }
}

/// Bell numbers, exact for the sizes the guards allow.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// All partitions of `{1..n}` in restricted-growth-string lexicographic
/// order, under the default guard.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>> {
    enumerate_partitions_guarded(n, DEFAULT_PARTITION_GUARD)
}

pub fn enumerate_partitions_guarded(n: usize, guard: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return arg("partitions need n >= 1");
    }
    if n > guard {
        return Err(Error::ResourceLimit(format!(
            "enumerating partitions of {{1..{n}}} means Bell({n}) = {} partitions (guard n <= {guard})",
            bell(n)
        )));
    }
    let mut out = Vec::with_capacity(bell(n) as usize);
    let mut a = vec![0u8; n];
    // m[i] = max(a[0..i]) + 1
    let mut m = vec![1u8; n];
    loop {
        out.push(SetPartition { labels: a.clone() });
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if a[i] < m[i] {
                a[i] += 1;
                break;
            }
            a[i] = 0;
            i -= 1;
        }
        for k in i + 1..n {
            m[k] = m[k - 1].max(a[k - 1] + 1);
        }
    }
}

/// Noncrossing partitions of `{1..n}`, same order as the full enumeration.
pub fn enumerate_noncrossing(n: usize) -> Result<Vec<SetPartition>> {
    Ok(enumerate_partitions(n)?
        .into_iter()
        .filter(SetPartition::is_noncrossing)
        .collect())
}

pub fn enumerate_purely_crossing(n: usize) -> Result<Vec<SetPartition>> {
    enumerate_purely_crossing_guarded(n, DEFAULT_PARTITION_GUARD)
}

pub fn enumerate_purely_crossing_guarded(n: usize, guard: usize) -> Result<Vec<SetPartition>> {
    Ok(enumerate_partitions_guarded(n, guard)?
        .into_iter()
        .filter(|p| p.classify().purely_crossing)
        .collect())
}

/// One letter of a star pattern: `X` or `X*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Star {
    One,
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarPattern {
    eps: Vec<Star>,
}

impl StarPattern {
    pub fn new(eps: Vec<Star>) -> Result<Self> {
        if eps.is_empty() {
            return arg("empty star pattern");
        }
        Ok(StarPattern { eps })
    }

    pub fn eps(&self) -> &[Star] {
        &self.eps
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn is_alternating(&self) -> bool {
        self.eps.windows(2).all(|w| w[0] != w[1])
    }
}

impl FromStr for StarPattern {
    type Err = Error;

    /// Parses strings over `1` and `*`, e.g. `"1*1**"`.
    fn from_str(s: &str) -> Result<Self> {
        let eps = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '1' => Ok(Star::One),
                '*' => Ok(Star::Star),
                other => arg(format!("bad pattern symbol {other:?}")),
            })
            .collect::<Result<Vec<_>>>()?;
        StarPattern::new(eps)
    }
}

impl fmt::Display for StarPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.eps {
            write!(f, "{}", if *e == Star::One { '1' } else { '*' })?;
        }
        Ok(())
    }
}

/// Interval partition into maximal runs on which the pattern alternates.
pub fn max_alternating_interval_partition(s: &StarPattern) -> SetPartition {
    let mut raw = Vec::with_capacity(s.len());
    let mut block = 0usize;
    for (i, e) in s.eps.iter().enumerate() {
        if i > 0 && *e == s.eps[i - 1] {
            block += 1;
        }
        raw.push(block);
    }
    SetPartition::from_labels(&raw)
}
