//! Partitions, partition pairs and the filtration orders on them.
//!
//! A [`Partition`] indexes a product of creation modes: the partition
//! `(3,1,1)` stands for `a_{-3} a_{-1} a_{-1}` (or the same word in `b`).
//! A [`PartitionPair`] `(λ, μ)` stands for the operator `a_{-λ} b_{-μ}`;
//! its conformal weight is `|λ| + |μ|` and its level is
//! `l(λ, μ) = p(λ) - p(μ)`.
//!
//! Partition pairs of a fixed weight are totally ordered: first by level,
//! then by `λ`, and finally by `μ` *reversed*. This order drives the
//! filtration of the weight spaces and every triangular solve in
//! [`crate::lifting`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers, possibly empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Precondition(format!(
                "partition parts must be positive, got {parts:?}"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// `(1, 1, ..., 1)` with `n` parts.
    pub fn ones(n: u32) -> Self {
        Partition {
            parts: vec![1; n as usize],
        }
    }

    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, `p(λ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of parts, `|λ|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `(part, multiplicity)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == part).count() as u32
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Removes `count` copies of `part`; `None` if there are not enough.
    pub fn remove(&self, part: u32, count: u32) -> Option<Partition> {
        if count == 0 {
            return Some(self.clone());
        }
        let first = self.parts.iter().position(|&p| p == part)?;
        let end = first + count as usize;
        if end > self.parts.len() || self.parts[end - 1] != part {
            return None;
        }
        let mut parts = self.parts.clone();
        parts.drain(first..end);
        Some(Partition { parts })
    }

    pub fn with_part(&self, part: u32) -> Partition {
        self.union(&Partition::from_sorted(vec![part]))
    }
}

/// The filtration order on partitions: compare parts left to right; if one
/// partition is a prefix of the other, the longer one is greater. In
/// particular `∅` is the minimum.
///
/// This is exactly lexicographic order on the part sequences.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare_partitions(x: &Partition, y: &Partition) -> Ordering {
    x.cmp(y)
}

/// Text syntax: comma separated parts, `"2,1"`; the empty string is `∅`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "({self})")
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "∅" {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse("partition", s, format!("bad part {p:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        if parts.contains(&0) {
            return Err(Error::parse("partition", s, "parts must be positive"));
        }
        Partition::new(parts)
    }
}

/// All partitions of `n`, in decreasing filtration order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::from_sorted(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Partitions of `n` with exactly `k` parts, decreasing.
pub fn partitions_with_parts(n: u32, k: usize) -> Vec<Partition> {
    partitions_of(n)
        .into_iter()
        .filter(|p| p.len() == k)
        .collect()
}

/// The pair `(λ, μ)` labelling the operator `a_{-λ} b_{-μ}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PartitionPair {
    pub lambda: Partition,
    pub mu: Partition,
}

impl PartitionPair {
    pub fn new(lambda: Partition, mu: Partition) -> Self {
        PartitionPair { lambda, mu }
    }

    /// `l(λ, μ) = p(λ) - p(μ)`.
    pub fn level(&self) -> i64 {
        self.lambda.len() as i64 - self.mu.len() as i64
    }

    /// Conformal weight `|λ| + |μ|`.
    pub fn weight(&self) -> u32 {
        self.lambda.size() + self.mu.size()
    }
}

impl fmt::Debug for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.lambda, self.mu)
    }
}

/// Level first, then `λ`, then `μ` reversed.
impl Ord for PartitionPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.lambda.cmp(&other.lambda))
            // equal level and equal λ force p(μ) equal
            .then_with(|| other.mu.cmp(&self.mu))
    }
}

impl PartialOrd for PartitionPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare_pairs(x: &PartitionPair, y: &PartitionPair) -> Ordering {
    x.cmp(y)
}

/// All pairs of total weight `n`, strictly decreasing.
pub fn enumerate_pairs(n: u32) -> Vec<PartitionPair> {
    let mut out = Vec::new();
    for a in 0..=n {
        let lambdas = partitions_of(a);
        let mus = partitions_of(n - a);
        for l in &lambdas {
            for m in &mus {
                out.push(PartitionPair::new(l.clone(), m.clone()));
            }
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// The largest pair of the same weight strictly below `p0`, or `None` when
/// `p0` is the bottom `(∅, (1,…,1))` of its weight class.
pub fn successor_pair(p0: &PartitionPair) -> Option<PartitionPair> {
    enumerate_pairs(p0.weight()).into_iter().find(|p| p < p0)
}

/// A `b_0`-free basis operator `a_{-λ} b_{-μ} a_0^k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MaximalDescriptor {
    pub pair: PartitionPair,
    pub a0: u32,
}

impl MaximalDescriptor {
    /// Eigenvalue of the Cartan zero mode, `2 (l(λ, μ) + k)`.
    pub fn h_weight(&self) -> i64 {
        2 * (self.pair.level() + self.a0 as i64)
    }
}

/// Basis order restricted to `b_0`-free operators: pair first, then the
/// power of `a_0`.
impl Ord for MaximalDescriptor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pair
            .cmp(&other.pair)
            .then_with(|| self.a0.cmp(&other.a0))
    }
}

impl PartialOrd for MaximalDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Membership of `a_{-λ} b_{-μ} a_0^k b_0^l` in the stable set attached to
/// `p0`: the operator is at most `a_{-λ0} b_{-μ0}` in basis order, has the
/// same conformal weight, and `l(λ, μ) + k ≤ l(λ0, μ0)`. The power of `b_0`
/// is unconstrained.
pub fn in_stable_set(p0: &PartitionPair, pair: &PartitionPair, a0: u32) -> bool {
    if pair.weight() != p0.weight() {
        return false;
    }
    let below = match pair.cmp(p0) {
        Ordering::Less => true,
        Ordering::Equal => a0 == 0,
        Ordering::Greater => false,
    };
    below && pair.level() + a0 as i64 <= p0.level()
}

/// The `b_0`-free members of the stable set of `p0`, grouped by Cartan
/// weight, each group listed in decreasing basis order.
pub fn basis_sets(p0: &PartitionPair) -> BTreeMap<i64, Vec<MaximalDescriptor>> {
    let mut out: BTreeMap<i64, Vec<MaximalDescriptor>> = BTreeMap::new();
    for pair in enumerate_pairs(p0.weight()) {
        if pair > *p0 {
            continue;
        }
        let max_k = p0.level() - pair.level();
        if max_k < 0 {
            continue;
        }
        let max_k = if pair == *p0 { 0 } else { max_k as u32 };
        for a0 in 0..=max_k {
            let d = MaximalDescriptor {
                pair: pair.clone(),
                a0,
            };
            debug_assert!(in_stable_set(p0, &d.pair, a0));
            out.entry(d.h_weight()).or_default().push(d);
        }
    }
    for group in out.values_mut() {
        group.sort_by(|x, y| y.cmp(x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn pair(l: &str, m: &str) -> PartitionPair {
        PartitionPair::new(p(l), p(m))
    }

    #[test]
    fn partition_order_examples() {
        assert_eq!(compare_partitions(&p("2,1"), &p("1,1,1")), Ordering::Greater);
        assert_eq!(compare_partitions(&p(""), &p("1")), Ordering::Less);
        assert_eq!(compare_partitions(&p("2,1"), &p("2")), Ordering::Greater);
        assert_eq!(compare_partitions(&p("2,1"), &p("1,2")), Ordering::Equal);
    }

    #[test]
    fn pair_order_examples() {
        assert_eq!(compare_pairs(&pair("1", ""), &pair("", "1")), Ordering::Greater);
        // level 0 against level 1: the part count decides before λ does
        assert_eq!(compare_pairs(&pair("2", "1"), &pair("1,1", "1")), Ordering::Less);
        assert_eq!(compare_pairs(&pair("2", "1"), &pair("1,1", "1,1")), Ordering::Greater);
        assert_eq!(compare_pairs(&pair("1", "2,2"), &pair("1", "3,1")), Ordering::Greater);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("2,x".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert_eq!(p(" 1, 3 ,2").parts(), &[3, 2, 1]);
        assert_eq!(p("").to_string(), "");
    }

    #[test]
    fn multiset_helpers() {
        let x = p("3,1,1");
        assert_eq!(x.multiplicities(), vec![(3, 1), (1, 2)]);
        assert_eq!(x.remove(1, 2), Some(p("3")));
        assert_eq!(x.remove(1, 3), None);
        assert_eq!(x.remove(2, 1), None);
        assert_eq!(x.with_part(2), p("3,2,1,1"));
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_pairs(0), vec![pair("", "")]);
        assert_eq!(enumerate_pairs(1), vec![pair("1", ""), pair("", "1")]);
        assert_eq!(
            enumerate_pairs(2),
            vec![
                pair("1,1", ""),
                pair("2", ""),
                pair("1", "1"),
                pair("", "2"),
                pair("", "1,1")
            ]
        );
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_with_parts(6, 3).len(), 3);
    }

    #[test]
    fn successor_examples() {
        assert_eq!(successor_pair(&pair("1", "1")), Some(pair("", "2")));
        assert_eq!(successor_pair(&pair("", "2")), Some(pair("", "1,1")));
        assert_eq!(successor_pair(&pair("", "1,1")), None);
    }

    fn desc(l: &str, m: &str, k: u32) -> MaximalDescriptor {
        MaximalDescriptor {
            pair: pair(l, m),
            a0: k,
        }
    }

    #[test]
    fn basis_set_examples() {
        let s = basis_sets(&pair("", "1,1"));
        assert_eq!(s.len(), 1);
        assert_eq!(s[&-4], vec![desc("", "1,1", 0)]);

        let s = basis_sets(&pair("", "2,1"));
        assert_eq!(s[&-4], vec![desc("", "2,1", 0), desc("", "1,1,1", 1)]);
        assert_eq!(s[&-6], vec![desc("", "1,1,1", 0)]);
        assert_eq!(s.len(), 2);

        let s = basis_sets(&pair("1", "1"));
        assert_eq!(s[&0][0], desc("1", "1", 0));
        assert!(s[&0].contains(&desc("", "2", 1)));
        assert!(s[&0].contains(&desc("", "1,1", 2)));
        assert!(s[&-2].contains(&desc("", "2", 0)));
    }

    #[test]
    fn stable_set_membership() {
        let p0 = pair("", "2,1");
        assert!(in_stable_set(&p0, &pair("", "2,1"), 0));
        assert!(!in_stable_set(&p0, &pair("", "2,1"), 1));
        assert!(in_stable_set(&p0, &pair("", "1,1,1"), 1));
        assert!(!in_stable_set(&p0, &pair("", "1,1,1"), 2));
        assert!(!in_stable_set(&p0, &pair("", "3"), 0));
        assert!(!in_stable_set(&p0, &pair("", "2"), 0));
    }
}
