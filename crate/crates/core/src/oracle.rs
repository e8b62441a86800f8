//! Verification oracles for the bounded geometric distribution: entropy,
//! optimal (Huffman) expected length, the greedy top-down weight-balanced
//! tree, and Horibe's redundancy bound.

use std::collections::BTreeMap;

use crate::codes::{check_probability, compute_m, ln_p, BalancedParams, GolombParams};
use crate::error::{Error, Result};

/// Geometric distribution with all mass at or above `n` lumped into `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedGeometric {
    p: f64,
    n: u64,
    probs: Vec<f64>,
}

impl BoundedGeometric {
    pub fn new(p: f64, n: u64) -> Result<Self> {
        check_probability(p)?;
        let q = 1.0 - p;
        let mut probs = Vec::with_capacity(n as usize + 1);
        let mut pw = 1.0f64;
        for _ in 0..n {
            probs.push(pw * q);
            pw *= p;
        }
        probs.push(pw);
        Ok(Self { p, n, probs })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn prob(&self, i: u64) -> f64 {
        self.probs[i as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Σ prob(i)·len(i) over 0..=n, summed in value order.
    ///
    /// Every expected length in the crate goes through this so that identical
    /// length assignments give bit-identical results.
    pub fn expected_length<F: FnMut(u64) -> u64>(&self, mut len: F) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &pr)| pr * len(i as u64) as f64)
            .sum()
    }

    pub fn entropy(&self) -> f64 {
        let lg_p = ln_p(self.p) / std::f64::consts::LN_2;
        let lg_q = (1.0 - self.p).log2();
        let mut h = 0.0;
        for (i, &pr) in self.probs.iter().enumerate() {
            if pr == 0.0 {
                continue;
            }
            let lg = if i as u64 == self.n {
                self.n as f64 * lg_p
            } else {
                i as f64 * lg_p + lg_q
            };
            h -= pr * lg;
        }
        h
    }

    /// Values ordered by non-decreasing probability.
    fn ascending_order(&self) -> Vec<u64> {
        let n = self.n;
        // 0..n is decreasing in probability, so n-1, ..., 0 is ascending.
        let mut order: Vec<u64> = (0..n).rev().collect();
        let pn = self.probs[n as usize];
        let at = order.partition_point(|&i| self.probs[i as usize] < pn);
        order.insert(at, n);
        order
    }
}

pub fn entropy(p: f64, n: u64) -> Result<f64> {
    Ok(BoundedGeometric::new(p, n)?.entropy())
}

/// Huffman codeword lengths, indexed by value.
///
/// Lengths are reassigned canonically (shortest to most probable) so the
/// result does not depend on tie-breaking.
pub fn huffman_lengths(dist: &BoundedGeometric) -> Vec<u64> {
    let leaves = dist.ascending_order();
    let k = leaves.len();
    if k == 1 {
        return vec![0];
    }

    // Two-queue merge: leaves in ascending order, internal nodes are created
    // in non-decreasing weight order. Node ids: leaf slots 0..k (by position
    // in `leaves`), internal nodes k..2k-1.
    let mut parent = vec![0usize; 2 * k - 1];
    let mut internal = Vec::with_capacity(k - 1);
    let (mut li, mut ii) = (0usize, 0usize);
    for t in 0..k - 1 {
        let mut pick = || {
            let leaf_w = leaves.get(li).map(|&v| dist.prob(v));
            let node_w = internal.get(ii).copied();
            match (leaf_w, node_w) {
                (Some(lw), Some(nw)) if nw < lw => {
                    ii += 1;
                    (k + ii - 1, nw)
                }
                (Some(lw), _) => {
                    li += 1;
                    (li - 1, lw)
                }
                (None, Some(nw)) => {
                    ii += 1;
                    (k + ii - 1, nw)
                }
                (None, None) => unreachable!("queues hold at least two nodes"),
            }
        };
        let (a, wa) = pick();
        let (b, wb) = pick();
        parent[a] = k + t;
        parent[b] = k + t;
        internal.push(wa + wb);
    }

    let mut depth = vec![0u64; 2 * k - 1];
    for id in (0..2 * k - 2).rev() {
        depth[id] = depth[parent[id]] + 1;
    }

    let mut sorted: Vec<u64> = depth[..k].to_vec();
    sorted.sort_unstable();
    let mut lengths = vec![0u64; k];
    // Most probable value is last in `leaves`.
    for (len, &v) in sorted.iter().zip(leaves.iter().rev()) {
        lengths[v as usize] = *len;
    }
    lengths
}

pub fn huffman_length_multiset(p: f64, n: u64) -> Result<Vec<u64>> {
    let mut lengths = huffman_lengths(&BoundedGeometric::new(p, n)?);
    lengths.sort_unstable();
    Ok(lengths)
}

pub fn huffman_expected_length(p: f64, n: u64) -> Result<f64> {
    let dist = BoundedGeometric::new(p, n)?;
    let lengths = huffman_lengths(&dist);
    Ok(dist.expected_length(|i| lengths[i as usize]))
}

/// Codeword lengths of the Golomb code with minimal modification: d₁ full
/// bunches, then a node whose right child is n and whose left subtree is a
/// balanced code over the remaining m₁ values.
pub fn weight_balanced_lengths(p: f64, n: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::ValueOutOfRange { value: n, bound: 2 });
    }
    let m = compute_m(p)?;
    let golomb = GolombParams::new(m)?;
    let d1 = (n - 1) / m;
    let m1 = n - d1 * m;
    let rest = BalancedParams::new(m1)?;
    Ok((0..=n)
        .map(|i| {
            if i < d1 * m {
                golomb.len(i)
            } else if i < n {
                d1 + 1 + u64::from(rest.len(i - d1 * m))
            } else {
                d1 + 1
            }
        })
        .collect())
}

pub fn weight_balanced_expected_length(p: f64, n: u64) -> Result<f64> {
    let lengths = weight_balanced_lengths(p, n)?;
    let dist = BoundedGeometric::new(p, n)?;
    Ok(dist.expected_length(|i| lengths[i as usize]))
}

/// H(p, n) + 2 − (n+1)·p^(n−1)·(1−p).
pub fn horibe_bound(p: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ValueOutOfRange { value: 0, bound: 1 });
    }
    let h = entropy(p, n)?;
    Ok(h + 2.0 - (n as f64 + 1.0) * p.powf(n as f64 - 1.0) * (1.0 - p))
}

/// Exact test of Σ 2^−len = 1, using only integer halving level by level.
pub fn kraft_is_complete<I: IntoIterator<Item = u64>>(lengths: I) -> bool {
    let lengths: Vec<u64> = lengths.into_iter().collect();
    let Some(&deepest) = lengths.iter().max() else {
        return false;
    };
    if deepest <= 1 << 20 {
        let mut counts = vec![0u64; deepest as usize + 1];
        for &len in &lengths {
            counts[len as usize] += 1;
        }
        let mut nodes = 0u64;
        for level in (1..=deepest as usize).rev() {
            nodes += counts[level];
            if nodes % 2 == 1 {
                return false;
            }
            nodes /= 2;
        }
        return nodes + counts[0] == 1;
    }

    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for len in lengths {
        *counts.entry(len).or_default() += 1;
    }
    let mut level = deepest;
    let mut nodes = 0u64;
    for (&len, &count) in counts.iter().rev() {
        while level > len {
            if nodes % 2 == 1 {
                return false;
            }
            nodes /= 2;
            level -= 1;
        }
        nodes += count;
    }
    while level > 0 {
        if nodes % 2 == 1 {
            return false;
        }
        nodes /= 2;
        level -= 1;
    }
    nodes == 1
}

/// Floating-point Kraft sum, for display.
pub fn kraft_sum<I: IntoIterator<Item = u64>>(lengths: I) -> f64 {
    lengths.into_iter().map(|l| (-(l as f64)).exp2()).sum()
}

/// Bunch sizes of the optimal tree for (p, n), read off the canonical
/// Huffman lengths.
///
/// Walking down the unary spine, the bunch at depth d is the run of values
/// (in canonical order) whose Kraft mass adds up to exactly 2^−(d+1). Whatever
/// remains when no run fits is reported as the final group, which sits beside
/// leaf n. Diagnostic only; the bunch structure of an optimal tree is not
/// unique.
pub fn bunch_sizes(p: f64, n: u64) -> Result<Vec<u64>> {
    let dist = BoundedGeometric::new(p, n)?;
    let lengths = huffman_lengths(&dist);
    let body = &lengths[..n as usize];
    let mut sizes = Vec::new();
    let mut start = 0usize;
    let mut depth = 0u64;
    while start < body.len() {
        // Sums of powers of two are exact at these depths.
        let target = (-((depth + 1) as f64)).exp2();
        let mut end = start;
        let mut mass = 0f64;
        while end < body.len() && mass < target {
            mass += (-(body[end] as f64)).exp2();
            end += 1;
        }
        if mass != target {
            sizes.push((body.len() - start) as u64);
            break;
        }
        sizes.push((end - start) as u64);
        start = end;
        depth += 1;
    }
    Ok(sizes)
}
