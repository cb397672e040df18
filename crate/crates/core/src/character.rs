//! Graded dimensions of the invariant vectors.
//!
//! The pairs `(λ, μ)` of weight `n` are counted by their Cartan weight
//! `2(p(λ) - p(μ))`; each pair contributes the dimension of modular forms of
//! weight `2(p(μ) - p(λ))`. The same series also has a product form, which
//! [`character_product`] evaluates independently.

use std::collections::BTreeMap;

use crate::coeff::q;
use crate::error::{Error, Result};
use crate::quasimod::{Dimensions, QSeries};

/// `c(m, n)`: the number of pairs of weight `n` and Cartan weight `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoVarTrace {
    pub max_order: u32,
    counts: BTreeMap<(i64, u32), u64>,
}

impl TwoVarTrace {
    pub fn get(&self, m: i64, n: u32) -> u64 {
        self.counts.get(&(m, n)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, u32), &u64)> {
        self.counts.iter()
    }
}

/// `p_k(n)`, partitions of `n` with exactly `k` parts, for `k, n ≤ max`.
fn parts_count_table(max: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; max + 1]; max + 1];
    t[0][0] = 1;
    // p_k(n) = p_{k-1}(n-1) + p_k(n-k)
    for k in 1..=max {
        for n in k..=max {
            t[k][n] = t[k - 1][n - 1] + t[k][n - k];
        }
    }
    t
}

fn counted_trace(max: u32) -> BTreeMap<(i64, u32), u64> {
    let m = max as usize;
    let p = parts_count_table(m);
    let mut out = BTreeMap::new();
    for n in 0..=m {
        for a in 0..=n {
            for (k, row_k) in p.iter().enumerate() {
                if row_k[a] == 0 {
                    continue;
                }
                for (j, row_j) in p.iter().enumerate() {
                    let c = row_k[a] * row_j[n - a];
                    if c > 0 {
                        *out.entry((2 * (k as i64 - j as i64), n as u32)).or_insert(0) += c;
                    }
                }
            }
        }
    }
    out
}

/// Expands `Π_n 1/((1 - t² qⁿ)(1 - t⁻² qⁿ))` through `q^max`.
fn product_trace(max: u32) -> BTreeMap<(i64, u32), u64> {
    let mut series: BTreeMap<(i64, u32), u64> = BTreeMap::from([((0, 0), 1)]);
    for n in 1..=max {
        for step in [2i64, -2] {
            let mut next = BTreeMap::new();
            for (&(m, d), &c) in &series {
                let mut e = 0;
                while d + e * n <= max {
                    *next.entry((m + step * e as i64, d + e * n)).or_insert(0) += c;
                    e += 1;
                }
            }
            series = next;
        }
    }
    series
}

/// `c(m, n)` for all `n ≤ max_order`, counted and checked against the
/// product expansion.
pub fn two_variable_trace(max_order: u32) -> Result<TwoVarTrace> {
    let counts = counted_trace(max_order);
    if counts != product_trace(max_order) {
        return Err(Error::internal(
            "pair counts disagree with the two-variable product",
        ));
    }
    Ok(TwoVarTrace { max_order, counts })
}

/// Character by summing dimensions over all pairs of each weight.
pub fn character_direct(max_order: u32, dims: &Dimensions) -> Result<QSeries> {
    let trace = TwoVarTrace {
        max_order,
        counts: counted_trace(max_order),
    };
    let mut out = QSeries::zero(max_order as usize);
    for (&(m, n), &c) in trace.iter() {
        let d = dims.dim(-m)?;
        out.add_at(n as usize, &q((c * d) as i64));
    }
    Ok(out)
}

/// Character from the product form
/// `Σ_{m,n} dim M_{2m} q^{2n+m} Π_{i≤n} (1-q^i)^{-1} Π_{j≤m+n} (1-q^j)^{-1}`.
pub fn character_product(max_order: u32, dims: &Dimensions) -> Result<QSeries> {
    let order = max_order as usize;
    let products: Vec<QSeries> = (0..=order)
        .map(|k| QSeries::partition_product(k, order))
        .collect();
    let mut out = QSeries::zero(order);
    for m in 0..=order {
        let d = dims.dim(2 * m as i64)?;
        if d == 0 {
            continue;
        }
        for n in 0..=(order - m) / 2 {
            let term = products[n]
                .mul(&products[m + n])
                .shift(2 * n + m)
                .scale(&q(d as i64));
            out = out.add(&term);
        }
    }
    Ok(out)
}
