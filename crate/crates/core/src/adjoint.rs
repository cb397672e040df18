//! The adjoint action of `g = (α β; γ δ) ∈ SL(2,ℝ)` on mode operators.
//!
//! Everything is expressed through `u = γ b_0 + δ` and powers of `γ`, so the
//! results hold for every `g` at once. Sums over infinitely many modes are
//! truncated at a weight cap; at conformal weight `N` a cap of `N` loses
//! nothing once the product is reduced modulo `K`, because a surviving term
//! can never carry creation weight above `N`, and an annihilator of index
//! above `N` has nothing to contract against.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::coeff::{factorial, q, sign, GammaPoly, Q};
use crate::error::{Error, Result};
use crate::modealgebra::{act_on_vacuum, Monomial, Tail, UElement, UMid, UMonomial};
use crate::partitions::{partitions_of, Partition, PartitionPair};

/// The image of `a_{-λ} b_{-μ}` under the adjoint action, reduced modulo `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointExpansion {
    pub source: PartitionPair,
    pub element: UElement,
    pub weight_cap: u32,
}

/// Builds a word from signed mode indices: a negative index is a creation
/// mode, a positive one goes to the tail. Index 0 is not allowed here.
fn word(a: &[i64], b: &[i64], mid: UMid) -> UMonomial {
    let split = |idx: &[i64]| {
        let creation: Vec<u32> = idx.iter().filter(|&&i| i < 0).map(|&i| (-i) as u32).collect();
        let tail: Vec<u32> = idx.iter().filter(|&&i| i > 0).map(|&i| i as u32).collect();
        debug_assert!(!idx.contains(&0));
        (
            Partition::new(creation).expect("positive parts"),
            Partition::new(tail).expect("positive parts"),
        )
    };
    let (lambda, ta) = split(a);
    let (mu, tb) = split(b);
    Monomial {
        lambda,
        mu,
        mid,
        tail: Tail { a: ta, b: tb },
    }
}

fn within_cap(m: &UMonomial, cap: u32) -> bool {
    m.creation_weight() <= cap && m.tail.weight() <= cap
}

/// Ordered pairs `(i, j)` of nonzero indices with `i + j = total` and
/// `|i|, |j| ≤ cap`.
fn index_pairs(total: i64, cap: u32) -> impl Iterator<Item = (i64, i64)> {
    let cap = cap as i64;
    (-cap..=cap).filter_map(move |i| {
        let j = total - i;
        (i != 0 && j != 0 && j.abs() <= cap).then_some((i, j))
    })
}

fn g(c: i64, e: u32) -> GammaPoly {
    GammaPoly::monomial(q(c), e)
}

fn mid(upow: i32, a0: u32) -> UMid {
    UMid { upow, a0 }
}

/// Image of `a_{-n}` (`n ≥ 1`), truncated so that creation and annihilation
/// weights are at most `cap`.
pub fn adjoint_a(n: u32, cap: u32) -> UElement {
    let n = n as i64;
    let mut out = UElement::zero();
    let mut push = |m: UMonomial, c: GammaPoly| {
        if within_cap(&m, cap) {
            out.add_term(m, c);
        }
    };

    // a_{-n} (u² + γ² Σ_{i≠0} b_{-i} b_i)
    push(word(&[-n], &[], mid(2, 0)), GammaPoly::one());
    for j in 1..=cap as i64 {
        push(word(&[-n], &[-j, j], mid(0, 0)), g(2, 2));
    }

    // Σ_{k≥1, k≠n} a_{-k} (2γ u b_{k-n} + γ² Σ_{i+j=n-k} b_{-i} b_{-j})
    for k in (1..=cap as i64).filter(|&k| k != n) {
        push(word(&[-k], &[k - n], mid(1, 0)), g(2, 1));
        for (i, j) in index_pairs(n - k, cap) {
            push(word(&[-k], &[-i, -j], mid(0, 0)), g(1, 2));
        }
    }

    // Σ_{k≥0} (2γ u b_{-n-k} + γ² Σ_{i+j=n+k} b_{-i} b_{-j}) a_k
    for k in 0..=cap as i64 {
        let (a, a0): (Vec<i64>, u32) = if k == 0 { (vec![], 1) } else { (vec![k], 0) };
        push(word(&a, &[-n - k], mid(1, a0)), g(2, 1));
        for (i, j) in index_pairs(n + k, cap) {
            push(word(&a, &[-i, -j], mid(0, a0)), g(1, 2));
        }
    }

    push(word(&[], &[-n], mid(0, 0)), g(2 * n, 2));
    out
}

/// Image of `b_{-n}` (`n ≥ 1`): the sum over index sequences
/// `i_1 + … + i_l = n` of `(-γ)^{l-1} u^{-l-1} b_{-i_1} ⋯ b_{-i_l}`,
/// truncated at `cap`.
///
/// The `b` modes commute, so sequences are grouped by their creation
/// multiset `P` and annihilation multiset `Q`, weighted by the number of
/// orderings.
pub fn adjoint_b(n: u32, cap: u32) -> UElement {
    let mut out = UElement::zero();
    for created in n..=cap {
        for p in partitions_of(created) {
            for qq in partitions_of(created - n) {
                let l = (p.len() + qq.len()) as u32;
                let orderings = p
                    .multiplicities()
                    .iter()
                    .chain(qq.multiplicities().iter())
                    .fold(factorial(l), |acc, &(_, m)| acc / factorial(m));
                let sign = sign(l as i64 - 1);
                let m = Monomial {
                    lambda: Partition::empty(),
                    mu: p.clone(),
                    mid: mid(-(l as i32) - 1, 0),
                    tail: Tail {
                        a: Partition::empty(),
                        b: qq,
                    },
                };
                out.add_term(m, GammaPoly::monomial(sign * orderings, l - 1));
            }
        }
    }
    out
}

type FactorKey = (char, u32, u32);

fn factor_cache() -> &'static Mutex<HashMap<FactorKey, UElement>> {
    static CACHE: OnceLock<Mutex<HashMap<FactorKey, UElement>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached_factor(kind: char, n: u32, cap: u32) -> UElement {
    let key = (kind, n, cap);
    if let Some(e) = factor_cache().lock().expect("cache poisoned").get(&key) {
        return e.clone();
    }
    let e = match kind {
        'a' => adjoint_a(n, cap),
        _ => adjoint_b(n, cap),
    };
    factor_cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, e.clone());
    e
}

/// The adjoint image of `a_{-λ} b_{-μ}` at its own weight, with its shape
/// checked.
pub fn adjoint_monomial(p: &PartitionPair) -> Result<AdjointExpansion> {
    adjoint_monomial_with_slack(p, 0)
}

/// As [`adjoint_monomial`], with the cap raised `slack` above the weight.
/// Any slack gives the same result; this exists to audit the truncation.
pub fn adjoint_monomial_with_slack(p: &PartitionPair, slack: u32) -> Result<AdjointExpansion> {
    let exp = adjoint_monomial_with_cap(p, p.weight() + slack);
    check_shape(&exp)?;
    Ok(exp)
}

/// Same as [`adjoint_monomial`] at an explicit cap, without shape checks.
///
/// The product of the factor images is evaluated as left multiplication on
/// the quotient by `K`, innermost factor first.
pub fn adjoint_monomial_with_cap(p: &PartitionPair, cap: u32) -> AdjointExpansion {
    let factors: Vec<UElement> = p
        .lambda
        .parts()
        .iter()
        .map(|&n| cached_factor('a', n, cap))
        .chain(p.mu.parts().iter().map(|&n| cached_factor('b', n, cap)))
        .collect();
    AdjointExpansion {
        source: p.clone(),
        element: act_on_vacuum(&factors, cap),
        weight_cap: cap,
    }
}

/// Checks every term against the expected exponent pattern
/// `c^s γ^{l-l'-s} u^{l+l'+s} a_{-λ'} b_{-μ'} a_0^s`.
fn check_shape(exp: &AdjointExpansion) -> Result<()> {
    let p = &exp.source;
    let l = p.level();
    for (m, c) in exp.element.iter() {
        let fail = |why: &str| {
            Err(Error::internal(format!(
                "adjoint image of {p:?}: term {m:?} with coefficient {c}: {why}"
            )))
        };
        if !m.tail.is_empty() {
            return fail("annihilator survived reduction");
        }
        let target = m.pair();
        if target.weight() != p.weight() {
            return fail("weight changed");
        }
        if target > *p {
            return fail("term above the source pair");
        }
        if target.lambda.len() > p.lambda.len() {
            return fail("more a-modes than the source");
        }
        let lt = target.level();
        let s = m.mid.a0 as i64;
        if target == *p {
            if s != 0 || m.mid.upow as i64 != 2 * l || *c != GammaPoly::one() {
                return fail("leading term is not u^{2l}");
            }
            continue;
        }
        if lt >= l {
            return fail("level did not drop");
        }
        if s > (l - lt) / 2 {
            return fail("a_0 power out of range");
        }
        if m.mid.upow as i64 != l + lt + s {
            return fail("wrong power of u");
        }
        match c.as_monomial() {
            Some((_, e)) if e as i64 == l - lt - s => {}
            _ => return fail("wrong power of gamma"),
        }
    }
    Ok(())
}

/// The structure constant `c^s` from the source pair `p` to the pair `target`.
pub fn extract_c(p: &PartitionPair, target: &PartitionPair, s: u32) -> Result<Q> {
    if p.weight() != target.weight() {
        return Err(Error::WeightMismatch {
            left: p.weight(),
            right: target.weight(),
        });
    }
    if target > p {
        return Err(Error::Precondition(format!(
            "{target:?} lies above {p:?}"
        )));
    }
    let exp = adjoint_monomial(p)?;
    Ok(c_from_expansion(&exp, target, s))
}

pub(crate) fn c_from_expansion(exp: &AdjointExpansion, target: &PartitionPair, s: u32) -> Q {
    let l = exp.source.level();
    let lt = target.level();
    let e = l - lt - s as i64;
    if e < 0 {
        return Q::zero();
    }
    let m = Monomial {
        lambda: target.lambda.clone(),
        mu: target.mu.clone(),
        mid: mid((l + lt + s as i64) as i32, s),
        tail: Tail::default(),
    };
    exp.element.coeff(&m).coeff(e as u32)
}

/// `t^μ_ν = (-1)^{p(ν)-p(μ)} c^0` from `(∅, μ)` to `(∅, ν)`.
pub fn t_coeff(mu: &Partition, nu: &Partition) -> Result<Q> {
    if mu.size() != nu.size() {
        return Err(Error::WeightMismatch {
            left: mu.size(),
            right: nu.size(),
        });
    }
    if nu.len() < mu.len() {
        return Err(Error::Precondition(format!(
            "{nu:?} has fewer parts than {mu:?}"
        )));
    }
    if nu.len() == mu.len() {
        return Ok(if mu == nu { Q::one() } else { Q::zero() });
    }
    let src = PartitionPair::new(Partition::empty(), mu.clone());
    let exp = adjoint_monomial(&src)?;
    let c = c_from_expansion(&exp, &PartitionPair::new(Partition::empty(), nu.clone()), 0);
    let sign = sign((nu.len() - mu.len()) as i64);
    Ok(sign * c)
}
