//! Normal-ordered arithmetic in the Heisenberg mode algebra.
//!
//! The generators are `a_n, b_n` (`n ∈ ℤ`) with `[a_m, b_n] = δ_{m,-n}` and
//! all other brackets zero. Every word is brought to the normal form
//!
//! ```text
//! a_{-λ} b_{-μ} · (middle) · a_{ν} b_{ρ}
//! ```
//!
//! with creation modes (`n ≥ 1`) on the left, annihilation modes on the
//! right, and the zero-mode part in the middle. Two flavors of middle exist:
//!
//! * [`BFlavor`]: `a_0^k b_0^l` with rational coefficients, used by the
//!   infinitesimal `sl₂` action;
//! * [`UFlavor`]: `u^m a_0^s` with `u = γ b_0 + δ` treated as an atom, and
//!   coefficients that are polynomials in `γ`. Here `[a_0, u^m] = m γ u^{m-1}`.
//!
//! Annihilation modes surviving at the right end put a term in the left ideal
//! `K` generated by `a_n, b_n` (`n ≥ 1`); [`multiply`] discards such terms.
//! Terms whose creation weight exceeds the supplied cap are discarded too.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::coeff::{binomial, falling, format_q, q, Coefficient, GammaPoly, Q};
use crate::partitions::{Partition, PartitionPair};

/// Annihilation modes `a_ν b_ρ` at the right end of a word; indices are
/// positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Tail {
    pub a: Partition,
    pub b: Partition,
}

impl Tail {
    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.a.size() + self.b.size()
    }

    fn union(&self, other: &Tail) -> Tail {
        Tail {
            a: self.a.union(&other.a),
            b: self.b.union(&other.b),
        }
    }
}

/// A normal-ordered word `a_{-λ} b_{-μ} · mid · tail`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial<M> {
    pub lambda: Partition,
    pub mu: Partition,
    pub mid: M,
    pub tail: Tail,
}

impl<M> Monomial<M> {
    pub fn creation_weight(&self) -> u32 {
        self.lambda.size() + self.mu.size()
    }

    pub fn pair(&self) -> PartitionPair {
        PartitionPair::new(self.lambda.clone(), self.mu.clone())
    }

    /// Creation weight minus annihilation weight.
    pub fn conformal_weight(&self) -> i64 {
        self.creation_weight() as i64 - self.tail.weight() as i64
    }
}

/// Zero-mode part `a_0^k b_0^l`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct BMid {
    pub a0: u32,
    pub b0: u32,
}

/// Zero-mode part `u^m a_0^s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct UMid {
    pub upow: i32,
    pub a0: u32,
}

pub type BMonomial = Monomial<BMid>;
pub type UMonomial = Monomial<UMid>;

/// A coefficient regime together with its zero-mode algebra.
pub trait Flavor: Clone + fmt::Debug + PartialEq + 'static {
    type Coeff: Coefficient;
    type Mid: Clone + Copy + Ord + Eq + Hash + fmt::Debug + Default;

    /// Normal-ordered product of two middles.
    fn mid_product(x: &Self::Mid, y: &Self::Mid) -> Vec<(Self::Coeff, Self::Mid)>;

    fn a0_power(k: u32) -> Self::Mid;

    fn fmt_mid(mid: &Self::Mid) -> String;

    /// Sign and magnitude of a term's scalar part, including any power of `u`.
    fn fmt_coeff(m: &Monomial<Self::Mid>, c: &Self::Coeff) -> (bool, String);
}

#[derive(Clone, Debug, PartialEq)]
pub struct BFlavor;

#[derive(Clone, Debug, PartialEq)]
pub struct UFlavor;

impl Flavor for BFlavor {
    type Coeff = Q;
    type Mid = BMid;

    // b_0^l a_0^k = Σ_j (-1)^j j! C(l,j) C(k,j) a_0^{k-j} b_0^{l-j}
    fn mid_product(x: &BMid, y: &BMid) -> Vec<(Q, BMid)> {
        (0..=x.b0.min(y.a0))
            .map(|j| {
                let c = falling(x.b0 as i64, j) * binomial(y.a0, j) * q(if j % 2 == 0 { 1 } else { -1 });
                (
                    c,
                    BMid {
                        a0: x.a0 + y.a0 - j,
                        b0: x.b0 + y.b0 - j,
                    },
                )
            })
            .collect()
    }

    fn a0_power(k: u32) -> BMid {
        BMid { a0: k, b0: 0 }
    }

    fn fmt_mid(mid: &BMid) -> String {
        let mut s = String::new();
        if mid.a0 > 0 {
            s += &format!("a0^{}", mid.a0);
        }
        if mid.b0 > 0 {
            s += &format!("b0^{}", mid.b0);
        }
        s
    }

    fn fmt_coeff(_: &BMonomial, c: &Q) -> (bool, String) {
        let neg = *c < q(0);
        let mag = if neg { -c.clone() } else { c.clone() };
        (neg, format_q(&mag))
    }
}

impl Flavor for UFlavor {
    type Coeff = GammaPoly;
    type Mid = UMid;

    // a_0^s u^m = Σ_j C(s,j) m(m-1)…(m-j+1) γ^j u^{m-j} a_0^{s-j}
    fn mid_product(x: &UMid, y: &UMid) -> Vec<(GammaPoly, UMid)> {
        (0..=x.a0)
            .filter_map(|j| {
                let c = binomial(x.a0, j) * falling(y.upow as i64, j);
                if c.is_zero() {
                    return None;
                }
                Some((
                    GammaPoly::monomial(c, j),
                    UMid {
                        upow: x.upow + y.upow - j as i32,
                        a0: x.a0 + y.a0 - j,
                    },
                ))
            })
            .collect()
    }

    fn a0_power(k: u32) -> UMid {
        UMid { upow: 0, a0: k }
    }

    fn fmt_mid(mid: &UMid) -> String {
        if mid.a0 > 0 {
            format!("a0^{}", mid.a0)
        } else {
            String::new()
        }
    }

    fn fmt_coeff(m: &UMonomial, c: &GammaPoly) -> (bool, String) {
        fmt_gamma_coeff(c, m.mid.upow)
    }
}

/// A finite formal sum of normal-ordered words with exact coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Element<F: Flavor> {
    terms: BTreeMap<Monomial<F::Mid>, F::Coeff>,
}

pub type BElement = Element<BFlavor>;
pub type UElement = Element<UFlavor>;

impl<F: Flavor> Default for Element<F> {
    fn default() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Flavor> Element<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The vacuum word `1`.
    pub fn one() -> Self {
        Self::term(Monomial::default(), F::Coeff::one())
    }

    pub fn term(m: Monomial<F::Mid>, c: F::Coeff) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    /// The single mode `a_n` for any integer `n`.
    pub fn mode_a(n: i32) -> Self {
        let mut m = Monomial::default();
        match n {
            n if n < 0 => m.lambda = Partition::from_sorted(vec![(-n) as u32]),
            0 => m.mid = F::a0_power(1),
            n => m.tail.a = Partition::from_sorted(vec![n as u32]),
        }
        Self::term(m, F::Coeff::one())
    }

    /// The single mode `b_n` for `n ≠ 0`.
    pub fn mode_b(n: i32) -> Self {
        assert!(n != 0, "b_0 is not a mode of this flavor");
        let mut m = Monomial::default();
        if n < 0 {
            m.mu = Partition::from_sorted(vec![(-n) as u32]);
        } else {
            m.tail.b = Partition::from_sorted(vec![n as u32]);
        }
        Self::term(m, F::Coeff::one())
    }

    /// `a_{-λ} b_{-μ}` with coefficient 1.
    pub fn from_pair(p: &PartitionPair) -> Self {
        Self::term(
            Monomial {
                lambda: p.lambda.clone(),
                mu: p.mu.clone(),
                ..Default::default()
            },
            F::Coeff::one(),
        )
    }

    pub fn add_term(&mut self, m: Monomial<F::Mid>, c: F::Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial<F::Mid>, &F::Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial<F::Mid>) -> F::Coeff {
        self.terms.get(m).cloned().unwrap_or_else(F::Coeff::zero)
    }

    pub fn scale(&self, x: &Q) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(x));
        }
        out
    }

    pub fn scale_coeff(&self, x: &F::Coeff) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * x.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    /// Drops every term with a surviving annihilation mode.
    pub fn reduce_mod_k(&self) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.tail.is_empty())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term whose creation weight exceeds `cap`.
    pub fn truncate(&self, cap: u32) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.creation_weight() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn has_tails(&self) -> bool {
        self.terms.keys().any(|m| !m.tail.is_empty())
    }

    /// Map each monomial through `f`, which may return any number of terms.
    pub fn flat_map_terms(
        &self,
        mut f: impl FnMut(&Monomial<F::Mid>, &F::Coeff) -> Vec<(Monomial<F::Mid>, F::Coeff)>,
    ) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }
}

impl<F: Flavor> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Moves the annihilators `tail` through the creation modes `(lambda, mu)`.
///
/// `a_n` acts as `∂/∂b_{-n}` and `b_n` as `-∂/∂a_{-n}`. Returns the
/// contracted creation modes, the tail left over and the coefficient. With
/// `keep_tails == false` only complete contractions are produced.
fn contract(
    tail: &Tail,
    lambda: &Partition,
    mu: &Partition,
    keep_tails: bool,
) -> Vec<(Partition, Partition, Tail, Q)> {
    // Each state: (lambda, mu, leftover tail, coefficient)
    let mut states = vec![(lambda.clone(), mu.clone(), Tail::default(), q(1))];
    for (n, t) in tail.a.multiplicities() {
        let mut next = Vec::new();
        for (l, m, rest, c) in &states {
            let avail = m.multiplicity(n);
            let lo = if keep_tails { 0 } else { t };
            for j in lo..=t.min(avail) {
                let coeff = c * binomial(t, j) * falling(avail as i64, j);
                let mut rest = rest.clone();
                for _ in 0..(t - j) {
                    rest.a = rest.a.with_part(n);
                }
                next.push((l.clone(), m.remove(n, j).expect("enough parts"), rest, coeff));
            }
        }
        states = next;
    }
    for (n, t) in tail.b.multiplicities() {
        let mut next = Vec::new();
        for (l, m, rest, c) in &states {
            let avail = l.multiplicity(n);
            let lo = if keep_tails { 0 } else { t };
            for j in lo..=t.min(avail) {
                let sgn = if j % 2 == 0 { q(1) } else { q(-1) };
                let coeff = c * binomial(t, j) * falling(avail as i64, j) * sgn;
                let mut rest = rest.clone();
                for _ in 0..(t - j) {
                    rest.b = rest.b.with_part(n);
                }
                next.push((l.remove(n, j).expect("enough parts"), m.clone(), rest, coeff));
            }
        }
        states = next;
    }
    states
}

fn product_impl<F: Flavor>(x: &Element<F>, y: &Element<F>, cap: u32, keep_tails: bool) -> Element<F> {
    let mut out = Element::zero();
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            if !keep_tails && !my.tail.is_empty() {
                continue;
            }
            for (l, m, rest, c) in contract(&mx.tail, &my.lambda, &my.mu, keep_tails) {
                let lambda = mx.lambda.union(&l);
                let mu = mx.mu.union(&m);
                if lambda.size() + mu.size() > cap {
                    continue;
                }
                let tail = rest.union(&my.tail);
                if !keep_tails && !tail.is_empty() {
                    continue;
                }
                let base = (cx.clone() * cy.clone()).scale(&c);
                for (cm, mid) in F::mid_product(&mx.mid, &my.mid) {
                    out.add_term(
                        Monomial {
                            lambda: lambda.clone(),
                            mu: mu.clone(),
                            mid,
                            tail: tail.clone(),
                        },
                        base.clone() * cm,
                    );
                }
            }
        }
    }
    out
}

/// Normal-ordered product `x·y` modulo the left ideal `K`, dropping terms of
/// creation weight above `cap`.
///
/// `x` may carry annihilation modes; they are contracted against the
/// creation modes of `y`. Terms of `y` that carry annihilators lie in `K`
/// already and contribute nothing.
pub fn multiply<F: Flavor>(x: &Element<F>, y: &Element<F>, cap: u32) -> Element<F> {
    product_impl(x, y, cap, false)
}

/// The full normal-ordered product in the mode algebra, keeping annihilation
/// modes. Used to assemble operator formulas from individual modes.
pub fn product<F: Flavor>(x: &Element<F>, y: &Element<F>, cap: u32) -> Element<F> {
    product_impl(x, y, cap, true)
}

/// Product of a sequence of factors, evaluated as left multiplication on
/// the quotient by `K`: `f_1 · (f_2 · ( … (f_n · 1)))`.
pub fn act_on_vacuum<F: Flavor>(factors: &[Element<F>], cap: u32) -> Element<F> {
    factors
        .iter()
        .rev()
        .fold(Element::one(), |acc, f| multiply(f, &acc, cap))
}

impl Element<UFlavor> {
    /// `c γ^e u^m` as a coefficient-only element.
    pub fn u_power(m: i32) -> Self {
        Self::term(
            Monomial {
                mid: UMid { upow: m, a0: 0 },
                ..Default::default()
            },
            GammaPoly::one(),
        )
    }

    pub fn gamma(e: u32) -> Self {
        Self::term(Monomial::default(), GammaPoly::monomial(q(1), e))
    }
}

impl Element<BFlavor> {
    /// `b_0` (only the rational flavor has a bare `b_0`).
    pub fn b0() -> Self {
        Self::term(
            Monomial {
                mid: BMid { a0: 0, b0: 1 },
                ..Default::default()
            },
            q(1),
        )
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::default(), c)
    }
}

/// Eigenvalue of the Cartan zero mode on `a_{-λ} b_{-μ} a_0^k b_0^l`:
/// `2 (p(λ) - p(μ) + k - l)`.
pub fn h_weight(m: &BMonomial) -> i64 {
    2 * (m.lambda.len() as i64 - m.mu.len() as i64 + m.mid.a0 as i64 - m.mid.b0 as i64)
}

/// Basis order on tail-free words: pair order, then larger power of `a_0`,
/// then *smaller* power of `b_0`.
pub fn basis_cmp(x: &BMonomial, y: &BMonomial) -> std::cmp::Ordering {
    x.pair()
        .cmp(&y.pair())
        .then_with(|| x.mid.a0.cmp(&y.mid.a0))
        .then_with(|| y.mid.b0.cmp(&x.mid.b0))
}

fn fmt_modes(out: &mut String, letter: char, p: &Partition, negative: bool) {
    for (n, m) in p.multiplicities() {
        let idx = if negative { format!("-{n}") } else { n.to_string() };
        out.push_str(&format!("{letter}[{idx}]"));
        if m > 1 {
            out.push_str(&format!("^{m}"));
        }
    }
}

/// Canonical rendering of a word, e.g. `a[-1]b[-2]a0^1`; the empty word is
/// `1`.
pub fn fmt_word<F: Flavor>(m: &Monomial<F::Mid>) -> String {
    let mut s = String::new();
    fmt_modes(&mut s, 'a', &m.lambda, true);
    fmt_modes(&mut s, 'b', &m.mu, true);
    s += &F::fmt_mid(&m.mid);
    fmt_modes(&mut s, 'a', &m.tail.a, false);
    fmt_modes(&mut s, 'b', &m.tail.b, false);
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// Splits a rendered coefficient into a sign and a magnitude so sums read
/// `x - y` instead of `x + -y`.
pub(crate) fn join_signed(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => s.push('-'),
            (_, false) => s.push_str(" + "),
            (_, true) => s.push_str(" - "),
        }
        s.push_str(&body);
    }
    s
}

pub(crate) fn fmt_gamma_coeff(c: &GammaPoly, upow: i32) -> (bool, String) {
    let (neg, mut s) = match c.as_monomial() {
        Some((r, e)) => {
            let neg = r < q(0);
            let r = if neg { -r } else { r };
            let mut s = format_q(&r);
            if e > 0 {
                s += &format!("*g^{e}");
            }
            (neg, s)
        }
        None => (false, format!("({c})")),
    };
    if upow != 0 {
        s += &format!("*u^{upow}");
    }
    (neg, s)
}

impl<F: Flavor> fmt::Display for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let (neg, coeff) = F::fmt_coeff(m, c);
                (neg, format!("{coeff} * {}", fmt_word::<F>(m)))
            })
            .collect();
        write!(f, "{}", join_signed(terms))
    }
}
