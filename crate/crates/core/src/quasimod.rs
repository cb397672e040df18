//! Formal transformation laws of modular and quasi-modular functions, plus
//! the small amount of concrete q-series and dimension data the rest of the
//! crate needs.
//!
//! A transformation law expresses `S(gb)` for a symbol `S` as a finite sum of
//! `c γ^e u^m S_j(b)` with `u = γ b + δ`. Differentiating a law in `b` gives
//! the law of the derivative, using `d(gb)/db = u^{-2}` and `du/db = γ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{q, Coefficient, GammaPoly, Q};
use crate::error::{Error, Result};

/// Name of the constant function `1`.
pub const UNIT: &str = "1";
/// Name of the rescaled weight-2 Eisenstein series.
pub const EISENSTEIN: &str = "E";

/// A formal function of `b`: `name` differentiated `depth` times.
///
/// `weight` is the weight of the underlying (undifferentiated) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FunctionSymbol {
    pub name: String,
    pub depth: u32,
    pub weight: i64,
}

impl FunctionSymbol {
    pub fn unit() -> Self {
        FunctionSymbol {
            name: UNIT.to_string(),
            depth: 0,
            weight: 0,
        }
    }

    pub fn eisenstein() -> Self {
        FunctionSymbol {
            name: EISENSTEIN.to_string(),
            depth: 0,
            weight: 2,
        }
    }

    pub fn modular(name: &str, weight: i64) -> Self {
        FunctionSymbol {
            name: name.to_string(),
            depth: 0,
            weight,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.name == UNIT
    }

    /// The `k`-th derivative, or `None` when it vanishes identically.
    pub fn derivative(&self, k: u32) -> Option<Self> {
        if self.is_unit() && k > 0 {
            return None;
        }
        Some(FunctionSymbol {
            depth: self.depth + k,
            ..self.clone()
        })
    }
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.depth {
            0 => write!(f, "{}", self.name),
            1 => write!(f, "{}'", self.name),
            2 => write!(f, "{}''", self.name),
            d => write!(f, "{}^({d})", self.name),
        }
    }
}

/// `source(gb) = Σ coeff · u^upow · symbol(b)`, coefficients in `ℚ[γ]`.
#[derive(Clone, PartialEq, Debug)]
pub struct TransformRule {
    pub source: FunctionSymbol,
    pub terms: BTreeMap<(i32, FunctionSymbol), GammaPoly>,
}

impl TransformRule {
    fn add(&mut self, upow: i32, s: FunctionSymbol, c: GammaPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((upow, s)).or_insert_with(GammaPoly::zero);
        *slot = slot.clone() + c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// The coefficient `c^i_j` in front of the `j`-th derivative, read off a
    /// rule for a modular form.
    pub fn derivative_coefficient(&self, j: u32) -> Q {
        self.terms
            .iter()
            .filter(|((_, s), _)| s.depth == j && s.name == self.source.name)
            .map(|(_, c)| c.coeffs().iter().fold(Q::zero(), |a, x| a + x))
            .fold(Q::zero(), |a, x| a + x)
    }

    /// Sets `γ = 0, u = 1`.
    pub fn at_identity(&self) -> BTreeMap<FunctionSymbol, Q> {
        let mut out: BTreeMap<FunctionSymbol, Q> = BTreeMap::new();
        for ((_, s), c) in &self.terms {
            *out.entry(s.clone()).or_insert_with(Q::zero) += c.coeff(0);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl fmt::Display for TransformRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|((upow, s), c)| {
                let (neg, coeff) = crate::modealgebra::fmt_gamma_coeff(c, *upow);
                (neg, format!("{coeff} * {s}"))
            })
            .collect();
        write!(
            f,
            "{}(gb) = {}",
            self.source,
            crate::modealgebra::join_signed(terms)
        )
    }
}

/// The law for an undifferentiated symbol.
fn base_rule(s: &FunctionSymbol) -> Result<TransformRule> {
    let mut rule = TransformRule {
        source: FunctionSymbol {
            depth: 0,
            ..s.clone()
        },
        terms: BTreeMap::new(),
    };
    let base = rule.source.clone();
    match s.name.as_str() {
        UNIT => rule.add(0, base, GammaPoly::one()),
        // E(gb) = u² E(b) - γ u
        EISENSTEIN => {
            rule.add(2, base, GammaPoly::one());
            rule.add(1, FunctionSymbol::unit(), GammaPoly::monomial(q(-1), 1));
        }
        _ if s.weight > 0 && s.weight % 2 == 0 => {
            rule.add(s.weight as i32, base, GammaPoly::one());
        }
        _ => return Err(Error::UnknownSymbol(s.to_string())),
    }
    Ok(rule)
}

/// The law for the next derivative.
pub fn derive_transform(r: &TransformRule) -> TransformRule {
    let mut next = TransformRule {
        source: FunctionSymbol {
            depth: r.source.depth + 1,
            ..r.source.clone()
        },
        terms: BTreeMap::new(),
    };
    // f^{(i+1)}(gb) = u² d/db[Σ c u^m S] = Σ c (m γ u^{m+1} S + u^{m+2} S')
    for ((m, s), c) in &r.terms {
        if *m != 0 {
            next.add(m + 1, s.clone(), c.times_gamma(1).scale(&q(*m as i64)));
        }
        if let Some(ds) = s.derivative(1) {
            next.add(m + 2, ds, c.clone());
        }
    }
    next
}

/// The full law for a (possibly differentiated) symbol.
pub fn transform_rule(s: &FunctionSymbol) -> Result<TransformRule> {
    let mut rule = base_rule(s)?;
    if s.is_unit() && s.depth > 0 {
        rule.terms.clear();
        rule.source = s.clone();
        return Ok(rule);
    }
    for _ in 0..s.depth {
        rule = derive_transform(&rule);
    }
    Ok(rule)
}

/// Table of `c^i_j` (`0 ≤ j ≤ i ≤ max_depth`) for a modular form of the
/// given weight.
pub fn derivative_table(weight: i64, max_depth: u32) -> Result<Vec<Vec<Q>>> {
    let mut rule = base_rule(&FunctionSymbol::modular("f", weight))?;
    let mut out = Vec::new();
    for i in 0..=max_depth {
        if i > 0 {
            rule = derive_transform(&rule);
        }
        out.push((0..=i).map(|j| rule.derivative_coefficient(j)).collect());
    }
    Ok(out)
}

/// A power series in `q` known exactly through `q^order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: Vec<Q>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Q::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Q::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Q {
        &self.coeffs[n]
    }

    pub fn add_at(&mut self, n: usize, c: &Q) {
        if n <= self.order() {
            self.coeffs[n] += c;
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let order = self.order().min(other.order());
        QSeries {
            coeffs: (0..=order)
                .map(|n| &self.coeffs[n] + &other.coeffs[n])
                .collect(),
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> QSeries {
        let mut out = Self::zero(self.order());
        for n in k..=self.order() {
            out.coeffs[n] = self.coeffs[n - k].clone();
        }
        out
    }

    /// `Π_{i=1}^{n} (1 - q^i)^{-1}` through `q^order`.
    pub fn partition_product(n: usize, order: usize) -> QSeries {
        let mut s = Self::one(order);
        for i in 1..=n.min(order) {
            // dividing by (1 - q^i) is a running sum with stride i
            for k in i..=order {
                let prev = s.coeffs[k - i].clone();
                s.coeffs[k] += prev;
            }
        }
        s
    }
}

fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

/// `1 - 24 Σ σ(n) q^n` through `q^order`.
pub fn e2_qexpansion(order: usize) -> QSeries {
    let mut s = QSeries::one(order);
    for n in 1..=order {
        s.coeffs[n] = q(-24 * sigma(n as u64) as i64);
    }
    s
}

/// Graded dimensions of spaces of modular forms for some group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DimensionTable {
    pub group: String,
    dims: BTreeMap<i64, u64>,
}

#[derive(Serialize, Deserialize)]
struct DimensionTableJson {
    group: String,
    dims: BTreeMap<String, u64>,
}

impl DimensionTable {
    pub fn new(group: &str, dims: BTreeMap<i64, u64>) -> Result<Self> {
        if let Some(k) = dims.keys().find(|&&k| k < 0 || k % 2 != 0) {
            return Err(Error::Precondition(format!(
                "dimension table entry at weight {k}: only even nonnegative weights may be listed"
            )));
        }
        Ok(DimensionTable {
            group: group.to_string(),
            dims,
        })
    }

    /// The classical dimensions for the full modular group, weights `0..=max`.
    pub fn full_modular(max_weight: i64) -> Self {
        let dims = (0..=max_weight)
            .step_by(2)
            .map(|k| (k, full_modular_dim(k)))
            .collect();
        DimensionTable {
            group: "full".to_string(),
            dims,
        }
    }

    pub fn entries(&self) -> &BTreeMap<i64, u64> {
        &self.dims
    }

    /// `dim M_k`; zero for odd or negative `k`, an error if `k` is missing.
    pub fn dim(&self, weight: i64) -> Result<u64> {
        if weight < 0 || weight % 2 != 0 {
            return Ok(0);
        }
        self.dims
            .get(&weight)
            .copied()
            .ok_or_else(|| Error::MissingDimension {
                group: self.group.clone(),
                weight,
            })
    }

    pub fn to_json(&self) -> String {
        let j = DimensionTableJson {
            group: self.group.clone(),
            dims: self.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        };
        serde_json::to_string(&j).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: DimensionTableJson = serde_json::from_str(s)
            .map_err(|e| Error::parse("dimension table", s, e.to_string()))?;
        let mut dims = BTreeMap::new();
        for (k, v) in j.dims {
            let w: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::parse("dimension table", &k, "weight keys must be integers"))?;
            dims.insert(w, v);
        }
        Self::new(&j.group, dims)
    }
}

/// `dim M_k(SL₂(ℤ))` for any integer `k`.
pub fn full_modular_dim(k: i64) -> u64 {
    if k < 0 || k % 2 != 0 {
        0
    } else if k % 12 == 2 {
        (k / 12) as u64
    } else {
        (k / 12) as u64 + 1
    }
}

/// Where dimension data comes from.
#[derive(Clone, Debug)]
pub enum Dimensions {
    /// Closed-form dimensions for the full modular group.
    FullModular,
    Table(DimensionTable),
}

impl Dimensions {
    pub fn dim(&self, weight: i64) -> Result<u64> {
        match self {
            Dimensions::FullModular => Ok(full_modular_dim(weight)),
            Dimensions::Table(t) => t.dim(weight),
        }
    }
}

/// `dim M_k` from either source.
pub fn dim_m(weight: i64, dims: &Dimensions) -> Result<u64> {
    dims.dim(weight)
}
