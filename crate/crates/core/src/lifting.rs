//! Invariant vectors with a prescribed leading term.
//!
//! An operator `A` in the mode algebra, free of `b_0`, is turned into a
//! vector by letting it act on a function symbol: `a_0` differentiates.
//! Three constructions are provided:
//!
//! * [`solve_lifting_operator`] for pairs of negative level, by a triangular
//!   linear solve against the `sl₂` lowering operator;
//! * [`constant_lifting_operator`] for pairs of level zero, whose correction
//!   terms are carried by the quasi-modular `E`;
//! * [`closed_form_operator`] for pure `b` words, from the `t` coefficients in
//!   closed form.
//!
//! [`verify_invariance`] checks the result symbolically for every group
//! element at once.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::adjoint::{adjoint_monomial_with_slack, c_from_expansion, t_coeff};
use crate::coeff::{binomial, factorial, falling, q, sign, Coefficient, GammaPoly, Q};
use crate::error::{Error, Result};
use crate::modealgebra::{
    fmt_gamma_coeff, fmt_word, join_signed, multiply, BElement, BFlavor, BMid, Monomial, Tail,
};
use crate::partitions::{basis_sets, partitions_of, MaximalDescriptor, Partition, PartitionPair};
use crate::quasimod::{transform_rule, FunctionSymbol};
use crate::sl2::{act_zero_mode_with_cap, Sl2Generator};

/// Which construction produced an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftingKind {
    Solved,
    Constant,
    ClosedForm,
}

impl fmt::Display for LiftingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LiftingKind::Solved => "solved",
            LiftingKind::Constant => "constant",
            LiftingKind::ClosedForm => "closed_form",
        };
        write!(f, "{s}")
    }
}

/// A `b_0`-free operator attached to a leading pair.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftingOperator {
    pub leading: PartitionPair,
    pub element: BElement,
    pub kind: LiftingKind,
}

/// The matrices of the triangular solve, for inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// Maximal vectors of the top weight, decreasing.
    pub top: Vec<MaximalDescriptor>,
    /// Basis of the quotient one weight lower, decreasing.
    pub quotient: Vec<MaximalDescriptor>,
    /// Columns for top elements without `a_0`.
    pub b: Vec<Vec<Q>>,
    /// Square lower triangular block for top elements with `a_0`.
    pub c: Vec<Vec<Q>>,
    /// Coordinates of the solution in the top basis.
    pub solution: Vec<Q>,
}

fn descriptor_word(d: &MaximalDescriptor) -> Monomial<BMid> {
    Monomial {
        lambda: d.pair.lambda.clone(),
        mu: d.pair.mu.clone(),
        mid: BMid { a0: d.a0, b0: 0 },
        tail: Tail::default(),
    }
}

fn check_operator_equations(
    a: &BElement,
    cap: u32,
    expected_h: i64,
    f_factor: i64,
    what: &str,
) -> Result<()> {
    let fail = |eq: &str| Err(Error::internal(format!("{what}: {eq} does not hold")));
    let act = |x| act_zero_mode_with_cap(x, a, cap);
    if !act(Sl2Generator::E).is_zero() {
        return fail("E.A = 0");
    }
    if act(Sl2Generator::H) != a.scale(&q(expected_h)) {
        return fail("H.A = hA");
    }
    let ab = multiply(a, &BElement::b0(), cap).scale(&q(f_factor));
    if act(Sl2Generator::F) != ab {
        return fail("F.A = cAb");
    }
    Ok(())
}

/// The lifting operator of a pair of negative level.
pub fn solve_lifting_operator(p0: &PartitionPair) -> Result<LiftingOperator> {
    solve_with_report(p0).map(|(op, _)| op)
}

/// As [`solve_lifting_operator`], also returning the matrices.
pub fn solve_with_report(p0: &PartitionPair) -> Result<(LiftingOperator, SolveReport)> {
    solve_with_slack(p0, 0)
}

/// As [`solve_with_report`] with every truncation cap raised by `slack`.
pub fn solve_with_slack(p0: &PartitionPair, slack: u32) -> Result<(LiftingOperator, SolveReport)> {
    let cap = p0.weight() + slack;
    let l0 = p0.level();
    if l0 >= 0 {
        return Err(Error::Precondition(format!(
            "the linear solve needs a pair of negative level, {p0:?} has level {l0}"
        )));
    }
    let sets = basis_sets(p0);
    let top = sets.get(&(2 * l0)).cloned().unwrap_or_default();
    let quotient = sets.get(&(2 * l0 - 2)).cloned().unwrap_or_default();
    if top.first().map(|d| &d.pair) != Some(p0) {
        return Err(Error::internal(format!("{p0:?} does not head its own basis")));
    }
    let shifted: Vec<MaximalDescriptor> = top
        .iter()
        .filter(|d| d.a0 > 0)
        .map(|d| MaximalDescriptor {
            pair: d.pair.clone(),
            a0: d.a0 - 1,
        })
        .collect();
    if shifted != quotient {
        return Err(Error::internal(format!(
            "quotient basis of {p0:?} is not the a_0-shift of the top basis"
        )));
    }
    let free = top.len() - quotient.len();
    let row_of: BTreeMap<Monomial<BMid>, usize> = quotient
        .iter()
        .enumerate()
        .map(|(i, d)| (descriptor_word(d), i))
        .collect();

    // image of each top basis vector, projected away from the b_0 terms
    let mut columns = Vec::with_capacity(top.len());
    for d in &top {
        let image =
            act_zero_mode_with_cap(Sl2Generator::F, &BElement::term(descriptor_word(d), q(1)), cap);
        let mut col = vec![Q::zero(); quotient.len()];
        for (m, c) in image.iter() {
            if m.mid.b0 > 0 {
                continue;
            }
            let row = row_of.get(m).ok_or_else(|| {
                Error::internal(format!("F image of {d:?} leaves the stable set: {m:?}"))
            })?;
            col[*row] = c.clone();
        }
        columns.push(col);
    }
    let rows = quotient.len();
    let b: Vec<Vec<Q>> = (0..rows).map(|r| (0..free).map(|j| columns[j][r].clone()).collect()).collect();
    let c: Vec<Vec<Q>> = (0..rows)
        .map(|r| (0..rows).map(|j| columns[free + j][r].clone()).collect())
        .collect();

    for (r, row) in c.iter().enumerate() {
        if row.iter().skip(r + 1).any(|x| !x.is_zero()) {
            return Err(Error::internal(format!("C is not lower triangular for {p0:?}")));
        }
        let d = &quotient[r];
        let i = (d.a0 + 1) as i64;
        let expected = q(i * (2 * d.pair.level() + i + 1));
        if row[r] != expected || row[r] >= q(0) {
            return Err(Error::internal(format!(
                "diagonal entry {} of C for {p0:?} is {}, expected {}",
                r, row[r], expected
            )));
        }
    }

    // x_0 = 1, remaining free coordinates 0, forward substitution for the rest
    let mut x = vec![Q::zero(); top.len()];
    x[0] = Q::one();
    for r in 0..rows {
        let mut rhs = -b[r][0].clone();
        for j in 0..r {
            rhs -= &c[r][j] * &x[free + j];
        }
        x[free + r] = rhs / &c[r][r];
    }

    let mut element = BElement::zero();
    for (d, xi) in top.iter().zip(&x) {
        element.add_term(descriptor_word(d), xi.clone());
    }
    check_operator_equations(&element, cap, 2 * l0, -2 * l0, &format!("solved lifting of {p0:?}"))?;
    let report = SolveReport {
        top,
        quotient,
        b,
        c,
        solution: x,
    };
    Ok((
        LiftingOperator {
            leading: p0.clone(),
            element,
            kind: LiftingKind::Solved,
        },
        report,
    ))
}

/// The correction operator for a pair of level zero; the invariant vector is
/// `a_{-λ} b_{-μ} + A·E`.
pub fn constant_lifting_operator(p0: &PartitionPair) -> Result<LiftingOperator> {
    constant_lifting_with_slack(p0, 0)
}

/// As [`constant_lifting_operator`] with every truncation cap raised by
/// `slack`.
pub fn constant_lifting_with_slack(p0: &PartitionPair, slack: u32) -> Result<LiftingOperator> {
    if p0.level() != 0 {
        return Err(Error::Precondition(format!(
            "constant lifting needs a pair of level zero, {p0:?} has level {}",
            p0.level()
        )));
    }
    let exp = adjoint_monomial_with_slack(p0, slack)?;
    let mut element = BElement::zero();
    for (m, _) in exp.element.iter() {
        let target = m.pair();
        if target == *p0 || m.mid.a0 != 0 {
            continue;
        }
        let l = target.level();
        let k = (-l - 1) as u32;
        let c0 = c_from_expansion(&exp, &target, 0);
        let sign = sign(k as i64);
        element.add_term(
            Monomial {
                lambda: target.lambda.clone(),
                mu: target.mu.clone(),
                mid: BMid { a0: k, b0: 0 },
                tail: Tail::default(),
            },
            sign / factorial(k) * c0,
        );
    }
    let op = LiftingOperator {
        leading: p0.clone(),
        element,
        kind: LiftingKind::Constant,
    };
    let cap = p0.weight() + slack;
    check_operator_equations(&op.element, cap, -2, 2, &format!("constant lifting of {p0:?}"))?;
    check_constant_shift(&op, slack)?;
    Ok(op)
}

/// The correction operator times `γ u^{-1}` must reproduce the change of
/// the leading word under the group, on the constant function.
fn check_constant_shift(op: &LiftingOperator, slack: u32) -> Result<()> {
    let unit = FunctionSymbol::unit();
    let mut lhs = InvariantVector::zero();
    for (m, c) in op.element.iter() {
        let k = m.mid.a0;
        // a_0^k (γ u^{-1}) = falling(-1, k) γ^{k+1} u^{-1-k}
        lhs.add_term(
            VectorKey {
                pair: m.pair(),
                upow: -1 - k as i32,
                symbol: unit.clone(),
            },
            GammaPoly::monomial(c * falling(-1, k), k + 1),
        );
    }
    let lead = InvariantVector::from_pair(&op.leading, &unit);
    let rhs = apply_group_with_slack(&lead, slack)?.sub(&lead);
    if lhs != rhs {
        return Err(Error::internal(format!(
            "constant lifting of {:?}: correction does not match the group action, residual {}",
            op.leading,
            lhs.sub(&rhs)
        )));
    }
    Ok(())
}

/// The invariant vector `a_{-λ} b_{-μ} + A·E` for a pair of level zero.
pub fn constant_lifting_vector(p0: &PartitionPair) -> Result<InvariantVector> {
    let op = constant_lifting_operator(p0)?;
    let lead = InvariantVector::from_pair(p0, &FunctionSymbol::unit());
    Ok(lead.add(&apply_to_symbol(&op.element, &FunctionSymbol::eisenstein())?))
}

/// The closed-form operator for a pure `b` word `b_{-μ}` with `p(μ) = l`:
/// `Σ c_ν b_{-ν} a_0^{p(ν)-l}` with `c_ν = t^μ_ν / Π_{t<p(ν)-l} (2l + t)`.
pub fn closed_form_operator(mu: &Partition, weight: i64) -> Result<LiftingOperator> {
    if weight <= 0 || weight % 2 != 0 {
        return Err(Error::Precondition(format!(
            "the form must have even positive weight, got {weight}"
        )));
    }
    let l = weight / 2;
    if mu.len() as i64 != l {
        return Err(Error::Precondition(format!(
            "{mu:?} has {} parts, a form of weight {weight} needs {l}",
            mu.len()
        )));
    }
    let mut element = BElement::zero();
    for nu in partitions_of(mu.size()) {
        let s = nu.len() as i64 - l;
        if s < 0 {
            continue;
        }
        let t = t_coeff(mu, &nu)?;
        let c = (0..s).fold(t, |acc, i| acc / q(2 * l + i));
        element.add_term(
            Monomial {
                lambda: Partition::empty(),
                mu: nu,
                mid: BMid { a0: s as u32, b0: 0 },
                tail: Tail::default(),
            },
            c,
        );
    }
    Ok(LiftingOperator {
        leading: PartitionPair::new(Partition::empty(), mu.clone()),
        element,
        kind: LiftingKind::ClosedForm,
    })
}

/// The closed-form invariant vector with leading term `b_{-μ} f` for a
/// modular form `f` of the given weight.
pub fn closed_form_lifting(mu: &Partition, weight: i64) -> Result<InvariantVector> {
    let op = closed_form_operator(mu, weight)?;
    apply_to_symbol(&op.element, &FunctionSymbol::modular("f", weight))
}

/// Key of a term `γ^e u^m a_{-λ} b_{-μ} S(b)` (the `γ` power lives in the
/// coefficient).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct VectorKey {
    pub pair: PartitionPair,
    pub upow: i32,
    pub symbol: FunctionSymbol,
}

/// A formal sum of words applied to function symbols, with coefficients in
/// `ℚ[γ]` and Laurent powers of `u`.
#[derive(Clone, PartialEq, Default)]
pub struct InvariantVector {
    terms: BTreeMap<VectorKey, GammaPoly>,
}

impl InvariantVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `a_{-λ} b_{-μ} S(b)`.
    pub fn from_pair(p: &PartitionPair, s: &FunctionSymbol) -> Self {
        let mut v = Self::zero();
        v.add_term(
            VectorKey {
                pair: p.clone(),
                upow: 0,
                symbol: s.clone(),
            },
            GammaPoly::one(),
        );
        v
    }

    pub fn add_term(&mut self, k: VectorKey, c: GammaPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_insert_with(GammaPoly::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
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

    pub fn iter(&self) -> impl Iterator<Item = (&VectorKey, &GammaPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &VectorKey) -> GammaPoly {
        self.terms.get(k).cloned().unwrap_or_else(GammaPoly::zero)
    }

    /// The common conformal weight of all terms, if there is one.
    pub fn conformal_weight(&self) -> Option<u32> {
        let mut w = self.terms.keys().map(|k| k.pair.weight());
        let first = w.next()?;
        w.all(|x| x == first).then_some(first)
    }
}

impl fmt::Debug for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let (neg, coeff) = fmt_gamma_coeff(c, k.upow);
                let word = fmt_word::<BFlavor>(&Monomial {
                    lambda: k.pair.lambda.clone(),
                    mu: k.pair.mu.clone(),
                    ..Default::default()
                });
                let body = match (word.as_str(), k.symbol.is_unit()) {
                    (_, true) => format!("{coeff} * {word}"),
                    ("1", false) => format!("{coeff} * {}", k.symbol),
                    _ => format!("{coeff} * {word} {}", k.symbol),
                };
                (neg, body)
            })
            .collect();
        write!(f, "{}", join_signed(terms))
    }
}

/// Lets a `b_0`-free operator act on `S(b)`; `a_0` differentiates.
pub fn apply_to_symbol(op: &BElement, s: &FunctionSymbol) -> Result<InvariantVector> {
    let mut out = InvariantVector::zero();
    for (m, c) in op.iter() {
        if m.mid.b0 > 0 || !m.tail.is_empty() {
            return Err(Error::Precondition(format!(
                "only b_0-free, normal ordered operators act on functions, got {m:?}"
            )));
        }
        if let Some(ds) = s.derivative(m.mid.a0) {
            out.add_term(
                VectorKey {
                    pair: m.pair(),
                    upow: 0,
                    symbol: ds,
                },
                GammaPoly::constant(c.clone()),
            );
        }
    }
    Ok(out)
}

/// The operator of a lifting applied to a symbol, plus the leading word for
/// the constant construction.
pub fn lifting_vector(op: &LiftingOperator, s: &FunctionSymbol) -> Result<InvariantVector> {
    match op.kind {
        LiftingKind::Constant => {
            let lead = InvariantVector::from_pair(&op.leading, &FunctionSymbol::unit());
            Ok(lead.add(&apply_to_symbol(&op.element, &FunctionSymbol::eisenstein())?))
        }
        _ => apply_to_symbol(&op.element, s),
    }
}

/// `π(g) v` for a symbolic `g`, with `γ` and `u = γ b + δ` kept formal.
pub fn apply_group(v: &InvariantVector) -> Result<InvariantVector> {
    apply_group_with_slack(v, 0)
}

/// As [`apply_group`] with the adjoint truncation raised by `slack`.
pub fn apply_group_with_slack(v: &InvariantVector, slack: u32) -> Result<InvariantVector> {
    let mut out = InvariantVector::zero();
    for (key, coeff) in v.iter() {
        let scalar = match (key.upow, coeff.as_constant()) {
            (0, Some(c)) => c,
            _ => {
                return Err(Error::Precondition(format!(
                    "group action expects constant coefficients, got {coeff} u^{}",
                    key.upow
                )))
            }
        };
        let exp = adjoint_monomial_with_slack(&key.pair, slack)?;
        let rule = transform_rule(&key.symbol)?;
        for (m, c1) in exp.element.iter() {
            let s = m.mid.a0;
            for ((m2, s2), c2) in &rule.terms {
                let base = (c1.clone() * c2.clone()).scale(&scalar);
                // a_0^s (u^{m2} S) = Σ_r C(s,r) falling(m2,r) γ^r u^{m2-r} S^{(s-r)}
                for r in 0..=s {
                    let Some(ds) = s2.derivative(s - r) else {
                        continue;
                    };
                    let k = binomial(s, r) * falling(*m2 as i64, r);
                    if k.is_zero() {
                        continue;
                    }
                    out.add_term(
                        VectorKey {
                            pair: m.pair(),
                            upow: m.mid.upow + m2 - r as i32,
                            symbol: ds,
                        },
                        base.times_gamma(r).scale(&k),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of an invariance check: `residual = π(g)v - v`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub residual: InvariantVector,
}

/// Checks `π(g) v = v` as an identity in `γ`, `u` and the symbols.
///
/// A zero residual proves invariance under every `g` whose symbols obey
/// their transformation laws. A nonzero residual only says this sufficient
/// condition fails.
pub fn verify_invariance(v: &InvariantVector) -> Result<InvarianceReport> {
    verify_invariance_with_slack(v, 0)
}

/// As [`verify_invariance`] with the adjoint truncation raised by `slack`.
pub fn verify_invariance_with_slack(v: &InvariantVector, slack: u32) -> Result<InvarianceReport> {
    if !v.is_empty() && v.conformal_weight().is_none() {
        return Err(Error::Precondition(
            "vector is not homogeneous in conformal weight".to_string(),
        ));
    }
    let residual = apply_group_with_slack(v, slack)?.sub(v);
    Ok(InvarianceReport {
        invariant: residual.is_zero(),
        residual,
    })
}
