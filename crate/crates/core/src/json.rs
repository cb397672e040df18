//! JSON encoding of elements, vectors and lifting operators.
//!
//! Every term is an object with the fields `kind`, `lambda`, `mu`, `upow`,
//! `a0`, `b0`, `gamma_poly`, `coeff` and `symbol`, where only the fields that
//! make sense for the kind are present. Rationals are written as `"p/q"`
//! strings and partitions as `"2,1"` strings, so nothing is lost.

use serde::{Deserialize, Serialize};

use crate::coeff::{format_q, parse_q, GammaPoly, Q};
use crate::error::{Error, Result};
use crate::lifting::{InvariantVector, LiftingKind, LiftingOperator, VectorKey};
use crate::modealgebra::{BFlavor, BMid, Element, Flavor, Monomial, Tail, UFlavor, UMid};
use crate::partitions::{Partition, PartitionPair};
use crate::quasimod::FunctionSymbol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub kind: String,
    pub lambda: String,
    pub mu: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upow: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_poly: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<FunctionSymbol>,
}

impl TermJson {
    fn bare(kind: &str, lambda: &Partition, mu: &Partition) -> Self {
        TermJson {
            kind: kind.to_string(),
            lambda: lambda.to_string(),
            mu: mu.to_string(),
            upow: None,
            a0: None,
            b0: None,
            tail_a: None,
            tail_b: None,
            gamma_poly: None,
            coeff: None,
            symbol: None,
        }
    }

    fn set_tail(&mut self, t: &Tail) {
        if !t.a.is_empty() {
            self.tail_a = Some(t.a.to_string());
        }
        if !t.b.is_empty() {
            self.tail_b = Some(t.b.to_string());
        }
    }

    fn tail(&self) -> Result<Tail> {
        let parse = |s: &Option<String>| -> Result<Partition> {
            s.as_deref().unwrap_or("").parse()
        };
        Ok(Tail {
            a: parse(&self.tail_a)?,
            b: parse(&self.tail_b)?,
        })
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::parse(
                "term",
                &self.kind,
                format!("expected a term of kind {kind:?}"),
            ));
        }
        Ok(())
    }

    fn coeff_q(&self) -> Result<Q> {
        let s = self
            .coeff
            .as_deref()
            .ok_or_else(|| Error::parse("term", &self.kind, "missing coeff"))?;
        parse_q(s)
    }

    fn gamma(&self) -> Result<GammaPoly> {
        let v = self
            .gamma_poly
            .as_ref()
            .ok_or_else(|| Error::parse("term", &self.kind, "missing gamma_poly"))?;
        Ok(GammaPoly::from_coeffs(
            v.iter().map(|s| parse_q(s)).collect::<Result<Vec<Q>>>()?,
        ))
    }
}

fn gamma_json(c: &GammaPoly) -> Vec<String> {
    c.coeffs().iter().map(format_q).collect()
}

/// Term-level encoding for one flavor of element.
pub trait JsonFlavor: Flavor {
    const KIND: &'static str;
    fn encode(m: &Monomial<Self::Mid>, c: &Self::Coeff) -> TermJson;
    fn decode(t: &TermJson) -> Result<(Monomial<Self::Mid>, Self::Coeff)>;
}

impl JsonFlavor for BFlavor {
    const KIND: &'static str = "b";

    fn encode(m: &Monomial<BMid>, c: &Q) -> TermJson {
        let mut t = TermJson::bare(Self::KIND, &m.lambda, &m.mu);
        t.a0 = Some(m.mid.a0);
        t.b0 = Some(m.mid.b0);
        t.set_tail(&m.tail);
        t.coeff = Some(format_q(c));
        t
    }

    fn decode(t: &TermJson) -> Result<(Monomial<BMid>, Q)> {
        t.expect_kind(Self::KIND)?;
        let m = Monomial {
            lambda: t.lambda.parse()?,
            mu: t.mu.parse()?,
            mid: BMid {
                a0: t.a0.unwrap_or(0),
                b0: t.b0.unwrap_or(0),
            },
            tail: t.tail()?,
        };
        Ok((m, t.coeff_q()?))
    }
}

impl JsonFlavor for UFlavor {
    const KIND: &'static str = "u";

    fn encode(m: &Monomial<UMid>, c: &GammaPoly) -> TermJson {
        let mut t = TermJson::bare(Self::KIND, &m.lambda, &m.mu);
        t.upow = Some(m.mid.upow);
        t.a0 = Some(m.mid.a0);
        t.set_tail(&m.tail);
        t.gamma_poly = Some(gamma_json(c));
        t
    }

    fn decode(t: &TermJson) -> Result<(Monomial<UMid>, GammaPoly)> {
        t.expect_kind(Self::KIND)?;
        let m = Monomial {
            lambda: t.lambda.parse()?,
            mu: t.mu.parse()?,
            mid: UMid {
                upow: t.upow.unwrap_or(0),
                a0: t.a0.unwrap_or(0),
            },
            tail: t.tail()?,
        };
        Ok((m, t.gamma()?))
    }
}

pub fn element_terms<F: JsonFlavor>(e: &Element<F>) -> Vec<TermJson> {
    e.iter().map(|(m, c)| F::encode(m, c)).collect()
}

pub fn element_from_terms<F: JsonFlavor>(terms: &[TermJson]) -> Result<Element<F>> {
    let mut e = Element::zero();
    for t in terms {
        let (m, c) = F::decode(t)?;
        e.add_term(m, c);
    }
    Ok(e)
}

pub fn element_to_json<F: JsonFlavor>(e: &Element<F>) -> String {
    serde_json::to_string(&element_terms(e)).expect("plain data serializes")
}

pub fn element_from_json<F: JsonFlavor>(s: &str) -> Result<Element<F>> {
    let terms: Vec<TermJson> =
        serde_json::from_str(s).map_err(|e| Error::parse("element", s, e.to_string()))?;
    element_from_terms(&terms)
}

pub fn vector_terms(v: &InvariantVector) -> Vec<TermJson> {
    v.iter()
        .map(|(k, c)| {
            let mut t = TermJson::bare("vector", &k.pair.lambda, &k.pair.mu);
            t.upow = Some(k.upow);
            t.gamma_poly = Some(gamma_json(c));
            t.symbol = Some(k.symbol.clone());
            t
        })
        .collect()
}

pub fn vector_from_terms(terms: &[TermJson]) -> Result<InvariantVector> {
    let mut v = InvariantVector::zero();
    for t in terms {
        t.expect_kind("vector")?;
        let symbol = t
            .symbol
            .clone()
            .ok_or_else(|| Error::parse("term", &t.kind, "missing symbol"))?;
        v.add_term(
            VectorKey {
                pair: PartitionPair::new(t.lambda.parse()?, t.mu.parse()?),
                upow: t.upow.unwrap_or(0),
                symbol,
            },
            t.gamma()?,
        );
    }
    Ok(v)
}

pub fn vector_to_json(v: &InvariantVector) -> String {
    serde_json::to_string(&vector_terms(v)).expect("plain data serializes")
}

pub fn vector_from_json(s: &str) -> Result<InvariantVector> {
    let terms: Vec<TermJson> =
        serde_json::from_str(s).map_err(|e| Error::parse("vector", s, e.to_string()))?;
    vector_from_terms(&terms)
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    lambda: String,
    mu: String,
    lifting_kind: String,
    terms: Vec<TermJson>,
}

pub fn operator_to_json(op: &LiftingOperator) -> String {
    let j = OperatorJson {
        lambda: op.leading.lambda.to_string(),
        mu: op.leading.mu.to_string(),
        lifting_kind: op.kind.to_string(),
        terms: element_terms(&op.element),
    };
    serde_json::to_string(&j).expect("plain data serializes")
}

pub fn operator_from_json(s: &str) -> Result<LiftingOperator> {
    let j: OperatorJson =
        serde_json::from_str(s).map_err(|e| Error::parse("lifting operator", s, e.to_string()))?;
    let kind = match j.lifting_kind.as_str() {
        "solved" => LiftingKind::Solved,
        "constant" => LiftingKind::Constant,
        "closed_form" => LiftingKind::ClosedForm,
        other => return Err(Error::parse("lifting kind", other, "unknown kind")),
    };
    Ok(LiftingOperator {
        leading: PartitionPair::new(j.lambda.parse()?, j.mu.parse()?),
        element: element_from_terms(&j.terms)?,
        kind,
    })
}
