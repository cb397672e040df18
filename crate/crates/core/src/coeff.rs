//! Exact coefficient rings.
//!
//! Two rings are used throughout: the rationals [`Q`] and the ring of
//! polynomials in the matrix entry `γ` with rational coefficients,
//! [`GammaPoly`]. Both implement [`Coefficient`], which is all the mode
//! algebra needs from a coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = |reason: &str| Error::parse("rational", s, reason);
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Q::new(num, den))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

/// Binomial coefficient `C(n, k)` for nonnegative arguments.
pub fn binomial(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let k = k.min(n - k);
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q((n - i) as i64) / q((i + 1) as i64);
    }
    acc
}

/// Falling factorial `m (m-1) ... (m-j+1)` for a possibly negative `m`.
pub fn falling(m: i64, j: u32) -> Q {
    (0..j as i64).fold(Q::one(), |acc, i| acc * q(m - i))
}

/// Converts an integral rational to `i64`, if it is one and fits.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// What the mode algebra needs from a coefficient ring.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_q(x: Q) -> Self;
    fn scale(&self, x: &Q) -> Self;
    /// Multiplies by `γ^e`. The rationals have no `γ`; asking them to carry
    /// one is a flavor error and panics.
    fn times_gamma(&self, e: u32) -> Self;
}

impl Coefficient for Q {
    fn from_q(x: Q) -> Self {
        x
    }
    fn scale(&self, x: &Q) -> Self {
        self * x
    }
    fn times_gamma(&self, e: u32) -> Self {
        assert!(e == 0, "rational coefficients cannot carry powers of gamma");
        self.clone()
    }
}

/// Dense polynomial in `γ` over the rationals, constant term first.
///
/// Invariant: no trailing zero coefficients, so the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GammaPoly {
    coeffs: Vec<Q>,
}

impl GammaPoly {
    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        let mut p = GammaPoly { coeffs };
        p.trim();
        p
    }

    /// `c γ^e`.
    pub fn monomial(c: Q, e: u32) -> Self {
        let mut coeffs = vec![Q::zero(); e as usize + 1];
        coeffs[e as usize] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.len().checked_sub(1).map(|d| d as u32)
    }

    pub fn coeff(&self, e: u32) -> Q {
        self.coeffs.get(e as usize).cloned().unwrap_or_else(Q::zero)
    }

    /// If the polynomial is a single term `c γ^e`, returns `(c, e)`.
    pub fn as_monomial(&self) -> Option<(Q, u32)> {
        let mut nz = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero());
        let (e, c) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((c.clone(), e as u32))
    }

    /// Constant term if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

impl fmt::Debug for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                if e == 0 {
                    format_q(c)
                } else {
                    format!("{}*g^{}", format_q(c), e)
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for GammaPoly {
    type Output = GammaPoly;
    fn add(self, rhs: GammaPoly) -> GammaPoly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        GammaPoly::from_coeffs(long)
    }
}

impl Neg for GammaPoly {
    type Output = GammaPoly;
    fn neg(self) -> GammaPoly {
        GammaPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for GammaPoly {
    type Output = GammaPoly;
    fn sub(self, rhs: GammaPoly) -> GammaPoly {
        self + (-rhs)
    }
}

impl Mul for GammaPoly {
    type Output = GammaPoly;
    fn mul(self, rhs: GammaPoly) -> GammaPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return GammaPoly::default();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        GammaPoly::from_coeffs(out)
    }
}

impl Zero for GammaPoly {
    fn zero() -> Self {
        GammaPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for GammaPoly {
    fn one() -> Self {
        GammaPoly::constant(Q::one())
    }
}

impl Coefficient for GammaPoly {
    fn from_q(x: Q) -> Self {
        GammaPoly::constant(x)
    }
    fn scale(&self, x: &Q) -> Self {
        GammaPoly::from_coeffs(self.coeffs.iter().map(|c| c * x).collect())
    }
    fn times_gamma(&self, e: u32) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![Q::zero(); e as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        GammaPoly { coeffs }
    }
}

/// Sign helper: `(-1)^k`.
pub fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "3", "-7", "1/4", "-22/7"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(format_q(&parse_q("2/4").unwrap()), "1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn gamma_poly_arithmetic() {
        let g = GammaPoly::monomial(q(1), 1);
        let one = GammaPoly::one();
        let p = (one.clone() + g.clone()) * (one.clone() - g.clone());
        assert_eq!(p, GammaPoly::from_coeffs(vec![q(1), q(0), q(-1)]));
        assert_eq!((g.clone() - g.clone()).degree(), None);
        assert_eq!(g.times_gamma(2).as_monomial(), Some((q(1), 3)));
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(binomial(5, 2), q(10));
        assert_eq!(binomial(2, 5), q(0));
        assert_eq!(factorial(4), q(24));
        assert_eq!(falling(-1, 2), q(2));
        assert_eq!(falling(3, 4), q(0));
    }
}
