//! Infinitesimal `sl₂` action on operators with rational coefficients.
//!
//! The zero modes of `E = -a_{-1}`, `H = -2 a_{-1} b_0` and
//! `F = a_{-1} b_0² + 2 b_{-1}` act on operators by commutator. The action on
//! a single mode is known in closed form; on a word it is extended by the
//! Leibniz rule and the result is normal ordered modulo `K`.

use std::fmt;
use std::str::FromStr;

use crate::coeff::q;
use crate::error::{Error, Result};
use crate::modealgebra::{act_on_vacuum, h_weight, multiply, product, BElement, BMonomial};

/// One of the three standard `sl₂` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sl2Generator {
    E,
    F,
    H,
}

impl fmt::Display for Sl2Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sl2Generator::E => "E",
            Sl2Generator::F => "F",
            Sl2Generator::H => "H",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Sl2Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "E" | "e" => Ok(Sl2Generator::E),
            "F" | "f" => Ok(Sl2Generator::F),
            "H" | "h" => Ok(Sl2Generator::H),
            other => Err(Error::parse("sl2 generator", other, "expected E, F or H")),
        }
    }
}

/// A single mode appearing as a factor of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    A(i32),
    B(i32),
}

impl Mode {
    fn element(self) -> BElement {
        match self {
            Mode::A(n) => BElement::mode_a(n),
            Mode::B(0) => BElement::b0(),
            Mode::B(n) => BElement::mode_b(n),
        }
    }
}

fn factors(m: &BMonomial) -> Vec<Mode> {
    let mut out: Vec<Mode> = m.lambda.parts().iter().map(|&n| Mode::A(-(n as i32))).collect();
    out.extend(m.mu.parts().iter().map(|&n| Mode::B(-(n as i32))));
    out.extend(std::iter::repeat_n(Mode::A(0), m.mid.a0 as usize));
    out.extend(std::iter::repeat_n(Mode::B(0), m.mid.b0 as usize));
    out
}

fn pp(x: Mode, y: Mode, cap: u32) -> BElement {
    product(&x.element(), &y.element(), cap)
}

/// `F_0` on a single mode, with annihilators kept so the result can be
/// multiplied into the rest of a word.
fn f_on_mode(x: Mode, cap: u32) -> BElement {
    let c = cap as i32;
    let mut out = BElement::zero();
    match x {
        // -2 Σ_{i≥0} a_{-1-i} b_{-n+i+1} - 2 Σ_{i≥0} b_{-n-i} a_i
        Mode::A(idx) => {
            let n = -idx;
            for i in 0..=c {
                out = out.sub(&pp(Mode::A(-1 - i), Mode::B(-n + i + 1), cap).scale(&q(2)));
                out = out.sub(&pp(Mode::B(-n - i), Mode::A(i), cap).scale(&q(2)));
            }
        }
        // Σ_{i+j=m} b_{-i} b_{-j} over all integers
        Mode::B(idx) => {
            let m = -idx;
            for i in -c..=m + c {
                out = out.add(&pp(Mode::B(-i), Mode::B(-(m - i)), cap));
            }
        }
    }
    out
}

fn e_on_mode(x: Mode) -> BElement {
    match x {
        Mode::B(0) => BElement::constant(q(-1)),
        _ => BElement::zero(),
    }
}

/// The dot action `X_0 . v`, truncated at the weight of `v`.
pub fn act_zero_mode(x: Sl2Generator, v: &BElement) -> BElement {
    let cap = v.iter().map(|(m, _)| m.creation_weight()).max().unwrap_or(0);
    act_zero_mode_with_cap(x, v, cap)
}

/// The dot action at an explicit weight cap.
pub fn act_zero_mode_with_cap(x: Sl2Generator, v: &BElement, cap: u32) -> BElement {
    let v = v.reduce_mod_k();
    if x == Sl2Generator::H {
        return v.flat_map_terms(|m, c| vec![(m.clone(), c * q(h_weight(m)))]);
    }
    let mut out = BElement::zero();
    for (m, c) in v.iter() {
        let word = factors(m);
        for i in 0..word.len() {
            let image = match x {
                Sl2Generator::E => e_on_mode(word[i]),
                _ => f_on_mode(word[i], cap),
            };
            if image.is_zero() {
                continue;
            }
            let prefix: Vec<BElement> = word[..i].iter().map(|f| f.element()).collect();
            let suffix: Vec<BElement> = word[i + 1..].iter().map(|f| f.element()).collect();
            let tail = multiply(&image, &act_on_vacuum(&suffix, cap), cap);
            let head = prefix
                .iter()
                .fold(BElement::one(), |acc, f| product(&acc, f, cap));
            out = out.add(&multiply(&head, &tail, cap).scale(c));
        }
    }
    out
}
