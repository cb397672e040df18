//! Consistency checks at weight ≤ 5, for quick reproduction from the shell.

use chiral_core::adjoint::adjoint_monomial;
use chiral_core::character::{character_direct, character_product};
use chiral_core::coeff::q;
use chiral_core::lifting::{
    constant_lifting_vector, closed_form_operator, solve_lifting_operator, verify_invariance,
};
use chiral_core::modealgebra::{BElement, BMid, Monomial, Tail};
use chiral_core::partitions::{enumerate_pairs, Partition, PartitionPair};
use chiral_core::quasimod::Dimensions;
use chiral_core::sl2::{act_zero_mode_with_cap, Sl2Generator};
use serde_json::json;

const MAX_WEIGHT: u32 = 5;

type Check = Result<String, String>;
type NamedCheck = (&'static str, fn() -> Check);

fn err(e: chiral_core::Error) -> String {
    e.to_string()
}

fn pairs() -> impl Iterator<Item = PartitionPair> {
    (1..=MAX_WEIGHT).flat_map(enumerate_pairs)
}

fn adjoint_shapes() -> Check {
    let mut n = 0;
    for p in pairs() {
        adjoint_monomial(&p).map_err(err)?;
        n += 1;
    }
    Ok(format!("{n} expansions have the expected shape"))
}

fn golden_adjoint() -> Check {
    let p = PartitionPair::new(Partition::ones(1), Partition::ones(1));
    let text = adjoint_monomial(&p).map_err(err)?.element.to_string();
    let want = "1 * a[-1]b[-1] + 2*g^1*u^-1 * b[-2] + 2*g^1*u^-1 * b[-1]^2a0^1 - 1*g^2*u^-2 * b[-1]^2";
    if text == want {
        Ok(text)
    } else {
        Err(format!("got {text}"))
    }
}

fn solves() -> Check {
    let mut n = 0;
    for p in pairs().filter(|p| p.level() < 0) {
        solve_lifting_operator(&p).map_err(|e| format!("{p:?}: {e}"))?;
        n += 1;
    }
    Ok(format!("{n} operators satisfy their sl2 equations"))
}

fn closed_form_agrees() -> Check {
    for p in pairs().filter(|p| p.lambda.is_empty() && p.mu.len() >= 2) {
        let solved = solve_lifting_operator(&p).map_err(err)?;
        let closed = closed_form_operator(&p.mu, 2 * p.mu.len() as i64).map_err(err)?;
        if solved.element != closed.element {
            return Err(format!("{p:?}: {} vs {}", solved.element, closed.element));
        }
    }
    Ok("solve and closed form agree on pure b words".to_string())
}

fn constant_liftings() -> Check {
    let mut n = 0;
    for p in pairs().filter(|p| p.level() == 0) {
        let v = constant_lifting_vector(&p).map_err(|e| format!("{p:?}: {e}"))?;
        let r = verify_invariance(&v).map_err(err)?;
        if !r.invariant {
            return Err(format!("{p:?}: residual {}", r.residual));
        }
        n += 1;
    }
    Ok(format!("{n} vectors are invariant"))
}

fn character_routes() -> Check {
    let d = character_direct(30, &Dimensions::FullModular).map_err(err)?;
    let p = character_product(30, &Dimensions::FullModular).map_err(err)?;
    if d != p {
        return Err("series differ".to_string());
    }
    Ok("series agree through q^30".to_string())
}

fn sl2_brackets() -> Check {
    use Sl2Generator::*;
    let mut n = 0;
    for weight in 0..=3 {
        for p in enumerate_pairs(weight) {
            for a0 in 0..=2 {
                for b0 in 0..=2 {
                    let m = Monomial {
                        lambda: p.lambda.clone(),
                        mu: p.mu.clone(),
                        mid: BMid { a0, b0 },
                        tail: Tail::default(),
                    };
                    let v = BElement::term(m, q(1));
                    let act = |g, x: &BElement| act_zero_mode_with_cap(g, x, weight);
                    let ef = act(E, &act(F, &v)).sub(&act(F, &act(E, &v)));
                    let he = act(H, &act(E, &v)).sub(&act(E, &act(H, &v)));
                    let hf = act(H, &act(F, &v)).sub(&act(F, &act(H, &v)));
                    if ef != act(H, &v)
                        || he != act(E, &v).scale(&q(2))
                        || hf != act(F, &v).scale(&q(-2))
                    {
                        return Err(format!("bracket fails on {v}"));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} monomials"))
}

/// Runs every check; returns whether all passed and the rendered report.
pub fn run(as_json: bool) -> (bool, String) {
    let checks: [NamedCheck; 7] = [
        ("adjoint golden expansion", golden_adjoint),
        ("adjoint shapes", adjoint_shapes),
        ("lifting solves", solves),
        ("closed form", closed_form_agrees),
        ("constant liftings", constant_liftings),
        ("character", character_routes),
        ("sl2 brackets", sl2_brackets),
    ];
    let results: Vec<(&str, Check)> = checks.iter().map(|(name, f)| (*name, f())).collect();
    let ok = results.iter().all(|(_, r)| r.is_ok());
    let out = if as_json {
        let rows: Vec<_> = results
            .iter()
            .map(|(name, r)| match r {
                Ok(d) => json!({"check": name, "passed": true, "detail": d}),
                Err(d) => json!({"check": name, "passed": false, "detail": d}),
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("values serialize")
    } else {
        results
            .iter()
            .map(|(name, r)| match r {
                Ok(d) => format!("PASS {name}: {d}"),
                Err(d) => format!("FAIL {name}: {d}"),
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    (ok, out)
}
