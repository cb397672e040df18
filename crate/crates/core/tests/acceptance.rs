//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chiral_core::adjoint::{adjoint_monomial, adjoint_monomial_with_slack, t_coeff};
use chiral_core::character::{character_direct, character_product};
use chiral_core::coeff::{binomial, factorial, q, q_frac, GammaPoly, Q};
use chiral_core::lifting::{
    constant_lifting_operator, constant_lifting_vector, constant_lifting_with_slack,
    closed_form_lifting, closed_form_operator, solve_lifting_operator, solve_with_report,
    solve_with_slack, verify_invariance, verify_invariance_with_slack, InvariantVector,
    VectorKey,
};
use chiral_core::modealgebra::{
    multiply, BElement, BMid, Monomial, Tail, UElement, UMid,
};
use chiral_core::partitions::{enumerate_pairs, partitions_of, Partition, PartitionPair};
use chiral_core::quasimod::{DimensionTable, Dimensions, FunctionSymbol};
use chiral_core::sl2::{act_zero_mode, act_zero_mode_with_cap, Sl2Generator};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pair(l: &str, m: &str) -> PartitionPair {
    PartitionPair::new(l.parse().unwrap(), m.parse().unwrap())
}

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

fn pairs_up_to(weight: u32) -> impl Iterator<Item = PartitionPair> {
    (1..=weight).flat_map(enumerate_pairs)
}

fn u_term(l: &str, m: &str, upow: i32, a0: u32, c: i64, g: u32) -> UElement {
    UElement::term(
        Monomial {
            lambda: part(l),
            mu: part(m),
            mid: UMid { upow, a0 },
            tail: Tail::default(),
        },
        GammaPoly::monomial(q(c), g),
    )
}

fn b_term(l: &str, m: &str, a0: u32, c: Q) -> BElement {
    BElement::term(
        Monomial {
            lambda: part(l),
            mu: part(m),
            mid: BMid { a0, b0: 0 },
            tail: Tail::default(),
        },
        c,
    )
}

fn golden_expansion() -> UElement {
    u_term("1", "1", 0, 0, 1, 0)
        .add(&u_term("", "2", -1, 0, 2, 1))
        .add(&u_term("", "1,1", -2, 0, -1, 2))
        .add(&u_term("", "1,1", -1, 1, 2, 1))
}

fn criterion_1() -> Check {
    let got = adjoint_monomial(&pair("1", "1")).map_err(|e| e.to_string())?;
    ensure(got.element == golden_expansion(), || {
        format!("got {}", got.element)
    })?;
    Ok(format!("{}", got.element))
}

/// Independent reading of the exponent laws on a computed expansion.
fn shape_violation(p: &PartitionPair, e: &UElement) -> Option<String> {
    let l = p.level();
    let mut diagonal = None;
    for (m, c) in e.iter() {
        let target = PartitionPair::new(m.lambda.clone(), m.mu.clone());
        let lt = target.level();
        let s = m.mid.a0 as i64;
        if !m.tail.is_empty() {
            return Some(format!("{p:?}: term with annihilators {m:?}"));
        }
        if target.weight() != p.weight() {
            return Some(format!("{p:?}: weight changes in {m:?}"));
        }
        if target > *p {
            return Some(format!("{p:?}: {target:?} lies above the source"));
        }
        if s < 0 || 2 * s > l - lt {
            return Some(format!("{p:?}: a_0 power {s} out of range at {target:?}"));
        }
        if m.mid.upow as i64 != l + lt + s {
            return Some(format!("{p:?}: u power {} at {target:?}", m.mid.upow));
        }
        match c.as_monomial() {
            Some((_, g)) if g as i64 == l - lt - s => {}
            _ => return Some(format!("{p:?}: gamma part {c} at {target:?}")),
        }
        if lt == l {
            if target != *p || s != 0 {
                return Some(format!("{p:?}: level is kept by {target:?}"));
            }
            diagonal = Some(c.clone());
        }
    }
    if diagonal != Some(GammaPoly::one()) {
        return Some(format!("{p:?}: diagonal coefficient is {diagonal:?}"));
    }
    None
}

fn criterion_2() -> Check {
    let mut count = 0;
    for p in pairs_up_to(5) {
        let e = adjoint_monomial(&p).map_err(|e| e.to_string())?;
        if let Some(v) = shape_violation(&p, &e.element) {
            return Err(v);
        }
        count += 1;
    }
    Ok(format!("{count} pairs"))
}

fn check_sl2_equations(a: &BElement, h: i64, f: i64) -> std::result::Result<(), String> {
    let cap = a.iter().map(|(m, _)| m.creation_weight()).max().unwrap_or(0);
    ensure(act_zero_mode(Sl2Generator::E, a).is_zero(), || format!("E.A != 0 for {a}"))?;
    ensure(act_zero_mode(Sl2Generator::H, a) == a.scale(&q(h)), || {
        format!("H.A != {h}A for {a}")
    })?;
    let want = multiply(a, &BElement::b0(), cap).scale(&q(f));
    ensure(act_zero_mode(Sl2Generator::F, a) == want, || {
        format!("F.A != {f}A b_0 for {a}")
    })
}

fn negative_level_pairs(weight: u32) -> Vec<PartitionPair> {
    pairs_up_to(weight).filter(|p| p.level() <= -1).collect()
}

fn level_zero_pairs(weight: u32) -> Vec<PartitionPair> {
    pairs_up_to(weight).filter(|p| p.level() == 0).collect()
}

fn criterion_3() -> Check {
    let pairs = negative_level_pairs(6);
    for p in &pairs {
        let (op, rep) = solve_with_report(p).map_err(|e| format!("{p:?}: {e}"))?;
        for (r, row) in rep.c.iter().enumerate() {
            ensure(row[r + 1..].iter().all(Zero::is_zero), || {
                format!("{p:?}: C not lower triangular in row {r}")
            })?;
            let d = &rep.quotient[r];
            let i = d.a0 as i64 + 1;
            let want = q(i * (2 * d.pair.level() + i + 1));
            ensure(row[r] == want && row[r] < Q::zero(), || {
                format!("{p:?}: diagonal {r} is {}, expected {want}", row[r])
            })?;
        }
        let lead = BElement::from_pair(p);
        ensure(op.element.truncate(p.weight()).iter().any(|t| lead.iter().next() == Some(t)), || {
            format!("{p:?}: leading term is not a_-λ b_-μ with coefficient 1")
        })?;
        let l = p.level();
        check_sl2_equations(&op.element, 2 * l, -2 * l).map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn criterion_4() -> Check {
    let want = b_term("", "2,1", 0, q(1)).add(&b_term("", "1,1,1", 1, q_frac(1, 4)));
    let solved = solve_lifting_operator(&pair("", "2,1")).map_err(|e| e.to_string())?;
    ensure(solved.element == want, || format!("solve gives {}", solved.element))?;
    let closed = closed_form_operator(&part("2,1"), 4).map_err(|e| e.to_string())?;
    ensure(closed.element == solved.element, || {
        format!("closed form gives {}", closed.element)
    })?;
    let v = closed_form_lifting(&part("2,1"), 4).map_err(|e| e.to_string())?;
    let report = verify_invariance(&v).map_err(|e| e.to_string())?;
    ensure(report.invariant, || format!("residual {}", report.residual))?;
    Ok(format!("{}", solved.element))
}

fn key(l: &str, m: &str, s: FunctionSymbol) -> VectorKey {
    VectorKey {
        pair: pair(l, m),
        upow: 0,
        symbol: s,
    }
}

fn criterion_5() -> Check {
    let v = constant_lifting_vector(&pair("1", "1")).map_err(|e| e.to_string())?;
    let e = FunctionSymbol::eisenstein();
    let mut want = InvariantVector::from_pair(&pair("1", "1"), &FunctionSymbol::unit());
    want.add_term(key("", "2", e.clone()), GammaPoly::constant(q(2)));
    want.add_term(key("", "1,1", e.derivative(1).unwrap()), GammaPoly::one());
    ensure(v == want, || format!("got {v}"))?;
    let report = verify_invariance(&v).map_err(|e| e.to_string())?;
    ensure(report.invariant && report.residual.is_zero(), || {
        format!("residual {}", report.residual)
    })?;
    Ok(format!("{v}"))
}

fn criterion_6() -> Check {
    let pairs = level_zero_pairs(6);
    for p in &pairs {
        let op = constant_lifting_operator(p).map_err(|e| format!("{p:?}: {e}"))?;
        check_sl2_equations(&op.element, -2, 2).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(op.element.iter().all(|(m, _)| m.mid.b0 == 0), || {
            format!("{p:?}: operator contains b_0")
        })?;
        let v = constant_lifting_vector(p).map_err(|e| format!("{p:?}: {e}"))?;
        let report = verify_invariance(&v).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(report.invariant, || format!("{p:?}: residual {}", report.residual))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

/// `t^μ_ν` for all partitions of `n`, keyed by position in `parts`.
struct TTable {
    parts: Vec<Partition>,
    t: Vec<Vec<Q>>,
}

impl TTable {
    fn new(n: u32) -> std::result::Result<Self, String> {
        let parts = partitions_of(n);
        let mut t = vec![vec![Q::zero(); parts.len()]; parts.len()];
        for (i, mu) in parts.iter().enumerate() {
            for (j, nu) in parts.iter().enumerate() {
                if nu.len() >= mu.len() {
                    t[i][j] = t_coeff(mu, nu).map_err(|e| e.to_string())?;
                }
            }
        }
        Ok(TTable { parts, t })
    }

    fn len_of(&self, i: usize) -> usize {
        self.parts[i].len()
    }

    /// Sum over chains from `i` to `j` whose part counts rise by `steps`.
    fn chain(&self, i: usize, j: usize, steps: &[usize]) -> Q {
        let mut row: Vec<Q> = (0..self.parts.len())
            .map(|k| if k == i { Q::one() } else { Q::zero() })
            .collect();
        let mut level = self.len_of(i);
        for &s in steps {
            level += s;
            row = (0..self.parts.len())
                .map(|k| {
                    if self.len_of(k) != level {
                        return Q::zero();
                    }
                    (0..self.parts.len()).map(|m| &row[m] * &self.t[m][k]).sum()
                })
                .collect();
        }
        row[j].clone()
    }
}

/// All sequences of `k` nonnegative integers with the given sum.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, k - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn multinomial(parts: &[usize]) -> Q {
    let total: usize = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(total as u32), |acc, &p| acc / factorial(p as u32))
}

fn criterion_7() -> Check {
    let mut checked = 0;
    for n in 1..=6 {
        let tab = TTable::new(n)?;
        let size = tab.parts.len();
        for i in 0..size {
            for j in 0..size {
                let (pi, pj) = (tab.len_of(i), tab.len_of(j));
                if pj < pi {
                    continue;
                }
                let d = pj - pi;
                let t = &tab.t[i][j];
                ensure(t.is_integer(), || format!("t not integral at {:?}", tab.parts[i]))?;
                // two-step chains with an arbitrary middle level
                for s in 0..=d {
                    ensure(tab.chain(i, j, &[s, d - s]) == binomial(d as u32, s as u32) * t, || {
                        format!("binomial chain fails at {:?} -> {:?}, s = {s}", tab.parts[i], tab.parts[j])
                    })?;
                }
                // longer chains with arbitrary steps
                for k in 1..=d + 1 {
                    for steps in compositions(d, k) {
                        ensure(tab.chain(i, j, &steps) == multinomial(&steps) * t, || {
                            format!("chain {steps:?} fails at {:?} -> {:?}", tab.parts[i], tab.parts[j])
                        })?;
                    }
                }
                // unit steps give k!
                if d >= 2 {
                    ensure(tab.chain(i, j, &vec![1; d]) == factorial(d as u32) * t, || {
                        format!("k! chain fails at {:?} -> {:?}", tab.parts[i], tab.parts[j])
                    })?;
                }
                // alternating identity
                if d > 0 {
                    let mut sum = Q::zero();
                    for s1 in 0..=d {
                        for s2 in 0..=d - s1 {
                            let sign = q_frac(-1, 2);
                            let e = s1 + (d - s1 - s2);
                            let w = (0..e).fold(Q::one(), |acc, _| acc * &sign);
                            sum += tab.chain(i, j, &[s1, s2, d - s1 - s2]) * w;
                        }
                    }
                    ensure(sum.is_zero(), || {
                        format!("alternating sum is {sum} at {:?} -> {:?}", tab.parts[i], tab.parts[j])
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs of partitions"))
}

fn random_table(seed: u64, max_weight: i64) -> DimensionTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: BTreeMap<i64, u64> = (0..=max_weight)
        .step_by(2)
        .map(|k| (k, rng.gen_range(0..6)))
        .collect();
    DimensionTable::new("random", dims).expect("even nonnegative weights")
}

fn criterion_8() -> Check {
    let order = 30;
    let full = Dimensions::FullModular;
    let d = character_direct(order, &full).map_err(|e| e.to_string())?;
    let p = character_product(order, &full).map_err(|e| e.to_string())?;
    ensure(d == p, || "full modular group: series differ".to_string())?;
    let start: Vec<Q> = [1, 0, 2, 4].into_iter().map(q).collect();
    ensure(d.coeffs()[..4] == start[..], || format!("starts {:?}", &d.coeffs()[..4]))?;
    let table = Dimensions::Table(random_table(0x5eed, 2 * order as i64));
    let d = character_direct(order, &table).map_err(|e| e.to_string())?;
    let p = character_product(order, &table).map_err(|e| e.to_string())?;
    ensure(d == p, || "random table: series differ".to_string())?;
    Ok(format!("agree through q^{order}"))
}

fn criterion_9() -> Check {
    for p in pairs_up_to(5) {
        let base = adjoint_monomial(&p).map_err(|e| e.to_string())?;
        let more = adjoint_monomial_with_slack(&p, 1).map_err(|e| e.to_string())?;
        ensure(base.element == more.element, || format!("adjoint of {p:?} moves"))?;
    }
    for p in negative_level_pairs(6) {
        let (base, _) = solve_with_report(&p).map_err(|e| e.to_string())?;
        let (more, _) = solve_with_slack(&p, 1).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(base == more, || format!("solve of {p:?} moves"))?;
    }
    for p in level_zero_pairs(6) {
        let base = constant_lifting_operator(&p).map_err(|e| e.to_string())?;
        let more = constant_lifting_with_slack(&p, 1).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(base == more, || format!("constant lifting of {p:?} moves"))?;
    }
    let v = constant_lifting_vector(&pair("1", "1")).map_err(|e| e.to_string())?;
    let report = verify_invariance_with_slack(&v, 1).map_err(|e| e.to_string())?;
    ensure(report.invariant, || format!("residual {}", report.residual))?;
    Ok("no result changes".to_string())
}

fn sl2_basis(weight: u32) -> Vec<BElement> {
    let mut out = Vec::new();
    for p in enumerate_pairs(weight) {
        for a0 in 0..=2 {
            for b0 in 0..=2 {
                let m = Monomial {
                    lambda: p.lambda.clone(),
                    mu: p.mu.clone(),
                    mid: BMid { a0, b0 },
                    tail: Tail::default(),
                };
                out.push(BElement::term(m, q(1)));
            }
        }
    }
    out
}

fn criterion_10() -> Check {
    use Sl2Generator::*;
    let mut count = 0;
    for weight in 0..=4 {
        for v in sl2_basis(weight) {
            let act = |g, x: &BElement| act_zero_mode_with_cap(g, x, weight);
            let he = act(H, &act(E, &v)).sub(&act(E, &act(H, &v)));
            ensure(he == act(E, &v).scale(&q(2)), || format!("[H,E] fails on {v}"))?;
            let hf = act(H, &act(F, &v)).sub(&act(F, &act(H, &v)));
            ensure(hf == act(F, &v).scale(&q(-2)), || format!("[H,F] fails on {v}"))?;
            let ef = act(E, &act(F, &v)).sub(&act(F, &act(E, &v)));
            ensure(ef == act(H, &v), || format!("[E,F] fails on {v}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} monomials"))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "adjoint golden expansion", budget: secs(1), run: criterion_1 },
        Criterion { name: "structure constant laws, weight <= 5", budget: secs(30), run: criterion_2 },
        Criterion { name: "lifting solver, weight <= 6", budget: secs(120), run: criterion_3 },
        Criterion { name: "canonical example, two routes", budget: secs(1), run: criterion_4 },
        Criterion { name: "constant lifting of ((1),(1))", budget: secs(1), run: criterion_5 },
        Criterion { name: "constant lifting, weight <= 6", budget: secs(120), run: criterion_6 },
        Criterion { name: "t coefficient identities, weight <= 6", budget: secs(60), run: criterion_7 },
        Criterion { name: "character cross-check to q^30", budget: secs(10), run: criterion_8 },
        Criterion { name: "truncation stability", budget: secs(300), run: criterion_9 },
        Criterion { name: "sl2 brackets, weight <= 4", budget: secs(30), run: criterion_10 },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let over = elapsed > c.budget;
        let status = if outcome.is_ok() && !over { "PASS" } else { "FAIL" };
        let detail = match outcome {
            Ok(s) if over => format!("{s}; over budget of {:?}", c.budget),
            Ok(s) => s,
            Err(e) => e,
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {status} {} ({:.2?}): {detail}",
            i + 1,
            c.name,
            elapsed
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
