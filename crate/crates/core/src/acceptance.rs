//! The acceptance suite: nine end-to-end checks with a pass/fail line each.
//!
//! Shared by the `selftest` command and the `acceptance` integration test.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::algebra::{jm_element, mult, trace_form_radical_vectors, Element, StructureTable};
use crate::cells::CellModule;
use crate::diagrams::{compose, enumerate, flip, matching_count, tensor, BrauerDiagram, Generator};
use crate::error::Result;
use crate::gtheory::{op_matrix, partitions_up_to, path_character, preceq, wedge_op_matrix, wt0, OpKind};
use crate::klmod::{decomposition_matrix_kl, KLContext};
use crate::oracle::decomp_oracle;
use crate::scalar::{q, q_frac, Scalar, Q};
use crate::symgrp::{lambda_plus, Partition};
use crate::transition::TransitionMatrix;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} ({:.2} s, budget {} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

fn run(id: u8, name: &'static str, budget_secs: u64, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (ok, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let passed = ok && elapsed <= budget;
    let detail = if ok && !passed { format!("{detail}; over the time budget") } else { detail };
    CriterionResult { id, name, passed, detail, elapsed, budget }
}

/// Diagram counts against `(m+s−1)!!`.
pub fn diagram_counts() -> CriterionResult {
    run(1, "diagram counts", 10, || {
        let mut checked = 0;
        for total in 0..=12usize {
            for m in 0..=total {
                let got = enumerate(m, total - m);
                let want = if total % 2 == 0 { matching_count(total) } else { 0 };
                let mut sorted = got.clone();
                sorted.dedup();
                if got.len() as u128 != want || sorted.len() != got.len() {
                    return Ok((false, format!("enumerate({m}, {}) has {} diagrams, expected {want}", total - m, got.len())));
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} hom-spaces with m + s <= 12")))
    })
}

fn gen(g: Generator) -> BrauerDiagram {
    BrauerDiagram::generator(g).expect("valid generator")
}

fn comp(parts: &[&BrauerDiagram]) -> (BrauerDiagram, usize) {
    let mut acc = parts[0].clone();
    let mut loops = 0;
    for p in &parts[1..] {
        let (d, l) = compose(&acc, p).expect("composable");
        acc = d;
        loops += l;
    }
    (acc, loops)
}

fn pad(a: usize, d: &BrauerDiagram, b: usize) -> BrauerDiagram {
    tensor(&tensor(&BrauerDiagram::identity(a), d), &BrauerDiagram::identity(b))
}

/// Each relation as `(lhs factors, rhs factors)`, factors applied left to right.
fn relations() -> Vec<(&'static str, Vec<BrauerDiagram>, Vec<BrauerDiagram>)> {
    let (u, a, s, i1) = (gen(Generator::Cup), gen(Generator::Cap), gen(Generator::Cross), BrauerDiagram::identity(1));
    let s1 = tensor(&s, &i1);
    let s2 = tensor(&i1, &s);
    vec![
        ("S S = 1", vec![s.clone(), s.clone()], vec![BrauerDiagram::identity(2)]),
        ("braid", vec![s1.clone(), s2.clone(), s1.clone()], vec![s2.clone(), s1.clone(), s2.clone()]),
        ("zigzag left", vec![tensor(&i1, &u), tensor(&a, &i1)], vec![i1.clone()]),
        ("zigzag right", vec![tensor(&u, &i1), tensor(&i1, &a)], vec![i1.clone()]),
        ("cap absorbs crossing", vec![s.clone(), a.clone()], vec![a.clone()]),
        ("cup absorbs crossing", vec![u.clone(), s.clone()], vec![u.clone()]),
        ("strand through cap", vec![s1.clone(), tensor(&i1, &a)], vec![s2.clone(), tensor(&a, &i1)]),
        ("strand through cup", vec![tensor(&i1, &u), s1.clone()], vec![tensor(&u, &i1), s2.clone()]),
    ]
}

fn random_diagram(rng: &mut StdRng, m: usize, s: usize) -> BrauerDiagram {
    let mut verts: Vec<usize> = (1..=m + s).collect();
    verts.shuffle(rng);
    let pairs: Vec<[usize; 2]> = verts.chunks(2).map(|c| [c[0], c[1]]).collect();
    BrauerDiagram::from_pairs(m, s, &pairs).expect("perfect matching")
}

fn random_arity(rng: &mut StdRng, parity: usize, max: usize) -> usize {
    loop {
        let n = rng.gen_range(0..=max);
        if n % 2 == parity % 2 {
            return n;
        }
    }
}

/// Relations of the Brauer category padded to width at most 5, interchange, flip.
pub fn relation_suite() -> CriterionResult {
    run(2, "relation suite", 30, || {
        let mut instances = 0;
        for (name, lhs, rhs) in relations() {
            let width = lhs[0].bottom().max(lhs.iter().map(|d| d.top()).max().unwrap());
            for a in 0..=5usize.saturating_sub(width) {
                for b in 0..=5 - width - a {
                    let l: Vec<BrauerDiagram> = lhs.iter().map(|d| pad(a, d, b)).collect();
                    let r: Vec<BrauerDiagram> = rhs.iter().map(|d| pad(a, d, b)).collect();
                    if comp(&l.iter().collect::<Vec<_>>()) != comp(&r.iter().collect::<Vec<_>>()) {
                        return Ok((false, format!("{name} fails with padding ({a}, {b})")));
                    }
                    instances += 1;
                }
            }
        }
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..1000 {
            let (m1, m2) = (rng.gen_range(0..=3usize), rng.gen_range(0..=3usize));
            let (s1, s2) = (random_arity(&mut rng, m1, 3), random_arity(&mut rng, m2, 3));
            let (t1, t2) = (random_arity(&mut rng, s1, 3), random_arity(&mut rng, s2, 3));
            let (f, g) = (random_diagram(&mut rng, m1, s1), random_diagram(&mut rng, m2, s2));
            let (k, h) = (random_diagram(&mut rng, s1, t1), random_diagram(&mut rng, s2, t2));
            let (left, l1) = compose(&tensor(&f, &g), &tensor(&k, &h))?;
            let (fk, l2) = compose(&f, &k)?;
            let (gh, l3) = compose(&g, &h)?;
            if left != tensor(&fk, &gh) || l1 != l2 + l3 {
                return Ok((false, "interchange law fails".into()));
            }
        }
        for _ in 0..1000 {
            let a = rng.gen_range(0..=5usize);
            let b = random_arity(&mut rng, a, 5);
            let c = random_arity(&mut rng, b, 5);
            let (f, g) = (random_diagram(&mut rng, a, b), random_diagram(&mut rng, b, c));
            let (x, l1) = compose(&f, &g)?;
            let (y, l2) = compose(&flip(&g), &flip(&f))?;
            if flip(&x) != y || l1 != l2 {
                return Ok((false, "flip is not an anti-homomorphism".into()));
            }
        }
        Ok((true, format!("{instances} padded relation instances, 1000 interchange and 1000 flip samples")))
    })
}

fn jm_deltas() -> Vec<Scalar> {
    let mut v: Vec<Scalar> = [0, 1, 2, 3].iter().map(|&d| Scalar::int(d)).collect();
    v.push(Scalar::constant(q_frac(1, 2)));
    v.push(Scalar::delta());
    v
}

/// Commutativity and the recursion of Jucys–Murphy elements.
pub fn jm_suite() -> CriterionResult {
    run(3, "Jucys-Murphy suite", 120, || {
        let cases: Vec<(usize, Scalar)> = (1..=5).flat_map(|m| jm_deltas().into_iter().map(move |d| (m, d))).collect();
        let failures: Vec<String> = cases
            .par_iter()
            .map(|(m, d)| -> Result<Option<String>> {
                let m = *m;
                let xs: Vec<Element> = (1..=m).map(|i| jm_element(i, m, d)).collect::<Result<_>>()?;
                for i in 0..m {
                    for j in i + 1..m {
                        if mult(&xs[i], &xs[j], d) != mult(&xs[j], &xs[i], d) {
                            return Ok(Some(format!("X_{} X_{} differ at m={m}, δ={d}", i + 1, j + 1)));
                        }
                    }
                }
                for i in 1..m {
                    let s = Element::from_diagram(BrauerDiagram::simple(i, m)?);
                    let e = Element::from_diagram(BrauerDiagram::simple_bar(i, m)?);
                    let rhs = mult(&mult(&s, &xs[i - 1], d), &s, d).add(&s)?.sub(&e)?;
                    if rhs != xs[i] {
                        return Ok(Some(format!("recursion fails for X_{} at m={m}, δ={d}", i + 1)));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        match failures.first() {
            Some(f) => Ok((false, f.clone())),
            None => Ok((true, format!("{} (m, δ) cases including symbolic δ", cases.len()))),
        }
    })
}

fn numeric_deltas() -> Vec<Q> {
    vec![q(0), q(1), q(2), q(3), q_frac(1, 2)]
}

/// JM characters of cell modules against colored path counts.
pub fn character_theorem() -> CriterionResult {
    run(4, "character theorem", 300, || {
        let cases: Vec<(usize, Q, Partition)> = (0..=5)
            .flat_map(|m| numeric_deltas().into_iter().flat_map(move |d| lambda_plus(m).into_iter().map(move |l| (m, d.clone(), l))))
            .collect();
        let bad: Vec<String> = cases
            .par_iter()
            .map(|(m, d, l)| -> Result<Option<String>> {
                let module = CellModule::new(*m, Scalar::constant(d.clone()), l)?;
                let ch = module.character()?;
                Ok((ch != path_character(l, *m, d)).then(|| format!("Δ_{m}({l}) at δ={}", crate::scalar::fmt_q(d))))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        match bad.first() {
            Some(b) => Ok((false, format!("character mismatch for {b}"))),
            None => Ok((true, format!("{} cell modules", cases.len()))),
        }
    })
}

/// Radical dimensions: zero at `δ = 1/2`, a nonzero witness for `δ ∈ {0, 1, 2}`.
pub fn semisimplicity() -> CriterionResult {
    run(5, "semisimplicity", 600, || {
        let tables: Vec<StructureTable> = (1..=5).map(|m| StructureTable::new(m, 5)).collect::<Result<_>>()?;
        for t in &tables {
            let r = trace_form_radical_vectors(t, &q_frac(1, 2))?;
            if !r.is_empty() {
                return Ok((false, format!("radical of dimension {} at m={}, δ=1/2", r.len(), t.m)));
            }
        }
        let mut witnesses = Vec::new();
        for d in [0, 1, 2] {
            let mut found = None;
            for t in &tables {
                let r = trace_form_radical_vectors(t, &q(d))?;
                if !r.is_empty() {
                    found = Some((t.m, r.len()));
                    break;
                }
            }
            match found {
                Some((m, dim)) => witnesses.push(format!("δ={d}: m={m} dim R={dim}")),
                None => return Ok((false, format!("no nonzero radical for δ={d} and m <= 5"))),
            }
        }
        Ok((true, format!("δ=1/2 semisimple for m <= 5; witnesses {}", witnesses.join(", "))))
    })
}

/// Structural checks on a decomposition matrix: unitriangularity, blocks, order.
pub fn matrix_consistency(mat: &TransitionMatrix, delta: &Q) -> Result<Option<String>> {
    if !mat.is_lower_unitriangular() {
        return Ok(Some("not lower-unitriangular".into()));
    }
    for (mu, lambda, _) in mat.nonzero() {
        if wt0(mu, delta, 0)? != wt0(lambda, delta, 0)? {
            return Ok(Some(format!("entry ({mu}, {lambda}) links different classes")));
        }
        if !preceq(lambda, mu, delta, 0)? {
            return Ok(Some(format!("entry ({mu}, {lambda}) violates the weight order")));
        }
    }
    Ok(None)
}

/// Brute-force decomposition matrices against the KL side, with rank stabilization.
///
/// Returns criteria 6 and 8, which share the computation.
pub fn oracle_vs_kl() -> (CriterionResult, CriterionResult) {
    let start = Instant::now();
    let ctx = KLContext::default();
    let mut checked_entries = 0;
    let mut stab_error = None;
    let c6 = run(6, "oracle equals KL", 1200, || {
        let mut cases = 0;
        for m in 0..=5 {
            for d in [0, 1, 2, 4] {
                let delta = q(d);
                let oracle = decomp_oracle(m, &delta, 5)?;
                let kl = match decomposition_matrix_kl(&ctx, m, &delta, true) {
                    Ok(k) => k,
                    Err(e) => {
                        stab_error = Some(format!("m={m}, δ={d}: {e}"));
                        return Ok((false, format!("KL side failed at m={m}, δ={d}: {e}")));
                    }
                };
                checked_entries += kl.rows.len() * kl.cols.len();
                if oracle != kl {
                    return Ok((false, format!("matrices differ at m={m}, δ={d}: oracle {} KL {}", oracle.to_json(), kl.to_json())));
                }
                for (which, mat) in [("oracle", &oracle), ("KL", &kl)] {
                    if let Some(why) = matrix_consistency(mat, &delta)? {
                        return Ok((false, format!("{which} matrix at m={m}, δ={d}: {why}")));
                    }
                }
                cases += 1;
            }
        }
        Ok((true, format!("{cases} (m, δ) pairs agree, unitriangular, block- and order-consistent")))
    });
    let elapsed = start.elapsed();
    let (passed, detail) = match stab_error {
        Some(e) => (false, e),
        None if checked_entries == 0 => (false, "no multiplicities were checked".into()),
        None => (true, format!("{checked_entries} multiplicities agree at ranks n and n + 2")),
    };
    let c8 = CriterionResult { id: 8, name: "rank stabilization", passed, detail, elapsed, budget: Duration::from_secs(1200) };
    (c6, c8)
}

/// `ẽ_i` on partitions against `e_i + f_{−i}` on wedge monomials.
pub fn intertwining() -> CriterionResult {
    run(7, "categorification intertwining", 60, || {
        let basis = partitions_up_to(6);
        let mut checked = 0;
        for d in [2, 4] {
            let delta = q(d);
            for k in -8..=8 {
                let i = q_frac(k, 2);
                let a = op_matrix(&OpKind::ETilde(i.clone()), &basis, &delta, 0)?;
                let b = wedge_op_matrix(&i, &basis, &delta)?;
                let (mut ea, mut eb) = (a.escaped.clone(), b.escaped.clone());
                ea.sort();
                eb.sort();
                if a.entries != b.entries || ea != eb {
                    return Ok((false, format!("mismatch at δ={d}, i={}", crate::scalar::fmt_q(&i))));
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} operators on {} partitions", basis.len())))
    })
}

fn random_scalar(rng: &mut StdRng) -> Scalar {
    let deg = rng.gen_range(0..=2);
    let coeffs: Vec<Q> = (0..=deg).map(|_| q_frac(rng.gen_range(-9..=9), rng.gen_range(1..=6))).collect();
    let s = Scalar::from_coeffs(coeffs);
    if s.is_zero() {
        Scalar::one()
    } else {
        s
    }
}

fn random_partition(rng: &mut StdRng) -> Partition {
    let mut parts: Vec<usize> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(1..5)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("sorted positive parts")
}

fn round_trips<T>(x: &T) -> Result<bool>
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq,
{
    let s = serde_json::to_string(x).map_err(|e| crate::Error::Parse(e.to_string()))?;
    let back: T = serde_json::from_str(&s).map_err(|e| crate::Error::Parse(e.to_string()))?;
    let s2 = serde_json::to_string(&back).map_err(|e| crate::Error::Parse(e.to_string()))?;
    Ok(back == *x && s == s2)
}

/// JSON round trips of diagrams, elements and matrices.
pub fn serialization() -> CriterionResult {
    run(9, "serialization", 10, || {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..1000 {
            let m = rng.gen_range(0..=5);
            let s = random_arity(&mut rng, m, 5);
            let d = random_diagram(&mut rng, m, s);
            if !round_trips(&d)? {
                return Ok((false, format!("diagram {d:?}")));
            }
            let mut e = Element::zero(m, s);
            for _ in 0..rng.gen_range(0..4) {
                e.add_term(random_diagram(&mut rng, m, s), random_scalar(&mut rng))?;
            }
            if !round_trips(&e)? {
                return Ok((false, "element".into()));
            }
            let rows: Vec<Partition> = (0..rng.gen_range(1..4)).map(|_| random_partition(&mut rng)).collect();
            let cols: Vec<Partition> = (0..rng.gen_range(1..4)).map(|_| random_partition(&mut rng)).collect();
            let mat = TransitionMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-3..=3));
            if !round_trips(&mat)? {
                return Ok((false, "matrix".into()));
            }
        }
        Ok((true, "1000 diagrams, 1000 elements, 1000 matrices".into()))
    })
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    let mut out = vec![diagram_counts(), relation_suite(), jm_suite(), character_theorem(), semisimplicity()];
    let (c6, c8) = oracle_vs_kl();
    out.push(c6);
    out.push(intertwining());
    out.push(c8);
    out.push(serialization());
    out
}
