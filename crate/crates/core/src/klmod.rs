//! Parabolic Kazhdan–Lusztig multiplicities for `W(D_n)` over a type `A_{n−1}` parabolic.
//!
//! Weights are handled in doubled integer units so that integral and
//! half-integral sequences share one code path. A singular orbit is replaced
//! by a nearby regular one; parabolic Vermas may use any lift, while simples
//! must use the lift of maximal length (the only one surviving translation
//! onto the wall).
//!
//! The Hecke algebra uses `H̲_s = H_s + v`. On the coset module with basis
//! `N_x` the generator acts by
//!
//! * `N_x H̲_s = N_{xs} + v N_x` if `xs > x`,
//! * `N_x H̲_s = N_{xs} + v⁻¹ N_x` if `xs < x`,
//! * `N_x H̲_s = 0` (sign module) or `(v + v⁻¹) N_x` (trivial module) if `xs = x`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{q_frac, Q};
use crate::symgrp::{lambda_plus, Partition};
use crate::transition::{lambda_tilde_plus, DecompositionMatrix, TransitionMatrix};

/// `(λ_i − d − i)_{i ≤ n}` with `d = δ/2 − 1`, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightSeq {
    pub n: usize,
    pub doubled: Vec<i64>,
}

impl WeightSeq {
    pub fn values(&self) -> Vec<Q> {
        self.doubled.iter().map(|&x| q_frac(x, 2)).collect()
    }
}

pub fn weight_seq(lambda: &Partition, delta: i64, n: usize) -> Result<WeightSeq> {
    if n < lambda.len() {
        return Err(Error::RankTooSmall(format!("rank {n} is below the length of {lambda}")));
    }
    // 2(λ_i − δ/2 + 1 − i)
    let doubled = (1..=n).map(|i| 2 * lambda.part(i - 1) as i64 - delta + 2 - 2 * i as i64).collect();
    Ok(WeightSeq { n, doubled })
}

/// Which coset module carries the KL basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetModule {
    Sign,
    Trivial,
}

/// The module fixed by agreement with the brute-force decomposition numbers.
pub const PINNED_MODULE: CosetModule = CosetModule::Sign;

/// Representative of the `W(D_n)` orbit: `(σa_1, −a_2, …, −a_n)` with `a` ascending.
pub fn antidominant(t: &[i64]) -> Vec<i64> {
    let mut a: Vec<i64> = t.iter().map(|x| x.abs()).collect();
    a.sort_unstable();
    let negs = t.iter().filter(|&&x| x < 0).count();
    let mut out: Vec<i64> = a.iter().map(|&x| -x).collect();
    if let Some(first) = out.first_mut() {
        // with n − 1 negatives the parity flips
        if *first != 0 && (negs + a.len()) % 2 == 1 {
            *first = -*first;
        }
    }
    out
}

pub fn same_orbit(s: &[i64], t: &[i64]) -> bool {
    s.len() == t.len() && antidominant(s) == antidominant(t)
}

/// Number of `i < j` with `t_i + t_j > 0`: the length of the coset of `t`.
pub fn coset_length(t: &[i64]) -> usize {
    let mut l = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i] + t[j] > 0 {
                l += 1;
            }
        }
    }
    l
}

/// Regular lift `K Λ + ρ'` of an antidominant representative.
pub fn regularize(anti: &[i64]) -> Vec<i64> {
    let k = 8 * anti.len() as i64 + 8;
    anti.iter().enumerate().map(|(i, &a)| k * a - (2 * i as i64 + 1)).collect()
}

/// Strictly decreasing `w Λ_reg` over `w ∈ W(D_n)` with `w Λ_sing = t`.
pub fn lifts(t: &[i64], sing: &[i64], reg: &[i64]) -> Vec<Vec<i64>> {
    fn go(i: usize, t: &[i64], sing: &[i64], reg: &[i64], used: &mut [bool], negs: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == t.len() {
            if negs % 2 == 0 && cur.windows(2).all(|w| w[0] > w[1]) {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..sing.len() {
            if used[k] || sing[k].abs() != t[i].abs() {
                continue;
            }
            let signs: &[i64] = if sing[k] == 0 { &[1, -1] } else if sing[k] == t[i] { &[1] } else { &[-1] };
            for &e in signs {
                used[k] = true;
                cur.push(e * reg[k]);
                go(i + 1, t, sing, reg, used, negs + usize::from(e < 0), cur, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, t, sing, reg, &mut vec![false; t.len()], 0, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Laurent polynomial in `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LPoly(BTreeMap<i32, i64>);

impl LPoly {
    fn mono(e: i32, c: i64) -> Self {
        let mut p = LPoly::default();
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, e: i32, c: i64) {
        let slot = self.0.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.0.remove(&e);
        }
    }

    fn add_shifted(&mut self, o: &LPoly, shift: i32, scale: i64) {
        for (&e, &c) in &o.0 {
            self.add_term(e + shift, c * scale);
        }
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }
}

type Coset = Vec<i64>;
type KlVec = HashMap<Coset, LPoly>;

/// Coset of `x s_j`, where `t = x Λ` and `s_0` is the reflection in `ε_1 + ε_2`.
fn act(t: &[i64], reg: &[i64], j: usize) -> Coset {
    let pos = |v: i64| reg.iter().position(|r| r.abs() == v.abs()).expect("value from the orbit");
    let mut out: Vec<i64> = t
        .iter()
        .map(|&x| {
            let k = pos(x);
            let sign = if (x < 0) == (reg[k] < 0) { 1 } else { -1 };
            match (j, k) {
                (0, 0) => -sign * reg[1],
                (0, 1) => -sign * reg[0],
                (j, k) if j > 0 && k == j - 1 => sign * reg[j],
                (j, k) if j > 0 && k == j => sign * reg[j - 1],
                _ => x,
            }
        })
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Memoized KL basis elements, keyed by regular orbit and coset.
pub struct KLContext {
    pub module: CosetModule,
    memo: Mutex<HashMap<(Vec<i64>, Coset), Arc<KlVec>>>,
}

impl Default for KLContext {
    fn default() -> Self {
        KLContext::new(PINNED_MODULE)
    }
}

impl KLContext {
    pub fn new(module: CosetModule) -> Self {
        KLContext { module, memo: Mutex::new(HashMap::new()) }
    }

    fn times_generator(&self, c: &KlVec, reg: &[i64], j: usize) -> KlVec {
        let mut out: KlVec = HashMap::new();
        let mut add = |x: Coset, p: &LPoly, shift: i32, scale: i64| {
            let slot = out.entry(x).or_default();
            slot.add_shifted(p, shift, scale);
        };
        for (x, p) in c {
            let xs = act(x, reg, j);
            if xs == *x {
                if self.module == CosetModule::Trivial {
                    add(x.clone(), p, 1, 1);
                    add(x.clone(), p, -1, 1);
                }
                continue;
            }
            let up = coset_length(&xs) > coset_length(x);
            add(xs, p, 0, 1);
            add(x.clone(), p, if up { 1 } else { -1 }, 1);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// The KL basis element indexed by the coset `y` of the regular orbit `reg`.
    pub fn basis_element(&self, reg: &[i64], y: &[i64]) -> Arc<KlVec> {
        let key = (reg.to_vec(), y.to_vec());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let ly = coset_length(y);
        let result = if ly == 0 {
            HashMap::from([(y.to_vec(), LPoly::mono(0, 1))])
        } else {
            let (j, ys) = (0..reg.len())
                .map(|j| (j, act(y, reg, j)))
                .find(|(_, ys)| coset_length(ys) < ly)
                .expect("a descent exists above length zero");
            let mut c = self.times_generator(&self.basis_element(reg, &ys), reg, j);
            loop {
                // the longest offending term goes first
                let bad = c
                    .iter()
                    .filter(|(z, p)| z.as_slice() != y && p.coeff(0) != 0)
                    .map(|(z, p)| (coset_length(z), z.clone(), p.coeff(0)))
                    .max();
                let Some((_, z, c0)) = bad else { break };
                let bz = self.basis_element(reg, &z);
                for (x, p) in bz.iter() {
                    c.entry(x.clone()).or_default().add_shifted(p, 0, -c0);
                }
                c.retain(|_, p| !p.is_zero());
            }
            c
        };
        let arc = Arc::new(result);
        self.memo.lock().unwrap().insert(key, arc.clone());
        arc
    }

    /// Polynomial `n_{x,y}`: coefficient of the standard basis at `x` in the KL element of `y`.
    pub fn polynomial(&self, reg: &[i64], x: &[i64], y: &[i64]) -> LPoly {
        self.basis_element(reg, y).get(x).cloned().unwrap_or_default()
    }

    /// `[M(μ) : L(λ)]` for the weights indexed by the partitions `μ`, `λ`.
    pub fn multiplicity(&self, lambda: &Partition, mu: &Partition, delta: i64, n: usize) -> Result<i64> {
        let tl = weight_seq(lambda, delta, n)?.doubled;
        let tm = weight_seq(mu, delta, n)?.doubled;
        if !same_orbit(&tl, &tm) {
            return Ok(0);
        }
        let sing = antidominant(&tl);
        let reg = regularize(&sing);
        let m_lift = lifts(&tm, &sing, &reg).into_iter().next().ok_or_else(|| Error::Audit(format!("no regular lift of {mu}")))?;
        let l_lift = lifts(&tl, &sing, &reg)
            .into_iter()
            .max_by_key(|t| coset_length(t))
            .ok_or_else(|| Error::Audit(format!("no regular lift of {lambda}")))?;
        Ok(self.polynomial(&reg, &m_lift, &l_lift).at_one())
    }
}

/// Default rank for a pair of labels.
pub fn default_rank(lambda: &Partition, mu: &Partition) -> usize {
    lambda.size() + mu.size() + 2
}

/// `[M(γξ(μ)) : L(γξ(λ))]` at rank `n`, optionally confirmed at rank `n + 2`.
pub fn kl_multiplicity(ctx: &KLContext, lambda: &Partition, mu: &Partition, delta: i64, n: usize, rank_check: bool) -> Result<i64> {
    let a = ctx.multiplicity(lambda, mu, delta, n)?;
    if rank_check {
        let b = ctx.multiplicity(lambda, mu, delta, n + 2)?;
        if a != b {
            return Err(Error::RankTooSmall(format!("multiplicity for ({lambda}, {mu}) changes from {a} to {b} between ranks {n} and {}", n + 2)));
        }
    }
    Ok(a)
}

fn integral(delta: &Q) -> Option<i64> {
    if delta.is_integer() {
        i64::try_from(delta.to_integer()).ok()
    } else {
        None
    }
}

/// `P_λ` as a finite sum over `μ ∈ Λ⁺(support)`; the identity sum for non-integral `δ`.
pub fn quasi_canonical(ctx: &KLContext, lambda: &Partition, delta: &Q, support: usize, rank_check: bool) -> Result<BTreeMap<Partition, i64>> {
    if support < lambda.size() || (support - lambda.size()) % 2 == 1 {
        return Err(Error::OutOfRange(format!("support {support} must reach {} with matching parity", lambda.size())));
    }
    let Some(d) = integral(delta) else {
        return Ok(BTreeMap::from([(lambda.clone(), 1)]));
    };
    let mut out = BTreeMap::new();
    for mu in lambda_plus(support) {
        let c = kl_multiplicity(ctx, lambda, &mu, d, default_rank(lambda, &mu), rank_check)?;
        if c != 0 {
            out.insert(mu, c);
        }
    }
    Ok(out)
}

/// `[Δ(μ) : L(λ)]` from multiplicities at conjugate labels; identity for non-integral `δ`.
pub fn decomposition_matrix_kl(ctx: &KLContext, m: usize, delta: &Q, rank_check: bool) -> Result<DecompositionMatrix> {
    let rows = lambda_plus(m);
    let Some(d) = integral(delta) else {
        return Ok(TransitionMatrix::from_fn(rows.clone(), rows, |r, c| i64::from(r == c)));
    };
    let cols = lambda_tilde_plus(m, delta);
    let mut err = None;
    let mat = TransitionMatrix::from_fn(rows, cols, |mu, lambda| {
        let (lc, mc) = (lambda.conjugate(), mu.conjugate());
        match kl_multiplicity(ctx, &lc, &mc, d, default_rank(&lc, &mc), rank_check) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(mat),
    }
}

/// Whether a rational parameter falls in the generic regime.
pub fn is_generic(delta: &Q) -> bool {
    integral(delta).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weight_seq_examples() {
        // d = 0 means δ = 2
        assert_eq!(weight_seq(&Partition::empty(), 2, 3).unwrap().values(), vec![q(-1), q(-2), q(-3)]);
        assert_eq!(weight_seq(&p(&[2, 1]), 2, 4).unwrap().values(), vec![q(1), q(-1), q(-3), q(-4)]);
        assert!(weight_seq(&p(&[1, 1, 1]), 2, 2).is_err());
        assert_eq!(weight_seq(&Partition::empty(), 1, 2).unwrap().values(), vec![q_frac(-1, 2), q_frac(-3, 2)]);
    }

    #[test]
    fn orbit_representatives() {
        assert_eq!(antidominant(&[1, 0, -2]), vec![0, -1, -2]);
        assert_eq!(antidominant(&[3, 1]), vec![-1, -3]);
        assert_eq!(antidominant(&[3, -1]), vec![1, -3]);
        assert!(same_orbit(&[2, 0, -4], &[0, -2, -4]));
        assert!(!same_orbit(&[4, -2, -4], &[0, -2, -4]));
        assert!(!same_orbit(&[3, 1], &[3, -1]));
    }

    #[test]
    fn simple_reflections_move_length_by_one() {
        let reg = regularize(&antidominant(&[5, 1, -3, -7]));
        let mut seen = vec![lifts(&[5, 1, -3, -7], &antidominant(&[5, 1, -3, -7]), &reg)[0].clone()];
        let mut i = 0;
        while i < seen.len() {
            let t = seen[i].clone();
            for j in 0..4 {
                let u = act(&t, &reg, j);
                assert_eq!(act(&u, &reg, j), t);
                if u != t {
                    assert_eq!(coset_length(&u).abs_diff(coset_length(&t)), 1);
                }
                if !seen.contains(&u) {
                    seen.push(u);
                }
            }
            i += 1;
        }
        // |W(D_4)| / |S_4| cosets
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn kl_examples() {
        let ctx = KLContext::default();
        for delta in [0, 1, 2, 4] {
            for lam in lambda_plus(4).into_iter().chain(lambda_plus(3)) {
                let n = default_rank(&lam, &lam);
                assert_eq!(kl_multiplicity(&ctx, &lam, &lam, delta, n, true).unwrap(), 1);
            }
        }
        for mu in lambda_plus(4).into_iter().chain(lambda_plus(3)) {
            let expect = i64::from(mu.is_empty());
            let e = Partition::empty();
            assert_eq!(kl_multiplicity(&ctx, &e, &mu, 0, default_rank(&e, &mu), true).unwrap(), expect);
        }
        let e = Partition::empty();
        assert_eq!(kl_multiplicity(&ctx, &p(&[1, 1]), &e, 0, 6, true).unwrap(), 1);
        assert_eq!(kl_multiplicity(&ctx, &p(&[2]), &e, 0, 6, true).unwrap(), 0);
    }

    #[test]
    fn quasi_canonical_examples() {
        let ctx = KLContext::default();
        let e = Partition::empty();
        assert_eq!(quasi_canonical(&ctx, &e, &q(0), 4, true).unwrap(), BTreeMap::from([(e.clone(), 1)]));
        assert_eq!(quasi_canonical(&ctx, &p(&[2, 1]), &q_frac(1, 2), 5, false).unwrap(), BTreeMap::from([(p(&[2, 1]), 1)]));
        for lam in lambda_plus(4) {
            let pl = quasi_canonical(&ctx, &lam, &q(2), 4, false).unwrap();
            assert_eq!(pl.get(&lam), Some(&1));
        }
    }

    #[test]
    fn small_decomposition_matrices() {
        let ctx = KLContext::default();
        let m2 = decomposition_matrix_kl(&ctx, 2, &q(0), true).unwrap();
        assert_eq!(m2.cols, vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(m2.entries, vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
        let g = decomposition_matrix_kl(&ctx, 3, &q_frac(1, 2), false).unwrap();
        assert!(g.is_lower_unitriangular());
        assert_eq!(g.nonzero().len(), g.rows.len());
    }

    #[test]
    fn polynomials_nonnegative() {
        let ctx = KLContext::default();
        let t = weight_seq(&p(&[3, 2, 1]), 0, 5).unwrap().doubled;
        let sing = antidominant(&t);
        let reg = regularize(&sing);
        let y = lifts(&t, &sing, &reg).into_iter().max_by_key(|t| coset_length(t)).unwrap();
        for (x, poly) in ctx.basis_element(&reg, &y).iter() {
            assert!(poly.terms().all(|(e, c)| c > 0 && (x == &y || e > 0)));
        }
    }

    proptest! {
        #[test]
        fn weight_seq_strictly_decreasing(parts in prop::collection::vec(1usize..6, 0..5), delta in -4i64..6, extra in 0usize..4) {
            let mut parts = parts; parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            let w = weight_seq(&lam, delta, lam.len() + extra).unwrap();
            prop_assert!(w.doubled.windows(2).all(|x| x[0] > x[1]));
        }
    }
}
