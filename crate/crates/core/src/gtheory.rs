//! Content combinatorics on partitions and the matching wedge picture.
//!
//! A box in row `i`, column `j` (1-based) has shifted content
//! `(δ−1)/2 + j − i`, reduced modulo `p` when `p > 0`. Weights record how
//! many boxes carry each content; their classes modulo the symmetrized root
//! lattice are compared through an antisymmetric residue on each orbit
//! `{c, −c}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, q, Q};
use crate::symgrp::{lambda_plus, Partition};

/// Shifted content of the box at 0-based `(row, col)`.
pub fn content(row: usize, col: usize, delta: &Q, p: u64) -> Result<Q> {
    let c = (delta - Q::one()) / q(2) + q(col as i64 - row as i64);
    reduce(&c, p)
}

/// Canonical representative of a content value: unchanged for `p = 0`,
/// the residue in `[0, p)` otherwise.
pub fn reduce(c: &Q, p: u64) -> Result<Q> {
    if p == 0 {
        return Ok(c.clone());
    }
    if p == 2 {
        return Err(Error::OutOfRange("p must be 0 or an odd prime".into()));
    }
    let r = crate::linalg::q_mod(c, p).ok_or_else(|| Error::OutOfRange(format!("{} is not defined modulo {p}", fmt_q(c))))?;
    Ok(q(r as i64))
}

fn neg(c: &Q, p: u64) -> Q {
    if p == 0 {
        -c
    } else {
        let pb = BigInt::from(p);
        Q::from_integer((-c.numer()).mod_floor(&pb))
    }
}

/// Colored paths `∅ → λ` of length `m` in the Young graph, counted by color sequence.
///
/// Adding a box colors the step with its content, removing one with minus its content.
pub fn path_character(lambda: &Partition, m: usize, delta: &Q) -> BTreeMap<Vec<Q>, usize> {
    let mut out = BTreeMap::new();
    let size = lambda.size();
    if size > m || (m - size) % 2 == 1 {
        return out;
    }
    // frontier: partition -> (color sequence -> count)
    let mut frontier: HashMap<Partition, BTreeMap<Vec<Q>, usize>> = HashMap::new();
    frontier.insert(Partition::empty(), BTreeMap::from([(Vec::new(), 1)]));
    for step in 0..m {
        let remaining = m - step - 1;
        let mut next: HashMap<Partition, BTreeMap<Vec<Q>, usize>> = HashMap::new();
        for (mu, seqs) in &frontier {
            let mut moves: Vec<(Partition, Q)> = Vec::new();
            for (i, j) in mu.addable() {
                moves.push((mu.with_box_added(i), content(i, j, delta, 0).unwrap()));
            }
            for (i, j) in mu.removable() {
                moves.push((mu.with_box_removed(i), -content(i, j, delta, 0).unwrap()));
            }
            for (nu, color) in moves {
                // prune paths that can no longer reach λ
                let dist = nu.size().abs_diff(size);
                if dist > remaining {
                    continue;
                }
                let slot = next.entry(nu).or_default();
                for (seq, cnt) in seqs {
                    let mut s = seq.clone();
                    s.push(color.clone());
                    *slot.entry(s).or_insert(0) += cnt;
                }
            }
        }
        frontier = next;
    }
    if let Some(seqs) = frontier.remove(lambda) {
        out = seqs;
    }
    out
}

/// `α`-coefficients of `wt(λ)`: the number of boxes of each content.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "WeightRepr", try_from = "WeightRepr")]
pub struct Weight {
    /// Content value `(δ−1)/2` of the anchoring fundamental weight.
    pub anchor: Q,
    pub alpha: BTreeMap<Q, i64>,
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    anchor: String,
    alpha: Vec<(String, i64)>,
}

impl From<Weight> for WeightRepr {
    fn from(w: Weight) -> Self {
        WeightRepr { anchor: fmt_q(&w.anchor), alpha: w.alpha.iter().map(|(k, v)| (fmt_q(k), *v)).collect() }
    }
}

impl TryFrom<WeightRepr> for Weight {
    type Error = Error;
    fn try_from(r: WeightRepr) -> Result<Self> {
        let alpha = r.alpha.iter().map(|(k, v)| Ok((crate::scalar::parse_q(k)?, *v))).collect::<Result<_>>()?;
        Ok(Weight { anchor: crate::scalar::parse_q(&r.anchor)?, alpha })
    }
}

/// Class of a weight modulo `{θ(μ)+μ}`: antisymmetric residues per orbit.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct ThetaClass(pub Vec<(Q, i64)>);

pub fn wt(lambda: &Partition, delta: &Q, p: u64) -> Result<Weight> {
    let mut alpha = BTreeMap::new();
    for (i, j) in lambda.boxes() {
        *alpha.entry(content(i, j, delta, p)?).or_insert(0) += 1;
    }
    Ok(Weight { anchor: reduce(&((delta - Q::one()) / q(2)), p)?, alpha })
}

pub fn theta_class(w: &Weight, p: u64) -> ThetaClass {
    let mut res: BTreeMap<Q, i64> = BTreeMap::new();
    for (c, &a) in &w.alpha {
        let nc = neg(c, p);
        if *c == nc {
            let r = a.rem_euclid(2);
            if r != 0 {
                res.insert(c.clone(), r);
            }
        } else if *c > nc {
            let diff = a - w.alpha.get(&nc).copied().unwrap_or(0);
            if diff != 0 {
                res.insert(c.clone(), diff);
            }
        } else if !w.alpha.contains_key(&nc) {
            // the larger member of the orbit is absent
            res.insert(nc, -a);
        }
    }
    ThetaClass(res.into_iter().collect())
}

pub fn wt0(lambda: &Partition, delta: &Q, p: u64) -> Result<ThetaClass> {
    Ok(theta_class(&wt(lambda, delta, p)?, p))
}

/// `λ ⪯ μ`: equal classes and `wt(μ) − wt(λ)` a nonnegative sum of simple roots.
pub fn preceq(lambda: &Partition, mu: &Partition, delta: &Q, p: u64) -> Result<bool> {
    let (wl, wm) = (wt(lambda, delta, p)?, wt(mu, delta, p)?);
    if theta_class(&wl, p) != theta_class(&wm, p) {
        return Ok(false);
    }
    Ok(wm.alpha.iter().all(|(c, &a)| wl.alpha.get(c).copied().unwrap_or(0) >= a))
}

/// Labels `Λ⁺(m)` grouped by class, groups in order of first appearance.
pub fn blocks(m: usize, delta: &Q, p: u64) -> Result<Vec<Vec<Partition>>> {
    let mut order: Vec<ThetaClass> = Vec::new();
    let mut groups: HashMap<ThetaClass, Vec<Partition>> = HashMap::new();
    for lam in lambda_plus(m) {
        let c = wt0(&lam, delta, p)?;
        if !groups.contains_key(&c) {
            order.push(c.clone());
        }
        groups.entry(c).or_default().push(lam);
    }
    Ok(order.into_iter().map(|c| groups.remove(&c).unwrap()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// Remove a box of the given content.
    E(Q),
    /// Add a box of the given content.
    F(Q),
    /// `e(i) + f(−i)`.
    ETilde(Q),
}

/// Integer matrix of a box-moving operator on a list of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpMatrix {
    pub labels: Vec<Partition>,
    /// `entries[μ][λ]`: coefficient of `μ` in the image of `λ`.
    pub entries: Vec<Vec<i64>>,
    /// Images that left the basis, as `(source, target)`.
    pub escaped: Vec<(Partition, Partition)>,
}

fn moves(lambda: &Partition, c: &Q, add: bool, delta: &Q, p: u64) -> Result<Vec<Partition>> {
    let c = reduce(c, p)?;
    let boxes = if add { lambda.addable() } else { lambda.removable() };
    let mut out = Vec::new();
    for (i, j) in boxes {
        if content(i, j, delta, p)? == c {
            out.push(if add { lambda.with_box_added(i) } else { lambda.with_box_removed(i) });
        }
    }
    Ok(out)
}

pub fn op_images(kind: &OpKind, lambda: &Partition, delta: &Q, p: u64) -> Result<Vec<Partition>> {
    match kind {
        OpKind::E(i) => moves(lambda, i, false, delta, p),
        OpKind::F(i) => moves(lambda, i, true, delta, p),
        OpKind::ETilde(i) => {
            let mut v = moves(lambda, i, false, delta, p)?;
            v.extend(moves(lambda, &neg(i, p), true, delta, p)?);
            Ok(v)
        }
    }
}

pub fn op_matrix(kind: &OpKind, basis: &[Partition], delta: &Q, p: u64) -> Result<OpMatrix> {
    let index: HashMap<&Partition, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let n = basis.len();
    let mut entries = vec![vec![0i64; n]; n];
    let mut escaped = Vec::new();
    for (col, lam) in basis.iter().enumerate() {
        for mu in op_images(kind, lam, delta, p)? {
            match index.get(&mu) {
                Some(&row) => entries[row][col] += 1,
                None => escaped.push((lam.clone(), mu)),
            }
        }
    }
    Ok(OpMatrix { labels: basis.to_vec(), entries, escaped })
}

/// Partitions of size at most `n`.
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(crate::symgrp::partitions_of).collect()
}

/// First `len` entries of `ξ(λ) = (d + k − λ_k)_{k ≥ 1}`; the rest are `d + k`.
pub fn xi(lambda: &Partition, d: &Q, len: usize) -> Vec<Q> {
    (1..=len.max(lambda.len())).map(|k| d + q(k as i64) - q(lambda.part(k - 1) as i64)).collect()
}

/// Index of the monomial matched with `[Δ(λ)]`: the conjugate and `d = δ/2 − 1`.
pub fn phi_index(lambda: &Partition, delta: &Q) -> Result<(Partition, Q)> {
    if !delta.is_integer() {
        return Err(Error::OutOfRange("the wedge index needs an integral parameter".into()));
    }
    Ok((lambda.conjugate(), delta / q(2) - Q::one()))
}

/// A finite window of a semi-infinite wedge `w_{a_1} ∧ w_{a_2} ∧ ⋯`.
///
/// Past the window the indices continue as `d + k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wedge {
    pub d: Q,
    pub window: Vec<Q>,
}

impl Wedge {
    pub fn of(lambda: &Partition, d: &Q, len: usize) -> Self {
        Wedge { d: d.clone(), window: xi(lambda, d, len) }
    }

    fn occupied(&self, a: &Q) -> bool {
        if self.window.contains(a) {
            return true;
        }
        // tail positions k > len carry d + k
        let k = a - &self.d;
        k.is_integer() && k > q(self.window.len() as i64)
    }

    /// Partition read back from the window.
    pub fn partition(&self) -> Option<Partition> {
        let parts: Vec<i64> = self
            .window
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let v = &self.d + q(k as i64 + 1) - a;
                if v.is_integer() {
                    v.to_integer().try_into().ok()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<i64>>>()?;
        if parts.iter().any(|&x| x < 0) {
            return None;
        }
        Partition::new(parts.into_iter().map(|x| x as usize).collect()).ok()
    }

    /// `e_i`: moves an index `i − ½` up by one, when the slot is free.
    pub fn e(&self, i: &Q) -> Vec<Wedge> {
        self.shift(&(i - Q::new(1.into(), 2.into())), 1)
    }

    /// `f_i`: moves an index `i + ½` down by one, when the slot is free.
    pub fn f(&self, i: &Q) -> Vec<Wedge> {
        self.shift(&(i + Q::new(1.into(), 2.into())), -1)
    }

    fn shift(&self, from: &Q, by: i64) -> Vec<Wedge> {
        let to = from + q(by);
        let mut out = Vec::new();
        if let Some(pos) = self.window.iter().position(|a| a == from) {
            if !self.occupied(&to) {
                let mut w = self.clone();
                w.window[pos] = to;
                if w.window.windows(2).all(|x| x[0] < x[1]) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Matrix of `e_i + f_{−i}` on the monomials `w_{ξ(λ′)}`, indexed by `λ ∈ basis`.
pub fn wedge_op_matrix(i: &Q, basis: &[Partition], delta: &Q) -> Result<OpMatrix> {
    let d = delta / q(2) - Q::one();
    let len = basis.iter().map(|l| l.size()).max().unwrap_or(0) + 2;
    let index: HashMap<&Partition, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let n = basis.len();
    let mut entries = vec![vec![0i64; n]; n];
    let mut escaped = Vec::new();
    for (col, lam) in basis.iter().enumerate() {
        let w = Wedge::of(&lam.conjugate(), &d, len);
        let mut images = w.e(i);
        images.extend(w.f(&-i));
        for img in images {
            let nu = img.partition().ok_or_else(|| Error::Audit("wedge left the partition range".into()))?;
            let mu = nu.conjugate();
            match index.get(&mu) {
                Some(&row) => entries[row][col] += 1,
                None => escaped.push((lam.clone(), mu)),
            }
        }
    }
    Ok(OpMatrix { labels: basis.to_vec(), entries, escaped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_frac;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn path_character_examples() {
        let d = q(5);
        let h = q(2);
        assert_eq!(path_character(&Partition::empty(), 2, &d), BTreeMap::from([(vec![h.clone(), -h.clone()], 1)]));
        let total: usize = path_character(&p(&[1]), 3, &d).values().sum();
        assert_eq!(total, 3);
        assert_eq!(path_character(&p(&[1]), 1, &d), BTreeMap::from([(vec![h], 1)]));
        assert!(path_character(&p(&[2]), 3, &d).is_empty());
    }

    #[test]
    fn weight_examples() {
        let z = q(0);
        let w = wt(&Partition::empty(), &z, 0).unwrap();
        assert!(w.alpha.is_empty());
        assert_eq!(wt0(&p(&[2]), &z, 0).unwrap(), wt0(&Partition::empty(), &z, 0).unwrap());
        assert!(preceq(&p(&[2]), &Partition::empty(), &z, 0).unwrap());
        assert!(!preceq(&p(&[1]), &Partition::empty(), &z, 0).unwrap());
        assert!(!preceq(&Partition::empty(), &p(&[2]), &z, 0).unwrap());
    }

    #[test]
    fn block_examples() {
        let b = blocks(2, &q(0), 0).unwrap();
        assert!(b.contains(&vec![p(&[2]), Partition::empty()]));
        assert_eq!(blocks(1, &q(3), 0).unwrap(), vec![vec![p(&[1])]]);
        for m in 1..=6 {
            for blk in blocks(m, &q_frac(1, 2), 0).unwrap() {
                assert_eq!(blk.len(), 1);
            }
        }
    }

    #[test]
    fn modular_contents() {
        // δ = 0, p = 3: (δ−1)/2 = -1/2 ≡ 1 (mod 3)
        assert_eq!(content(0, 0, &q(0), 3).unwrap(), q(1));
        assert_eq!(content(1, 0, &q(0), 3).unwrap(), q(0));
        assert!(content(0, 0, &q(0), 2).is_err());
        let w = wt(&p(&[3]), &q(0), 3).unwrap();
        assert_eq!(w.alpha.values().sum::<i64>(), 3);
        // contents 1, 2, 0: θ fixes 0 and swaps 1, 2
        assert_eq!(theta_class(&w, 3), ThetaClass(vec![(q(0), 1)]));
        assert_eq!(wt0(&p(&[1]), &q(0), 3).unwrap(), ThetaClass(vec![(q(2), -1)]));
    }

    #[test]
    fn etilde_examples() {
        let d = q(1);
        let basis = partitions_up_to(3);
        let idx = |l: &Partition| basis.iter().position(|x| x == l).unwrap();
        let e0 = op_matrix(&OpKind::ETilde(q(0)), &basis, &d, 0).unwrap();
        let col = |m: &OpMatrix, l: &Partition| -> Vec<Partition> {
            (0..basis.len()).filter(|&r| m.entries[r][idx(l)] != 0).map(|r| basis[r].clone()).collect()
        };
        assert_eq!(col(&e0, &Partition::empty()), vec![p(&[1])]);
        assert_eq!(col(&e0, &p(&[1])), vec![Partition::empty()]);
        let e1 = op_matrix(&OpKind::ETilde(q(1)), &basis, &d, 0).unwrap();
        assert_eq!(col(&e1, &p(&[1])), vec![p(&[1, 1])]);
        for i in -3..=3 {
            let m = op_matrix(&OpKind::ETilde(q(i)), &basis, &q(4), 0).unwrap();
            let image = col(&m, &Partition::empty());
            // only the box of content 3/2 can be added to ∅ at δ = 4
            assert!(image.is_empty());
        }
        let m = op_matrix(&OpKind::ETilde(q_frac(-3, 2)), &basis, &q(4), 0).unwrap();
        assert_eq!(col(&m, &Partition::empty()), vec![p(&[1])]);
        assert!(!m.escaped.is_empty());
    }

    #[test]
    fn fock_indices() {
        let d = q(0);
        assert_eq!(xi(&Partition::empty(), &d, 3), vec![q(1), q(2), q(3)]);
        assert_eq!(xi(&p(&[2, 1]), &d, 4), vec![q(-1), q(1), q(3), q(4)]);
        assert_eq!(phi_index(&p(&[3]), &q(4)).unwrap(), (p(&[1, 1, 1]), q(1)));
        assert!(phi_index(&p(&[3]), &q_frac(1, 2)).is_err());
    }

    #[test]
    fn intertwining_small() {
        for delta in [q(2), q(4), q(3)] {
            let basis = partitions_up_to(5);
            for k in -9..=9 {
                let i = q_frac(k, 2);
                let a = op_matrix(&OpKind::ETilde(i.clone()), &basis, &delta, 0).unwrap();
                let b = wedge_op_matrix(&i, &basis, &delta).unwrap();
                assert_eq!(a.entries, b.entries, "δ={delta} i={i}");
                assert_eq!(a.escaped.len(), b.escaped.len());
            }
        }
    }

    proptest! {
        #[test]
        fn xi_strictly_increasing_and_injective(a in prop::collection::vec(1usize..5, 0..5), b in prop::collection::vec(1usize..5, 0..5), d in -3i64..4) {
            let mut a = a; a.sort_unstable_by(|x, y| y.cmp(x));
            let mut b = b; b.sort_unstable_by(|x, y| y.cmp(x));
            let (la, lb) = (Partition::new(a).unwrap(), Partition::new(b).unwrap());
            let len = 12;
            let (xa, xb) = (xi(&la, &q(d), len), xi(&lb, &q(d), len));
            prop_assert!(xa.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(xa == xb, la == lb);
            prop_assert_eq!(Wedge::of(&la, &q(d), len).partition(), Some(la));
        }

        #[test]
        fn path_counts_match_cell_dims(m in 0usize..6, seed in 0usize..20) {
            let labels = lambda_plus(m);
            let lam = &labels[seed % labels.len()];
            let total: usize = path_character(lam, m, &q(2)).values().sum();
            prop_assert_eq!(total as u128, crate::cells::CellModule::expected_dim(m, lam));
        }
    }
}
