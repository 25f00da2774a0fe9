//! Partitions, standard tableaux and Specht modules in Young's seminormal form.
//!
//! Contents here are the plain `col − row` values; the shifted contents used
//! by the Brauer side live in [`crate::gtheory`].

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::scalar::Q;

/// A weakly decreasing list of positive parts. Serialized as `[3,1,1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<usize> = serde_json::from_str(s.trim()).map_err(|e| Error::Parse(format!("partition {s:?}: {e}")))?;
        Partition::new(v)
    }
}

impl Partition {
    /// Validates weak decrease; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::Parse(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row `i` (0-based), zero beyond the last part.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.part(0);
        Partition((0..n).map(|j| self.0.iter().filter(|&&r| r > j).count()).collect())
    }

    /// Boxes `(row, col)`, 0-based, row by row.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        self.0.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |j| (i, j))).collect()
    }

    /// Boxes that can be added, as `(row, col)`.
    pub fn addable(&self) -> Vec<(usize, usize)> {
        (0..=self.len()).filter(|&i| i == 0 || self.part(i) < self.part(i - 1)).map(|i| (i, self.part(i))).collect()
    }

    /// Boxes that can be removed, as `(row, col)`.
    pub fn removable(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter(|&i| self.part(i) > self.part(i + 1)).map(|i| (i, self.part(i) - 1)).collect()
    }

    pub fn with_box_added(&self, row: usize) -> Partition {
        let mut v = self.0.clone();
        if row == v.len() {
            v.push(1);
        } else {
            v[row] += 1;
        }
        Partition::new(v).expect("addable box")
    }

    pub fn with_box_removed(&self, row: usize) -> Partition {
        let mut v = self.0.clone();
        v[row] -= 1;
        Partition::new(v).expect("removable box")
    }

    pub fn contains(&self, o: &Partition) -> bool {
        o.len() <= self.len() && o.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }
}

/// All partitions of `m`, in reverse lexicographic order.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// Labels of cell modules of `B_m`: partitions of `m, m-2, …`, larger sizes first.
pub fn lambda_plus(m: usize) -> Vec<Partition> {
    (0..=m / 2).flat_map(|k| partitions_of(m - 2 * k)).collect()
}

/// Partitions obtained by removing (or adding) one box of plain content `c`.
pub fn branch_boxes(lambda: &Partition, c: i64, remove: bool) -> Vec<Partition> {
    let boxes = if remove { lambda.removable() } else { lambda.addable() };
    boxes
        .into_iter()
        .filter(|&(i, j)| j as i64 - i as i64 == c)
        .map(|(i, _)| if remove { lambda.with_box_removed(i) } else { lambda.with_box_added(i) })
        .collect()
}

/// A standard filling, stored as the row and column of each entry `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct StandardTableau {
    shape: Partition,
    // pos[k] = (row, col) of entry k+1
    pos: Vec<(usize, usize)>,
}

impl StandardTableau {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.pos.len()
    }

    /// Position of entry `k` (1-based).
    pub fn position(&self, k: usize) -> (usize, usize) {
        self.pos[k - 1]
    }

    /// Plain content of the box holding entry `k` (1-based).
    pub fn content(&self, k: usize) -> i64 {
        let (i, j) = self.pos[k - 1];
        j as i64 - i as i64
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let mut rows: Vec<Vec<usize>> = self.shape.parts().iter().map(|&r| vec![0; r]).collect();
        for (k, &(i, j)) in self.pos.iter().enumerate() {
            rows[i][j] = k + 1;
        }
        rows
    }

    /// Swaps entries `k` and `k+1` if the result stays standard.
    pub fn swapped(&self, k: usize) -> Option<StandardTableau> {
        let (a, b) = (self.pos[k - 1], self.pos[k]);
        if a.0 == b.0 || a.1 == b.1 {
            return None;
        }
        let mut pos = self.pos.clone();
        pos.swap(k - 1, k);
        Some(StandardTableau { shape: self.shape.clone(), pos })
    }
}

/// Standard tableaux of a shape, the row-reading tableau first.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    let n = shape.size();
    let mut out = Vec::new();
    fn rec(shape: &Partition, fill: &mut Vec<usize>, pos: &mut Vec<(usize, usize)>, n: usize, out: &mut Vec<StandardTableau>) {
        if pos.len() == n {
            out.push(StandardTableau { shape: shape.clone(), pos: pos.clone() });
            return;
        }
        for i in 0..shape.len() {
            let j = fill[i];
            if j < shape.part(i) && (i == 0 || fill[i - 1] > j) {
                fill[i] += 1;
                pos.push((i, j));
                rec(shape, fill, pos, n, out);
                pos.pop();
                fill[i] -= 1;
            }
        }
    }
    rec(shape, &mut vec![0; shape.len()], &mut Vec::new(), n, &mut out);
    out
}

/// Young's seminormal representation of `𝔖_n` on the Specht module `S(λ)`.
#[derive(Clone, Debug)]
pub struct SpechtModule {
    pub shape: Partition,
    pub tableaux: Vec<StandardTableau>,
    index: HashMap<StandardTableau, usize>,
    /// Matrices of `S_1, …, S_{n-1}`, acting on column vectors.
    pub simple: Vec<QMat>,
    /// Diagonal of the invariant form: `⟨v_T, v_T⟩ = gamma[T]`.
    pub gamma: Vec<Q>,
}

impl SpechtModule {
    pub fn new(shape: &Partition) -> Self {
        let tableaux = standard_tableaux(shape);
        let index: HashMap<StandardTableau, usize> = tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let n = shape.size();
        let f = tableaux.len();
        let mut simple = Vec::new();
        for k in 1..n {
            let mut m = QMat::zeros(f, f);
            for (c, t) in tableaux.iter().enumerate() {
                let (a, b) = (t.position(k), t.position(k + 1));
                if a.0 == b.0 {
                    m.set(c, c, Q::one());
                } else if a.1 == b.1 {
                    m.set(c, c, -Q::one());
                } else {
                    let rho = t.content(k + 1) - t.content(k);
                    let inv = Q::new(1.into(), rho.into());
                    let other = index[&t.swapped(k).unwrap()];
                    m.set(c, c, inv.clone());
                    let off = if rho > 0 { Q::one() } else { Q::one() - &inv * &inv };
                    m.set(other, c, off);
                }
            }
            simple.push(m);
        }
        // invariant form: γ_{s_k T} = γ_T (1 - 1/ρ²) when ρ > 0, grown from the row-reading tableau
        let mut gamma: Vec<Option<Q>> = vec![None; f];
        if f > 0 {
            gamma[0] = Some(Q::one());
            let mut queue = VecDeque::from([0usize]);
            while let Some(c) = queue.pop_front() {
                let t = &tableaux[c];
                let g = gamma[c].clone().unwrap();
                for k in 1..n {
                    let Some(s) = t.swapped(k) else { continue };
                    let o = index[&s];
                    if gamma[o].is_some() {
                        continue;
                    }
                    let rho = t.content(k + 1) - t.content(k);
                    let r = Q::new(1.into(), rho.into());
                    let factor = Q::one() - &r * &r;
                    gamma[o] = Some(if rho > 0 { &g * &factor } else { &g / &factor });
                    queue.push_back(o);
                }
            }
        }
        SpechtModule { shape: shape.clone(), tableaux, index, simple, gamma: gamma.into_iter().map(Option::unwrap).collect() }
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn index_of(&self, t: &StandardTableau) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Matrix of the permutation `w` (0-based, `i ↦ w[i]`).
    pub fn permutation_matrix(&self, w: &[usize]) -> QMat {
        let word = reduced_word(w);
        let mut out = QMat::identity(self.dim());
        for &i in &word {
            out = out.mul(&self.simple[i]);
        }
        out
    }

    /// Matrix of the symmetric-group Jucys–Murphy element `L_k = Σ_{j<k} (j,k)`.
    pub fn jucys_murphy(&self, k: usize) -> QMat {
        let n = self.shape.size();
        let mut acc = QMat::zeros(self.dim(), self.dim());
        for j in 1..k {
            let mut w: Vec<usize> = (0..n).collect();
            w.swap(j - 1, k - 1);
            acc = acc.add(&self.permutation_matrix(&w));
        }
        acc
    }
}

/// Word `[i_1, …, i_r]` (0-based simple indices) with `w = s_{i_1} ∘ ⋯ ∘ s_{i_r}`, reduced.
pub fn reduced_word(w: &[usize]) -> Vec<usize> {
    let mut w = w.to_vec();
    let mut rev = Vec::new();
    // peel right descents: w = w' ∘ s_i when w(i) > w(i+1)
    while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
        w.swap(i, i + 1);
        rev.push(i);
    }
    rev.reverse();
    rev
}

pub fn hook_length_dim(shape: &Partition) -> u128 {
    let conj = shape.conjugate();
    let n = shape.size() as u128;
    let mut num: u128 = (1..=n).product();
    for (i, j) in shape.boxes() {
        let hook = (shape.part(i) - j) + (conj.part(j) - i) - 1;
        num /= hook as u128;
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::scalar::q;
    use num_traits::Zero;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_basics() {
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(4)[0], p(&[4]));
        assert_eq!(partitions_of(4)[4], p(&[1, 1, 1, 1]));
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(serde_json::to_string(&p(&[3, 1, 1])).unwrap(), "[3,1,1]");
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!(lambda_plus(4).len(), 8);
    }

    #[test]
    fn branching_examples() {
        assert_eq!(branch_boxes(&p(&[2, 1]), 1, true), vec![p(&[1, 1])]);
        assert!(branch_boxes(&p(&[1]), 0, false).is_empty());
        assert_eq!(branch_boxes(&Partition::empty(), 0, false), vec![p(&[1])]);
    }

    #[test]
    fn trivial_and_sign() {
        for m in 1..=5 {
            for (shape, v) in [(p(&[m]), 1), (p(&vec![1; m]), -1)] {
                let s = SpechtModule::new(&shape);
                assert_eq!(s.dim(), 1);
                for mat in &s.simple {
                    assert_eq!(mat.get(0, 0), &q(v));
                }
            }
        }
    }

    #[test]
    fn shape_21_jucys_murphy() {
        let s = SpechtModule::new(&p(&[2, 1]));
        assert_eq!(s.dim(), 2);
        let l3 = s.jucys_murphy(3);
        assert!(l3.get(0, 1).is_zero() && l3.get(1, 0).is_zero());
        let mut diag = vec![l3.get(0, 0).clone(), l3.get(1, 1).clone()];
        diag.sort();
        assert_eq!(diag, vec![q(-1), q(1)]);
    }

    #[test]
    fn seminormal_relations_and_contents() {
        for m in 1..=6 {
            let mut total = 0u128;
            for shape in partitions_of(m) {
                let s = SpechtModule::new(&shape);
                assert_eq!(s.dim() as u128, hook_length_dim(&shape));
                total += (s.dim() * s.dim()) as u128;
                let id = QMat::identity(s.dim());
                let g = QMat::from_fn(s.dim(), s.dim(), |i, j| if i == j { s.gamma[i].clone() } else { Q::zero() });
                for i in 0..m - 1 {
                    let a = &s.simple[i];
                    assert_eq!(a.mul(a), id);
                    assert_eq!(a.transpose().mul(&g).mul(a), g, "form invariance for {shape}");
                    if i + 1 < m - 1 {
                        let b = &s.simple[i + 1];
                        assert_eq!(a.mul(b).mul(a), b.mul(a).mul(b));
                    }
                    for j in i + 2..m - 1 {
                        let b = &s.simple[j];
                        assert_eq!(a.mul(b), b.mul(a));
                    }
                }
                for k in 1..=m {
                    let l = s.jucys_murphy(k);
                    for (c, t) in s.tableaux.iter().enumerate() {
                        for r in 0..s.dim() {
                            let want = if r == c { q(t.content(k)) } else { Q::zero() };
                            assert_eq!(l.get(r, c), &want);
                        }
                    }
                }
                assert!(s.gamma.iter().all(|g| !g.is_zero()));
            }
            assert_eq!(total, (1..=m as u128).product());
        }
    }

    proptest! {
        #[test]
        fn permutation_matrices_are_homomorphic(
            x in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
            y in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let s = SpechtModule::new(&p(&[3, 2]));
            let xy: Vec<usize> = (0..5).map(|i| x[y[i]]).collect();
            prop_assert_eq!(s.permutation_matrix(&xy), s.permutation_matrix(&x).mul(&s.permutation_matrix(&y)));
        }

        #[test]
        fn conjugation_is_an_involution(v in prop::collection::vec(1usize..6, 0..6)) {
            let mut v = v;
            v.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(v).unwrap();
            prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
            prop_assert_eq!(lam.conjugate().size(), lam.size());
        }

        #[test]
        fn branching_completeness(v in prop::collection::vec(1usize..6, 0..6)) {
            let mut v = v;
            v.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(v).unwrap();
            let n = lam.size() as i64;
            let removed: usize = (-n..=n).map(|c| branch_boxes(&lam, c, true).len()).sum();
            prop_assert_eq!(removed, lam.removable().len());
        }
    }
}
