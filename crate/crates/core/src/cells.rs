//! Cell modules `Δ_m(λ)` of `B_m(δ)`.
//!
//! A basis vector is a pair `(b, T)`: `b` is an `(m−2k) → m` diagram with `k`
//! cups, no caps and non-crossing vertical strands, and `T` is a standard
//! tableau of shape `λ ⊢ m−2k`. A diagram `g` acts by stacking it on `b`.
//! If a cap appears at the bottom the result falls into the lower ideal and
//! is dropped; otherwise the vertical strands are straightened and the
//! permutation they carried acts on `T` through the seminormal form.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::{jm_element, standard_generators};
use crate::diagrams::{compose, enumerate, flip, matching_count, BrauerDiagram};
use crate::error::{Error, Result};
use crate::linalg::{q_mod, word_primes, Matrix, ModMat, QMat};
use crate::scalar::{q, Scalar, Q};
use crate::symgrp::{Partition, SpechtModule};

pub type SMat = Matrix<Scalar>;

/// Label of one basis vector: the diagram `d∘(1⊗U^{⊗k})` and a tableau index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellBasisVector {
    pub diagram: BrauerDiagram,
    /// The coset representative `d` as a permutation, `i ↦ coset[i]` (0-based).
    pub coset: Vec<usize>,
    pub tableau: usize,
}

/// Permutations `d` with `d∘(1_{m−2k}⊗U^{⊗k})` running over the basis diagrams.
pub fn coset_reps(k: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    if 2 * k > m {
        return Err(Error::OutOfRange(format!("coset_reps needs 2k <= m, got k={k}, m={m}")));
    }
    Ok(basis_diagrams(k, m).iter().map(|b| coset_of(b, k)).collect())
}

/// `(m−2k) → m` diagrams with exactly `k` cups and ordered vertical strands.
pub fn basis_diagrams(k: usize, m: usize) -> Vec<BrauerDiagram> {
    enumerate(m - 2 * k, m).into_iter().filter(|b| b.caps() == 0 && b.through_strands_ordered()).collect()
}

fn coset_of(b: &BrauerDiagram, k: usize) -> Vec<usize> {
    let t = b.bottom();
    let m = b.top();
    let mut d = vec![0usize; m];
    for i in 0..t {
        d[i] = b.partner(i) - t;
    }
    let mut j = 0;
    for v in t..t + m {
        let p = b.partner(v);
        if p >= t && p > v {
            d[t + 2 * j] = v - t;
            d[t + 2 * j + 1] = p - t;
            j += 1;
        }
    }
    debug_assert_eq!(j, k);
    d
}

#[derive(Clone, Debug)]
pub struct CellModule {
    pub m: usize,
    pub delta: Scalar,
    pub shape: Partition,
    pub k: usize,
    pub specht: SpechtModule,
    pub diagrams: Vec<BrauerDiagram>,
    diagram_index: HashMap<BrauerDiagram, usize>,
    pub basis: Vec<CellBasisVector>,
    /// Matrices of `S_1..S_{m−1}` then `Ē_1..Ē_{m−1}`.
    pub gens: Vec<SMat>,
}

/// Straightened image of one basis diagram under one diagram.
struct Straightened {
    loops: usize,
    target: usize,
    perm: Vec<usize>,
}

impl CellModule {
    pub fn new(m: usize, delta: Scalar, shape: &Partition) -> Result<Self> {
        let size = shape.size();
        if size > m || (m - size) % 2 == 1 {
            return Err(Error::BadLabel(format!("{shape} for m = {m}")));
        }
        let k = (m - size) / 2;
        let specht = SpechtModule::new(shape);
        let diagrams = basis_diagrams(k, m);
        let diagram_index = diagrams.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let f = specht.dim();
        let mut basis = Vec::with_capacity(diagrams.len() * f);
        for b in &diagrams {
            let coset = coset_of(b, k);
            for t in 0..f {
                basis.push(CellBasisVector { diagram: b.clone(), coset: coset.clone(), tableau: t });
            }
        }
        let mut module = CellModule { m, delta, shape: shape.clone(), k, specht, diagrams, diagram_index, basis, gens: Vec::new() };
        module.gens = standard_generators(m).iter().map(|g| module.action(g)).collect::<Result<_>>()?;
        Ok(module)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `C(m, 2k)·(2k−1)!!·f^λ`.
    pub fn expected_dim(m: usize, shape: &Partition) -> u128 {
        let k2 = m - shape.size();
        let binom = (0..k2).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128);
        binom * matching_count(k2) * crate::symgrp::hook_length_dim(shape)
    }

    fn straighten(&self, g: &BrauerDiagram, b_idx: usize) -> Result<Option<Straightened>> {
        let b = &self.diagrams[b_idx];
        let (h, loops) = compose(b, g)?;
        if h.caps() > 0 {
            return Ok(None);
        }
        let t = h.bottom();
        let mut tops: Vec<usize> = (0..t).map(|i| h.partner(i)).collect();
        let targets = tops.clone();
        tops.sort_unstable();
        let perm: Vec<usize> = targets.iter().map(|x| tops.binary_search(x).unwrap()).collect();
        // canonical diagram: same cups, vertical strands in order
        let mut partner: Vec<[usize; 2]> = Vec::new();
        for (i, &tp) in tops.iter().enumerate() {
            partner.push([i + 1, tp + 1]);
        }
        for v in t..t + h.top() {
            let p = h.partner(v);
            if p >= t && p > v {
                partner.push([v + 1, p + 1]);
            }
        }
        let canon = BrauerDiagram::from_pairs(t, h.top(), &partner)?;
        let target = *self
            .diagram_index
            .get(&canon)
            .ok_or_else(|| Error::Audit(format!("straightening produced a non-basis diagram {canon:?}")))?;
        Ok(Some(Straightened { loops, target, perm }))
    }

    /// Sparse action of a diagram: `(row, col, loops, coefficient)`.
    fn action_terms(&self, g: &BrauerDiagram) -> Result<Vec<(usize, usize, usize, Q)>> {
        if (g.bottom(), g.top()) != (self.m, self.m) {
            return Err(Error::ArityMismatch(format!("diagram {g:?} is not in B_{}", self.m)));
        }
        let f = self.specht.dim();
        let mut cache: HashMap<Vec<usize>, QMat> = HashMap::new();
        let mut out = Vec::new();
        for b in 0..self.diagrams.len() {
            let Some(s) = self.straighten(g, b)? else { continue };
            let rho = cache.entry(s.perm.clone()).or_insert_with(|| self.specht.permutation_matrix(&s.perm));
            for t in 0..f {
                for t2 in 0..f {
                    let c = rho.get(t2, t);
                    if !c.is_zero() {
                        out.push((s.target * f + t2, b * f + t, s.loops, c.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of a diagram with entries in `δ` (symbolic or numeric).
    pub fn action(&self, g: &BrauerDiagram) -> Result<SMat> {
        let n = self.dim();
        let mut mat = SMat::zeros(n, n);
        let powers: Vec<Scalar> = (0..=self.m).map(|e| self.delta.pow(e)).collect();
        for (r, c, l, x) in self.action_terms(g)? {
            let v = mat.get(r, c) + &powers[l].scale(&x);
            mat.set(r, c, v);
        }
        Ok(mat)
    }

    fn numeric_delta(&self) -> Result<Q> {
        self.delta.as_constant().ok_or_else(|| Error::Symbolic("this operation needs a numeric parameter".into()))
    }

    /// Matrix of a diagram for numeric `δ`.
    pub fn action_q(&self, g: &BrauerDiagram) -> Result<QMat> {
        let d = self.numeric_delta()?;
        let n = self.dim();
        let mut mat = QMat::zeros(n, n);
        let powers: Vec<Q> = (0..=self.m).map(|e| num_traits::pow(d.clone(), e)).collect();
        for (r, c, l, x) in self.action_terms(g)? {
            let v = mat.get(r, c) + &(&powers[l] * &x);
            mat.set(r, c, v);
        }
        Ok(mat)
    }

    /// Matrix of `Σ c_d d` for numeric `δ`.
    pub fn element_action_q<'a>(&self, terms: impl IntoIterator<Item = (&'a BrauerDiagram, &'a Q)>) -> Result<QMat> {
        let d = self.numeric_delta()?;
        let n = self.dim();
        let mut mat = QMat::zeros(n, n);
        let powers: Vec<Q> = (0..=self.m).map(|e| num_traits::pow(d.clone(), e)).collect();
        for (g, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (r, col, l, x) in self.action_terms(g)? {
                if !powers[l].is_zero() {
                    *mat.get_mut(r, col) += &powers[l] * &x * c;
                }
            }
        }
        Ok(mat)
    }

    pub fn numeric_generators(&self) -> Result<Vec<QMat>> {
        let d = self.numeric_delta()?;
        Ok(self.gens.iter().map(|g| g.map(|x| x.eval(&d))).collect())
    }

    /// Bilinear form `⟨(b₁,T₁),(b₂,T₂)⟩ = δ^ℓ γ_{T₂} ρ(π)_{T₂,T₁}` when
    /// `flip(b₂)∘b₁ = δ^ℓ π` is a permutation, zero otherwise.
    pub fn gram_matrix(&self) -> Result<SMat> {
        let f = self.specht.dim();
        let n = self.dim();
        let mut g = SMat::zeros(n, n);
        let mut cache: HashMap<Vec<usize>, QMat> = HashMap::new();
        for (i1, b1) in self.diagrams.iter().enumerate() {
            for (i2, b2) in self.diagrams.iter().enumerate() {
                let (h, loops) = compose(b1, &flip(b2))?;
                let Some(pi) = h.as_permutation() else { continue };
                let rho = cache.entry(pi.clone()).or_insert_with(|| self.specht.permutation_matrix(&pi));
                let dl = self.delta.pow(loops);
                for t1 in 0..f {
                    for t2 in 0..f {
                        let c = rho.get(t2, t1) * &self.specht.gamma[t2];
                        if !c.is_zero() {
                            g.set(i1 * f + t1, i2 * f + t2, dl.scale(&c));
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn gram_matrix_q(&self) -> Result<QMat> {
        let d = self.numeric_delta()?;
        Ok(self.gram_matrix()?.map(|x| x.eval(&d)))
    }

    /// Matrices of the Jucys–Murphy elements `X_1..X_m`.
    pub fn jm_matrices(&self) -> Result<Vec<QMat>> {
        let d = self.numeric_delta()?;
        let delta = Scalar::constant(d.clone());
        let n = self.dim();
        (1..=self.m)
            .map(|i| {
                let x = jm_element(i, self.m, &delta)?;
                let mut acc = QMat::zeros(n, n);
                for (diag, c) in x.terms() {
                    let c = c.as_constant().unwrap();
                    acc = acc.add(&self.action_q(diag)?.scale(&c));
                }
                Ok(acc)
            })
            .collect()
    }

    /// Dimensions of the joint generalized eigenspaces of `X_1..X_m`.
    pub fn character(&self) -> Result<BTreeMap<Vec<Q>, usize>> {
        let d = self.numeric_delta()?;
        let mats = self.jm_matrices()?;
        for a in &mats {
            for b in &mats {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::Audit("Jucys–Murphy matrices do not commute".into()));
                }
            }
        }
        let base = (&d - &Q::one()) / q(2);
        let m = self.m as i64;
        let mut cands: Vec<Q> = Vec::new();
        for c in -m..=m {
            let v = &base + &q(c);
            cands.push(v.clone());
            cands.push(-v);
        }
        cands.sort();
        cands.dedup();
        joint_spectrum(&mats, self.dim(), &cands)
    }
}

/// Joint generalized eigenspace dimensions of commuting matrices, with all
/// eigenvalues drawn from `candidates`. Fails if the dimensions do not add up.
pub fn joint_spectrum(mats: &[QMat], dim: usize, candidates: &[Q]) -> Result<BTreeMap<Vec<Q>, usize>> {
    let mut out = BTreeMap::new();
    if dim == 0 {
        return Ok(out);
    }
    if mats.is_empty() {
        out.insert(Vec::new(), dim);
        return Ok(out);
    }
    spectrum_rec(mats.to_vec(), 0, &mut Vec::new(), candidates, &mut out)?;
    Ok(out)
}

fn spectrum_rec(
    mats: Vec<QMat>,
    level: usize,
    prefix: &mut Vec<Q>,
    cands: &[Q],
    out: &mut BTreeMap<Vec<Q>, usize>,
) -> Result<()> {
    let r = mats[0].rows();
    if level == mats.len() {
        *out.entry(prefix.clone()).or_insert(0) += r;
        return Ok(());
    }
    let x = &mats[level];
    let mut found = 0;
    for a in cands {
        if found == r {
            break;
        }
        let y = x.sub(&QMat::identity(r).scale(a));
        if !maybe_singular(&y) {
            continue;
        }
        let kernel = generalized_kernel(&y);
        if kernel.is_empty() {
            continue;
        }
        found += kernel.len();
        let restricted = restrict(&mats, &kernel);
        prefix.push(a.clone());
        spectrum_rec(restricted, level + 1, prefix, cands, out)?;
        prefix.pop();
    }
    if found != r {
        return Err(Error::Audit(format!("generalized eigenspaces cover {found} of {r} dimensions")));
    }
    Ok(())
}

/// Cheap filter: a matrix that is invertible modulo a prime is invertible over ℚ.
fn maybe_singular(y: &QMat) -> bool {
    let p = word_primes(1)[0];
    let mut m = ModMat::zeros(y.rows(), y.cols(), p);
    for i in 0..y.rows() {
        for j in 0..y.cols() {
            match q_mod(y.get(i, j), p) {
                Some(v) => m.set(i, j, v),
                None => return true,
            }
        }
    }
    m.rref().len() < y.rows()
}

/// Basis (as columns) of `ker Y^N` for `N` large.
fn generalized_kernel(y: &QMat) -> Vec<Vec<Q>> {
    let mut pw = y.clone();
    let mut ker = pw.nullspace();
    if ker.is_empty() {
        return ker;
    }
    loop {
        let next = pw.mul(y);
        let k2 = next.nullspace();
        if k2.len() == ker.len() {
            return ker;
        }
        pw = next;
        ker = k2;
    }
}

/// Matrices of `mats` restricted to the invariant subspace spanned by `basis`.
fn restrict(mats: &[QMat], basis: &[Vec<Q>]) -> Vec<QMat> {
    let n = mats[0].rows();
    let s = basis.len();
    let k = crate::linalg::columns_to_matrix(n, basis);
    let rows = k.transpose().independent_columns();
    let inv = k.submatrix(&rows, &(0..s).collect::<Vec<_>>()).inverse().expect("independent rows");
    mats.iter()
        .map(|m| {
            let mk = m.mul(&k);
            inv.mul(&mk.submatrix(&rows, &(0..s).collect::<Vec<_>>()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_frac;
    use crate::symgrp::lambda_plus;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn coset_counts() {
        assert_eq!(coset_reps(0, 4).unwrap(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(coset_reps(1, 3).unwrap().len(), 3);
        assert_eq!(coset_reps(2, 4).unwrap().len(), 3);
        assert!(coset_reps(2, 3).is_err());
        // each representative rebuilds its basis diagram
        for k in 0..=2 {
            for (b, d) in basis_diagrams(k, 5).iter().zip(coset_reps(k, 5).unwrap()) {
                let mut base = BrauerDiagram::identity(5 - 2 * k);
                for _ in 0..k {
                    base = crate::diagrams::tensor(&base, &BrauerDiagram::generator(crate::diagrams::Generator::Cup).unwrap());
                }
                let (x, loops) = compose(&base, &BrauerDiagram::from_permutation(&d)).unwrap();
                assert_eq!((x, loops), (b.clone(), 0));
            }
        }
    }

    #[test]
    fn small_modules() {
        let d = Scalar::delta();
        let m2 = CellModule::new(2, d.clone(), &Partition::empty()).unwrap();
        assert_eq!(m2.dim(), 1);
        assert_eq!(m2.gens[0].get(0, 0), &Scalar::one());
        assert_eq!(m2.gens[1].get(0, 0), &d);
        assert_eq!(m2.gram_matrix().unwrap().get(0, 0), &d);
        assert_eq!(CellModule::new(3, d.clone(), &p(&[1])).unwrap().dim(), 3);
        let triv = CellModule::new(4, d.clone(), &p(&[4])).unwrap();
        for i in 0..3 {
            assert_eq!(triv.gens[i].get(0, 0), &Scalar::one());
            assert!(triv.gens[3 + i].is_zero());
        }
        let sign = CellModule::new(2, d, &p(&[1, 1])).unwrap();
        assert!(!sign.gram_matrix().unwrap().get(0, 0).is_zero());
        let zero = CellModule::new(2, Scalar::int(0), &Partition::empty()).unwrap();
        assert_eq!(zero.gram_matrix_q().unwrap().rank(), 0);
        assert!(CellModule::new(3, Scalar::int(1), &p(&[2])).is_err());
    }

    #[test]
    fn dimension_formula() {
        for m in 0..=6 {
            for lam in lambda_plus(m) {
                let c = CellModule::new(m, Scalar::int(1), &lam).unwrap();
                assert_eq!(c.dim() as u128, CellModule::expected_dim(m, &lam));
            }
        }
    }

    #[test]
    fn representation_is_multiplicative() {
        for delta in [q(0), q(2), q_frac(1, 2)] {
            for m in 1..=3 {
                let all = enumerate(m, m);
                for lam in lambda_plus(m) {
                    let c = CellModule::new(m, Scalar::constant(delta.clone()), &lam).unwrap();
                    let mats: Vec<QMat> = all.iter().map(|x| c.action_q(x).unwrap()).collect();
                    for (i, x) in all.iter().enumerate() {
                        for (j, y) in all.iter().enumerate() {
                            let (xy, loops) = compose(y, x).unwrap();
                            let idx = all.iter().position(|z| *z == xy).unwrap();
                            let want = mats[idx].scale(&num_traits::pow(delta.clone(), loops));
                            assert_eq!(mats[i].mul(&mats[j]), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gram_invariance() {
        for m in 1..=4 {
            for lam in lambda_plus(m) {
                let c = CellModule::new(m, Scalar::delta(), &lam).unwrap();
                let g = c.gram_matrix().unwrap();
                assert_eq!(g, g.transpose());
                for x in standard_generators(m) {
                    let lhs = g.mul(&c.action(&x).unwrap());
                    let rhs = c.action(&flip(&x)).unwrap().transpose().mul(&g);
                    assert_eq!(lhs, rhs, "m={m} λ={lam}");
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        let d = q(3);
        let h = q(1);
        let c1 = CellModule::new(1, Scalar::constant(d.clone()), &p(&[1])).unwrap().character().unwrap();
        assert_eq!(c1, BTreeMap::from([(vec![h.clone()], 1)]));
        let c2 = CellModule::new(2, Scalar::constant(d.clone()), &Partition::empty()).unwrap().character().unwrap();
        assert_eq!(c2, BTreeMap::from([(vec![h.clone(), -h.clone()], 1)]));
        let c3 = CellModule::new(2, Scalar::constant(d), &p(&[2])).unwrap().character().unwrap();
        assert_eq!(c3, BTreeMap::from([(vec![h.clone(), q(2)], 1)]));
        assert!(CellModule::new(2, Scalar::delta(), &p(&[2])).unwrap().character().is_err());
    }
}
