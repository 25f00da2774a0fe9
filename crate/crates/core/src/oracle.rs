//! Decomposition numbers by brute force, independent of the KL side.
//!
//! The Jacobson radical `R` of `B_m(δ)` is the radical of the regular trace
//! form. Each cell module is filtered by `R^j Δ(μ)`; every layer is semisimple
//! and is decomposed by counting maps from the cell modules `Δ(λ)`, whose heads
//! are simple for `λ ∈ Λ̃⁺(m)`.
//!
//! Two shortcuts keep `m = 5` cheap:
//!
//! * `R` is replaced by a few generators of it as a two-sided ideal. The
//!   generators are certified by closing their span modulo a prime under both
//!   multiplications; the closure can only be smaller than the rational
//!   ideal, so reaching `dim R` proves equality.
//! * Hom dimensions are computed modulo a prime. They can only be too large,
//!   and the true values satisfy `Σ mult · dim L = dim layer`, so passing that
//!   audit proves they are exact.

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::algebra::{standard_generators, trace_form_radical_vectors, StructureTable};
use crate::cells::CellModule;
use crate::diagrams::BrauerDiagram;
use crate::error::{Error, Result};
use crate::linalg::{q_mod, word_primes, Coordinates, ModMat, ModSpan, QMat, QSpan};
use crate::scalar::{Scalar, Q};
use crate::symgrp::Partition;
use crate::transition::{lambda_tilde_plus, DecompositionMatrix, TransitionMatrix};

use num_traits::{One, Zero};

/// Trace-form radical of `B_m(δ)` with certified ideal generators.
pub struct Radical {
    pub table: StructureTable,
    pub delta: Q,
    /// Exact basis, coordinates over `table.basis`.
    pub basis: Vec<Vec<Q>>,
    /// Elements generating `basis` as a two-sided ideal.
    pub generators: Vec<Vec<Q>>,
}

fn reduce_vec(v: &[Q], p: u64) -> Option<Vec<u64>> {
    v.iter().map(|x| q_mod(x, p)).collect()
}

/// Left (`d·v`) or right (`v·d`) product with the basis diagram `g`, modulo `p`.
fn mult_mod(table: &StructureTable, g: usize, v: &[u64], left: bool, pows: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; v.len()];
    for (j, &c) in v.iter().enumerate() {
        if c != 0 {
            let (k, loops) = if left { table.product(g, j) } else { table.product(j, g) };
            out[k] = (out[k] + c * pows[loops]) % p;
        }
    }
    out
}

fn delta_powers(delta: &Q, m: usize, p: u64) -> Option<Vec<u64>> {
    let d = q_mod(delta, p)?;
    let mut pows = vec![1u64; m + 1];
    for i in 1..=m {
        pows[i] = pows[i - 1] * d % p;
    }
    Some(pows)
}

/// Rank modulo `p` of the two-sided ideal generated by `seeds`.
fn ideal_closure(table: &StructureTable, delta: &Q, seeds: &[Vec<Q>], p: u64, stop_at: usize) -> Option<usize> {
    let pows = delta_powers(delta, table.m, p)?;
    let gens: Vec<usize> = standard_generators(table.m).iter().map(|g| table.index_of(g).unwrap()).collect();
    let mut span = ModSpan::new(table.dim(), p);
    let mut queue = Vec::new();
    for s in seeds {
        let v = reduce_vec(s, p)?;
        if span.insert(v.clone()) {
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        if span.rank() >= stop_at {
            break;
        }
        for &g in &gens {
            for left in [true, false] {
                let w = mult_mod(table, g, &v, left, &pows, p);
                if span.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
    }
    Some(span.rank())
}

impl Radical {
    pub fn new(m: usize, delta: &Q, max_m: usize) -> Result<Self> {
        let table = StructureTable::new(m, max_m)?;
        let basis = trace_form_radical_vectors(&table, delta)?;
        let mut rad = Radical { table, delta: delta.clone(), basis, generators: Vec::new() };
        rad.generators = rad.find_generators()?;
        Ok(rad)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn find_generators(&self) -> Result<Vec<Vec<Q>>> {
        let r = self.dim();
        if r == 0 {
            return Ok(Vec::new());
        }
        let mut rng = StdRng::seed_from_u64(0x5eed ^ self.table.m as u64);
        for p in word_primes(4) {
            let mut gens: Vec<Vec<Q>> = Vec::new();
            // a few random combinations, then basis vectors as a fallback
            for attempt in 0..4 + r {
                let cand: Vec<Q> = if attempt < 4 {
                    let mut v = vec![Q::zero(); self.table.dim()];
                    for b in &self.basis {
                        let c = Q::from_integer(rng.gen_range(-3i64..=3).into());
                        for (x, y) in v.iter_mut().zip(b) {
                            *x += &c * y;
                        }
                    }
                    v
                } else {
                    self.basis[attempt - 4].clone()
                };
                gens.push(cand);
                match ideal_closure(&self.table, &self.delta, &gens, p, r) {
                    None => break,
                    Some(rank) if rank >= r => return Ok(gens),
                    Some(_) => {}
                }
            }
        }
        Err(Error::Audit("no certified ideal generators for the radical".into()))
    }

    /// Whether the span of `basis` is closed under both multiplications, checked modulo `p`.
    pub fn is_ideal_mod(&self, p: u64) -> Option<bool> {
        Some(ideal_closure(&self.table, &self.delta, &self.basis, p, usize::MAX)? == self.dim())
    }

    /// Smallest `k` with `R^k = 0`, checked modulo `p` up to `bound`.
    pub fn nilpotency_index_mod(&self, p: u64, bound: usize) -> Option<usize> {
        let pows = delta_powers(&self.delta, self.table.m, p)?;
        let basis: Vec<Vec<u64>> = self.basis.iter().map(|v| reduce_vec(v, p)).collect::<Option<_>>()?;
        let n = self.table.dim();
        let mut power = basis.clone();
        for k in 1..=bound {
            if power.is_empty() {
                return Some(k);
            }
            if k == bound {
                break;
            }
            // R^{k+1} = R^k · R
            let mut span = ModSpan::new(n, p);
            let mut next = Vec::new();
            for a in &power {
                for b in &basis {
                    let mut out = vec![0u64; n];
                    for (i, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (j, &y) in b.iter().enumerate() {
                            if y != 0 {
                                let (t, loops) = self.table.product(i, j);
                                out[t] = (out[t] + x * y % p * pows[loops]) % p;
                            }
                        }
                    }
                    if span.insert(out.clone()) {
                        next.push(out);
                    }
                }
            }
            power = next;
        }
        None
    }

    /// Matrices of the ideal generators on a cell module.
    pub fn generator_actions(&self, module: &CellModule) -> Result<Vec<QMat>> {
        self.generators.iter().map(|g| module.element_action_q(self.table.basis.iter().zip(g))).collect()
    }
}

/// `B`-submodule generated by `seeds`, closing under the generator matrices.
pub fn submodule(gens: &[QMat], seeds: impl IntoIterator<Item = Vec<Q>>, dim: usize) -> Vec<Vec<Q>> {
    let mut span = QSpan::new(dim);
    let mut queue: Vec<Vec<Q>> = seeds.into_iter().filter(|v| span.insert(v.clone())).collect();
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.mul_vec(&v);
            if span.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    span.basis().to_vec()
}

/// Subquotient `N_j / N_{j+1}` of a module, with a way to act on it.
pub struct Layer {
    ext: Vec<Vec<Q>>,
    offset: usize,
    coords: Coordinates,
}

impl Layer {
    fn new(upper: &[Vec<Q>], lower: &[Vec<Q>], dim: usize) -> Result<Self> {
        let mut span = QSpan::new(dim);
        for v in lower {
            span.insert(v.clone());
        }
        let ext: Vec<Vec<Q>> = upper.iter().filter(|v| span.insert((*v).clone())).cloned().collect();
        let mut full = lower.to_vec();
        full.extend(ext.iter().cloned());
        let coords = Coordinates::new(&full).ok_or_else(|| Error::Audit("layer basis is degenerate".into()))?;
        Ok(Layer { ext, offset: lower.len(), coords })
    }

    pub fn dim(&self) -> usize {
        self.ext.len()
    }

    /// Matrix on the layer of an operator preserving the filtration.
    pub fn act(&self, x: &QMat) -> QMat {
        let q = self.dim();
        let cols: Vec<Vec<Q>> = self.ext.iter().map(|e| self.coords.of(&x.mul_vec(e))[self.offset..].to_vec()).collect();
        QMat::from_fn(q, q, |i, j| cols[j][i].clone())
    }
}

/// Layers of the radical filtration `R^j Δ(μ)`, top first.
pub fn radical_layers(rad: &Radical, module: &CellModule) -> Result<Vec<Layer>> {
    let n = module.dim();
    let gens = module.numeric_generators()?;
    let rg = rad.generator_actions(module)?;
    let mut current: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    let mut layers = Vec::new();
    while !current.is_empty() {
        let seeds: Vec<Vec<Q>> = rg.iter().flat_map(|r| current.iter().map(move |v| r.mul_vec(v))).collect();
        let next = submodule(&gens, seeds, n);
        if next.len() >= current.len() {
            return Err(Error::NotClosed(format!("radical filtration of Δ({}) does not descend", module.shape)));
        }
        layers.push(Layer::new(&current, &next, n)?);
        current = next;
    }
    Ok(layers)
}

/// A probe `Δ(λ)` with its generating vectors `(b₀, T)` and the coset diagrams reaching every basis vector.
struct Probe {
    label: Partition,
    f: usize,
    gens: Vec<QMat>,
    /// per basis vector: (index of coset diagram, tableau)
    cols: Vec<(usize, usize)>,
    cosets: Vec<BrauerDiagram>,
    simple_dim: usize,
}

impl Probe {
    fn new(m: usize, delta: &Q, label: &Partition) -> Result<Self> {
        let module = CellModule::new(m, Scalar::constant(delta.clone()), label)?;
        let f = module.specht.dim();
        let n = module.dim();
        let identity: Vec<usize> = (0..m).collect();
        let b0 = module
            .basis
            .iter()
            .position(|v| v.coset == identity)
            .ok_or_else(|| Error::Audit("cell module lacks the standard generating diagram".into()))?
            / f;
        let cosets: Vec<BrauerDiagram> =
            (0..module.diagrams.len()).map(|bi| BrauerDiagram::from_permutation(&module.basis[bi * f].coset)).collect();
        // (b, T) must equal d_b · (b₀, T)
        for (bi, d) in cosets.iter().enumerate() {
            let a = module.action_q(d)?;
            for t in 0..f {
                let col = a.column(b0 * f + t);
                if (0..n).any(|r| col[r] != if r == bi * f + t { Q::one() } else { Q::zero() }) {
                    return Err(Error::Audit(format!("coset diagram does not reach basis vector {bi} of Δ({label})")));
                }
            }
        }
        let simple_dim = module.gram_matrix_q()?.rank();
        let cols = (0..n).map(|c| (c / f, c % f)).collect();
        Ok(Probe { label: label.clone(), f, gens: module.numeric_generators()?, cols, cosets, simple_dim })
    }

    /// `dim Hom(Δ(λ), layer)` modulo `p`, given the layer action of the generators and of the coset diagrams.
    fn hom_dim_mod(&self, layer_gens: &[QMat], layer_cosets: &[QMat], q: usize, p: u64) -> Option<usize> {
        let unknowns = self.f * q;
        if unknowns == 0 {
            return Some(0);
        }
        let to_mod = |m: &QMat| -> Option<Vec<Vec<u64>>> {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| q_mod(m.get(i, j), p)).collect()).collect()
        };
        let dmod: Vec<Vec<Vec<u64>>> = layer_cosets.iter().map(to_mod).collect::<Option<_>>()?;
        let n = self.cols.len();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (g, lg) in self.gens.iter().zip(layer_gens) {
            let gm = to_mod(g)?;
            let lgm = to_mod(lg)?;
            for c in 0..n {
                let mut block = vec![vec![0u64; unknowns]; q];
                // Σ_{c'} G[c', c] φ(e_{c'})
                for c2 in 0..n {
                    let coef = gm[c2][c];
                    if coef == 0 {
                        continue;
                    }
                    let (b, t) = self.cols[c2];
                    for (i, row) in block.iter_mut().enumerate() {
                        for a in 0..q {
                            row[t * q + a] = (row[t * q + a] + coef * dmod[b][i][a]) % p;
                        }
                    }
                }
                // − ρ_Q(g) φ(e_c)
                let (b, t) = self.cols[c];
                for (i, row) in block.iter_mut().enumerate() {
                    for a in 0..q {
                        let mut s = 0u64;
                        for k in 0..q {
                            s = (s + lgm[i][k] * dmod[b][k][a]) % p;
                        }
                        row[t * q + a] = (row[t * q + a] + p - s) % p;
                    }
                }
                rows.extend(block.into_iter().filter(|r| r.iter().any(|&x| x != 0)));
            }
        }
        if rows.is_empty() {
            return Some(unknowns);
        }
        let mut mm = ModMat::zeros(rows.len(), unknowns, p);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                mm.set(i, j, x);
            }
        }
        Some(unknowns - mm.rref().len())
    }
}

/// `dim L_m(λ)` for `λ ∈ Λ̃⁺(m)`: the rank of the Gram matrix of `Δ_m(λ)`.
pub fn simple_dims(m: usize, delta: &Q) -> Result<Vec<(Partition, usize)>> {
    lambda_tilde_plus(m, delta)
        .par_iter()
        .map(|l| {
            let module = CellModule::new(m, Scalar::constant(delta.clone()), l)?;
            Ok((l.clone(), module.gram_matrix_q()?.rank()))
        })
        .collect()
}

/// Multiplicities `[layer : L(λ)]` for every probe, certified by the dimension audit.
fn decompose_layer(probes: &[Probe], layer: &Layer, module: &CellModule, gens: &[QMat], cache: &mut HashMap<BrauerDiagram, QMat>) -> Result<Vec<usize>> {
    let q = layer.dim();
    let layer_gens: Vec<QMat> = gens.iter().map(|g| layer.act(g)).collect();
    let mut per_probe = Vec::new();
    for probe in probes {
        let mut cos = Vec::new();
        for d in &probe.cosets {
            if !cache.contains_key(d) {
                cache.insert(d.clone(), module.action_q(d)?);
            }
            cos.push(layer.act(&cache[d]));
        }
        per_probe.push((layer_gens.clone(), cos));
    }
    for p in word_primes(6) {
        let mut mults = Vec::new();
        for (probe, (lg, cos)) in probes.iter().zip(&per_probe) {
            match probe.hom_dim_mod(lg, cos, q, p) {
                Some(h) => mults.push(h),
                None => break,
            }
        }
        if mults.len() != probes.len() {
            continue;
        }
        let total: usize = mults.iter().zip(probes).map(|(h, pr)| h * pr.simple_dim).sum();
        if total == q {
            return Ok(mults);
        }
    }
    Err(Error::Audit(format!("layer of dimension {q} in Δ({}) failed the composition audit", module.shape)))
}

/// `[Δ_m(μ) : L_m(λ)]` for `μ ∈ Λ⁺(m)`, `λ ∈ Λ̃⁺(m)`.
pub fn decomp_oracle(m: usize, delta: &Q, max_m: usize) -> Result<DecompositionMatrix> {
    let rad = Radical::new(m, delta, max_m)?;
    decomp_with_radical(&rad)
}

pub fn decomp_with_radical(rad: &Radical) -> Result<DecompositionMatrix> {
    let (m, delta) = (rad.table.m, &rad.delta);
    let rows = crate::symgrp::lambda_plus(m);
    let cols = lambda_tilde_plus(m, delta);
    let probes: Vec<Probe> = cols.par_iter().map(|l| Probe::new(m, delta, l)).collect::<Result<_>>()?;
    let row_entries: Vec<Vec<i64>> = rows
        .par_iter()
        .map(|mu| -> Result<Vec<i64>> {
            let module = CellModule::new(m, Scalar::constant(delta.clone()), mu)?;
            let gens = module.numeric_generators()?;
            let mut cache = HashMap::new();
            let mut acc = vec![0i64; probes.len()];
            for layer in radical_layers(rad, &module)? {
                for (a, h) in acc.iter_mut().zip(decompose_layer(&probes, &layer, &module, &gens, &mut cache)?) {
                    *a += h as i64;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let labels: Vec<Partition> = probes.iter().map(|p| p.label.clone()).collect();
    debug_assert_eq!(labels, cols);
    Ok(TransitionMatrix { rows, cols, entries: row_entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simple_dims_examples() {
        assert_eq!(simple_dims(1, &q(0)).unwrap(), vec![(p(&[1]), 1)]);
        assert_eq!(simple_dims(2, &q(0)).unwrap(), vec![(p(&[2]), 1), (p(&[1, 1]), 1)]);
        for m in 1..=4 {
            for (l, d) in simple_dims(m, &q_frac(1, 2)).unwrap() {
                assert_eq!(d as u128, CellModule::expected_dim(m, &l));
            }
        }
    }

    #[test]
    fn oracle_m2_delta0() {
        let mat = decomp_oracle(2, &q(0), 5).unwrap();
        assert_eq!(mat.get(&Partition::empty(), &p(&[2])), Some(1));
        assert_eq!(mat.entries, vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn generic_is_identity() {
        for m in 0..=4 {
            let mat = decomp_oracle(m, &q_frac(1, 2), 5).unwrap();
            assert_eq!(mat.rows, mat.cols);
            assert!(mat.nonzero().iter().all(|(r, c, v)| r == c && *v == 1));
        }
    }

    #[test]
    fn radical_is_nilpotent_ideal() {
        for (m, d) in [(2, 0), (3, 1), (4, 0), (4, 1), (4, 2)] {
            let rad = Radical::new(m, &q(d), 5).unwrap();
            assert!(rad.dim() > 0);
            let prime = word_primes(1)[0];
            assert_eq!(rad.is_ideal_mod(prime), Some(true));
            let k = rad.nilpotency_index_mod(prime, rad.dim() + 1).unwrap();
            assert!(k >= 2 && k <= rad.dim() + 1);
        }
    }

    #[test]
    fn diagonal_and_audit_small() {
        for d in [0, 1, 2, 4] {
            for m in 0..=4 {
                let mat = decomp_oracle(m, &q(d), 5).unwrap();
                assert!(mat.is_lower_unitriangular(), "m={m} δ={d}: {mat:?}");
            }
        }
    }
}
