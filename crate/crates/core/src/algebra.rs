//! Linear combinations of diagrams and the corner algebras `B_m(δ)`.
//!
//! Products weight each composite by `δ^loops`. The parameter may be a
//! rational number or the formal indeterminate. The trace-form radical is
//! computed exactly through [`crate::linalg::certified_kernel`].

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{compose, enumerate, flip, BrauerDiagram, Generator};
use crate::error::{Error, Result};
use crate::linalg::{certified_kernel, ZMat};
use crate::scalar::{Scalar, Q};

/// Default ceiling on `m` for computations over the full regular representation.
pub const DEFAULT_MAX_M: usize = 5;

/// A finite linear combination of `(m, s)`-diagrams.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct Element {
    m: usize,
    s: usize,
    terms: BTreeMap<BrauerDiagram, Scalar>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    m: usize,
    s: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    diagram: BrauerDiagram,
    coeff: Scalar,
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        let mut e = Element::zero(r.m, r.s);
        for t in r.terms {
            e.add_term(t.diagram, t.coeff)?;
        }
        Ok(e)
    }
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        ElementRepr {
            m: e.m,
            s: e.s,
            terms: e.terms.into_iter().map(|(diagram, coeff)| TermRepr { diagram, coeff }).collect(),
        }
    }
}

impl Element {
    pub fn zero(m: usize, s: usize) -> Self {
        Element { m, s, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: BrauerDiagram) -> Self {
        Self::from_term(d, Scalar::one())
    }

    pub fn from_term(d: BrauerDiagram, c: Scalar) -> Self {
        let mut e = Element::zero(d.bottom(), d.top());
        e.add_term(d, c).expect("arity matches by construction");
        e
    }

    pub fn identity(m: usize) -> Self {
        Self::from_diagram(BrauerDiagram::identity(m))
    }

    pub fn hom_space(&self) -> (usize, usize) {
        (self.m, self.s)
    }

    pub fn terms(&self) -> &BTreeMap<BrauerDiagram, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &BrauerDiagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, d: BrauerDiagram, c: Scalar) -> Result<()> {
        if (d.bottom(), d.top()) != (self.m, self.s) {
            return Err(Error::ArityMismatch(format!(
                "term {:?} does not lie in Hom({}, {})",
                d, self.m, self.s
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &Element) -> Result<Element> {
        let mut out = self.clone();
        for (d, c) in &o.terms {
            out.add_term(d.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Element) -> Result<Element> {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = Element::zero(self.m, self.s);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x * c).unwrap();
        }
        out
    }

    /// Specializes a formal parameter to a number.
    pub fn eval(&self, at: &Q) -> Element {
        let mut out = Element::zero(self.m, self.s);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), Scalar::constant(x.eval(at))).unwrap();
        }
        out
    }

    /// Termwise vertical reflection.
    pub fn flip(&self) -> Element {
        let mut out = Element::zero(self.s, self.m);
        for (d, x) in &self.terms {
            out.add_term(flip(d), x.clone()).unwrap();
        }
        out
    }
}

/// `x ∘ y` with `y` applied first; zero when the inner arities differ.
pub fn mult(x: &Element, y: &Element, delta: &Scalar) -> Element {
    let mut out = Element::zero(y.m, x.s);
    if x.m != y.s {
        return out;
    }
    let max_loops = y.s;
    let powers: Vec<Scalar> = (0..=max_loops).map(|k| delta.pow(k)).collect();
    for (dy, cy) in &y.terms {
        for (dx, cx) in &x.terms {
            let (d, loops) = compose(dy, dx).expect("arities checked");
            let c = &(cx * cy) * &powers[loops];
            out.add_term(d, c).unwrap();
        }
    }
    out
}

/// The Jucys–Murphy element `X_i` of `B_m(δ)`.
pub fn jm_element(i: usize, m: usize, delta: &Scalar) -> Result<Element> {
    if i == 0 || i > m {
        return Err(Error::OutOfRange(format!("jm_element({i}, {m})")));
    }
    let half = Q::new(BigInt::from(1), BigInt::from(2));
    let shift = (delta - &Scalar::one()).scale(&half);
    let mut x = Element::zero(m, m);
    x.add_term(BrauerDiagram::identity(m), shift)?;
    for k in 1..i {
        x.add_term(BrauerDiagram::generator(Generator::Transposition(k, i, m))?, Scalar::one())?;
        x.add_term(BrauerDiagram::generator(Generator::Bar(k, i, m))?, Scalar::int(-1))?;
    }
    Ok(x)
}

/// Multiplication table of the diagram basis of `B_m`.
///
/// `d_i · d_j = δ^{loops} d_k` is stored as `(k, loops)`; the coefficient is
/// produced on demand so that the same table serves every value of `δ`.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub m: usize,
    pub basis: Vec<BrauerDiagram>,
    index: HashMap<BrauerDiagram, usize>,
    prod: Vec<(u32, u8)>,
}

impl StructureTable {
    pub fn new(m: usize, max_m: usize) -> Result<Self> {
        if m > max_m {
            return Err(Error::ResourceBound(format!("m = {m} exceeds the configured bound {max_m}")));
        }
        let basis = enumerate(m, m);
        let index: HashMap<BrauerDiagram, usize> = basis.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let n = basis.len();
        let prod: Vec<(u32, u8)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let (basis, index) = (&basis, &index);
                (0..n).map(move |j| {
                    let (d, loops) = compose(&basis[j], &basis[i]).unwrap();
                    (index[&d] as u32, loops as u8)
                })
            })
            .collect();
        Ok(StructureTable { m, basis, index, prod })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, d: &BrauerDiagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// `(k, loops)` with `d_i · d_j = δ^loops d_k`.
    pub fn product(&self, i: usize, j: usize) -> (usize, usize) {
        let (k, l) = self.prod[i * self.basis.len() + j];
        (k as usize, l as usize)
    }

    /// Structure constant `c^k_{ij}`.
    pub fn coefficient(&self, i: usize, j: usize, k: usize, delta: &Scalar) -> Scalar {
        let (kk, loops) = self.product(i, j);
        if kk == k {
            delta.pow(loops)
        } else {
            Scalar::zero()
        }
    }

    /// Trace of left multiplication by `d_k`, as a polynomial in `δ`
    /// (coefficient `c` at index `e` means `c·δ^e`).
    pub fn left_traces(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        (0..n)
            .into_par_iter()
            .map(|k| {
                let mut poly = vec![0i64; self.m + 1];
                for l in 0..n {
                    let (t, loops) = self.product(k, l);
                    if t == l {
                        poly[loops] += 1;
                    }
                }
                poly
            })
            .collect()
    }

    /// Vector of coordinates of `x ∈ B_m` in the diagram basis, for numeric `δ`.
    pub fn coords(&self, x: &Element) -> Result<Vec<Q>> {
        if x.hom_space() != (self.m, self.m) {
            return Err(Error::ArityMismatch("element is not in B_m".into()));
        }
        let mut v = vec![Q::zero(); self.dim()];
        for (d, c) in x.terms() {
            v[self.index[d]] = c.as_constant().ok_or_else(|| Error::Symbolic("coordinates".into()))?;
        }
        Ok(v)
    }

    pub fn element(&self, v: &[Q]) -> Element {
        let mut e = Element::zero(self.m, self.m);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.add_term(self.basis[i].clone(), Scalar::constant(c.clone())).unwrap();
            }
        }
        e
    }
}

/// Structure constants of `B_m(δ)` over the canonical diagram basis.
pub fn structure_constants(m: usize, max_m: usize) -> Result<StructureTable> {
    StructureTable::new(m, max_m)
}

/// Integer matrix proportional to the regular trace form `(a, b) ↦ tr(L_{ab})`
/// at a numeric `δ = p/q`, scaled by `q^{2m}`.
pub fn trace_form_matrix(table: &StructureTable, delta: &Q) -> Result<ZMat> {
    let m = table.m;
    let (num, den) = (delta.numer(), delta.denom());
    let to_i128 = |x: BigInt| -> Result<i128> {
        i128::try_from(x).map_err(|_| Error::ResourceBound("trace form entries overflow i128".into()))
    };
    // p^a q^{m-a}, so that δ^a = pw[a] / q^m
    let pw: Vec<i128> = (0..=m)
        .map(|a| to_i128(num.pow(a as u32) * den.pow((m - a) as u32)))
        .collect::<Result<_>>()?;
    let traces: Vec<i128> = table
        .left_traces()
        .into_iter()
        .map(|poly| poly.iter().zip(&pw).map(|(&c, &w)| c as i128 * w).sum())
        .collect();
    let n = table.dim();
    let mut g = ZMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (k, loops) = table.product(i, j);
            let v = pw[loops].checked_mul(traces[k]).ok_or_else(|| Error::ResourceBound("trace form overflow".into()))?;
            g.set(i, j, v);
        }
    }
    Ok(g)
}

/// Exact basis (in RREF normal form) of the radical of the regular trace form
/// of `B_m(δ)`, as coordinate vectors over `table.basis`.
pub fn trace_form_radical_vectors(table: &StructureTable, delta: &Q) -> Result<Vec<Vec<Q>>> {
    let g = trace_form_matrix(table, delta)?;
    // The form is symmetric, so the right kernel is the radical.
    Ok(certified_kernel(&g, 256)?.basis)
}

/// Basis of the trace-form radical of `B_m(δ)` for numeric `δ`.
pub fn trace_form_radical(m: usize, delta: &Scalar, max_m: usize) -> Result<Vec<Element>> {
    let d = delta.as_constant().ok_or_else(|| Error::Symbolic("trace_form_radical needs a numeric parameter".into()))?;
    let table = StructureTable::new(m, max_m)?;
    Ok(trace_form_radical_vectors(&table, &d)?.iter().map(|v| table.element(v)).collect())
}

/// The standard generators `S_1..S_{m-1}` followed by `Ē_1..Ē_{m-1}`.
pub fn standard_generators(m: usize) -> Vec<BrauerDiagram> {
    let mut gens = Vec::new();
    for i in 1..m {
        gens.push(BrauerDiagram::simple(i, m).unwrap());
    }
    for i in 1..m {
        gens.push(BrauerDiagram::simple_bar(i, m).unwrap());
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};
    use proptest::prelude::*;

    fn bar(k: usize, l: usize, m: usize) -> Element {
        Element::from_diagram(BrauerDiagram::generator(Generator::Bar(k, l, m)).unwrap())
    }

    fn s(i: usize, m: usize) -> Element {
        Element::from_diagram(BrauerDiagram::simple(i, m).unwrap())
    }

    #[test]
    fn bar_squares_to_delta_bar() {
        let e = bar(1, 2, 2);
        let d = Scalar::delta();
        assert_eq!(mult(&e, &e, &d), e.scale(&d));
        let x = Element::from_term(BrauerDiagram::identity(2), Scalar::int(3));
        assert_eq!(mult(&Element::identity(2), &x, &d), x);
    }

    #[test]
    fn arity_mismatch_gives_zero() {
        let cap = Element::from_diagram(BrauerDiagram::generator(Generator::Cap).unwrap());
        let p = mult(&cap, &cap, &Scalar::int(2));
        assert!(p.is_zero());
    }

    #[test]
    fn jm_low_cases() {
        let d = Scalar::delta();
        let x1 = jm_element(1, 3, &d).unwrap();
        assert_eq!(x1.terms().len(), 1);
        assert_eq!(x1.coeff(&BrauerDiagram::identity(3)).to_string(), "1/2*d - 1/2");
        let x2 = jm_element(2, 2, &d).unwrap();
        let expect = Element::identity(2)
            .scale(&"1/2*d - 1/2".parse().unwrap())
            .add(&s(1, 2))
            .unwrap()
            .sub(&bar(1, 2, 2))
            .unwrap();
        assert_eq!(x2, expect);
        assert!(jm_element(0, 2, &d).is_err());
        assert!(jm_element(3, 2, &d).is_err());
    }

    #[test]
    fn jm_recursion_and_commutativity() {
        for delta in [Scalar::delta(), Scalar::int(0), Scalar::constant(q_frac(1, 2))] {
            for m in 1..=4 {
                let xs: Vec<Element> = (1..=m).map(|i| jm_element(i, m, &delta).unwrap()).collect();
                for i in 0..m {
                    assert_eq!(xs[i].flip(), xs[i]);
                    for j in 0..m {
                        assert_eq!(mult(&xs[i], &xs[j], &delta), mult(&xs[j], &xs[i], &delta));
                    }
                }
                for i in 1..m {
                    let si = s(i, m);
                    let rhs = mult(&mult(&si, &xs[i - 1], &delta), &si, &delta)
                        .add(&si)
                        .unwrap()
                        .sub(&bar(i, i + 1, m))
                        .unwrap();
                    assert_eq!(xs[i], rhs);
                }
            }
        }
    }

    #[test]
    fn structure_table_small() {
        let t1 = StructureTable::new(1, 5).unwrap();
        assert_eq!(t1.dim(), 1);
        assert_eq!(t1.coefficient(0, 0, 0, &Scalar::delta()), Scalar::one());
        let t2 = StructureTable::new(2, 5).unwrap();
        assert_eq!(t2.dim(), 3);
        let e = t2.index_of(&BrauerDiagram::simple_bar(1, 2).unwrap()).unwrap();
        for k in 0..3 {
            let c = t2.coefficient(e, e, k, &Scalar::delta());
            assert_eq!(c, if k == e { Scalar::delta() } else { Scalar::zero() });
        }
        assert_eq!(StructureTable::new(4, 5).unwrap().dim(), 105);
        assert!(StructureTable::new(6, 5).is_err());
    }

    #[test]
    fn radical_examples() {
        assert!(trace_form_radical(1, &Scalar::int(0), 5).unwrap().is_empty());
        let r = trace_form_radical(2, &Scalar::int(0), 5).unwrap();
        assert_eq!(r.len(), 1);
        let ebar = BrauerDiagram::simple_bar(1, 2).unwrap();
        assert_eq!(r[0].terms().keys().collect::<Vec<_>>(), vec![&ebar]);
        for m in 1..=4 {
            assert!(trace_form_radical(m, &Scalar::constant(q_frac(1, 2)), 5).unwrap().is_empty());
        }
        assert!(trace_form_radical(2, &Scalar::delta(), 5).is_err());
    }

    #[test]
    fn radical_is_an_ideal_and_nilpotent() {
        let delta = q(1);
        let table = StructureTable::new(3, 5).unwrap();
        let rad = trace_form_radical_vectors(&table, &delta).unwrap();
        assert!(!rad.is_empty());
        let d = Scalar::constant(delta.clone());
        let rad_el: Vec<Element> = rad.iter().map(|v| table.element(v)).collect();
        let rad_mat = crate::linalg::columns_to_matrix(table.dim(), &rad);
        let r0 = rad_mat.rank();
        let in_rad = |e: &Element| {
            let mut cols = rad.clone();
            cols.push(table.coords(e).unwrap());
            crate::linalg::columns_to_matrix(table.dim(), &cols).rank() == r0
        };
        for r in &rad_el {
            for g in standard_generators(3) {
                let g = Element::from_diagram(g);
                assert!(in_rad(&mult(&g, r, &d)));
                assert!(in_rad(&mult(r, &g, &d)));
            }
        }
        // products of dim+1 radical elements vanish
        let mut p = rad_el[0].clone();
        for r in rad_el.iter().cycle().take(rad_el.len() + 1) {
            p = mult(&p, r, &d);
        }
        assert!(p.is_zero());
    }

    fn arb_element(m: usize) -> impl Strategy<Value = Element> {
        let basis = enumerate(m, m);
        let n = basis.len();
        prop::collection::vec((0..n, -3i64..4), 1..4).prop_map(move |v| {
            let mut e = Element::zero(m, m);
            for (i, c) in v {
                e.add_term(basis[i].clone(), Scalar::int(c)).unwrap();
            }
            e
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn associative_and_distributive(x in arb_element(3), y in arb_element(3), z in arb_element(3)) {
            let d = Scalar::delta();
            prop_assert_eq!(mult(&mult(&x, &y, &d), &z, &d), mult(&x, &mult(&y, &z, &d), &d));
            prop_assert_eq!(mult(&x, &y.add(&z).unwrap(), &d), mult(&x, &y, &d).add(&mult(&x, &z, &d)).unwrap());
        }

        #[test]
        fn element_json_round_trip(x in arb_element(2)) {
            let text = serde_json::to_string(&x).unwrap();
            let back: Element = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}
