//! Brauer diagrams in normal form.
//!
//! An `(m, s)`-diagram is a perfect matching on `m` bottom and `s` top
//! vertices. Vertices are labelled `1..=m` along the bottom and
//! `m+1..=m+s` along the top, left to right. Internally the matching is a
//! 0-based partner table, which is canonical: two diagrams are equal exactly
//! when they give the same pairing.
//!
//! Composition never applies the bubble scalar. It reports how many closed
//! loops were erased and leaves weighting to the caller.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct BrauerDiagram {
    m: usize,
    s: usize,
    partner: Vec<u16>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    m: usize,
    s: usize,
    pairs: Vec<[usize; 2]>,
}

impl TryFrom<DiagramRepr> for BrauerDiagram {
    type Error = Error;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        let d = BrauerDiagram::from_pairs(r.m, r.s, &r.pairs)?;
        // Serialized form must already be canonical, so that re-encoding is byte-identical.
        if d.pairs() != r.pairs {
            return Err(Error::InvalidDiagram("pairs are not in canonical order".into()));
        }
        Ok(d)
    }
}

impl From<BrauerDiagram> for DiagramRepr {
    fn from(d: BrauerDiagram) -> Self {
        DiagramRepr { m: d.m, s: d.s, pairs: d.pairs() }
    }
}

impl fmt::Debug for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{} ", self.m, self.s)?;
        let pairs = self.pairs();
        for (i, [a, b]) in pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        write!(f, ")")
    }
}

/// Named generators and standard elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Identity(usize),
    Cap,
    Cup,
    Cross,
    /// The crossing of strands `k < l` among `m`.
    Transposition(usize, usize, usize),
    /// Cap-cup joining bottom `k, l` and top `k, l` among `m` strands.
    Bar(usize, usize, usize),
    /// `S_i ∘ S_{i+1} ∘ ⋯ ∘ S_{m-1}` in `m` strands.
    SChain(usize, usize),
    /// `U^{⊗k} ∘ A^{⊗k}` on `2k` strands.
    EPower(usize),
}

impl BrauerDiagram {
    /// Builds a diagram from 1-based vertex pairs in any order.
    pub fn from_pairs(m: usize, s: usize, pairs: &[[usize; 2]]) -> Result<Self> {
        let n = m + s;
        if n % 2 == 1 {
            return Err(Error::InvalidDiagram(format!("{m}+{s} vertices cannot be perfectly matched")));
        }
        if pairs.len() * 2 != n {
            return Err(Error::InvalidDiagram(format!("expected {} pairs, got {}", n / 2, pairs.len())));
        }
        let mut partner = vec![u16::MAX; n];
        for &[a, b] in pairs {
            if a == 0 || b == 0 || a > n || b > n || a == b {
                return Err(Error::InvalidDiagram(format!("bad pair [{a},{b}]")));
            }
            let (a, b) = (a - 1, b - 1);
            if partner[a] != u16::MAX || partner[b] != u16::MAX {
                return Err(Error::InvalidDiagram("vertex used twice".into()));
            }
            partner[a] = b as u16;
            partner[b] = a as u16;
        }
        Ok(BrauerDiagram { m, s, partner })
    }

    pub(crate) fn from_partner(m: usize, s: usize, partner: Vec<u16>) -> Self {
        debug_assert_eq!(partner.len(), m + s);
        debug_assert!(partner.iter().enumerate().all(|(i, &p)| partner[p as usize] as usize == i && p as usize != i));
        BrauerDiagram { m, s, partner }
    }

    pub fn identity(m: usize) -> Self {
        let mut partner = vec![0u16; 2 * m];
        for i in 0..m {
            partner[i] = (m + i) as u16;
            partner[m + i] = i as u16;
        }
        BrauerDiagram { m, s: m, partner }
    }

    /// The permutation diagram sending bottom `i` to top `perm[i]` (0-based).
    pub fn from_permutation(perm: &[usize]) -> Self {
        let m = perm.len();
        let mut partner = vec![0u16; 2 * m];
        for (i, &p) in perm.iter().enumerate() {
            partner[i] = (m + p) as u16;
            partner[m + p] = i as u16;
        }
        BrauerDiagram { m, s: m, partner }
    }

    pub fn generator(kind: Generator) -> Result<Self> {
        match kind {
            Generator::Identity(m) => Ok(Self::identity(m)),
            Generator::Cap => Self::from_pairs(2, 0, &[[1, 2]]),
            Generator::Cup => Self::from_pairs(0, 2, &[[1, 2]]),
            Generator::Cross => Self::from_pairs(2, 2, &[[1, 4], [2, 3]]),
            Generator::Transposition(k, l, m) => {
                check_pair(k, l, m)?;
                let mut perm: Vec<usize> = (0..m).collect();
                perm.swap(k - 1, l - 1);
                Ok(Self::from_permutation(&perm))
            }
            Generator::Bar(k, l, m) => {
                check_pair(k, l, m)?;
                let mut pairs = vec![[k, l], [m + k, m + l]];
                for i in 1..=m {
                    if i != k && i != l {
                        pairs.push([i, m + i]);
                    }
                }
                Self::from_pairs(m, m, &pairs)
            }
            Generator::SChain(i, m) => {
                if i == 0 || i > m {
                    return Err(Error::OutOfRange(format!("s_chain({i},{m})")));
                }
                let mut d = Self::identity(m);
                for j in (i..m).rev() {
                    let sj = Self::generator(Generator::Transposition(j, j + 1, m))?;
                    d = compose(&d, &sj)?.0;
                }
                Ok(d)
            }
            Generator::EPower(k) => {
                let caps = Self::repeat(&Self::generator(Generator::Cap)?, k);
                let cups = Self::repeat(&Self::generator(Generator::Cup)?, k);
                Ok(compose(&caps, &cups)?.0)
            }
        }
    }

    /// `S_i`, the crossing of strands `i, i+1` among `m`.
    pub fn simple(i: usize, m: usize) -> Result<Self> {
        Self::generator(Generator::Transposition(i, i + 1, m))
    }

    /// `Ē_i = bar(i, i+1, m)`.
    pub fn simple_bar(i: usize, m: usize) -> Result<Self> {
        Self::generator(Generator::Bar(i, i + 1, m))
    }

    fn repeat(d: &Self, k: usize) -> Self {
        (0..k).fold(Self::identity(0), |acc, _| tensor(&acc, d))
    }

    pub fn bottom(&self) -> usize {
        self.m
    }

    pub fn top(&self) -> usize {
        self.s
    }

    /// Partner of a 0-based vertex.
    pub fn partner(&self, v: usize) -> usize {
        self.partner[v] as usize
    }

    /// Canonical 1-based pairs `(a, b)`, `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<[usize; 2]> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p as usize)
            .map(|(i, &p)| [i + 1, p as usize + 1])
            .collect()
    }

    pub fn is_bottom(&self, v: usize) -> bool {
        v < self.m
    }

    /// Number of pairs joining two top vertices.
    pub fn cups(&self) -> usize {
        (self.m..self.m + self.s).filter(|&v| self.partner(v) >= self.m && self.partner(v) > v).count()
    }

    /// Number of pairs joining two bottom vertices.
    pub fn caps(&self) -> usize {
        (0..self.m).filter(|&v| self.partner(v) < self.m && self.partner(v) > v).count()
    }

    pub fn through_strands(&self) -> usize {
        (0..self.m).filter(|&v| self.partner(v) >= self.m).count()
    }

    /// If the diagram is a permutation, the map bottom `i` ↦ top position.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.m != self.s || self.through_strands() != self.m {
            return None;
        }
        Some((0..self.m).map(|i| self.partner(i) - self.m).collect())
    }

    /// True when the vertical strands do not cross each other.
    pub fn through_strands_ordered(&self) -> bool {
        let tops: Vec<usize> = (0..self.m).filter(|&v| self.partner(v) >= self.m).map(|v| self.partner(v)).collect();
        tops.windows(2).all(|w| w[0] < w[1])
    }

    /// Splits `self` as `cups ∘ perm ∘ caps`.
    ///
    /// `caps` has only caps and ordered vertical strands, `perm` is a
    /// permutation of the `t` through strands, and `cups` has only cups and
    /// ordered vertical strands. Recomposing closes no loops.
    pub fn triangular_factors(&self) -> (BrauerDiagram, BrauerDiagram, BrauerDiagram) {
        let (m, s) = (self.m, self.s);
        let through_bottom: Vec<usize> = (0..m).filter(|&v| self.partner(v) >= m).collect();
        let t = through_bottom.len();
        let mut through_top: Vec<usize> = through_bottom.iter().map(|&v| self.partner(v)).collect();
        through_top.sort_unstable();

        // caps: m -> t
        let mut lower = vec![0u16; m + t];
        for v in 0..m {
            let p = self.partner(v);
            if p < m {
                lower[v] = p as u16;
            }
        }
        for (j, &v) in through_bottom.iter().enumerate() {
            lower[v] = (m + j) as u16;
            lower[m + j] = v as u16;
        }
        // perm on t strands: j-th through strand goes to its rank among tops
        let perm: Vec<usize> = through_bottom
            .iter()
            .map(|&v| through_top.binary_search(&self.partner(v)).unwrap())
            .collect();
        // cups: t -> s
        let mut upper = vec![0u16; t + s];
        for v in m..m + s {
            let p = self.partner(v);
            if p >= m {
                upper[t + v - m] = (t + p - m) as u16;
            }
        }
        for (j, &v) in through_top.iter().enumerate() {
            upper[j] = (t + v - m) as u16;
            upper[t + v - m] = j as u16;
        }
        (
            BrauerDiagram::from_partner(t, s, upper),
            BrauerDiagram::from_permutation(&perm),
            BrauerDiagram::from_partner(m, t, lower),
        )
    }
}

fn check_pair(k: usize, l: usize, m: usize) -> Result<()> {
    if k == 0 || k >= l || l > m {
        return Err(Error::OutOfRange(format!("need 1 <= k < l <= m, got k={k}, l={l}, m={m}")));
    }
    Ok(())
}

/// Stacks `g` on top of `f` (`f: a → b`, `g: b → c`), returning `g ∘ f` and
/// the number of closed loops that were erased.
pub fn compose(f: &BrauerDiagram, g: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
    if f.s != g.m {
        return Err(Error::ArityMismatch(format!("cannot stack a {}-input diagram on a {}-output one", g.m, f.s)));
    }
    let (a, b, c) = (f.m, f.s, g.s);
    // Outer vertices: 0..a are f's bottom, a..a+c are g's top.
    let mut partner = vec![u16::MAX; a + c];
    let mut seen = vec![false; b];

    // Walk from an outer endpoint until the next outer endpoint.
    let walk = |start_in_f: bool, v: usize, seen: &mut Vec<bool>| -> usize {
        let mut in_f = start_in_f;
        let mut cur = v;
        loop {
            if in_f {
                let p = f.partner(cur);
                if p < a {
                    return p;
                }
                let mid = p - a;
                seen[mid] = true;
                in_f = false;
                cur = mid;
            } else {
                let p = g.partner(cur);
                if p >= b {
                    return a + (p - b);
                }
                seen[p] = true;
                in_f = true;
                cur = a + p;
            }
        }
    };

    for v in 0..a {
        if partner[v] == u16::MAX {
            let e = walk(true, v, &mut seen);
            partner[v] = e as u16;
            partner[e] = v as u16;
        }
    }
    for t in 0..c {
        let v = a + t;
        if partner[v] == u16::MAX {
            let e = walk(false, b + t, &mut seen);
            partner[v] = e as u16;
            partner[e] = v as u16;
        }
    }

    // Whatever shared points remain unvisited lie on closed loops.
    let mut loops = 0;
    for start in 0..b {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut cur = start;
        loop {
            seen[cur] = true;
            // up through g from shared point `cur`, back down through f
            let up = g.partner(cur);
            debug_assert!(up < b);
            seen[up] = true;
            let down = f.partner(a + up) - a;
            if down == start {
                break;
            }
            cur = down;
        }
    }
    Ok((BrauerDiagram::from_partner(a, c, partner), loops))
}

/// Horizontal juxtaposition with `g` placed to the right of `f`.
pub fn tensor(f: &BrauerDiagram, g: &BrauerDiagram) -> BrauerDiagram {
    let (m, s) = (f.m + g.m, f.s + g.s);
    let map_f = |v: usize| if v < f.m { v } else { m + (v - f.m) };
    let map_g = |v: usize| if v < g.m { f.m + v } else { m + f.s + (v - g.m) };
    let mut partner = vec![0u16; m + s];
    for v in 0..f.m + f.s {
        partner[map_f(v)] = map_f(f.partner(v)) as u16;
    }
    for v in 0..g.m + g.s {
        partner[map_g(v)] = map_g(g.partner(v)) as u16;
    }
    BrauerDiagram::from_partner(m, s, partner)
}

/// Reflects a diagram top-to-bottom (the anti-involution).
pub fn flip(f: &BrauerDiagram) -> BrauerDiagram {
    let (m, s) = (f.m, f.s);
    // old bottom i -> new top i (index s+i); old top m+t -> new bottom t
    let map = |v: usize| if v < m { s + v } else { v - m };
    let mut partner = vec![0u16; m + s];
    for v in 0..m + s {
        partner[map(v)] = map(f.partner(v)) as u16;
    }
    BrauerDiagram::from_partner(s, m, partner)
}

/// `(n-1)!!` for even `n`, 0 for odd `n`.
pub fn matching_count(n: usize) -> u128 {
    if n % 2 == 1 {
        return 0;
    }
    (1..n).step_by(2).map(|x| x as u128).product()
}

/// All `(m, s)`-diagrams in canonical order.
pub fn enumerate(m: usize, s: usize) -> Vec<BrauerDiagram> {
    let n = m + s;
    if n % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(matching_count(n) as usize);
    let mut partner = vec![u16::MAX; n];
    fn rec(partner: &mut Vec<u16>, m: usize, s: usize, out: &mut Vec<BrauerDiagram>) {
        let Some(first) = partner.iter().position(|&p| p == u16::MAX) else {
            out.push(BrauerDiagram { m, s, partner: partner.clone() });
            return;
        };
        for other in first + 1..partner.len() {
            if partner[other] == u16::MAX {
                partner[first] = other as u16;
                partner[other] = first as u16;
                rec(partner, m, s, out);
                partner[first] = u16::MAX;
                partner[other] = u16::MAX;
            }
        }
    }
    rec(&mut partner, m, s, &mut out);
    out.sort();
    out
}
