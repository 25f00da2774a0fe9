//! Dense exact matrices and certified multi-modular kernels.
//!
//! Small matrices (a few dozen rows) are handled directly over `BigRational`.
//! Large integer matrices go through word-size primes: each prime gives a
//! reduced row echelon form, the free-column entries are combined by CRT and
//! lifted by rational reconstruction, and the lifted kernel is certified with
//! a size bound so that vanishing modulo the primes forces vanishing over ℤ.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Q;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMat = Matrix<Q>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T> + Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j);
                    let v = cur + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x * c)
    }
}

impl<T> Neg for &Matrix<T>
where
    T: Clone,
    for<'a> &'a T: Neg<Output = T>,
{
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl QMat {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a.get(r, c).recip();
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    if a.get(r, j).is_zero() {
                        continue;
                    }
                    let v = a.get(i, j) - &(&f * a.get(r, j));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Q::one()
            } else {
                Q::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Columns of `self` forming a basis of its column space (greedy, leftmost).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).fold(Q::zero(), |a, b| a + b)
    }

    pub fn pow(&self, e: usize) -> QMat {
        let mut out = QMat::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

/// Stacks column vectors into a matrix.
pub fn columns_to_matrix(n: usize, cols: &[Vec<Q>]) -> QMat {
    Matrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
}

// ---------------------------------------------------------------------------
// Word-size modular arithmetic

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u128(r, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest primes below 2^31, in decreasing order.
pub fn word_primes(count: usize) -> Vec<u64> {
    word_primes_from(0, count)
}

/// `count` primes below 2^31 after skipping the first `skip`.
pub fn word_primes_from(skip: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut seen = 0;
    let mut n = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime(n) {
            if seen >= skip {
                out.push(n);
            }
            seen += 1;
        }
        n -= 2;
    }
    out
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Residue of a rational modulo `p`, or `None` if `p` divides the denominator.
pub fn q_mod(x: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb).to_u64().unwrap();
    let d = x.denom().mod_floor(&pb).to_u64().unwrap();
    inv_mod(d, p).map(|di| n * di % p)
}

pub fn int_mod(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

/// Dense matrix over `ℤ/p` with `p < 2^31`.
#[derive(Clone, Debug)]
pub struct ModMat {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    pub data: Vec<u64>,
}

impl ModMat {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        debug_assert!(p < (1 << 31));
        ModMat { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p).unwrap();
            for j in c..cols {
                let x = &mut self.data[r * cols + j];
                *x = *x * inv % p;
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let prow = &prow[c..];
            let reduce = |row: &mut [u64]| {
                let f = row[c];
                if f != 0 {
                    let nf = p - f;
                    for (x, &y) in row[c..].iter_mut().zip(prow) {
                        if y != 0 {
                            *x = (*x + nf * y) % p;
                        }
                    }
                }
            };
            if rows >= 128 {
                before.par_chunks_mut(cols).for_each(reduce);
                after.par_chunks_mut(cols).for_each(reduce);
            } else {
                before.chunks_mut(cols).for_each(reduce);
                after.chunks_mut(cols).for_each(reduce);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Incremental row echelon basis over `ℤ/p`, for spans built one vector at a time.
#[derive(Clone, Debug)]
pub struct ModSpan {
    pub p: u64,
    pub dim: usize,
    // (pivot column, normalized row) kept sorted by pivot
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModSpan {
    pub fn new(dim: usize, p: u64) -> Self {
        ModSpan { p, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis; returns the reduced vector.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for (c, row) in &self.rows {
            let f = v[*c];
            if f != 0 {
                let nf = p - f;
                for (x, &y) in v.iter_mut().zip(row).skip(*c) {
                    if y != 0 {
                        *x = (*x + nf * y) % p;
                    }
                }
            }
        }
        v
    }

    /// Inserts `v` if it is independent; returns whether it was.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[c], self.p).unwrap();
        for x in v.iter_mut() {
            *x = *x * inv % self.p;
        }
        let pos = self.rows.partition_point(|(pc, _)| *pc < c);
        self.rows.insert(pos, (c, v));
        true
    }
}

/// Exact counterpart of [`ModSpan`] for small subspaces of `ℚⁿ`.
#[derive(Clone, Debug)]
pub struct QSpan {
    pub dim: usize,
    rows: Vec<(usize, Vec<Q>)>,
    // inserted vectors, unreduced
    basis: Vec<Vec<Q>>,
}

impl QSpan {
    pub fn new(dim: usize) -> Self {
        QSpan { dim, rows: Vec::new(), basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The independent vectors in insertion order.
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        for (c, row) in &self.rows {
            if !v[*c].is_zero() {
                let f = v[*c].clone();
                for (x, y) in v.iter_mut().zip(row).skip(*c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    pub fn insert(&mut self, v: Vec<Q>) -> bool {
        let mut r = self.reduce(v.clone());
        let Some(c) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[c].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        let pos = self.rows.partition_point(|(pc, _)| *pc < c);
        self.rows.insert(pos, (c, r));
        self.basis.push(v);
        true
    }
}

/// Coordinates of vectors in a full-column-rank basis, via an invertible row selection.
pub struct Coordinates {
    rows: Vec<usize>,
    inv: QMat,
}

impl Coordinates {
    pub fn new(basis: &[Vec<Q>]) -> Option<Self> {
        let n = basis.first().map_or(0, Vec::len);
        let c = columns_to_matrix(n, basis);
        let rows = c.transpose().independent_columns();
        if rows.len() != basis.len() {
            return None;
        }
        let inv = c.submatrix(&rows, &(0..basis.len()).collect::<Vec<_>>()).inverse()?;
        Some(Coordinates { rows, inv })
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn of(&self, v: &[Q]) -> Vec<Q> {
        let sel: Vec<Q> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.mul_vec(&sel)
    }
}

// ---------------------------------------------------------------------------
// CRT and rational reconstruction

/// Rational `r/s` with `r ≡ s·a (mod m)`, `|r|, s ≤ sqrt(m/2)`, `gcd(s, m) = 1`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !t1.gcd(m).is_one() {
        return None;
    }
    Some(Q::new(r1, t1))
}

/// Incremental CRT combination of residue vectors.
struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    fn new(len: usize) -> Self {
        Crt { modulus: BigInt::one(), values: vec![BigInt::zero(); len] }
    }

    fn absorb(&mut self, p: u64, residues: &[u64]) {
        let pb = BigInt::from(p);
        let m_mod_p = self.modulus.mod_floor(&pb).to_u64().unwrap();
        let inv = inv_mod(m_mod_p, p).expect("primes must be distinct");
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = v.mod_floor(&pb).to_u64().unwrap();
            let diff = (r + p - cur) % p;
            let t = diff * inv % p;
            *v += &self.modulus * BigInt::from(t);
        }
        self.modulus *= pb;
    }
}

/// Integer matrix with entries fitting in `i128`, used for large exact kernels.
pub type ZMat = Matrix<i128>;

struct PrimeResult {
    p: u64,
    pivots: Vec<usize>,
    // rank × nullity block of the RREF restricted to free columns, row-major
    block: Vec<u64>,
}

fn reduce_mod(a: &ZMat, p: u64) -> ModMat {
    let mut m = ModMat::zeros(a.rows(), a.cols(), p);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, int_mod(*a.get(i, j), p));
        }
    }
    m
}

fn rref_for_prime(a: &ZMat, p: u64) -> PrimeResult {
    let mut m = reduce_mod(a, p);
    let pivots = m.rref();
    let free: Vec<usize> = (0..a.cols()).filter(|c| pivots.binary_search(c).is_err()).collect();
    let mut block = Vec::with_capacity(pivots.len() * free.len());
    for i in 0..pivots.len() {
        for &f in &free {
            block.push(m.get(i, f));
        }
    }
    PrimeResult { p, pivots, block }
}

/// Outcome of a certified kernel computation.
#[derive(Clone, Debug)]
pub struct CertifiedKernel {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// One vector per free column, in RREF normal form (1 at its free column).
    pub basis: Vec<Vec<Q>>,
    pub primes_used: usize,
}

/// Exact right kernel of an integer matrix.
///
/// The result is certified: the rank found modulo the primes is a lower bound
/// for the rank over ℚ, and every returned vector is proven to lie in the
/// kernel over ℤ by the bound `|A v| < (product of primes) / 2`.
pub fn certified_kernel(a: &ZMat, max_primes: usize) -> Result<CertifiedKernel> {
    let n = a.cols();
    let row_bound_bits: u64 = (0..a.rows())
        .map(|i| {
            let s: BigInt = a.row(i).iter().map(|x| BigInt::from(x.unsigned_abs())).sum();
            s.bits()
        })
        .max()
        .unwrap_or(0);

    let mut results: Vec<PrimeResult> = Vec::new();
    let mut batch = 2usize;
    loop {
        let start = results.len();
        if start >= max_primes {
            return Err(Error::ResourceBound(format!("kernel did not certify within {max_primes} primes")));
        }
        let primes = word_primes_from(start, batch.min(max_primes - start));
        let mut fresh: Vec<PrimeResult> = primes.par_iter().map(|&p| rref_for_prime(a, p)).collect();
        results.append(&mut fresh);

        // Best pivot pattern: maximal rank, then lexicographically smallest.
        let best = results
            .iter()
            .map(|r| &r.pivots)
            .max_by(|x, y| x.len().cmp(&y.len()).then_with(|| y.cmp(x)))
            .unwrap()
            .clone();
        let good: Vec<&PrimeResult> = results.iter().filter(|r| r.pivots == best).collect();
        let free: Vec<usize> = (0..n).filter(|c| best.binary_search(c).is_err()).collect();
        let rank = best.len();
        if free.is_empty() {
            return Ok(CertifiedKernel { rank, pivots: best, basis: Vec::new(), primes_used: results.len() });
        }

        let mut crt = Crt::new(rank * free.len());
        for r in &good {
            crt.absorb(r.p, &r.block);
        }
        if let Some(basis) = lift_kernel(&crt, &best, &free, n, row_bound_bits) {
            return Ok(CertifiedKernel { rank, pivots: best, basis, primes_used: results.len() });
        }
        batch *= 2;
    }
}

fn lift_kernel(crt: &Crt, pivots: &[usize], free: &[usize], n: usize, row_bound_bits: u64) -> Option<Vec<Vec<Q>>> {
    let nf = free.len();
    let mut basis = Vec::with_capacity(nf);
    for (fi, &f) in free.iter().enumerate() {
        let mut v = vec![Q::zero(); n];
        v[f] = Q::one();
        let mut lcm = BigInt::one();
        for (i, &p) in pivots.iter().enumerate() {
            let x = rational_reconstruct(&crt.values[i * nf + fi], &crt.modulus)?;
            lcm = lcm.lcm(x.denom());
            v[p] = -x;
        }
        // Certificate: |A (lcm·v)|_∞ ≤ rowsum · max|lcm·v_j| must stay below modulus/2.
        let max_bits = v.iter().map(|x| (x.numer() * (&lcm / x.denom())).bits()).max().unwrap_or(0);
        if row_bound_bits + max_bits + 2 >= crt.modulus.bits() {
            return None;
        }
        basis.push(v);
    }
    Some(basis)
}

/// Exact rank of an integer matrix, certified as in [`certified_kernel`].
pub fn certified_rank(a: &ZMat, max_primes: usize) -> Result<usize> {
    certified_kernel(a, max_primes).map(|k| k.rank)
}

/// Sparse helper: accumulate `(index, value)` pairs into a dense vector.
pub fn dense_from_sparse(n: usize, entries: &BTreeMap<usize, Q>) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for (&i, x) in entries {
        v[i] = x.clone();
    }
    v
}
