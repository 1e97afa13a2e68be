//! Exact linear algebra over the prime field F_p and over the integers.
//!
//! Everything downstream (group homology, coinvariants, rank bookkeeping)
//! reduces to two primitives: rank/nullspace of matrices with entries in
//! F_p, and Smith normal form of integer matrices. No floating point is
//! used anywhere; integer work is done with arbitrary precision so the
//! reduction never overflows.
//!
//! Ranks of matrices with entries in the prime subfield are unchanged
//! under extension of the base field, so computing over F_p alone is
//! enough for every dimension count in this crate even though the curves
//! in question live over an algebraically closed field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("entry {value} is not a residue modulo {modulus}")]
    EntryOutOfRange { value: u64, modulus: u64 },
    #[error("expected {rows}x{cols} = {} entries, got {got}", rows * cols)]
    ShapeMismatch { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: left is {lr}x{lc}, right is {rr}x{rc}")]
    DimensionMismatch { lr: usize, lc: usize, rr: usize, rc: usize },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

/// Trial division; all moduli in this crate are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    // entries are < p <= 2^31, so the product fits in u64
    (a * b) % p
}

/// Multiplicative inverse modulo a prime, by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Dense row-major matrix with entries in F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    entries: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn new(rows: usize, cols: usize, p: u64, entries: Vec<u64>) -> Result<Self, FpError> {
        if !is_prime(p) {
            return Err(FpError::NotPrime(p));
        }
        if entries.len() != rows * cols {
            return Err(FpError::ShapeMismatch { rows, cols, got: entries.len() });
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= p) {
            return Err(FpError::EntryOutOfRange { value: bad, modulus: p });
        }
        Ok(Self { rows, cols, p, entries })
    }

    /// Build from signed values, reducing each into [0, p).
    pub fn from_signed(rows: usize, cols: usize, p: u64, values: &[i64]) -> Result<Self, FpError> {
        if !is_prime(p) {
            return Err(FpError::NotPrime(p));
        }
        if values.len() != rows * cols {
            return Err(FpError::ShapeMismatch { rows, cols, got: values.len() });
        }
        let entries = values.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        Ok(Self { rows, cols, p, entries })
    }

    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        assert!(is_prime(p), "modulus must be prime");
        Self { rows, cols, p, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zero(n, n, p);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(v < self.p);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FpError> {
        if self.p != rhs.p {
            return Err(FpError::ModulusMismatch(self.p, rhs.p));
        }
        if self.cols != rhs.rows {
            return Err(FpError::DimensionMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: rhs.rows,
                rc: rhs.cols,
            });
        }
        let p = self.p;
        let mut out = Self::zero(self.rows, rhs.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = add_mod(out.entries[i * rhs.cols + j], mul_mod(a, rhs.get(k, j), p), p);
                    out.entries[i * rhs.cols + j] = t;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, p), p))
            })
            .collect()
    }

    /// Stack columns of `self` and `rhs` side by side.
    pub fn hstack(&self, rhs: &Self) -> Result<Self, FpError> {
        if self.p != rhs.p {
            return Err(FpError::ModulusMismatch(self.p, rhs.p));
        }
        if self.rows != rhs.rows {
            return Err(FpError::DimensionMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: rhs.rows,
                rc: rhs.cols,
            });
        }
        let cols = self.cols + rhs.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(rhs.row(r));
        }
        Ok(Self { rows: self.rows, cols, p: self.p, entries })
    }

    /// Rank over F_p. Pivots are chosen deterministically: columns are
    /// processed left to right and the pivot is the first nonzero row of
    /// the reduced column.
    pub fn rank(&self) -> usize {
        let mut ech = RowEchelon::new(self.p, self.rows);
        for c in 0..self.cols {
            ech.insert_dense(&self.column(c));
            if ech.is_full() {
                break;
            }
        }
        ech.rank()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if r != pivot_row {
                for c in 0..m.cols {
                    m.entries.swap(r * m.cols + c, pivot_row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(pivot_row, col), p);
            for c in col..m.cols {
                let v = mul_mod(m.get(pivot_row, c), inv, p);
                m.entries[pivot_row * m.cols + c] = v;
            }
            for r2 in 0..m.rows {
                if r2 == pivot_row {
                    continue;
                }
                let f = m.get(r2, col);
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = sub_mod(m.get(r2, c), mul_mod(f, m.get(pivot_row, c), p), p);
                    m.entries[r2 * m.cols + c] = v;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut vec = vec![0u64; self.cols];
            vec[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, free);
                if v != 0 {
                    vec[pc] = sub_mod(0, v, p);
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve `self * X = rhs` column by column; `None` if any column is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>, FpError> {
        let stacked = self.hstack(rhs)?;
        let (r, pivots) = stacked.rref();
        // a pivot inside the rhs block means an inconsistent column
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut out = Self::zero(self.cols, rhs.cols, self.p);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                out.entries[pc * rhs.cols + j] = r.get(i, self.cols + j);
            }
        }
        Ok(Some(out))
    }
}

/// Incremental Gaussian elimination over F_p.
///
/// Columns are inserted one at a time; each is reduced against the pivot
/// columns accepted so far. This lets callers stream the columns of very
/// wide boundary matrices without materializing them, and stop as soon as
/// the rank saturates the row count.
pub struct RowEchelon {
    p: u64,
    rows: usize,
    /// accepted pivot columns, as (pivot row, normalized column)
    pivots: Vec<(usize, Vec<u64>)>,
    scratch: Vec<u64>,
}

impl RowEchelon {
    pub fn new(p: u64, rows: usize) -> Self {
        assert!(is_prime(p));
        Self { p, rows, pivots: Vec::new(), scratch: vec![0; rows] }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.rows
    }

    fn reduce_scratch(&mut self) -> Option<usize> {
        let p = self.p;
        for (prow, pcol) in &self.pivots {
            let c = self.scratch[*prow];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for (s, &v) in self.scratch.iter_mut().zip(pcol.iter()) {
                if v != 0 {
                    *s = (*s + neg * v) % p;
                }
            }
        }
        self.scratch.iter().position(|&v| v != 0)
    }

    fn accept(&mut self, prow: usize) {
        let p = self.p;
        let inv = inv_mod(self.scratch[prow], p);
        let col: Vec<u64> = self.scratch.iter().map(|&v| mul_mod(v, inv, p)).collect();
        self.pivots.push((prow, col));
    }

    /// Insert a column given as (row, value) pairs; returns true if it
    /// contributed a new pivot.
    pub fn insert_sparse(&mut self, entries: &[(usize, u64)]) -> bool {
        if self.is_full() {
            return false;
        }
        self.scratch.fill(0);
        for &(r, v) in entries {
            self.scratch[r] = add_mod(self.scratch[r], v % self.p, self.p);
        }
        match self.reduce_scratch() {
            Some(prow) => {
                self.accept(prow);
                true
            }
            None => false,
        }
    }

    pub fn insert_dense(&mut self, col: &[u64]) -> bool {
        if self.is_full() {
            return false;
        }
        assert_eq!(col.len(), self.rows);
        self.scratch.copy_from_slice(col);
        match self.reduce_scratch() {
            Some(prow) => {
                self.accept(prow);
                true
            }
            None => false,
        }
    }
}

/// Dense row-major matrix with arbitrary-precision integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Smith normal form diagonal plus (optionally) the column transform:
/// the kernel of the original matrix is spanned by the columns of `v`
/// past the rank, and `v_inv` is the exact inverse of `v`.
pub struct SnfDecomposition {
    pub diagonal: Vec<BigInt>,
    pub v: Option<IntegerMatrix>,
    pub v_inv: Option<IntegerMatrix>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, FpError> {
        if entries.len() != rows * cols {
            return Err(FpError::ShapeMismatch { rows, cols, got: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Result<Self, FpError> {
        if values.len() != rows * cols {
            return Err(FpError::ShapeMismatch { rows, cols, got: values.len() });
        }
        Ok(Self { rows, cols, entries: values.iter().map(|&v| BigInt::from(v)).collect() })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FpError> {
        if self.cols != rhs.rows {
            return Err(FpError::DimensionMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: rhs.rows,
                rc: rhs.cols,
            });
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, t);
                }
            }
        }
        Ok(out)
    }

    /// Reduce every entry modulo p.
    pub fn reduce_mod(&self, p: u64) -> Result<PrimeFieldMatrix, FpError> {
        if !is_prime(p) {
            return Err(FpError::NotPrime(p));
        }
        let modulus = BigInt::from(p);
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let r = e.mod_floor(&modulus);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        PrimeFieldMatrix::new(self.rows, self.cols, p, entries)
    }

    /// Invariant factors d_1 | d_2 | ... of the Smith normal form,
    /// non-negative, padded with zeros to min(rows, cols).
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        self.snf(false).diagonal
    }

    /// SNF that also tracks the column transform and its inverse, used to
    /// express other matrices in kernel coordinates.
    pub fn snf_with_transform(&self) -> SnfDecomposition {
        self.snf(true)
    }

    fn snf(&self, track: bool) -> SnfDecomposition {
        let rows = self.rows;
        let cols = self.cols;
        let mut m = self.entries.clone();
        let mut v = track.then(|| Self::identity(cols));
        let mut v_inv = track.then(|| Self::identity(cols));

        let at = |m: &[BigInt], r: usize, c: usize| m[r * cols + c].clone();
        let swap_rows = |m: &mut [BigInt], a: usize, b: usize| {
            if a != b {
                for c in 0..cols {
                    m.swap(a * cols + c, b * cols + c);
                }
            }
        };
        // column op col_b += q * col_a, mirrored into v and v_inv
        let col_addmul = |m: &mut [BigInt],
                          v: &mut Option<IntegerMatrix>,
                          v_inv: &mut Option<IntegerMatrix>,
                          a: usize,
                          b: usize,
                          q: &BigInt| {
            for r in 0..rows {
                let t = &m[r * cols + b] + q * &m[r * cols + a];
                m[r * cols + b] = t;
            }
            if let Some(v) = v {
                for r in 0..cols {
                    let t = v.get(r, b) + q * v.get(r, a);
                    v.set(r, b, t);
                }
            }
            if let Some(vi) = v_inv {
                // inverse acts on the left: row_a -= q * row_b
                for c in 0..cols {
                    let t = vi.get(a, c) - q * vi.get(b, c);
                    vi.set(a, c, t);
                }
            }
        };
        let col_swap = |m: &mut [BigInt],
                        v: &mut Option<IntegerMatrix>,
                        v_inv: &mut Option<IntegerMatrix>,
                        a: usize,
                        b: usize| {
            if a == b {
                return;
            }
            for r in 0..rows {
                m.swap(r * cols + a, r * cols + b);
            }
            if let Some(v) = v {
                for r in 0..cols {
                    let (x, y) = (v.get(r, a).clone(), v.get(r, b).clone());
                    v.set(r, a, y);
                    v.set(r, b, x);
                }
            }
            if let Some(vi) = v_inv {
                for c in 0..cols {
                    let (x, y) = (vi.get(a, c).clone(), vi.get(b, c).clone());
                    vi.set(a, c, y);
                    vi.set(b, c, x);
                }
            }
        };
        let col_negate = |m: &mut [BigInt],
                          v: &mut Option<IntegerMatrix>,
                          v_inv: &mut Option<IntegerMatrix>,
                          a: usize| {
            for r in 0..rows {
                let t = -&m[r * cols + a];
                m[r * cols + a] = t;
            }
            if let Some(v) = v {
                for r in 0..cols {
                    let t = -v.get(r, a);
                    v.set(r, a, t);
                }
            }
            if let Some(vi) = v_inv {
                for c in 0..cols {
                    let t = -vi.get(a, c);
                    vi.set(a, c, t);
                }
            }
        };

        let dim = rows.min(cols);
        let mut t = 0usize;
        while t < dim {
            // deterministic pivot: smallest nonzero absolute value, first
            // such entry in row-major order
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let e = &m[r * cols + c];
                    if e.is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pr, pc)) if at(&m, pr, pc).abs() <= e.abs() => {}
                        _ => pivot = Some((r, c)),
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                break; // remaining block is zero
            };
            swap_rows(&mut m, t, pr);
            col_swap(&mut m, &mut v, &mut v_inv, t, pc);
            if m[t * cols + t].is_negative() {
                col_negate(&mut m, &mut v, &mut v_inv, t);
            }

            let mut dirty = false;
            // clear the pivot column with row operations
            for r in (t + 1)..rows {
                let e = at(&m, r, t);
                if e.is_zero() {
                    continue;
                }
                let q = e.div_floor(&at(&m, t, t));
                if !q.is_zero() {
                    for c in 0..cols {
                        let sub = &q * &m[t * cols + c];
                        let cur = &m[r * cols + c] - sub;
                        m[r * cols + c] = cur;
                    }
                }
                if !m[r * cols + t].is_zero() {
                    dirty = true;
                }
            }
            // clear the pivot row with column operations
            for c in (t + 1)..cols {
                let e = at(&m, t, c);
                if e.is_zero() {
                    continue;
                }
                let q = -e.div_floor(&at(&m, t, t));
                col_addmul(&mut m, &mut v, &mut v_inv, t, c, &q);
                if !m[t * cols + c].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue; // remainders left; re-select a smaller pivot
            }
            // the pivot must divide everything that remains
            let d = at(&m, t, t);
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !at(&m, r, c).mod_floor(&d).is_zero());
            if let Some((r, _)) = offender {
                // fold the offending row into the pivot row and redo
                for c in 0..cols {
                    let cur = &m[t * cols + c] + &m[r * cols + c];
                    m[t * cols + c] = cur;
                }
                continue;
            }
            t += 1;
        }

        let mut diagonal: Vec<BigInt> = (0..dim).map(|i| at(&m, i, i)).collect();
        for d in diagonal.iter_mut() {
            if d.is_negative() {
                *d = -&*d;
            }
        }
        debug_assert!(diagonal
            .windows(2)
            .all(|w| w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero())));
        SnfDecomposition { diagonal, v, v_inv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn fpm(rows: usize, cols: usize, p: u64, v: &[i64]) -> PrimeFieldMatrix {
        PrimeFieldMatrix::from_signed(rows, cols, p, v).unwrap()
    }

    fn im(rows: usize, cols: usize, v: &[i64]) -> IntegerMatrix {
        IntegerMatrix::from_i64(rows, cols, v).unwrap()
    }

    /// gcd of all k x k minors; 0 if every minor vanishes.
    fn determinantal_divisor(m: &IntegerMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n - first - 1, k - 1) {
                    for r in rest.iter_mut() {
                        *r += first + 1;
                    }
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        fn det(m: &IntegerMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = BigInt::zero();
            for (i, &r) in rows.iter().enumerate() {
                let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
                let minor = det(m, &sub_rows, &cols[1..]);
                let term = m.get(r, cols[0]) * minor;
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut g = BigInt::zero();
        for rows in combos(m.rows(), k) {
            for cols in combos(m.cols(), k) {
                g = g.gcd(&det(m, &rows, &cols));
            }
        }
        g
    }

    /// Independent SNF oracle: invariant factor i_k = D_k / D_{k-1} where
    /// D_k is the gcd of all k x k minors.
    fn snf_oracle(m: &IntegerMatrix) -> Vec<BigInt> {
        let dim = m.rows().min(m.cols());
        let mut prev = BigInt::one();
        let mut out = Vec::with_capacity(dim);
        for k in 1..=dim {
            let dk = determinantal_divisor(m, k);
            if dk.is_zero() {
                for _ in k..=dim {
                    out.push(BigInt::zero());
                }
                break;
            }
            out.push(&dk / &prev);
            prev = dk;
        }
        out
    }

    struct XorShift(u64);
    impl XorShift {
        fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }
        fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
            lo + (self.next() % (hi - lo + 1) as u64) as i64
        }
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(fpm(2, 2, 3, &[0, 0, 0, 0]).rank(), 0);
    }

    #[test]
    fn rank_repeated_row() {
        assert_eq!(fpm(2, 2, 2, &[1, 1, 1, 1]).rank(), 1);
    }

    #[test]
    fn rank_full_2x2_mod_5() {
        // det = 1*4 - 2*3 = -2 == 3 mod 5, nonzero
        let m = fpm(2, 2, 5, &[1, 2, 3, 4]);
        let det = (m.get(0, 0) * m.get(1, 1) + 5 * 5 - m.get(0, 1) * m.get(1, 0)) % 5;
        assert_eq!(det, 3);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_matches_rref_pivot_count() {
        let mut rng = XorShift(0x5eed);
        for _ in 0..100 {
            let rows = rng.int_in(1, 5) as usize;
            let cols = rng.int_in(1, 5) as usize;
            let p = [2u64, 3, 5][rng.int_in(0, 2) as usize];
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-4, 4)).collect();
            let m = fpm(rows, cols, p, &vals);
            let (_, pivots) = m.rref();
            assert_eq!(m.rank(), pivots.len());
        }
    }

    #[test]
    fn rank_invariant_under_permutation() {
        let mut rng = XorShift(0xabc1);
        for _ in 0..50 {
            let rows = rng.int_in(2, 4) as usize;
            let cols = rng.int_in(2, 4) as usize;
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-3, 3)).collect();
            let m = fpm(rows, cols, 5, &vals);
            // reverse both rows and columns
            let mut perm = Vec::with_capacity(rows * cols);
            for r in (0..rows).rev() {
                for c in (0..cols).rev() {
                    perm.push(m.get(r, c) as i64);
                }
            }
            assert_eq!(m.rank(), fpm(rows, cols, 5, &perm).rank());
        }
    }

    #[test]
    fn nullspace_vectors_are_killed() {
        let mut rng = XorShift(77);
        for _ in 0..60 {
            let rows = rng.int_in(1, 5) as usize;
            let cols = rng.int_in(1, 5) as usize;
            let p = [2u64, 3, 5][rng.int_in(0, 2) as usize];
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-4, 4)).collect();
            let m = fpm(rows, cols, p, &vals);
            let ns = m.nullspace();
            assert_eq!(ns.len(), cols - m.rank());
            for v in &ns {
                assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = fpm(2, 2, 5, &[1, 2, 2, 4]); // rank 1
        let b_ok = fpm(2, 1, 5, &[1, 2]);
        let x = a.solve(&b_ok).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b_ok);
        let b_bad = fpm(2, 1, 5, &[1, 0]);
        assert!(a.solve(&b_bad).unwrap().is_none());
    }

    #[test]
    fn echelon_streaming_matches_dense_rank() {
        let mut rng = XorShift(0xfeed);
        for _ in 0..40 {
            let rows = rng.int_in(1, 6) as usize;
            let cols = rng.int_in(1, 6) as usize;
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-2, 2)).collect();
            let m = fpm(rows, cols, 3, &vals);
            let mut ech = RowEchelon::new(3, rows);
            for c in 0..cols {
                let sparse: Vec<(usize, u64)> = m
                    .column(c)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(r, &v)| (r, v))
                    .collect();
                ech.insert_sparse(&sparse);
            }
            assert_eq!(ech.rank(), m.rank());
        }
    }

    #[test]
    fn invalid_construction() {
        assert_eq!(PrimeFieldMatrix::new(1, 1, 4, vec![0]), Err(FpError::NotPrime(4)));
        assert_eq!(
            PrimeFieldMatrix::new(1, 2, 3, vec![0]),
            Err(FpError::ShapeMismatch { rows: 1, cols: 2, got: 1 })
        );
        assert_eq!(
            PrimeFieldMatrix::new(1, 1, 3, vec![3]),
            Err(FpError::EntryOutOfRange { value: 3, modulus: 3 })
        );
    }

    #[test]
    fn snf_identity() {
        let d = IntegerMatrix::identity(3).smith_normal_form();
        assert_eq!(d, vec![BigInt::one(), BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = im(2, 2, &[2, 0, 0, 3]);
        let d = m.smith_normal_form();
        assert_eq!(d, vec![BigInt::one(), BigInt::from(6)]);
        assert_eq!(d, snf_oracle(&m));
    }

    #[test]
    fn snf_2_4_6_8() {
        let m = im(2, 2, &[2, 4, 6, 8]);
        let d = m.smith_normal_form();
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(d, snf_oracle(&m));
    }

    #[test]
    fn snf_agrees_with_minor_gcd_oracle() {
        let mut rng = XorShift(0x51f5);
        for _ in 0..150 {
            let rows = rng.int_in(1, 3) as usize;
            let cols = rng.int_in(1, 3) as usize;
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-5, 5)).collect();
            let m = im(rows, cols, &vals);
            assert_eq!(m.smith_normal_form(), snf_oracle(&m), "matrix {vals:?}");
        }
    }

    #[test]
    fn snf_divisibility_chain() {
        let mut rng = XorShift(0x0ddba11);
        for _ in 0..80 {
            let rows = rng.int_in(1, 4) as usize;
            let cols = rng.int_in(1, 4) as usize;
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-9, 9)).collect();
            let d = im(rows, cols, &vals).smith_normal_form();
            assert_eq!(d.len(), rows.min(cols));
            for w in d.windows(2) {
                assert!(!w[0].is_negative() && !w[1].is_negative());
                if !w[0].is_zero() {
                    assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
                } else {
                    assert!(w[1].is_zero());
                }
            }
        }
    }

    #[test]
    fn rank_mod_p_counts_snf_factors_coprime_to_p() {
        let mut rng = XorShift(0xc0ffee);
        for _ in 0..80 {
            let rows = rng.int_in(1, 4) as usize;
            let cols = rng.int_in(1, 4) as usize;
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-6, 6)).collect();
            let m = im(rows, cols, &vals);
            let d = m.smith_normal_form();
            for p in [2u64, 3, 5] {
                let expected = d
                    .iter()
                    .filter(|f| !f.is_zero() && !(&**f % BigInt::from(p)).is_zero())
                    .count();
                assert_eq!(m.reduce_mod(p).unwrap().rank(), expected);
            }
        }
    }

    #[test]
    fn snf_transform_tracks_kernel() {
        let mut rng = XorShift(0xbead);
        for _ in 0..40 {
            let rows = rng.int_in(1, 4) as usize;
            let cols = rng.int_in(1, 4) as usize;
            let vals: Vec<i64> = (0..rows * cols).map(|_| rng.int_in(-5, 5)).collect();
            let m = im(rows, cols, &vals);
            let snf = m.snf_with_transform();
            let v = snf.v.unwrap();
            let v_inv = snf.v_inv.unwrap();
            assert_eq!(v.mul(&v_inv).unwrap(), IntegerMatrix::identity(cols));
            assert_eq!(snf.diagonal, m.smith_normal_form());
            // columns of v past the rank span the kernel
            let rank = snf.diagonal.iter().filter(|d| !d.is_zero()).count();
            let mv = m.mul(&v).unwrap();
            for c in rank..cols {
                for r in 0..rows {
                    assert!(mv.get(r, c).is_zero());
                }
            }
        }
    }
}
