//! Packed linear algebra over GF(2).
//!
//! Vectors and matrices store 64 bits per machine word. Elimination is
//! dense and row-oriented: pivots are taken in column order, and within a
//! column the first eligible row in index order wins, so every result is
//! deterministic for a given input.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Upper bound on the bytes a single dense matrix (plus its elimination
/// copy) may occupy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryBudget {
    bytes: u64,
}

impl MemoryBudget {
    pub const DEFAULT_BYTES: u64 = 2 << 30;
    pub const ENV_VAR: &'static str = "VKF_MEMORY_BUDGET";

    pub fn new(bytes: u64) -> Self {
        MemoryBudget { bytes }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    /// Reads `VKF_MEMORY_BUDGET` (plain bytes, or a `K`/`M`/`G` suffix),
    /// falling back to the 2 GiB default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (digits, shift) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
            Some('K') => (&s[..s.len() - 1], 10),
            Some('M') => (&s[..s.len() - 1], 20),
            Some('G') => (&s[..s.len() - 1], 30),
            _ => (s, 0),
        };
        let n: u64 = digits
            .trim()
            .parse()
            .map_err(|_| Error::usage(format!("invalid memory budget {s:?}")))?;
        n.checked_shl(shift)
            .filter(|v| v >> shift == n)
            .map(Self::new)
            .ok_or_else(|| Error::usage(format!("memory budget {s:?} overflows")))
    }

    /// Fails with a resource error if `needed` bytes do not fit.
    pub fn check(&self, needed: u64, context: impl FnOnce() -> String) -> Result<()> {
        if needed > self.bytes {
            Err(Error::Resource {
                context: context(),
                needed,
                budget: self.bytes,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget::new(Self::DEFAULT_BYTES)
    }
}

/// A fixed-length vector over GF(2). Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Sets each listed position. Repeated indices toggle, so the result is
    /// the mod-2 sum of unit vectors.
    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.toggle(i);
        }
        v
    }

    /// Parses a string of `0`/`1` characters (whitespace ignored).
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(format!("bad bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bools)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        parity(&self.words, &other.words)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

#[inline]
fn parity(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

/// A dense `rows × cols` matrix over GF(2), stored row by row.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    /// Like [`BitMatrix::zeros`] but refuses shapes whose payload exceeds
    /// the budget.
    pub fn zeros_within(rows: usize, cols: usize, budget: &MemoryBudget) -> Result<Self> {
        budget.check(Self::payload_bytes(rows, cols), || {
            format!("allocating a {rows}x{cols} GF(2) matrix")
        })?;
        Ok(Self::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::usage(format!(
                "row {bad} has length {} but the matrix has {cols} columns",
                rows[bad].len()
            )));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| BitVector::parse(r))
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(cols, parsed)
    }

    /// Bytes occupied by the packed payload of a matrix of this shape.
    pub fn payload_bytes(rows: usize, cols: usize) -> u64 {
        rows as u64 * words_for(cols) as u64 * 8
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r].toggle(c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        BitVector::from_bools(self.data.iter().map(|r| r.dot(x)))
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.iter_ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        out
    }

    /// Rank over GF(2). The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        let mut work = Packed::from_matrix(self, None);
        work.eliminate(self.cols).len()
    }

    /// Finds some `x` with `self · x = b`, or `None` when the system is
    /// inconsistent. Which solution is returned is unspecified.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        self.solve_within(b, &MemoryBudget::new(u64::MAX))
    }

    /// [`BitMatrix::solve`] with a cap on the elimination workspace.
    pub fn solve_within(&self, b: &BitVector, budget: &MemoryBudget) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::usage(format!(
                "right-hand side has length {} but the matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        budget.check(Self::payload_bytes(self.rows, self.cols + 1), || {
            format!("eliminating a {}x{} GF(2) system", self.rows, self.cols)
        })?;
        let mut work = Packed::from_matrix(self, Some(b));
        let pivots = work.eliminate(self.cols);
        let rank = pivots.len();
        let rhs_word = self.cols / WORD;
        let rhs_mask = 1u64 << (self.cols % WORD);
        if (rank..work.rows).any(|r| work.row(r)[rhs_word] & rhs_mask != 0) {
            return Ok(None);
        }

        // Back substitution; free variables stay zero.
        let mut x = vec![0u64; work.stride];
        for (r, &col) in pivots.iter().enumerate().rev() {
            let row = work.row(r);
            let start = col / WORD;
            let rhs = row[rhs_word] & rhs_mask != 0;
            let acc = parity(&row[start..], &x[start..]);
            if rhs ^ acc {
                x[col / WORD] |= 1 << (col % WORD);
            }
        }
        x.truncate(words_for(self.cols));
        Ok(Some(BitVector {
            len: self.cols,
            words: x,
        }))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// Contiguous row-major elimination workspace.
struct Packed {
    rows: usize,
    stride: usize,
    buf: Vec<u64>,
}

impl Packed {
    fn from_matrix(m: &BitMatrix, rhs: Option<&BitVector>) -> Self {
        let width = m.cols + usize::from(rhs.is_some());
        let stride = words_for(width).max(1);
        let mut buf = vec![0u64; m.rows * stride];
        for (r, row) in m.data.iter().enumerate() {
            buf[r * stride..r * stride + row.words.len()].copy_from_slice(&row.words);
            if let Some(b) = rhs {
                if b.get(r) {
                    buf[r * stride + m.cols / WORD] |= 1 << (m.cols % WORD);
                }
            }
        }
        Packed {
            rows: m.rows,
            stride,
            buf,
        }
    }

    #[inline]
    fn row(&self, r: usize) -> &[u64] {
        &self.buf[r * self.stride..(r + 1) * self.stride]
    }

    /// Forward elimination to row-echelon form over the first `cols`
    /// columns. Returns the pivot column of each leading row.
    fn eliminate(&mut self, cols: usize) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            if rank == self.rows {
                break;
            }
            let w = col / WORD;
            let mask = 1u64 << (col % WORD);
            let Some(p) = (rank..self.rows).find(|&r| self.buf[r * stride + w] & mask != 0) else {
                continue;
            };
            if p != rank {
                let (head, tail) = self.buf.split_at_mut(p * stride);
                head[rank * stride..(rank + 1) * stride].swap_with_slice(&mut tail[..stride]);
            }
            let (head, tail) = self.buf.split_at_mut((rank + 1) * stride);
            let pivot = &head[rank * stride + w..(rank + 1) * stride];
            for row in tail.chunks_exact_mut(stride) {
                if row[w] & mask != 0 {
                    for (a, b) in row[w..].iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn zero_matrices_have_rank_zero() {
        for (r, c) in [(0, 0), (1, 5), (4, 1), (70, 130)] {
            assert_eq!(BitMatrix::zeros(r, c).rank(), 0);
        }
    }

    #[test]
    fn dependent_third_row() {
        let m = BitMatrix::parse_rows(&["110", "011", "101"]).unwrap();
        let before = m.clone();
        assert_eq!(m.rank(), 2);
        assert_eq!(m, before);
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let b = BitVector::parse("1011001").unwrap();
        let x = BitMatrix::identity(7).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn zero_matrix_nonzero_rhs_is_inconsistent() {
        let b = BitVector::parse("010").unwrap();
        assert_eq!(BitMatrix::zeros(3, 4).solve(&b).unwrap(), None);
    }

    #[test]
    fn underdetermined_system_matches_enumeration() {
        let a = BitMatrix::parse_rows(&["110", "011"]).unwrap();
        let b = BitVector::parse("11").unwrap();
        // Every x in GF(2)^3 with a·x = b, found by enumeration.
        let expected: Vec<BitVector> = (0u8..8)
            .map(|m| BitVector::from_bools((0..3).map(|i| m >> i & 1 == 1)))
            .filter(|x| a.mul_vec(x) == b)
            .collect();
        assert_eq!(expected.len(), 2);
        let x = a.solve(&b).unwrap().unwrap();
        assert!(expected.contains(&x));
    }

    #[test]
    fn dimension_mismatch_is_a_usage_error() {
        let a = BitMatrix::zeros(3, 3);
        let err = a.solve(&BitVector::zeros(2)).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn budget_guard_refuses_large_shapes() {
        let budget = MemoryBudget::new(1024);
        let err = BitMatrix::zeros_within(1000, 1000, &budget).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
        let a = BitMatrix::identity(200);
        let err = a.solve_within(&BitVector::zeros(200), &budget).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(MemoryBudget::parse("2G").unwrap().bytes(), 2 << 30);
        assert_eq!(MemoryBudget::parse("512m").unwrap().bytes(), 512 << 20);
        assert_eq!(MemoryBudget::parse("4096").unwrap().bytes(), 4096);
        assert!(MemoryBudget::parse("lots").is_err());
    }

    #[test]
    fn tail_bits_stay_clear() {
        let mut v = BitVector::zeros(65);
        v.set(64, true);
        v.toggle(64);
        assert!(v.is_zero());
        assert_eq!(v.words().len(), 2);
        let ones = BitVector::from_indices(130, &[0, 63, 64, 129, 129]);
        assert_eq!(ones.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64]);
    }

    #[test]
    fn multiword_solve_roundtrip() {
        // Lower bidiagonal 130x130 system crosses word boundaries.
        let n = 130;
        let mut a = BitMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, true);
            if i > 0 {
                a.set(i, i - 1, true);
            }
        }
        let b = BitVector::from_indices(n, &[3, 64, 65, 129]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert_eq!(a.rank(), n);
    }
}
