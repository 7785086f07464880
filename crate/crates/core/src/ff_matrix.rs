//! Small finite-field kernel: packed GF(2) vectors and dense matrices over
//! GF(2), GF(3) and GF(5) with rank by Gaussian elimination.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Vector with ones at the given positions.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(Error::OutOfRange { index: i, limit: len });
            }
            v.flip(i);
        }
        Ok(v)
    }

    /// Vector whose low `len` bits are taken from `word` (bit `i` is position `i`).
    pub fn from_u64(len: usize, word: u64) -> Self {
        assert!(len <= WORD);
        let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
        Self { len, words: if len == 0 { vec![] } else { vec![word & mask] } }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Ascending positions of the ones.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { expected: self.len, actual: other.len });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Parses a string of `0`/`1` characters; character `i` is position `i`.
    pub fn parse_bits(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    /// Parity of `self AND other`, i.e. their GF(2) inner product. Lengths
    /// are not checked; trailing words of the longer vector are ignored.
    pub fn dot(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Componentwise XOR of equal-length vectors. An empty input yields the
/// empty vector.
pub fn xor_accumulate<'a, I>(vs: I) -> Result<BitVector>
where
    I: IntoIterator<Item = &'a BitVector>,
{
    let mut it = vs.into_iter();
    let Some(first) = it.next() else {
        return Ok(BitVector::zeros(0));
    };
    let mut acc = first.clone();
    for v in it {
        acc.xor_assign(v)?;
    }
    Ok(acc)
}

/// The prime fields the kernel supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeField {
    Gf2,
    Gf3,
    Gf5,
}

impl PrimeField {
    pub const ALL: [PrimeField; 3] = [PrimeField::Gf2, PrimeField::Gf3, PrimeField::Gf5];

    pub fn modulus(self) -> u8 {
        match self {
            PrimeField::Gf2 => 2,
            PrimeField::Gf3 => 3,
            PrimeField::Gf5 => 5,
        }
    }

    pub fn from_modulus(p: u8) -> Result<Self> {
        match p {
            2 => Ok(PrimeField::Gf2),
            3 => Ok(PrimeField::Gf3),
            5 => Ok(PrimeField::Gf5),
            other => Err(Error::UnsupportedField(other)),
        }
    }

    fn inverse(self, a: u8) -> u8 {
        let p = self.modulus();
        debug_assert!(!a.is_multiple_of(p));
        // p is tiny; a brute-force search is fine.
        (1..p).find(|&b| (a as u16 * b as u16) % p as u16 == 1).unwrap()
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    entries: Vec<u8>,
}

impl PrimeFieldMatrix {
    pub fn zeros(rows: usize, cols: usize, field: PrimeField) -> Self {
        Self { rows, cols, field, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major entries, reducing each mod p.
    pub fn from_entries(rows: usize, cols: usize, field: PrimeField, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, actual: entries.len() });
        }
        let p = field.modulus();
        Ok(Self { rows, cols, field, entries: entries.into_iter().map(|e| e % p).collect() })
    }

    /// Lifts 0/1 rows (as bit vectors of equal length) into GF(p).
    pub fn from_bit_rows(rows: &[BitVector], field: PrimeField) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols, field);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, actual: row.len() });
            }
            for c in row.iter_ones() {
                m.set(r, c, 1);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.entries[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Rank over GF(p).
    pub fn rank(&self) -> usize {
        if self.field == PrimeField::Gf2 {
            return self.rank_gf2();
        }
        let p = self.field.modulus() as u16;
        let mut a = self.entries.clone();
        let cols = self.cols;
        let mut rank = 0;
        for col in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for c in 0..cols {
                    a.swap(pivot * cols + c, rank * cols + c);
                }
            }
            let inv = self.field.inverse(a[rank * cols + col]) as u16;
            for c in col..cols {
                a[rank * cols + c] = ((a[rank * cols + c] as u16 * inv) % p) as u8;
            }
            for r in 0..self.rows {
                let factor = a[r * cols + col] as u16;
                if r == rank || factor == 0 {
                    continue;
                }
                for c in col..cols {
                    let sub = (factor * a[rank * cols + c] as u16) % p;
                    a[r * cols + c] = ((a[r * cols + c] as u16 + p - sub) % p) as u8;
                }
            }
            rank += 1;
        }
        rank
    }

    fn rank_gf2(&self) -> usize {
        let mut rows: Vec<BitVector> =
            (0..self.rows).map(|r| BitVector::from_bits(self.row(r).iter().map(|&e| e == 1))).collect();
        gf2_rank(&mut rows)
    }
}

/// Rank of a set of GF(2) row vectors; the rows are reduced in place.
pub fn gf2_rank(rows: &mut [BitVector]) -> usize {
    let cols = rows.first().map_or(0, BitVector::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let (above, pivot) = head.split_at_mut(rank);
        let pivot_row = &pivot[0];
        for row in above.iter_mut().chain(tail.iter_mut()) {
            if row.get(col) {
                // lengths match by construction
                row.xor_assign(pivot_row).unwrap();
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Convenience wrapper over [`PrimeFieldMatrix::rank`].
pub fn rank(m: &PrimeFieldMatrix) -> usize {
    m.rank()
}
