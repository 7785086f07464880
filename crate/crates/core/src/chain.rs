//! The quotient/remainder chain behind an AIR matrix and the row/column
//! intervals it induces.
//!
//! For `K` messages and one-sided side-information `D`, set `λ₀ = D`,
//! `λ₋₁ = K − D` and run Euclid's algorithm:
//!
//! ```text
//! K − D   = β₀·λ₀ + λ₁
//! λ₀      = β₁·λ₁ + λ₂
//!   ...
//! λ_{l−1} = β_l·λ_l          (λ_{l+1} = 0)
//! ```
//!
//! Out-of-range lookups follow two conventions: `λ(−1) = K − D` and
//! `λ(i) = 0`, `β(i) = 0` for `i > l`. Every interval bound is evaluated
//! through these accessors so the degenerate `l = 0` and `β₀ = 0` shapes need
//! no special cases.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Problem parameters `(K, D)` together with their λ/β chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamChain {
    k: usize,
    d: usize,
    lambda: Vec<usize>,
    beta: Vec<usize>,
}

/// Symmetric capacity in symbols per message, kept as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capacity {
    pub numer: usize,
    pub denom: usize,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl ParamChain {
    /// Builds the chain for `(K, D)`; requires `1 <= D <= K - 1`.
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if d == 0 || d >= k {
            return Err(Error::InvalidParams { k, d });
        }
        let mut lambda = vec![d];
        let mut beta = Vec::new();
        let mut prev = k - d;
        loop {
            let cur = *lambda.last().unwrap();
            beta.push(prev / cur);
            let rem = prev % cur;
            if rem == 0 {
                break;
            }
            lambda.push(rem);
            prev = cur;
        }
        Ok(Self { k, d, lambda, beta })
    }

    /// Number of messages (and receivers).
    pub fn k(&self) -> usize {
        self.k
    }

    /// One-sided side-information size.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Code length `K − D`.
    pub fn n(&self) -> usize {
        self.k - self.d
    }

    /// Chain depth `l`.
    pub fn depth(&self) -> usize {
        self.lambda.len() - 1
    }

    /// `λ₀ … λ_l`.
    pub fn lambdas(&self) -> &[usize] {
        &self.lambda
    }

    /// `β₀ … β_l`.
    pub fn betas(&self) -> &[usize] {
        &self.beta
    }

    /// `λ_i` with `λ₋₁ = K − D` and zero past the end of the chain.
    pub fn lambda(&self, i: isize) -> usize {
        match i {
            -1 => self.n(),
            i if i < -1 => panic!("lambda index {i} below -1"),
            i => self.lambda.get(i as usize).copied().unwrap_or(0),
        }
    }

    /// `β_i`, zero past the end of the chain.
    pub fn beta(&self, i: isize) -> usize {
        assert!(i >= 0, "beta index {i} is negative");
        self.beta.get(i as usize).copied().unwrap_or(0)
    }

    /// `λ_l`, the last nonzero remainder (equal to gcd(K, D)).
    pub fn last_lambda(&self) -> usize {
        *self.lambda.last().unwrap()
    }

    /// Number of even submatrix slots, `⌊l/2⌋ + 1`.
    pub fn even_blocks(&self) -> usize {
        self.depth() / 2 + 1
    }

    /// Number of odd submatrices, `⌈l/2⌉`.
    pub fn odd_blocks(&self) -> usize {
        self.depth().div_ceil(2)
    }

    /// First column of the receivers that decode from a single broadcast
    /// symbol without a partner column: `K − D − λ_l`.
    pub fn tail_start(&self) -> usize {
        self.n() - self.last_lambda()
    }

    pub fn capacity(&self) -> Capacity {
        if self.d == self.k - 1 {
            Capacity { numer: 1, denom: 1 }
        } else {
            Capacity { numer: 1, denom: self.n() }
        }
    }

    /// Column interval `C_i = [K−D−λ_{2i−1}, K−D−λ_{2i+1})`.
    pub fn col_interval(&self, i: usize) -> Range<usize> {
        let n = self.n();
        let i = i as isize;
        (n - self.lambda(2 * i - 1))..(n - self.lambda(2 * i + 1))
    }

    /// The `D_i` half of `C_i`: its first `(β_{2i} − 1)·λ_{2i}` columns.
    pub fn d_interval(&self, i: usize) -> Range<usize> {
        let c = self.col_interval(i);
        let ii = i as isize;
        let width = self.beta(2 * ii).saturating_sub(1) * self.lambda(2 * ii);
        c.start..(c.start + width).min(c.end)
    }

    /// The `E_i` half of `C_i`.
    pub fn e_interval(&self, i: usize) -> Range<usize> {
        let c = self.col_interval(i);
        self.d_interval(i).end..c.end
    }

    /// Row interval `R_i`.
    pub fn row_interval(&self, i: usize) -> Range<usize> {
        let k = self.k;
        if i == 0 {
            0..(k - self.lambda(0))
        } else {
            let i = i as isize;
            (k - self.lambda(2 * (i - 1)))..(k - self.lambda(2 * i))
        }
    }

    /// All intervals at once.
    pub fn intervals(&self) -> IntervalMap {
        let cols: Vec<_> = (0..self.odd_blocks() + 1).map(|i| self.col_interval(i)).collect();
        IntervalMap {
            rows: (0..self.even_blocks() + 1).map(|i| self.row_interval(i)).collect(),
            col_d: (0..cols.len()).map(|i| self.d_interval(i)).collect(),
            col_e: (0..cols.len()).map(|i| self.e_interval(i)).collect(),
            cols,
        }
    }

    /// Index `i` of the column interval `C_i` containing column `col`.
    pub fn col_interval_of(&self, col: usize) -> Result<usize> {
        if col >= self.n() {
            return Err(Error::OutOfRange { index: col, limit: self.n() });
        }
        Ok((0..=self.odd_blocks())
            .find(|&i| self.col_interval(i).contains(&col))
            .expect("column intervals partition [0, K-D)"))
    }

    /// Which half (`D_i` or `E_i`) of which `C_i` holds column `col`.
    pub fn locate_column(&self, col: usize) -> Result<(usize, ColumnPart)> {
        let i = self.col_interval_of(col)?;
        let part = if self.d_interval(i).contains(&col) { ColumnPart::D } else { ColumnPart::E };
        Ok((i, part))
    }
}

impl fmt::Display for ParamChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "K = {}", self.k)?;
        writeln!(f, "D = {}", self.d)?;
        writeln!(f, "N = {}", self.n())?;
        writeln!(f, "l = {}", self.depth())?;
        writeln!(f, "lambda = {}", join(&self.lambda))?;
        writeln!(f, "beta = {}", join(&self.beta))?;
        write!(f, "capacity = {}", self.capacity())
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Half of a column interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColumnPart {
    D,
    E,
}

/// Row intervals `R_i`, column intervals `C_i` and the split `C_i = D_i ∪ E_i`.
/// Ranges are half-open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalMap {
    pub rows: Vec<Range<usize>>,
    pub cols: Vec<Range<usize>>,
    pub col_d: Vec<Range<usize>>,
    pub col_e: Vec<Range<usize>>,
}

/// Formats a half-open range in the closed `[a:b]` style (`{a}` for
/// singletons, `∅` when empty).
pub fn fmt_closed(r: &Range<usize>) -> String {
    match r.len() {
        0 => "∅".to_string(),
        1 => format!("{{{}}}", r.start),
        _ => format!("[{}:{}]", r.start, r.end - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(k: usize, d: usize) -> ParamChain {
        ParamChain::new(k, d).unwrap()
    }

    #[test]
    fn worked_chains() {
        let c = chain(10, 3);
        assert_eq!((c.lambdas(), c.betas(), c.depth()), (&[3, 1][..], &[2, 3][..], 1));
        let c = chain(17, 7);
        assert_eq!((c.lambdas(), c.betas(), c.depth()), (&[7, 3, 1][..], &[1, 2, 3][..], 2));
        let c = chain(44, 17);
        assert_eq!(c.lambdas(), &[17, 10, 7, 3, 1]);
        assert_eq!(c.betas(), &[1, 1, 1, 2, 3]);
        assert_eq!(c.depth(), 4);
        let c = chain(9, 3);
        assert_eq!((c.lambdas(), c.betas(), c.depth()), (&[3][..], &[2][..], 0));
    }

    #[test]
    fn rejects_out_of_range_d() {
        assert_eq!(ParamChain::new(5, 0), Err(Error::InvalidParams { k: 5, d: 0 }));
        assert_eq!(ParamChain::new(5, 5), Err(Error::InvalidParams { k: 5, d: 5 }));
        assert!(ParamChain::new(1, 1).is_err());
    }

    #[test]
    fn full_side_information() {
        let c = chain(7, 6);
        assert_eq!(c.lambdas(), &[6, 1]);
        assert_eq!(c.betas(), &[0, 6]);
        assert_eq!(c.capacity(), Capacity { numer: 1, denom: 1 });
        let c = chain(2, 1);
        assert_eq!((c.lambdas(), c.betas()), (&[1][..], &[1][..]));
        assert_eq!(chain(10, 3).capacity().to_string(), "1/7");
    }

    #[test]
    fn column_intervals_of_examples() {
        let c = chain(10, 3);
        assert_eq!(c.col_interval(0), 0..6);
        assert_eq!(c.col_interval(1), 6..7);
        let c = chain(17, 7);
        assert_eq!(c.col_interval(0), 0..7);
        assert_eq!(c.col_interval(1), 7..10);
        let c = chain(9, 3);
        assert_eq!(c.d_interval(0), 0..3);
        assert_eq!(c.e_interval(0), 3..6);
        // β₀ = 0 leaves C₀ empty
        let c = chain(13, 10);
        assert!(c.col_interval(0).is_empty());
        assert!(c.d_interval(0).is_empty() && c.e_interval(0).is_empty());
    }

    #[test]
    fn locate_column_cases() {
        let c = chain(13, 3);
        assert_eq!(c.d_interval(0), 0..6);
        assert_eq!(c.e_interval(0), 6..9);
        assert_eq!(c.locate_column(6).unwrap(), (0, ColumnPart::E));
        assert_eq!(c.locate_column(9).unwrap(), (1, ColumnPart::E));
        assert_eq!(c.locate_column(0).unwrap(), (0, ColumnPart::D));
        assert_eq!(c.locate_column(10), Err(Error::OutOfRange { index: 10, limit: 10 }));
    }

    #[test]
    fn closed_range_formatting() {
        assert_eq!(fmt_closed(&(0..6)), "[0:5]");
        assert_eq!(fmt_closed(&(6..7)), "{6}");
        assert_eq!(fmt_closed(&(3..3)), "∅");
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    /// Evaluates the continued fraction [β₀; β₁, …, β_l] as a reduced ratio.
    fn continued_fraction_value(betas: &[usize]) -> (usize, usize) {
        let (mut num, mut den) = (*betas.last().unwrap(), 1usize);
        for &b in betas.iter().rev().skip(1) {
            // b + 1/(num/den) = (b·num + den)/num
            let next = b * num + den;
            den = num;
            num = next;
        }
        let g = gcd(num, den);
        (num / g, den / g)
    }

    fn is_partition(parts: &[Range<usize>], whole: Range<usize>) -> bool {
        let mut cursor = whole.start;
        for p in parts {
            if p.start != cursor || p.end < p.start {
                return false;
            }
            cursor = p.end;
        }
        cursor == whole.end
    }

    #[test]
    fn chain_invariants_up_to_256() {
        for k in 2..=256 {
            for d in 1..k {
                let c = chain(k, d);
                let l = c.depth() as isize;
                assert_eq!(c.lambda(0), d);
                assert_eq!(k - d, c.beta(0) * c.lambda(0) + c.lambda(1));
                assert!(c.lambda(1) < c.lambda(0));
                for i in 1..=l {
                    assert_eq!(c.lambda(i - 1), c.beta(i) * c.lambda(i) + c.lambda(i + 1));
                    assert!(c.lambda(i) > 0 && c.lambda(i) < c.lambda(i - 1));
                    assert!(c.beta(i) >= 1);
                }
                assert_eq!(c.lambda(l + 1), 0);
                assert_eq!(c.last_lambda(), gcd(k - d, d));

                // independent continued-fraction route
                let g = gcd(k - d, d);
                assert_eq!(continued_fraction_value(c.betas()), ((k - d) / g, d / g), "K={k} D={d}");

                let map = c.intervals();
                assert!(is_partition(&map.rows, 0..k), "rows K={k} D={d}");
                assert!(is_partition(&map.cols, 0..k - d), "cols K={k} D={d}");
                for i in 0..map.cols.len() {
                    assert!(is_partition(&[map.col_d[i].clone(), map.col_e[i].clone()], map.cols[i].clone()));
                }
                if c.beta(0) == 0 {
                    assert!(map.cols[0].is_empty());
                }
            }
        }
    }
}
