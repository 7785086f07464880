//! Construction of the `K × (K−D)` AIR (adjacent independent rows) matrix and
//! queries on its submatrix layout.
//!
//! Below the top `I_{K−D}` block the matrix is tiled by "even" blocks
//! `I_{λ_{2i} × β_{2i}λ_{2i}}` and "odd" blocks `I_{β_{2i+1}λ_{2i+1} × λ_{2i+1}}`:
//!
//! * even block `i` spans rows `[K−λ_{2i}, K)` and columns `C_i`;
//! * odd block `i` spans rows `[K−λ_{2i}, K−λ_{2i+2})` and columns
//!   `[K−D−λ_{2i+1}, K−D)`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::ParamChain;
use crate::error::{Error, Result};
use crate::ff_matrix::BitVector;

/// Which submatrix a cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    Top,
    Even(usize),
    Odd(usize),
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Top => f.write_str("top"),
            Block::Even(i) => write!(f, "even{i}"),
            Block::Odd(i) => write!(f, "odd{i}"),
        }
    }
}

/// A cell's block and its local `(j_R, k_R)` coordinates inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellLocation {
    pub block: Block,
    pub row: usize,
    pub col: usize,
}

/// Row range of a block.
pub fn block_rows(chain: &ParamChain, block: Block) -> Range<usize> {
    let k = chain.k();
    match block {
        Block::Top => 0..chain.n(),
        Block::Even(i) => (k - chain.lambda(2 * i as isize))..k,
        Block::Odd(i) => {
            let i = i as isize;
            (k - chain.lambda(2 * i))..(k - chain.lambda(2 * i + 2))
        }
    }
}

/// Column range of a block.
pub fn block_cols(chain: &ParamChain, block: Block) -> Range<usize> {
    let n = chain.n();
    match block {
        Block::Top => 0..n,
        Block::Even(i) => chain.col_interval(i),
        Block::Odd(i) => (n - chain.lambda(2 * i as isize + 1))..n,
    }
}

/// Every block of the layout, top first, nonempty ones only.
pub fn blocks(chain: &ParamChain) -> Vec<Block> {
    let mut out = vec![Block::Top];
    for i in 0..chain.even_blocks() {
        out.push(Block::Even(i));
        if i < chain.odd_blocks() {
            out.push(Block::Odd(i));
        }
    }
    out.retain(|&b| !block_rows(chain, b).is_empty() && !block_cols(chain, b).is_empty());
    out
}

/// The `(K, D)` AIR matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AirMatrix {
    chain: ParamChain,
    rows: Vec<BitVector>,
    columns: Vec<Vec<usize>>,
}

impl AirMatrix {
    /// Runs the fill algorithm: stack `I_n` blocks down the unfilled
    /// rectangle, then lay transposed stacked identities across what is left,
    /// and repeat on the shrinking remainder.
    pub fn build(chain: &ParamChain) -> Self {
        let k = chain.k();
        let n = chain.n();
        let mut rows = vec![BitVector::zeros(n); k];

        // unfilled rectangle: rows [r0, r0 + m), cols [c0, c0 + w)
        let (mut r0, mut c0) = (0usize, 0usize);
        let (mut m, mut w) = (k, n);
        loop {
            // Step 1: m = q·w + r, stack q copies of I_w.
            let (q, r) = (m / w, m % w);
            for row in 0..q * w {
                rows[r0 + row].set(c0 + row % w, true);
            }
            r0 += q * w;
            if r == 0 {
                break;
            }
            m = r;
            // Step 2: w = q'·r + r', lay I_{r × q'r} across the first q'r columns.
            let (q2, r2) = (w / r, w % r);
            for col in 0..q2 * r {
                rows[r0 + col % r].set(c0 + col, true);
            }
            c0 += q2 * r;
            if r2 == 0 {
                break;
            }
            w = r2;
        }

        Self::from_rows(chain.clone(), rows)
    }

    pub fn from_params(k: usize, d: usize) -> Result<Self> {
        Ok(Self::build(&ParamChain::new(k, d)?))
    }

    fn from_rows(chain: ParamChain, rows: Vec<BitVector>) -> Self {
        let mut columns = vec![Vec::new(); chain.n()];
        for (j, row) in rows.iter().enumerate() {
            for c in row.iter_ones() {
                columns[c].push(j);
            }
        }
        Self { chain, rows, columns }
    }

    pub fn chain(&self) -> &ParamChain {
        &self.chain
    }

    /// Number of rows, `K`.
    pub fn height(&self) -> usize {
        self.chain.k()
    }

    /// Number of columns, `K − D`.
    pub fn width(&self) -> usize {
        self.chain.n()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn row(&self, j: usize) -> &BitVector {
        &self.rows[j]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Ascending rows holding a 1 in column `col`.
    pub fn column_support(&self, col: usize) -> Result<&[usize]> {
        self.columns.get(col).map(Vec::as_slice).ok_or(Error::OutOfRange { index: col, limit: self.width() })
    }

    pub fn column_supports(&self) -> &[Vec<usize>] {
        &self.columns
    }

    /// Block membership and local coordinates of cell `(row, col)`.
    pub fn locate_cell(&self, row: usize, col: usize) -> Result<CellLocation> {
        locate_cell(&self.chain, row, col)
    }

    /// The rows `[start, start + K − D)` as a window.
    pub fn window(&self, start: usize) -> &[BitVector] {
        &self.rows[start..start + self.width()]
    }

    /// Serializes as `"K D"` followed by one `0/1` line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.chain.k(), self.chain.d());
        for row in &self.rows {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for AirMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for AirMatrix {
    type Err = Error;

    /// Parses the text form. The stored rows are taken as given; use
    /// `== AirMatrix::build(..)` to check they are the genuine AIR matrix.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [k, d] = dims[..] else {
            return Err(Error::Parse(format!("header must be \"K D\", got {header:?}")));
        };
        let chain = ParamChain::new(k, d)?;
        let rows: Vec<BitVector> = lines.filter(|l| !l.is_empty()).map(BitVector::parse_bits).collect::<Result<_>>()?;
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} rows, found {}", rows.len())));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != chain.n()) {
            return Err(Error::LengthMismatch { expected: chain.n(), actual: bad.len() });
        }
        Ok(Self::from_rows(chain, rows))
    }
}

/// Block membership and local coordinates of `(row, col)`, from the chain
/// alone. Local coordinates are offsets from the block's top-left corner.
pub fn locate_cell(chain: &ParamChain, row: usize, col: usize) -> Result<CellLocation> {
    if row >= chain.k() {
        return Err(Error::OutOfRange { index: row, limit: chain.k() });
    }
    if col >= chain.n() {
        return Err(Error::OutOfRange { index: col, limit: chain.n() });
    }
    if row < chain.n() {
        return Ok(CellLocation { block: Block::Top, row, col });
    }
    let block = blocks(chain)
        .into_iter()
        .skip(1)
        .find(|&b| block_rows(chain, b).contains(&row) && block_cols(chain, b).contains(&col))
        .expect("blocks tile the lower D rows");
    Ok(CellLocation { block, row: row - block_rows(chain, block).start, col: col - block_cols(chain, block).start })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn air(k: usize, d: usize) -> AirMatrix {
        AirMatrix::from_params(k, d).unwrap()
    }

    #[test]
    fn two_by_one_is_all_ones() {
        assert_eq!(air(2, 1).to_text(), "2 1\n1\n1\n");
    }

    #[test]
    fn ten_by_seven_bottom_rows() {
        let m = air(10, 3);
        assert_eq!(m.row(7).to_string(), "1001001");
        assert_eq!(m.row(8).to_string(), "0100101");
        assert_eq!(m.row(9).to_string(), "0010011");
        assert_eq!(m.column_support(6).unwrap(), &[6, 7, 8, 9]);
    }

    #[test]
    fn column_supports_of_examples() {
        assert_eq!(air(17, 7).column_support(0).unwrap(), &[0, 10]);
        assert_eq!(air(13, 10).column_support(0).unwrap(), &[0, 3, 6, 9, 12]);
        assert!(air(13, 10).column_support(3).is_err());
    }

    #[test]
    fn locate_cell_examples() {
        let m = air(13, 3);
        let at = |j, k| m.locate_cell(j, k).unwrap();
        assert_eq!(at(10, 0), CellLocation { block: Block::Even(0), row: 0, col: 0 });
        assert_eq!(at(10, 9), CellLocation { block: Block::Odd(0), row: 0, col: 0 });
        assert_eq!(at(12, 8), CellLocation { block: Block::Even(0), row: 2, col: 8 });
        let m = air(10, 3);
        assert_eq!(m.locate_cell(3, 3).unwrap(), CellLocation { block: Block::Top, row: 3, col: 3 });
        assert!(m.locate_cell(10, 0).is_err());
        assert!(m.locate_cell(0, 7).is_err());
    }

    #[test]
    fn locate_cell_with_empty_first_even_block() {
        // (13, 10): β₀ = 0, so the lower rows are odd block 0 then even block 1
        let m = air(13, 10);
        assert_eq!(blocks(m.chain()), vec![Block::Top, Block::Odd(0), Block::Even(1)]);
        assert_eq!(m.locate_cell(9, 0).unwrap(), CellLocation { block: Block::Odd(0), row: 6, col: 0 });
        assert_eq!(m.locate_cell(12, 2).unwrap(), CellLocation { block: Block::Even(1), row: 0, col: 2 });
    }

    #[test]
    fn block_shapes_match_layout() {
        for k in 2..=40 {
            for d in 1..k {
                let m = air(k, d);
                let c = m.chain();
                for b in blocks(c) {
                    let (rows, cols) = (block_rows(c, b), block_cols(c, b));
                    let (h, w) = (rows.len(), cols.len());
                    // every block is a stacked identity: cell (r, c) is 1 iff
                    // r ≡ c modulo the short side
                    let short = h.min(w);
                    assert!(h % short == 0 && w % short == 0, "K={k} D={d} {b}");
                    for r in 0..h {
                        for col in 0..w {
                            assert_eq!(
                                m.get(rows.start + r, cols.start + col),
                                r % short == col % short,
                                "K={k} D={d} {b} ({r},{col})"
                            );
                        }
                    }
                    match b {
                        Block::Even(i) => {
                            assert_eq!(h, c.lambda(2 * i as isize));
                            assert_eq!(w, c.beta(2 * i as isize) * h);
                        }
                        Block::Odd(i) => {
                            assert_eq!(w, c.lambda(2 * i as isize + 1));
                            assert_eq!(h, c.beta(2 * i as isize + 1) * w);
                        }
                        Block::Top => assert_eq!(h, w),
                    }
                }
                // blocks cover every cell exactly once
                let covered: usize = blocks(c).iter().map(|&b| block_rows(c, b).len() * block_cols(c, b).len()).sum();
                assert_eq!(covered, k * (k - d));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for (k, d) in [(2, 1), (10, 3), (44, 17), (13, 10)] {
            let m = air(k, d);
            let text = m.to_text();
            let back: AirMatrix = text.parse().unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_text(), text);
        }
        assert!("3 1\n10\n01\n".parse::<AirMatrix>().is_err());
        assert!("3 1\n10\n01\n1\n".parse::<AirMatrix>().is_err());
        assert!("3 3\n".parse::<AirMatrix>().is_err());
    }
}
