//! Distances between the ones of an AIR matrix.
//!
//! * `down_distance(k)`: from the diagonal cell `(k, k)` to the lowest 1 in
//!   column `k`.
//! * `up_distance(j, k)`: from a 1 in the lower `D` rows to the next 1 above
//!   it in the same column.
//! * `right_distance(j, k)`: from a 1 in an even block to the next 1 to its
//!   right in the same row.
//! * `μ_k`: the right-distance at `(k + d_down(k), k)`; `p_k` and `t_{k,r}`
//!   count and locate the ones below `(k + d_down(k), k + μ_k)`.
//!
//! The functions here evaluate closed forms in O(1) per query (plus the
//! column length for `t`). [`scan`] recomputes everything by walking the
//! stored matrix and is the reference the closed forms are tested against.

use serde::{Deserialize, Serialize};

use crate::air::{locate_cell, AirMatrix, Block};
use crate::chain::ParamChain;
use crate::encoder::boolean_terms;
use crate::error::{Error, Result};

/// Down-distance of the diagonal cell `(k, k)`.
pub fn down_distance(chain: &ParamChain, k: usize) -> Result<usize> {
    let i = chain.col_interval_of(k)? as isize;
    let even = chain.lambda(2 * i);
    if even == 0 {
        // tail interval of an odd-depth chain
        return Ok(chain.d());
    }
    let offset = k - chain.col_interval(i as usize).start;
    let c = offset / even;
    Ok(chain.d() + chain.lambda(2 * i + 1) + (chain.beta(2 * i) - 1 - c) * even)
}

fn require_one(m: &AirMatrix, row: usize, col: usize) -> Result<()> {
    if row >= m.height() {
        return Err(Error::OutOfRange { index: row, limit: m.height() });
    }
    if col >= m.width() {
        return Err(Error::OutOfRange { index: col, limit: m.width() });
    }
    if !m.get(row, col) {
        return Err(Error::ZeroCell { row, col });
    }
    Ok(())
}

/// Up-distance of a 1 at `(row, col)` with `row >= K − D`.
pub fn up_distance(m: &AirMatrix, row: usize, col: usize) -> Result<usize> {
    require_one(m, row, col)?;
    let chain = m.chain();
    let loc = locate_cell(chain, row, col)?;
    match loc.block {
        Block::Top => Err(Error::TopBlock { row, col }),
        Block::Odd(i) => Ok(chain.lambda(2 * i as isize + 1)),
        Block::Even(i) => {
            let i = i as isize;
            let c = loc.col / chain.lambda(2 * i);
            Ok(chain.lambda(2 * i - 1) - c * chain.lambda(2 * i))
        }
    }
}

/// Right-distance of a 1 at `(row, col)` inside an even block.
pub fn right_distance(m: &AirMatrix, row: usize, col: usize) -> Result<usize> {
    require_one(m, row, col)?;
    let chain = m.chain();
    let loc = locate_cell(chain, row, col)?;
    let Block::Even(i) = loc.block else {
        return Err(Error::NotEvenBlock { row, col });
    };
    let i = i as isize;
    let even = chain.lambda(2 * i);
    if loc.col < (chain.beta(2 * i) - 1) * even {
        return Ok(even);
    }
    let odd = chain.lambda(2 * i + 1);
    if odd == 0 {
        return Err(Error::NoRightNeighbor { row, col });
    }
    let c = loc.row / odd;
    Ok(even - c * odd)
}

/// The distance quantities attached to broadcast column `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub k: usize,
    pub d_down: usize,
    /// `μ_k`; absent on the tail `[K−D−λ_l, K−D)`.
    pub mu: Option<usize>,
    /// `t_{k,1} < … < t_{k,p_k}`; `p_k` is its length.
    pub t: Vec<usize>,
}

impl DistanceProfile {
    pub fn p(&self) -> usize {
        self.t.len()
    }
}

/// Assembles `d_down`, `μ_k`, `p_k` and `t_{k,·}` for column `k`.
///
/// The ones below the partner cell come from the closed-form column support
/// of column `k + μ_k`, not from the stored grid.
pub fn distance_profile(m: &AirMatrix, k: usize) -> Result<DistanceProfile> {
    let chain = m.chain();
    let d_down = down_distance(chain, k)?;
    if k >= chain.tail_start() {
        return Ok(DistanceProfile { k, d_down, mu: None, t: Vec::new() });
    }
    let anchor = k + d_down;
    let mu = right_distance(m, anchor, k)?;
    let mut below: Vec<usize> =
        boolean_terms(chain, k + mu)?.into_iter().filter(|&r| r > anchor).map(|r| r - anchor).collect();
    below.sort_unstable();
    Ok(DistanceProfile { k, d_down, mu: Some(mu), t: below })
}

/// Reference implementations that walk the stored matrix cell by cell.
pub mod scan {
    use super::DistanceProfile;
    use crate::air::{AirMatrix, Block};
    use crate::error::{Error, Result};

    /// Largest `k' > k` with `L(k', k) = 1`, as `k' − k`.
    pub fn down_distance(m: &AirMatrix, k: usize) -> Result<usize> {
        if k >= m.width() {
            return Err(Error::OutOfRange { index: k, limit: m.width() });
        }
        (k + 1..m.height()).rev().find(|&r| m.get(r, k)).map(|r| r - k).ok_or(Error::ZeroCell { row: k, col: k })
    }

    /// Nearest 1 above `(row, col)`.
    pub fn up_distance(m: &AirMatrix, row: usize, col: usize) -> Result<usize> {
        if !m.get(row, col) {
            return Err(Error::ZeroCell { row, col });
        }
        if row < m.width() {
            return Err(Error::TopBlock { row, col });
        }
        (0..row).rev().find(|&r| m.get(r, col)).map(|r| row - r).ok_or(Error::ZeroCell { row, col })
    }

    /// Nearest 1 to the right of `(row, col)`.
    pub fn right_distance(m: &AirMatrix, row: usize, col: usize) -> Result<usize> {
        if !m.get(row, col) {
            return Err(Error::ZeroCell { row, col });
        }
        if !matches!(m.locate_cell(row, col)?.block, Block::Even(_)) {
            return Err(Error::NotEvenBlock { row, col });
        }
        (col + 1..m.width()).find(|&c| m.get(row, c)).map(|c| c - col).ok_or(Error::NoRightNeighbor { row, col })
    }

    /// The full profile, every quantity found by scanning.
    pub fn distance_profile(m: &AirMatrix, k: usize) -> Result<DistanceProfile> {
        let d_down = down_distance(m, k)?;
        let chain = m.chain();
        if k >= chain.tail_start() {
            return Ok(DistanceProfile { k, d_down, mu: None, t: Vec::new() });
        }
        let anchor = k + d_down;
        let mu = right_distance(m, anchor, k)?;
        let t = (anchor + 1..m.height()).filter(|&r| m.get(r, k + mu)).map(|r| r - anchor).collect();
        Ok(DistanceProfile { k, d_down, mu: Some(mu), t })
    }
}
