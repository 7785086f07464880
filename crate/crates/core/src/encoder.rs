//! Encoding a message vector into `K − D` broadcast symbols, either as the
//! GF(2) product `x·L` or from the closed-form Boolean expression for each
//! symbol.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::air::AirMatrix;
use crate::chain::ParamChain;
use crate::error::{Error, Result};
use crate::ff_matrix::BitVector;

/// `K` message bits `x_0 … x_{K−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MessageVector(pub BitVector);

/// `K − D` broadcast bits `c_0 … c_{K−D−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword(pub BitVector);

macro_rules! bit_newtype {
    ($t:ident) => {
        impl $t {
            pub fn bits(&self) -> &BitVector {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn get(&self, i: usize) -> bool {
                self.0.get(i)
            }

            pub fn parse(s: &str) -> Result<Self> {
                BitVector::parse_bits(s).map(Self)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

bit_newtype!(MessageVector);
bit_newtype!(Codeword);

/// `c = x·L` over GF(2).
pub fn encode_matrix(m: &AirMatrix, x: &MessageVector) -> Result<Codeword> {
    if x.len() != m.height() {
        return Err(Error::LengthMismatch { expected: m.height(), actual: x.len() });
    }
    let mut c = BitVector::zeros(m.width());
    for j in x.0.iter_ones() {
        c.xor_assign(m.row(j))?;
    }
    Ok(Codeword(c))
}

/// The message indices XORed into `c_k`, in the order the closed-form
/// expression lists them (all subscripts reduced mod `K`).
///
/// For `k ∈ C_i` the symbol is
///
/// ```text
/// x_k + Σ_{z=1..i} Σ_{j=1..β_{2z−1}} x_{k + β₁λ₁ + … + β_{2z−3}λ_{2z−3} + jλ_{2z−1}}
///     + x_{(K−λ_{2i}) + (k − K + D + λ_{2i−1}) mod λ_{2i}}
/// ```
///
/// where the last term is absent on the tail interval of an odd-depth chain
/// (there `λ_{2i} = 0`).
pub fn boolean_terms(chain: &ParamChain, k: usize) -> Result<Vec<usize>> {
    let i = chain.col_interval_of(k)?;
    let big_k = chain.k();
    let mut terms = vec![k];
    let mut offset = 0usize;
    for z in 1..=i as isize {
        let step = chain.lambda(2 * z - 1);
        for j in 1..=chain.beta(2 * z - 1) {
            terms.push((k + offset + j * step) % big_k);
        }
        offset += chain.beta(2 * z - 1) * step;
    }
    let ii = i as isize;
    let even = chain.lambda(2 * ii);
    if even > 0 {
        let shifted = k + chain.d() + chain.lambda(2 * ii - 1) - big_k;
        terms.push(((big_k - even) + shifted % even) % big_k);
    }
    Ok(terms)
}

/// Evaluates the closed-form expression for `c_k`.
pub fn encode_boolean(chain: &ParamChain, x: &MessageVector, k: usize) -> Result<bool> {
    if x.len() != chain.k() {
        return Err(Error::LengthMismatch { expected: chain.k(), actual: x.len() });
    }
    Ok(boolean_terms(chain, k)?.into_iter().fold(false, |acc, i| acc ^ x.get(i)))
}

/// Encodes all symbols through the closed form.
pub fn encode_boolean_all(chain: &ParamChain, x: &MessageVector) -> Result<Codeword> {
    (0..chain.n())
        .map(|k| encode_boolean(chain, x, k))
        .collect::<Result<Vec<_>>>()
        .map(|bits| Codeword(BitVector::from_bits(bits)))
}

/// Per broadcast symbol, the ascending message indices it mixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeExpression {
    pub symbols: Vec<Vec<usize>>,
}

impl CodeExpression {
    /// `c<k> = x<i1> + x<i2> + …`, one line per symbol.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, terms) in self.symbols.iter().enumerate() {
            let rhs: Vec<String> = terms.iter().map(|i| format!("x{i}")).collect();
            out.push_str(&format!("c{k} = {}\n", rhs.join(" + ")));
        }
        out
    }
}

impl fmt::Display for CodeExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The whole code as symbol expressions, from the closed form. Terms that
/// appear twice cancel.
pub fn render_code(chain: &ParamChain) -> CodeExpression {
    let symbols = (0..chain.n())
        .map(|k| {
            let mut terms = boolean_terms(chain, k).expect("k < K - D");
            terms.sort_unstable();
            cancel_pairs(terms)
        })
        .collect();
    CodeExpression { symbols }
}

/// Removes indices that occur an even number of times from a sorted list.
pub(crate) fn cancel_pairs(sorted: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(sorted.len());
    for v in sorted {
        if out.last() == Some(&v) {
            out.pop();
        } else {
            out.push(v);
        }
    }
    out
}
