//! Optimal scalar-linear index codes for one-sided neighboring side-information
//! broadcast, built from AIR matrices.
//!
//! `K` receivers each want one message `x_k` and already hold the `D`
//! messages after it, `x_{k+1} … x_{k+D}` (indices mod `K`). The source
//! broadcasts `K − D` coded bits `c = x·L` where `L` is the `K × (K−D)` AIR
//! matrix. Every receiver recovers its message by XORing a few broadcast bits
//! with a subset of its side-information, as described by a [`DecodePlan`].

pub mod air;
pub mod chain;
pub mod channel;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod ff_matrix;
pub mod geometry;
pub mod verify;

pub use air::{AirMatrix, Block, CellLocation};
pub use chain::{ColumnPart, IntervalMap, ParamChain};
pub use channel::{grouping_report, run_sweep, transmit_estimate, BerReport, ChannelModel, ChannelSpec};
pub use decoder::{all_plans, build_plan, decode, DecodeCase, DecodePlan, SideInformation};
pub use encoder::{encode_boolean, encode_matrix, render_code, CodeExpression, Codeword, MessageVector};
pub use error::{Error, Result};
pub use ff_matrix::{xor_accumulate, BitVector, PrimeField, PrimeFieldMatrix};
pub use verify::{run_suites, Suite, SuiteReport, VerifyOptions};
