//! Prefix codes for geometric run lengths bounded by a known integer n.
//!
//! The main code lives in [`bounded`]: Golomb-style bunches of size m followed
//! by a tail subtree whose shape depends on n, computable in O(1) word
//! operations per value. Around it:
//!
//! - [`bitio`]: MSB-first bit streams.
//! - [`codes`]: unary, balanced (truncated binary) and Golomb reference codes.
//! - [`branchfree`]: mask-arithmetic primitives and a branch-free encoder.
//! - [`oracle`]: entropy, Huffman and weight-balanced expected lengths.
//! - [`eval`]: the redundancy experiment harness.
//! - [`container`]: the FGC1 file format used by the CLI.

pub mod bitio;
pub mod bounded;
pub mod branchfree;
pub mod cli;
pub mod codes;
pub mod codeword;
pub mod container;
pub mod error;
pub mod eval;
pub mod oracle;

pub use bitio::{BitReader, BitWriter, Padding};
pub use bounded::{CodeLayout, GeometricParams};
pub use codeword::Codeword;
pub use error::{Error, Result};
pub use eval::{Comparison, EvalReport, ExperimentConfig};
