use std::fmt;

use crate::bitio::BitWriter;

/// A codeword as a run of leading one-bits followed by an explicit pattern.
///
/// The unary prefix is kept as a count so that codewords deeper than a machine
/// word never need to be materialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Codeword {
    pub ones_prefix: u64,
    pub pattern: u64,
    pub pattern_len: u32,
}

impl Codeword {
    pub const EMPTY: Codeword = Codeword {
        ones_prefix: 0,
        pattern: 0,
        pattern_len: 0,
    };

    pub fn new(ones_prefix: u64, pattern: u64, pattern_len: u32) -> Self {
        debug_assert!(pattern_len <= 64);
        debug_assert!(pattern_len == 64 || pattern >> pattern_len == 0);
        Self {
            ones_prefix,
            pattern,
            pattern_len,
        }
    }

    /// Total length in bits.
    pub fn len(&self) -> u64 {
        self.ones_prefix + u64::from(self.pattern_len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn write_to(&self, w: &mut BitWriter) {
        w.write_ones(self.ones_prefix);
        w.write_bits(self.pattern, self.pattern_len)
            .expect("codeword pattern fits its length");
    }

    /// Renders the codeword as a string of '0' and '1'.
    pub fn bits(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.ones_prefix {
            f.write_str("1")?;
        }
        for k in (0..self.pattern_len).rev() {
            f.write_str(if (self.pattern >> k) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}
