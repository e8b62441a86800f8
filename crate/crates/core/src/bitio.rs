//! MSB-first bit streams.
//!
//! Bits are packed most-significant-first within each byte. The writer keeps
//! the final partial byte zero-filled, and the reader returns the padding bit
//! (zero unless configured otherwise) for any position at or past the declared
//! bit length.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitWriter {
    buffer: Vec<u8>,
    bit_pos: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bytes: usize) -> Self {
        Self {
            buffer: Vec::with_capacity(bytes),
            bit_pos: 0,
        }
    }

    /// Number of bits written so far.
    pub fn bit_len(&self) -> u64 {
        self.bit_pos
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buffer
    }

    /// Appends the `count` low-order bits of `pattern`, most significant first.
    pub fn write_bits(&mut self, pattern: u64, count: u32) -> Result<()> {
        if count > 64 {
            return Err(Error::BitCountTooLarge(count));
        }
        if count < 64 && pattern >> count != 0 {
            return Err(Error::PatternTooWide { pattern, count });
        }
        self.push_bits(pattern, count);
        Ok(())
    }

    /// Appends `count` one-bits.
    pub fn write_ones(&mut self, mut count: u64) {
        while count >= 64 {
            self.push_bits(u64::MAX, 64);
            count -= 64;
        }
        if count > 0 {
            self.push_bits((1u64 << count) - 1, count as u32);
        }
    }

    fn push_bits(&mut self, pattern: u64, mut count: u32) {
        while count > 0 {
            let used = (self.bit_pos % 8) as u32;
            if used == 0 {
                self.buffer.push(0);
            }
            let free = 8 - used;
            let take = free.min(count);
            let chunk = ((pattern >> (count - take)) & ((1u64 << take) - 1)) as u8;
            let last = self.buffer.last_mut().expect("buffer holds the current byte");
            *last |= chunk << (free - take);
            count -= take;
            self.bit_pos += u64::from(take);
        }
    }

    /// Consumes the writer, returning the zero-padded bytes.
    pub fn flush(self) -> Vec<u8> {
        self.buffer
    }
}

/// Bit value supplied for reads at or past the end of the valid bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    #[default]
    Zero,
    One,
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    buffer: &'a [u8],
    bit_pos: u64,
    bit_len: u64,
    padding: Padding,
}

impl<'a> BitReader<'a> {
    /// Reader over every bit of `buffer`.
    pub fn new(buffer: &'a [u8]) -> Self {
        Self::with_len(buffer, buffer.len() as u64 * 8)
    }

    /// Reader over the first `bit_len` bits of `buffer`; `bit_len` is clamped
    /// to the buffer size.
    pub fn with_len(buffer: &'a [u8], bit_len: u64) -> Self {
        Self {
            buffer,
            bit_pos: 0,
            bit_len: bit_len.min(buffer.len() as u64 * 8),
            padding: Padding::Zero,
        }
    }

    pub fn padding(mut self, padding: Padding) -> Self {
        self.padding = padding;
        self
    }

    pub fn position(&self) -> u64 {
        self.bit_pos
    }

    pub fn bit_len(&self) -> u64 {
        self.bit_len
    }

    pub fn remaining(&self) -> u64 {
        self.bit_len.saturating_sub(self.bit_pos)
    }

    /// True once every valid bit has been consumed (or skipped past).
    pub fn is_exhausted(&self) -> bool {
        self.bit_pos >= self.bit_len
    }

    fn bit_at(&self, pos: u64) -> u64 {
        if pos >= self.bit_len {
            return match self.padding {
                Padding::Zero => 0,
                Padding::One => 1,
            };
        }
        let byte = self.buffer[(pos / 8) as usize];
        u64::from((byte >> (7 - pos % 8)) & 1)
    }

    /// Returns the next `count` bits (at most 64) without consuming them.
    pub fn peek_bits(&self, count: u32) -> u64 {
        assert!(count <= 64, "peek of {count} bits exceeds 64");
        let mut value = 0u64;
        let mut pos = self.bit_pos;
        let mut left = count;
        while left > 0 {
            if pos.is_multiple_of(8) && left >= 8 && pos + 8 <= self.bit_len {
                value = (value << 8) | u64::from(self.buffer[(pos / 8) as usize]);
                pos += 8;
                left -= 8;
            } else {
                value = (value << 1) | self.bit_at(pos);
                pos += 1;
                left -= 1;
            }
        }
        value
    }

    pub fn read_bits(&mut self, count: u32) -> u64 {
        let value = self.peek_bits(count);
        self.skip(u64::from(count));
        value
    }

    pub fn skip(&mut self, count: u64) {
        self.bit_pos += count;
    }

    /// Consumes consecutive one-bits, stopping at `cap` ones or before the
    /// first zero-bit. The zero-bit itself is left unconsumed.
    pub fn count_ones_capped(&mut self, cap: u64) -> u64 {
        let mut ones = 0;
        while ones < cap {
            // Fast path: whole one-bytes inside the valid region.
            if self.bit_pos.is_multiple_of(8)
                && cap - ones >= 8
                && self.bit_pos + 8 <= self.bit_len
                && self.buffer[(self.bit_pos / 8) as usize] == 0xFF
            {
                ones += 8;
                self.bit_pos += 8;
                continue;
            }
            if self.bit_at(self.bit_pos) == 0 {
                break;
            }
            ones += 1;
            self.bit_pos += 1;
        }
        ones
    }
}

#[cfg(test)]
pub(crate) fn bits_of(s: &str) -> (Vec<u8>, u64) {
    let mut w = BitWriter::new();
    for c in s.chars() {
        match c {
            '0' => w.write_bits(0, 1).unwrap(),
            '1' => w.write_bits(1, 1).unwrap(),
            _ => {}
        }
    }
    let len = w.bit_len();
    (w.flush(), len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn render(w: &BitWriter) -> String {
        let mut r = BitReader::with_len(w.as_bytes(), w.bit_len());
        (0..w.bit_len())
            .map(|_| if r.read_bits(1) == 1 { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn write_bits_examples() {
        let mut w = BitWriter::new();
        w.write_bits(0b0100, 4).unwrap();
        assert_eq!(render(&w), "0100");

        let mut w = BitWriter::new();
        w.write_bits(0, 0).unwrap();
        assert_eq!(w.bit_len(), 0);
        assert!(w.as_bytes().is_empty());

        let mut w = BitWriter::new();
        w.write_bits(1, 1).unwrap();
        w.write_bits(0b0011, 4).unwrap();
        assert_eq!(render(&w), "10011");
    }

    #[test]
    fn write_bits_rejects_bad_input() {
        let mut w = BitWriter::new();
        assert_eq!(w.write_bits(0, 65), Err(Error::BitCountTooLarge(65)));
        assert_eq!(
            w.write_bits(0b100, 2),
            Err(Error::PatternTooWide {
                pattern: 4,
                count: 2
            })
        );
        w.write_bits(u64::MAX, 64).unwrap();
        assert_eq!(w.flush(), vec![0xFF; 8]);
    }

    #[test]
    fn write_ones_examples() {
        let mut w = BitWriter::new();
        w.write_ones(3);
        assert_eq!(render(&w), "111");

        let mut w = BitWriter::new();
        w.write_ones(0);
        assert_eq!(render(&w), "");

        let mut w = BitWriter::new();
        w.write_bits(0, 1).unwrap();
        w.write_ones(2);
        assert_eq!(render(&w), "011");

        let mut w = BitWriter::new();
        w.write_ones(130);
        assert_eq!(w.bit_len(), 130);
        let mut r = BitReader::with_len(w.as_bytes(), w.bit_len());
        assert_eq!(r.count_ones_capped(1000), 130);
    }

    #[test]
    fn read_and_peek_examples() {
        let (bytes, len) = bits_of("10011");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(r.read_bits(5), 19);

        let (bytes, len) = bits_of("1");
        let r = BitReader::with_len(&bytes, len);
        assert_eq!(r.peek_bits(3), 0b100);
        let r = r.padding(Padding::One);
        assert_eq!(r.peek_bits(3), 0b111);

        let (bytes, len) = bits_of("10");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(r.read_bits(0), 0);
        assert_eq!(r.position(), 0);
    }

    #[test]
    fn count_ones_capped_examples() {
        let (bytes, len) = bits_of("11000");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(r.count_ones_capped(5), 2);
        assert_eq!(r.peek_bits(1), 0);
        assert_eq!(r.position(), 2);

        let (bytes, len) = bits_of("111");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(r.count_ones_capped(2), 2);
        assert_eq!(r.read_bits(1), 1);

        let (bytes, len) = bits_of("0111");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(r.count_ones_capped(5), 0);
        assert_eq!(r.position(), 0);
    }

    #[test]
    fn flush_examples() {
        let (bytes, _) = bits_of("10011");
        assert_eq!(bytes, vec![0b1001_1000]);
        assert!(BitWriter::new().flush().is_empty());
        let (bytes, _) = bits_of("11111111");
        assert_eq!(bytes, vec![0xFF]);
    }

    #[test]
    fn msb_first_order() {
        let mut w = BitWriter::new();
        w.write_bits(1, 1).unwrap();
        w.write_bits(0, 1).unwrap();
        assert_eq!(w.flush()[0] & 0x80, 0x80);
    }

    proptest! {
        #[test]
        fn roundtrip(fields in prop::collection::vec((any::<u64>(), 0u32..=64), 0..40)) {
            let fields: Vec<(u64, u32)> = fields
                .into_iter()
                .map(|(v, c)| (if c == 64 { v } else { v & ((1u64 << c) - 1) }, c))
                .collect();
            let mut w = BitWriter::new();
            for &(v, c) in &fields {
                w.write_bits(v, c).unwrap();
            }
            let total: u64 = fields.iter().map(|&(_, c)| u64::from(c)).sum();
            prop_assert_eq!(w.bit_len(), total);
            prop_assert_eq!(w.as_bytes().len() as u64, total.div_ceil(8));
            if !total.is_multiple_of(8) {
                let last = *w.as_bytes().last().unwrap();
                prop_assert_eq!(last & ((1u8 << (8 - total % 8)) - 1), 0);
            }
            let len = w.bit_len();
            let bytes = w.flush();
            let mut r = BitReader::with_len(&bytes, len);
            for &(v, c) in &fields {
                let peeked = r.peek_bits(c);
                prop_assert_eq!(r.read_bits(c), peeked);
                prop_assert_eq!(peeked, v);
            }
            prop_assert!(r.is_exhausted());
        }
    }
}
