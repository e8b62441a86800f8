//! Branch-free encoding on 32-bit two's-complement words.
//!
//! Conditions are represented as masks (all ones for true, all zeros for
//! false) obtained by smearing a sign bit, and every case of the encoder is
//! computed and then selected with mask arithmetic.

use crate::bounded::CodeLayout;
use crate::codeword::Codeword;
use crate::error::{Error, Result};

/// All-ones (true) or all-zeros (false) 32-bit word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mask(u32);

impl Mask {
    pub const TRUE: Mask = Mask(u32::MAX);
    pub const FALSE: Mask = Mask(0);

    #[inline(always)]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline(always)]
    pub fn or(self, other: Mask) -> Mask {
        Mask(self.0 | other.0)
    }
}

impl std::ops::Not for Mask {
    type Output = Mask;

    #[inline(always)]
    fn not(self) -> Mask {
        Mask(!self.0)
    }
}

/// True iff `x` is negative.
#[inline(always)]
pub fn is_neg(x: i32) -> Mask {
    // Arithmetic shift replicates the sign bit.
    Mask((x >> 31) as u32)
}

/// True iff x > y, for x, y < 2^31.
#[inline(always)]
pub fn is_gt(x: u32, y: u32) -> Mask {
    is_neg((y as i32).wrapping_sub(x as i32))
}

/// True iff x ≠ 0, for x < 2^31.
#[inline(always)]
fn is_nonzero(x: u32) -> Mask {
    is_neg((x as i32).wrapping_neg())
}

#[inline(always)]
pub fn if_then_else(c: Mask, a: u32, b: u32) -> u32 {
    (a & c.0) | (b & !c.0)
}

#[inline(always)]
fn if_then(c: Mask, a: u32) -> u32 {
    a & c.0
}

/// ⌈lg x⌉ by five fixed halving tests on the position of the highest one-bit
/// of x − 1.
pub fn ceil_lg32(x: u32) -> Result<u32> {
    if x == 0 {
        return Err(Error::LogOfZero);
    }
    let mut v = x - 1;
    let mut r = 0;
    for shift in [16u32, 8, 4, 2, 1] {
        // v >> shift < 2^31, so the nonzero test cannot wrap.
        let step = if_then(is_nonzero(v >> shift), shift);
        v >>= step;
        r += step;
    }
    // v is now 0 (x = 1) or 1.
    Ok(r + v)
}

/// 32-bit copy of the layout fields the encoder reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout32 {
    n: u32,
    m: u32,
    tail_start: u32,
    d_t: u32,
    h: u32,
    s: u32,
    h1: u32,
    s1: u32,
    e_n: u32,
}

impl TryFrom<&CodeLayout> for Layout32 {
    type Error = Error;

    fn try_from(l: &CodeLayout) -> Result<Self> {
        let narrow = |field: &'static str, value: u64| -> Result<u32> {
            if value < 1 << 31 {
                Ok(value as u32)
            } else {
                Err(Error::LayoutTooWide { field, value })
            }
        };
        Ok(Self {
            n: narrow("n", l.n)?,
            m: narrow("m", l.m)?,
            tail_start: narrow("tail_start", l.tail_start())?,
            d_t: narrow("d_t", l.d_t)?,
            h: l.h,
            s: narrow("s", l.s)?,
            h1: l.h1,
            s1: narrow("s1", l.s1)?,
            e_n: l.e_n,
        })
    }
}

impl Layout32 {
    /// Branch-free encoder; `i` must not exceed n.
    #[inline]
    pub fn encode(&self, i: u32) -> Codeword {
        let q = i / self.m;
        let r = i - q * self.m;

        let in_bunch = is_gt(self.tail_start, i);
        let bunch_short = is_gt(self.s, r);
        let bunch_pattern = r + if_then(!bunch_short, self.s);
        let bunch_len = self.h + if_then(!bunch_short, 1);

        let j = i.wrapping_sub(self.tail_start);
        let tail_short = is_gt(self.s1, j);
        let tail_pattern = j.wrapping_add(if_then(!tail_short, self.s1));
        let tail_len = self.h1.wrapping_sub(if_then(tail_short, 1));

        let is_n = !is_gt(self.n, i);
        let tail_ones = self.d_t + if_then(is_n, self.e_n);

        let ones = if_then_else(in_bunch, q, tail_ones);
        let pattern = if_then_else(in_bunch, bunch_pattern, if_then(!is_n, tail_pattern));
        let len = if_then_else(in_bunch, bunch_len, if_then(!is_n, tail_len));
        Codeword::new(u64::from(ones), u64::from(pattern), len)
    }
}

/// Branch-free counterpart of [`CodeLayout::encode`].
pub fn encode_branchfree(layout: &CodeLayout, i: u64) -> Result<Codeword> {
    if i > layout.n {
        return Err(Error::ValueOutOfRange {
            value: i,
            bound: layout.n,
        });
    }
    Ok(Layout32::try_from(layout)?.encode(i as u32))
}
