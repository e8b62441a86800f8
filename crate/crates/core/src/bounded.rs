//! Prefix code for geometric run lengths bounded by a known integer n.
//!
//! The code tree is a Golomb tree cut off after d_t bunches of size m, ending
//! in a tail subtree that holds the last m′ values plus the boundary leaf n.
//! Encoding proceeds in three phases:
//!
//! 1. [`GeometricParams::derive`] turns p into the integers m and m″.
//! 2. [`CodeLayout::new`] fixes everything that depends on n.
//! 3. [`CodeLayout::encode`] / [`CodeLayout::decode`] handle single values in
//!    O(1) word operations (plus the unary prefix).
//!
//! Long codewords are canonical: a long offset r in a bunch is written as
//! r + s, and a long tail offset j as j + s′, which keeps the code
//! prefix-free and makes decoding a single comparison.

use crate::bitio::{BitReader, BitWriter};
use crate::codes::{ceil_lg, check_probability, compute_m, ln_p};
use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::oracle::BoundedGeometric;

/// lg(1/(lg 3 − 1) + 1), rounded as used for the tail threshold.
pub const TAIL_THRESHOLD_CONSTANT: f64 = 1.4380;

/// Upper bound on the number of rows [`CodeLayout::enumerate_codewords`] builds.
pub const TABLE_LIMIT: u64 = 1_000_000;

/// Phase-1 parameters derived from the probability p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricParams {
    pub p: f64,
    pub m: u64,
    pub m2: u64,
}

impl GeometricParams {
    pub fn derive(p: f64) -> Result<Self> {
        check_probability(p)?;
        let m = compute_m(p)?;
        let neg_lg_p = -ln_p(p) / std::f64::consts::LN_2;
        let raw = (TAIL_THRESHOLD_CONSTANT / neg_lg_p).ceil() as u64;
        let m2 = raw.clamp(m + 1, 2 * m);
        if m2 != raw {
            log::warn!("tail threshold {raw} for p={p} clamped to {m2} (m={m})");
        }
        Ok(Self { p, m, m2 })
    }

    pub fn layout(&self, n: u64) -> CodeLayout {
        CodeLayout::new(self.m, self.m2, n).expect("derived parameters are valid")
    }
}

/// Phase-2 layout: every integer needed to code values 0..=n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeLayout {
    pub n: u64,
    pub m: u64,
    pub m2: u64,
    /// Tail width m′: number of non-boundary values in the tail.
    pub m1: u64,
    /// Tail depth: number of full bunches before the tail.
    pub d_t: u64,
    pub h: u32,
    pub s: u64,
    /// Tail height h′.
    pub h1: u32,
    /// Number of short codewords in the tail, s′.
    pub s1: u64,
    /// Depth of leaf n inside the tail: 1 or 2, and 0 for the single-value
    /// code at n = 0.
    pub e_n: u32,
}

pub fn validate_params(m: u64, m2: u64) -> Result<()> {
    if m >= 1 && m < m2 && m2 <= m.saturating_mul(2) {
        Ok(())
    } else {
        Err(Error::InvalidParams { m, m2 })
    }
}

impl CodeLayout {
    pub fn new(m: u64, m2: u64, n: u64) -> Result<Self> {
        validate_params(m, m2)?;
        let h = ceil_lg(m);
        let s = (1u64 << h) - m;
        let m1 = (m + n % m).min(n);
        let d_t = (n - m1) / m;
        let (e_n, h1, s1) = if n == 0 {
            (0, 0, 0)
        } else if m1 < m2 {
            let h1 = ceil_lg(m1) + 1;
            (1, h1, (1u64 << (h1 - 1)) - m1)
        } else {
            // Smallest h′ with 2^h′ ≥ 4m′/3.
            let h1 = ceil_lg((4 * m1).div_ceil(3));
            (2, h1, 3 * (1u64 << (h1 - 2)) - m1)
        };
        Ok(Self {
            n,
            m,
            m2,
            m1,
            d_t,
            h,
            s,
            h1,
            s1,
            e_n,
        })
    }

    /// First value of the tail, n − m′ = m·d_t.
    pub fn tail_start(&self) -> u64 {
        self.m * self.d_t
    }

    fn check(&self, i: u64) -> Result<()> {
        if i > self.n {
            Err(Error::ValueOutOfRange {
                value: i,
                bound: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn encode(&self, i: u64) -> Result<Codeword> {
        self.check(i)?;
        let tail = self.tail_start();
        Ok(if i < tail {
            let r = i % self.m;
            if r < self.s {
                Codeword::new(i / self.m, r, self.h)
            } else {
                Codeword::new(i / self.m, r + self.s, self.h + 1)
            }
        } else if i < self.n {
            let j = i - tail;
            if j < self.s1 {
                Codeword::new(self.d_t, j, self.h1 - 1)
            } else {
                Codeword::new(self.d_t, j + self.s1, self.h1)
            }
        } else {
            Codeword::new(self.d_t + u64::from(self.e_n), 0, 0)
        })
    }

    pub fn encode_to(&self, w: &mut BitWriter, i: u64) -> Result<()> {
        self.encode(i)?.write_to(w);
        Ok(())
    }

    /// Decodes one value. Every bit sequence decodes to something; reads past
    /// the end of the stream see the reader's padding bit.
    pub fn decode(&self, r: &mut BitReader<'_>) -> u64 {
        if self.n == 0 {
            return 0;
        }
        let ones = r.count_ones_capped(self.d_t);
        if ones < self.d_t {
            r.skip(1);
            let short = r.peek_bits(self.h.saturating_sub(1));
            let offset = if self.h == 0 {
                0
            } else if short < self.s {
                r.skip(u64::from(self.h - 1));
                short
            } else {
                r.read_bits(self.h) - self.s
            };
            return ones * self.m + offset;
        }
        let j = r.peek_bits(self.h1);
        let top = j >> (self.h1 - self.e_n);
        if top == (1 << self.e_n) - 1 {
            r.skip(u64::from(self.e_n));
            self.n
        } else if j < 2 * self.s1 {
            r.skip(u64::from(self.h1 - 1));
            self.tail_start() + j / 2
        } else {
            r.skip(u64::from(self.h1));
            self.tail_start() + j - self.s1
        }
    }

    /// Codeword length without building the codeword.
    pub fn codeword_length(&self, i: u64) -> Result<u64> {
        self.check(i)?;
        let tail = self.tail_start();
        Ok(if i < tail {
            i / self.m + u64::from(self.h) + u64::from(i % self.m >= self.s)
        } else if i < self.n {
            self.d_t + u64::from(self.h1) - u64::from(i - tail < self.s1)
        } else {
            self.d_t + u64::from(self.e_n)
        })
    }

    /// L(p, n) under the bounded geometric distribution with parameter `p`.
    pub fn expected_length(&self, p: f64) -> Result<f64> {
        let dist = BoundedGeometric::new(p, self.n)?;
        Ok(self.expected_length_for(&dist))
    }

    pub fn expected_length_for(&self, dist: &BoundedGeometric) -> f64 {
        debug_assert_eq!(dist.n(), self.n);
        dist.expected_length(|i| self.codeword_length(i).expect("i <= n"))
    }

    pub fn enumerate_codewords(&self) -> Result<Vec<(u64, Codeword)>> {
        self.enumerate_codewords_limited(TABLE_LIMIT)
    }

    pub fn enumerate_codewords_limited(&self, limit: u64) -> Result<Vec<(u64, Codeword)>> {
        if self.n >= limit {
            return Err(Error::TableTooLarge { n: self.n, limit });
        }
        (0..=self.n)
            .map(|i| Ok((i, self.encode(i)?)))
            .collect()
    }
}

/// Convenience: encode `values` with one layout into a fresh stream.
pub fn encode_all(layout: &CodeLayout, values: &[u64]) -> Result<(Vec<u8>, u64)> {
    let mut w = BitWriter::new();
    for &v in values {
        layout.encode_to(&mut w, v)?;
    }
    let len = w.bit_len();
    Ok((w.flush(), len))
}
