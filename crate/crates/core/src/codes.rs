//! Reference codes: unary, balanced (truncated binary) and Golomb.

use crate::bitio::BitReader;
use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::oracle::BoundedGeometric;

/// ⌈lg x⌉ for x ≥ 1.
pub fn ceil_lg(x: u64) -> u32 {
    assert!(x >= 1, "ceil_lg of 0");
    if x == 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.5..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

/// Natural log of p, accurate for p close to 1.
pub(crate) fn ln_p(p: f64) -> f64 {
    // p - 1 is exact on [0.5, 1).
    (p - 1.0).ln_1p()
}

/// Golomb bunch size: the smallest ℓ with p^ℓ + p^(ℓ+1) ≤ 1.
///
/// Starts from the closed form ⌈ln(1+p) / −ln p⌉ and then scans neighbours,
/// testing ℓ·ln p + ln(1+p) ≤ 0 directly.
pub fn compute_m(p: f64) -> Result<u64> {
    check_probability(p)?;
    let lnp = ln_p(p);
    let ln1p = p.ln_1p();
    let fits = |l: u64| (l as f64) * lnp + ln1p <= 0.0;
    let mut m = (ln1p / -lnp).ceil().max(1.0) as u64;
    while m > 1 && fits(m - 1) {
        m -= 1;
    }
    while !fits(m) {
        m += 1;
    }
    Ok(m)
}

/// Truncated binary code over a universe of `universe` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalancedParams {
    pub universe: u64,
    /// ⌈lg N⌉, the long codeword length.
    pub h: u32,
    /// Number of (h−1)-bit codewords.
    pub s: u64,
}

impl BalancedParams {
    pub fn new(universe: u64) -> Result<Self> {
        if universe == 0 {
            return Err(Error::EmptyUniverse);
        }
        let h = ceil_lg(universe);
        Ok(Self {
            universe,
            h,
            s: (1u64 << h) - universe,
        })
    }

    pub fn encode(&self, v: u64) -> Result<Codeword> {
        if v >= self.universe {
            return Err(Error::ValueOutOfRange {
                value: v,
                bound: self.universe - 1,
            });
        }
        Ok(if v < self.s {
            Codeword::new(0, v, self.h - 1)
        } else {
            Codeword::new(0, v + self.s, self.h)
        })
    }

    pub fn len(&self, v: u64) -> u32 {
        if v < self.s {
            self.h - 1
        } else {
            self.h
        }
    }

    pub fn decode(&self, r: &mut BitReader<'_>) -> u64 {
        if self.h == 0 {
            return 0;
        }
        let short = r.peek_bits(self.h - 1);
        if short < self.s {
            r.skip(u64::from(self.h - 1));
            short
        } else {
            r.read_bits(self.h) - self.s
        }
    }
}

pub fn balanced_encode(v: u64, universe: u64) -> Result<Codeword> {
    BalancedParams::new(universe)?.encode(v)
}

pub fn balanced_decode(r: &mut BitReader<'_>, universe: u64) -> Result<u64> {
    Ok(BalancedParams::new(universe)?.decode(r))
}

/// Unary code; with a bound the terminating zero of the last value is dropped.
pub fn unary_encode(i: u64, bound: Option<u64>) -> Result<Codeword> {
    match bound {
        Some(n) if i > n => Err(Error::ValueOutOfRange { value: i, bound: n }),
        Some(n) if i == n => Ok(Codeword::new(n, 0, 0)),
        _ => Ok(Codeword::new(i, 0, 1)),
    }
}

pub fn unary_decode(r: &mut BitReader<'_>, bound: Option<u64>) -> u64 {
    let cap = bound.unwrap_or(u64::MAX);
    let ones = r.count_ones_capped(cap);
    if ones < cap {
        r.skip(1);
    }
    ones
}

/// Golomb code with bunch size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GolombParams {
    pub m: u64,
    pub bunch: BalancedParams,
}

impl GolombParams {
    pub fn new(m: u64) -> Result<Self> {
        Ok(Self {
            m,
            bunch: BalancedParams::new(m)?,
        })
    }

    pub fn from_probability(p: f64) -> Result<Self> {
        Self::new(compute_m(p)?)
    }

    pub fn encode(&self, i: u64) -> Codeword {
        let offset = self
            .bunch
            .encode(i % self.m)
            .expect("offset lies inside the bunch");
        // The zero edge becomes a leading zero of the pattern.
        Codeword::new(i / self.m, offset.pattern, offset.pattern_len + 1)
    }

    pub fn len(&self, i: u64) -> u64 {
        i / self.m + 1 + u64::from(self.bunch.len(i % self.m))
    }

    pub fn decode(&self, r: &mut BitReader<'_>) -> u64 {
        let bunch = unary_decode(r, None);
        bunch * self.m + self.bunch.decode(r)
    }
}

pub fn golomb_encode(i: u64, m: u64) -> Result<Codeword> {
    Ok(GolombParams::new(m)?.encode(i))
}

pub fn golomb_decode(r: &mut BitReader<'_>, m: u64) -> Result<u64> {
    Ok(GolombParams::new(m)?.decode(r))
}

/// Expected length of the unbounded Golomb code under the bounded geometric
/// distribution; the boundary value n keeps its ordinary Golomb codeword.
pub fn golomb_expected_length_bounded(p: f64, n: u64, m: u64) -> Result<f64> {
    let golomb = GolombParams::new(m)?;
    let dist = BoundedGeometric::new(p, n)?;
    Ok(dist.expected_length(|i| golomb.len(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitio::{bits_of, BitWriter};
    use crate::oracle::kraft_is_complete;
    use proptest::prelude::*;

    fn bits(cw: Codeword) -> String {
        cw.bits()
    }

    #[test]
    fn ceil_lg_small() {
        let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)];
        for (x, e) in expect {
            assert_eq!(ceil_lg(x), e, "x={x}");
        }
        assert_eq!(ceil_lg(u64::MAX), 64);
    }

    #[test]
    fn compute_m_examples() {
        assert_eq!(compute_m(0.5).unwrap(), 1);
        assert_eq!(compute_m(0.9).unwrap(), 7);
        // Frozen from a 50-digit scan of p^l + p^(l+1) <= 1.
        assert_eq!(compute_m(0.99).unwrap(), 69);
        assert_eq!(compute_m(0.88).unwrap(), 5);
        assert_eq!(compute_m(0.6).unwrap(), 1);
    }

    #[test]
    fn compute_m_domain() {
        for p in [0.49, 1.0, 1.5, -0.1, f64::NAN] {
            assert!(matches!(compute_m(p), Err(Error::ProbabilityOutOfRange(_))));
        }
    }

    #[test]
    fn unary_examples() {
        assert_eq!(bits(unary_encode(3, None).unwrap()), "1110");
        assert_eq!(bits(unary_encode(0, None).unwrap()), "0");
        assert_eq!(bits(unary_encode(2, Some(2)).unwrap()), "11");
        assert_eq!(
            unary_encode(3, Some(2)),
            Err(Error::ValueOutOfRange { value: 3, bound: 2 })
        );

        let (bytes, len) = bits_of("11");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(unary_decode(&mut r, Some(2)), 2);
        assert_eq!(r.position(), 2);
        let (bytes, len) = bits_of("1110");
        let mut r = BitReader::with_len(&bytes, len);
        assert_eq!(unary_decode(&mut r, None), 3);
        assert_eq!(r.position(), 4);
    }

    #[test]
    fn balanced_examples() {
        // N = 11: five 3-bit codewords, then six 4-bit ones.
        let lens: Vec<u64> = (0..11).map(|v| balanced_encode(v, 11).unwrap().len()).collect();
        assert_eq!(lens, vec![3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4]);

        assert_eq!(balanced_encode(0, 1).unwrap(), Codeword::EMPTY);
        assert_eq!(bits(balanced_encode(3, 7).unwrap()), "100");
        assert!(balanced_encode(7, 7).is_err());
        assert_eq!(BalancedParams::new(0), Err(Error::EmptyUniverse));
    }

    #[test]
    fn balanced_n7_enumeration() {
        // Brute-force view: all 7 codewords, pairwise prefix-free, Kraft = 1.
        let words: Vec<String> = (0..7).map(|v| bits(balanced_encode(v, 7).unwrap())).collect();
        assert_eq!(words, ["00", "010", "011", "100", "101", "110", "111"]);
        for (a, wa) in words.iter().enumerate() {
            for (b, wb) in words.iter().enumerate() {
                if a != b {
                    assert!(!wb.starts_with(wa.as_str()), "{wa} prefixes {wb}");
                }
            }
        }
    }

    #[test]
    fn balanced_prefix_free_and_complete() {
        for universe in 1..=4096u64 {
            let params = BalancedParams::new(universe).unwrap();
            let lens: Vec<u64> = (0..universe).map(|v| u64::from(params.len(v))).collect();
            assert!(lens.windows(2).all(|w| w[0] <= w[1]));
            if universe >= 2 {
                assert!(params.s < 1 << (params.h - 1));
                assert!(kraft_is_complete(lens.iter().copied()), "N={universe}");
            }
            // Canonical codewords of a complete code: consecutive values are
            // consecutive integers once aligned to the deepest level.
            let mut prev: Option<u64> = None;
            for v in 0..universe {
                let cw = params.encode(v).unwrap();
                let aligned = cw.pattern << (params.h - cw.pattern_len);
                if let Some(p) = prev {
                    assert!(aligned > p);
                }
                prev = Some(aligned + (1 << (params.h - cw.pattern_len)) - 1);
            }
        }
    }

    #[test]
    fn golomb_examples() {
        assert_eq!(bits(golomb_encode(2, 1).unwrap()), "110");
        assert_eq!(bits(golomb_encode(3, 7).unwrap()), "0100");
        assert_eq!(bits(golomb_encode(10, 7).unwrap()), "10100");
        // Rice: m = 4 gives fixed 2-bit offsets.
        assert_eq!(bits(golomb_encode(6, 4).unwrap()), "1010");
    }

    #[test]
    fn golomb_roundtrip() {
        for m in 1..=64u64 {
            let g = GolombParams::new(m).unwrap();
            let mut w = BitWriter::new();
            for i in 0..=10_000u64 {
                let cw = g.encode(i);
                assert_eq!(cw.len(), g.len(i));
                cw.write_to(&mut w);
            }
            let len = w.bit_len();
            let bytes = w.flush();
            let mut r = BitReader::with_len(&bytes, len);
            for i in 0..=10_000u64 {
                assert_eq!(g.decode(&mut r), i, "m={m}");
            }
            assert_eq!(r.position(), len);
        }
    }

    #[test]
    fn golomb_expected_length_examples() {
        let v = golomb_expected_length_bounded(0.5, 2, 1).unwrap();
        assert!((v - 1.75).abs() < 1e-15);
        for p in [0.5, 0.7, 0.93] {
            let v = golomb_expected_length_bounded(p, 1, 1).unwrap();
            assert!((v - ((1.0 - p) + 2.0 * p)).abs() < 1e-15);
        }
        // Independent summation with powf and hand-built lengths.
        let g = GolombParams::new(7).unwrap();
        let mut expect = 0.0;
        for i in 0..20u64 {
            expect += 0.9f64.powf(i as f64) * 0.1 * g.len(i) as f64;
        }
        expect += 0.9f64.powf(20.0) * g.len(20) as f64;
        let v = golomb_expected_length_bounded(0.9, 20, 7).unwrap();
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn compute_m_is_minimal(p in 0.5f64..0.9999) {
            let m = compute_m(p).unwrap();
            let f = |l: u64| p.powf(l as f64) + p.powf(l as f64 + 1.0);
            prop_assert!(f(m) <= 1.0 + 1e-12);
            prop_assert!(m == 1 || f(m - 1) > 1.0 - 1e-12);
        }
    }
}
