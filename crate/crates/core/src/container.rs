//! FGC1 container: a fixed 30-byte little-endian header followed by an
//! MSB-first payload of concatenated codewords, zero-padded to a byte.
//!
//! ```text
//! offset size field
//!      0    4 magic "FGC1"
//!      4    1 version (1)
//!      5    1 mode (0 = constant bound n, 1 = per-value bounds from a sidecar)
//!      6    4 m
//!     10    4 m2
//!     14    8 n (0 in mode 1)
//!     22    8 count
//!     30    . payload
//! ```

use thiserror::Error;

use crate::bitio::{BitReader, BitWriter};
use crate::bounded::{validate_params, CodeLayout};

pub const MAGIC: [u8; 4] = *b"FGC1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 30;

/// Largest count accepted for a constant-bound container with n = 0, where
/// codewords are empty and the payload cannot bound the count.
const MAX_EMPTY_COUNT: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContainerError {
    #[error("container is {0} bytes, shorter than the {HEADER_LEN}-byte header")]
    Truncated(usize),
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown mode {0}")]
    UnknownMode(u8),
    #[error("invalid code parameters m={m}, m2={m2}")]
    InvalidParams { m: u64, m2: u64 },
    #[error("sidecar-mode header carries n={0}, expected 0")]
    NonZeroBound(u64),
    #[error("value {value} at index {index} exceeds bound {bound}")]
    ValueOutOfRange { index: usize, value: u64, bound: u64 },
    #[error("{values} values but {bounds} bounds")]
    BoundsMismatch { values: u64, bounds: u64 },
    #[error("constant-bound container does not take sidecar bounds")]
    UnexpectedBounds,
    #[error("sidecar-mode container needs bounds")]
    MissingBounds,
    #[error("payload exhausted after {decoded} of {count} values")]
    PayloadExhausted { decoded: u64, count: u64 },
    #[error("{0} trailing payload bytes after the last codeword")]
    TrailingBytes(usize),
    #[error("non-zero padding bits after the last codeword")]
    NonZeroPadding,
    #[error("implausible count {0}")]
    ImplausibleCount(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Constant,
    Sidecar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub mode: Mode,
    pub m: u32,
    pub m2: u32,
    pub n: u64,
    pub count: u64,
}

impl Header {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = match self.mode {
            Mode::Constant => 0,
            Mode::Sidecar => 1,
        };
        out[6..10].copy_from_slice(&self.m.to_le_bytes());
        out[10..14].copy_from_slice(&self.m2.to_le_bytes());
        out[14..22].copy_from_slice(&self.n.to_le_bytes());
        out[22..30].copy_from_slice(&self.count.to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, ContainerError> {
        if bytes.len() < HEADER_LEN {
            return Err(ContainerError::Truncated(bytes.len()));
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(ContainerError::BadMagic(magic));
        }
        if bytes[4] != VERSION {
            return Err(ContainerError::UnsupportedVersion(bytes[4]));
        }
        let mode = match bytes[5] {
            0 => Mode::Constant,
            1 => Mode::Sidecar,
            other => return Err(ContainerError::UnknownMode(other)),
        };
        let m = u32::from_le_bytes(bytes[6..10].try_into().unwrap());
        let m2 = u32::from_le_bytes(bytes[10..14].try_into().unwrap());
        let n = u64::from_le_bytes(bytes[14..22].try_into().unwrap());
        let count = u64::from_le_bytes(bytes[22..30].try_into().unwrap());
        check_params(u64::from(m), u64::from(m2))?;
        if mode == Mode::Sidecar && n != 0 {
            return Err(ContainerError::NonZeroBound(n));
        }
        Ok(Self {
            mode,
            m,
            m2,
            n,
            count,
        })
    }
}

fn check_params(m: u64, m2: u64) -> Result<(), ContainerError> {
    validate_params(m, m2).map_err(|_| ContainerError::InvalidParams { m, m2 })
}

fn narrow_params(m: u64, m2: u64) -> Result<(u32, u32), ContainerError> {
    check_params(m, m2)?;
    match (u32::try_from(m), u32::try_from(m2)) {
        (Ok(m), Ok(m2)) => Ok((m, m2)),
        _ => Err(ContainerError::InvalidParams { m, m2 }),
    }
}

fn layout(m: u64, m2: u64, n: u64) -> CodeLayout {
    CodeLayout::new(m, m2, n).expect("parameters were validated")
}

/// Encodes `values`, all bounded by `n`.
pub fn encode_constant(m: u64, m2: u64, n: u64, values: &[u64]) -> Result<Vec<u8>, ContainerError> {
    let (m32, m2_32) = narrow_params(m, m2)?;
    let layout = layout(m, m2, n);
    let mut w = BitWriter::new();
    for (index, &value) in values.iter().enumerate() {
        if value > n {
            return Err(ContainerError::ValueOutOfRange { index, value, bound: n });
        }
        layout.encode_to(&mut w, value).expect("value checked");
    }
    let header = Header {
        mode: Mode::Constant,
        m: m32,
        m2: m2_32,
        n,
        count: values.len() as u64,
    };
    Ok(assemble(header, w))
}

/// Encodes `values[k]` with bound `bounds[k]`.
pub fn encode_sidecar(m: u64, m2: u64, values: &[u64], bounds: &[u64]) -> Result<Vec<u8>, ContainerError> {
    let (m32, m2_32) = narrow_params(m, m2)?;
    if values.len() != bounds.len() {
        return Err(ContainerError::BoundsMismatch {
            values: values.len() as u64,
            bounds: bounds.len() as u64,
        });
    }
    let mut w = BitWriter::new();
    for (index, (&value, &bound)) in values.iter().zip(bounds).enumerate() {
        if value > bound {
            return Err(ContainerError::ValueOutOfRange { index, value, bound });
        }
        layout(m, m2, bound).encode_to(&mut w, value).expect("value checked");
    }
    let header = Header {
        mode: Mode::Sidecar,
        m: m32,
        m2: m2_32,
        n: 0,
        count: values.len() as u64,
    };
    Ok(assemble(header, w))
}

fn assemble(header: Header, w: BitWriter) -> Vec<u8> {
    let payload = w.flush();
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(&header.to_bytes());
    out.extend_from_slice(&payload);
    out
}

/// Decodes a container. `bounds` is required for sidecar mode and rejected
/// otherwise.
pub fn decode(bytes: &[u8], bounds: Option<&[u64]>) -> Result<(Header, Vec<u64>), ContainerError> {
    let header = Header::parse(bytes)?;
    let payload = &bytes[HEADER_LEN..];
    let payload_bits = payload.len() as u64 * 8;
    let (m, m2) = (u64::from(header.m), u64::from(header.m2));
    let count = header.count;

    let per_value: Box<dyn Fn(usize) -> CodeLayout + '_> = match (header.mode, bounds) {
        (Mode::Constant, Some(_)) => return Err(ContainerError::UnexpectedBounds),
        (Mode::Sidecar, None) => return Err(ContainerError::MissingBounds),
        (Mode::Constant, None) => {
            let fixed = layout(m, m2, header.n);
            let plausible = if header.n == 0 {
                count <= MAX_EMPTY_COUNT
            } else {
                count <= payload_bits
            };
            if !plausible {
                return Err(ContainerError::ImplausibleCount(count));
            }
            Box::new(move |_| fixed)
        }
        (Mode::Sidecar, Some(b)) => {
            if b.len() as u64 != count {
                return Err(ContainerError::BoundsMismatch {
                    values: count,
                    bounds: b.len() as u64,
                });
            }
            Box::new(move |k| layout(m, m2, b[k]))
        }
    };

    let mut r = BitReader::new(payload);
    let mut values = Vec::with_capacity(count as usize);
    for k in 0..count as usize {
        values.push(per_value(k).decode(&mut r));
        if r.position() > payload_bits {
            return Err(ContainerError::PayloadExhausted {
                decoded: k as u64,
                count,
            });
        }
    }
    let used_bytes = r.position().div_ceil(8) as usize;
    if used_bytes < payload.len() {
        return Err(ContainerError::TrailingBytes(payload.len() - used_bytes));
    }
    if r.peek_bits((8 - r.position() % 8) as u32 % 8) != 0 {
        return Err(ContainerError::NonZeroPadding);
    }
    Ok((header, values))
}
