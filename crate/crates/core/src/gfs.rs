//! Reader and writer for the little-endian "gridded field stack" (GFS) container.
//!
//! Layout: magic `GFS1`, then `u32` field count, height, width and channel
//! count, then one `i64` date (days since 1970-01-01) per record, then the
//! `f32` payload, row-major and channel-major within a record.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{date_from_days, days_since_epoch, FieldStack, ScalarField};

pub const MAGIC: [u8; 4] = *b"GFS1";
const HEADER_LEN: usize = 20;

pub fn encode(stack: &FieldStack) -> Vec<u8> {
    let cells = stack.height() * stack.width();
    let mut out = Vec::with_capacity(HEADER_LEN + stack.len() * 8 + stack.fields().len() * cells * 4);
    out.extend_from_slice(&MAGIC);
    for v in [stack.len(), stack.height(), stack.width(), stack.channels()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for &d in stack.dates() {
        out.extend_from_slice(&days_since_epoch(d).to_le_bytes());
    }
    for f in stack.fields() {
        for &v in f.values() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<FieldStack> {
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let word = |i: usize| {
        let start = 4 + 4 * i;
        u32::from_le_bytes(bytes[start..start + 4].try_into().expect("4 bytes")) as usize
    };
    let (n_fields, height, width, channels) = (word(0), word(1), word(2), word(3));
    let cells = height.checked_mul(width).ok_or(Error::Truncated {
        expected: usize::MAX,
        found: bytes.len(),
    })?;
    let expected = n_fields
        .checked_mul(channels)
        .and_then(|n| n.checked_mul(cells))
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(HEADER_LEN + n_fields * 8))
        .ok_or(Error::Truncated {
            expected: usize::MAX,
            found: bytes.len(),
        })?;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: bytes.len(),
        });
    }

    let mut offset = HEADER_LEN;
    let mut dates = Vec::with_capacity(n_fields);
    for _ in 0..n_fields {
        let days = i64::from_le_bytes(bytes[offset..offset + 8].try_into().expect("8 bytes"));
        offset += 8;
        dates.push(date_from_days(days).ok_or(Error::Truncated {
            expected,
            found: bytes.len(),
        })?);
    }
    let mut fields = Vec::with_capacity(n_fields * channels);
    for _ in 0..n_fields * channels {
        let values = bytes[offset..offset + cells * 4]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
            .collect();
        offset += cells * 4;
        fields.push(ScalarField::new(height, width, values)?);
    }
    FieldStack::new(height, width, channels, dates, fields)
}

pub fn write(mut writer: impl Write, stack: &FieldStack) -> Result<()> {
    writer.write_all(&encode(stack))?;
    Ok(())
}

pub fn read(mut reader: impl Read) -> Result<FieldStack> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    decode(&bytes)
}

pub fn write_file(path: impl AsRef<Path>, stack: &FieldStack) -> Result<()> {
    std::fs::write(path, encode(stack))?;
    Ok(())
}

pub fn read_file(path: impl AsRef<Path>) -> Result<FieldStack> {
    decode(&std::fs::read(path)?)
}
