use std::io::Read;

use flate2::read::GzDecoder;
use voxph_core::volume::GrayVolume;

use super::{DecodeError, Scalar};

const HEADER_SIZE: usize = 348;

/// Decodes a single-file NIfTI-1 image, gzipped or not.
pub fn decode_nifti(bytes: &[u8]) -> Result<GrayVolume, DecodeError> {
    if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut plain = Vec::new();
        GzDecoder::new(bytes).read_to_end(&mut plain).map_err(DecodeError::Gzip)?;
        return decode_plain(&plain);
    }
    decode_plain(bytes)
}

fn decode_plain(bytes: &[u8]) -> Result<GrayVolume, DecodeError> {
    if bytes.len() < HEADER_SIZE {
        return Err(DecodeError::Truncated {
            needed: HEADER_SIZE,
            actual: bytes.len(),
        });
    }
    let big_endian = match i32::from_le_bytes(bytes[0..4].try_into().unwrap()) {
        348 => false,
        _ if i32::from_be_bytes(bytes[0..4].try_into().unwrap()) == 348 => true,
        other => return Err(DecodeError::Header(format!("sizeof_hdr is {other}, expected 348"))),
    };
    if &bytes[344..348] != b"n+1\0" {
        return Err(DecodeError::Magic(format!(
            "{:?} (only single-file n+1 images are supported)",
            String::from_utf8_lossy(&bytes[344..347])
        )));
    }
    let i16_at = |o: usize| {
        let b = [bytes[o], bytes[o + 1]];
        if big_endian { i16::from_be_bytes(b) } else { i16::from_le_bytes(b) }
    };
    let f32_at = |o: usize| {
        let b = bytes[o..o + 4].try_into().unwrap();
        if big_endian { f32::from_be_bytes(b) } else { f32::from_le_bytes(b) }
    };

    let dim: Vec<i16> = (0..8).map(|i| i16_at(40 + 2 * i)).collect();
    let rank = dim[0];
    if !(1..=7).contains(&rank) {
        return Err(DecodeError::Header(format!("dim[0] = {rank}")));
    }
    let rank = rank as usize;
    if dim[1..=rank].iter().any(|&d| d < 1) {
        return Err(DecodeError::Header(format!("non-positive extent in {:?}", &dim[1..=rank])));
    }
    // Trailing unit extents do not add to the rank.
    let effective = (1..=rank).rev().find(|&i| dim[i] > 1).unwrap_or(1);
    if effective > 3 {
        return Err(DecodeError::Rank(effective));
    }
    let extent = |i: usize| if i <= rank { dim[i] as usize } else { 1 };
    let dims = [extent(1), extent(2), extent(3)];

    let scalar = match i16_at(70) {
        2 => Scalar::U8,
        4 => Scalar::I16,
        8 => Scalar::I32,
        16 => Scalar::F32,
        64 => Scalar::F64,
        256 => Scalar::I8,
        512 => Scalar::U16,
        768 => Scalar::U32,
        code => return Err(DecodeError::DataType(format!("NIfTI datatype code {code}"))),
    };

    let vox_offset = f32_at(108);
    if !(vox_offset.is_finite() && vox_offset >= HEADER_SIZE as f32) {
        return Err(DecodeError::Header(format!("vox_offset {vox_offset}")));
    }
    let start = vox_offset as usize;
    let count = dims[0] * dims[1] * dims[2];
    let needed = start + count * scalar.size();
    if bytes.len() < needed {
        return Err(DecodeError::PayloadSize {
            expected: needed - start.min(bytes.len()),
            actual: bytes.len().saturating_sub(start),
        });
    }
    let mut voxels = scalar.decode(&bytes[start..needed], big_endian);

    let (slope, inter) = (f32_at(112), f32_at(116));
    if slope != 0.0 && slope.is_finite() {
        let (slope, inter) = (f64::from(slope), if inter.is_finite() { f64::from(inter) } else { 0.0 });
        voxels.iter_mut().for_each(|v| *v = *v * slope + inter);
    }
    Ok(GrayVolume::new(dims, voxels)?)
}
