use voxph_core::volume::GrayVolume;
use voxph_core::Dims;

use super::{DecodeError, Scalar};

const MAGIC: &[u8] = b"\x93NUMPY";

/// Decodes an NPY file (format 1.x or 2.x header) holding a 2D or 3D numeric
/// array. Axis 0 is x.
pub fn decode_npy(bytes: &[u8]) -> Result<GrayVolume, DecodeError> {
    if !bytes.starts_with(MAGIC) {
        return Err(DecodeError::Magic("missing \\x93NUMPY prefix".into()));
    }
    let truncated = |needed| DecodeError::Truncated {
        needed,
        actual: bytes.len(),
    };
    if bytes.len() < 10 {
        return Err(truncated(10));
    }
    let (header_start, header_len) = match bytes[6] {
        1 => (10, usize::from(u16::from_le_bytes([bytes[8], bytes[9]]))),
        2 | 3 => {
            if bytes.len() < 12 {
                return Err(truncated(12));
            }
            (12, u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize)
        }
        v => return Err(DecodeError::Header(format!("unsupported NPY version {v}"))),
    };
    let data_start = header_start + header_len;
    if bytes.len() < data_start {
        return Err(truncated(data_start));
    }
    let header = std::str::from_utf8(&bytes[header_start..data_start])
        .map_err(|_| DecodeError::Header("header is not UTF-8".into()))?;
    let descr = dict_value(header, "descr")?;
    let fortran = match dict_value(header, "fortran_order")?.as_str() {
        "True" => true,
        "False" => false,
        other => return Err(DecodeError::Header(format!("fortran_order = {other}"))),
    };
    let shape = parse_shape(&dict_value(header, "shape")?)?;
    let (scalar, big_endian) = parse_descr(&descr)?;

    let dims: Dims = match shape.as_slice() {
        [a, b] => [*a, *b, 1],
        [a, b, c] => [*a, *b, *c],
        other => return Err(DecodeError::Rank(other.len())),
    };
    let count = dims[0] * dims[1] * dims[2];
    let payload = &bytes[data_start..];
    let expected = count * scalar.size();
    if payload.len() < expected {
        return Err(DecodeError::PayloadSize {
            expected,
            actual: payload.len(),
        });
    }
    let values = scalar.decode(&payload[..expected], big_endian);
    let voxels = if fortran {
        values
    } else {
        // C order: the last axis is fastest; reorder to x-fastest.
        let [nx, ny, nz] = dims;
        let mut out = vec![0.0; count];
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    out[x + nx * (y + ny * z)] = values[(x * ny + y) * nz + z];
                }
            }
        }
        out
    };
    Ok(GrayVolume::new(dims, voxels)?)
}

/// NPY v1.0 bytes of a little-endian `u16` array in Fortran order, shape
/// `(nx, ny, nz)`, from x-fastest `data`.
pub fn encode_npy_u16(dims: Dims, data: &[u16]) -> Vec<u8> {
    assert_eq!(data.len(), dims.iter().product::<usize>(), "data length must match dims");
    let mut header = format!(
        "{{'descr': '<u2', 'fortran_order': True, 'shape': ({}, {}, {}), }}",
        dims[0], dims[1], dims[2]
    );
    // Pad so the data starts on a 64-byte boundary; the header ends in '\n'.
    let unpadded = MAGIC.len() + 4 + header.len() + 1;
    header.push_str(&" ".repeat((64 - unpadded % 64) % 64));
    header.push('\n');

    let mut out = Vec::with_capacity(MAGIC.len() + 4 + header.len() + 2 * data.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(header.len() as u16).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    for v in data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Raw text of `key`'s value in the header's Python dict literal.
fn dict_value(header: &str, key: &str) -> Result<String, DecodeError> {
    let missing = || DecodeError::Header(format!("no '{key}' in header"));
    let quoted = format!("'{key}'");
    let at = header.find(&quoted).ok_or_else(missing)? + quoted.len();
    let rest = header[at..].trim_start();
    let rest = rest.strip_prefix(':').ok_or_else(missing)?.trim_start();
    let end = if let Some(inner) = rest.strip_prefix('\'') {
        return inner
            .find('\'')
            .map(|e| inner[..e].to_string())
            .ok_or_else(|| DecodeError::Header(format!("unterminated '{key}'")));
    } else if rest.starts_with('(') {
        rest.find(')').map(|e| e + 1)
    } else {
        rest.find([',', '}'])
    };
    let end = end.ok_or_else(|| DecodeError::Header(format!("unterminated '{key}'")))?;
    Ok(rest[..end].trim().to_string())
}

fn parse_shape(text: &str) -> Result<Vec<usize>, DecodeError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| DecodeError::Header(format!("shape {text}")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim_end_matches('L')
                .parse::<usize>()
                .map_err(|_| DecodeError::Header(format!("shape {text}")))
        })
        .collect()
}

fn parse_descr(descr: &str) -> Result<(Scalar, bool), DecodeError> {
    let unsupported = || DecodeError::DataType(format!("NPY descr '{descr}'"));
    let (order, code) = descr.split_at(1.min(descr.len()));
    let big_endian = match order {
        "<" | "|" | "=" => false,
        ">" => true,
        _ => return Err(unsupported()),
    };
    let scalar = match code {
        "u1" => Scalar::U8,
        "i1" => Scalar::I8,
        "u2" => Scalar::U16,
        "i2" => Scalar::I16,
        "u4" => Scalar::U32,
        "i4" => Scalar::I32,
        "u8" => Scalar::U64,
        "i8" => Scalar::I64,
        "f4" => Scalar::F32,
        "f8" => Scalar::F64,
        _ => return Err(unsupported()),
    };
    Ok((scalar, big_endian))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_fields() {
        let h = "{'descr': '<f8', 'fortran_order': False, 'shape': (5, 5), }";
        assert_eq!(dict_value(h, "descr").unwrap(), "<f8");
        assert_eq!(dict_value(h, "fortran_order").unwrap(), "False");
        assert_eq!(parse_shape(&dict_value(h, "shape").unwrap()).unwrap(), vec![5, 5]);
        assert_eq!(parse_shape("(7,)").unwrap(), vec![7]);
    }

    #[test]
    fn encoded_header_is_aligned() {
        let bytes = encode_npy_u16([3, 2, 1], &[1, 2, 3, 4, 5, 6]);
        let header_len = usize::from(u16::from_le_bytes([bytes[8], bytes[9]]));
        assert_eq!((10 + header_len) % 64, 0);
        assert_eq!(bytes[10 + header_len - 1], b'\n');
    }

    #[test]
    fn round_trip_keeps_layout() {
        let data: Vec<u16> = (1..=24).collect();
        let v = decode_npy(&encode_npy_u16([2, 3, 4], &data)).unwrap();
        assert_eq!(v.dims(), [2, 3, 4]);
        assert_eq!(v.get(1, 2, 3), 24.0);
        assert_eq!(v.get(1, 0, 0), 2.0);
    }

    fn patch(bytes: &[u8], from: &str, to: &str) -> Vec<u8> {
        assert_eq!(from.len(), to.len());
        let at = bytes.windows(from.len()).position(|w| w == from.as_bytes()).unwrap();
        let mut out = bytes.to_vec();
        out[at..at + to.len()].copy_from_slice(to.as_bytes());
        out
    }

    #[test]
    fn rejects_rank_one_and_bad_dtype() {
        let bytes = encode_npy_u16([3, 1, 1], &[1, 2, 3]);
        let rank_one = patch(&bytes, "(3, 1, 1)", "(3,)     ");
        assert!(matches!(decode_npy(&rank_one), Err(DecodeError::Rank(1))));
        let complex = patch(&bytes, "<u2", "<c8");
        assert!(matches!(decode_npy(&complex), Err(DecodeError::DataType(_))));
    }
}
