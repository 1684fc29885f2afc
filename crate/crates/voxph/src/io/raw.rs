use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use voxph_core::volume::GrayVolume;
use voxph_core::Dims;

use super::{DecodeError, Scalar};

/// Contents of `<volume>.json` next to a raw volume. Voxels are x-fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSidecar {
    pub dims: Dims,
    /// `uint8`, `int8`, `uint16`, `int16`, `uint32`, `int32`, `float32` or
    /// `float64`.
    pub dtype: String,
    #[serde(default = "little")]
    pub byte_order: String,
}

fn little() -> String {
    "little".into()
}

pub(crate) fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn decode_raw(bytes: &[u8], sidecar: &RawSidecar) -> Result<GrayVolume, DecodeError> {
    let scalar = match sidecar.dtype.as_str() {
        "uint8" => Scalar::U8,
        "int8" => Scalar::I8,
        "uint16" => Scalar::U16,
        "int16" => Scalar::I16,
        "uint32" => Scalar::U32,
        "int32" => Scalar::I32,
        "float32" => Scalar::F32,
        "float64" => Scalar::F64,
        other => return Err(DecodeError::DataType(format!("raw dtype '{other}'"))),
    };
    let big_endian = match sidecar.byte_order.as_str() {
        "little" => false,
        "big" => true,
        other => return Err(DecodeError::Header(format!("byte_order '{other}'"))),
    };
    let expected = sidecar.dims.iter().product::<usize>() * scalar.size();
    if bytes.len() != expected {
        return Err(DecodeError::PayloadSize {
            expected,
            actual: bytes.len(),
        });
    }
    Ok(GrayVolume::new(sidecar.dims, scalar.decode(bytes, big_endian))?)
}
