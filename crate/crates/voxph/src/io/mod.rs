//! Volume file formats: NIfTI-1 (`.nii`, `.nii.gz`), NPY v1.0 and raw
//! binary with a JSON sidecar.
//!
//! Every reader returns voxels x-fastest, matching
//! [`GrayVolume`](voxph_core::volume::GrayVolume). 2D inputs get `nz = 1`.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use voxph_core::volume::{GrayVolume, VolumeError};

mod nifti;
mod npy;
mod raw;

pub use nifti::decode_nifti;
pub use npy::{decode_npy, encode_npy_u16};
pub use raw::{decode_raw, RawSidecar};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("file is truncated: need {needed} bytes, have {actual}")]
    Truncated { needed: usize, actual: usize },
    #[error("bad magic: {0}")]
    Magic(String),
    #[error("unsupported data type: {0}")]
    DataType(String),
    #[error("array rank {0} is not 2 or 3")]
    Rank(usize),
    #[error("malformed header: {0}")]
    Header(String),
    #[error("payload has {actual} bytes, header implies {expected}")]
    PayloadSize { expected: usize, actual: usize },
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error("gzip: {0}")]
    Gzip(std::io::Error),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Decode { path: PathBuf, source: DecodeError },
    #[error("{}: cannot tell the format from the file name", .0.display())]
    UnknownFormat(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Nifti1,
    Npy,
    /// Raw bytes described by `<path>.json`.
    Raw,
    #[default]
    Auto,
}

impl Format {
    /// Guesses from the extension: `.nii`/`.nii.gz`, `.npy`, otherwise raw if
    /// a sidecar exists.
    pub fn detect(path: &Path) -> Option<Format> {
        let name = path.file_name()?.to_string_lossy().to_ascii_lowercase();
        if name.ends_with(".nii") || name.ends_with(".nii.gz") {
            Some(Format::Nifti1)
        } else if name.ends_with(".npy") {
            Some(Format::Npy)
        } else if raw::sidecar_path(path).exists() {
            Some(Format::Raw)
        } else {
            None
        }
    }
}

pub fn load_volume(path: &Path, format: Format) -> Result<GrayVolume, LoadError> {
    let format = match format {
        Format::Auto => Format::detect(path).ok_or_else(|| LoadError::UnknownFormat(path.to_owned()))?,
        f => f,
    };
    let read = |p: &Path| {
        fs::read(p).map_err(|source| LoadError::Read {
            path: p.to_owned(),
            source,
        })
    };
    let bytes = read(path)?;
    let decoded = match format {
        Format::Nifti1 => decode_nifti(&bytes),
        Format::Npy => decode_npy(&bytes),
        Format::Raw => {
            let sidecar_path = raw::sidecar_path(path);
            let text = read(&sidecar_path)?;
            match serde_json::from_slice::<RawSidecar>(&text) {
                Ok(sidecar) => decode_raw(&bytes, &sidecar),
                Err(e) => {
                    return Err(LoadError::Decode {
                        path: sidecar_path,
                        source: DecodeError::Header(e.to_string()),
                    })
                }
            }
        }
        Format::Auto => unreachable!(),
    };
    decoded.map_err(|source| LoadError::Decode {
        path: path.to_owned(),
        source,
    })
}

/// Numeric element types shared by the NPY and raw readers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Scalar {
    U8,
    I8,
    U16,
    I16,
    U32,
    I32,
    U64,
    I64,
    F32,
    F64,
}

impl Scalar {
    pub(crate) fn size(self) -> usize {
        match self {
            Scalar::U8 | Scalar::I8 => 1,
            Scalar::U16 | Scalar::I16 => 2,
            Scalar::U32 | Scalar::I32 | Scalar::F32 => 4,
            Scalar::U64 | Scalar::I64 | Scalar::F64 => 8,
        }
    }

    /// Decodes `bytes` (a whole number of elements) to f64.
    pub(crate) fn decode(self, bytes: &[u8], big_endian: bool) -> Vec<f64> {
        macro_rules! conv {
            ($t:ty) => {
                bytes
                    .chunks_exact(std::mem::size_of::<$t>())
                    .map(|c| {
                        let arr = c.try_into().unwrap();
                        (if big_endian { <$t>::from_be_bytes(arr) } else { <$t>::from_le_bytes(arr) }) as f64
                    })
                    .collect()
            };
        }
        match self {
            Scalar::U8 => conv!(u8),
            Scalar::I8 => conv!(i8),
            Scalar::U16 => conv!(u16),
            Scalar::I16 => conv!(i16),
            Scalar::U32 => conv!(u32),
            Scalar::I32 => conv!(i32),
            Scalar::U64 => conv!(u64),
            Scalar::I64 => conv!(i64),
            Scalar::F32 => conv!(f32),
            Scalar::F64 => conv!(f64),
        }
    }
}
