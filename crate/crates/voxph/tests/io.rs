use std::fs;
use std::io::Write;

use flate2::write::GzEncoder;
use flate2::Compression;
use voxph::io::{load_volume, Format, LoadError};

/// Minimal single-file NIfTI-1 image written field by field from the header
/// layout: sizeof_hdr @0, dim @40, datatype @70, bitpix @72, vox_offset
/// @108, scl_slope @112, scl_inter @116, magic @344.
fn nifti_bytes(dims: &[i16], datatype: i16, bitpix: i16, slope: f32, inter: f32, payload: &[u8]) -> Vec<u8> {
    let mut h = vec![0u8; 352];
    h[0..4].copy_from_slice(&348i32.to_le_bytes());
    h[40..42].copy_from_slice(&(dims.len() as i16).to_le_bytes());
    for (i, d) in dims.iter().enumerate() {
        h[42 + 2 * i..44 + 2 * i].copy_from_slice(&d.to_le_bytes());
    }
    h[70..72].copy_from_slice(&datatype.to_le_bytes());
    h[72..74].copy_from_slice(&bitpix.to_le_bytes());
    h[108..112].copy_from_slice(&352f32.to_le_bytes());
    h[112..116].copy_from_slice(&slope.to_le_bytes());
    h[116..120].copy_from_slice(&inter.to_le_bytes());
    h[344..348].copy_from_slice(b"n+1\0");
    h.extend_from_slice(payload);
    h
}

fn int16_payload(values: &[i16]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

#[test]
fn nifti_int16_applies_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = nifti_bytes(&[2, 2, 1], 4, 16, 2.0, 1.0, &int16_payload(&[10, 0, -3, 7]));
    let plain = dir.path().join("a.nii");
    fs::write(&plain, &bytes).unwrap();
    let v = load_volume(&plain, Format::Auto).unwrap();
    assert_eq!(v.dims(), [2, 2, 1]);
    // 10 * 2 + 1
    assert_eq!(v.get(0, 0, 0), 21.0);
    assert_eq!(v.voxels(), &[21.0, 1.0, -5.0, 15.0]);
    assert_eq!(v.source_range(), (-5.0, 21.0));

    let gz = dir.path().join("a.nii.gz");
    let mut enc = GzEncoder::new(Vec::new(), Compression::default());
    enc.write_all(&bytes).unwrap();
    fs::write(&gz, enc.finish().unwrap()).unwrap();
    assert_eq!(load_volume(&gz, Format::Auto).unwrap(), v);
}

#[test]
fn nifti_zero_slope_means_unscaled() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u8.nii");
    fs::write(&path, nifti_bytes(&[2, 1, 1], 2, 8, 0.0, 5.0, &[3, 250])).unwrap();
    assert_eq!(load_volume(&path, Format::Nifti1).unwrap().voxels(), &[3.0, 250.0]);
}

#[test]
fn nifti_errors() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.nii");
    fs::write(&short, nifti_bytes(&[4, 4, 4], 4, 16, 1.0, 0.0, &[0; 10])).unwrap();
    assert!(matches!(load_volume(&short, Format::Auto), Err(LoadError::Decode { .. })));

    let complex = dir.path().join("c.nii");
    fs::write(&complex, nifti_bytes(&[1, 1, 1], 32, 64, 1.0, 0.0, &[0; 8])).unwrap();
    let err = load_volume(&complex, Format::Auto).unwrap_err().to_string();
    assert!(err.contains("datatype code 32"), "{err}");

    let four_d = dir.path().join("t.nii");
    fs::write(&four_d, nifti_bytes(&[1, 1, 1, 2], 2, 8, 1.0, 0.0, &[0; 2])).unwrap();
    assert!(load_volume(&four_d, Format::Auto).unwrap_err().to_string().contains("rank 4"));

    assert!(matches!(
        load_volume(&dir.path().join("missing.nii"), Format::Auto),
        Err(LoadError::Read { .. })
    ));
}

/// NPY v1.0 bytes written by hand, header padded to 64 bytes.
fn npy_bytes(descr: &str, fortran: bool, shape: &str, payload: &[u8]) -> Vec<u8> {
    let order = if fortran { "True" } else { "False" };
    let mut header = format!("{{'descr': '{descr}', 'fortran_order': {order}, 'shape': {shape}, }}");
    while (10 + header.len() + 1) % 64 != 0 {
        header.push(' ');
    }
    header.push('\n');
    let mut out = b"\x93NUMPY\x01\x00".to_vec();
    out.extend_from_slice(&(header.len() as u16).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(payload);
    out
}

#[test]
fn npy_two_dimensional_c_order() {
    let dir = tempfile::tempdir().unwrap();
    // a[i][j] = 10 i + j, row-major
    let values: Vec<f64> = (0..5).flat_map(|i| (0..5).map(move |j| (10 * i + j) as f64)).collect();
    let payload: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    let path = dir.path().join("fig.npy");
    fs::write(&path, npy_bytes("<f8", false, "(5, 5)", &payload)).unwrap();
    let v = load_volume(&path, Format::Auto).unwrap();
    assert_eq!(v.dims(), [5, 5, 1]);
    // axis 0 is x
    assert_eq!(v.get(3, 1, 0), 31.0);
    assert_eq!(v.get(1, 3, 0), 13.0);
}

#[test]
fn npy_orders_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (nx, ny, nz) = (2usize, 3usize, 4usize);
    let value = |x: usize, y: usize, z: usize| (100 * x + 10 * y + z) as i16;
    let mut c = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                c.extend_from_slice(&value(x, y, z).to_be_bytes());
            }
        }
    }
    let mut f = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                f.extend_from_slice(&value(x, y, z).to_be_bytes());
            }
        }
    }
    let pc = dir.path().join("c.npy");
    let pf = dir.path().join("f.npy");
    fs::write(&pc, npy_bytes(">i2", false, "(2, 3, 4)", &c)).unwrap();
    fs::write(&pf, npy_bytes(">i2", true, "(2, 3, 4)", &f)).unwrap();
    let a = load_volume(&pc, Format::Npy).unwrap();
    assert_eq!(a, load_volume(&pf, Format::Npy).unwrap());
    assert_eq!(a.get(1, 2, 3), 123.0);
}

#[test]
fn npy_writer_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data: Vec<u16> = (0..60).map(|i| (i * 7 % 100) as u16 + 1).collect();
    let path = dir.path().join("w.npy");
    fs::write(&path, voxph::io::encode_npy_u16([3, 4, 5], &data)).unwrap();
    let v = load_volume(&path, Format::Auto).unwrap();
    assert_eq!(v.dims(), [3, 4, 5]);
    assert!(v.voxels().iter().zip(&data).all(|(&a, &b)| a == f64::from(b)));
}

#[test]
fn raw_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("const.raw");
    fs::write(&path, [7u8; 64]).unwrap();
    fs::write(
        dir.path().join("const.raw.json"),
        r#"{"dims": [4, 4, 4], "dtype": "uint8", "byte_order": "little"}"#,
    )
    .unwrap();
    let v = load_volume(&path, Format::Auto).unwrap();
    assert_eq!(v.dims(), [4, 4, 4]);
    assert_eq!(v.source_range(), (7.0, 7.0));

    let orphan = dir.path().join("orphan.dat");
    fs::write(&orphan, [0u8; 4]).unwrap();
    assert!(matches!(load_volume(&orphan, Format::Auto), Err(LoadError::UnknownFormat(_))));
}
