//! Grayscale volumes and their quantization onto the threshold grid.
//!
//! Voxels are stored with `x` varying fastest: the linear index of `(x, y, z)`
//! is `x + nx * (y + ny * z)`. This matches the on-disk order of NIfTI and of
//! Fortran-ordered NPY arrays.

use alloc::vec::Vec;
use core::num::NonZeroUsize;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Bin, Dims};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolumeError {
    #[error("volume extents must all be >= 1, got {0:?}")]
    EmptyExtent(Dims),
    #[error("voxel count {actual} does not match extents {dims:?} ({expected} voxels)")]
    VoxelCount {
        dims: Dims,
        expected: usize,
        actual: usize,
    },
    #[error("voxel {index} is not finite")]
    NonFinite { index: usize },
    #[error("bin {bin} at voxel {index} is outside 1..={levels}")]
    BinOutOfRange { index: usize, bin: Bin, levels: Bin },
    #[error("number of levels must be >= 2, got {0}")]
    TooFewLevels(Bin),
    #[error("degenerate intensity range [{lo}, {hi}]")]
    DegenerateRange { lo: f64, hi: f64 },
}

pub(crate) fn voxel_count(dims: Dims) -> Result<usize, VolumeError> {
    if dims.iter().any(|&d| d == 0) {
        return Err(VolumeError::EmptyExtent(dims));
    }
    Ok(dims[0] * dims[1] * dims[2])
}

/// Raw scalar volume with the intensity range actually present in it.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayVolume {
    dims: Dims,
    voxels: Vec<f64>,
    range: (f64, f64),
}

impl GrayVolume {
    pub fn new(dims: Dims, voxels: Vec<f64>) -> Result<Self, VolumeError> {
        let expected = voxel_count(dims)?;
        if voxels.len() != expected {
            return Err(VolumeError::VoxelCount {
                dims,
                expected,
                actual: voxels.len(),
            });
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (index, &v) in voxels.iter().enumerate() {
            if !v.is_finite() {
                return Err(VolumeError::NonFinite { index });
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok(Self {
            dims,
            voxels,
            range: (lo, hi),
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn voxels(&self) -> &[f64] {
        &self.voxels
    }

    /// `(min, max)` over all voxels.
    pub fn source_range(&self) -> (f64, f64) {
        self.range
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.voxels[x + self.dims[0] * (y + self.dims[1] * z)]
    }

    pub fn into_voxels(self) -> Vec<f64> {
        self.voxels
    }
}

/// Volume whose voxels are threshold bins in `1..=levels`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantizedVolume {
    dims: Dims,
    bins: Vec<Bin>,
    levels: Bin,
}

impl QuantizedVolume {
    pub fn new(dims: Dims, bins: Vec<Bin>, levels: Bin) -> Result<Self, VolumeError> {
        if levels < 2 {
            return Err(VolumeError::TooFewLevels(levels));
        }
        let expected = voxel_count(dims)?;
        if bins.len() != expected {
            return Err(VolumeError::VoxelCount {
                dims,
                expected,
                actual: bins.len(),
            });
        }
        if let Some((index, &bin)) = bins
            .iter()
            .enumerate()
            .find(|(_, &b)| b == 0 || b > levels)
        {
            return Err(VolumeError::BinOutOfRange { index, bin, levels });
        }
        Ok(Self { dims, bins, levels })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn levels(&self) -> Bin {
        self.levels
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> Bin {
        self.bins[x + self.dims[0] * (y + self.dims[1] * z)]
    }

    /// Reflects every bin through `b -> N + 1 - b`.
    pub fn reflect(&self) -> Self {
        let top = self.levels + 1;
        Self {
            dims: self.dims,
            bins: self.bins.iter().map(|&b| top - b).collect(),
            levels: self.levels,
        }
    }

    /// Intensities equal to the bins, for writing a quantized volume to disk.
    pub fn to_gray(&self) -> GrayVolume {
        let voxels = self.bins.iter().map(|&b| f64::from(b)).collect();
        GrayVolume::new(self.dims, voxels).expect("quantized volume is always valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    #[default]
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Keeps `min(count, extent)` contiguous slices centered on the axis midpoint.
///
/// When the number of discarded slices is odd, the extra one is taken from
/// the high-index side.
pub fn select_middle_slices(vol: &GrayVolume, count: NonZeroUsize, axis: Axis) -> GrayVolume {
    let a = axis.index();
    let extent = vol.dims[a];
    let keep = count.get().min(extent);
    if keep == extent {
        return vol.clone();
    }
    let start = (extent - keep) / 2;
    let mut dims = vol.dims;
    dims[a] = keep;
    let [nx, ny, _] = vol.dims;
    let mut voxels = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let mut src = [x, y, z];
                src[a] += start;
                voxels.push(vol.voxels[src[0] + nx * (src[1] + ny * src[2])]);
            }
        }
    }
    GrayVolume::new(dims, voxels).expect("sub-volume of a valid volume")
}

/// How intensities are mapped onto the threshold grid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeMode {
    /// Clamp to `[lo, hi]`. Integral bounds use a bin width of
    /// `(hi - lo + 1) / N`, so 8-bit data in `[0, 255]` with `N = 100` maps
    /// through `1 + floor(v * 100 / 256)`.
    Fixed { lo: f64, hi: f64 },
    /// Per-volume min/max; the minimum lands in bin 1 and the maximum in bin
    /// `N`. A constant volume maps entirely to bin 1.
    #[default]
    MinMax,
}

pub fn quantize(vol: &GrayVolume, levels: Bin, mode: RangeMode) -> Result<QuantizedVolume, VolumeError> {
    if levels < 2 {
        return Err(VolumeError::TooFewLevels(levels));
    }
    let n = f64::from(levels);
    let (lo, width, clamp_top) = match mode {
        RangeMode::Fixed { lo, hi } => {
            if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
                return Err(VolumeError::DegenerateRange { lo, hi });
            }
            if is_integral(lo) && is_integral(hi) {
                (lo, hi - lo + 1.0, hi)
            } else {
                (lo, hi - lo, hi)
            }
        }
        RangeMode::MinMax => {
            let (lo, hi) = vol.range;
            if hi <= lo {
                let bins = alloc::vec![1; vol.voxels.len()];
                return QuantizedVolume::new(vol.dims, bins, levels);
            }
            (lo, hi - lo, hi)
        }
    };
    let top = levels - 1;
    let bins = vol
        .voxels
        .iter()
        .map(|&v| {
            let v = v.clamp(lo, clamp_top);
            let idx = libm::floor((v - lo) * n / width);
            // idx is in [0, N]; the top value lands on N only in the
            // non-integral form and belongs to the last bin.
            1 + (idx as Bin).min(top)
        })
        .collect();
    QuantizedVolume::new(vol.dims, bins, levels)
}

fn is_integral(v: f64) -> bool {
    libm::floor(v) == v
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn nz(n: usize) -> NonZeroUsize {
        NonZeroUsize::new(n).unwrap()
    }

    fn ramp(dims: Dims) -> GrayVolume {
        let n = dims[0] * dims[1] * dims[2];
        GrayVolume::new(dims, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn gray_volume_rejects_bad_input() {
        assert_eq!(
            GrayVolume::new([0, 1, 1], vec![]),
            Err(VolumeError::EmptyExtent([0, 1, 1]))
        );
        assert!(matches!(
            GrayVolume::new([2, 2, 1], vec![1.0; 3]),
            Err(VolumeError::VoxelCount { expected: 4, actual: 3, .. })
        ));
        assert_eq!(
            GrayVolume::new([2, 1, 1], vec![1.0, f64::NAN]),
            Err(VolumeError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn constant_volume_range() {
        let v = GrayVolume::new([4, 4, 4], vec![7.0; 64]).unwrap();
        assert_eq!(v.source_range(), (7.0, 7.0));
    }

    #[test]
    fn middle_slices_centered_window() {
        let v = ramp([1, 1, 100]);
        let s = select_middle_slices(&v, nz(50), Axis::Z);
        assert_eq!(s.dims(), [1, 1, 50]);
        assert_eq!(s.voxels().first(), Some(&25.0));
        assert_eq!(s.voxels().last(), Some(&74.0));
    }

    #[test]
    fn middle_slices_identity_and_clamp() {
        let v = ramp([3, 2, 50]);
        assert_eq!(select_middle_slices(&v, nz(50), Axis::Z), v);
        assert_eq!(select_middle_slices(&v, nz(80), Axis::Z), v);
    }

    #[test]
    fn middle_slices_odd_leftover_drops_high_side() {
        let v = ramp([7, 1, 1]);
        let s = select_middle_slices(&v, nz(4), Axis::X);
        assert_eq!(s.voxels(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn middle_slices_along_y() {
        let v = ramp([2, 4, 2]);
        let s = select_middle_slices(&v, nz(2), Axis::Y);
        assert_eq!(s.dims(), [2, 2, 2]);
        for z in 0..2 {
            for y in 0..2 {
                for x in 0..2 {
                    assert_eq!(s.get(x, y, z), v.get(x, y + 1, z));
                }
            }
        }
    }

    #[test]
    fn quantize_eight_bit_examples() {
        let v = GrayVolume::new([3, 1, 1], vec![0.0, 255.0, 128.0]).unwrap();
        let q = quantize(&v, 100, RangeMode::Fixed { lo: 0.0, hi: 255.0 }).unwrap();
        assert_eq!(q.bins(), &[1, 100, 51]);
    }

    #[test]
    fn quantize_eight_bit_matches_closed_form() {
        let v = GrayVolume::new([256, 1, 1], (0..256).map(f64::from).collect()).unwrap();
        let q = quantize(&v, 100, RangeMode::Fixed { lo: 0.0, hi: 255.0 }).unwrap();
        for (i, &b) in q.bins().iter().enumerate() {
            assert_eq!(usize::from(b), 1 + i * 100 / 256);
        }
    }

    #[test]
    fn quantize_fixed_clamps_outside_values() {
        let v = GrayVolume::new([2, 1, 1], vec![-10.0, 900.0]).unwrap();
        let q = quantize(&v, 100, RangeMode::Fixed { lo: 0.0, hi: 255.0 }).unwrap();
        assert_eq!(q.bins(), &[1, 100]);
    }

    #[test]
    fn quantize_errors() {
        let v = GrayVolume::new([1, 1, 1], vec![1.0]).unwrap();
        assert_eq!(
            quantize(&v, 100, RangeMode::Fixed { lo: 5.0, hi: 5.0 }),
            Err(VolumeError::DegenerateRange { lo: 5.0, hi: 5.0 })
        );
        assert_eq!(quantize(&v, 1, RangeMode::MinMax), Err(VolumeError::TooFewLevels(1)));
    }

    #[test]
    fn quantize_minmax_constant_is_bin_one() {
        let v = GrayVolume::new([2, 2, 1], vec![3.5; 4]).unwrap();
        let q = quantize(&v, 100, RangeMode::MinMax).unwrap();
        assert!(q.bins().iter().all(|&b| b == 1));
    }

    #[test]
    fn quantize_minmax_identity_on_bin_valued_volume() {
        let v = GrayVolume::new([100, 1, 1], (1..=100).map(f64::from).collect()).unwrap();
        let fixed = quantize(&v, 100, RangeMode::Fixed { lo: 1.0, hi: 100.0 }).unwrap();
        let expected: Vec<Bin> = (1..=100).collect();
        assert_eq!(fixed.bins(), expected.as_slice());
    }

    #[test]
    fn reflect_is_involution() {
        let q = QuantizedVolume::new([3, 1, 1], vec![1, 5, 10], 10).unwrap();
        assert_eq!(q.reflect().bins(), &[10, 6, 1]);
        assert_eq!(q.reflect().reflect(), q);
    }

    #[test]
    fn quantized_rejects_out_of_range_bins() {
        assert!(matches!(
            QuantizedVolume::new([2, 1, 1], vec![1, 11], 10),
            Err(VolumeError::BinOutOfRange { index: 1, bin: 11, .. })
        ));
        assert!(QuantizedVolume::new([1, 1, 1], vec![0], 10).is_err());
    }

    proptest! {
        #[test]
        fn quantize_is_monotone(values in proptest::collection::vec(-1.0e4f64..1.0e4, 2..64), levels in 2u16..300) {
            let n = values.len();
            let v = GrayVolume::new([n, 1, 1], values.clone()).unwrap();
            let q = quantize(&v, levels, RangeMode::MinMax).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if values[i] <= values[j] {
                        prop_assert!(q.bins()[i] <= q.bins()[j]);
                    }
                }
            }
        }

        #[test]
        fn minmax_hits_both_ends(values in proptest::collection::vec(-1.0e4f64..1.0e4, 2..64), levels in 2u16..300) {
            let n = values.len();
            let v = GrayVolume::new([n, 1, 1], values).unwrap();
            let (lo, hi) = v.source_range();
            prop_assume!(lo < hi);
            let q = quantize(&v, levels, RangeMode::MinMax).unwrap();
            for (i, &x) in v.voxels().iter().enumerate() {
                if x == lo { prop_assert_eq!(q.bins()[i], 1); }
                if x == hi { prop_assert_eq!(q.bins()[i], levels); }
            }
        }

        #[test]
        fn fixed_range_is_monotone(values in proptest::collection::vec(-50.0f64..300.0, 2..64)) {
            let n = values.len();
            let v = GrayVolume::new([n, 1, 1], values.clone()).unwrap();
            let q = quantize(&v, 100, RangeMode::Fixed { lo: 0.0, hi: 255.0 }).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if values[i] <= values[j] {
                        prop_assert!(q.bins()[i] <= q.bins()[j]);
                    }
                }
            }
        }

        #[test]
        fn slice_selection_idempotent_when_count_covers(nx in 1usize..5, ny in 1usize..5, nzz in 1usize..5, extra in 0usize..4) {
            let v = ramp([nx, ny, nzz]);
            let s = select_middle_slices(&v, nz(nzz + extra), Axis::Z);
            prop_assert_eq!(&s, &v);
            prop_assert_eq!(select_middle_slices(&s, nz(nzz + extra), Axis::Z), s);
        }
    }
}
