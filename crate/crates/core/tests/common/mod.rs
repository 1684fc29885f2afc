#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voxph_core::phantom::{generate, PhantomSpec, Shape};
use voxph_core::volume::QuantizedVolume;
use voxph_core::Bin;

/// Seeded random volume with every extent in `1..=6`. Few levels force ties.
pub fn random_volume(seed: u64) -> QuantizedVolume {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = [rng.gen_range(1..=6), rng.gen_range(1..=6), rng.gen_range(1..=6)];
    let levels: Bin = if seed % 4 == 0 { 100 } else { rng.gen_range(2..=8) };
    let bins = (0..dims.iter().product::<usize>()).map(|_| rng.gen_range(1..=levels)).collect();
    QuantizedVolume::new(dims, bins, levels).unwrap()
}

pub fn random_corpus() -> Vec<QuantizedVolume> {
    (0..100).map(random_volume).collect()
}

pub const FG: Bin = 20;
pub const BG: Bin = 80;

/// Phantom specs small enough for the reference reduction.
pub fn phantom_specs() -> Vec<(&'static str, PhantomSpec)> {
    vec![
        (
            "ball",
            PhantomSpec::new(Shape::SolidBall { center: [5.0; 3], radius: 4.0 }, [11, 11, 11], FG, BG),
        ),
        (
            "shell",
            PhantomSpec::new(
                Shape::HollowShell {
                    center: [6.0; 3],
                    inner_radius: 3.0,
                    outer_radius: 5.0,
                },
                [13, 13, 13],
                FG,
                BG,
            ),
        ),
        (
            "torus",
            PhantomSpec::new(
                Shape::SolidTorus {
                    center: [7.0, 7.0, 3.5],
                    major_radius: 4.0,
                    minor_radius: 2.0,
                },
                [15, 15, 8],
                FG,
                BG,
            ),
        ),
        (
            "two_blobs",
            PhantomSpec::new(
                Shape::TwoBlobs {
                    centers: [[4.0, 5.0, 5.0], [12.0, 5.0, 5.0]],
                    radius: 2.5,
                },
                [17, 11, 11],
                FG,
                BG,
            ),
        ),
    ]
}

pub fn phantom_fixtures() -> Vec<(&'static str, QuantizedVolume)> {
    phantom_specs()
        .into_iter()
        .map(|(name, spec)| (name, generate(&spec).unwrap()))
        .collect()
}
