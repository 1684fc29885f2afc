//! Volume → diagrams → feature vector, for one file or a manifest batch.

use std::path::Path;

use rayon::prelude::*;
use voxph_core::filtration::build_filtration;
use voxph_core::persistence::{compute_diagrams, Diagrams};
use voxph_core::vectorize::{assemble_features, feature_names, FeatureVector};
use voxph_core::volume::{quantize, select_middle_slices, GrayVolume};

use crate::config::ExtractConfig;
use crate::features::FeatureTable;
use crate::io::{load_volume, Format};
use crate::manifest::ManifestEntry;
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub diagrams: Diagrams,
    pub features: FeatureVector,
}

pub fn diagrams_of(vol: &GrayVolume, cfg: &ExtractConfig) -> Result<Diagrams, Error> {
    let sliced;
    let vol = match cfg.slice_count() {
        Some(count) => {
            sliced = select_middle_slices(vol, count, cfg.axis);
            &sliced
        }
        None => vol,
    };
    let q = quantize(vol, cfg.levels, cfg.range.0)?;
    Ok(compute_diagrams(&build_filtration(&q, cfg.direction)))
}

pub fn extract_volume(vol: &GrayVolume, cfg: &ExtractConfig) -> Result<Extraction, Error> {
    let diagrams = diagrams_of(vol, cfg)?;
    let features = assemble_features(&diagrams, cfg.levels, cfg.vectorization.0, &cfg.dims)?;
    Ok(Extraction { diagrams, features })
}

pub fn extract_file(path: &Path, format: Format, cfg: &ExtractConfig) -> Result<Extraction, Error> {
    extract_volume(&load_volume(path, format)?, cfg)
}

#[derive(Debug)]
pub struct BatchFailure {
    pub index: usize,
    pub entry: ManifestEntry,
    pub error: Error,
}

#[derive(Debug)]
pub struct BatchOutcome {
    /// Successful volumes in manifest order.
    pub table: FeatureTable,
    /// Diagrams aligned with `table` rows.
    pub diagrams: Vec<Diagrams>,
    pub failures: Vec<BatchFailure>,
}

/// Builds a pool with `workers` threads; 0 lets rayon choose.
pub fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))
}

/// Extracts every entry on a pool of `workers` threads. Output order follows
/// the manifest regardless of scheduling; failing volumes are collected
/// rather than aborting the batch.
pub fn extract_batch(
    entries: &[ManifestEntry],
    format: Format,
    cfg: &ExtractConfig,
    workers: usize,
) -> Result<BatchOutcome, Error> {
    let results: Vec<Result<Extraction, Error>> = thread_pool(workers)?
        .install(|| entries.par_iter().map(|e| extract_file(&e.path, format, cfg)).collect());
    let mut table = FeatureTable::new(feature_names(cfg.vectorization.0, cfg.levels, &cfg.dims));
    let mut diagrams = Vec::new();
    let mut failures = Vec::new();
    for (index, (entry, result)) in entries.iter().zip(results).enumerate() {
        match result {
            Ok(x) => {
                table.push(entry.id(), entry.label.clone(), x.features.values);
                diagrams.push(x.diagrams);
            }
            Err(error) => failures.push(BatchFailure {
                index,
                entry: entry.clone(),
                error,
            }),
        }
    }
    Ok(BatchOutcome {
        table,
        diagrams,
        failures,
    })
}
