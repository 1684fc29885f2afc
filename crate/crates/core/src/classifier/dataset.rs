use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ClassifierError;

/// Class order for the clinical labels: normal control, mild cognitive
/// impairment, Alzheimer's disease.
pub const CANONICAL_CLASSES: [&str; 3] = ["NC", "MCI", "AD"];

/// Row-major feature matrix with integer labels `0..class_names.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    rows: Vec<f64>,
    n_features: usize,
    labels: Vec<usize>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        rows: Vec<f64>,
        labels: Vec<usize>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self, ClassifierError> {
        let n_features = feature_names.len();
        if rows.len() != labels.len() * n_features {
            return Err(ClassifierError::Shape("rows must hold n_samples * n_features values"));
        }
        if let Some(pos) = rows.iter().position(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFinite {
                sample: pos / n_features,
                feature: pos % n_features,
            });
        }
        if let Some((sample, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= class_names.len()) {
            return Err(ClassifierError::BadLabel {
                sample,
                label,
                classes: class_names.len(),
            });
        }
        Ok(Self {
            rows,
            n_features,
            labels,
            feature_names,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, sample: usize, feature: usize) -> f64 {
        self.rows[sample * self.n_features + feature]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut rows = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            rows.extend_from_slice(self.row(i));
        }
        Self {
            rows,
            n_features: self.n_features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }

    /// Feature columns at `features`, in that order.
    pub fn columns(&self, features: &[usize]) -> Self {
        let mut rows = Vec::with_capacity(self.n_samples() * features.len());
        for i in 0..self.n_samples() {
            let row = self.row(i);
            rows.extend(features.iter().map(|&f| row[f]));
        }
        Self {
            rows,
            n_features: features.len(),
            labels: self.labels.clone(),
            feature_names: features.iter().map(|&f| self.feature_names[f].clone()).collect(),
            class_names: self.class_names.clone(),
        }
    }

    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self, ClassifierError> {
        if labels.len() != self.n_samples() {
            return Err(ClassifierError::Shape("label count must match sample count"));
        }
        Self::new(self.rows.clone(), labels, self.feature_names.clone(), self.class_names.clone())
    }

    /// Collapses every class other than 0 into a single positive class 1.
    pub fn merge_binary(&self) -> Self {
        let positive = if self.n_classes() > 1 {
            self.class_names[1..].join("+")
        } else {
            String::from("positive")
        };
        let negative = self.class_names.first().cloned().unwrap_or_else(|| String::from("negative"));
        Self {
            rows: self.rows.clone(),
            n_features: self.n_features,
            labels: self.labels.iter().map(|&l| usize::from(l != 0)).collect(),
            feature_names: self.feature_names.clone(),
            class_names: vec![negative, positive],
        }
    }
}
