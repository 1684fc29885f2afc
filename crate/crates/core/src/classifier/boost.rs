use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dataset::LabeledDataset;
use super::tree::{BinnedFeatures, GrowParams, Tree};
use super::{ClassifierConfig, ClassifierError, Objective, SplitMode};

const MIN_HESSIAN: f64 = 1e-16;

/// A fitted boosted ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    objective: Objective,
    n_classes: usize,
    n_features: usize,
    /// One tree per round for binary logistic, `n_classes` per round for
    /// softmax (class-minor).
    trees: Vec<Tree>,
    importance: Vec<f64>,
}

pub fn fit(train: &LabeledDataset, cfg: &ClassifierConfig) -> Result<Model, ClassifierError> {
    cfg.validate()?;
    let k = train.n_classes();
    if train.class_counts().iter().filter(|&&c| c > 0).count() < 2 {
        return Err(ClassifierError::SingleClass);
    }
    if cfg.objective == Objective::BinaryLogistic && k != 2 {
        return Err(ClassifierError::ObjectiveClasses(k));
    }

    let n = train.n_samples();
    let n_features = train.n_features();
    let max_bins = match cfg.split_mode {
        SplitMode::Histogram => cfg.max_bins,
        SplitMode::Exact => usize::from(u16::MAX),
    };
    let binned = BinnedFeatures::new(train, max_bins);
    let params = GrowParams {
        max_depth: cfg.max_depth,
        learning_rate: cfg.learning_rate,
        reg_lambda: cfg.reg_lambda,
        min_child_weight: cfg.min_child_weight,
    };
    let n_sampled = (libm::round(cfg.colsample_bytree * n_features as f64) as usize).clamp(1, n_features.max(1));
    let groups = match cfg.objective {
        Objective::BinaryLogistic => 1,
        Objective::MulticlassSoftmax => k,
    };

    let labels = train.labels();
    let mut margins = vec![0.0; n * groups];
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n];
    let mut probs = vec![0.0; k];
    let mut importance = vec![0.0; n_features];
    let mut trees = Vec::with_capacity(cfg.n_estimators * groups);

    for round in 0..cfg.n_estimators {
        // Gradients for every group come from the margins before this round.
        let mut round_grads = Vec::with_capacity(groups);
        for group in 0..groups {
            for i in 0..n {
                let (g, h) = match cfg.objective {
                    Objective::BinaryLogistic => {
                        let p = sigmoid(margins[i]);
                        let y = if labels[i] == 1 { 1.0 } else { 0.0 };
                        (p - y, (p * (1.0 - p)).max(MIN_HESSIAN))
                    }
                    Objective::MulticlassSoftmax => {
                        softmax(&margins[i * groups..(i + 1) * groups], &mut probs);
                        let p = probs[group];
                        let y = if labels[i] == group { 1.0 } else { 0.0 };
                        (p - y, (2.0 * p * (1.0 - p)).max(MIN_HESSIAN))
                    }
                };
                grad[i] = g;
                hess[i] = h;
            }
            round_grads.push((grad.clone(), hess.clone()));
        }
        for (group, (g, h)) in round_grads.iter().enumerate() {
            let tree_index = (round * groups + group) as u64;
            let features = sample_features(cfg.seed, tree_index, n_features, n_sampled);
            let samples: Vec<usize> = (0..n).collect();
            let tree = Tree::grow(&binned, g, h, samples, &features, &params, &mut importance);
            for i in 0..n {
                margins[i * groups + group] += tree.predict(train.row(i));
            }
            trees.push(tree);
        }
    }

    Ok(Model {
        objective: cfg.objective,
        n_classes: k,
        n_features,
        trees,
        importance,
    })
}

/// Sorted feature subset for one tree, keyed on `(seed, tree_index)`.
fn sample_features(seed: u64, tree_index: u64, n_features: usize, count: usize) -> Vec<usize> {
    if count >= n_features {
        return (0..n_features).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree_index);
    let mut picked = rand::seq::index::sample(&mut rng, n_features, count).into_vec();
    picked.sort_unstable();
    picked
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-x))
}

fn softmax(margins: &[f64], out: &mut [f64]) {
    let max = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for (o, &m) in out.iter_mut().zip(margins) {
        *o = libm::exp(m - max);
        total += *o;
    }
    out.iter_mut().for_each(|o| *o /= total);
}

impl Model {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Total split gain per feature.
    pub fn importances(&self) -> &[f64] {
        &self.importance
    }

    /// Class probabilities, `n_classes` entries summing to 1.
    pub fn predict_proba(&self, row: &[f64]) -> Result<Vec<f64>, ClassifierError> {
        if row.len() != self.n_features {
            return Err(ClassifierError::FeatureCount {
                expected: self.n_features,
                actual: row.len(),
            });
        }
        match self.objective {
            Objective::BinaryLogistic => {
                let margin: f64 = self.trees.iter().map(|t| t.predict(row)).sum();
                let p = sigmoid(margin);
                Ok(vec![1.0 - p, p])
            }
            Objective::MulticlassSoftmax => {
                let mut margins = vec![0.0; self.n_classes];
                for (i, tree) in self.trees.iter().enumerate() {
                    margins[i % self.n_classes] += tree.predict(row);
                }
                let mut probs = vec![0.0; self.n_classes];
                softmax(&margins, &mut probs);
                Ok(probs)
            }
        }
    }

    /// Most probable class; ties go to the lower index.
    pub fn predict(&self, row: &[f64]) -> Result<usize, ClassifierError> {
        Ok(argmax(&self.predict_proba(row)?))
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    (1..values.len()).fold(0, |best, i| if values[i] > values[best] { i } else { best })
}
