//! Regression trees on binned features.

use alloc::vec::Vec;

use super::dataset::LabeledDataset;

/// Split gains at or below this are treated as no improvement.
const MIN_SPLIT_GAIN: f64 = 1e-6;

/// Per-feature cut points and the bin of every training value.
///
/// Bin `b` of feature `f` holds values `x` with `cuts[f][b-1] <= x < cuts[f][b]`,
/// so "bin < b" and "x < cuts[f][b-1]" select the same training samples.
#[derive(Debug, Clone)]
pub(crate) struct BinnedFeatures {
    cuts: Vec<Vec<f64>>,
    /// Column-major: `bins[f * n_samples + i]`.
    bins: Vec<u16>,
    n_samples: usize,
}

impl BinnedFeatures {
    pub(crate) fn new(data: &LabeledDataset, max_bins: usize) -> Self {
        let n = data.n_samples();
        let mut cuts = Vec::with_capacity(data.n_features());
        let mut bins = Vec::with_capacity(n * data.n_features());
        let mut column = Vec::with_capacity(n);
        for f in 0..data.n_features() {
            column.clear();
            column.extend((0..n).map(|i| data.value(i, f)));
            let feature_cuts = cut_points(&column, max_bins);
            bins.extend(column.iter().map(|&x| feature_cuts.partition_point(|&c| c <= x) as u16));
            cuts.push(feature_cuts);
        }
        Self { cuts, bins, n_samples: n }
    }

    fn n_bins(&self, f: usize) -> usize {
        self.cuts[f].len() + 1
    }

    fn bin(&self, f: usize, i: usize) -> usize {
        usize::from(self.bins[f * self.n_samples + i])
    }
}

/// Thresholds sit halfway between a chosen training value and the next
/// smaller distinct one, so binning the training data is unaffected.
fn cut_points(values: &[f64], max_bins: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    let upper: Vec<f64> = if distinct.len() <= max_bins {
        distinct.iter().skip(1).copied().collect()
    } else {
        let n = sorted.len();
        let mut cuts: Vec<f64> = (1..max_bins).map(|q| sorted[q * n / max_bins]).collect();
        cuts.dedup();
        cuts.retain(|&c| c > sorted[0]);
        cuts
    };
    upper
        .into_iter()
        .map(|c| {
            let below = distinct[distinct.partition_point(|&v| v < c) - 1];
            let mid = below + (c - below) / 2.0;
            if mid > below { mid } else { c }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tree {
    nodes: Vec<Node>,
}

pub(crate) struct GrowParams {
    pub max_depth: usize,
    pub learning_rate: f64,
    pub reg_lambda: f64,
    pub min_child_weight: f64,
}

struct Grower<'a> {
    binned: &'a BinnedFeatures,
    grad: &'a [f64],
    hess: &'a [f64],
    features: &'a [usize],
    params: &'a GrowParams,
    importance: &'a mut [f64],
    nodes: Vec<Node>,
    hist: Vec<(f64, f64)>,
}

struct BestSplit {
    gain: f64,
    feature: usize,
    bin: usize,
}

impl Tree {
    /// Grows one tree on `samples` using only `features`, adding each split's
    /// gain to `importance`.
    pub(crate) fn grow(
        binned: &BinnedFeatures,
        grad: &[f64],
        hess: &[f64],
        samples: Vec<usize>,
        features: &[usize],
        params: &GrowParams,
        importance: &mut [f64],
    ) -> Self {
        let mut grower = Grower {
            binned,
            grad,
            hess,
            features,
            params,
            importance,
            nodes: Vec::new(),
            hist: Vec::new(),
        };
        grower.node(samples, 0);
        Tree { nodes: grower.nodes }
    }

    pub(crate) fn predict(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] < threshold { left } else { right },
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}

impl Grower<'_> {
    fn score(&self, g: f64, h: f64) -> f64 {
        g * g / (h + self.params.reg_lambda)
    }

    fn node(&mut self, samples: Vec<usize>, depth: usize) -> usize {
        let index = self.nodes.len();
        self.nodes.push(Node::Leaf(0.0));
        let g: f64 = samples.iter().map(|&i| self.grad[i]).sum();
        let h: f64 = samples.iter().map(|&i| self.hess[i]).sum();

        let best = if depth < self.params.max_depth && h >= 2.0 * self.params.min_child_weight {
            self.best_split(&samples, g, h)
        } else {
            None
        };
        let Some(best) = best else {
            let weight = -g / (h + self.params.reg_lambda);
            self.nodes[index] = Node::Leaf(weight * self.params.learning_rate);
            return index;
        };

        self.importance[best.feature] += best.gain;
        let (left_samples, right_samples): (Vec<usize>, Vec<usize>) = samples
            .into_iter()
            .partition(|&i| self.binned.bin(best.feature, i) < best.bin);
        let threshold = self.binned.cuts[best.feature][best.bin - 1];
        let left = self.node(left_samples, depth + 1);
        let right = self.node(right_samples, depth + 1);
        self.nodes[index] = Node::Split {
            feature: best.feature,
            threshold,
            left,
            right,
        };
        index
    }

    fn best_split(&mut self, samples: &[usize], g: f64, h: f64) -> Option<BestSplit> {
        let parent = self.score(g, h);
        let mcw = self.params.min_child_weight;
        let mut best: Option<BestSplit> = None;
        for &f in self.features {
            let n_bins = self.binned.n_bins(f);
            if n_bins < 2 {
                continue;
            }
            self.hist.clear();
            self.hist.resize(n_bins, (0.0, 0.0));
            for &i in samples {
                let slot = &mut self.hist[self.binned.bin(f, i)];
                slot.0 += self.grad[i];
                slot.1 += self.hess[i];
            }
            let (mut gl, mut hl) = (0.0, 0.0);
            for b in 1..n_bins {
                gl += self.hist[b - 1].0;
                hl += self.hist[b - 1].1;
                let (gr, hr) = (g - gl, h - hl);
                if hl < mcw || hr < mcw {
                    continue;
                }
                let gain = self.score(gl, hl) + self.score(gr, hr) - parent;
                if gain > MIN_SPLIT_GAIN && best.as_ref().is_none_or(|s| gain > s.gain) {
                    best = Some(BestSplit { gain, feature: f, bin: b });
                }
            }
        }
        best
    }
}

#[cfg(test)]
pub(crate) fn all_samples(n: usize) -> Vec<usize> {
    (0..n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn data(values: &[f64]) -> LabeledDataset {
        LabeledDataset::new(
            values.to_vec(),
            vec![0; values.len()],
            vec!["x".to_string()],
            vec!["a".to_string(), "b".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn cut_points_exact_and_quantile() {
        assert_eq!(cut_points(&[3.0, 1.0, 2.0, 2.0], 64), vec![1.5, 2.5]);
        assert_eq!(cut_points(&[5.0; 4], 64), Vec::<f64>::new());
        let many: Vec<f64> = (0..100).map(f64::from).collect();
        let cuts = cut_points(&many, 4);
        assert_eq!(cuts, vec![24.5, 49.5, 74.5]);
    }

    #[test]
    fn single_split_separates_gradients() {
        let d = data(&[1.0, 2.0, 3.0, 4.0]);
        let binned = BinnedFeatures::new(&d, 64);
        let grad = [-1.0, -1.0, 1.0, 1.0];
        let hess = [1.0; 4];
        let params = GrowParams {
            max_depth: 1,
            learning_rate: 1.0,
            reg_lambda: 0.0,
            min_child_weight: 1.0,
        };
        let mut importance = [0.0];
        let tree = Tree::grow(&binned, &grad, &hess, all_samples(4), &[0], &params, &mut importance);
        assert_eq!(tree.n_leaves(), 2);
        assert_eq!(tree.predict(&[1.5]), 1.0);
        assert_eq!(tree.predict(&[3.0]), -1.0);
        // threshold halfway between 2 and 3
        assert_eq!(tree.predict(&[2.4]), 1.0);
        assert_eq!(tree.predict(&[2.6]), -1.0);
        // 2^2/2 + 2^2/2 - 0
        assert_eq!(importance[0], 4.0);
    }

    #[test]
    fn min_child_weight_blocks_tiny_leaves() {
        let d = data(&[1.0, 2.0]);
        let binned = BinnedFeatures::new(&d, 64);
        let params = GrowParams {
            max_depth: 3,
            learning_rate: 1.0,
            reg_lambda: 1.0,
            min_child_weight: 1.0,
        };
        let mut importance = [0.0];
        let tree = Tree::grow(&binned, &[-1.0, 1.0], &[0.4, 0.4], all_samples(2), &[0], &params, &mut importance);
        assert_eq!(tree.n_leaves(), 1);
        assert_eq!(importance[0], 0.0);
    }
}
