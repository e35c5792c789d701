//! One-vs-rest L2 logistic regression and the node classification protocol.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::LabelSet;
use crate::rng::{derive_seed, seeded, tags};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub l2: f64,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            l2: 1.0,
            max_iterations: 500,
            gradient_tolerance: 1e-6,
        }
    }
}

/// Binary classifier `σ(w·x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Training loss after each accepted step, starting with the initial
    /// loss.
    pub losses: Vec<f64>,
}

impl LogisticModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

struct Problem<'a> {
    x: &'a [f64],
    y: &'a [f64],
    dim: usize,
    l2: f64,
}

impl Problem<'_> {
    /// Loss `Σ log(1 + e^{−y m}) + l2/2 ‖w‖²`, with the gradient written to
    /// `grad` when given. `theta` is `[w.., b]`.
    fn eval(&self, theta: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let (w, b) = theta.split_at(self.dim);
        let mut loss = 0.5 * self.l2 * w.iter().map(|v| v * v).sum::<f64>();
        let mut g = grad;
        if let Some(g) = g.as_deref_mut() {
            for (gi, wi) in g.iter_mut().zip(w) {
                *gi = self.l2 * wi;
            }
            g[self.dim] = 0.0;
        }
        for (row, &y) in self.x.chunks_exact(self.dim).zip(self.y) {
            let m = b[0] + row.iter().zip(w).map(|(a, c)| a * c).sum::<f64>();
            loss += softplus(-y * m);
            if let Some(g) = g.as_deref_mut() {
                // d/dm log(1 + e^{−y m}) = −y σ(−y m)
                let coef = -y / (1.0 + (y * m).exp());
                for (gi, a) in g[..self.dim].iter_mut().zip(row) {
                    *gi += coef * a;
                }
                g[self.dim] += coef;
            }
        }
        loss
    }
}

/// Full-batch gradient descent with Armijo backtracking. `x` is row-major
/// `n x dim`; `y` holds the positive-class indicator.
pub fn fit_logistic(x: &[f64], y: &[bool], dim: usize, cfg: &LogisticConfig) -> LogisticModel {
    let signs: Vec<f64> = y.iter().map(|&p| if p { 1.0 } else { -1.0 }).collect();
    let problem = Problem {
        x,
        y: &signs,
        dim,
        l2: cfg.l2,
    };
    let mut theta = vec![0.0; dim + 1];
    let mut grad = vec![0.0; dim + 1];
    let mut trial = vec![0.0; dim + 1];
    let mut loss = problem.eval(&theta, Some(&mut grad));
    let mut losses = vec![loss];
    let mut step = 1.0;
    for _ in 0..cfg.max_iterations {
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2.sqrt() < cfg.gradient_tolerance {
            break;
        }
        step *= 2.0;
        let accepted = loop {
            for ((t, th), g) in trial.iter_mut().zip(&theta).zip(&grad) {
                *t = th - step * g;
            }
            let candidate = problem.eval(&trial, None);
            if candidate <= loss - 1e-4 * step * gnorm2 {
                break Some(candidate);
            }
            step *= 0.5;
            if step < 1e-20 {
                break None;
            }
        };
        let Some(next) = accepted else { break };
        std::mem::swap(&mut theta, &mut trial);
        loss = problem.eval(&theta, Some(&mut grad));
        debug_assert!(loss <= next + 1e-9 * next.abs().max(1.0));
        losses.push(loss);
    }
    LogisticModel {
        bias: theta[dim],
        weights: theta[..dim].to_vec(),
        losses,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCount {
    pub label: String,
    pub train: usize,
    pub test: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    /// Equal to `accuracy` for single-label multiclass prediction.
    pub micro_f1: f64,
    pub accuracy: f64,
    pub train_fraction: f64,
    pub per_class: Vec<ClassCount>,
}

/// Micro-averaged F1 over single-label predictions (`None` = no
/// prediction).
pub fn micro_f1(truth: &[usize], predicted: &[Option<usize>]) -> f64 {
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (t, p) in truth.iter().zip(predicted) {
        match p {
            Some(p) if p == t => tp += 1,
            Some(_) => {
                fp += 1;
                fneg += 1;
            }
            None => fneg += 1,
        }
    }
    if tp == 0 {
        return 0.0;
    }
    let precision = tp as f64 / (tp + fp) as f64;
    let recall = tp as f64 / (tp + fneg) as f64;
    2.0 * precision * recall / (precision + recall)
}

/// One-vs-rest classifiers trained on a seeded split of the labeled nodes,
/// scored by micro-F1 on the held-out part.
pub fn node_classification(
    z: &EmbeddingMatrix,
    labels: &LabelSet,
    train_fraction: f64,
    seed: u64,
) -> Result<ClassificationResult> {
    node_classification_with(z, labels, train_fraction, seed, &LogisticConfig::default())
}

pub fn node_classification_with(
    z: &EmbeddingMatrix,
    labels: &LabelSet,
    train_fraction: f64,
    seed: u64,
    cfg: &LogisticConfig,
) -> Result<ClassificationResult> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let classes = labels.classes();
    if classes.len() < 2 {
        return Err(Error::InvalidConfig("node classification needs at least two classes".into()));
    }
    let class_of: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut labeled: Vec<(usize, usize)> = Vec::with_capacity(labels.len());
    for (node, label) in labels.iter() {
        if node >= z.n() {
            return Err(Error::DimensionMismatch(format!("label for node {node} beyond {} rows", z.n())));
        }
        labeled.push((node, class_of[label]));
    }
    labeled.shuffle(&mut seeded(derive_seed(seed, tags::SPLIT)));
    let n_train = ((train_fraction * labeled.len() as f64).round() as usize).clamp(1, labeled.len() - 1);
    let (train, test) = labeled.split_at(n_train);

    let dim = z.dim();
    let x: Vec<f64> = train.iter().flat_map(|&(node, _)| z.row(node).iter().copied()).collect();
    let mut per_class: Vec<ClassCount> = classes
        .iter()
        .map(|c| ClassCount {
            label: c.clone(),
            train: 0,
            test: 0,
            correct: 0,
        })
        .collect();
    for &(_, c) in train {
        per_class[c].train += 1;
    }
    let models: Vec<Option<LogisticModel>> = (0..classes.len())
        .map(|c| {
            if per_class[c].train == 0 {
                log::warn!("class `{}` has no training examples; its test nodes count as errors", classes[c]);
                return None;
            }
            let y: Vec<bool> = train.iter().map(|&(_, t)| t == c).collect();
            Some(fit_logistic(&x, &y, dim, cfg))
        })
        .collect();

    let mut truth = Vec::with_capacity(test.len());
    let mut predicted = Vec::with_capacity(test.len());
    for &(node, c) in test {
        let row = z.row(node);
        let best = models
            .iter()
            .enumerate()
            .filter_map(|(k, m)| m.as_ref().map(|m| (k, m.decision(row))))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(k, _)| k);
        per_class[c].test += 1;
        if best == Some(c) {
            per_class[c].correct += 1;
        }
        truth.push(c);
        predicted.push(best);
    }
    let correct: usize = per_class.iter().map(|c| c.correct).sum();
    Ok(ClassificationResult {
        micro_f1: micro_f1(&truth, &predicted),
        accuracy: correct as f64 / test.len() as f64,
        train_fraction,
        per_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn micro_f1_is_accuracy() {
        assert_eq!(micro_f1(&[0, 1, 1, 2], &[Some(0), Some(1), Some(0), Some(2)]), 0.75);
        assert_eq!(micro_f1(&[0, 1], &[Some(1), Some(0)]), 0.0);
    }

    #[test]
    fn loss_never_increases() {
        let x: Vec<f64> = (0..40).flat_map(|i| [(i as f64 * 0.37).sin() * 3.0, (i as f64 * 1.3).cos()]).collect();
        let y: Vec<bool> = (0..40).map(|i| (i as f64 * 0.37).sin() + 0.2 * (i as f64).cos() > 0.0).collect();
        let m = fit_logistic(&x, &y, 2, &LogisticConfig::default());
        assert!(m.losses.len() > 2);
        assert!(m.losses.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn separable_two_class() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| if i % 2 == 0 { vec![2.0 + i as f64 * 0.01, 1.0] } else { vec![-2.0 - i as f64 * 0.01, 1.0] })
            .collect();
        let z = EmbeddingMatrix::from_rows(&rows).unwrap();
        let mut labels = LabelSet::new();
        for i in 0..40 {
            labels.insert(i, if i % 2 == 0 { "even" } else { "odd" });
        }
        let r = node_classification(&z, &labels, 0.5, 3).unwrap();
        assert_eq!(r.micro_f1, 1.0);
        assert_eq!(r.micro_f1, r.accuracy);
        assert_eq!(r.per_class.iter().map(|c| c.train + c.test).sum::<usize>(), 40);
    }

    #[test]
    fn argument_checks() {
        let z = EmbeddingMatrix::zeros(4, 2);
        let mut labels = LabelSet::new();
        labels.insert(0, "a");
        labels.insert(1, "a");
        assert!(node_classification(&z, &labels, 0.5, 0).is_err());
        labels.insert(2, "b");
        assert!(node_classification(&z, &labels, 1.0, 0).is_err());
        assert!(node_classification(&z, &labels, 0.0, 0).is_err());
        assert!(node_classification(&z, &labels, 0.5, 0).is_ok());
    }

    #[test]
    fn unseen_class_counts_as_error() {
        let z = EmbeddingMatrix::from_rows(&[vec![1.0], vec![1.1], vec![-1.0]]).unwrap();
        let mut labels = LabelSet::new();
        labels.insert(0, "a");
        labels.insert(1, "a");
        labels.insert(2, "b");
        // with 3 labels and fraction 0.34 only one node trains
        for seed in 0..10 {
            let r = node_classification(&z, &labels, 0.34, seed).unwrap();
            let missing = r.per_class.iter().any(|c| c.train == 0 && c.test > 0 && c.correct == 0);
            assert!(missing || r.per_class.iter().all(|c| c.train > 0));
        }
    }
}
