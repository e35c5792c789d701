use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::{EdgeSample, Polarity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPredictionResult {
    pub auc: f64,
    pub num_positives: usize,
    pub num_negatives: usize,
}

/// Cosine similarity of two embedding rows; 0 when either is a zero vector.
pub fn score_edge(z: &EmbeddingMatrix, i: usize, j: usize) -> f64 {
    cosine(z.row(i), z.row(j))
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Mann–Whitney AUC: the probability a positive outscores a negative, ties
/// counting one half. Uses mid-ranks over the pooled scores.
pub fn auc_from_scores(positives: &[f64], negatives: &[f64]) -> Result<f64> {
    if positives.is_empty() {
        return Err(Error::MissingPolarity("positive"));
    }
    if negatives.is_empty() {
        return Err(Error::MissingPolarity("negative"));
    }
    let mut pooled: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < pooled.len() {
        let mut end = start + 1;
        while end < pooled.len() && pooled[end].0 == pooled[start].0 {
            end += 1;
        }
        // ranks start..end (1-based start+1..=end) share their mean
        let mid = (start + 1 + end) as f64 / 2.0;
        rank_sum += mid * pooled[start..end].iter().filter(|p| p.1).count() as f64;
        start = end;
    }
    let (np, nn) = (positives.len() as f64, negatives.len() as f64);
    Ok((rank_sum - np * (np + 1.0) / 2.0) / (np * nn))
}

pub fn link_prediction_auc(z: &EmbeddingMatrix, samples: &[EdgeSample]) -> Result<LinkPredictionResult> {
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for s in samples {
        let score = score_edge(z, s.src, s.dst);
        match s.polarity {
            Polarity::Positive => pos.push(score),
            Polarity::Negative => neg.push(score),
        }
    }
    Ok(LinkPredictionResult {
        auc: auc_from_scores(&pos, &neg)?,
        num_positives: pos.len(),
        num_negatives: neg.len(),
    })
}
