//! Vose's alias method: O(L) construction, O(1) sampling.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sparse::SparseRow;

#[derive(Debug, Clone, PartialEq)]
pub struct AliasTable {
    /// Acceptance threshold of each slot.
    prob: Vec<f64>,
    /// Slot taken when the threshold test fails.
    alias: Vec<usize>,
    /// Outcome of each slot.
    support: Vec<usize>,
}

impl AliasTable {
    /// Builds a table over `support` with outcome weights proportional to
    /// `weights`.
    pub fn new(support: Vec<usize>, weights: &[f64]) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} outcomes but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig("alias weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if support.is_empty() || total <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        let len = weights.len();
        let scale = len as f64 / total;
        let mut prob: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let mut alias: Vec<usize> = (0..len).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..len).partition(|&i| prob[i] < 1.0);
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l;
            prob[l] -= 1.0 - prob[s];
            if prob[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // leftovers differ from 1 only by rounding
        for i in large.into_iter().chain(small) {
            prob[i] = 1.0;
        }
        Ok(AliasTable { prob, alias, support })
    }

    /// Table for one transition row; empty rows are an error.
    pub fn from_row(row: SparseRow<'_>) -> Result<Self> {
        AliasTable::new(row.indices.to_vec(), row.values)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// One 64-bit draw per sample: the high half picks the slot by
    /// multiply-shift (bias below `len / 2^32`), the low half is the coin.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let bits = rng.next_u64();
        let slot = (((bits >> 32) * self.prob.len() as u64) >> 32) as usize;
        let coin = (bits & 0xffff_ffff) as f64 * (1.0 / 4_294_967_296.0);
        if coin < self.prob[slot] {
            self.support[slot]
        } else {
            self.support[self.alias[slot]]
        }
    }

    /// Outcome probabilities implied by the table, aligned with
    /// [`support`](Self::support).
    pub fn probabilities(&self) -> Vec<f64> {
        let len = self.len() as f64;
        let mut p: Vec<f64> = self.prob.iter().map(|q| q / len).collect();
        for (slot, &q) in self.prob.iter().enumerate() {
            p[self.alias[slot]] += (1.0 - q) / len;
        }
        p
    }
}
