//! Skip-gram with negative sampling over walk corpora.
//!
//! Pairs come from a window of `w` nodes sliding one step at a time along
//! each walk; the first node of the window is the center and the other
//! `w − 1` are its contexts. Training maximizes
//! `log σ(z_i·c_j) + Σ_k log σ(−z_i·c_k)` by stochastic gradient ascent with
//! `k` drawn from the unigram distribution raised to `ns_exponent`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::alias::AliasTable;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream, tags};
use crate::walker::WalkCorpus;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub ns_exponent: f64,
    pub epochs: usize,
    pub lr_initial: f64,
    pub lr_final: f64,
    pub seed: u64,
    /// Single-threaded, fixed pair order. Bit-reproducible.
    pub deterministic: bool,
    /// Worker count for lock-free training when not deterministic.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            window: 10,
            negatives: 5,
            ns_exponent: 0.75,
            epochs: 5,
            lr_initial: 0.025,
            lr_final: 0.0001,
            seed: 0,
            deterministic: true,
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.dim == 0 {
            return fail("embedding dimension must be at least 1");
        }
        if self.window < 2 {
            return fail("window must be at least 2");
        }
        if !(self.lr_initial > 0.0 && self.lr_final > 0.0) {
            return fail("learning rates must be positive");
        }
        if self.lr_final > self.lr_initial {
            return fail("final learning rate exceeds the initial one");
        }
        if !self.ns_exponent.is_finite() {
            return fail("negative-sampling exponent must be finite");
        }
        Ok(())
    }
}

/// Training pairs `(center, context)`; multiplicity encodes co-occurrence
/// counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairCorpus {
    pub pairs: Vec<(u32, u32)>,
    pub num_nodes: usize,
}

impl PairCorpus {
    pub fn new(pairs: Vec<(u32, u32)>, num_nodes: usize) -> Result<Self> {
        if pairs.iter().any(|&(a, b)| a as usize >= num_nodes || b as usize >= num_nodes) {
            return Err(Error::DimensionMismatch(format!("pair index outside 0..{num_nodes}")));
        }
        Ok(PairCorpus { pairs, num_nodes })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Pairs one full-length walk contributes: `(l − w + 1)(w − 1)`.
pub fn pairs_per_walk(walk_length: usize, window: usize) -> usize {
    if walk_length < 2 {
        0
    } else if walk_length < window {
        walk_length - 1
    } else {
        (walk_length - window + 1) * (window - 1)
    }
}

pub fn extract_pairs(corpus: &WalkCorpus, window: usize) -> Result<PairCorpus> {
    if window < 2 {
        return Err(Error::InvalidConfig("window must be at least 2".into()));
    }
    if corpus.num_nodes > u32::MAX as usize {
        return Err(Error::Unsupported("more than 2^32 nodes".into()));
    }
    let total = corpus.walks.iter().map(|w| pairs_per_walk(w.len(), window)).sum();
    let mut pairs = Vec::with_capacity(total);
    for walk in &corpus.walks {
        let span = window.min(walk.len());
        for start in 0..=walk.len().saturating_sub(span) {
            let center = walk[start] as u32;
            for &ctx in &walk[start + 1..start + span] {
                pairs.push((center, ctx as u32));
            }
        }
    }
    Ok(PairCorpus {
        pairs,
        num_nodes: corpus.num_nodes,
    })
}

/// Negative-sample source: node frequency in the corpus raised to an
/// exponent.
#[derive(Debug, Clone)]
pub struct UnigramSampler {
    table: AliasTable,
    probabilities: Vec<f64>,
}

impl UnigramSampler {
    pub fn from_counts(counts: &[u64], exponent: f64) -> Result<Self> {
        let support: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
        let weights: Vec<f64> = support.iter().map(|&i| (counts[i] as f64).powf(exponent)).collect();
        let table = AliasTable::new(support.clone(), &weights)?;
        let total: f64 = weights.iter().sum();
        let mut probabilities = vec![0.0; counts.len()];
        for (&i, w) in support.iter().zip(&weights) {
            probabilities[i] = w / total;
        }
        Ok(UnigramSampler { table, probabilities })
    }

    /// Probability of drawing each node.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.table.sample(rng)
    }
}

pub fn build_unigram_sampler(corpus: &WalkCorpus, exponent: f64) -> Result<UnigramSampler> {
    let mut counts = vec![0u64; corpus.num_nodes];
    for &v in corpus.walks.iter().flatten() {
        counts[v] += 1;
    }
    UnigramSampler::from_counts(&counts, exponent)
}

/// `log σ(x)`, stable for large |x|.
pub fn log_sigmoid(x: f64) -> f64 {
    if x < -30.0 {
        x
    } else {
        -(-x).exp().ln_1p()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per-pair objective with one positive context and explicit negatives.
pub fn pair_objective(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    log_sigmoid(dot64(center, context)) + negatives.iter().map(|c| log_sigmoid(-dot64(center, c))).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Analytic gradient of [`pair_objective`].
pub fn pair_gradient(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let pos = 1.0 - sigmoid(dot64(center, context));
    let mut d_center: Vec<f64> = context.iter().map(|c| pos * c).collect();
    let mut d_negatives = Vec::with_capacity(negatives.len());
    for neg in negatives {
        let s = sigmoid(dot64(center, neg));
        for (g, c) in d_center.iter_mut().zip(neg.iter()) {
            *g -= s * c;
        }
        d_negatives.push(center.iter().map(|z| -s * z).collect());
    }
    PairGradient {
        center: d_center,
        context: center.iter().map(|z| pos * z).collect(),
        negatives: d_negatives,
    }
}

#[inline(always)]
fn dot(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0f32; 16];
    let (ac, bc) = (a.chunks_exact(16), b.chunks_exact(16));
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (x, y) in ac.zip(bc) {
        for l in 0..16 {
            acc[l] += x[l] * y[l];
        }
    }
    let mut s = ar.iter().zip(br).map(|(x, y)| x * y).sum::<f32>();
    for v in acc {
        s += v;
    }
    s
}

#[inline(always)]
fn axpy(alpha: f32, x: &[f32], y: &mut [f32]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `grad += g·c` and `c += g·h` in one pass over the rows.
#[inline(always)]
fn accumulate_and_step(g: f32, h: &[f32], c: &mut [f32], grad: &mut [f32]) {
    for ((gi, ci), hi) in grad.iter_mut().zip(c.iter_mut()).zip(h) {
        *gi += g * *ci;
        *ci += g * hi;
    }
}

#[inline]
fn sigmoid32(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

#[inline]
fn log_sigmoid32(x: f32) -> f64 {
    log_sigmoid(x as f64)
}

/// Mean pair objective per epoch, measured on the fly during training.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainReport {
    pub epoch_objectives: Vec<f64>,
}

/// Parameter storage shared by training workers. Workers write rows without
/// synchronization when training lock-free.
struct Params {
    target: *mut f32,
    context: *mut f32,
    dim: usize,
}

unsafe impl Send for Params {}
unsafe impl Sync for Params {}

impl Params {
    /// Safety: callers must not hold two live references to the same row
    /// within one thread.
    #[allow(clippy::mut_from_ref)]
    unsafe fn target(&self, i: usize) -> &mut [f32] {
        std::slice::from_raw_parts_mut(self.target.add(i * self.dim), self.dim)
    }

    #[allow(clippy::mut_from_ref)]
    unsafe fn context(&self, i: usize) -> &mut [f32] {
        std::slice::from_raw_parts_mut(self.context.add(i * self.dim), self.dim)
    }

    #[inline(always)]
    fn prefetch_target(&self, i: usize) {
        prefetch(self.target.wrapping_add(i * self.dim), self.dim);
    }

    #[inline(always)]
    fn prefetch_context(&self, i: usize) {
        prefetch(self.context.wrapping_add(i * self.dim), self.dim);
    }
}

/// Hints the cache lines of `len` floats at `ptr` into L1.
#[inline(always)]
fn prefetch(ptr: *const f32, len: usize) {
    #[cfg(target_arch = "x86_64")]
    for line in (0..len).step_by(16) {
        // SAFETY: prefetching never faults, even on an invalid address.
        unsafe {
            std::arch::x86_64::_mm_prefetch::<{ std::arch::x86_64::_MM_HINT_T0 }>(ptr.wrapping_add(line).cast());
        }
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = (ptr, len);
}

struct Schedule {
    lr_initial: f64,
    lr_final: f64,
    total: usize,
}

impl Schedule {
    fn at(&self, done: usize) -> f32 {
        let frac = (done as f64 / self.total.max(1) as f64).min(1.0);
        (self.lr_initial - (self.lr_initial - self.lr_final) * frac) as f32
    }
}

/// Trains over `pairs` in order and returns the summed objective.
#[allow(clippy::too_many_arguments)]
fn run_chunk(
    params: &Params,
    pairs: &[(u32, u32)],
    sampler: &UnigramSampler,
    negatives: usize,
    schedule: &Schedule,
    progress: &AtomicUsize,
    rng: &mut ChaCha8Rng,
    track: bool,
) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("avx2") {
        // SAFETY: the feature was detected at runtime.
        return unsafe { run_chunk_avx2(params, pairs, sampler, negatives, schedule, progress, rng, track) };
    }
    run_chunk_body(params, pairs, sampler, negatives, schedule, progress, rng, track)
}

/// Same loop compiled with 256-bit vectors. The body uses no fused
/// multiply-add, so results match the portable build bit for bit.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
#[allow(clippy::too_many_arguments)]
unsafe fn run_chunk_avx2(
    params: &Params,
    pairs: &[(u32, u32)],
    sampler: &UnigramSampler,
    negatives: usize,
    schedule: &Schedule,
    progress: &AtomicUsize,
    rng: &mut ChaCha8Rng,
    track: bool,
) -> f64 {
    run_chunk_body(params, pairs, sampler, negatives, schedule, progress, rng, track)
}

#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn run_chunk_body(
    params: &Params,
    pairs: &[(u32, u32)],
    sampler: &UnigramSampler,
    negatives: usize,
    schedule: &Schedule,
    progress: &AtomicUsize,
    rng: &mut ChaCha8Rng,
    track: bool,
) -> f64 {
    let dim = params.dim;
    let mut grad = vec![0f32; dim];
    let mut objective = 0.0;
    let mut local = 0usize;
    let mut lr = schedule.at(progress.load(Ordering::Relaxed));
    // Negatives are drawn one pair ahead so their rows can be prefetched;
    // the draw sequence is unchanged.
    let mut current = vec![0usize; negatives];
    let mut upcoming = vec![0usize; negatives];
    let draw = |buf: &mut [usize], rng: &mut ChaCha8Rng| {
        for slot in buf.iter_mut() {
            *slot = sampler.sample(rng);
        }
    };
    if !pairs.is_empty() {
        draw(&mut upcoming, rng);
    }
    for (p, &(center, ctx)) in pairs.iter().enumerate() {
        if local == 1024 {
            let done = progress.fetch_add(local, Ordering::Relaxed) + local;
            lr = schedule.at(done);
            local = 0;
        }
        local += 1;
        std::mem::swap(&mut current, &mut upcoming);
        if let Some(&(next_center, next_ctx)) = pairs.get(p + 1) {
            draw(&mut upcoming, rng);
            params.prefetch_target(next_center as usize);
            params.prefetch_context(next_ctx as usize);
            for &node in &upcoming {
                params.prefetch_context(node);
            }
        }
        grad.iter_mut().for_each(|g| *g = 0.0);
        // SAFETY: `h` is a target row and `c` a context row; they live in
        // different buffers and are not held across iterations.
        let h = unsafe { params.target(center as usize) };
        for k in 0..=negatives {
            let (node, label) = if k == 0 { (ctx as usize, 1.0f32) } else { (current[k - 1], 0.0f32) };
            let c = unsafe { params.context(node) };
            let f = dot(h, c);
            if track {
                objective += if k == 0 { log_sigmoid32(f) } else { log_sigmoid32(-f) };
            }
            let g = (label - sigmoid32(f)) * lr;
            accumulate_and_step(g, h, c, &mut grad);
        }
        axpy(1.0, &grad, h);
    }
    progress.fetch_add(local, Ordering::Relaxed);
    objective
}

fn train_impl(pairs: &PairCorpus, sampler: &UnigramSampler, cfg: &TrainConfig, track: bool) -> Result<(EmbeddingMatrix, TrainReport)> {
    cfg.validate()?;
    if pairs.is_empty() && cfg.epochs > 0 {
        return Err(Error::InvalidConfig("no training pairs".into()));
    }
    let (n, dim) = (pairs.num_nodes, cfg.dim);
    let seed = derive_seed(cfg.seed, tags::TRAIN);
    let mut init = stream(seed, 0);
    let bound = 0.5 / dim as f32;
    let mut target: Vec<f32> = (0..n * dim).map(|_| init.random_range(-bound..=bound)).collect();
    let mut context = vec![0f32; n * dim];
    let params = Params {
        target: target.as_mut_ptr(),
        context: context.as_mut_ptr(),
        dim,
    };
    let schedule = Schedule {
        lr_initial: cfg.lr_initial,
        lr_final: cfg.lr_final,
        total: pairs.len() * cfg.epochs,
    };
    let progress = AtomicUsize::new(0);
    let threads = if cfg.deterministic { 1 } else { cfg.threads.max(1) };
    let mut order = pairs.pairs.clone();
    let mut report = TrainReport::default();
    for epoch in 0..cfg.epochs {
        let mut shuffle = stream(seed, 1 + epoch as u64 * (threads as u64 + 1));
        order.shuffle(&mut shuffle);
        let objective = if threads == 1 {
            let mut rng = stream(seed, 2 + epoch as u64 * (threads as u64 + 1));
            run_chunk(&params, &order, sampler, cfg.negatives, &schedule, &progress, &mut rng, track)
        } else {
            let chunk = order.len().div_ceil(threads);
            std::thread::scope(|scope| {
                let handles: Vec<_> = order
                    .chunks(chunk)
                    .enumerate()
                    .map(|(t, part)| {
                        let (params, schedule, progress) = (&params, &schedule, &progress);
                        let stream_id = 2 + t as u64 + epoch as u64 * (threads as u64 + 1);
                        scope.spawn(move || {
                            let mut rng = stream(seed, stream_id);
                            run_chunk(params, part, sampler, cfg.negatives, schedule, progress, &mut rng, track)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("training worker panicked")).sum()
            })
        };
        if track {
            report.epoch_objectives.push(objective / order.len() as f64);
        }
        log::debug!("epoch {} of {} done", epoch + 1, cfg.epochs);
    }
    drop(params);
    let z = EmbeddingMatrix::from_vec(n, dim, target.into_iter().map(f64::from).collect())?;
    Ok((z, report))
}

/// Trains target vectors; context vectors are discarded.
pub fn train(pairs: &PairCorpus, sampler: &UnigramSampler, cfg: &TrainConfig) -> Result<EmbeddingMatrix> {
    train_impl(pairs, sampler, cfg, false).map(|(z, _)| z)
}

/// [`train`] that also records the mean per-pair objective of each epoch.
pub fn train_with_report(
    pairs: &PairCorpus,
    sampler: &UnigramSampler,
    cfg: &TrainConfig,
) -> Result<(EmbeddingMatrix, TrainReport)> {
    train_impl(pairs, sampler, cfg, true)
}

/// Walks to embedding: pairs, unigram table, training.
pub fn embed_corpus(corpus: &WalkCorpus, cfg: &TrainConfig) -> Result<EmbeddingMatrix> {
    let pairs = extract_pairs(corpus, cfg.window)?;
    let sampler = build_unigram_sampler(corpus, cfg.ns_exponent)?;
    train(&pairs, &sampler, cfg)
}
