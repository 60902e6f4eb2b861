//! Deterministic parallel minimization by sampling.
//!
//! The budget is cut into fixed-size chunks; chunk `c` of phase `k` draws
//! from its own ChaCha stream, so results do not depend on how chunks are
//! spread over threads. Half the budget samples the envelope uniformly, the
//! other half resamples shrinking boxes around the best points found.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub(crate) const CHUNK: u64 = 2048;
const KEEP: usize = 8;
const ROUNDS: u64 = 24;
const SHRINK: f64 = 0.7;

/// A sampled minimization problem over `dim` real parameters.
pub(crate) trait Problem: Sync {
    fn dim(&self) -> usize;
    /// A point from the envelope distribution.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    /// `Some((margin, witness))` when the point lies in the domain.
    fn evaluate(&self, x: &[f64]) -> Option<(f64, Vec<Complex64>)>;
    /// Half-width of the first refinement box.
    fn refine_scale(&self) -> f64;
}

#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub margin: f64,
    pub params: Vec<f64>,
    pub witness: Vec<Complex64>,
    /// `(phase, chunk, index)`: a total order that breaks margin ties.
    key: (u64, u64, u64),
}

fn cmp_candidates(a: &Candidate, b: &Candidate) -> Ordering {
    a.margin.total_cmp(&b.margin).then(a.key.cmp(&b.key))
}

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub drawn: u64,
    pub accepted: u64,
    pub best: Option<Candidate>,
}

impl Outcome {
    /// Combined counts; the better of the two incumbents.
    pub(crate) fn merged(a: Outcome, b: Outcome) -> Outcome {
        let best = match (a.best, b.best) {
            (Some(x), Some(y)) => Some(if cmp_candidates(&x, &y) == Ordering::Greater { y } else { x }),
            (x, y) => x.or(y),
        };
        Outcome {
            drawn: a.drawn + b.drawn,
            accepted: a.accepted + b.accepted,
            best,
        }
    }
}

pub(crate) fn chunk_rng(seed: u64, phase: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((phase << 40) | chunk);
    rng
}

/// Runs `f` over `0..n` in parallel with an optional fixed thread count,
/// returning results in index order.
pub(crate) fn par_map<T, F>(n: u64, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let run = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}

fn merge(mut keep: Vec<Candidate>, more: impl IntoIterator<Item = Candidate>) -> Vec<Candidate> {
    keep.extend(more);
    keep.sort_by(cmp_candidates);
    keep.truncate(KEEP);
    keep
}

struct ChunkResult {
    drawn: u64,
    accepted: u64,
    top: Vec<Candidate>,
}

pub(crate) fn minimize<P: Problem>(p: &P, n: u64, seed: u64, workers: Option<usize>) -> Outcome {
    minimize_from(p, n, seed, 0, workers)
}

/// Phases used by one [`minimize`] run; a second run on the same seed
/// starting at this offset draws from disjoint streams.
pub(crate) const PHASES: u64 = 1 + ROUNDS;

pub(crate) fn minimize_from<P: Problem>(
    p: &P,
    n: u64,
    seed: u64,
    phase0: u64,
    workers: Option<usize>,
) -> Outcome {
    let uniform = n - n / 2;
    let refine = n / 2;

    let chunks = uniform.div_ceil(CHUNK);
    let results = par_map(chunks, workers, |c| {
        let mut rng = chunk_rng(seed, phase0, c);
        let count = CHUNK.min(uniform - c * CHUNK);
        let mut top = Vec::new();
        let mut accepted = 0;
        for i in 0..count {
            let x = p.draw(&mut rng);
            if let Some((margin, witness)) = p.evaluate(&x) {
                accepted += 1;
                top = merge(
                    top,
                    [Candidate {
                        margin,
                        params: x,
                        witness,
                        key: (phase0, c, i),
                    }],
                );
            }
        }
        ChunkResult {
            drawn: count,
            accepted,
            top,
        }
    });
    let mut out = Outcome::default();
    let mut keep = Vec::new();
    for r in results {
        out.drawn += r.drawn;
        out.accepted += r.accepted;
        keep = merge(keep, r.top);
    }

    if !keep.is_empty() && refine > 0 {
        let dim = p.dim();
        for round in 0..ROUNDS {
            let budget = refine / ROUNDS + u64::from(round < refine % ROUNDS);
            let radius = p.refine_scale() * SHRINK.powi(round as i32);
            let centers = keep.clone();
            let chunks = budget.div_ceil(CHUNK);
            let results = par_map(chunks, workers, |c| {
                let mut rng = chunk_rng(seed, phase0 + 1 + round, c);
                let count = CHUNK.min(budget - c * CHUNK);
                let mut top = Vec::new();
                let mut accepted = 0;
                for i in 0..count {
                    let center = &centers[((c * CHUNK + i) % centers.len() as u64) as usize];
                    let x: Vec<f64> = (0..dim)
                        .map(|k| center.params[k] + radius * rng.gen_range(-1.0..=1.0))
                        .collect();
                    if let Some((margin, witness)) = p.evaluate(&x) {
                        accepted += 1;
                        top = merge(
                            top,
                            [Candidate {
                                margin,
                                params: x,
                                witness,
                                key: (phase0 + 1 + round, c, i),
                            }],
                        );
                    }
                }
                ChunkResult {
                    drawn: count,
                    accepted,
                    top,
                }
            });
            for r in results {
                out.drawn += r.drawn;
                out.accepted += r.accepted;
                keep = merge(keep, r.top);
            }
        }
    }
    out.best = keep.into_iter().next();
    out
}

/// Uniform point of the disk `|w| ≤ radius`.
pub(crate) fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let x: f64 = rng.gen_range(-1.0..=1.0);
        let y: f64 = rng.gen_range(-1.0..=1.0);
        if x * x + y * y <= 1.0 {
            return Complex64::new(radius * x, radius * y);
        }
    }
}
