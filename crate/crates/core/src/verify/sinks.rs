use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sampler::{disk_point, minimize, minimize_from, par_map, Outcome, Problem, PHASES};
use super::{sink_conditions, SamplingOptions, VerificationReport, EXACT_TOLERANCE, SAMPLED_TOLERANCE};
use crate::cubic::{dominant_root, largest_real_root, positive_sink_bound, tau};
use crate::error::{Error, Result};
use crate::markoff::{MarkoffTriple, MuParams};
use crate::scalar::F64_TIE_REL;

fn check_not_four(m: Complex64) -> Result<()> {
    if (m - 4.0).norm() < 1e-12 {
        return Err(Error::Degenerate(
            "the constant degenerates at mu = 4 (double root t = 2)".into(),
        ));
    }
    Ok(())
}

/// `|pq| − |τ_m|²` when `(p, q, r)` with `r = (1 − p − q)/(1 − m·p·q)` lies
/// in the domain `|p| ≥ |q| ≥ |r|`, all real parts `≤ 1/2`; `None` outside.
/// The modulus ordering of `q` and `r` is tested with the arrow tie
/// tolerance, so the diagonal `p = q = r` belongs to the domain.
pub fn complex_sink_margin(m: Complex64, p: Complex64, q: Complex64) -> Option<(f64, Complex64)> {
    let tau_sq = tau(m).norm_sqr();
    let den = 1.0 - m * p * q;
    if den.norm() == 0.0 || p.re > 0.5 || q.re > 0.5 || p.norm() < q.norm() {
        return None;
    }
    let r = (1.0 - p - q) / den;
    if !(r.re.is_finite() && r.im.is_finite()) || r.re > 0.5 || q.norm() < r.norm() * (1.0 - F64_TIE_REL) {
        return None;
    }
    Some(((p * q).norm() - tau_sq, r))
}

struct ComplexSink {
    m: Complex64,
    radius: f64,
}

impl ComplexSink {
    fn half_disk(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        loop {
            let w = disk_point(rng, self.radius);
            if w.re <= 0.5 {
                return w;
            }
        }
    }
}

impl Problem for ComplexSink {
    fn dim(&self) -> usize {
        4
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut p = self.half_disk(rng);
        let mut q = self.half_disk(rng);
        if p.norm() < q.norm() {
            std::mem::swap(&mut p, &mut q);
        }
        vec![p.re, p.im, q.re, q.im]
    }

    fn evaluate(&self, x: &[f64]) -> Option<(f64, Vec<Complex64>)> {
        let p = Complex64::new(x[0], x[1]);
        let q = Complex64::new(x[2], x[3]);
        if p.norm() > self.radius || q.norm() > self.radius {
            return None;
        }
        let (margin, r) = complex_sink_margin(self.m, p, q)?;
        Some((margin, vec![p, q, r]))
    }

    fn refine_scale(&self) -> f64 {
        self.radius / 2.0
    }
}

/// The face `|p| = |q|` of the same domain, parametrized by `q` and the
/// angle `θ` with `p = q·e^{iθ}`. Shrinking `p` lowers `|pq|`, so minima
/// away from `Re p = 1/2` sit on this face; its basins are much wider than
/// in the full four-dimensional search.
struct ComplexSinkFace<'a>(&'a ComplexSink);

impl Problem for ComplexSinkFace<'_> {
    fn dim(&self) -> usize {
        3
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let q = self.0.half_disk(rng);
        vec![q.re, q.im, rng.gen_range(-PI..PI)]
    }

    fn evaluate(&self, x: &[f64]) -> Option<(f64, Vec<Complex64>)> {
        let mut q = Complex64::new(x[0], x[1]);
        let mut p = q * Complex64::from_polar(1.0, x[2]);
        if p.norm() < q.norm() {
            std::mem::swap(&mut p, &mut q);
        }
        self.0.evaluate(&[p.re, p.im, q.re, q.im])
    }

    fn refine_scale(&self) -> f64 {
        self.0.radius / 2.0
    }
}

/// Samples the domain of the complex sink lemma for `μ = (0, 0, 0, m)` and
/// checks `|pq| ≥ |τ_m|²`. The witness is `[p, q, r]`.
pub fn verify_complex_sink_constant(m: Complex64, opts: &SamplingOptions) -> Result<VerificationReport> {
    check_not_four(m)?;
    if opts.samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let t = tau(m);
    let problem = ComplexSink {
        m,
        radius: 3.0 * t.norm(),
    };
    let face = opts.samples / 2;
    let full = minimize(&problem, opts.samples - face, opts.seed, opts.workers);
    let edge = minimize_from(&ComplexSinkFace(&problem), face, opts.seed, PHASES, opts.workers);
    let out = Outcome::merged(full, edge);
    let mut rep = VerificationReport::new("complex-sink-constant", t.norm_sqr(), SAMPLED_TOLERANCE, opts.seed);
    rep.samples = out.drawn;
    rep.accepted = out.accepted;
    rep.details.insert("tau_re".into(), t.re);
    rep.details.insert("tau_im".into(), t.im);
    if let Some(best) = out.best {
        let dist = best.witness.iter().map(|w| (w - t).norm()).fold(0.0, f64::max);
        rep.details.insert("witness_distance_to_tau".into(), dist);
        rep.worst_margin = Some(best.margin);
        rep.witness = best.witness;
    }
    Ok(rep.finish())
}

fn real_quadratic_roots(b: f64, c: f64) -> Vec<f64> {
    // z² + b z + c = 0
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q, c / q]
}

/// Grid scan of real sinks on the `(0, 0, 0, μ)` variety over
/// `[-extent, extent]²`, solving for the third coordinate. Checks the bound
/// `max(|t′_μ|, 2)`; the margin against `|t_μ|` is reported in `details`.
pub fn verify_real_sink(mu: f64, extent: f64, steps: usize) -> Result<VerificationReport> {
    check_not_four(Complex64::new(mu, 0.0))?;
    if !(mu.is_finite() && extent.is_finite() && extent > 0.0) || steps < 2 {
        return Err(Error::Domain("need finite mu, extent > 0 and at least 2 grid steps".into()));
    }
    let t_real = largest_real_root(mu);
    let bound = t_real.abs().max(2.0);
    let dominant = dominant_root(Complex64::new(mu, 0.0)).norm();
    let params = MuParams::real(0.0, 0.0, 0.0, mu);
    let coord = |i: usize| -extent + 2.0 * extent * i as f64 / (steps - 1) as f64;

    let rows = par_map(steps as u64, None, |i| {
        let x = coord(i as usize);
        let mut worst: Option<(f64, [f64; 3])> = None;
        let mut accepted = 0u64;
        for j in 0..steps {
            let y = coord(j);
            for z in real_quadratic_roots(-x * y, x * x + y * y - mu) {
                let t = MarkoffTriple::real(x, y, z);
                if !sink_conditions(&t, &params) {
                    continue;
                }
                accepted += 1;
                let observed = x.abs().min(y.abs()).min(z.abs());
                let margin = bound - observed;
                if worst.is_none_or(|(w, _)| margin < w) {
                    worst = Some((margin, [x, y, z]));
                }
            }
        }
        (accepted, worst)
    });

    let mut rep = VerificationReport::new("real-sink", bound, EXACT_TOLERANCE, 0);
    rep.samples = (steps * steps) as u64;
    let mut worst: Option<(f64, [f64; 3])> = None;
    for (acc, w) in rows {
        rep.accepted += acc;
        if let Some((m, p)) = w {
            if worst.is_none_or(|(b, _)| m < b) {
                worst = Some((m, p));
            }
        }
    }
    rep.details.insert("largest_real_root".into(), t_real);
    rep.details.insert("dominant_root_modulus".into(), dominant);
    if let Some((m, p)) = worst {
        rep.worst_margin = Some(m);
        rep.witness = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        rep.details.insert("margin_vs_dominant_root".into(), m - bound + dominant);
    }
    Ok(rep.finish())
}

struct PositiveSink {
    mu: [f64; 4],
    bound: f64,
    envelope: f64,
}

impl PositiveSink {
    fn margin(&self, x: f64, y: f64) -> Option<(f64, Vec<Complex64>)> {
        let [l1, l2, l3, s] = self.mu;
        if !(x > 0.0 && y > 0.0 && x <= self.envelope && y <= self.envelope) {
            return None;
        }
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for z in real_quadratic_roots(l3 - x * y, x * x + y * y + l1 * x + l2 * y - s) {
            if z <= 0.0 {
                continue;
            }
            let in_domain = y * z - 2.0 * x - l1 >= 0.0
                && x * z - 2.0 * y - l2 >= 0.0
                && x * y - 2.0 * z - l3 >= 0.0;
            if !in_domain {
                continue;
            }
            let margin = self.bound - x.min(y).min(z);
            if best.as_ref().is_none_or(|(b, _)| margin < *b) {
                best = Some((margin, [x, y, z].map(|v| Complex64::new(v, 0.0)).to_vec()));
            }
        }
        best
    }
}

impl Problem for PositiveSink {
    fn dim(&self) -> usize {
        2
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        vec![
            rng.gen_range(0.0..self.envelope),
            rng.gen_range(0.0..self.envelope),
        ]
    }

    fn evaluate(&self, x: &[f64]) -> Option<(f64, Vec<Complex64>)> {
        self.margin(x[0], x[1])
    }

    fn refine_scale(&self) -> f64 {
        self.bound / 20.0
    }
}

/// Samples positive on-variety triples in the positive sink set
/// `xⱼxₖ − 2xᵢ − λᵢ ≥ 0` and checks `min xᵢ ≤ T_μ`.
pub fn verify_positive_sink(mu: &MuParams, opts: &SamplingOptions) -> Result<VerificationReport> {
    let all = [mu.lambda[0], mu.lambda[1], mu.lambda[2], mu.s];
    if all.iter().any(|z| z.im != 0.0) {
        return Err(Error::Domain("positive sink bound needs real parameters".into()));
    }
    if opts.samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let [l1, l2, l3, s] = all.map(|z| z.re);
    let b = positive_sink_bound(l1, l2, l3, s)?;
    let problem = PositiveSink {
        mu: [l1, l2, l3, s],
        bound: b.value,
        envelope: 3.0 * b.value,
    };
    let out = minimize(&problem, opts.samples, opts.seed, opts.workers);
    let mut rep = VerificationReport::new("positive-sink", b.value, EXACT_TOLERANCE, opts.seed);
    rep.samples = out.drawn;
    rep.accepted = out.accepted;
    rep.details.insert("degenerate".into(), if b.degenerate { 1.0 } else { 0.0 });
    if let Some(best) = out.best {
        rep.worst_margin = Some(best.margin);
        rep.witness = best.witness;
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_triple_replays_to_zero_margin() {
        for m in [Complex64::new(0.0, 0.0), Complex64::new(2.0, 1.0), Complex64::new(-5.0, 0.0)] {
            let t = tau(m);
            let (margin, r) = complex_sink_margin(m, t, t).unwrap();
            assert!(margin.abs() < 1e-14);
            assert!((r - t).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_mu_rejected() {
        let opts = SamplingOptions::new(10, 1);
        assert!(matches!(
            verify_complex_sink_constant(Complex64::new(4.0, 0.0), &opts),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(verify_real_sink(4.0, 5.0, 10), Err(Error::Degenerate(_))));
    }

    #[test]
    fn complex_sink_small_run() {
        let rep = verify_complex_sink_constant(Complex64::new(0.0, 0.0), &SamplingOptions::new(20_000, 1)).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.accepted > 0);
        let replay = complex_sink_margin(Complex64::new(0.0, 0.0), rep.witness[0], rep.witness[1]).unwrap();
        assert_eq!(replay.0, rep.worst_margin.unwrap());
    }

    #[test]
    fn real_sink_bounds() {
        let rep = verify_real_sink(0.0, 6.0, 241).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.bound, 3.0);
        assert!(rep.worst_margin.unwrap() < 1e-9);
        let rep = verify_real_sink(54.0, 8.0, 161).unwrap();
        assert!(rep.passed);
        assert!((rep.bound - 3.0).abs() < 1e-12);
        let rep = verify_real_sink(10.0, 8.0, 161).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.bound, 2.0);
    }

    #[test]
    fn positive_sink_bounds() {
        let opts = SamplingOptions::new(20_000, 3);
        let rep = verify_positive_sink(&MuParams::real(8.0, 8.0, 8.0, -28.0), &opts).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.bound - 7.0).abs() < 1e-10);
        assert!(rep.worst_margin.unwrap() < 1e-3);
        let rep = verify_positive_sink(&MuParams::real(1.0, 1.0, 1.0, 0.0), &opts).unwrap();
        assert!((rep.bound - (3.0 + 21f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!(rep.passed);
        assert!(matches!(
            verify_positive_sink(&MuParams::real(-1.0, 0.0, 0.0, 0.0), &opts),
            Err(Error::Domain(_))
        ));
    }
}
