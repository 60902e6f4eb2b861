//! The shifted map `x̂ = x + 2` for the `(8, 8, 8, −28)` parameters, whose
//! vertex relation is `(x̂ + ŷ + ẑ)² = x̂ŷẑ`.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::sampler::{chunk_rng, disk_point, minimize, Problem};
use super::{SamplingOptions, VerificationReport, EXACT_TOLERANCE};
use crate::error::{Error, Result};
use crate::markoff::{relative_residual, MarkoffTriple, MuParams};

pub const HAT_BOUND: f64 = 9.0;
const ENVELOPE: f64 = 3.0 * HAT_BOUND;
const IDENTITY_CHECKS: u64 = 10_000;
const IDENTITY_PHASE: u64 = 0xFFFF;

fn qf_params() -> MuParams {
    MuParams::real(8.0, 8.0, 8.0, -28.0)
}

/// `(x + 2, y + 2, z + 2)` for a triple on the `(8, 8, 8, −28)` variety.
pub fn hat_transform(t: &MarkoffTriple) -> Result<MarkoffTriple> {
    let r = relative_residual(t, &qf_params());
    if r > 1e-9 {
        return Err(Error::OffVariety(r));
    }
    Ok(MarkoffTriple(t.0.map(|x| x + 2.0)))
}

/// `(x̂ + ŷ + ẑ)² − x̂ŷẑ`.
pub fn hat_vertex_residual(h: &MarkoffTriple) -> Complex64 {
    let [x, y, z] = h.0;
    (x + y + z) * (x + y + z) - x * y * z
}

/// The value replacing `ẑ` across the edge opposite it:
/// `ẑ′ = x̂ŷ − 2(x̂ + ŷ) − ẑ`.
pub fn hat_edge_partner(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    x * y - 2.0 * (x + y) - z
}

fn hat_sink(h: &[Complex64; 3]) -> bool {
    let [x, y, z] = *h;
    x.norm() <= hat_edge_partner(y, z, x).norm()
        && y.norm() <= hat_edge_partner(x, z, y).norm()
        && z.norm() <= hat_edge_partner(x, y, z).norm()
}

/// Both roots `ẑ` of the hat vertex relation for given `x̂, ŷ`.
fn hat_third(x: Complex64, y: Complex64) -> [Complex64; 2] {
    // ẑ² + (2(x̂ + ŷ) − x̂ŷ)ẑ + (x̂ + ŷ)² = 0
    let b = 2.0 * (x + y) - x * y;
    let c = (x + y) * (x + y);
    let disc = (b * b - 4.0 * c).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        [q, q]
    } else {
        [q, c / q]
    }
}

struct HatSink;

impl Problem for HatSink {
    fn dim(&self) -> usize {
        4
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let x = disk_point(rng, ENVELOPE);
        let y = disk_point(rng, ENVELOPE);
        vec![x.re, x.im, y.re, y.im]
    }

    fn evaluate(&self, p: &[f64]) -> Option<(f64, Vec<Complex64>)> {
        let x = Complex64::new(p[0], p[1]);
        let y = Complex64::new(p[2], p[3]);
        if x.norm() > ENVELOPE || y.norm() > ENVELOPE {
            return None;
        }
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for z in hat_third(x, y) {
            let h = [x, y, z];
            if !hat_sink(&h) {
                continue;
            }
            let m = HAT_BOUND - h.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|(b, _)| m < *b) {
                best = Some((m, h.to_vec()));
            }
        }
        best
    }

    fn refine_scale(&self) -> f64 {
        0.5
    }
}

/// Samples sinks of hat maps and checks `min |x̂ᵢ| ≤ 9`. Also records, on
/// a fixed subsample, the largest defect of the hat vertex relation against
/// the original vertex equation and of the hat edge relation.
pub fn verify_hat_lemma(opts: &SamplingOptions) -> Result<VerificationReport> {
    if opts.samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let out = minimize(&HatSink, opts.samples, opts.seed, opts.workers);
    let mut rep = VerificationReport::new("hat-lemma", HAT_BOUND, EXACT_TOLERANCE, opts.seed);
    rep.samples = out.drawn;
    rep.accepted = out.accepted;
    if let Some(best) = out.best {
        rep.worst_margin = Some(best.margin);
        rep.witness = best.witness;
    }

    let mu = qf_params();
    let mut rng = chunk_rng(opts.seed, IDENTITY_PHASE, 0);
    let (mut vertex_defect, mut edge_defect) = (0.0f64, 0.0f64);
    for _ in 0..IDENTITY_CHECKS.min(opts.samples) {
        let x = disk_point(&mut rng, ENVELOPE);
        let y = disk_point(&mut rng, ENVELOPE);
        let z = hat_third(x, y)[0];
        let orig = MarkoffTriple::new(x - 2.0, y - 2.0, z - 2.0);
        vertex_defect = vertex_defect.max(relative_residual(&orig, &mu));
        let zp = hat_edge_partner(x, y, z);
        let xy = x * y;
        if xy.norm() > 1e-6 {
            let rel = (x + y + z) / xy + (x + y + zp) / xy - 1.0;
            edge_defect = edge_defect.max(rel.norm());
        }
    }
    rep.details.insert("vertex_identity_defect".into(), vertex_defect);
    rep.details.insert("edge_identity_defect".into(), edge_defect);
    let identities_hold = vertex_defect < 1e-9 && edge_defect < 1e-9;
    let rep = rep.finish();
    Ok(VerificationReport {
        passed: rep.passed && identities_hold,
        ..rep
    })
}
