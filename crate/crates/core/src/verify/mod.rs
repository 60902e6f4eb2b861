//! Sampling checks of the sink-constant bounds.
//!
//! Every verifier returns a [`VerificationReport`]. Margins are oriented so
//! that a non-negative value means the bound held at that sample; the report
//! keeps the smallest margin seen and the point that produced it.

mod genus2;
mod hat;
mod sampler;
mod sinks;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::markoff::{edge_move, MarkoffTriple, MuParams};
use crate::farey::Color;
use crate::scalar::MapScalar;

pub use genus2::{genus2_corner, genus2_corner_check, genus2_f, Genus2Corner, ZPolicy, Z_OFFSET};
pub use hat::{hat_edge_partner, hat_transform, hat_vertex_residual, verify_hat_lemma, HAT_BOUND};
pub use sinks::{
    complex_sink_margin, verify_complex_sink_constant, verify_positive_sink, verify_real_sink,
};

/// Tolerance for sampled minima.
pub const SAMPLED_TOLERANCE: f64 = 1e-6;
/// Tolerance for checks against exact witnesses.
pub const EXACT_TOLERANCE: f64 = 1e-8;

/// Budget and reproducibility settings shared by the random verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingOptions {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool. Results do not depend
    /// on this value.
    pub workers: Option<usize>,
}

impl SamplingOptions {
    pub fn new(samples: u64, seed: u64) -> SamplingOptions {
        SamplingOptions {
            samples,
            seed,
            workers: None,
        }
    }

    pub fn with_workers(self, workers: usize) -> SamplingOptions {
        SamplingOptions {
            workers: Some(workers),
            ..self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    /// Points drawn (or grid points visited).
    pub samples: u64,
    /// Points that landed in the domain under test.
    pub accepted: u64,
    pub bound: f64,
    pub tolerance: f64,
    /// Smallest margin over accepted samples; `None` when nothing was
    /// accepted.
    pub worst_margin: Option<f64>,
    pub witness: Vec<Complex64>,
    pub passed: bool,
    pub seed: u64,
    /// Secondary quantities, e.g. a margin against a second bound.
    pub details: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub(crate) fn new(theorem: &str, bound: f64, tolerance: f64, seed: u64) -> VerificationReport {
        VerificationReport {
            theorem: theorem.to_string(),
            samples: 0,
            accepted: 0,
            bound,
            tolerance,
            worst_margin: None,
            witness: Vec::new(),
            passed: false,
            seed,
            details: BTreeMap::new(),
        }
    }

    pub(crate) fn finish(mut self) -> VerificationReport {
        self.passed = self.worst_margin.is_some_and(|m| m >= -self.tolerance);
        self
    }
}

/// The three inequalities `|xᵢ| ≤ |xⱼxₖ − xᵢ − λᵢ|` (ties allowed, with the
/// same relative tie tolerance as arrow orientation).
pub fn sink_conditions(t: &MarkoffTriple, mu: &MuParams) -> bool {
    Color::ALL.iter().all(|&c| {
        let moved = edge_move(t, c, mu).get(c);
        t.get(c).cmp_modulus(&moved) != Ordering::Greater
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sink_condition_examples() {
        assert!(sink_conditions(&MarkoffTriple::real(3.0, 3.0, 3.0), &MuParams::real(0.0, 0.0, 0.0, 0.0)));
        assert!(sink_conditions(
            &MarkoffTriple::real(-10.0, -10.0, 10.0),
            &MuParams::real(-50.0, 30.0, 50.0, 0.0)
        ));
        assert!(!sink_conditions(&MarkoffTriple::real(3.0, 3.0, 6.0), &MuParams::real(0.0, 0.0, 0.0, 0.0)));
        for m in [
            Complex64::new(0.0, 0.0),
            Complex64::new(-5.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(-30.0, 40.0),
            Complex64::new(50.0, 0.0),
        ] {
            let t = crate::cubic::dominant_root(m);
            assert!(sink_conditions(&MarkoffTriple::new(t, t, t), &MuParams::classical(m)), "{m}");
        }
    }
}
