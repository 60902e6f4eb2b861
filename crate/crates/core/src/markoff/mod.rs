//! μ-Markoff triples, maps, arrows and the trace-reduction descent.

mod map;
mod reduce;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::Color;

pub use map::{Arrow, MarkoffMap, MapSnapshot, VertexClass, VertexInfo, DEFAULT_VALUE_LIMIT};
pub use reduce::{min_region_search, trace_reduce, ReductionOutcome, DEFAULT_DEPTH_CAP};

/// `μ = (λ₁, λ₂, λ₃, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[Complex64; 4]", from = "[Complex64; 4]")]
pub struct MuParams {
    pub lambda: [Complex64; 3],
    pub s: Complex64,
}

impl MuParams {
    pub fn new(l1: Complex64, l2: Complex64, l3: Complex64, s: Complex64) -> Result<MuParams> {
        if ![l1, l2, l3, s].iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("mu"));
        }
        Ok(MuParams {
            lambda: [l1, l2, l3],
            s,
        })
    }

    pub fn real(l1: f64, l2: f64, l3: f64, s: f64) -> MuParams {
        let c = |x| Complex64::new(x, 0.0);
        MuParams {
            lambda: [c(l1), c(l2), c(l3)],
            s: c(s),
        }
    }

    /// `(0, 0, 0, m)`.
    pub fn classical(m: Complex64) -> MuParams {
        let zero = Complex64::new(0.0, 0.0);
        MuParams {
            lambda: [zero; 3],
            s: m,
        }
    }

    pub fn lambda_of(&self, c: Color) -> Complex64 {
        self.lambda[c.index()]
    }

    pub fn is_classical(&self) -> bool {
        self.lambda.iter().all(|l| *l == Complex64::new(0.0, 0.0))
    }
}

impl From<MuParams> for [Complex64; 4] {
    fn from(m: MuParams) -> Self {
        [m.lambda[0], m.lambda[1], m.lambda[2], m.s]
    }
}

impl From<[Complex64; 4]> for MuParams {
    fn from(v: [Complex64; 4]) -> Self {
        MuParams {
            lambda: [v[0], v[1], v[2]],
            s: v[3],
        }
    }
}

impl fmt::Display for MuParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.lambda.map(crate::io::format_complex);
        write!(f, "({a}, {b}, {c}, {})", crate::io::format_complex(self.s))
    }
}

/// Values `(x₁, x₂, x₃)` indexed by region color.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkoffTriple(pub [Complex64; 3]);

impl MarkoffTriple {
    pub fn new(x1: Complex64, x2: Complex64, x3: Complex64) -> MarkoffTriple {
        MarkoffTriple([x1, x2, x3])
    }

    pub fn real(x1: f64, x2: f64, x3: f64) -> MarkoffTriple {
        MarkoffTriple([x1, x2, x3].map(|x| Complex64::new(x, 0.0)))
    }

    pub fn get(&self, c: Color) -> Complex64 {
        self.0[c.index()]
    }

    pub fn min_modulus(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Scale used for relative residual checks: `max(1, max|xᵢ|)³`.
    pub fn scale(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(1.0, f64::max).powi(3)
    }
}

impl fmt::Display for MarkoffTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0.map(crate::io::format_complex);
        write!(f, "({a}, {b}, {c})")
    }
}

/// `x₁² + x₂² + x₃² − x₁x₂x₃ + λ₁x₁ + λ₂x₂ + λ₃x₃ − s`.
pub fn vertex_residual(t: &MarkoffTriple, mu: &MuParams) -> Complex64 {
    let [x1, x2, x3] = t.0;
    let [l1, l2, l3] = mu.lambda;
    x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3 + l1 * x1 + l2 * x2 + l3 * x3 - mu.s
}

/// Vertex residual relative to the size of its largest term.
pub fn relative_residual(t: &MarkoffTriple, mu: &MuParams) -> f64 {
    let lam = mu.lambda.iter().map(|l| l.norm()).fold(1.0, f64::max);
    let scale = t.scale() + lam * t.scale().cbrt() + mu.s.norm();
    vertex_residual(t, mu).norm() / scale
}

/// Replaces `xᵢ` by `xⱼxₖ − xᵢ − λᵢ`. An involution.
pub fn edge_move(t: &MarkoffTriple, i: Color, mu: &MuParams) -> MarkoffTriple {
    let (j, k) = i.others();
    let mut out = *t;
    out.0[i.index()] = t.get(j) * t.get(k) - t.get(i) - mu.lambda_of(i);
    out
}

/// Solves the vertex equation for the color-`i` coordinate given the other
/// two; returns both roots of the quadratic.
pub fn solve_for(
    i: Color,
    known: (Complex64, Complex64),
    mu: &MuParams,
) -> [Complex64; 2] {
    let (j, k) = i.others();
    let (xj, xk) = known;
    // x² + (λᵢ − xⱼxₖ)x + (xⱼ² + xₖ² + λⱼxⱼ + λₖxₖ − s) = 0
    let b = mu.lambda_of(i) - xj * xk;
    let c = xj * xj + xk * xk + mu.lambda_of(j) * xj + mu.lambda_of(k) * xk - mu.s;
    let disc = (b * b - 4.0 * c).sqrt();
    // avoid cancellation: q = −(b + sign·disc)/2, roots q and c/q
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        [Complex64::new(0.0, 0.0); 2]
    } else {
        [q, c / q]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_examples() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(
            vertex_residual(&MarkoffTriple::real(3.0, 3.0, 3.0), &MuParams::real(0.0, 0.0, 0.0, 0.0)),
            zero
        );
        assert_eq!(
            vertex_residual(
                &MarkoffTriple::real(7.0, 7.0, 7.0),
                &MuParams::real(8.0, 8.0, 8.0, -28.0)
            ),
            zero
        );
        assert_eq!(
            vertex_residual(
                &MarkoffTriple::real(-10.0, -10.0, 10.0),
                &MuParams::real(-50.0, 30.0, 50.0, 0.0)
            ),
            zero
        );
    }

    #[test]
    fn edge_move_examples() {
        let mu0 = MuParams::real(0.0, 0.0, 0.0, 0.0);
        assert_eq!(
            edge_move(&MarkoffTriple::real(3.0, 3.0, 3.0), Color::Three, &mu0),
            MarkoffTriple::real(3.0, 3.0, 6.0)
        );
        let mu = MuParams::real(8.0, 8.0, 8.0, -28.0);
        assert_eq!(
            edge_move(&MarkoffTriple::real(7.0, 7.0, 7.0), Color::One, &mu),
            MarkoffTriple::real(34.0, 7.0, 7.0)
        );
    }

    #[test]
    fn solve_for_lands_on_variety() {
        let mu = MuParams::real(1.0, -2.0, 0.5, 3.0);
        let x = Complex64::new(1.2, -0.7);
        let y = Complex64::new(-2.5, 0.3);
        for z in solve_for(Color::Three, (x, y), &mu) {
            let t = MarkoffTriple::new(x, y, z);
            assert!(vertex_residual(&t, &mu).norm() < 1e-12);
        }
        for w in solve_for(Color::One, (x, y), &mu) {
            let t = MarkoffTriple::new(w, x, y);
            assert!(vertex_residual(&t, &mu).norm() < 1e-12);
        }
    }

    #[test]
    fn mu_json_shape() {
        let mu = MuParams::real(8.0, 8.0, 8.0, -28.0);
        let v = serde_json::to_value(mu).unwrap();
        assert_eq!(v, serde_json::json!([[8.0, 0.0], [8.0, 0.0], [8.0, 0.0], [-28.0, 0.0]]));
        let back: MuParams = serde_json::from_value(v).unwrap();
        assert_eq!(back, mu);
    }
}
