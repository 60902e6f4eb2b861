//! Corner inequalities for sinks of the four-holed sphere with boundary
//! traces `(a, a, d, −d)`, `2 < a < d`.
//!
//! With `λ = max(a³ − 3a² + 2, d³ + 3d² − 2)` and `B = 2λ + (a² − d²)`, the
//! function `f(x, y) = x² + y² + z² + xyz − (a² − d²)x − (a² − 2)(d² − 2)`
//! must be negative at the corner of the `xy < 0` sink domain and exceed 8
//! on the `xy > 0` branch. On the `xy < 0` branch with `y > 0` the corner
//! sits at `x = −λ`: the algebra of both cases expands `f(−λ, ·)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::VerificationReport;
use crate::error::{Error, Result};

/// Relative offset of `z²` from the case boundary `z² = B`.
pub const Z_OFFSET: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZPolicy {
    /// `z² = B + δ`, corner `y₀ = z`.
    Above,
    /// `z² = B − δ`, corner `y₀ = B/z`.
    Below,
    Both,
}

impl ZPolicy {
    fn cases(self) -> &'static [bool] {
        match self {
            ZPolicy::Above => &[true],
            ZPolicy::Below => &[false],
            ZPolicy::Both => &[true, false],
        }
    }
}

pub fn genus2_f(a: f64, d: f64, x: f64, y: f64, z: f64) -> f64 {
    let (a2, d2) = (a * a, d * d);
    x * x + y * y + z * z + x * y * z - (a2 - d2) * x - (a2 - 2.0) * (d2 - 2.0)
}

fn lambda(a: f64, d: f64) -> f64 {
    (a.powi(3) - 3.0 * a * a + 2.0).max(d.powi(3) + 3.0 * d * d - 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Genus2Corner {
    pub a: f64,
    pub d: f64,
    pub lambda: f64,
    pub z: f64,
    pub x0: f64,
    pub y0: f64,
    pub f: f64,
}

/// Corner evaluation for one `(a, d)` with `z² = B ± δ`, `δ = 10⁻³·λ`.
pub fn genus2_corner(a: f64, d: f64, above: bool) -> Genus2Corner {
    let lam = lambda(a, d);
    let b = 2.0 * lam + (a * a - d * d);
    let delta = Z_OFFSET * lam;
    let z = if above { b + delta } else { b - delta }.sqrt();
    let x0 = -lam;
    let y0 = z.max(b / z);
    Genus2Corner {
        a,
        d,
        lambda: lam,
        z,
        x0,
        y0,
        f: genus2_f(a, d, x0, y0, z),
    }
}

/// Points of the `xy > 0` branch with `x > λ` and `d < z < y`.
fn branch_points(a: f64, d: f64) -> Vec<[f64; 3]> {
    let lam = lambda(a, d);
    let root_b = (2.0 * lam + (a * a - d * d)).sqrt();
    let mut out = Vec::with_capacity(27);
    for x in [lam * (1.0 + 1e-3), 1.5 * lam, 3.0 * lam] {
        for z in [d * (1.0 + 1e-3), root_b, 2.0 * root_b] {
            for y in [z * (1.0 + 1e-3), 2.0 * z, 5.0 * z] {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Checks `f(corner) < 0` for every grid pair with `a < d` under the chosen
/// z-policy, and `f > 8` on sampled `xy > 0` points. The margin is `−f` at
/// corners and `f − 8` on the branch; the witness is `[a, d, x, y, z]`.
pub fn genus2_corner_check(a_grid: &[f64], d_grid: &[f64], policy: ZPolicy) -> Result<VerificationReport> {
    if a_grid.iter().chain(d_grid).any(|v| !(v.is_finite() && *v > 2.0)) {
        return Err(Error::Domain("grid values must be finite and greater than 2".into()));
    }
    let pairs: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| d_grid.iter().filter(move |&&d| a < d).map(move |&d| (a, d)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Domain("no grid pair with a < d".into()));
    }
    let mut rep = VerificationReport::new("genus2-corner", 0.0, 0.0, 0);
    let mut worst: Option<(f64, [f64; 5])> = None;
    let note = |m: f64, p: [f64; 5], worst: &mut Option<(f64, [f64; 5])>| {
        if worst.is_none_or(|(w, _)| m < w) {
            *worst = Some((m, p));
        }
    };
    let (mut corner_worst, mut branch_worst) = (f64::INFINITY, f64::INFINITY);
    for &(a, d) in &pairs {
        for &above in policy.cases() {
            let c = genus2_corner(a, d, above);
            rep.samples += 1;
            corner_worst = corner_worst.min(-c.f);
            note(-c.f, [a, d, c.x0, c.y0, c.z], &mut worst);
        }
        for [x, y, z] in branch_points(a, d) {
            rep.samples += 1;
            let m = genus2_f(a, d, x, y, z) - 8.0;
            branch_worst = branch_worst.min(m);
            note(m, [a, d, x, y, z], &mut worst);
        }
    }
    rep.accepted = rep.samples;
    rep.details.insert("worst_corner_margin".into(), corner_worst);
    rep.details.insert("worst_branch_margin".into(), branch_worst);
    if let Some((m, p)) = worst {
        rep.worst_margin = Some(m);
        rep.witness = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    }
    let rep = rep.finish();
    // both inequalities are strict
    let strict = corner_worst > 0.0 && branch_worst > 0.0;
    Ok(VerificationReport {
        passed: rep.passed && strict,
        ..rep
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_examples() {
        let c = genus2_corner(2.5, 3.0, true);
        assert!(c.f < 0.0, "{c:?}");
        assert_eq!(c.y0, c.z);
        let c = genus2_corner(2.1, 2.2, false);
        assert!(c.f < 0.0, "{c:?}");
        assert!(c.y0 > c.z);
    }

    #[test]
    fn positive_corner_would_not_be_negative() {
        // the same expression evaluated at x = +λ is large and positive
        let c = genus2_corner(2.5, 3.0, true);
        assert!(genus2_f(2.5, 3.0, c.lambda, c.y0, c.z) > 0.0);
    }

    #[test]
    fn small_grid() {
        let rep = genus2_corner_check(&[2.1, 2.5, 3.0], &[2.2, 3.0, 4.0], ZPolicy::Both).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(genus2_corner_check(&[1.5], &[3.0], ZPolicy::Both).is_err());
        assert!(genus2_corner_check(&[3.0], &[2.5], ZPolicy::Both).is_err());
    }
}
