//! Character varieties seen through Markoff maps: the one-holed torus via
//! explicit `SL(2, ℂ)` matrices, the four-holed sphere via the GT map, and
//! the closed nonorientable surface of genus three.

use std::ops::Mul;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{slope_word, Letter, Slope, Word};
use crate::markoff::{vertex_residual, MarkoffMap, MarkoffTriple, MuParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Adjugate; the inverse when `det = 1`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn is_unimodular(&self) -> bool {
        (self.det() - 1.0).norm() <= 1e-12
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// `(0, 0, 0, k + 2)`: Markoff parameters of the one-holed torus with
/// commutator trace `k`. `k = 2` gives the degenerate `μ = 4`.
pub fn torus_mu(k: Complex64) -> MuParams {
    MuParams::classical(k + 2.0)
}

/// `x² + y² + z² − xyz − 2`, the commutator trace of a torus triple.
pub fn commutator_trace(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    x * x + y * y + z * z - x * y * z - 2.0
}

/// Matrices `A = [[x, −1], [1, 0]]`, `B = [[0, ξ], [−1/ξ, y]]` with
/// `ξ + 1/ξ = z`, so that `tr A = x`, `tr B = y`, `tr AB = z`. Of the two
/// roots `ξ` the one with `|ξ| ≥ 1` is taken, ties to `Im ξ > 0`.
pub fn realize_matrices(x: Complex64, y: Complex64, z: Complex64) -> Result<(Mat2, Mat2)> {
    if ![x, y, z].iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite("trace triple"));
    }
    let defect = commutator_trace(x, y, z) - 2.0;
    if defect.norm() <= 1e-10 {
        return Err(Error::Reducible(format!(
            "x² + y² + z² − xyz = 4 at ({x}, {y}, {z})"
        )));
    }
    let disc = (z * z - 4.0).sqrt();
    let (r1, r2) = ((z + disc) / 2.0, (z - disc) / 2.0);
    let xi = match r1.norm().total_cmp(&r2.norm()) {
        std::cmp::Ordering::Greater => r1,
        std::cmp::Ordering::Less => r2,
        std::cmp::Ordering::Equal => {
            if r1.im >= r2.im {
                r1
            } else {
                r2
            }
        }
    };
    let a = Mat2::new(x, -ONE, ONE, ZERO);
    let b = Mat2::new(ZERO, xi, -xi.inv(), y);
    Ok((a, b))
}

/// Trace of the image of `w` under `α ↦ A`, `β ↦ B`. Inverses are taken
/// as adjugates, so `A` and `B` should be unimodular.
pub fn word_trace(a: &Mat2, b: &Mat2, w: &Word) -> Complex64 {
    let (ai, bi) = (a.adjugate(), b.adjugate());
    w.letters()
        .iter()
        .fold(Mat2::IDENTITY, |m, l| {
            m * match l {
                Letter::Alpha => *a,
                Letter::Beta => *b,
                Letter::AlphaInv => ai,
                Letter::BetaInv => bi,
            }
        })
        .trace()
}

/// `(ab + cd, ad + bc, ac + bd, 4 − a² − b² − c² − d² − abcd)`.
pub fn gt_map(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> MuParams {
    MuParams {
        lambda: [a * b + c * d, a * d + b * c, a * c + b * d],
        s: 4.0 - a * a - b * b - c * c - d * d - a * b * c * d,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereMarkoff {
    pub triple: MarkoffTriple,
    pub mu: MuParams,
    /// Vertex residual of `triple` for `mu`; zero exactly when `(x, y, z)`
    /// lies on the relative character variety with boundary traces `tau`.
    pub residual: Complex64,
}

/// `x² + y² + z² + xyz − (px + qy + rz + s)` with `(p, q, r, s)` the GT
/// image of the boundary traces.
pub fn sphere_variety_residual(x: Complex64, y: Complex64, z: Complex64, tau: [Complex64; 4]) -> Complex64 {
    let mu = gt_map(tau[0], tau[1], tau[2], tau[3]);
    let [p, q, r] = mu.lambda;
    x * x + y * y + z * z + x * y * z - (p * x + q * y + r * z + mu.s)
}

/// `(−x, −y, −z)` with `μ = GT(τ)`.
pub fn sphere_rep_to_markoff(x: Complex64, y: Complex64, z: Complex64, tau: [Complex64; 4]) -> SphereMarkoff {
    let triple = MarkoffTriple::new(-x, -y, -z);
    let mu = gt_map(tau[0], tau[1], tau[2], tau[3]);
    SphereMarkoff {
        triple,
        residual: vertex_residual(&triple, &mu),
        mu,
    }
}

/// `a² + b² + c² − abc·d/2 − 4`.
pub fn n3_defect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    a * a + b * b + c * c - a * b * c * d / 2.0 - 4.0
}

/// Membership in the image of the genus-three character variety,
/// `a² + b² + c² − abc·d/2 = 4`, within `10⁻¹⁰`.
pub fn n3_check(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    n3_defect(a, b, c, d).norm() <= 1e-10
}

/// `(it, it, it, −it)` with `t² = 3 + √17`.
pub fn n3_extremal_character() -> [Complex64; 4] {
    let t = (3.0 + 17f64.sqrt()).sqrt();
    let it = Complex64::new(0.0, t);
    [it, it, it, -it]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum N3Markoff {
    /// `(cd/2, ad/2, bd/2)` on the `(0, 0, 0, d²)` variety.
    Map {
        triple: MarkoffTriple,
        mu: MuParams,
        residual: Complex64,
    },
    /// `d = 0`: no Markoff map; the character satisfies `a² + b² + c² = 4`.
    DZeroBranch { sum_of_squares: Complex64 },
}

pub fn n3_to_markoff(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<N3Markoff> {
    let defect = n3_defect(a, b, c, d);
    if defect.norm() > 1e-10 {
        return Err(Error::OffVariety(defect.norm()));
    }
    if d == ZERO {
        return Ok(N3Markoff::DZeroBranch {
            sum_of_squares: a * a + b * b + c * c,
        });
    }
    let triple = MarkoffTriple::new(c * d / 2.0, a * d / 2.0, b * d / 2.0);
    let mu = MuParams::classical(d * d);
    Ok(N3Markoff::Map {
        triple,
        residual: vertex_residual(&triple, &mu),
        mu,
    })
}

/// Every reduced `p/q` with `1 ≤ q ≤ max_den` and `|p| ≤ max_den`, then `∞`.
pub fn oracle_slopes(max_den: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        for p in -max_den..=max_den {
            if gcd(p, q) == 1 {
                out.push(Slope::new(p.into(), q.into()).expect("nonzero denominator"));
            }
        }
    }
    out.push(Slope::INFINITY);
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub base: MarkoffTriple,
    pub slopes: usize,
    /// Largest `|trace − value| / max(1, |value|)`.
    pub worst_relative: f64,
    pub worst_slope: Slope,
}

/// Compares matrix word traces with Markoff recursion values on every
/// slope of [`oracle_slopes`] for the torus map with base `(x, y, z)`.
pub fn cross_check_triple(base: MarkoffTriple, max_den: i64) -> Result<OracleComparison> {
    let [x, y, z] = base.0;
    let (a, b) = realize_matrices(x, y, z)?;
    let map = MarkoffMap::new(torus_mu(commutator_trace(x, y, z)), base)?;
    let mut worst = (0.0f64, Slope::INFINITY);
    let slopes = oracle_slopes(max_den);
    for s in &slopes {
        let value = map.region_value(s)?;
        let trace = word_trace(&a, &b, &slope_word(*s));
        let rel = (trace - value).norm() / value.norm().max(1.0);
        if !(rel <= worst.0) {
            worst = (rel, *s);
        }
    }
    Ok(OracleComparison {
        base,
        slopes: slopes.len(),
        worst_relative: worst.0,
        worst_slope: worst.1,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub trials: usize,
    pub max_denominator: i64,
    pub seed: u64,
    pub tolerance: f64,
    /// Trials whose worst relative deviation is within `tolerance`.
    pub matched: usize,
    pub worst: Option<OracleComparison>,
    pub passed: bool,
}

/// Random irreducible torus triples with coordinates uniform in the disk
/// `|w| ≤ 2.5`, each cross-checked by [`cross_check_triple`].
pub fn oracle_cross_check(trials: usize, max_den: i64, seed: u64) -> Result<OracleReport> {
    if trials == 0 || max_den < 1 {
        return Err(Error::Domain("need at least one trial and max denominator ≥ 1".into()));
    }
    const TOLERANCE: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let w = Complex64::new(rng.gen_range(-2.5..=2.5), rng.gen_range(-2.5..=2.5));
        if w.norm() <= 2.5 {
            return w;
        }
    };
    let mut bases = Vec::with_capacity(trials);
    while bases.len() < trials {
        let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        if (commutator_trace(x, y, z) - 2.0).norm() > 1e-6 {
            bases.push(MarkoffTriple::new(x, y, z));
        }
    }
    let mut matched = 0;
    let mut worst: Option<OracleComparison> = None;
    for base in bases {
        let cmp = cross_check_triple(base, max_den)?;
        if cmp.worst_relative <= TOLERANCE {
            matched += 1;
        }
        if worst.as_ref().is_none_or(|w| !(cmp.worst_relative <= w.worst_relative)) {
            worst = Some(cmp);
        }
    }
    Ok(OracleReport {
        trials,
        max_denominator: max_den,
        seed,
        tolerance: TOLERANCE,
        matched,
        worst,
        passed: matched == trials,
    })
}
