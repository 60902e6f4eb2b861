//! Roots of the cubics behind every sink constant and trace-systole bound.
//!
//! * `t_a`: dominant root of `X³ − 3X² + a`
//! * `τ_a`: smallest root of `−aX³ + 3X − 1` (equal to `1/t_a`)
//! * `t′_μ`: largest-modulus real root of `X³ − 3X² + μ` for real `μ`
//! * `T_μ`: largest positive root of `X³ − 3X² − (λ₁+λ₂+λ₃)X + s`

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_POLISH_STEPS: usize = 60;
/// Relative tolerance under which two moduli count as tied.
const TIE_REL: f64 = 1e-12;
/// Roots closer than this (relative) are reported as one multiple root.
const CLUSTER_REL: f64 = 1e-6;

/// The three roots of a monic cubic, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    /// Sorted by modulus, then real part, then imaginary part, all descending.
    pub roots: [Complex64; 3],
    /// `|P(root)|` for each root.
    pub residuals: [f64; 3],
    /// Multiplicity of the cluster each root belongs to.
    pub multiplicity: [u8; 3],
}

impl CubicRoots {
    /// Distinct roots with their multiplicities.
    pub fn distinct(&self) -> Vec<(Complex64, u8)> {
        let mut out: Vec<(Complex64, u8)> = Vec::new();
        for (r, m) in self.roots.iter().zip(self.multiplicity) {
            if !out.iter().any(|(q, _)| close(*q, *r)) {
                out.push((*r, m));
            }
        }
        out
    }

    pub fn has_multiple_root(&self) -> bool {
        self.multiplicity.iter().any(|&m| m > 1)
    }
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= CLUSTER_REL * a.norm().max(b.norm()).max(1.0)
}

fn eval(c: [Complex64; 3], x: Complex64) -> (Complex64, Complex64) {
    let [c2, c1, c0] = c;
    let p = ((x + c2) * x + c1) * x + c0;
    let dp = (3.0 * x + 2.0 * c2) * x + c1;
    (p, dp)
}

fn polish(c: [Complex64; 3], mut x: Complex64) -> Complex64 {
    let (mut p, _) = eval(c, x);
    for _ in 0..MAX_POLISH_STEPS {
        let (_, dp) = eval(c, x);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        let (pn, _) = eval(c, next);
        if !(pn.norm() < p.norm()) {
            break;
        }
        x = next;
        p = pn;
    }
    x
}

/// Orders roots by modulus, then real part, then imaginary part, all
/// descending, treating relative differences below `TIE_REL` as ties.
pub fn dominance_order(a: &Complex64, b: &Complex64) -> Ordering {
    let tied = |u: f64, v: f64| (u - v).abs() <= TIE_REL * u.abs().max(v.abs()).max(1e-300);
    let (ma, mb) = (a.norm(), b.norm());
    if !tied(ma, mb) {
        return mb.partial_cmp(&ma).unwrap_or(Ordering::Equal);
    }
    if !tied(a.re, b.re) {
        return b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal);
    }
    b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal)
}

fn sort3(roots: &mut [Complex64; 3]) {
    // insertion sort: the tolerant comparator is not a total order
    for i in 1..3 {
        let mut j = i;
        while j > 0 && dominance_order(&roots[j - 1], &roots[j]) == Ordering::Greater {
            roots.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Roots of `X³ + c2·X² + c1·X + c0` by Cardano's formula in complex
/// arithmetic, each polished by Newton iteration.
pub fn solve_monic_cubic(c2: Complex64, c1: Complex64, c0: Complex64) -> Result<CubicRoots> {
    if ![c2, c1, c0].iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::NonFinite("cubic coefficient"));
    }
    let coeffs = [c2, c1, c0];
    // X = Y − c2/3 gives Y³ + pY + q.
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let ys: [Complex64; 3] = if p.norm() == 0.0 {
        let u = (-q).cbrt();
        [u, u * omega, u * omega * omega]
    } else {
        let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let w1 = -q / 2.0 + disc;
        let w2 = -q / 2.0 - disc;
        let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
        let u = w.cbrt();
        let y = |u: Complex64| u - p / (3.0 * u);
        [y(u), y(u * omega), y(u * omega * omega)]
    };
    let mut roots = ys.map(|y| polish(coeffs, y - shift));
    let real_input = [c2, c1, c0].iter().all(|c| c.im == 0.0);
    if real_input {
        snap_conjugates(&mut roots);
        roots = roots.map(|r| if r.im == 0.0 { polish(coeffs, r) } else { r });
    }
    sort3(&mut roots);
    let residuals = roots.map(|r| eval(coeffs, r).0.norm());
    let multiplicity = {
        let count = |r: Complex64| roots.iter().filter(|s| close(**s, r)).count() as u8;
        roots.map(count)
    };
    Ok(CubicRoots {
        roots,
        residuals,
        multiplicity,
    })
}

/// For real coefficients: nearly-real roots become exactly real and the
/// remaining pair becomes an exact conjugate pair.
fn snap_conjugates(roots: &mut [Complex64; 3]) {
    let scale = |r: &Complex64| r.norm().max(1.0);
    let mut real_idx: Vec<usize> = (0..3).filter(|&i| roots[i].im.abs() <= 1e-7 * scale(&roots[i])).collect();
    if real_idx.len() == 2 {
        // a real cubic has one or three real roots; keep the most real one
        real_idx.sort_by(|&i, &j| roots[i].im.abs().total_cmp(&roots[j].im.abs()));
        real_idx.truncate(1);
    }
    for &i in &real_idx {
        roots[i].im = 0.0;
    }
    if real_idx.len() == 1 {
        let others: Vec<usize> = (0..3).filter(|i| !real_idx.contains(i)).collect();
        let (a, b) = (roots[others[0]], roots[others[1]]);
        let re = (a.re + b.re) / 2.0;
        let im = (a.im.abs() + b.im.abs()) / 2.0;
        roots[others[0]] = Complex64::new(re, im);
        roots[others[1]] = Complex64::new(re, -im);
    }
}

fn markoff_cubic(a: Complex64) -> Result<CubicRoots> {
    solve_monic_cubic(Complex64::new(-3.0, 0.0), Complex64::new(0.0, 0.0), a)
}

/// `t_a`, the root of `X³ − 3X² + a` of maximal modulus. Ties between
/// equal-modulus roots go to the larger real part, then to the larger
/// imaginary part.
pub fn dominant_root(a: Complex64) -> Complex64 {
    if a == Complex64::new(4.0, 0.0) {
        return Complex64::new(2.0, 0.0);
    }
    markoff_cubic(a)
        .map(|r| r.roots[0])
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// `τ_a`, the root of `−a·X³ + 3X − 1` of minimal modulus; `1/3` at `a = 0`.
///
/// Solved from its own cubic rather than as `1/t_a`. Equal-modulus ties go
/// to the larger real part, then the smaller imaginary part, which keeps
/// `τ_a · t_a = 1`.
pub fn tau(a: Complex64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0 / 3.0, 0.0);
    }
    if a == Complex64::new(4.0, 0.0) {
        return Complex64::new(0.5, 0.0);
    }
    // monic form: X³ − (3/a)X + 1/a
    let roots = match solve_monic_cubic(Complex64::new(0.0, 0.0), -3.0 / a, 1.0 / a) {
        Ok(r) => r.roots,
        Err(_) => return Complex64::new(f64::NAN, f64::NAN),
    };
    let mut best = roots[2];
    for r in &roots[..2] {
        let (mr, mb) = (r.norm(), best.norm());
        let tied = (mr - mb).abs() <= TIE_REL * mr.max(mb);
        let better = if !tied {
            mr < mb
        } else if (r.re - best.re).abs() > TIE_REL * r.re.abs().max(best.re.abs()) {
            r.re > best.re
        } else {
            r.im < best.im
        };
        if better {
            best = *r;
        }
    }
    // polish against the original (non-monic) form, which stays well scaled
    // when |a| is tiny
    let f = |x: Complex64| -a * x * x * x + 3.0 * x - 1.0;
    let df = |x: Complex64| -3.0 * a * x * x + 3.0;
    let mut x = best;
    for _ in 0..MAX_POLISH_STEPS {
        let (fx, dfx) = (f(x), df(x));
        if fx.norm() == 0.0 || dfx.norm() == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if !(f(next).norm() < fx.norm()) {
            break;
        }
        x = next;
    }
    x
}

/// Real roots of `X³ + b·X² + c·X + d` (trigonometric / hyperbolic forms,
/// Newton-polished), in increasing order, multiple roots listed once.
pub fn real_cubic_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let f = |x: f64| ((x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * x + 2.0 * b) * x + c;
    let polish = |mut x: f64| {
        for _ in 0..MAX_POLISH_STEPS {
            let (fx, dfx) = (f(x), df(x));
            if fx == 0.0 || dfx == 0.0 {
                break;
            }
            let next = x - fx / dfx;
            if !(f(next).abs() < fx.abs()) {
                break;
            }
            x = next;
        }
        x
    };
    let scale = p.abs().max(q.abs()).max(1.0);
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let mut roots: Vec<f64> = if p == 0.0 && q == 0.0 {
        vec![shift]
    } else if disc.abs() <= 1e-14 * scale * scale {
        // simple root at 3q/p, double root at −3q/(2p)
        vec![shift + 3.0 * q / p, shift - 3.0 * q / (2.0 * p)]
    } else if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| shift + m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    } else if p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (-3.0 * q.abs() / (p * m)).max(1.0);
        vec![shift - q.signum() * m * (arg.acosh() / 3.0).cosh()]
    } else {
        let m = 2.0 * (p / 3.0).sqrt();
        let arg = 3.0 * q / (p * m);
        vec![shift - m * (arg.asinh() / 3.0).sinh()]
    };
    for r in roots.iter_mut() {
        *r = polish(*r);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() <= CLUSTER_REL * a.abs().max(1.0));
    roots
}

/// `t′_μ`: the real root of `X³ − 3X² + μ` of largest absolute value, ties
/// going to the positive root.
pub fn largest_real_root(mu: f64) -> f64 {
    real_cubic_roots(-3.0, 0.0, mu)
        .into_iter()
        .fold(f64::NAN, |best, r| {
            if best.is_nan() || r.abs() > best.abs() || (r.abs() == best.abs() && r > best) {
                r
            } else {
                best
            }
        })
}

/// The five regimes of the real roots of `X³ − 3X² + μ` (sign of the
/// discriminant `27μ(4 − μ)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealRootCase {
    /// `μ < 0`: one real root, greater than 3.
    Negative,
    /// `μ = 0`: roots 0 (double) and 3.
    Zero,
    /// `0 < μ < 4`: three real roots, one in (2,3), two in (−2,2).
    ThreeReal,
    /// `μ = 4`: roots −1 and 2 (double).
    Four,
    /// `μ > 4`: one real root, negative; `|t′| < 2` iff `μ < 20`.
    AboveFour,
}

impl RealRootCase {
    /// One-based index matching the usual enumeration of the five cases.
    pub fn number(self) -> u8 {
        match self {
            RealRootCase::Negative => 1,
            RealRootCase::Zero => 2,
            RealRootCase::ThreeReal => 3,
            RealRootCase::Four => 4,
            RealRootCase::AboveFour => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealRootReport {
    pub mu: f64,
    pub case: RealRootCase,
    /// Distinct real roots in increasing order.
    pub roots: Vec<f64>,
    /// Whether the roots sit where the case says they should.
    pub placement_ok: bool,
}

pub fn classify_real_roots(mu: f64) -> Result<RealRootReport> {
    if !mu.is_finite() {
        return Err(Error::NonFinite("mu"));
    }
    let (case, roots) = if mu < 0.0 {
        (RealRootCase::Negative, real_cubic_roots(-3.0, 0.0, mu))
    } else if mu == 0.0 {
        (RealRootCase::Zero, vec![0.0, 3.0])
    } else if mu < 4.0 {
        (RealRootCase::ThreeReal, real_cubic_roots(-3.0, 0.0, mu))
    } else if mu == 4.0 {
        (RealRootCase::Four, vec![-1.0, 2.0])
    } else {
        (RealRootCase::AboveFour, real_cubic_roots(-3.0, 0.0, mu))
    };
    let placement_ok = match case {
        RealRootCase::Negative => roots.len() == 1 && roots[0] > 3.0,
        RealRootCase::Zero | RealRootCase::Four => true,
        RealRootCase::ThreeReal => {
            roots.len() == 3
                && roots.iter().filter(|r| **r > 2.0 && **r < 3.0).count() == 1
                && roots.iter().filter(|r| r.abs() < 2.0).count() == 2
        }
        RealRootCase::AboveFour => {
            roots.len() == 1 && roots[0] < 0.0 && ((roots[0].abs() < 2.0) == (mu < 20.0))
        }
    };
    Ok(RealRootReport {
        mu,
        case,
        roots,
        placement_ok,
    })
}

/// `T_μ` together with a flag for the boundary case `P(2) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveSinkBound {
    pub value: f64,
    pub degenerate: bool,
}

/// `T_μ`, the largest positive root of `X³ − 3X² − (λ₁+λ₂+λ₃)X + s`, for
/// `μ ∈ [0,∞)³ × (−∞, 4]`.
pub fn positive_sink_bound(l1: f64, l2: f64, l3: f64, s: f64) -> Result<PositiveSinkBound> {
    if ![l1, l2, l3, s].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("positive sink parameters"));
    }
    if l1 < 0.0 || l2 < 0.0 || l3 < 0.0 || s > 4.0 {
        return Err(Error::Domain(format!(
            "({l1}, {l2}, {l3}, {s}) is outside [0,∞)³ × (−∞,4]"
        )));
    }
    let sum = l1 + l2 + l3;
    // P(2) = s − 4 − 2Σλ ≤ 0 on the domain, so the largest root is ≥ 2.
    let p2 = s - 4.0 - 2.0 * sum;
    if p2 == 0.0 {
        return Ok(PositiveSinkBound {
            value: 2.0,
            degenerate: true,
        });
    }
    let value = real_cubic_roots(-3.0, -sum, s)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PositiveSinkBound {
        value,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn monic_examples() {
        let r = solve_monic_cubic(c(-3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_close(r.roots[0], c(3.0, 0.0), 1e-12);
        assert_close(r.roots[1], c(0.0, 0.0), 1e-8);
        assert_close(r.roots[2], c(0.0, 0.0), 1e-8);
        assert_eq!(r.multiplicity, [1, 2, 2]);

        let r = solve_monic_cubic(c(-3.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)).unwrap();
        assert_close(r.roots[0], c(2.0, 0.0), 1e-7);
        assert_close(r.roots[1], c(2.0, 0.0), 1e-7);
        assert_close(r.roots[2], c(-1.0, 0.0), 1e-12);
        assert!(r.has_multiple_root());
        assert_eq!(r.distinct().len(), 2);

        let r = solve_monic_cubic(c(-3.0, 0.0), c(0.0, 0.0), c(54.0, 0.0)).unwrap();
        assert_close(r.roots[0], c(3.0, 3.0), 1e-12);
        assert_close(r.roots[1], c(3.0, -3.0), 1e-12);
        assert_close(r.roots[2], c(-3.0, 0.0), 1e-12);
        for (root, res) in r.roots.iter().zip(r.residuals) {
            assert!(res <= 1e-10 * root.norm().powi(3).max(1.0));
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(solve_monic_cubic(c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn dominant_examples() {
        assert_close(dominant_root(c(0.0, 0.0)), c(3.0, 0.0), 1e-12);
        assert_close(dominant_root(c(4.0, 0.0)), c(2.0, 0.0), 0.0);
        let a = -3.0 - 17f64.sqrt();
        assert_close(dominant_root(c(a, 0.0)), c((3.0 + 17f64.sqrt()) / 2.0, 0.0), 1e-12);
        assert_close(dominant_root(c(54.0, 0.0)), c(3.0, 3.0), 1e-12);
    }

    #[test]
    fn tau_examples() {
        assert_close(tau(c(0.0, 0.0)), c(1.0 / 3.0, 0.0), 0.0);
        assert_close(tau(c(4.0, 0.0)), c(0.5, 0.0), 1e-12);
        let a = -3.0 - 17f64.sqrt();
        assert_close(tau(c(a, 0.0)), c(2.0 / (3.0 + 17f64.sqrt()), 0.0), 1e-12);
        assert_close(tau(c(54.0, 0.0)) * dominant_root(c(54.0, 0.0)), c(1.0, 0.0), 1e-12);
        assert_close(tau(c(1e-12, 0.0)), c(1.0 / 3.0, 0.0), 1e-10);
    }

    #[test]
    fn largest_real_examples() {
        assert!((largest_real_root(54.0) + 3.0).abs() < 1e-12);
        assert!((largest_real_root(20.0) + 2.0).abs() < 1e-12);
        assert!((largest_real_root(0.0) - 3.0).abs() < 1e-12);
        assert!((largest_real_root(4.0) - 2.0).abs() < 1e-7);
    }

    #[test]
    fn classification_examples() {
        let r = classify_real_roots(-1.0).unwrap();
        assert_eq!(r.case.number(), 1);
        assert!(r.placement_ok && r.roots[0] > 3.0);
        let r = classify_real_roots(2.0).unwrap();
        assert_eq!(r.case, RealRootCase::ThreeReal);
        assert!(r.placement_ok);
        let r = classify_real_roots(10.0).unwrap();
        assert_eq!(r.case.number(), 5);
        assert!(r.placement_ok && r.roots[0] < 0.0 && r.roots[0] > -2.0);
        assert_eq!(classify_real_roots(4.0).unwrap().roots, vec![-1.0, 2.0]);
        assert_eq!(classify_real_roots(0.0).unwrap().roots, vec![0.0, 3.0]);
        assert!(classify_real_roots(f64::INFINITY).is_err());
    }

    #[test]
    fn positive_bound_examples() {
        assert!((positive_sink_bound(0.0, 0.0, 0.0, 0.0).unwrap().value - 3.0).abs() < 1e-12);
        assert!((positive_sink_bound(8.0, 8.0, 8.0, -28.0).unwrap().value - 7.0).abs() < 1e-12);
        let b = positive_sink_bound(0.0, 0.0, 0.0, 4.0).unwrap();
        assert!(b.degenerate && b.value == 2.0);
        let expected = (3.0 + 21f64.sqrt()) / 2.0;
        assert!((positive_sink_bound(1.0, 1.0, 1.0, 0.0).unwrap().value - expected).abs() < 1e-12);
        assert!(positive_sink_bound(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(positive_sink_bound(0.0, 0.0, 0.0, 4.5).is_err());
    }

    #[test]
    fn real_cubic_matches_factored_forms() {
        // (x−1)(x−2)(x−3)
        let r = real_cubic_roots(-6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        // x³ + x + 1: one real root
        let r = real_cubic_roots(0.0, 1.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0].powi(3) + r[0] + 1.0).abs() < 1e-14);
        // (x−2)²(x+1)
        let r = real_cubic_roots(-3.0, 0.0, 4.0);
        assert_eq!(r.len(), 2);
    }
}
