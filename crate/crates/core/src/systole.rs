//! Trace systoles and the systolic inequalities they give for the
//! one-holed torus, the four-holed sphere and the genus-three
//! nonorientable surface.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charvar::{gt_map, n3_to_markoff, torus_mu, N3Markoff};
use crate::cubic::{dominant_root, largest_real_root, positive_sink_bound, PositiveSinkBound};
use crate::error::{Error, Result};
use crate::farey::{Slope, Triangle};
use crate::markoff::{min_region_search, trace_reduce, MarkoffMap, MarkoffTriple, ReductionOutcome};
use crate::verify::HAT_BOUND;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicKind {
    TwoSided,
    OneSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    CoshHalfSys,
    CoshSys,
    Length,
    /// A bound on `|tr ρ(γ)|` for some simple closed curve `γ`.
    TraceModulus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystoleBound {
    pub quantity: Quantity,
    pub value: f64,
    pub context: String,
}

impl SystoleBound {
    pub fn new(quantity: Quantity, value: f64, context: impl Into<String>) -> SystoleBound {
        SystoleBound {
            quantity,
            value,
            context: context.into(),
        }
    }
}

/// Length of a geodesic with trace modulus `t`: `2·arccosh(t/2)` if
/// two-sided, `2·arcsinh(t/2)` if one-sided.
pub fn trace_to_length(t: f64, kind: GeodesicKind) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("trace modulus {t} must be finite and non-negative")));
    }
    match kind {
        GeodesicKind::TwoSided if t < 2.0 => Err(Error::Domain(format!(
            "trace {t} < 2 is elliptic and has no two-sided length"
        ))),
        GeodesicKind::TwoSided => Ok(2.0 * (t / 2.0).acosh()),
        GeodesicKind::OneSided => Ok(2.0 * (t / 2.0).asinh()),
    }
}

pub fn length_to_trace(l: f64, kind: GeodesicKind) -> f64 {
    match kind {
        GeodesicKind::TwoSided => 2.0 * (l / 2.0).cosh(),
        GeodesicKind::OneSided => 2.0 * (l / 2.0).sinh(),
    }
}

/// `Tys_k(T) = |t_{k+2}|`.
pub fn tys_torus(k: Complex64) -> Result<f64> {
    if (k - 2.0).norm() < 1e-12 {
        return Err(Error::Degenerate("k = 2 gives μ = 4".into()));
    }
    Ok(dominant_root(torus_mu(k).s).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TorusBoundary {
    Cusp,
    GeodesicLength(f64),
    ConeAngle(f64),
}

impl TorusBoundary {
    /// Commutator trace `k` of the holonomy.
    pub fn commutator_trace(self) -> f64 {
        match self {
            TorusBoundary::Cusp => -2.0,
            TorusBoundary::GeodesicLength(l) => -2.0 * (l / 2.0).cosh(),
            TorusBoundary::ConeAngle(theta) => -2.0 * (theta / 2.0).cos(),
        }
    }
}

/// Bound on `cosh(sys/2)` for a hyperbolic torus with one boundary
/// component, cusp or cone point.
pub fn torus_systole_bound(boundary: TorusBoundary) -> Result<SystoleBound> {
    let (value, context) = match boundary {
        TorusBoundary::Cusp => (1.5, "once-punctured torus".to_string()),
        TorusBoundary::GeodesicLength(l) => {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Domain(format!("boundary length {l} must be positive")));
            }
            ((l / 6.0).cosh() + 0.5, format!("one-holed torus, boundary length {l}"))
        }
        TorusBoundary::ConeAngle(theta) => {
            if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
                return Err(Error::Domain(format!("cone angle {theta} must lie in (0, 2π)")));
            }
            ((theta / 6.0).cos() + 0.5, format!("torus with cone angle {theta}"))
        }
    };
    Ok(SystoleBound::new(Quantity::CoshHalfSys, value, context))
}

/// `T_𝔅` for boundary traces `(a, b, c, d) ≥ 0`: the positive sink bound
/// of `GT(a, b, c, d)`.
pub fn tys_sphere(a: f64, b: f64, c: f64, d: f64) -> Result<PositiveSinkBound> {
    if ![a, b, c, d].iter().all(|v| v.is_finite() && *v >= 0.0) {
        return Err(Error::Domain("boundary traces must be finite and non-negative".into()));
    }
    let mu = gt_map(a.into(), b.into(), c.into(), d.into());
    let [l1, l2, l3] = mu.lambda.map(|z| z.re);
    positive_sink_bound(l1, l2, l3, mu.s.re)
}

/// `Tys(N₃)`, the fixed point of `T ↦ 2·t_{−T²}/T`, found by bisection.
pub fn tys_n3() -> f64 {
    let g = |t: f64| 2.0 * dominant_root(Complex64::new(-t * t, 0.0)).norm() / t - t;
    let (mut lo, mut hi) = (2.0, 4.0);
    debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `cosh(sys) ≤ 1 + Tys(N₃)²/2` for quasi-Fuchsian `N₃`.
pub fn n3_qf_bound() -> SystoleBound {
    let t = tys_n3();
    SystoleBound::new(Quantity::CoshSys, 1.0 + t * t / 2.0, "quasi-Fuchsian N₃, one-sided curve")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum N3Bound {
    Found {
        /// `|tr ρ(γ)|` of the shortest one-sided curve found.
        trace_modulus: f64,
        /// Region of the `(0, 0, 0, d²)` map realizing it, or `None` for
        /// the curve with trace `d`.
        slope: Option<Slope>,
        bound: f64,
        within_bound: bool,
    },
    DZeroBranch {
        sum_of_squares: Complex64,
    },
}

/// Shortest one-sided trace among the curve with trace `d` and the regions
/// of the induced `(0, 0, 0, d²)` map within `radius` of the base, using
/// `φ(X) = tr ρ(γ)·d/2`.
pub fn n3_one_sided_bound(chi: [Complex64; 4], radius: usize) -> Result<N3Bound> {
    let [a, b, c, d] = chi;
    let (triple, mu) = match n3_to_markoff(a, b, c, d)? {
        N3Markoff::DZeroBranch { sum_of_squares } => return Ok(N3Bound::DZeroBranch { sum_of_squares }),
        N3Markoff::Map { triple, mu, .. } => (triple, mu),
    };
    let map = MarkoffMap::new(mu, triple)?;
    let (slope, value) = min_region_search(&map, radius)?;
    let via_map = 2.0 * value.norm() / d.norm();
    let bound = tys_n3();
    let (trace_modulus, slope) = if d.norm() <= via_map {
        (d.norm(), None)
    } else {
        (via_map, Some(slope))
    };
    Ok(N3Bound::Found {
        trace_modulus,
        slope,
        bound,
        within_bound: trace_modulus <= bound * (1.0 + 1e-12),
    })
}

/// Length bound `2·arccosh((9 − 2)/2)` for quasi-Fuchsian four-punctured
/// spheres, from the hat constant via `|2 + 2cosh(L/2)| ≤ 9`.
pub fn qf_sphere_bound() -> SystoleBound {
    let value = 2.0 * ((HAT_BOUND - 2.0) / 2.0).acosh();
    SystoleBound::new(Quantity::Length, value, "quasi-Fuchsian four-punctured sphere")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonFuchsianTorus {
    /// `2 < k < 18`: some simple closed curve is elliptic.
    EllipticGuaranteed { mu: f64, t_prime: f64 },
    /// `k ≥ 18`: some curve has `|tr| ≤ 2cosh(l/6) − 1`, `l = 2arccosh(k/2)`.
    TraceBound { bound: f64, l: f64, t_prime: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonFuchsianReport {
    pub k: f64,
    pub classification: NonFuchsianTorus,
    /// For a given base triple: whether greedy descent stopped at a region
    /// of modulus below 2 rather than at a sink.
    pub small_region_fired: Option<bool>,
    pub outcome: Option<ReductionOutcome>,
}

pub fn nonfuchsian_torus_report(k: f64, base: Option<MarkoffTriple>, depth_cap: usize) -> Result<NonFuchsianReport> {
    if !(k.is_finite() && k > 2.0) {
        return Err(Error::Domain(format!("k = {k} must exceed 2")));
    }
    let mu = k + 2.0;
    let t_prime = largest_real_root(mu);
    let classification = if k < 18.0 {
        NonFuchsianTorus::EllipticGuaranteed { mu, t_prime }
    } else {
        let l = 2.0 * (k / 2.0).acosh();
        NonFuchsianTorus::TraceBound {
            bound: 2.0 * (l / 6.0).cosh() - 1.0,
            l,
            t_prime,
        }
    };
    let outcome = match base {
        Some(t) => {
            let map = MarkoffMap::new(torus_mu(Complex64::new(k, 0.0)), t)?;
            Some(trace_reduce(&map, &Triangle::base(), depth_cap)?)
        }
        None => None,
    };
    Ok(NonFuchsianReport {
        k,
        classification,
        small_region_fired: outcome
            .as_ref()
            .map(|o| matches!(o, ReductionOutcome::SmallRegion { .. })),
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvar::n3_extremal_character;

    #[test]
    fn lengths() {
        assert_eq!(trace_to_length(2.0, GeodesicKind::TwoSided).unwrap(), 0.0);
        let l = trace_to_length(7.0, GeodesicKind::TwoSided).unwrap();
        assert!((l - 2.0 * (3.5 + 11.25f64.sqrt()).ln()).abs() < 1e-12);
        assert!(trace_to_length(1.9, GeodesicKind::TwoSided).is_err());
        let t = (3.0 + 17f64.sqrt()).sqrt();
        let l = trace_to_length(t, GeodesicKind::OneSided).unwrap();
        assert!((l.cosh() - (5.0 + 17f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((length_to_trace(l, GeodesicKind::OneSided) - t).abs() < 1e-12);
    }

    #[test]
    fn torus_constants() {
        assert_eq!(tys_torus(Complex64::new(-2.0, 0.0)).unwrap(), 3.0);
        assert!(tys_torus(Complex64::new(2.0, 0.0)).is_err());
        for l in [0.1, 1.0, 5.0, 20.0] {
            let k = TorusBoundary::GeodesicLength(l).commutator_trace();
            let t = tys_torus(Complex64::new(k, 0.0)).unwrap();
            assert!((t / 2.0 - 0.5 - (l / 6.0).cosh()).abs() < 1e-10 * t, "{l}");
            let b = torus_systole_bound(TorusBoundary::GeodesicLength(l)).unwrap();
            assert!((b.value - t / 2.0).abs() < 1e-10 * t);
        }
        let theta = 2.0;
        let k = TorusBoundary::ConeAngle(theta).commutator_trace();
        let t = tys_torus(Complex64::new(k, 0.0)).unwrap();
        let b = torus_systole_bound(TorusBoundary::ConeAngle(theta)).unwrap();
        assert!((b.value - t / 2.0).abs() < 1e-12);
        assert_eq!(torus_systole_bound(TorusBoundary::Cusp).unwrap().value, 1.5);
        assert!(torus_systole_bound(TorusBoundary::ConeAngle(7.0)).is_err());
        assert!(torus_systole_bound(TorusBoundary::GeodesicLength(0.0)).is_err());
    }

    #[test]
    fn sphere_constants() {
        assert!((tys_sphere(2.0, 2.0, 2.0, 2.0).unwrap().value - 7.0).abs() < 1e-10);
        let zero = tys_sphere(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(zero.value, 2.0);
        assert!(zero.degenerate);
        let t = tys_sphere(2.0, 2.0, 0.0, 0.0).unwrap().value;
        assert!((t.powi(3) - 3.0 * t * t - 4.0 * t - 4.0).abs() < 1e-10);
        assert!((t - 4.184387).abs() < 1e-6, "{t}");
        assert!(tys_sphere(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn n3_constants() {
        let t = (3.0 + 17f64.sqrt()).sqrt();
        assert!((tys_n3() - t).abs() < 1e-10);
        assert!((n3_qf_bound().value - (5.0 + 17f64.sqrt()) / 2.0).abs() < 1e-10);
        let N3Bound::Found { trace_modulus, within_bound, .. } = n3_one_sided_bound(n3_extremal_character(), 4).unwrap()
        else {
            panic!("expected a bound");
        };
        assert!((trace_modulus - t).abs() < 1e-9);
        assert!(within_bound);
        let zero = [2.0, 0.0, 0.0, 0.0].map(|v| Complex64::new(v, 0.0));
        assert!(matches!(n3_one_sided_bound(zero, 4).unwrap(), N3Bound::DZeroBranch { .. }));
    }

    #[test]
    fn qf_sphere() {
        let b = qf_sphere_bound();
        assert!((b.value - 3.849695).abs() < 1e-6);
        assert_eq!(b.value, trace_to_length(7.0, GeodesicKind::TwoSided).unwrap());
    }

    #[test]
    fn nonfuchsian() {
        let r = nonfuchsian_torus_report(10.0, None, 100).unwrap();
        assert!(matches!(r.classification, NonFuchsianTorus::EllipticGuaranteed { .. }));
        let r = nonfuchsian_torus_report(18.0, None, 100).unwrap();
        let NonFuchsianTorus::TraceBound { bound, t_prime, .. } = r.classification else {
            panic!()
        };
        assert!((bound - 2.0).abs() < 1e-12);
        assert!((t_prime + 2.0).abs() < 1e-12);
        let r = nonfuchsian_torus_report(34.0, None, 100).unwrap();
        let NonFuchsianTorus::TraceBound { bound, t_prime, .. } = r.classification else {
            panic!()
        };
        assert!((bound - t_prime.abs()).abs() < 1e-10);
        assert!(nonfuchsian_torus_report(2.0, None, 100).is_err());
    }
}
