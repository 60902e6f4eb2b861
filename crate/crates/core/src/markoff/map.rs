use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{relative_residual, MarkoffTriple, MuParams};
use crate::error::{Error, Result};
use crate::farey::{Color, Slope, TreeEdge, Triangle};
use crate::scalar::MapScalar;

/// Region values beyond this modulus abort expansion.
pub const DEFAULT_VALUE_LIMIT: f64 = 1e300;

/// Relative vertex-residual tolerance for accepting a base triple.
const BASE_TOLERANCE: f64 = 1e-9;

/// A μ-Markoff map given by its triple at the base vertex `(∞, 0, 1)`.
/// Region values are expanded lazily along tree paths and memoized; the
/// cache is behind a lock so a map can be shared between threads.
#[derive(Debug)]
pub struct MarkoffMap<S: MapScalar = Complex64> {
    params: MuParams,
    lambda: [S; 3],
    base: MarkoffTriple,
    cache: RwLock<HashMap<Slope, S>>,
}

impl<S: MapScalar> Clone for MarkoffMap<S> {
    fn clone(&self) -> Self {
        MarkoffMap {
            params: self.params,
            lambda: self.lambda.clone(),
            base: self.base,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

/// Direction of the arrow on a tree edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arrow {
    /// Points toward the endpoint containing this opposite region.
    Toward(Slope),
    /// The two opposite regions tie in modulus.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Sink,
    Merge,
    Fork,
    Source,
}

/// Classification of a vertex together with the arrows on its three
/// incident edges, in color order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexInfo {
    pub vertex: Triangle,
    pub class: VertexClass,
    /// `incoming[c]` is true when the color-`c` edge points at the vertex
    /// (ties count as incoming).
    pub incoming: [bool; 3],
    /// `outgoing[c]` is true when the color-`c` edge points away from the
    /// vertex (ties count as outgoing too).
    pub outgoing: [bool; 3],
}

/// JSON image of a map: parameters, base triple and every expanded region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSnapshot {
    pub mu: MuParams,
    pub base: MarkoffTriple,
    pub regions: BTreeMap<Slope, Complex64>,
}

impl MarkoffMap<Complex64> {
    /// Map with double-precision values.
    pub fn new(mu: MuParams, base: MarkoffTriple) -> Result<Self> {
        Self::with_scalar(mu, base)
    }
}

impl<S: MapScalar> MarkoffMap<S> {
    /// Map evaluated in the scalar type `S`. The base triple must lie on the
    /// μ-variety within relative `1e-9`.
    pub fn with_scalar(mu: MuParams, base: MarkoffTriple) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::NonFinite("base triple"));
        }
        MuParams::new(mu.lambda[0], mu.lambda[1], mu.lambda[2], mu.s)?;
        let r = relative_residual(&base, &mu);
        if r > BASE_TOLERANCE {
            return Err(Error::OffVariety(r));
        }
        let mut cache = HashMap::new();
        let t = Triangle::base();
        for c in Color::ALL {
            cache.insert(t.region(c), S::from_c64(base.get(c)));
        }
        Ok(MarkoffMap {
            params: mu,
            lambda: mu.lambda.map(S::from_c64),
            base,
            cache: RwLock::new(cache),
        })
    }

    pub fn params(&self) -> &MuParams {
        &self.params
    }

    pub fn base(&self) -> &MarkoffTriple {
        &self.base
    }

    /// Number of memoized regions.
    pub fn cached_regions(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    /// `φ` at the region of slope `s`, in the map's scalar type.
    pub fn value(&self, s: &Slope) -> Result<S> {
        if let Some(v) = self.cache.read().expect("cache lock").get(s) {
            return Ok(v.clone());
        }
        let mut cache = self.cache.write().expect("cache lock");
        let mut t = Triangle::base();
        while let Some(c) = t.step_toward(s) {
            t = expand(&mut cache, &self.lambda, &t, c)?;
        }
        Ok(cache[s].clone())
    }

    /// `φ(X_s)`.
    pub fn region_value(&self, s: &Slope) -> Result<Complex64> {
        self.value(s).map(|v| v.to_c64())
    }

    /// Values at a vertex, indexed by color.
    pub fn values_at(&self, v: &Triangle) -> Result<[S; 3]> {
        let [a, b, c] = v.by_color();
        Ok([self.value(&a)?, self.value(&b)?, self.value(&c)?])
    }

    pub fn triple_at(&self, v: &Triangle) -> Result<MarkoffTriple> {
        let [a, b, c] = self.values_at(v)?;
        Ok(MarkoffTriple::new(a.to_c64(), b.to_c64(), c.to_c64()))
    }

    /// Value of the region gained by crossing the color-`c` edge of `v`,
    /// computed locally from the edge relation.
    pub fn value_across(&self, v: &Triangle, c: Color) -> Result<(Slope, S)> {
        let w = v.edge(c)?.ends.into_iter().find(|e| !v.contains(e)).expect("edge has a far end");
        if let Some(val) = self.cache.read().expect("cache lock").get(&w) {
            return Ok((w, val.clone()));
        }
        // make sure v's own regions are present before the local step
        self.values_at(v)?;
        let mut cache = self.cache.write().expect("cache lock");
        expand(&mut cache, &self.lambda, v, c)?;
        Ok((w, cache[&w].clone()))
    }

    pub fn orient_edge(&self, e: &TreeEdge) -> Result<Arrow> {
        let [z, w] = e.ends;
        let (vz, vw) = (self.value(&z)?, self.value(&w)?);
        Ok(match vz.cmp_modulus(&vw) {
            Ordering::Less => Arrow::Toward(z),
            Ordering::Greater => Arrow::Toward(w),
            Ordering::Equal => Arrow::Both,
        })
    }

    pub fn classify_vertex(&self, v: &Triangle) -> Result<VertexInfo> {
        let mut incoming = [false; 3];
        let mut outgoing = [false; 3];
        for c in Color::ALL {
            let here = v.region(c);
            let (_, far) = self.value_across(v, c)?;
            match self.value(&here)?.cmp_modulus(&far) {
                Ordering::Less => incoming[c.index()] = true,
                Ordering::Greater => outgoing[c.index()] = true,
                Ordering::Equal => {
                    incoming[c.index()] = true;
                    outgoing[c.index()] = true;
                }
            }
        }
        let strict_out = (0..3).filter(|&i| outgoing[i] && !incoming[i]).count();
        let class = match strict_out {
            0 => VertexClass::Sink,
            1 => VertexClass::Merge,
            2 => VertexClass::Fork,
            _ => VertexClass::Source,
        };
        Ok(VertexInfo {
            vertex: *v,
            class,
            incoming,
            outgoing,
        })
    }

    pub fn snapshot(&self) -> MapSnapshot {
        let regions = self
            .cache
            .read()
            .expect("cache lock")
            .iter()
            .map(|(s, v)| (*s, v.to_c64()))
            .collect();
        MapSnapshot {
            mu: self.params,
            base: self.base,
            regions,
        }
    }
}

/// Crosses the color-`c` edge of `t`, inserting the new region's value.
fn expand<S: MapScalar>(
    cache: &mut HashMap<Slope, S>,
    lambda: &[S; 3],
    t: &Triangle,
    c: Color,
) -> Result<Triangle> {
    let next = t.neighbor(c)?;
    let (j, k) = c.others();
    let w = next.region(c);
    if !cache.contains_key(&w) {
        let x = &cache[&t.region(j)];
        let y = &cache[&t.region(k)];
        let z = &cache[&t.region(c)];
        let val = x.mul(y).sub(z).sub(&lambda[c.index()]);
        let m = val.modulus();
        if !(m <= DEFAULT_VALUE_LIMIT) {
            return Err(Error::PrecisionLoss(w));
        }
        cache.insert(w, val);
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markoff::vertex_residual;

    fn classic() -> MarkoffMap {
        MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 0.0), MarkoffTriple::real(3.0, 3.0, 3.0)).unwrap()
    }

    fn slope(s: &str) -> Slope {
        s.parse().unwrap()
    }

    #[test]
    fn classic_values() {
        let m = classic();
        let re = |s: &str| m.region_value(&slope(s)).unwrap().re;
        assert_eq!(re("inf"), 3.0);
        assert_eq!(re("1/2"), 6.0);
        assert_eq!(re("-1"), 6.0);
        assert_eq!(re("2"), 6.0);
        let t = Triangle::base().neighbor(Color::Three).unwrap();
        assert_eq!(m.triple_at(&t).unwrap(), MarkoffTriple::real(3.0, 3.0, 6.0));
        let deeper = Triangle::new(slope("1/2"), slope("1"), slope("2/3")).unwrap();
        let tr = m.triple_at(&deeper).unwrap();
        assert!(tr.0.iter().any(|x| x.re == 15.0));
    }

    #[test]
    fn qf_sphere_map() {
        let m = MarkoffMap::new(MuParams::real(8.0, 8.0, 8.0, -28.0), MarkoffTriple::real(7.0, 7.0, 7.0)).unwrap();
        assert_eq!(m.region_value(&slope("2")).unwrap().re, 34.0);
        let info = m.classify_vertex(&Triangle::base()).unwrap();
        assert_eq!(info.class, VertexClass::Sink);
        for (e, _) in Triangle::base().neighbors().unwrap() {
            let arrow = m.orient_edge(&e).unwrap();
            let toward = match arrow {
                Arrow::Toward(s) => s,
                Arrow::Both => panic!("no tie expected"),
            };
            assert!(Triangle::base().contains(&toward));
        }
    }

    #[test]
    fn classification_examples() {
        let m = classic();
        assert_eq!(m.classify_vertex(&Triangle::base()).unwrap().class, VertexClass::Sink);
        let v = Triangle::base().neighbor(Color::Three).unwrap();
        assert_eq!(m.classify_vertex(&v).unwrap().class, VertexClass::Merge);
        let far = Triangle::base().follow(&[Color::Three, Color::One, Color::Two]).unwrap();
        assert_eq!(m.classify_vertex(&far).unwrap().class, VertexClass::Merge);

        let mu = MuParams::real(-50.0, 30.0, 50.0, 0.0);
        let cex = MarkoffMap::new(mu, MarkoffTriple::real(-10.0, -10.0, 10.0)).unwrap();
        assert_eq!(cex.classify_vertex(&Triangle::base()).unwrap().class, VertexClass::Sink);
    }

    #[test]
    fn ties_point_both_ways() {
        let m = classic();
        let e = Triangle::base().edge(Color::One).unwrap();
        // color-1 edge: opposite regions ∞ (value 3) and 1/2 (value 6)
        let arrow = m.orient_edge(&e).unwrap();
        assert_eq!(arrow, Arrow::Toward(Slope::INFINITY));
        let flat = MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 4.0), MarkoffTriple::real(2.0, 2.0, 2.0)).unwrap();
        let e = Triangle::base().edge(Color::Two).unwrap();
        assert_eq!(flat.orient_edge(&e).unwrap(), Arrow::Both);
        assert_eq!(flat.classify_vertex(&Triangle::base()).unwrap().class, VertexClass::Sink);
    }

    #[test]
    fn rejects_off_variety_base() {
        let err = MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 0.0), MarkoffTriple::real(1.0, 2.0, 3.0));
        assert!(matches!(err, Err(Error::OffVariety(_))));
    }

    #[test]
    fn precision_loss_is_flagged() {
        let m = classic();
        let far = Slope::new(1, 2000).unwrap();
        assert!(matches!(m.region_value(&far), Err(Error::PrecisionLoss(_))));
    }

    #[test]
    fn cached_triples_stay_on_variety() {
        let mu = MuParams::new(
            Complex64::new(0.3, -0.2),
            Complex64::new(-1.0, 0.5),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let x = Complex64::new(1.1, 0.4);
        let y = Complex64::new(-0.7, 1.3);
        let [z, _] = crate::markoff::solve_for(Color::Three, (x, y), &mu);
        let m = MarkoffMap::new(mu, MarkoffTriple::new(x, y, z)).unwrap();
        for v in crate::farey::ball(&Triangle::base(), 6).unwrap() {
            let t = m.triple_at(&v).unwrap();
            assert!(relative_residual(&t, &mu) < 1e-9, "{v}: {}", vertex_residual(&t, &mu));
        }
    }

    #[test]
    fn snapshot_json_shape() {
        let m = classic();
        m.region_value(&slope("1/2")).unwrap();
        let v = serde_json::to_value(m.snapshot()).unwrap();
        assert_eq!(v["regions"]["1/2"], serde_json::json!([6.0, 0.0]));
        assert_eq!(v["regions"]["inf"], serde_json::json!([3.0, 0.0]));
        assert_eq!(v["base"], serde_json::json!([[3.0, 0.0], [3.0, 0.0], [3.0, 0.0]]));
    }
}
