use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MarkoffMap, MarkoffTriple};
use crate::error::Result;
use crate::farey::{ball, Color, Slope, Triangle};
use crate::scalar::MapScalar;

pub const DEFAULT_DEPTH_CAP: usize = 10_000;

/// Result of following arrows downhill from a start vertex. Every variant
/// carries the visited vertices in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReductionOutcome {
    SinkFound {
        vertex: Triangle,
        triple: MarkoffTriple,
        path: Vec<Triangle>,
    },
    SmallRegion {
        slope: Slope,
        value: Complex64,
        path: Vec<Triangle>,
    },
    DepthExceeded {
        path: Vec<Triangle>,
    },
}

impl ReductionOutcome {
    pub fn path(&self) -> &[Triangle] {
        match self {
            ReductionOutcome::SinkFound { path, .. }
            | ReductionOutcome::SmallRegion { path, .. }
            | ReductionOutcome::DepthExceeded { path } => path,
        }
    }
}

/// Greedy descent. At each vertex: stop if some region has modulus below 2;
/// stop if no edge points strictly outward (a sink, ties counting inward);
/// otherwise cross the outgoing edge whose new region has the smallest
/// modulus, ties going to the smaller slope. `depth_cap` bounds the number
/// of moves.
pub fn trace_reduce<S: MapScalar>(
    map: &MarkoffMap<S>,
    start: &Triangle,
    depth_cap: usize,
) -> Result<ReductionOutcome> {
    let mut v = *start;
    let mut path = vec![v];
    loop {
        let vals = map.values_at(&v)?;
        let regions = v.by_color();
        let small = (0..3)
            .filter(|&i| vals[i].modulus() < 2.0)
            .min_by(|&i, &j| {
                vals[i]
                    .cmp_modulus(&vals[j])
                    .then_with(|| regions[i].cmp(&regions[j]))
            });
        if let Some(i) = small {
            return Ok(ReductionOutcome::SmallRegion {
                slope: regions[i],
                value: vals[i].to_c64(),
                path,
            });
        }

        let mut best: Option<(Color, Slope, S)> = None;
        for c in Color::ALL {
            let (w, far) = map.value_across(&v, c)?;
            if vals[c.index()].cmp_modulus(&far) != Ordering::Greater {
                continue;
            }
            let better = match &best {
                None => true,
                Some((_, bw, bv)) => match far.cmp_modulus(bv) {
                    Ordering::Less => true,
                    Ordering::Equal => w < *bw,
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((c, w, far));
            }
        }
        match best {
            None => {
                return Ok(ReductionOutcome::SinkFound {
                    vertex: v,
                    triple: map.triple_at(&v)?,
                    path,
                })
            }
            Some((c, _, _)) => {
                if path.len() > depth_cap {
                    return Ok(ReductionOutcome::DepthExceeded { path });
                }
                v = v.neighbor(c)?;
                path.push(v);
            }
        }
    }
}

/// Region of smallest modulus among those bordering a vertex within tree
/// distance `radius` of the base; ties go to the smaller slope.
pub fn min_region_search<S: MapScalar>(
    map: &MarkoffMap<S>,
    radius: usize,
) -> Result<(Slope, Complex64)> {
    let mut best: Option<(Slope, S)> = None;
    for v in ball(&Triangle::base(), radius)? {
        for s in v.regions() {
            let val = map.value(&s)?;
            let better = match &best {
                None => true,
                Some((bs, bv)) => match val.cmp_modulus(bv) {
                    Ordering::Less => true,
                    Ordering::Equal => s < *bs,
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((s, val));
            }
        }
    }
    let (s, v) = best.expect("a ball contains the base vertex");
    Ok((s, v.to_c64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markoff::{solve_for, MuParams};

    #[test]
    fn classic_descends_in_one_step() {
        let m = MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 0.0), MarkoffTriple::real(3.0, 3.0, 3.0)).unwrap();
        let start = Triangle::base().neighbor(Color::Three).unwrap();
        match trace_reduce(&m, &start, DEFAULT_DEPTH_CAP).unwrap() {
            ReductionOutcome::SinkFound { vertex, triple, path } => {
                assert_eq!(vertex, Triangle::base());
                assert_eq!(triple, MarkoffTriple::real(3.0, 3.0, 3.0));
                assert_eq!(path.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        let far = Triangle::base().follow(&[Color::Three, Color::One, Color::Two, Color::Three]).unwrap();
        let out = trace_reduce(&m, &far, DEFAULT_DEPTH_CAP).unwrap();
        assert!(matches!(out, ReductionOutcome::SinkFound { vertex, .. } if vertex == Triangle::base()));
        assert_eq!(out.path().len(), 5);
    }

    #[test]
    fn small_region_at_start() {
        let mu = MuParams::real(0.0, 0.0, 0.0, 0.0);
        let y = Complex64::new(1.5, 0.5);
        let [z, _] = solve_for(Color::Three, (Complex64::new(0.0, 0.0), y), &mu);
        let m = MarkoffMap::new(mu, MarkoffTriple::new(Complex64::new(0.0, 0.0), y, z)).unwrap();
        match trace_reduce(&m, &Triangle::base(), 10).unwrap() {
            ReductionOutcome::SmallRegion { slope, value, path } => {
                assert_eq!(slope, Slope::INFINITY);
                assert_eq!(value, Complex64::new(0.0, 0.0));
                assert_eq!(path, vec![Triangle::base()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn qf_sphere_base_is_sink() {
        let m = MarkoffMap::new(MuParams::real(8.0, 8.0, 8.0, -28.0), MarkoffTriple::real(7.0, 7.0, 7.0)).unwrap();
        let out = trace_reduce(&m, &Triangle::base(), DEFAULT_DEPTH_CAP).unwrap();
        assert!(matches!(out, ReductionOutcome::SinkFound { ref path, .. } if path.len() == 1));
    }

    #[test]
    fn depth_cap_is_respected() {
        let m = MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 0.0), MarkoffTriple::real(3.0, 3.0, 3.0)).unwrap();
        let far = Triangle::base().follow(&[Color::Three, Color::One, Color::Two, Color::Three]).unwrap();
        let out = trace_reduce(&m, &far, 2).unwrap();
        assert!(matches!(out, ReductionOutcome::DepthExceeded { .. }));
    }

    #[test]
    fn min_region_examples() {
        let m = MarkoffMap::new(MuParams::real(0.0, 0.0, 0.0, 0.0), MarkoffTriple::real(3.0, 3.0, 3.0)).unwrap();
        let (s, v) = min_region_search(&m, 3).unwrap();
        assert!(Triangle::base().contains(&s));
        assert_eq!(v, Complex64::new(3.0, 0.0));

        let t = (3.0 + 17f64.sqrt()) / 2.0;
        let mu = MuParams::real(0.0, 0.0, 0.0, -3.0 - 17f64.sqrt());
        let m = MarkoffMap::new(mu, MarkoffTriple::real(t, t, t)).unwrap();
        let (_, v) = min_region_search(&m, 4).unwrap();
        let bound = crate::cubic::dominant_root(mu.s).norm();
        assert!((v.norm() - bound).abs() < 1e-12);
    }

    #[test]
    fn near_degenerate_probe() {
        let d = 1e-6;
        let (x, y) = (Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0));
        let z = Complex64::new(2.0 + d, 0.0);
        let t = MarkoffTriple::new(x, y, z);
        let s = x * x + y * y + z * z - x * y * z;
        let m = MarkoffMap::new(MuParams::classical(s), t).unwrap();
        let (_, v) = min_region_search(&m, 4).unwrap();
        assert!((v.norm() - 2.0).abs() < 1e-3, "{v}");
    }
}
