//! Combinatorics of the Farey triangulation and its dual trivalent tree.
//!
//! Complementary regions of the tree are indexed by [`Slope`]s (reduced
//! fractions together with `1/0 = ∞`), tree vertices by [`Triangle`]s of
//! pairwise Farey-neighbor slopes and tree edges by [`TreeEdge`]s. Every
//! region carries one of three colors determined by the parity of its
//! numerator and denominator.

mod word;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use word::{slope_word, Letter, Word};

/// A reduced fraction `p/q` with `q >= 0`, or `∞ = 1/0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Slope {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Slope {
    pub const INFINITY: Slope = Slope { num: 1, den: 0 };
    pub const ZERO: Slope = Slope { num: 0, den: 1 };
    pub const ONE: Slope = Slope { num: 1, den: 1 };

    /// Reduces `p/q` to lowest terms with a non-negative denominator.
    pub fn new(p: i128, q: i128) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope(p, q));
        }
        if q == 0 {
            return Ok(Slope::INFINITY);
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        let num = i64::try_from(p).map_err(|_| Error::Overflow)?;
        let den = i64::try_from(q).map_err(|_| Error::Overflow)?;
        Ok(Slope { num, den })
    }

    pub fn integer(n: i64) -> Slope {
        Slope { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    /// `|p·s − q·r|` for `self = p/q`, `other = r/s`.
    pub fn determinant(&self, other: &Slope) -> i128 {
        (self.num as i128 * other.den as i128 - self.den as i128 * other.num as i128).abs()
    }

    pub fn is_farey_neighbor(&self, other: &Slope) -> bool {
        self.determinant(other) == 1
    }

    /// The Farey mediant `(p+r)/(q+s)`; lies between the two inputs and is
    /// a Farey neighbor of both.
    pub fn mediant(&self, other: &Slope) -> Result<Slope> {
        if !self.is_farey_neighbor(other) {
            return Err(Error::NotNeighbors(*self, *other));
        }
        Slope::new(
            self.num as i128 + other.num as i128,
            self.den as i128 + other.den as i128,
        )
    }

    /// The other Farey combination `(p−r)/(q−s)`.
    fn antimediant(&self, other: &Slope) -> Result<Slope> {
        Slope::new(
            self.num as i128 - other.num as i128,
            self.den as i128 - other.den as i128,
        )
    }

    /// Parity tri-coloring: `(1,0) → 1`, `(0,1) → 2`, `(1,1) → 3`.
    pub fn color(&self) -> Color {
        match (self.num.rem_euclid(2), self.den.rem_euclid(2)) {
            (1, 0) => Color::One,
            (0, 1) => Color::Two,
            (1, 1) => Color::Three,
            _ => unreachable!("reduced slope with both parities even"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.num as f64 / self.den as f64
        }
    }
}

impl Ord for Slope {
    /// Extended order `−∞ < ℚ < ∞`, with `∞` the greatest element.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let lhs = self.num as i128 * other.den as i128;
                let rhs = other.num as i128 * self.den as i128;
                lhs.cmp(&rhs)
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let s = s.trim();
        if matches!(s, "inf" | "∞" | "1/0") {
            return Ok(Slope::INFINITY);
        }
        let parse = |t: &str| {
            t.trim()
                .parse::<i128>()
                .map_err(|e| Error::Parse(format!("slope '{s}': {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => Slope::new(parse(p)?, parse(q)?),
            None => Slope::new(parse(s)?, 1),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Slope, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One of the three region/edge colors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Color {
    One,
    Two,
    Three,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::One, Color::Two, Color::Three];

    /// Zero-based index, used to address color-indexed triples.
    pub fn index(self) -> usize {
        match self {
            Color::One => 0,
            Color::Two => 1,
            Color::Three => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Color> {
        Color::ALL.get(i).copied()
    }

    /// The two other colors, in increasing order.
    pub fn others(self) -> (Color, Color) {
        match self {
            Color::One => (Color::Two, Color::Three),
            Color::Two => (Color::One, Color::Three),
            Color::Three => (Color::One, Color::Two),
        }
    }
}

impl From<Color> for u8 {
    fn from(c: Color) -> u8 {
        c.index() as u8 + 1
    }
}

impl TryFrom<u8> for Color {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Color, String> {
        match v {
            1 => Ok(Color::One),
            2 => Ok(Color::Two),
            3 => Ok(Color::Three),
            _ => Err(format!("invalid color {v}")),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// A vertex of the dual tree: three pairwise Farey-neighbor slopes, stored
/// in increasing extended order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Triangle {
    regions: [Slope; 3],
}

impl Triangle {
    pub fn new(a: Slope, b: Slope, c: Slope) -> Result<Triangle> {
        if !(a.is_farey_neighbor(&b) && b.is_farey_neighbor(&c) && a.is_farey_neighbor(&c)) {
            return Err(Error::NotATriangle(a, b, c));
        }
        let mut regions = [a, b, c];
        regions.sort();
        Ok(Triangle { regions })
    }

    /// The base vertex `(∞, 0, 1)`.
    pub fn base() -> Triangle {
        Triangle {
            regions: [Slope::ZERO, Slope::ONE, Slope::INFINITY],
        }
    }

    pub fn regions(&self) -> [Slope; 3] {
        self.regions
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.regions.contains(s)
    }

    /// The region of the given color. Pairwise-neighbor slopes have
    /// distinct colors, so exactly one matches.
    pub fn region(&self, color: Color) -> Slope {
        *self
            .regions
            .iter()
            .find(|r| r.color() == color)
            .expect("a Farey triangle carries all three colors")
    }

    /// The regions indexed by color.
    pub fn by_color(&self) -> [Slope; 3] {
        Color::ALL.map(|c| self.region(c))
    }

    /// The tree edge of the given color: it separates this vertex from the
    /// adjacent vertex obtained by replacing the region of that color.
    pub fn edge(&self, color: Color) -> Result<TreeEdge> {
        let (j, k) = color.others();
        let x = self.region(j);
        let y = self.region(k);
        let z = self.region(color);
        let w = reflect(&x, &y, &z)?;
        Ok(TreeEdge::from_parts(x, y, z, w))
    }

    /// The adjacent vertex across the edge of the given color.
    pub fn neighbor(&self, color: Color) -> Result<Triangle> {
        let (j, k) = color.others();
        let x = self.region(j);
        let y = self.region(k);
        let w = reflect(&x, &y, &self.region(color))?;
        let mut regions = [x, y, w];
        regions.sort();
        Ok(Triangle { regions })
    }

    /// The three incident edges and the vertices across them, in color order.
    pub fn neighbors(&self) -> Result<[(TreeEdge, Triangle); 3]> {
        let mut out = Vec::with_capacity(3);
        for c in Color::ALL {
            out.push((self.edge(c)?, self.neighbor(c)?));
        }
        Ok([out[0], out[1], out[2]])
    }

    /// Color of the edge to cross in order to move toward a vertex whose
    /// triangle contains `target`, or `None` when `target` is a region of
    /// this vertex.
    pub fn step_toward(&self, target: &Slope) -> Option<Color> {
        if self.contains(target) {
            return None;
        }
        let [a, b, c] = self.regions;
        // The three edges split the circle into arcs (a,b), (b,c), (c,a).
        let replaced = if a < *target && *target < b {
            c
        } else if b < *target && *target < c {
            a
        } else {
            b
        };
        Some(replaced.color())
    }

    /// Tree path from this vertex to the nearest vertex having `target` as
    /// one of its regions, as the sequence of crossed edge colors.
    pub fn path_to(&self, target: &Slope) -> Result<Vec<Color>> {
        let mut path = Vec::new();
        let mut t = *self;
        while let Some(c) = t.step_toward(target) {
            path.push(c);
            t = t.neighbor(c)?;
        }
        Ok(path)
    }

    /// The vertex reached by following a color path.
    pub fn follow(&self, path: &[Color]) -> Result<Triangle> {
        path.iter().try_fold(*self, |t, &c| t.neighbor(c))
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.regions;
        write!(f, "({a}, {b}, {c})")
    }
}

impl FromStr for Triangle {
    type Err = Error;

    /// Parses `"p/q,r/s,u/v"` (optionally parenthesized).
    fn from_str(s: &str) -> Result<Triangle> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("triangle '{s}' needs three slopes")));
        }
        Triangle::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

impl Serialize for Triangle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.regions.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Triangle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Triangle, D::Error> {
        let [a, b, c] = <[Slope; 3]>::deserialize(deserializer)?;
        Triangle::new(a, b, c).map_err(serde::de::Error::custom)
    }
}

/// The region `W ≠ Z` that is a Farey neighbor of both `x` and `y`.
fn reflect(x: &Slope, y: &Slope, z: &Slope) -> Result<Slope> {
    let plus = x.mediant(y)?;
    let minus = x.antimediant(y)?;
    if plus == *z {
        Ok(minus)
    } else if minus == *z {
        Ok(plus)
    } else {
        Err(Error::NotATriangle(*x, *y, *z))
    }
}

/// An edge `e ↔ (X, Y; Z, W)` of the dual tree: flanked by regions `X`, `Y`
/// with endpoints at the vertices `{X, Y, Z}` and `{X, Y, W}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TreeEdge {
    pub flanking: [Slope; 2],
    pub ends: [Slope; 2],
}

impl TreeEdge {
    fn from_parts(x: Slope, y: Slope, z: Slope, w: Slope) -> TreeEdge {
        let mut flanking = [x, y];
        let mut ends = [z, w];
        flanking.sort();
        ends.sort();
        TreeEdge { flanking, ends }
    }

    pub fn new(x: Slope, y: Slope, z: Slope, w: Slope) -> Result<TreeEdge> {
        let t = Triangle::new(x, y, z)?;
        Triangle::new(x, y, w)?;
        if z == w {
            return Err(Error::NotATriangle(x, y, w));
        }
        let e = t.edge(z.color())?;
        debug_assert!(e.ends.contains(&w));
        Ok(e)
    }

    /// Shared color of the edge and of both opposite regions.
    pub fn color(&self) -> Color {
        self.ends[0].color()
    }

    /// The two vertices joined by this edge, ordered as `ends`.
    pub fn endpoints(&self) -> [Triangle; 2] {
        let [x, y] = self.flanking;
        self.ends.map(|z| {
            let mut regions = [x, y, z];
            regions.sort();
            Triangle { regions }
        })
    }
}

impl fmt::Display for TreeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}; {}, {})",
            self.flanking[0], self.flanking[1], self.ends[0], self.ends[1]
        )
    }
}

/// JSON-facing description of a vertex and its three incident edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub regions: [Slope; 3],
    pub edges: Vec<NeighborhoodEdge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodEdge {
    pub color: Color,
    pub flanking: [Slope; 2],
    pub ends: [Slope; 2],
    pub neighbor: [Slope; 3],
}

impl Neighborhood {
    pub fn of(t: &Triangle) -> Result<Neighborhood> {
        let edges = t
            .neighbors()?
            .iter()
            .map(|(e, n)| NeighborhoodEdge {
                color: e.color(),
                flanking: e.flanking,
                ends: e.ends,
                neighbor: n.regions(),
            })
            .collect();
        Ok(Neighborhood {
            regions: t.regions(),
            edges,
        })
    }
}

/// All vertices within tree distance `radius` of `center`, in breadth-first
/// order (each vertex listed once).
pub fn ball(center: &Triangle, radius: usize) -> Result<Vec<Triangle>> {
    let mut out = vec![*center];
    let mut frontier = vec![(*center, None::<Color>)];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (t, came_from) in frontier {
            for c in Color::ALL {
                if Some(c) == came_from {
                    continue;
                }
                let n = t.neighbor(c)?;
                out.push(n);
                next.push((n, Some(c)));
            }
        }
        frontier = next;
    }
    Ok(out)
}
