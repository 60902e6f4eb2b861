//! Number types a Markoff map can be evaluated in.
//!
//! Double-precision complex numbers are the default. [`HiComplex`] carries
//! 200-bit binary significands (about 60 decimal digits) for work near the
//! degenerate parameter `μ = 4`, where tie detection in double precision
//! stops being meaningful.

use std::cmp::Ordering;
use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;

/// Arithmetic needed to expand a Markoff map and orient its edges.
pub trait MapScalar: Clone + Send + Sync + fmt::Debug + 'static {
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Modulus rounded to `f64` (may be `inf` for huge values).
    fn modulus(&self) -> f64;
    /// Compares moduli; `Equal` when they agree within the type's relative
    /// tie tolerance.
    fn cmp_modulus(&self, other: &Self) -> Ordering;
}

/// Relative modulus tolerance below which two double-precision values tie.
pub const F64_TIE_REL: f64 = 1e-12;

impl MapScalar for Complex64 {
    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn cmp_modulus(&self, other: &Self) -> Ordering {
        let (a, b) = (self.norm(), other.norm());
        if (a - b).abs() <= F64_TIE_REL * a.max(b) {
            Ordering::Equal
        } else {
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        }
    }
}

/// Significand width of [`HiComplex`] components, in bits.
pub const HI_PRECISION_BITS: usize = 200;
/// Relative modulus tolerance below which two high-precision values tie.
pub const HI_TIE_REL: f64 = 1e-45;

type Real = FBig<HalfEven>;

fn real(x: f64) -> Real {
    Real::try_from(x)
        .expect("finite input")
        .with_precision(HI_PRECISION_BITS)
        .value()
}

/// A complex number with 200-bit real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct HiComplex {
    pub re: FBig<HalfEven>,
    pub im: FBig<HalfEven>,
}

impl HiComplex {
    pub fn new(re: f64, im: f64) -> HiComplex {
        HiComplex {
            re: real(re),
            im: real(im),
        }
    }

    pub fn norm_sqr(&self) -> FBig<HalfEven> {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, other: &HiComplex) -> HiComplex {
        let d = other.norm_sqr();
        let re = (&self.re * &other.re + &self.im * &other.im) / &d;
        let im = (&self.im * &other.re - &self.re * &other.im) / &d;
        HiComplex { re, im }
    }

    fn scale(&self, k: f64) -> HiComplex {
        let k = real(k);
        HiComplex {
            re: &self.re * &k,
            im: &self.im * &k,
        }
    }
}

impl fmt::Debug for HiComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HiComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = self.re.to_decimal().value();
        let im = self.im.to_decimal().value();
        write!(f, "({re}) + ({im})i")
    }
}

impl MapScalar for HiComplex {
    fn from_c64(z: Complex64) -> Self {
        HiComplex::new(z.re, z.im)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn add(&self, other: &Self) -> Self {
        HiComplex {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        HiComplex {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        HiComplex {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn modulus(&self) -> f64 {
        self.norm_sqr().to_f64().value().sqrt()
    }

    fn cmp_modulus(&self, other: &Self) -> Ordering {
        let (a, b) = (self.norm_sqr(), other.norm_sqr());
        let larger = if a > b { &a } else { &b };
        // |a − b| ≤ 2·tol·max compares squared moduli
        let diff = if a > b { &a - &b } else { &b - &a };
        if diff <= larger * real(2.0 * HI_TIE_REL) {
            Ordering::Equal
        } else {
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        }
    }
}

/// Dominant root of `X³ − 3X² + a` refined to 200 bits: the double-precision
/// root polished by Newton iteration in high precision. Near the double
/// root at `a = 4` convergence is linear, so the iteration budget is large.
pub fn dominant_root_hi(a: Complex64) -> HiComplex {
    let start = crate::cubic::dominant_root(a);
    let a = HiComplex::from_c64(a);
    let three = HiComplex::new(3.0, 0.0);
    let mut x = HiComplex::from_c64(start);
    for _ in 0..400 {
        // P = x²(x − 3) + a, P' = 3x² − 6x
        let x2 = x.mul(&x);
        let p = x2.mul(&x.sub(&three)).add(&a);
        let dp = x2.scale(3.0).sub(&x.scale(6.0));
        if dp.norm_sqr() == Real::ZERO || p.norm_sqr() == Real::ZERO {
            break;
        }
        let step = p.div(&dp);
        let next = x.sub(&step);
        let shrink = step.norm_sqr() <= next.norm_sqr() * real(1e-110);
        x = next;
        if shrink {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_ties() {
        let a = Complex64::new(3.0, 4.0);
        let b = Complex64::new(5.0, 0.0);
        assert_eq!(a.cmp_modulus(&b), Ordering::Equal);
        assert_eq!(a.cmp_modulus(&Complex64::new(5.1, 0.0)), Ordering::Less);
    }

    #[test]
    fn hi_arithmetic() {
        let a = HiComplex::new(1.5, -2.0);
        let b = HiComplex::new(0.25, 4.0);
        let p = a.mul(&b).to_c64();
        let q = Complex64::new(1.5, -2.0) * Complex64::new(0.25, 4.0);
        assert!((p - q).norm() < 1e-15);
        let r = a.div(&b).mul(&b).sub(&a);
        assert!(r.modulus() < 1e-50);
    }

    #[test]
    fn hi_ties_are_tighter_than_f64() {
        let one = HiComplex::new(1.0, 0.0);
        let near = HiComplex::new(1.0 + 1e-14, 0.0);
        assert_eq!(one.cmp_modulus(&near), Ordering::Less);
        assert_eq!(
            Complex64::new(1.0, 0.0).cmp_modulus(&Complex64::new(1.0 + 1e-14, 0.0)),
            Ordering::Equal
        );
    }

    #[test]
    fn hi_dominant_root() {
        let a = -3.0 - 17f64.sqrt();
        let t = dominant_root_hi(Complex64::new(a, 0.0));
        // residual in high precision is limited by the f64 coefficient
        let x = t.clone();
        let three = HiComplex::new(3.0, 0.0);
        let p = x.mul(&x).mul(&x.sub(&three)).add(&HiComplex::new(a, 0.0));
        assert!(p.modulus() < 1e-50);
        let t54 = dominant_root_hi(Complex64::new(54.0, 0.0)).to_c64();
        assert!((t54 - Complex64::new(3.0, 3.0)).norm() < 1e-15);
    }
}
