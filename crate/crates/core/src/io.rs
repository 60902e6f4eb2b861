//! Plain-text complex literals: `a`, `a+bi`, `a-bi`, `bi`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad complex literal '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let real = |x: &str| -> Result<f64> {
        let v: f64 = x.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x)?,
    };
    Ok(Complex64::new(real(re)?, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let c = Complex64::new;
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), c(-2.5, 0.0));
        assert_eq!(parse_complex("2+i").unwrap(), c(2.0, 1.0));
        assert_eq!(parse_complex("2-3.5i").unwrap(), c(2.0, -3.5));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("4i").unwrap(), c(0.0, 4.0));
        assert_eq!(parse_complex("1e-3-2e+2i").unwrap(), c(1e-3, -200.0));
        assert_eq!(parse_complex(" -1 + 2i ").unwrap(), c(-1.0, 2.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("2+xi").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn round_trip() {
        for z in [Complex64::new(0.1, -0.2), Complex64::new(-3.0, 0.0), Complex64::new(1e-20, 7.5)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
