use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Slope;
use crate::error::{Error, Result};

/// A generator of the free group `⟨α, β⟩` or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    Alpha,
    Beta,
    AlphaInv,
    BetaInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::Alpha => Letter::AlphaInv,
            Letter::Beta => Letter::BetaInv,
            Letter::AlphaInv => Letter::Alpha,
            Letter::BetaInv => Letter::Beta,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::Alpha => 'a',
            Letter::Beta => 'b',
            Letter::AlphaInv => 'A',
            Letter::BetaInv => 'B',
        }
    }
}

/// A freely reduced word in `α, β` and their inverses. Displayed with
/// `a`, `b` for the generators and `A`, `B` for their inverses.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Builds a word, cancelling adjacent inverse pairs.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// Exponent sums `(α, β)`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(a, b), l| match l {
            Letter::Alpha => (a + 1, b),
            Letter::AlphaInv => (a - 1, b),
            Letter::Beta => (a, b + 1),
            Letter::BetaInv => (a, b - 1),
        })
    }

    /// Commutator `αβα⁻¹β⁻¹`.
    pub fn commutator() -> Word {
        Word(vec![
            Letter::Alpha,
            Letter::Beta,
            Letter::AlphaInv,
            Letter::BetaInv,
        ])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s == "1" {
            return Ok(Word::default());
        }
        s.chars()
            .map(|c| match c {
                'a' => Ok(Letter::Alpha),
                'b' => Ok(Letter::Beta),
                'A' => Ok(Letter::AlphaInv),
                'B' => Ok(Letter::BetaInv),
                _ => Err(Error::Parse(format!("unknown letter '{c}' in word '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::new)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A primitive word representing the simple closed curve of slope `s` on
/// the one-holed torus, normalized so that `∞ ↦ α`, `0 ↦ β`, `1 ↦ αβ`.
///
/// Positive slopes are built by Stern–Brocot descent from the pair
/// `(0/1, 1/0) ↦ (β, α)`: the mediant of `L < R` gets the word `W_R·W_L`.
/// Each step is a Nielsen move, so consecutive pairs stay free bases and
/// the region opposite the mediant carries `W_R·W_L⁻¹` up to conjugacy.
/// Negative slopes apply the automorphism `β ↦ β⁻¹` to the word of `|s|`.
pub fn slope_word(s: Slope) -> Word {
    if s.is_infinite() {
        return Word(vec![Letter::Alpha]);
    }
    let (p, q) = (s.numerator(), s.denominator());
    if p == 0 {
        return Word(vec![Letter::Beta]);
    }
    let target = (p.unsigned_abs() as i128, q as i128);
    let (mut left, mut right) = ((0i128, 1i128), (1i128, 0i128));
    let mut left_word = vec![Letter::Beta];
    let mut right_word = vec![Letter::Alpha];
    let word = loop {
        let m = (left.0 + right.0, left.1 + right.1);
        let mut w = right_word.clone();
        w.extend_from_slice(&left_word);
        // compare target with m: t.0/t.1 vs m.0/m.1
        let lhs = target.0 * m.1;
        let rhs = m.0 * target.1;
        if lhs == rhs {
            break w;
        } else if lhs < rhs {
            right = m;
            right_word = w;
        } else {
            left = m;
            left_word = w;
        }
    };
    if p < 0 {
        Word(
            word.into_iter()
                .map(|l| if l == Letter::Beta { Letter::BetaInv } else { l })
                .collect(),
        )
    } else {
        Word(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn base_words() {
        assert_eq!(slope_word(Slope::INFINITY), w("a"));
        assert_eq!(slope_word(Slope::ZERO), w("b"));
        assert_eq!(slope_word(Slope::ONE), w("ab"));
        assert_eq!(slope_word(Slope::new(-1, 1).unwrap()), w("aB"));
        assert_eq!(slope_word(Slope::new(1, 2).unwrap()), w("abb"));
        assert_eq!(slope_word(Slope::new(2, 1).unwrap()), w("aab"));
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("aA"), Word::default());
        assert!(w("abAB").is_reduced());
        assert_eq!(w("ab").concat(&w("Ba")), w("aa"));
        assert_eq!(w("abb").inverse(), w("BBA"));
    }

    #[test]
    fn exponent_sums_match_slope() {
        for p in 0..=13i128 {
            for q in 1..=13i128 {
                let s = Slope::new(p, q).unwrap();
                let word = slope_word(s);
                assert!(word.is_reduced());
                let (a, b) = word.exponent_sums();
                assert_eq!((a, b), (s.numerator(), s.denominator()), "{s}");
                let (an, bn) = slope_word(Slope::new(-p, q).unwrap()).exponent_sums();
                if p != 0 {
                    assert_eq!((an, bn), (a, -b));
                }
            }
        }
    }
}
