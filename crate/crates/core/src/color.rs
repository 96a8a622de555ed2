//! The four cell colors of a 3-colex and unordered color pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Cell color. The derived order `R < G < B < Y` fixes canonical iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "y")]
    Y,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::R, Color::G, Color::B, Color::Y];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> char {
        match self {
            Color::R => 'r',
            Color::G => 'g',
            Color::B => 'b',
            Color::Y => 'y',
        }
    }

    /// The three colors other than `self`, in canonical order.
    pub fn others(self) -> [Color; 3] {
        let mut out = [Color::R; 3];
        let mut k = 0;
        for c in Self::ALL {
            if c != self {
                out[k] = c;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "r" | "R" => Ok(Color::R),
            "g" | "G" => Ok(Color::G),
            "b" | "B" => Ok(Color::B),
            "y" | "Y" => Ok(Color::Y),
            other => Err(Error::InvalidInput(format!("unknown color {other:?}"))),
        }
    }
}

/// Unordered pair of distinct colors, stored low-high.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorPair(Color, Color);

impl ColorPair {
    /// All six pairs in lexicographic order: rg, rb, ry, gb, gy, by.
    pub const ALL: [ColorPair; 6] = [
        ColorPair(Color::R, Color::G),
        ColorPair(Color::R, Color::B),
        ColorPair(Color::R, Color::Y),
        ColorPair(Color::G, Color::B),
        ColorPair(Color::G, Color::Y),
        ColorPair(Color::B, Color::Y),
    ];

    pub fn new(a: Color, b: Color) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(ColorPair(a, b)),
            std::cmp::Ordering::Greater => Some(ColorPair(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(self) -> Color {
        self.0
    }

    pub fn second(self) -> Color {
        self.1
    }

    pub fn colors(self) -> [Color; 2] {
        [self.0, self.1]
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 == c || self.1 == c
    }

    /// The two remaining colors.
    pub fn complement(self) -> ColorPair {
        let mut rest = Color::ALL.into_iter().filter(|&c| !self.contains(c));
        ColorPair(rest.next().unwrap(), rest.next().unwrap())
    }

    /// Position in [`ColorPair::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&p| p == self).unwrap()
    }
}

impl fmt::Display for ColorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl FromStr for ColorPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 2 {
            return Err(Error::InvalidInput(format!("color pair must be two letters, got {s:?}")));
        }
        let a: Color = chars[0].to_string().parse()?;
        let b: Color = chars[1].to_string().parse()?;
        ColorPair::new(a, b).ok_or_else(|| Error::InvalidInput(format!("repeated color in pair {s:?}")))
    }
}

impl Serialize for ColorPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColorPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_unordered() {
        assert_eq!(ColorPair::new(Color::Y, Color::R), ColorPair::new(Color::R, Color::Y));
        assert!(ColorPair::new(Color::G, Color::G).is_none());
        let ry: ColorPair = "yr".parse().unwrap();
        assert_eq!(ry.to_string(), "ry");
        assert_eq!(ry.complement().to_string(), "gb");
    }

    #[test]
    fn pair_indices_are_dense() {
        for (i, p) in ColorPair::ALL.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(p.complement().complement(), *p);
        }
    }
}
