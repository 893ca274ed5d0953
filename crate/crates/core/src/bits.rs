use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fixed-length bit string. Position 0 is the leftmost character of the
/// textual form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut s = BitString::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// Low `len` bits of `v`, bit `j` of `v` at position `j`.
    pub fn from_u64_lsb(v: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut s = BitString::zeros(len);
        if len > 0 {
            s.words[0] = if len == 64 { v } else { v & ((1u64 << len) - 1) };
        }
        s
    }

    /// `v` written in `len` binary digits, most significant first.
    pub fn from_u64_msb(v: u64, len: usize) -> Self {
        assert!(len <= 64);
        BitString::from_bits((0..len).map(|j| (v >> (len - 1 - j)) & 1 == 1))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = BitString::zeros(len);
        for w in s.words.iter_mut() {
            *w = rng.random();
        }
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of positions where `self` and `other` differ.
    pub fn distance(&self, other: &BitString) -> u64 {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len, other.len);
        BitString {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn xor_assign(&mut self, other: &BitString) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Position `j` as bit `j` of the result. Requires `len <= 64`.
    pub fn to_u64_lsb(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    /// The string read as a binary numeral, position 0 most significant.
    pub fn to_u64_msb(&self) -> u64 {
        assert!(self.len <= 64);
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InputShape(format!(
                    "invalid character {other:?} in bit string {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitString::from_bits(bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let s: BitString = "0110".parse().unwrap();
        assert_eq!(s.len(), 4);
        assert!(!s.get(0) && s.get(1) && s.get(2) && !s.get(3));
        assert_eq!(s.to_string(), "0110");
        assert_eq!(s.to_u64_msb(), 6);
        assert_eq!(s.to_u64_lsb(), 6);
        assert!("01x".parse::<BitString>().is_err());
    }

    #[test]
    fn numeral_orders() {
        assert_eq!(BitString::from_u64_msb(128, 8).to_string(), "10000000");
        assert_eq!(BitString::from_u64_lsb(1, 3).to_string(), "100");
    }

    proptest! {
        #[test]
        fn text_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let s = BitString::from_bits(bits.clone());
            let back: BitString = s.to_string().parse().unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(s.weight() as usize, bits.iter().filter(|b| **b).count());
        }
    }
}
