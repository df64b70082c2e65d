//! Finite binary strings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A finite sequence of binary symbols, displayed as `0`/`1` characters.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitString(Vec<bool>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bit character {0:?} (expected '0' or '1')")]
pub struct ParseBitsError(pub char);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// `n` copies of `bit`.
    pub fn repeat(bit: bool, n: usize) -> Self {
        Self(vec![bit; n])
    }

    /// The `len` low-order bits of `value`, most significant first.
    pub fn from_uint(value: u64, len: usize) -> Self {
        Self((0..len).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.0.pop()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn extended(&self, bit: bool) -> Self {
        let mut out = self.clone();
        out.push(bit);
        out
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, len: usize) -> Self {
        Self(self.0[..len.min(self.0.len())].to_vec())
    }

    /// All strings of length exactly `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "enumeration limited to lengths below 64");
        (0..1u64 << len).map(move |v| BitString::from_uint(v, len))
    }

    /// All strings of length at most `max_len`, in length-lexicographic order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_length)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseBitsError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BitString {
    type Error = ParseBitsError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let b: BitString = "0110".parse().unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.to_string(), "0110");
        assert_eq!("01x".parse::<BitString>(), Err(ParseBitsError('x')));
        assert_eq!("".parse::<BitString>().unwrap(), BitString::new());
    }

    #[test]
    fn length_lex_enumeration() {
        let all: Vec<String> = BitString::all_up_to(2).map(|b| b.to_string()).collect();
        assert_eq!(all, ["", "0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn prefixes() {
        let a: BitString = "01".parse().unwrap();
        let b: BitString = "011".parse().unwrap();
        assert!(a.is_prefix_of(&b));
        assert!(!b.is_prefix_of(&a));
        assert!(BitString::new().is_prefix_of(&a));
    }
}
