//! Fixed-length bitsets ordered as little-endian integers.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A bitset of fixed length. Bit `i` is the coefficient of `2^i`, so the
/// `Ord` impl compares two sets of equal length as unsigned integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    len: usize,
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Result<Self> {
        let mut set = Bitset::new(len);
        for i in indices {
            if i >= len {
                return Err(Error::VertexOutOfRange { index: i, count: len });
            }
            set.insert(i);
        }
        Ok(set)
    }

    /// Builds a set of at most 64 bits from the low bits of `mask`.
    pub fn from_u64(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut set = Bitset::new(len);
        if len > 0 {
            set.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        }
        set
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn complement(&self) -> Bitset {
        let mut out = Bitset::new(self.len);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o = !w;
        }
        out.clear_tail();
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Lowercase hex with `ceil(len/4)` digits. Digit `k` (from the left)
    /// holds bits `4k..4k+4`, bit `4k+j` being `1 << j` of the digit.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for k in 0..digits {
            let mut nibble = 0u32;
            for j in 0..4 {
                let i = 4 * k + j;
                if i < self.len && self.contains(i) {
                    nibble |= 1 << j;
                }
            }
            s.push(char::from_digit(nibble, 16).unwrap());
        }
        s
    }

    /// Inverse of [`Bitset::to_hex`]. Rejects wrong lengths, non-hex
    /// characters and set bits at positions `>= len`.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let digits = len.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::Format(format!(
                "hex string has {} digits, expected {digits}",
                hex.len()
            )));
        }
        let mut set = Bitset::new(len);
        for (k, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Format(format!("invalid hex digit {c:?}")))?;
            for j in 0..4 {
                if (nibble >> j) & 1 == 1 {
                    let i = 4 * k + j;
                    if i >= len {
                        return Err(Error::Format(format!(
                            "stray set bit at index {i} beyond vertex count {len}"
                        )));
                    }
                    set.insert(i);
                }
            }
        }
        Ok(set)
    }
}

impl Ord for Bitset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Bitset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitset({}; {})", self.len, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_order() {
        let a = Bitset::from_indices(70, [0, 1, 2]).unwrap();
        let b = Bitset::from_indices(70, [65]).unwrap();
        assert!(a < b);
        let c = Bitset::from_indices(70, [3]).unwrap();
        assert!(a < c);
    }

    #[test]
    fn hex_layout() {
        // bits 1,2,3 -> 0xe ; bit 6 -> 0x4
        let s = Bitset::from_indices(8, [1, 2, 3, 6]).unwrap();
        assert_eq!(s.to_hex(), "e4");
        assert!(Bitset::from_hex(6, "e4").is_err());
        assert!(Bitset::from_hex(6, "e3").is_ok());
        assert!(Bitset::from_hex(6, "e").is_err());
        assert!(Bitset::from_hex(6, "zz").is_err());
    }

    #[test]
    fn complement_clears_tail() {
        let s = Bitset::from_indices(5, [0]).unwrap();
        let c = s.complement();
        assert_eq!(c.count_ones(), 4);
        assert_eq!(c.to_hex(), "e1");
    }

    proptest! {
        #[test]
        fn hex_round_trip(len in 1usize..200, seed in any::<u64>()) {
            let set = Bitset::from_indices(len, (0..len).filter(|i| (seed.rotate_left(*i as u32 % 64) ^ *i as u64) & 1 == 1)).unwrap();
            let back = Bitset::from_hex(len, &set.to_hex()).unwrap();
            prop_assert_eq!(back, set);
        }
    }
}
