//! Bit-mask subsets of a small ground set `{0, .., n-1}`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest ground set a [`SubsetMask`] can describe.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("ground set of {0} elements exceeds the {MAX_ELEMENTS}-element limit")]
    GroundTooLarge(usize),
    #[error("element {index} is outside the ground set of size {n}")]
    OutOfGround { index: usize, n: usize },
}

/// A subset of `{0, .., n-1}` stored one bit per element.
///
/// Set operations assume both operands share the same ground size; this is
/// checked in debug builds only.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u64,
    n: u8,
}

fn universe_bits(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl SubsetMask {
    pub fn empty(n: usize) -> Result<Self, SubsetError> {
        if n > MAX_ELEMENTS {
            return Err(SubsetError::GroundTooLarge(n));
        }
        Ok(Self { bits: 0, n: n as u8 })
    }

    pub fn full(n: usize) -> Result<Self, SubsetError> {
        let mut s = Self::empty(n)?;
        s.bits = universe_bits(n);
        Ok(s)
    }

    pub fn from_bits(bits: u64, n: usize) -> Result<Self, SubsetError> {
        let s = Self::empty(n)?;
        if bits & !universe_bits(n) != 0 {
            let index = 63 - (bits & !universe_bits(n)).leading_zeros() as usize;
            return Err(SubsetError::OutOfGround { index, n });
        }
        Ok(Self { bits, ..s })
    }

    pub fn from_indices<I>(n: usize, indices: I) -> Result<Self, SubsetError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(n)?;
        for index in indices {
            if index >= n {
                return Err(SubsetError::OutOfGround { index, n });
            }
            s.bits |= 1 << index;
        }
        Ok(s)
    }

    /// Mask from raw bits that the caller knows to lie inside the ground set.
    pub(crate) fn from_bits_unchecked(bits: u64, n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS && bits & !universe_bits(n) == 0);
        Self { bits, n: n as u8 }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        index < self.ground_size() && self.bits >> index & 1 == 1
    }

    pub fn with(&self, index: usize) -> Self {
        debug_assert!(index < self.ground_size());
        Self { bits: self.bits | 1 << index, n: self.n }
    }

    pub fn without(&self, index: usize) -> Self {
        Self { bits: self.bits & !(1u64 << index), n: self.n }
    }

    #[inline]
    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self { bits: self.bits | other.bits, n: self.n }
    }

    #[inline]
    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self { bits: self.bits & other.bits, n: self.n }
    }

    #[inline]
    pub fn difference(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self { bits: self.bits & !other.bits, n: self.n }
    }

    #[inline]
    pub fn complement(&self) -> Self {
        Self { bits: !self.bits & universe_bits(self.ground_size()), n: self.n }
    }

    #[inline]
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_proper_subset_of(&self, other: &Self) -> bool {
        self.is_subset_of(other) && self.bits != other.bits
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted element lists.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// All subsets of `self`, ascending in their bit value.
    pub fn subsets(&self) -> Subsets {
        Subsets { mask: self.bits, next: Some(0), n: self.n }
    }

    /// Relabels the elements of `self` as positions inside `within`.
    ///
    /// `self` must be a subset of `within`; the result lives on a ground set of
    /// size `within.len()`.
    pub fn compress(&self, within: &Self) -> Self {
        debug_assert!(self.is_subset_of(within));
        let mut bits = 0u64;
        for (pos, e) in within.iter().enumerate() {
            if self.bits >> e & 1 == 1 {
                bits |= 1 << pos;
            }
        }
        Self::from_bits_unchecked(bits, within.len())
    }

    /// Inverse of [`compress`](Self::compress).
    pub fn expand(&self, within: &Self) -> Self {
        debug_assert_eq!(self.ground_size(), within.len());
        let mut bits = 0u64;
        for (pos, e) in within.iter().enumerate() {
            if self.bits >> pos & 1 == 1 {
                bits |= 1 << e;
            }
        }
        Self::from_bits_unchecked(bits, within.ground_size())
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by cardinality, then lexicographically on the element lists.
impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.lex_cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.n)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl IntoIterator for &SubsetMask {
    type Item = usize;
    type IntoIter = Elements;
    fn into_iter(self) -> Elements {
        self.iter()
    }
}

pub struct Elements {
    bits: u64,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let e = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.bits.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// Carry-rippler enumeration of the subsets of a mask.
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
    n: u8,
}

impl Iterator for Subsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.mask) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(SubsetMask { bits: cur, n: self.n })
    }
}
