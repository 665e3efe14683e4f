//! Small subsets over ground elements, stored as 64-bit masks.
//!
//! Elements are plain `usize` identifiers. Everything in this crate works at
//! desk scale (exhaustive enumeration over at most a dozen elements), so a
//! bitmask holds any subset we ever build. Identifiers must stay below
//! [`MAX_ELEMENTS`]; constructors that accept external ids enforce this.

use std::fmt;

/// Upper bound (exclusive) on element identifiers representable in a mask.
pub const MAX_ELEMENTS: usize = 64;

/// A set of element ids, bit `i` meaning element `i` is present.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn singleton(e: usize) -> ElemSet {
        debug_assert!(e < MAX_ELEMENTS);
        ElemSet(1 << e)
    }

    pub fn from_bits(bits: u64) -> ElemSet {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_ELEMENTS && self.0 & (1 << e) != 0
    }

    pub fn with(self, e: usize) -> ElemSet {
        debug_assert!(e < MAX_ELEMENTS);
        ElemSet(self.0 | (1 << e))
    }

    pub fn without(self, e: usize) -> ElemSet {
        debug_assert!(e < MAX_ELEMENTS);
        ElemSet(self.0 & !(1 << e))
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersect(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn minus(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ElemSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Ids in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    /// Smallest id, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// The single member of a singleton set.
    pub fn only(self) -> Option<usize> {
        if self.len() == 1 {
            self.first()
        } else {
            None
        }
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> ElemSet {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s = s.with(e);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All subsets of `universe`, ascending by mask value (empty set first).
pub fn subsets_of(universe: ElemSet) -> impl Iterator<Item = ElemSet> {
    let full = universe.bits();
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        // ascending submask walk
        next = if cur == full {
            None
        } else {
            Some(cur.wrapping_sub(full) & full)
        };
        Some(ElemSet(cur))
    })
}
