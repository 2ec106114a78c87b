//! Subsets of rule ids `{1..m}` and the enumeration cap.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on `m` for the exhaustive `2^m` enumerations.
pub const DEFAULT_MAX_M: usize = 24;
/// Largest cap that `EVIDENT_MAX_M` may select.
pub const HARD_MAX_M: usize = 30;
/// Widest index set representable at all (used by the Monte-Carlo sampler).
pub const MAX_INDEX: usize = 64;

pub const MAX_M_ENV: &str = "EVIDENT_MAX_M";

/// The enumeration cap: `EVIDENT_MAX_M` when set, otherwise [`DEFAULT_MAX_M`].
pub fn enumeration_cap() -> Result<usize> {
    match std::env::var(MAX_M_ENV) {
        Err(_) => Ok(DEFAULT_MAX_M),
        Ok(raw) => {
            let cap: usize = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidCap(format!("{MAX_M_ENV}={raw:?} is not a non-negative integer")))?;
            if cap > HARD_MAX_M {
                return Err(Error::InvalidCap(format!("{MAX_M_ENV}={cap} exceeds the hard limit {HARD_MAX_M}")));
            }
            Ok(cap)
        }
    }
}

/// Fails with [`Error::SizeLimit`] when `m` is beyond the enumeration cap.
pub fn check_enumerable(m: usize) -> Result<()> {
    let cap = enumeration_cap()?;
    if m > cap {
        Err(Error::SizeLimit { m, cap })
    } else {
        Ok(())
    }
}

/// A subset of `{1..m}`; id `i` is stored in bit `i - 1`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaIndex(u64);

/// Index sets over defaults use the same representation.
pub type GammaIndex = SigmaIndex;

impl SigmaIndex {
    pub const EMPTY: SigmaIndex = SigmaIndex(0);

    pub fn from_bits(bits: u64) -> Self {
        SigmaIndex(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1..m}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_INDEX);
        if m == MAX_INDEX {
            SigmaIndex(u64::MAX)
        } else {
            SigmaIndex((1u64 << m) - 1)
        }
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut s = SigmaIndex::EMPTY;
        for id in ids {
            s = s.with(id);
        }
        s
    }

    pub fn contains(self, id: usize) -> bool {
        (1..=MAX_INDEX).contains(&id) && self.0 >> (id - 1) & 1 == 1
    }

    pub fn with(self, id: usize) -> Self {
        assert!((1..=MAX_INDEX).contains(&id), "rule id {id} out of range");
        SigmaIndex(self.0 | 1 << (id - 1))
    }

    pub fn without(self, id: usize) -> Self {
        if (1..=MAX_INDEX).contains(&id) {
            SigmaIndex(self.0 & !(1 << (id - 1)))
        } else {
            self
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: SigmaIndex) -> Self {
        SigmaIndex(self.0 | other.0)
    }

    pub fn intersection(self, other: SigmaIndex) -> Self {
        SigmaIndex(self.0 & other.0)
    }

    pub fn is_subset(self, other: SigmaIndex) -> bool {
        self.0 & !other.0 == 0
    }

    /// Highest member, if any.
    pub fn max_id(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(64 - self.0.leading_zeros() as usize)
        }
    }

    /// Members in ascending order.
    pub fn ids(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1).map(|i| i + 1)
    }

    /// Every subset of `{1..m}` in ascending bit order.
    pub fn all(m: usize) -> impl Iterator<Item = SigmaIndex> {
        assert!(m < MAX_INDEX);
        (0..1u64 << m).map(SigmaIndex)
    }

    /// Every subset of `self`, in ascending bit order.
    pub fn subsets(self) -> impl Iterator<Item = SigmaIndex> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(SigmaIndex(cur))
        })
    }
}

impl fmt::Debug for SigmaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids()).finish()
    }
}

impl fmt::Display for SigmaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, id) in self.ids().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SigmaIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.ids())
    }
}
