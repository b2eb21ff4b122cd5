//! Rank encodings of integer sequences.
//!
//! The rank encoding of a sequence replaces every character by its rank among
//! the *distinct* characters seen before it:
//!
//! * `j` when it equals the `j`-th smallest earlier character,
//! * `j + 0.5` when it lies strictly between the `j`-th and `(j+1)`-st,
//! * `0.5` for a new minimum and `d + 0.5` for a new maximum (`d` distinct
//!   earlier characters).
//!
//! Two sequences are an order-preserving match exactly when their encodings
//! are equal. Half-integers are stored doubled, so `0.5` is `1`, `1` is `2`
//! and so on; all comparisons are plain integer comparisons.

use std::fmt;

use crate::error::{Error, Result};

/// One symbol of a rank encoding, stored doubled.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct RankValue(u32);

impl RankValue {
    /// The symbol `0.5`, which every encoding starts with.
    pub const HALF: RankValue = RankValue(1);

    /// Wraps a doubled value. Panics on zero.
    pub fn from_doubled(doubled: u32) -> Self {
        assert!(doubled >= 1, "rank values are at least 0.5");
        RankValue(doubled)
    }

    pub fn doubled(self) -> u32 {
        self.0
    }

    /// `true` for an exact tie with an earlier character.
    pub fn is_tie(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Debug for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// A rank encoding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Encoding(Vec<RankValue>);

impl Encoding {
    /// Builds an encoding from doubled values, checking the encoding
    /// invariants (symbol `k` is at most `2k - 1`).
    pub fn from_doubled(values: &[u32]) -> Result<Self> {
        for (k, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > 2 * k + 1 {
                return Err(Error::InvalidArgument(format!(
                    "doubled symbol {v} at position {} is out of range",
                    k + 1
                )));
            }
        }
        Ok(Encoding(values.iter().map(|&v| RankValue(v)).collect()))
    }

    pub(crate) fn from_doubled_unchecked(values: &[u32]) -> Self {
        Encoding(values.iter().map(|&v| RankValue(v)).collect())
    }

    /// Parses the human notation used in docs and tests, e.g. `"0.5 1.5 0.5 2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut doubled = Vec::new();
        for tok in text.split_whitespace() {
            let v = match tok.split_once('.') {
                Some((int, "5")) => int.parse::<u32>().map(|x| 2 * x + 1),
                None => tok.parse::<u32>().map(|x| 2 * x),
                _ => return Err(Error::InvalidArgument(format!("bad rank symbol {tok:?}"))),
            }
            .map_err(|_| Error::InvalidArgument(format!("bad rank symbol {tok:?}")))?;
            doubled.push(v);
        }
        Self::from_doubled(&doubled)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[RankValue] {
        &self.0
    }

    pub fn doubled(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|r| r.0)
    }

    pub fn to_doubled_vec(&self) -> Vec<u32> {
        self.doubled().collect()
    }

    pub fn prefix(&self, len: usize) -> Encoding {
        Encoding(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn starts_with(&self, other: &Encoding) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl fmt::Debug for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E(")?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// A bounded set of distinct characters answering half-integer rank queries.
///
/// Backed by a sorted vector; with polylogarithmic capacity the linear insert
/// is cheaper in practice than a tree.
#[derive(Debug, Clone)]
pub struct OrderStatSet {
    sorted: Vec<u64>,
    cap: usize,
}

impl OrderStatSet {
    pub fn with_capacity(cap: usize) -> Self {
        OrderStatSet { sorted: Vec::with_capacity(cap), cap }
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    /// Number of distinct values held.
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn clear(&mut self) {
        self.sorted.clear();
    }

    /// Doubled rank of `x` against the current contents.
    pub fn rank(&self, x: u64) -> RankValue {
        match self.sorted.binary_search(&x) {
            Ok(k) => RankValue(2 * (k as u32 + 1)),
            Err(k) => RankValue(2 * k as u32 + 1),
        }
    }

    /// Ranks `x`, then inserts it. Fails once more than `cap` distinct
    /// values would be held.
    pub fn rank_and_insert(&mut self, x: u64) -> Result<RankValue> {
        match self.sorted.binary_search(&x) {
            Ok(k) => Ok(RankValue(2 * (k as u32 + 1))),
            Err(k) => {
                if self.sorted.len() >= self.cap {
                    return Err(Error::InvalidArgument(format!("order-statistics set capacity {} exceeded", self.cap)));
                }
                self.sorted.insert(k, x);
                Ok(RankValue(2 * k as u32 + 1))
            }
        }
    }
}

/// Computes the rank encoding of `seq`.
pub fn rank_encode(seq: &[u64]) -> Result<Encoding> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument("cannot encode an empty sequence".into()));
    }
    Ok(encode_unchecked(seq))
}

pub(crate) fn encode_unchecked(seq: &[u64]) -> Encoding {
    let mut set = OrderStatSet::with_capacity(seq.len());
    let mut out = Vec::with_capacity(seq.len());
    for &x in seq {
        // capacity equals the input length, so insertion cannot fail
        out.push(set.rank_and_insert(x).expect("capacity covers input"));
    }
    Encoding(out)
}

/// Encodes `seq` as raw doubled values into `out` (cleared first).
pub(crate) fn encode_doubled_into<T: Copy + Ord>(seq: &[T], sorted: &mut Vec<T>, out: &mut Vec<u32>) {
    sorted.clear();
    out.clear();
    for &x in seq {
        match sorted.binary_search(&x) {
            Ok(k) => out.push(2 * (k as u32 + 1)),
            Err(k) => {
                sorted.insert(k, x);
                out.push(2 * k as u32 + 1);
            }
        }
    }
}

/// `true` iff `a` and `b` are an order-preserving match.
pub fn order_isomorphic(a: &[u64], b: &[u64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    encode_unchecked(a) == encode_unchecked(b)
}

/// Replaces every value by twice its dense rank among the distinct values,
/// leaving odd slots free for values strictly in between.
pub(crate) fn dense_doubled(seq: &[u64]) -> Vec<u64> {
    let mut distinct: Vec<u64> = seq.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    seq.iter().map(|x| 2 * (distinct.binary_search(x).expect("present") as u64 + 1)).collect()
}

/// Encoding of `x · prefix`, where `x` is any character whose rank within
/// `prefix` is `b`.
///
/// After `dense_doubled`, the doubled rank itself is such a character: an
/// integer rank `j` equals the `j`-th distinct value `2j`, a half rank
/// `r + 0.5` is `2r + 1`, strictly between `2r` and `2r + 2`.
pub fn prepend_rank(prefix: &[u64], b: RankValue) -> Result<Encoding> {
    Ok(encode_unchecked(&prepended_string(prefix, b)?))
}

/// A concrete string whose encoding is `prepend_rank(prefix, b)`.
pub(crate) fn prepended_string(prefix: &[u64], b: RankValue) -> Result<Vec<u64>> {
    let dense = dense_doubled(prefix);
    let distinct = dense.iter().copied().max().unwrap_or(0) / 2;
    if u64::from(b.0) > 2 * distinct + 1 || b.0 == 0 {
        return Err(Error::InvalidArgument(format!(
            "rank {b} is out of range for a prefix with {distinct} distinct characters"
        )));
    }
    let mut seq = Vec::with_capacity(dense.len() + 1);
    seq.push(u64::from(b.0));
    seq.extend_from_slice(&dense);
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(text: &str) -> Encoding {
        Encoding::parse(text).unwrap()
    }

    #[test]
    fn encodes_worked_examples() {
        assert_eq!(rank_encode(&[6, 7, 1]).unwrap(), enc("0.5 1.5 0.5"));
        assert_eq!(rank_encode(&[2, 3, 1, 2]).unwrap(), enc("0.5 1.5 0.5 2"));
        assert_eq!(rank_encode(&[5]).unwrap(), enc("0.5"));
        assert_eq!(rank_encode(&[5, 5, 5]).unwrap(), enc("0.5 1 1"));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(rank_encode(&[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn distinct_set_semantics() {
        // 3 appears twice before the last character; rank is by distinct values
        let e = rank_encode(&[3, 9, 7, 2, 3, 5, 6, 8, 4, 3]).unwrap();
        assert_eq!(e, enc("0.5 1.5 1.5 0.5 2 2.5 3.5 5.5 2.5 2"));
    }

    #[test]
    fn isomorphism_examples() {
        assert!(order_isomorphic(&[4, 1, 3, 2], &[10, 3, 7, 5]));
        assert!(!order_isomorphic(&[1, 2], &[2, 1]));
        assert!(order_isomorphic(&[5, 6, 0, 5], &[2, 3, 1, 2]));
        assert!(!order_isomorphic(&[1, 2], &[1, 2, 3]));
    }

    #[test]
    fn prepend_examples() {
        let half = |x: u32| RankValue::from_doubled(x);
        assert_eq!(prepend_rank(&[2, 3, 1], half(3)).unwrap(), enc("0.5 1.5 2.5 0.5"));
        assert_eq!(prepend_rank(&[2, 3, 4, 1], half(2)).unwrap(), enc("0.5 1.5 2.5 3.5 1"));
        assert_eq!(prepend_rank(&[1, 2], half(5)).unwrap(), enc("0.5 0.5 1.5"));
        assert_eq!(prepend_rank(&[4, 9], half(1)).unwrap(), enc("0.5 1.5 2.5"));
        assert!(prepend_rank(&[1, 2], half(6)).is_err());
    }

    #[test]
    fn order_stat_set_capacity() {
        let mut s = OrderStatSet::with_capacity(2);
        assert_eq!(s.rank_and_insert(5).unwrap().doubled(), 1);
        assert_eq!(s.rank_and_insert(5).unwrap().doubled(), 2);
        assert_eq!(s.rank_and_insert(7).unwrap().doubled(), 3);
        assert!(s.rank_and_insert(6).is_err());
        assert_eq!(s.rank(6).doubled(), 3);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let e = enc("0.5 1.5 1 3.5");
        assert_eq!(e.to_string(), "0.5 1.5 1 3.5");
        assert!(Encoding::parse("2").is_err());
        assert!(Encoding::parse("0.7").is_err());
    }
}
