//! Per-window character ranks.
//!
//! Windows start at 1, ℓ+1, 2ℓ+1, … and cover `S[s..s+2ℓ]` (clamped at
//! `n`). Each character is stored as twice its dense rank inside its
//! window, so any range of length at most ℓ can be re-encoded from the one
//! window that starts at or before it.

use std::cmp::Ordering;

use crate::codec::{ByteReader, ByteWriter};
use crate::encoding::{encode_doubled_into, Encoding};
use crate::error::{Error, Result};
use crate::succinct::{bits_for, IntVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowStore {
    n: usize,
    ell: usize,
    values: IntVector,
    /// Start of each window inside `values`; derived, not serialized.
    offsets: Vec<usize>,
}

fn layout(n: usize, ell: usize) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(n.div_ceil(ell));
    let mut total = 0;
    let mut s = 1;
    while s <= n {
        offsets.push(total);
        total += window_len(n, ell, s);
        s += ell;
    }
    (offsets, total)
}

fn window_len(n: usize, ell: usize, start: usize) -> usize {
    (2 * ell + 1).min(n + 1 - start)
}

fn entry_width(ell: usize) -> usize {
    bits_for(4 * ell as u64 + 2)
}

fn check_dims(n: usize, ell: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot build a window store over an empty text".into()));
    }
    if ell == 0 {
        return Err(Error::InvalidArgument("window stride must be positive".into()));
    }
    Ok(())
}

impl WindowStore {
    /// Stride is clamped to `n`; a stride of at least `n` gives one window.
    pub fn build(text: &[u64], ell: usize) -> Result<Self> {
        let n = text.len();
        check_dims(n, ell)?;
        let ell = ell.min(n);
        let (offsets, total) = layout(n, ell);
        let mut values = IntVector::new(total, entry_width(ell));
        let mut distinct = Vec::with_capacity(2 * ell + 1);
        for (k, &off) in offsets.iter().enumerate() {
            let s = 1 + k * ell;
            let window = &text[s - 1..s - 1 + window_len(n, ell, s)];
            distinct.clear();
            distinct.extend_from_slice(window);
            distinct.sort_unstable();
            distinct.dedup();
            for (t, x) in window.iter().enumerate() {
                let rank = distinct.binary_search(x).expect("present") as u64 + 1;
                values.set(off + t, 2 * rank);
            }
        }
        Ok(WindowStore { n, ell, values, offsets })
    }

    /// Builds from a comparator over 1-based text positions. Only pairs at
    /// distance at most 2ℓ are asked for; a comparator that is not a total
    /// preorder on some window is rejected.
    pub fn build_local(mut cmp: impl FnMut(usize, usize) -> Ordering, n: usize, ell: usize) -> Result<Self> {
        check_dims(n, ell)?;
        let ell = ell.min(n);
        let (offsets, total) = layout(n, ell);
        let mut values = IntVector::new(total, entry_width(ell));
        let mut below = Vec::with_capacity(2 * ell + 1);
        let mut keys = Vec::with_capacity(2 * ell + 1);
        for (k, &off) in offsets.iter().enumerate() {
            let s = 1 + k * ell;
            let w = window_len(n, ell, s);
            // in a total preorder, the number of strictly smaller elements
            // identifies the equivalence class
            below.clear();
            below.extend((0..w).map(|a| (0..w).filter(|&b| cmp(s + b, s + a) == Ordering::Less).count()));
            keys.clear();
            keys.extend_from_slice(&below);
            keys.sort_unstable();
            keys.dedup();
            let rank = |a: usize| keys.binary_search(&below[a]).expect("present");
            for a in 0..w {
                for b in 0..w {
                    if cmp(s + a, s + b) != rank(a).cmp(&rank(b)) {
                        return Err(Error::InconsistentComparator(s));
                    }
                }
            }
            for a in 0..w {
                values.set(off + a, 2 * (rank(a) as u64 + 1));
            }
        }
        Ok(WindowStore { n, ell, values, offsets })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn window_count(&self) -> usize {
        self.offsets.len()
    }

    /// Longest `m` such that every `extract(i, m)` is answerable.
    pub fn max_extract_len(&self) -> usize {
        if self.ell == self.n {
            self.n
        } else {
            self.ell
        }
    }

    fn window_slice(&self, i: usize, m: usize) -> Result<(usize, usize)> {
        if i == 0 || m == 0 || i.checked_add(m - 1).is_none_or(|e| e > self.n) {
            return Err(Error::InvalidArgument(format!("range {i}+{m} outside 1..={}", self.n)));
        }
        let k = (i - 1) / self.ell;
        let s = 1 + k * self.ell;
        if i + m > s + window_len(self.n, self.ell, s) {
            return Err(Error::InvalidArgument(format!("length {m} exceeds the window stride {}", self.ell)));
        }
        Ok((self.offsets[k] + (i - s), m))
    }

    /// `E(S[i..i+m-1])`.
    pub fn extract(&self, i: usize, m: usize) -> Result<Encoding> {
        let mut out = Vec::with_capacity(m);
        self.extract_doubled_into(i, m, &mut Vec::new(), &mut out)?;
        Ok(Encoding::from_doubled_unchecked(&out))
    }

    /// Doubled symbols of `E(S[i..i+m-1])` into `out`, reusing `scratch`.
    pub fn extract_doubled_into(&self, i: usize, m: usize, scratch: &mut Vec<u32>, out: &mut Vec<u32>) -> Result<()> {
        let (start, m) = self.window_slice(i, m)?;
        let ranks: Vec<u32> = (start..start + m).map(|p| self.values.get(p) as u32).collect();
        encode_doubled_into(&ranks, scratch, out);
        Ok(())
    }

    /// Packed payload in bits.
    pub fn size_in_bits(&self) -> usize {
        self.values.size_in_bits()
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_usize(self.n);
        w.put_usize(self.ell);
        w.put_usize(self.values.width());
        self.values.write_payload(w);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let n = r.get_usize()?;
        let ell = r.get_usize()?;
        let width = r.get_usize()?;
        // every character takes at least one payload bit
        if n == 0 || ell == 0 || ell > n || width != entry_width(ell) || n / 8 > r.remaining() {
            return Err(Error::Corrupt(format!("window store header n={n} ell={ell} width={width}")));
        }
        let (offsets, total) = layout(n, ell);
        let values = IntVector::read_payload(r, total, width)?;
        for (k, &off) in offsets.iter().enumerate() {
            let w = window_len(n, ell, 1 + k * ell) as u64;
            if (off..off + w as usize).any(|p| !matches!(values.get(p), v if v >= 2 && v % 2 == 0 && v <= 2 * w)) {
                return Err(Error::Corrupt(format!("window {} holds an invalid rank", k + 1)));
            }
        }
        Ok(WindowStore { n, ell, values, offsets })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::rank_encode;
    use crate::oracle::RUNNING_EXAMPLE;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bytes(ws: &WindowStore) -> Vec<u8> {
        let mut w = ByteWriter::new();
        ws.write(&mut w);
        w.into_bytes()
    }

    #[test]
    fn running_example_extracts() {
        let ws = WindowStore::build(&RUNNING_EXAMPLE, 8).unwrap();
        assert_eq!(ws.extract(28, 3).unwrap(), Encoding::parse("0.5 1.5 0.5").unwrap());
        assert_eq!(ws.extract(19, 4).unwrap(), Encoding::parse("0.5 1.5 0.5 2").unwrap());
        for i in 1..=30 {
            assert_eq!(ws.extract(i, 1).unwrap(), Encoding::parse("0.5").unwrap());
        }
        assert!(ws.extract(0, 1).is_err());
        assert!(ws.extract(30, 2).is_err());
        assert!(ws.extract(1, 0).is_err());
    }

    #[test]
    fn long_stride_gives_one_window() {
        let ws = WindowStore::build(&RUNNING_EXAMPLE, 100).unwrap();
        assert_eq!(ws.window_count(), 1);
        assert_eq!(ws.extract(1, 30).unwrap(), rank_encode(&RUNNING_EXAMPLE).unwrap());
    }

    #[test]
    fn payload_size_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        let text: Vec<u64> = (0..500).map(|_| rng.gen()).collect();
        let ws = WindowStore::build(&text, 16).unwrap();
        // 32 windows: 30 of 33 entries, then 20 and 4, at 7 bits each
        assert_eq!(ws.window_count(), 32);
        assert_eq!(ws.size_in_bits(), (30 * 33 + 20 + 4) * 7);
    }

    #[test]
    fn local_build_matches_direct_build() {
        let direct = WindowStore::build(&RUNNING_EXAMPLE, 8).unwrap();
        let local =
            WindowStore::build_local(|a, b| RUNNING_EXAMPLE[a - 1].cmp(&RUNNING_EXAMPLE[b - 1]), 30, 8).unwrap();
        assert_eq!(bytes(&direct), bytes(&local));
        let spread: Vec<u64> = RUNNING_EXAMPLE.iter().map(|&x| x * 1_000_003 + 17).collect();
        assert_eq!(bytes(&direct), bytes(&WindowStore::build(&spread, 8).unwrap()));
    }

    #[test]
    fn cyclic_comparator_is_rejected() {
        let cyclic = |a: usize, b: usize| {
            let (x, y) = ((a - 1) % 3, (b - 1) % 3);
            if x == y {
                Ordering::Equal
            } else if (x + 1) % 3 == y {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        };
        assert!(matches!(WindowStore::build_local(cyclic, 6, 2), Err(Error::InconsistentComparator(1))));
    }

    #[test]
    fn round_trip_and_corruption() {
        let ws = WindowStore::build(&RUNNING_EXAMPLE, 4).unwrap();
        let b = bytes(&ws);
        let mut r = ByteReader::new(&b);
        assert_eq!(WindowStore::read(&mut r).unwrap(), ws);
        r.finish().unwrap();
        let mut bad = b.clone();
        bad[24] ^= 0x0f;
        assert!(WindowStore::read(&mut ByteReader::new(&bad)).is_err());
        assert!(WindowStore::read(&mut ByteReader::new(&b[..b.len() - 1])).is_err());
    }

    #[test]
    fn empty_text_is_rejected() {
        assert!(matches!(WindowStore::build(&[], 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_strings_match_direct_encoding() {
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        for _ in 0..200 {
            let n = rng.gen_range(1..120);
            let sigma = [2u64, 4, 16, 1 << 30][rng.gen_range(0..4)];
            let text: Vec<u64> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            let ell = rng.gen_range(1..=12);
            let ws = WindowStore::build(&text, ell).unwrap();
            for i in 1..=n {
                for m in 1..=ws.max_extract_len().min(n + 1 - i) {
                    assert_eq!(ws.extract(i, m).unwrap(), rank_encode(&text[i - 1..i - 1 + m]).unwrap());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn extract_is_rank_encode(text in prop::collection::vec(0u64..6, 1..60), ell in 1usize..10, i in 1usize..60, m in 1usize..10) {
            let ws = WindowStore::build(&text, ell).unwrap();
            let n = text.len();
            prop_assume!(i <= n && m <= ws.max_extract_len() && i + m - 1 <= n);
            prop_assert_eq!(ws.extract(i, m).unwrap(), rank_encode(&text[i - 1..i - 1 + m]).unwrap());
        }

        #[test]
        fn monotone_transform_gives_identical_bytes(text in prop::collection::vec(0u64..50, 1..80), ell in 1usize..10) {
            let spread: Vec<u64> = text.iter().map(|&x| x * x * 7 + x + 3).collect();
            prop_assert_eq!(bytes(&WindowStore::build(&text, ell).unwrap()), bytes(&WindowStore::build(&spread, ell).unwrap()));
        }
    }
}
