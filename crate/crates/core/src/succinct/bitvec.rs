use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

const WORDS_PER_BLOCK: usize = 8;

/// Bit vector with a two-level rank directory.
///
/// Absolute counts every 512 bits plus 16-bit relative counts per word, so
/// `rank1` is two lookups and one popcount. `select1` binary searches the
/// directory.
#[derive(Debug, Clone)]
pub struct RankBitVector {
    words: Vec<u64>,
    len: usize,
    blocks: Vec<u64>,
    rel: Vec<u16>,
    ones: usize,
}

impl PartialEq for RankBitVector {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for RankBitVector {}

impl RankBitVector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().expect("pushed") |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut blocks = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 1);
        let mut rel = Vec::with_capacity(words.len());
        let mut total = 0u64;
        let mut in_block = 0u64;
        for (k, w) in words.iter().enumerate() {
            if k % WORDS_PER_BLOCK == 0 {
                blocks.push(total);
                in_block = 0;
            }
            rel.push(in_block as u16);
            let c = u64::from(w.count_ones());
            in_block += c;
            total += c;
        }
        RankBitVector { words, len, blocks, rel, ones: total as usize }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    /// Bit at 0-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of ones among the first `i` bits.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} exceeds length {}", self.len);
        if i == self.len {
            return self.ones;
        }
        let w = i / 64;
        let base = self.blocks[w / WORDS_PER_BLOCK] + u64::from(self.rel[w]);
        let partial = (self.words[w] & ((1u64 << (i % 64)) - 1)).count_ones();
        base as usize + partial as usize
    }

    /// Checked variant of [`rank1`](Self::rank1).
    pub fn try_rank1(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::InvalidArgument(format!("rank position {i} exceeds length {}", self.len)));
        }
        Ok(self.rank1(i))
    }

    /// 0-based position of the `k`-th one (`k >= 1`).
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        let target = k as u64;
        // last block whose starting count is < target
        let b = self.blocks.partition_point(|&c| c < target) - 1;
        let mut w = b * WORDS_PER_BLOCK;
        let end = ((b + 1) * WORDS_PER_BLOCK).min(self.words.len());
        while w + 1 < end && self.blocks[b] + u64::from(self.rel[w + 1]) < target {
            w += 1;
        }
        let mut remaining = target - self.blocks[b] - u64::from(self.rel[w]);
        let mut word = self.words[w];
        loop {
            let t = word.trailing_zeros() as usize;
            remaining -= 1;
            if remaining == 0 {
                return Some(w * 64 + t);
            }
            word &= word - 1;
        }
    }

    /// Directory-inclusive size in bits.
    pub fn size_in_bits(&self) -> usize {
        self.len + self.blocks.len() * 64 + self.rel.len() * 16
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_usize(self.len);
        w.put_bits(&self.words, self.len);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_usize()?;
        let words = r.get_bits(len)?;
        Ok(Self::from_words(words, len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_example() {
        let bv = RankBitVector::from_bits([true, false, true, true, false]);
        assert_eq!(bv.rank1(3), 2);
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.rank1(5), 3);
        assert_eq!(bv.select1(3), Some(3));
        assert_eq!(bv.select1(4), None);
        assert!(bv.try_rank1(6).is_err());
    }

    #[test]
    fn agrees_with_naive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..60 {
            let len = if round == 0 { 100_000 } else { rng.gen_range(0..3000) };
            let density = rng.gen_range(0.0..1.0);
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
            let bv = RankBitVector::from_bits(bits.iter().copied());
            let mut ones = 0;
            for (i, &bit) in bits.iter().enumerate() {
                assert_eq!(bv.rank1(i), ones);
                if bit {
                    ones += 1;
                    assert_eq!(bv.select1(ones), Some(i));
                }
            }
            assert_eq!(bv.rank1(len), ones);
            let mut w = ByteWriter::new();
            bv.write(&mut w);
            let bytes = w.into_bytes();
            assert_eq!(RankBitVector::read(&mut ByteReader::new(&bytes)).unwrap(), bv);
        }
    }
}
