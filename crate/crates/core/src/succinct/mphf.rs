use super::bitvec::RankBitVector;
use super::fingerprint::mix64;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

const MAX_LEVELS: usize = 64;

/// Minimal perfect hash over 64-bit keys, built level by level.
///
/// Every level is a bit array of about twice the number of keys still
/// unplaced; a key whose slot nobody else hit sets its bit and is done, the
/// others fall through to the next level. `eval` is the rank of the key's
/// bit across the concatenated levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mphf {
    seed: u64,
    keys: usize,
    level_sizes: Vec<usize>,
    level_offsets: Vec<usize>,
    bits: RankBitVector,
}

#[inline]
fn slot(key: u64, seed: u64, level: usize, size: usize) -> usize {
    let h = mix64(key ^ mix64(seed.wrapping_add(level as u64)));
    ((u128::from(h) * size as u128) >> 64) as usize
}

impl Mphf {
    /// Builds over distinct keys. Fails on duplicates, and (very rarely)
    /// when keys are still unplaced after the last level, in which case a
    /// different seed will do.
    pub fn build(keys: &[u64], seed: u64) -> Result<Self> {
        let mut sorted = keys.to_vec();
        sorted.sort_unstable();
        if let Some(k) = sorted.windows(2).position(|w| w[0] == w[1]) {
            let dup = sorted[k];
            return Err(Error::DuplicateKey(keys.iter().position(|&x| x == dup).expect("present") + 1));
        }
        let mut remaining = keys.to_vec();
        let mut level_sizes = Vec::new();
        let mut all_bits: Vec<bool> = Vec::new();
        let mut level = 0;
        while !remaining.is_empty() {
            if level == MAX_LEVELS {
                return Err(Error::Construction(format!(
                    "{} keys unplaced after {MAX_LEVELS} levels",
                    remaining.len()
                )));
            }
            let size = (remaining.len() * 2).max(64);
            let mut hits = vec![0u8; size];
            for &k in &remaining {
                let s = slot(k, seed, level, size);
                hits[s] = hits[s].saturating_add(1);
            }
            all_bits.extend(hits.iter().map(|&h| h == 1));
            remaining.retain(|&k| hits[slot(k, seed, level, size)] != 1);
            level_sizes.push(size);
            level += 1;
        }
        let level_offsets = offsets(&level_sizes);
        Ok(Mphf { seed, keys: keys.len(), level_sizes, level_offsets, bits: RankBitVector::from_bits(all_bits) })
    }

    /// Tries successive seeds derived from `seed` until construction succeeds.
    pub fn build_retrying(keys: &[u64], seed: u64) -> Result<Self> {
        let mut last = None;
        for attempt in 0..16u64 {
            match Self::build(keys, seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9))) {
                Ok(m) => return Ok(m),
                Err(e @ Error::DuplicateKey(_)) => return Err(e),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub fn len(&self) -> usize {
        self.keys
    }

    pub fn is_empty(&self) -> bool {
        self.keys == 0
    }

    /// A value in `1..=len()`; a bijection on the build keys.
    #[inline]
    pub fn eval(&self, key: u64) -> usize {
        if self.keys == 0 {
            return 0;
        }
        for (level, (&size, &off)) in self.level_sizes.iter().zip(&self.level_offsets).enumerate() {
            let pos = off + slot(key, self.seed, level, size);
            if self.bits.get(pos) {
                return self.bits.rank1(pos) + 1;
            }
        }
        (mix64(key ^ self.seed) % self.keys as u64) as usize + 1
    }

    /// Keys mapped outside `1..=len()` or onto an already used value, plus
    /// any difference between `keys.len()` and `len()`. Zero exactly when
    /// `eval` is a bijection from `keys` onto `1..=len()`.
    pub fn count_collisions(&self, keys: &[u64]) -> usize {
        let mut seen = vec![false; self.keys];
        let mut bad = keys.len().abs_diff(self.keys);
        for &k in keys {
            let v = self.eval(k);
            if v == 0 || v > self.keys || std::mem::replace(&mut seen[v - 1], true) {
                bad += 1;
            }
        }
        bad
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.size_in_bits() + 64 * (2 + self.level_sizes.len())
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.seed);
        w.put_usize(self.keys);
        w.put_usize(self.level_sizes.len());
        for &s in &self.level_sizes {
            w.put_usize(s);
        }
        self.bits.write(w);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let seed = r.get_u64()?;
        let keys = r.get_usize()?;
        let levels = r.get_bounded(MAX_LEVELS, "level count")?;
        let level_sizes = (0..levels).map(|_| r.get_usize()).collect::<Result<Vec<_>>>()?;
        let bits = RankBitVector::read(r)?;
        let total = level_sizes.iter().try_fold(0usize, |a, &s| a.checked_add(s));
        if total != Some(bits.len()) || bits.count_ones() != keys || level_sizes.contains(&0) {
            return Err(Error::Corrupt("perfect hash levels do not match bit array".into()));
        }
        let level_offsets = offsets(&level_sizes);
        Ok(Mphf { seed, keys, level_sizes, level_offsets, bits })
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0usize, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}
