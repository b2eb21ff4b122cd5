use super::bitvec::RankBitVector;
use super::intvec::IntVector;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

/// Elias-Fano coding of a non-decreasing sequence.
///
/// Each value keeps its `⌊lg(u/n)⌋` low bits verbatim; the high parts are
/// written in unary into a bit vector, so `access(k)` is one select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliasFano {
    count: usize,
    universe: u64,
    low_bits: usize,
    low: Option<IntVector>,
    high: RankBitVector,
}

impl EliasFano {
    pub fn new(values: &[u64]) -> Result<Self> {
        if let Some(k) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Unsorted(k + 2));
        }
        let count = values.len();
        let universe = values.last().map_or(0, |&v| v + 1);
        let low_bits = if count == 0 || universe <= count as u64 {
            0
        } else {
            (63 - (universe / count as u64).leading_zeros()) as usize
        };
        let low = (low_bits > 0).then(|| {
            let mask = (1u64 << low_bits) - 1;
            IntVector::with_width(&values.iter().map(|v| v & mask).collect::<Vec<_>>(), low_bits)
        });
        let high_len = count + values.last().map_or(0, |&v| (v >> low_bits) as usize) + 1;
        let mut bits = vec![false; if count == 0 { 0 } else { high_len }];
        for (k, &v) in values.iter().enumerate() {
            bits[(v >> low_bits) as usize + k] = true;
        }
        Ok(EliasFano { count, universe, low_bits, low, high: RankBitVector::from_bits(bits) })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    /// The `k`-th stored value, 1-based.
    pub fn access(&self, k: usize) -> Result<u64> {
        if k == 0 || k > self.count {
            return Err(Error::InvalidArgument(format!("index {k} outside 1..={}", self.count)));
        }
        Ok(self.get(k - 1))
    }

    /// 0-based unchecked-by-`Result` access.
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        let pos = self.high.select1(k + 1).expect("k < count");
        let high = (pos - k) as u64;
        let low = self.low.as_ref().map_or(0, |l| l.get(k));
        (high << self.low_bits) | low
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.count).map(|k| self.get(k))
    }

    pub fn size_in_bits(&self) -> usize {
        self.low.as_ref().map_or(0, IntVector::size_in_bits) + self.high.size_in_bits()
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_usize(self.count);
        w.put_u64(self.universe);
        w.put_usize(self.low_bits);
        if let Some(low) = &self.low {
            low.write(w);
        }
        self.high.write(w);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let count = r.get_usize()?;
        let universe = r.get_u64()?;
        let low_bits = r.get_bounded(63, "low bit width")?;
        let low = if low_bits > 0 {
            let low = IntVector::read(r)?;
            if low.len() != count || low.width() != low_bits {
                return Err(Error::Corrupt("Elias-Fano low part mismatch".into()));
            }
            Some(low)
        } else {
            None
        };
        let high = RankBitVector::read(r)?;
        if high.count_ones() != count {
            return Err(Error::Corrupt("Elias-Fano high part mismatch".into()));
        }
        Ok(EliasFano { count, universe, low_bits, low, high })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let ef = EliasFano::new(&[2, 3, 5, 7, 11]).unwrap();
        assert_eq!(ef.access(4).unwrap(), 7);
        assert!(ef.access(0).is_err());
        assert!(ef.access(6).is_err());
        let zeros = EliasFano::new(&[0, 0, 0]).unwrap();
        assert_eq!(zeros.access(1).unwrap(), 0);
        assert!(EliasFano::new(&[3, 2]).is_err());
        assert!(EliasFano::new(&[]).unwrap().is_empty());
    }

    #[test]
    fn random_sequences_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.gen_range(0..300);
            let bits = rng.gen_range(1..40);
            let max = rng.gen_range(1..=1u64 << bits);
            let mut values: Vec<u64> = (0..n).map(|_| rng.gen_range(0..max)).collect();
            values.sort_unstable();
            let ef = EliasFano::new(&values).unwrap();
            assert_eq!(ef.iter().collect::<Vec<_>>(), values);
            let mut w = ByteWriter::new();
            ef.write(&mut w);
            let bytes = w.into_bytes();
            assert_eq!(EliasFano::read(&mut ByteReader::new(&bytes)).unwrap(), ef);
        }
    }
}
