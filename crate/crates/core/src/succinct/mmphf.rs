use super::fingerprint::Fingerprinter;
use super::intvec::{bits_for, IntVector};
use super::mphf::Mphf;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

/// Monotone minimal perfect hash over a sorted set of encodings.
///
/// An [`Mphf`] on the keys' fingerprints plus the explicit rank of each key
/// in its slot: `nk·⌈lg nk⌉` bits on top of the perfect hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mmphf {
    fingerprint_seed: u64,
    mphf: Mphf,
    ranks: IntVector,
}

impl Mmphf {
    /// `keys` must be strictly increasing in lexicographic order of their
    /// doubled symbols.
    pub fn build<K: AsRef<[u32]>>(keys: &[K], seed: u64) -> Result<Self> {
        for (k, w) in keys.windows(2).enumerate() {
            match w[0].as_ref().cmp(w[1].as_ref()) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => return Err(Error::DuplicateKey(k + 2)),
                std::cmp::Ordering::Greater => return Err(Error::Unsorted(k + 2)),
            }
        }
        let mut fp_seed = seed;
        for _ in 0..32 {
            let fp = Fingerprinter::new(fp_seed);
            let hashes: Vec<u64> = keys.iter().map(|k| fp.hash(k.as_ref().iter().copied())).collect();
            match Mphf::build_retrying(&hashes, fp_seed) {
                Ok(mphf) => {
                    let mut ranks = IntVector::new(keys.len(), bits_for(keys.len().saturating_sub(1) as u64));
                    for (k, &h) in hashes.iter().enumerate() {
                        ranks.set(mphf.eval(h) - 1, k as u64);
                    }
                    return Ok(Mmphf { fingerprint_seed: fp_seed, mphf, ranks });
                }
                // two keys share a fingerprint under this seed
                Err(Error::DuplicateKey(_)) => fp_seed = super::fingerprint::mix64(fp_seed),
                Err(e) => return Err(e),
            }
        }
        Err(Error::Construction("no collision-free fingerprint seed found".into()))
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Rank (1-based) of a build key; an arbitrary in-range value otherwise.
    /// Returns 0 only for an empty key set.
    #[inline]
    pub fn eval(&self, key: &[u32]) -> usize {
        if self.is_empty() {
            return 0;
        }
        let h = Fingerprinter::new(self.fingerprint_seed).hash(key.iter().copied());
        self.ranks.get(self.mphf.eval(h) - 1) as usize + 1
    }

    /// (perfect-hash collisions, keys given a wrong rank) over the sorted
    /// build keys.
    pub fn audit<K: AsRef<[u32]>>(&self, keys: &[K]) -> (usize, usize) {
        let fp = Fingerprinter::new(self.fingerprint_seed);
        let hashes: Vec<u64> = keys.iter().map(|k| fp.hash(k.as_ref().iter().copied())).collect();
        let misranked = keys.iter().enumerate().filter(|(k, key)| self.eval(key.as_ref()) != k + 1).count();
        (self.mphf.count_collisions(&hashes), misranked)
    }

    pub fn size_in_bits(&self) -> usize {
        64 + self.mphf.size_in_bits() + self.ranks.size_in_bits()
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.fingerprint_seed);
        self.mphf.write(w);
        self.ranks.write(w);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let fingerprint_seed = r.get_u64()?;
        let mphf = Mphf::read(r)?;
        let ranks = IntVector::read(r)?;
        if ranks.len() != mphf.len() || ranks.iter().any(|x| x as usize >= ranks.len()) {
            return Err(Error::Corrupt("monotone hash rank table mismatch".into()));
        }
        Ok(Mmphf { fingerprint_seed, mphf, ranks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let m = Mmphf::build(&[vec![1u32, 3]], 5).unwrap();
        assert_eq!(m.eval(&[1, 3]), 1);
        let keys = vec![vec![1u32], vec![1, 1], vec![1, 2, 5], vec![1, 3]];
        let m = Mmphf::build(&keys, 5).unwrap();
        for (k, key) in keys.iter().enumerate() {
            assert_eq!(m.eval(key), k + 1);
        }
        assert!(matches!(Mmphf::build(&[vec![1u32, 3], vec![1, 2]], 5), Err(Error::Unsorted(2))));
        assert!(matches!(Mmphf::build(&[vec![1u32], vec![1]], 5), Err(Error::DuplicateKey(2))));
    }

    #[test]
    fn order_preserving_on_random_key_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut keys: Vec<Vec<u32>> = (0..rng.gen_range(1..2000))
                .map(|_| {
                    let len = rng.gen_range(1..12);
                    (0..len).map(|k| rng.gen_range(1..=2 * k as u32 + 1)).collect()
                })
                .collect();
            keys.sort();
            keys.dedup();
            let m = Mmphf::build(&keys, rng.gen()).unwrap();
            for (k, key) in keys.iter().enumerate() {
                assert_eq!(m.eval(key), k + 1);
            }
            let mut w = ByteWriter::new();
            m.write(&mut w);
            let bytes = w.into_bytes();
            assert_eq!(Mmphf::read(&mut ByteReader::new(&bytes)).unwrap(), m);
        }
    }
}
