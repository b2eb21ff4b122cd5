//! Seeded polynomial fingerprints over doubled rank symbols.

const MODULUS: u64 = (1 << 61) - 1;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let p = u128::from(a) * u128::from(b);
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fingerprinter {
    seed: u64,
    base: u64,
}

impl Fingerprinter {
    pub fn new(seed: u64) -> Self {
        let base = mix64(seed) % (MODULUS - (1 << 21)) + (1 << 20);
        Fingerprinter { seed, base }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Extends a running polynomial hash by one symbol.
    #[inline]
    pub fn step(&self, h: u64, symbol: u32) -> u64 {
        let s = mul_mod(h, self.base) + u64::from(symbol) + 1;
        if s >= MODULUS {
            s - MODULUS
        } else {
            s
        }
    }

    /// Final 64-bit fingerprint of a string of `len` symbols whose running
    /// hash is `h`.
    #[inline]
    pub fn finish(&self, h: u64, len: usize) -> u64 {
        mix64(h ^ mix64(self.seed ^ (len as u64).rotate_left(32)))
    }

    pub fn hash(&self, symbols: impl IntoIterator<Item = u32>) -> u64 {
        let mut h = 0;
        let mut len = 0;
        for s in symbols {
            h = self.step(h, s);
            len += 1;
        }
        self.finish(h, len)
    }

    /// `out[t]` is the running hash of the first `t` symbols.
    pub fn running(&self, symbols: impl IntoIterator<Item = u32>, out: &mut Vec<u64>) {
        out.clear();
        out.push(0);
        let mut h = 0;
        for s in symbols {
            h = self.step(h, s);
            out.push(h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_hashes_match_direct_hash() {
        let fp = Fingerprinter::new(99);
        let syms = [1u32, 3, 2, 5, 4, 1];
        let mut run = Vec::new();
        fp.running(syms.iter().copied(), &mut run);
        for t in 0..=syms.len() {
            assert_eq!(fp.finish(run[t], t), fp.hash(syms[..t].iter().copied()));
        }
        assert_ne!(fp.hash([1, 2]), fp.hash([2, 1]));
        assert_ne!(Fingerprinter::new(1).hash([1, 2]), Fingerprinter::new(2).hash([1, 2]));
    }
}
