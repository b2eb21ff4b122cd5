use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

/// Number of bits needed to write `max` in binary (at least 1).
pub fn bits_for(max: u64) -> usize {
    (64 - max.leading_zeros() as usize).max(1)
}

/// Fixed-width packed integer vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVector {
    words: Vec<u64>,
    len: usize,
    width: usize,
}

impl IntVector {
    pub fn new(len: usize, width: usize) -> Self {
        assert!((1..=64).contains(&width));
        IntVector { words: vec![0; (len * width).div_ceil(64)], len, width }
    }

    /// Packs `values` using the smallest width that holds their maximum.
    pub fn from_values(values: &[u64]) -> Self {
        let width = bits_for(values.iter().copied().max().unwrap_or(0));
        Self::with_width(values, width)
    }

    pub fn with_width(values: &[u64], width: usize) -> Self {
        let mut v = Self::new(values.len(), width);
        for (k, &x) in values.iter().enumerate() {
            v.set(k, x);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn set(&mut self, k: usize, x: u64) {
        assert!(k < self.len);
        let mask = self.mask();
        assert!(x <= mask, "value {x} does not fit in {} bits", self.width);
        let bit = k * self.width;
        let (w, off) = (bit / 64, bit % 64);
        self.words[w] = (self.words[w] & !(mask << off)) | (x << off);
        if off + self.width > 64 {
            let spill = off + self.width - 64;
            let hi_mask = (1u64 << spill) - 1;
            self.words[w + 1] = (self.words[w + 1] & !hi_mask) | (x >> (64 - off));
        }
    }

    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        assert!(k < self.len, "index {k} out of bounds for length {}", self.len);
        let bit = k * self.width;
        let (w, off) = (bit / 64, bit % 64);
        let mut x = self.words[w] >> off;
        if off + self.width > 64 {
            x |= self.words[w + 1] << (64 - off);
        }
        x & self.mask()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(|k| self.get(k))
    }

    /// Payload size in bits, excluding the length/width header.
    pub fn size_in_bits(&self) -> usize {
        self.len * self.width
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_usize(self.len);
        w.put_usize(self.width);
        self.write_payload(w);
    }

    /// Packed values only; the reader must know `len` and `width`.
    pub fn write_payload(&self, w: &mut ByteWriter) {
        w.put_bits(&self.words, self.len * self.width);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_usize()?;
        let width = r.get_usize()?;
        Self::read_payload(r, len, width)
    }

    pub fn read_payload(r: &mut ByteReader<'_>, len: usize, width: usize) -> Result<Self> {
        if !(1..=64).contains(&width) {
            return Err(Error::Corrupt(format!("bad integer width {width}")));
        }
        let nbits = len.checked_mul(width).ok_or_else(|| Error::Corrupt("integer vector too large".into()))?;
        let words = r.get_bits(nbits)?;
        Ok(IntVector { words, len, width })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(bits_for(0), 1);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(66), 7);
        assert_eq!(bits_for(67), 7);
        assert_eq!(bits_for(u64::MAX), 64);
    }

    proptest! {
        #[test]
        fn get_returns_what_was_packed(values in prop::collection::vec(any::<u64>(), 0..200), width in 1usize..=64) {
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            let values: Vec<u64> = values.into_iter().map(|x| x & mask).collect();
            let v = IntVector::with_width(&values, width);
            prop_assert_eq!(v.iter().collect::<Vec<_>>(), values);
            let mut w = ByteWriter::new();
            v.write(&mut w);
            let bytes = w.into_bytes();
            let back = IntVector::read(&mut ByteReader::new(&bytes)).unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
