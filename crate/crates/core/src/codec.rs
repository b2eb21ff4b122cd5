//! Little-endian byte encoding shared by every serialized structure.

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct ByteWriter {
    buf: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_usize(&mut self, v: usize) {
        self.put_u64(v as u64);
    }

    pub fn put_raw(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Writes a 64-bit length followed by `bytes`.
    pub fn put_section(&mut self, bytes: &[u8]) {
        self.put_usize(bytes.len());
        self.put_raw(bytes);
    }

    /// Writes the low `nbits` bits of `words`, padded to a whole byte.
    pub fn put_bits(&mut self, words: &[u64], nbits: usize) {
        let nbytes = nbits.div_ceil(8);
        for k in 0..nbytes {
            self.buf.push((words[k / 8] >> (8 * (k % 8))) as u8);
        }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug)]
pub struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        ByteReader { buf, pos: 0 }
    }

    pub fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Corrupt(format!("truncated input at byte {}", self.pos)))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }

    pub fn get_usize(&mut self) -> Result<usize> {
        usize::try_from(self.get_u64()?).map_err(|_| Error::Corrupt("value overflows usize".into()))
    }

    /// Reads a `usize` and rejects values above `max`.
    pub fn get_bounded(&mut self, max: usize, what: &str) -> Result<usize> {
        let v = self.get_usize()?;
        if v > max {
            return Err(Error::Corrupt(format!("{what} = {v} exceeds {max}")));
        }
        Ok(v)
    }

    pub fn get_section(&mut self) -> Result<&'a [u8]> {
        let len = self.get_usize()?;
        self.take(len)
    }

    pub fn get_bits(&mut self, nbits: usize) -> Result<Vec<u64>> {
        let bytes = self.take(nbits.div_ceil(8))?;
        let mut words = vec![0u64; nbits.div_ceil(64)];
        for (k, &b) in bytes.iter().enumerate() {
            words[k / 8] |= u64::from(b) << (8 * (k % 8));
        }
        if !nbits.is_multiple_of(64) {
            if let Some(last) = words.last() {
                if last >> (nbits % 64) != 0 {
                    return Err(Error::Corrupt("nonzero padding bits".into()));
                }
            }
        }
        Ok(words)
    }

    pub fn is_empty(&self) -> bool {
        self.pos == self.buf.len()
    }

    /// Bytes not yet consumed.
    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn finish(&self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Corrupt(format!("{} trailing bytes", self.buf.len() - self.pos)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip_with_padding() {
        let words = vec![0xdead_beef_0123_4567u64, 0b101];
        let mut w = ByteWriter::new();
        w.put_bits(&words, 67);
        w.put_u64(42);
        let bytes = w.into_bytes();
        assert_eq!(bytes.len(), 9 + 8);
        let mut r = ByteReader::new(&bytes);
        assert_eq!(r.get_bits(67).unwrap(), words);
        assert_eq!(r.get_u64().unwrap(), 42);
        r.finish().unwrap();
    }

    #[test]
    fn truncated_input_is_corrupt() {
        let mut r = ByteReader::new(&[1, 2, 3]);
        assert!(matches!(r.get_u64(), Err(Error::Corrupt(_))));
    }
}
