//! Corpus files and reproducible random texts.
//!
//! Two on-disk forms: whitespace-separated decimal integers, and raw 64-bit
//! little-endian words.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A text of `n` values below `sigma`, fixed by `seed`.
///
/// With `ties` the values are drawn independently; without, they are
/// pairwise distinct, which needs `sigma >= n`.
pub fn generate(n: usize, sigma: u64, seed: u64, ties: bool) -> Result<Vec<u64>> {
    if sigma == 0 {
        return Err(Error::InvalidArgument("alphabet size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if ties {
        return Ok((0..n).map(|_| rng.gen_range(0..sigma)).collect());
    }
    if sigma < n as u64 {
        return Err(Error::InvalidArgument(format!("{n} distinct values do not fit below {sigma}")));
    }
    if sigma <= 4 * n as u64 {
        let mut all: Vec<u64> = (0..sigma).collect();
        all.shuffle(&mut rng);
        all.truncate(n);
        return Ok(all);
    }
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen_range(0..sigma);
        if seen.insert(x) {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn parse_text(input: &str) -> Result<Vec<u64>> {
    input
        .split_whitespace()
        .enumerate()
        .map(|(k, tok)| tok.parse().map_err(|_| Error::Parse(format!("token {} ({tok:?}) is not a u64", k + 1))))
        .collect()
}

pub fn parse_binary(input: &[u8]) -> Result<Vec<u64>> {
    if !input.len().is_multiple_of(8) {
        return Err(Error::Parse(format!("{} bytes is not a whole number of 64-bit words", input.len())));
    }
    Ok(input.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

pub fn to_text(text: &[u64]) -> String {
    let mut out = text.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    out.push('\n');
    out
}

pub fn to_binary(text: &[u64]) -> Vec<u8> {
    text.iter().flat_map(|x| x.to_le_bytes()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(generate(50, 7, 3, true).unwrap(), generate(50, 7, 3, true).unwrap());
        assert_ne!(generate(50, 7, 3, true).unwrap(), generate(50, 7, 4, true).unwrap());
        assert!(generate(20, 1, 9, true).unwrap().iter().all(|&x| x == 0));
    }

    #[test]
    fn tie_free_texts_are_distinct() {
        for (n, sigma) in [(30, 30), (30, 100), (500, 1 << 40)] {
            let mut t = generate(n, sigma, 1, false).unwrap();
            assert!(t.iter().all(|&x| x < sigma));
            t.sort_unstable();
            t.dedup();
            assert_eq!(t.len(), n);
        }
        assert!(generate(10, 9, 1, false).is_err());
        assert!(generate(10, 0, 1, true).is_err());
    }

    #[test]
    fn formats_round_trip() {
        let t = vec![0, 7, u64::MAX, 12];
        assert_eq!(parse_text(&to_text(&t)).unwrap(), t);
        assert_eq!(parse_binary(&to_binary(&t)).unwrap(), t);
        assert_eq!(parse_text(" 3\n\t4  5 ").unwrap(), vec![3, 4, 5]);
        assert!(matches!(parse_text("3 x"), Err(Error::Parse(_))));
        assert!(parse_text("-1").is_err());
        assert!(parse_binary(&[0; 9]).is_err());
    }
}
