//! Brute-force ground truth.
//!
//! Everything here recomputes from definitions with quadratic or cubic cost
//! and shares no code with the index beyond [`rank_encode`].

use crate::encoding::{rank_encode, Encoding, RankValue};

/// The 30-character text used as the running example throughout the docs
/// and golden tests.
pub const RUNNING_EXAMPLE: [u64; 30] =
    [3, 9, 7, 2, 3, 5, 6, 8, 4, 3, 6, 5, 9, 5, 2, 2, 0, 1, 5, 6, 0, 5, 4, 3, 1, 2, 5, 6, 7, 1];

/// All order-preserving occurrences of a pattern, 1-based and increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub positions: Vec<usize>,
}

impl OracleResult {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// Re-encodes every window of `text` from scratch and compares with the
/// pattern's encoding.
pub fn naive_matches(text: &[u64], pattern: &[u64]) -> OracleResult {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return OracleResult { positions: Vec::new() };
    }
    let target = rank_encode(pattern).expect("nonempty");
    let positions = (0..=text.len() - m)
        .filter(|&j| rank_encode(&text[j..j + m]).expect("nonempty") == target)
        .map(|j| j + 1)
        .collect();
    OracleResult { positions }
}

/// Order-preserving match by the pairwise definition: every pair of
/// positions compares the same way in both strings.
pub fn pairwise_match(a: &[u64], b: &[u64]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|x| (0..a.len()).all(|y| a[x].cmp(&a[y]) == b[x].cmp(&b[y])))
}

/// Encoding of the suffix starting at 1-based position `j`.
pub fn suffix_encoding(text: &[u64], j: usize) -> Encoding {
    rank_encode(&text[j - 1..]).expect("nonempty suffix")
}

/// The rank-encoded suffix array: `r[i - 1]` is the text position of the
/// `i`-th smallest suffix encoding.
pub fn naive_suffix_order(text: &[u64]) -> Vec<usize> {
    let encodings: Vec<Encoding> = (1..=text.len()).map(|j| suffix_encoding(text, j)).collect();
    let mut r: Vec<usize> = (1..=text.len()).collect();
    r.sort_by(|&a, &b| encodings[a - 1].cmp(&encodings[b - 1]));
    r
}

/// Reference backstep data for one unsampled R-position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRow {
    /// `None` when no admissible length exists or it exceeds `ell - 1`.
    pub l: Option<usize>,
    pub b: Option<RankValue>,
    pub d: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ReferenceTables {
    pub r: Vec<usize>,
    /// Indexed by R-position - 1.
    pub sampled: Vec<bool>,
    /// `None` for sampled R-positions.
    pub rows: Vec<Option<ReferenceRow>>,
}

impl ReferenceTables {
    pub fn sampled_positions(&self) -> Vec<usize> {
        (1..=self.r.len()).filter(|&p| self.sampled[p - 1]).collect()
    }
}

/// Computes R, the sampled set and L/B/D straight from their definitions.
pub fn naive_lbd(text: &[u64], sample: usize, occ_threshold: usize, ell: usize) -> ReferenceTables {
    let n = text.len();
    let r = naive_suffix_order(text);
    let mut rpos = vec![0usize; n + 1];
    for (i, &j) in r.iter().enumerate() {
        rpos[j] = i + 1;
    }
    let sampled: Vec<bool> = (1..=n)
        .map(|p| {
            let v = r[p - 1];
            p % sample == 0 || p == 1 || v == 1 || v == n || v.is_multiple_of(sample)
        })
        .collect();

    let occ = |start: usize, len: usize| naive_matches(text, &text[start - 1..start - 1 + len]).count();
    let truncated = |pos: usize, len: usize| -> Option<Encoding> {
        (pos + len - 1 <= n).then(|| rank_encode(&text[pos - 1..pos - 1 + len]).expect("nonempty"))
    };

    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        if sampled[i - 1] {
            rows.push(None);
            continue;
        }
        let j = r[i - 1];
        let l = (1..=n + 1 - j).find(|&l| occ(j - 1, l + 1) <= occ_threshold).filter(|&l| l < ell);
        let row = match l {
            None => ReferenceRow { l: None, b: None, d: None },
            Some(l) => {
                let mut reversed = text[j - 2..j + l - 1].to_vec();
                reversed.reverse();
                let b = rank_encode(&reversed).expect("nonempty").symbols()[l];
                let ext = truncated(j - 1, l + 1).expect("in range");
                let anchor = (1..=n)
                    .filter(|&p| sampled[p - 1])
                    .filter(|&p| truncated(r[p - 1], l + 1).is_some_and(|e| e < ext))
                    .max()
                    .unwrap_or(0);
                ReferenceRow { l: Some(l), b: Some(b), d: Some(rpos[j - 1] - anchor) }
            }
        };
        rows.push(Some(row));
    }
    ReferenceTables { r, sampled, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intro_example() {
        let text = [6, 3, 9, 2, 7, 5, 4, 8, 1];
        assert_eq!(naive_matches(&text, &[2, 1, 3]).positions, vec![1, 6]);
        assert_eq!(naive_matches(&text, &text).positions, vec![1]);
        assert!(naive_matches(&[1, 2], &[1, 2, 3]).positions.is_empty());
    }

    #[test]
    fn suffix_order_is_a_permutation() {
        assert_eq!(naive_suffix_order(&[7]), vec![1]);
        let text = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5];
        let mut r = naive_suffix_order(&text);
        r.sort_unstable();
        assert_eq!(r, (1..=text.len()).collect::<Vec<_>>());
    }

    #[test]
    fn sample_one_has_no_rows() {
        let t = naive_lbd(&[3, 1, 2, 5, 4], 1, 1, 5);
        assert!(t.rows.iter().all(Option::is_none));
    }

    fn for_all_strings(max_len: usize, sigma: u64, mut f: impl FnMut(&[u64])) {
        for len in 1..=max_len {
            let total = (sigma as usize).pow(len as u32);
            let mut s = vec![0u64; len];
            for code in 0..total {
                let mut c = code;
                for x in s.iter_mut() {
                    *x = 1 + (c % sigma as usize) as u64;
                    c /= sigma as usize;
                }
                f(&s);
            }
        }
    }

    #[test]
    fn naive_matches_agrees_with_pairwise_definition() {
        let mut patterns = Vec::new();
        for_all_strings(4, 3, |p| patterns.push(p.to_vec()));
        for_all_strings(7, 3, |s| {
            for p in &patterns {
                let expected: Vec<usize> = if p.len() > s.len() {
                    Vec::new()
                } else {
                    (0..=s.len() - p.len()).filter(|&j| pairwise_match(&s[j..j + p.len()], p)).map(|j| j + 1).collect()
                };
                assert_eq!(naive_matches(s, p).positions, expected, "s={s:?} p={p:?}");
            }
        });
    }
}
