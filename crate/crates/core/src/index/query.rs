use std::cmp::Ordering;

use super::OpIndex;
use crate::encoding::{encode_doubled_into, prepended_string, Encoding};
use crate::error::{Error, Result};

/// Answer to a counting-and-locating query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryResult {
    pub count: usize,
    /// Start of one occurrence, present iff `count > 0`.
    pub position: Option<usize>,
}

impl QueryResult {
    const NONE: QueryResult = QueryResult { count: 0, position: None };
}

/// What [`OpIndex::trace_fast`] saw.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub result: QueryResult,
    /// Range returned by weak prefix search; absent for short patterns.
    pub range: Option<(usize, usize)>,
    /// R-positions visited, ending at the sampled entry that was verified.
    pub visited: Vec<usize>,
}

fn encode(seq: &[u64]) -> Vec<u32> {
    let mut out = Vec::with_capacity(seq.len());
    encode_doubled_into(seq, &mut Vec::with_capacity(seq.len()), &mut out);
    out
}

impl OpIndex {
    fn check_pattern(&self, pattern: &[u64]) -> Result<()> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        let max = self.params.accepted_pattern_len();
        if pattern.len() > max {
            return Err(Error::PatternTooLong { len: pattern.len(), max });
        }
        Ok(())
    }

    /// `E(S[i..i+m-1])` cut at the end of the text.
    fn stored_encoding(&self, i: usize, m: usize) -> Vec<u32> {
        let mut out = Vec::new();
        self.window
            .extract_doubled_into(i, m.min(self.len() + 1 - i), &mut Vec::new(), &mut out)
            .expect("range inside the text");
        out
    }

    fn verify(&self, pos: usize, ep: &[u32]) -> bool {
        pos + ep.len() - 1 <= self.len() && self.stored_encoding(pos, ep.len()) == ep
    }

    /// Walks backward from R-position `i` under the hypothesis that its
    /// suffix starts with an occurrence of `pattern`, until a sampled entry
    /// is reached; returns the verified text position of that occurrence.
    fn chain(
        &self,
        mut i: usize,
        pattern: &[u64],
        ep: &[u32],
        anchor_of: impl Fn(&[u32]) -> Option<usize>,
        mut trace: Option<&mut Vec<usize>>,
    ) -> Option<usize> {
        let n = self.len();
        let mut cur = pattern.to_vec();
        for b in 0..=self.params.sample {
            if let Some(t) = trace.as_deref_mut() {
                t.push(i);
            }
            if self.sampled.is_sampled(i) {
                let pos = self.sampled.value(self.sampled.rank(i)) + b;
                return self.verify(pos, ep).then_some(pos);
            }
            if b == self.params.sample {
                break;
            }
            let entry = self.backstep.get(i - self.sampled.rank(i));
            let l = entry.l.filter(|&l| l <= cur.len())?;
            let seq = prepended_string(&cur[..l], entry.b?).ok()?;
            let anchor = anchor_of(&encode(&seq))?;
            i = (anchor + entry.d?).clamp(1, n);
            cur = seq;
        }
        None
    }

    /// Count and one position of the order-preserving occurrences of
    /// `pattern`, through weak prefix search and hashed backward steps.
    pub fn query_fast(&self, pattern: &[u64]) -> Result<QueryResult> {
        self.fast(pattern, None)
    }

    /// [`query_fast`](Self::query_fast) that also reports the prefix-search
    /// range and the R-positions visited on the way to a sampled entry.
    pub fn trace_fast(&self, pattern: &[u64]) -> Result<QueryTrace> {
        let mut trace = QueryTrace::default();
        trace.result = self.fast(pattern, Some(&mut trace))?;
        Ok(trace)
    }

    fn fast(&self, pattern: &[u64], mut trace: Option<&mut QueryTrace>) -> Result<QueryResult> {
        self.check_pattern(pattern)?;
        if pattern.len() > self.len() {
            return Ok(QueryResult::NONE);
        }
        let ep = encode(pattern);
        if pattern.len() < self.params.m_min {
            return Ok(match self.short.lookup(&ep) {
                Some((count, pos)) => QueryResult { count, position: Some(pos) },
                None => QueryResult::NONE,
            });
        }
        let (l, r) = self.wps.query(&ep);
        if let Some(t) = trace.as_deref_mut() {
            t.range = Some((l, r));
        }
        if l == 0 || l > r || r > self.len() {
            return Ok(QueryResult::NONE);
        }
        let k = self.sampled.rank(l - 1) + 1;
        let found = if k <= self.sampled.len() && self.sampled.position(k) <= r {
            let p = self.sampled.position(k);
            if let Some(t) = trace {
                t.visited.push(p);
            }
            let pos = self.sampled.value(k);
            self.verify(pos, &ep).then_some(pos)
        } else {
            self.chain(l, pattern, &ep, |ext| self.anchor.anchor(ext), trace.map(|t| &mut t.visited))
        };
        Ok(match found {
            Some(pos) => QueryResult { count: r - l + 1, position: Some(pos) },
            None => QueryResult::NONE,
        })
    }

    /// Same answers as [`query_fast`](Self::query_fast) using only the
    /// window store and sampled entries: binary search brackets the
    /// pattern between sampled entries, each candidate in the gap is walked
    /// to a sampled entry with anchors found by binary search, and the count
    /// comes from a scan.
    pub fn query_slow(&self, pattern: &[u64]) -> Result<QueryResult> {
        self.check_pattern(pattern)?;
        if pattern.len() > self.len() {
            return Ok(QueryResult::NONE);
        }
        let ep = encode(pattern);
        let ns = self.sampled.len();
        let key = |k: usize| self.stored_encoding(self.sampled.value(k), ep.len());
        // first sampled entry whose encoding is not below the pattern's
        let (mut lo, mut hi) = (1, ns + 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if key(mid).as_slice().cmp(&ep) == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let found = if lo <= ns && key(lo) == ep {
            Some(self.sampled.value(lo))
        } else {
            let first = if lo == 1 { 1 } else { self.sampled.position(lo - 1) + 1 };
            let last = if lo > ns { self.len() } else { self.sampled.position(lo) - 1 };
            (first..=last).find_map(|i| self.chain(i, pattern, &ep, |ext| Some(self.anchor_by_search(ext)), None))
        };
        Ok(match found {
            Some(pos) => QueryResult { count: self.scan_all(pattern)?.len(), position: Some(pos) },
            None => QueryResult::NONE,
        })
    }

    /// Anchor of an extension by binary search over sampled entries.
    fn anchor_by_search(&self, ext: &[u32]) -> usize {
        let n = self.len();
        let (mut lo, mut hi) = (1, self.sampled.len() + 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.stored_encoding(self.sampled.value(mid), ext.len()).as_slice().cmp(ext) == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (1..lo).rev().find(|&k| n + 1 - self.sampled.value(k) >= ext.len()).map_or(0, |k| self.sampled.position(k))
    }

    pub fn count(&self, pattern: &[u64]) -> Result<usize> {
        Ok(self.query_fast(pattern)?.count)
    }

    pub fn locate_one(&self, pattern: &[u64]) -> Result<Option<usize>> {
        Ok(self.query_fast(pattern)?.position)
    }

    /// Every occurrence, in increasing order, by re-encoding each text
    /// window from the window store.
    pub fn scan_all(&self, pattern: &[u64]) -> Result<Vec<usize>> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        let m = pattern.len();
        let max = self.window.max_extract_len();
        if m > self.len() && max == self.len() {
            return Ok(Vec::new());
        }
        if m > max {
            return Err(Error::PatternTooLong { len: m, max });
        }
        let ep = encode(pattern);
        let (mut scratch, mut out) = (Vec::new(), Vec::new());
        let mut hits = Vec::new();
        for i in 1..=self.len().saturating_sub(m - 1) {
            self.window.extract_doubled_into(i, m, &mut scratch, &mut out)?;
            if out == ep {
                hits.push(i);
            }
        }
        Ok(hits)
    }

    /// Encoding of `x · candidate[..L[i]]` where `x` has rank `B[i]`.
    pub fn extension_encoding(&self, i: usize, candidate: &[u64]) -> Result<Encoding> {
        let entry = self
            .backstep_entry(i)
            .ok_or_else(|| Error::InvalidArgument(format!("R-position {i} is sampled or out of range")))?;
        let (Some(l), Some(b)) = (entry.l, entry.b) else {
            return Err(Error::InvalidArgument(format!("no backward step is stored at R-position {i}")));
        };
        if candidate.len() < l {
            return Err(Error::InvalidArgument(format!(
                "candidate of length {} is shorter than L = {l}",
                candidate.len()
            )));
        }
        Ok(Encoding::from_doubled_unchecked(&encode(&prepended_string(&candidate[..l], b)?)))
    }

    /// `anchor(ext) + D[i]`, clamped to `1..=n`.
    pub fn backward_step(&self, i: usize, ext: &Encoding) -> Result<usize> {
        let entry = self
            .backstep_entry(i)
            .ok_or_else(|| Error::InvalidArgument(format!("R-position {i} is sampled or out of range")))?;
        let d =
            entry.d.ok_or_else(|| Error::InvalidArgument(format!("no backward step is stored at R-position {i}")))?;
        let anchor = self.anchor.anchor(&ext.to_doubled_vec()).unwrap_or(0);
        Ok((anchor + d).clamp(1, self.len()))
    }
}
