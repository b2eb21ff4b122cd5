use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use super::components::{BackstepAnchor, BackstepEntry, BackstepTables, SampledEntries, ShortPatternTable};
use super::params::IndexParams;
use super::OpIndex;
use crate::encoding::{encode_doubled_into, RankValue};
use crate::error::{Error, Result};
use crate::succinct::WeakPrefixSearcher;
use crate::window::WindowStore;

/// Order of the full suffix encodings starting at 1-based `j1` and `j2`,
/// a proper prefix being smaller.
pub fn suffix_compare(text: &[u64], j1: usize, j2: usize) -> Ordering {
    if j1 == j2 {
        return Ordering::Equal;
    }
    let (a, b) = (&text[j1 - 1..], &text[j2 - 1..]);
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    for (&x, &y) in a.iter().zip(b) {
        let rx = insert_rank(&mut sa, x);
        let ry = insert_rank(&mut sb, y);
        if rx != ry {
            return rx.cmp(&ry);
        }
    }
    a.len().cmp(&b.len())
}

fn insert_rank(sorted: &mut Vec<u64>, x: u64) -> u32 {
    match sorted.binary_search(&x) {
        Ok(k) => 2 * (k as u32 + 1),
        Err(k) => {
            sorted.insert(k, x);
            2 * k as u32 + 1
        }
    }
}

/// The rank-encoded suffix array: 1-based text positions ordered by their
/// suffix encodings. Sorts on encodings truncated to `ell` first.
pub fn suffix_order(text: &[u64], ell: usize) -> Vec<usize> {
    sorted_suffixes(text, &Truncated::new(text, ell.clamp(1, text.len().max(1))))
}

fn sorted_suffixes(text: &[u64], trunc: &Truncated) -> Vec<usize> {
    let mut r: Vec<usize> = (1..=text.len()).collect();
    r.sort_unstable_by(|&a, &b| match trunc.get(a).cmp(trunc.get(b)) {
        Ordering::Equal => suffix_compare(text, a, b),
        o => o,
    });
    r
}

/// Truncated suffix encodings, one fixed-stride row per text position.
pub(super) struct Truncated {
    n: usize,
    ell: usize,
    rows: Vec<u32>,
}

impl Truncated {
    fn new(text: &[u64], ell: usize) -> Self {
        let n = text.len();
        let mut rows = vec![0u32; n * ell];
        let (mut sorted, mut out) = (Vec::with_capacity(ell), Vec::with_capacity(ell));
        for j in 1..=n {
            let len = ell.min(n + 1 - j);
            encode_doubled_into(&text[j - 1..j - 1 + len], &mut sorted, &mut out);
            rows[(j - 1) * ell..(j - 1) * ell + len].copy_from_slice(&out);
        }
        Truncated { n, ell, rows }
    }

    /// `E(S[j..j+min(ell, n-j+1)-1])`.
    #[inline]
    pub(super) fn get(&self, j: usize) -> &[u32] {
        let len = self.ell.min(self.n + 1 - j);
        &self.rows[(j - 1) * self.ell..(j - 1) * self.ell + len]
    }
}

fn lcp(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `out[k] = best(values[k..k + width])` for every full window.
fn sliding(values: &[usize], width: usize, better: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut out = Vec::with_capacity(values.len() + 1 - width.min(values.len() + 1));
    let mut dq: VecDeque<usize> = VecDeque::new();
    for (k, &v) in values.iter().enumerate() {
        while dq.back().is_some_and(|&t| !better(values[t], v)) {
            dq.pop_back();
        }
        dq.push_back(k);
        if dq.front().is_some_and(|&t| t + width <= k) {
            dq.pop_front();
        }
        if k + 1 >= width {
            out.push(values[*dq.front().expect("nonempty")]);
        }
    }
    out
}

/// Doubled rank of `x` among the characters of `window`.
fn doubled_rank(window: &[u64], x: u64) -> u32 {
    let mut distinct = window.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    match distinct.binary_search(&x) {
        Ok(k) => 2 * (k as u32 + 1),
        Err(k) => 2 * k as u32 + 1,
    }
}

/// Everything construction derives from the text before packing it into
/// succinct structures. Also used by the audit to recompute key sets.
pub(super) struct Analysis {
    pub(super) trunc: Truncated,
    /// 0-based vector of 1-based text positions in rank-encoded suffix order.
    pub(super) r: Vec<usize>,
    /// `rpos[j]` is the R-position of suffix `j`; `rpos[0]` is unused.
    pub(super) rpos: Vec<usize>,
    pub(super) is_sampled: Vec<bool>,
    /// (R-position, text position) of every sampled entry.
    pub(super) sampled_list: Vec<(usize, usize)>,
    /// One row per unsampled R-position, in order.
    pub(super) rows: Vec<BackstepEntry>,
    /// Distinct extensions as (text position, length, anchor), sorted by
    /// encoding.
    pub(super) exts: Vec<(usize, usize, usize)>,
}

impl Analysis {
    pub(super) fn ext(&self, e: &(usize, usize, usize)) -> &[u32] {
        &self.trunc.get(e.0)[..e.1]
    }

    /// Truncated encodings in R order.
    pub(super) fn dictionary(&self) -> Vec<&[u32]> {
        self.r.iter().map(|&j| self.trunc.get(j)).collect()
    }
}

pub(super) fn analyze(text: &[u64], params: &IndexParams) -> Result<Analysis> {
    let n = text.len();
    let ell = params.ell;
    let sample = params.sample;
    let trunc = Truncated::new(text, ell);
    let r = sorted_suffixes(text, &trunc);
    let mut rpos = vec![0usize; n + 1];
    for (i, &j) in r.iter().enumerate() {
        rpos[j] = i + 1;
    }
    let rr = |p: usize| r[p - 1];

    let is_sampled: Vec<bool> = (1..=n)
        .map(|p| {
            let v = rr(p);
            p % sample == 0 || p == 1 || v == 1 || v == n || v % sample == 0
        })
        .collect();
    let sampled_list: Vec<(usize, usize)> = (1..=n).filter(|&p| is_sampled[p - 1]).map(|p| (p, rr(p))).collect();

    let max_run = occurrence_bounds(&trunc, &r, params.occ_threshold);

    // anchor(e): last sampled entry whose suffix is at least |e| long and
    // whose encoding cut to |e| is smaller than e
    let anchor_of = |e: &[u32]| -> usize {
        let before = sampled_list.partition_point(|&(_, v)| {
            let t = trunc.get(v);
            &t[..t.len().min(e.len())] < e
        });
        sampled_list[..before].iter().rev().find(|&&(_, v)| n + 1 - v >= e.len()).map_or(0, |&(p, _)| p)
    };

    let mut rows = Vec::new();
    let mut exts: Vec<(usize, usize, usize)> = Vec::new();
    for i in (1..=n).filter(|&i| !is_sampled[i - 1]) {
        let j = rr(i);
        let x = rpos[j - 1];
        let l = max_run[x - 1].max(1);
        if l > n + 1 - j || l + 1 > ell {
            rows.push(BackstepEntry { l: None, b: None, d: None });
            continue;
        }
        let b = RankValue::from_doubled(doubled_rank(&text[j - 1..j - 1 + l], text[j - 2]));
        let anchor = anchor_of(&trunc.get(j - 1)[..l + 1]);
        if anchor >= x {
            return Err(Error::Construction(format!("anchor {anchor} not before R-position {x}")));
        }
        rows.push(BackstepEntry { l: Some(l), b: Some(b), d: Some(x - anchor) });
        exts.push((j - 1, l + 1, anchor));
    }
    let key = |e: &(usize, usize, usize)| &trunc.get(e.0)[..e.1];
    exts.sort_unstable_by(|a, b| key(a).cmp(key(b)).then(a.2.cmp(&b.2)));
    exts.dedup_by(|a, b| key(a) == key(b) && a.2 == b.2);
    if exts.windows(2).any(|w| key(&w[0]) == key(&w[1])) {
        return Err(Error::Construction("one extension with two anchors".into()));
    }
    Ok(Analysis { trunc, r, rpos, is_sampled, sampled_list, rows, exts })
}

impl OpIndex {
    /// Builds the index of `text` under `params` (whose `n` must equal the
    /// text length). Scratch space is O(n·ell) words and is dropped before
    /// returning.
    pub fn build(text: &[u64], params: IndexParams) -> Result<Self> {
        params.validate()?;
        let n = text.len();
        if n != params.n {
            return Err(Error::InvalidParams(format!("parameters are for n = {}, text has {n}", params.n)));
        }
        let window = WindowStore::build(text, params.ell)?;
        let a = analyze(text, &params)?;
        let ext_keys: Vec<&[u32]> = a.exts.iter().map(|e| a.ext(e)).collect();
        let ext_anchors: Vec<usize> = a.exts.iter().map(|e| e.2).collect();
        let anchor = BackstepAnchor::new(&ext_keys, &ext_anchors, params.seed)?;
        let backstep = BackstepTables::new(&a.rows);
        let sampled = SampledEntries::new(n, &a.sampled_list)?;

        if cfg!(debug_assertions) {
            for (u, i) in (1..=n).filter(|&i| !a.is_sampled[i - 1]).enumerate() {
                let j = a.r[i - 1];
                if let BackstepEntry { l: Some(l), d: Some(d), .. } = backstep.get(u + 1) {
                    let ext = &a.trunc.get(j - 1)[..l + 1];
                    if anchor.anchor(ext).map(|x| x + d) != Some(a.rpos[j - 1]) {
                        return Err(Error::Construction(format!("backward step from R-position {i} is wrong")));
                    }
                }
            }
        }

        let wps = WeakPrefixSearcher::build(&a.dictionary(), params.seed)?;
        let short = ShortPatternTable::new(&short_entries(&a.trunc, params.m_min));

        Ok(OpIndex { params, window, sampled, backstep, anchor, wps, short })
    }
}

/// For each R-position `x`, the largest truncated LCP shared by some run of
/// `threshold + 1` consecutive suffixes containing `x`: the encodings of
/// length at most that value occur more than `threshold` times at `x`.
fn occurrence_bounds(trunc: &Truncated, r: &[usize], threshold: usize) -> Vec<usize> {
    let n = r.len();
    if threshold >= n {
        return vec![0; n];
    }
    // runs[a - 1]: min LCP inside R-positions a..=a+threshold
    let runs: Vec<usize> = if threshold == 0 {
        vec![trunc.ell; n]
    } else {
        let lcps: Vec<usize> = (1..n).map(|p| lcp(trunc.get(r[p - 1]), trunc.get(r[p]))).collect();
        sliding(&lcps, threshold, |a, b| a < b)
    };
    // pad so every x sees the runs starting at x-threshold..=x
    let mut padded = vec![0usize; threshold];
    padded.extend_from_slice(&runs);
    padded.resize(n + threshold, 0);
    sliding(&padded, threshold + 1, |a, b| a > b)
}

pub(super) fn short_entries(trunc: &Truncated, m_min: usize) -> Vec<(Vec<u32>, usize, usize)> {
    let mut table: HashMap<&[u32], (usize, usize)> = HashMap::new();
    for j in 1..=trunc.n {
        let t = trunc.get(j);
        for len in 1..m_min.min(t.len() + 1) {
            let e = table.entry(&t[..len]).or_insert((0, j));
            e.0 += 1;
        }
    }
    let mut entries: Vec<(Vec<u32>, usize, usize)> = table.into_iter().map(|(k, (c, p))| (k.to_vec(), c, p)).collect();
    entries.sort_unstable();
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sliding_extremes() {
        assert_eq!(sliding(&[3, 1, 4, 1, 5, 9, 2], 3, |a, b| a < b), vec![1, 1, 1, 1, 2]);
        assert_eq!(sliding(&[3, 1, 4, 1, 5, 9, 2], 3, |a, b| a > b), vec![4, 4, 5, 9, 9]);
        assert_eq!(sliding(&[7], 1, |a, b| a < b), vec![7]);
    }

    #[test]
    fn suffix_compare_prefix_rule() {
        let text = [1, 2, 3, 1];
        // E(1) = 0.5 is a proper prefix of every other suffix encoding
        assert_eq!(suffix_compare(&text, 4, 1), Ordering::Less);
        assert_eq!(suffix_compare(&text, 2, 2), Ordering::Equal);
        assert_eq!(suffix_compare(&text, 1, 2), Ordering::Greater);
    }
}
