//! Weak prefix search over a sorted dictionary of encodings.
//!
//! The dictionary is viewed as a compacted trie (every key gets an implicit
//! terminator `0`, smaller than any rank symbol, so no key prefixes another).
//! Each trie node covers the depth interval `(p, e]` between its parent's
//! extent and its own. Two hash tables are kept:
//!
//! * the *handle* table, keyed by the node's extent truncated at the
//!   2-fattest number of `(p, e]`;
//! * the *entry* table, keyed by the extent truncated at `p + 1`.
//!
//! A query runs a fat binary search over the handle table to find the
//! deepest node whose extent is shorter than the query, then one entry
//! lookup gives the node covering the query length; its leaf range is the
//! answer. Tables store only short signatures. The builder checks every
//! prefix of every key against both tables and reseeds on a false hit, so
//! genuine prefixes are answered exactly; anything else gets an arbitrary
//! range.

use super::fingerprint::{mix64, Fingerprinter};
use super::intvec::{bits_for, IntVector};
use super::mphf::Mphf;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

/// 2-fattest number in `(a, b]`, `a < b`.
#[inline]
pub(crate) fn two_fattest(a: usize, b: usize) -> usize {
    debug_assert!(a < b);
    let top = usize::BITS - 1 - (a ^ b).leading_zeros();
    b & (usize::MAX << top)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    mphf: Mphf,
    signatures: IntVector,
    nodes: IntVector,
}

impl Table {
    fn build(keys: &[u64], owners: &[usize], node_width: usize, sig_width: usize, seed: u64) -> Result<Self> {
        let mphf = Mphf::build(keys, seed)?;
        let mut signatures = IntVector::new(keys.len(), sig_width);
        let mut nodes = IntVector::new(keys.len(), node_width);
        for (&k, &owner) in keys.iter().zip(owners) {
            let s = mphf.eval(k) - 1;
            signatures.set(s, signature(k, sig_width));
            nodes.set(s, owner as u64);
        }
        Ok(Table { mphf, signatures, nodes })
    }

    #[inline]
    fn lookup(&self, key: u64) -> Option<usize> {
        if self.mphf.is_empty() {
            return None;
        }
        let s = self.mphf.eval(key) - 1;
        (self.signatures.get(s) == signature(key, self.signatures.width())).then(|| self.nodes.get(s) as usize)
    }

    fn size_in_bits(&self) -> usize {
        self.mphf.size_in_bits() + self.signatures.size_in_bits() + self.nodes.size_in_bits()
    }

    fn write(&self, w: &mut ByteWriter) {
        self.mphf.write(w);
        self.signatures.write(w);
        self.nodes.write(w);
    }

    fn read(r: &mut ByteReader<'_>, node_count: usize) -> Result<Self> {
        let mphf = Mphf::read(r)?;
        let signatures = IntVector::read(r)?;
        let nodes = IntVector::read(r)?;
        if signatures.len() != mphf.len() || nodes.len() != mphf.len() || nodes.iter().any(|x| x as usize >= node_count)
        {
            return Err(Error::Corrupt("prefix-search table mismatch".into()));
        }
        Ok(Table { mphf, signatures, nodes })
    }
}

#[inline]
fn signature(key: u64, width: usize) -> u64 {
    let s = mix64(key.rotate_left(17));
    if width == 64 {
        s
    } else {
        s & ((1 << width) - 1)
    }
}

/// Node of the compacted trie during construction.
#[derive(Debug, Clone, Copy)]
struct Node {
    parent_depth: usize,
    depth: usize,
    first_leaf: usize,
    last_leaf: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakPrefixSearcher {
    seed: u64,
    dict_len: usize,
    parent_depth: IntVector,
    depth: IntVector,
    lo: IntVector,
    hi: IntVector,
    handles: Table,
    entries: Table,
}

impl WeakPrefixSearcher {
    /// Builds over `dict`, sorted (not necessarily strictly) by doubled
    /// symbols. Ranges returned by queries are 1-based positions in `dict`.
    pub fn build<K: AsRef<[u32]>>(dict: &[K], seed: u64) -> Result<Self> {
        for (k, w) in dict.windows(2).enumerate() {
            if w[0].as_ref() > w[1].as_ref() {
                return Err(Error::Unsorted(k + 2));
            }
        }
        if dict.iter().any(|k| k.as_ref().contains(&0)) {
            return Err(Error::InvalidArgument("dictionary symbols must be nonzero".into()));
        }
        let (leaves, nodes) = layout(dict);
        let key = |leaf: usize| dict[leaves[leaf].0].as_ref();
        let max_depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        let total_prefixes: usize = nodes.iter().map(|n| n.depth - n.parent_depth).sum();
        let sig_width = (bits_for(total_prefixes as u64) + 10).min(64);
        let node_width = bits_for(nodes.len().saturating_sub(1) as u64);
        let depth_width = bits_for(max_depth as u64);
        let pos_width = bits_for(dict.len() as u64);

        let pack = |f: &dyn Fn(&Node) -> u64, width: usize| {
            IntVector::with_width(&nodes.iter().map(f).collect::<Vec<_>>(), width)
        };
        let parent_depth = pack(&|n| n.parent_depth as u64, depth_width);
        let depth = pack(&|n| n.depth as u64, depth_width);
        let lo = pack(&|n| leaves[n.first_leaf].1 as u64, pos_width);
        let hi = pack(&|n| leaves[n.last_leaf].2 as u64, pos_width);
        let owners: Vec<usize> = (0..nodes.len()).collect();

        let mut seed = seed;
        let mut running = Vec::new();
        'attempt: for _ in 0..64 {
            let fp = Fingerprinter::new(seed);
            let mut handle_keys = Vec::with_capacity(nodes.len());
            let mut entry_keys = Vec::with_capacity(nodes.len());
            for n in &nodes {
                fp.running(terminated(key(n.first_leaf)).take(n.depth), &mut running);
                let f = two_fattest(n.parent_depth, n.depth);
                handle_keys.push(fp.finish(running[f], f));
                entry_keys.push(fp.finish(running[n.parent_depth + 1], n.parent_depth + 1));
            }
            let built = Table::build(&handle_keys, &owners, node_width, sig_width, seed)
                .and_then(|h| Ok((h, Table::build(&entry_keys, &owners, node_width, sig_width, seed ^ 0x5bd1_e995)?)));
            let (handles, entries) = match built {
                Ok(t) => t,
                Err(Error::DuplicateKey(_) | Error::Construction(_)) => {
                    seed = mix64(seed);
                    continue;
                }
                Err(e) => return Err(e),
            };
            // every prefix of every key must resolve only to its own node
            for (idx, n) in nodes.iter().enumerate() {
                fp.running(terminated(key(n.first_leaf)).take(n.depth), &mut running);
                let f = two_fattest(n.parent_depth, n.depth);
                for (t, &prefix) in running.iter().enumerate().take(n.depth + 1).skip(n.parent_depth + 1) {
                    let h = fp.finish(prefix, t);
                    if handles.lookup(h).is_some_and(|o| !(o == idx && t == f))
                        || entries.lookup(h).is_some_and(|o| !(o == idx && t == n.parent_depth + 1))
                    {
                        seed = mix64(seed);
                        continue 'attempt;
                    }
                }
            }
            return Ok(WeakPrefixSearcher {
                seed,
                dict_len: dict.len(),
                parent_depth,
                depth,
                lo,
                hi,
                handles,
                entries,
            });
        }
        Err(Error::Construction("weak prefix search: no collision-free seed".into()))
    }

    pub fn dict_len(&self) -> usize {
        self.dict_len
    }

    fn range(&self, node: usize) -> (usize, usize) {
        (self.lo.get(node) as usize, self.hi.get(node) as usize)
    }

    /// The maximal 1-based range of keys prefixed by `q` whenever at least
    /// one key is; an arbitrary in-range pair otherwise.
    pub fn query(&self, q: &[u32]) -> (usize, usize) {
        let fallback = (1, 1.min(self.dict_len));
        if q.is_empty() {
            return (1, self.dict_len);
        }
        if self.dict_len == 0 {
            return fallback;
        }
        let fp = Fingerprinter::new(self.seed);
        let mut running = Vec::with_capacity(q.len() + 1);
        fp.running(q.iter().copied(), &mut running);
        let m = q.len();
        let (mut a, mut b) = (0usize, m);
        while a < b {
            let f = two_fattest(a, b);
            let hit = self
                .handles
                .lookup(fp.finish(running[f], f))
                .filter(|&v| self.parent_depth.get(v) < f as u64 && f as u64 <= self.depth.get(v));
            match hit {
                Some(v) => {
                    let e = self.depth.get(v) as usize;
                    if e >= m {
                        return self.range(v);
                    }
                    a = e;
                }
                None => b = f - 1,
            }
        }
        match self.entries.lookup(fp.finish(running[a + 1], a + 1)) {
            Some(v) if self.parent_depth.get(v) as usize == a && self.depth.get(v) as usize >= m => self.range(v),
            _ => fallback,
        }
    }

    /// Re-derives both hash tables' key sets from `dict` (the dictionary
    /// this searcher was built over) and checks them, then compares every
    /// genuine prefix of every key against a binary search of `dict`.
    pub fn audit<K: AsRef<[u32]>>(&self, dict: &[K]) -> PrefixSearchAudit {
        let mut report = PrefixSearchAudit::default();
        let (leaves, nodes) = layout(dict);
        let key = |leaf: usize| dict[leaves[leaf].0].as_ref();
        if nodes.len() != self.depth.len() || dict.len() != self.dict_len {
            report.hash_violations += 1;
            return report;
        }
        let fp = Fingerprinter::new(self.seed);
        let mut running = Vec::new();
        let (mut handle_keys, mut entry_keys) = (Vec::new(), Vec::new());
        for (idx, n) in nodes.iter().enumerate() {
            fp.running(terminated(key(n.first_leaf)).take(n.depth), &mut running);
            let f = two_fattest(n.parent_depth, n.depth);
            let (h, e) = (fp.finish(running[f], f), fp.finish(running[n.parent_depth + 1], n.parent_depth + 1));
            let misplaced = self.handles.lookup(h) != Some(idx) || self.entries.lookup(e) != Some(idx);
            report.hash_violations += usize::from(misplaced);
            handle_keys.push(h);
            entry_keys.push(e);
        }
        report.hash_keys = 2 * nodes.len();
        report.hash_violations +=
            self.handles.mphf.count_collisions(&handle_keys) + self.entries.mphf.count_collisions(&entry_keys);

        for &(k, _, _) in &leaves {
            let full = dict[k].as_ref();
            for t in 1..=full.len() {
                let q = &full[..t];
                let lo = dict.partition_point(|d| cut(d.as_ref(), t) < q);
                let hi = dict.partition_point(|d| cut(d.as_ref(), t) <= q);
                report.prefixes += 1;
                report.prefix_violations += usize::from(self.query(q) != (lo + 1, hi));
            }
        }
        report
    }

    pub fn size_in_bits(&self) -> usize {
        128 + [&self.parent_depth, &self.depth, &self.lo, &self.hi].iter().map(|v| v.size_in_bits()).sum::<usize>()
            + self.handles.size_in_bits()
            + self.entries.size_in_bits()
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.seed);
        w.put_usize(self.dict_len);
        for v in [&self.parent_depth, &self.depth, &self.lo, &self.hi] {
            v.write(w);
        }
        self.handles.write(w);
        self.entries.write(w);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let seed = r.get_u64()?;
        let dict_len = r.get_usize()?;
        let parent_depth = IntVector::read(r)?;
        let depth = IntVector::read(r)?;
        let lo = IntVector::read(r)?;
        let hi = IntVector::read(r)?;
        let count = depth.len();
        if [&parent_depth, &lo, &hi].iter().any(|v| v.len() != count)
            || lo.iter().chain(hi.iter()).any(|x| x == 0 || x as usize > dict_len)
            || parent_depth.iter().zip(depth.iter()).any(|(p, e)| p >= e)
        {
            return Err(Error::Corrupt("prefix-search node table mismatch".into()));
        }
        let handles = Table::read(r, count)?;
        let entries = Table::read(r, count)?;
        Ok(WeakPrefixSearcher { seed, dict_len, parent_depth, depth, lo, hi, handles, entries })
    }
}

/// Counts from [`WeakPrefixSearcher::audit`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrefixSearchAudit {
    pub hash_keys: usize,
    pub hash_violations: usize,
    pub prefixes: usize,
    pub prefix_violations: usize,
}

fn cut(key: &[u32], t: usize) -> &[u32] {
    &key[..t.min(key.len())]
}

/// Distinct keys as (dict index, lo, hi) with their 1-based dictionary
/// ranges, and the trie over them.
fn layout<K: AsRef<[u32]>>(dict: &[K]) -> (Vec<(usize, usize, usize)>, Vec<Node>) {
    let mut leaves: Vec<(usize, usize, usize)> = Vec::new();
    for (k, key) in dict.iter().enumerate() {
        match leaves.last_mut() {
            Some(last) if dict[last.0].as_ref() == key.as_ref() => last.2 = k + 1,
            _ => leaves.push((k, k + 1, k + 1)),
        }
    }
    let key = |leaf: usize| dict[leaves[leaf].0].as_ref();
    let nodes = trie_nodes(leaves.len(), |a, b| lcp(key(a), key(b)), |leaf| key(leaf).len() + 1);
    (leaves, nodes)
}

fn terminated(key: &[u32]) -> impl Iterator<Item = u32> + '_ {
    key.iter().copied().chain(std::iter::once(0))
}

fn lcp(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Compacted-trie nodes (internal nodes and leaves) of `count` sorted,
/// distinct, prefix-free strings, given the LCP of neighbours and the
/// length of each string. The depth-0 root is left implicit.
fn trie_nodes(count: usize, lcp_of: impl Fn(usize, usize) -> usize, len_of: impl Fn(usize) -> usize) -> Vec<Node> {
    let lcps: Vec<usize> = (1..count).map(|k| lcp_of(k - 1, k)).collect();
    let lcp_at = |k: usize| if k == 0 || k >= count { 0 } else { lcps[k - 1] };
    let mut nodes = Vec::with_capacity(2 * count);
    for leaf in 0..count {
        nodes.push(Node {
            parent_depth: lcp_at(leaf).max(lcp_at(leaf + 1)),
            depth: len_of(leaf),
            first_leaf: leaf,
            last_leaf: leaf,
        });
    }
    // (depth, first leaf) of open lcp-intervals
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    for k in 1..=count {
        let cur = if k < count { Some(lcps[k - 1]) } else { None };
        let mut lb = k - 1;
        while let Some(&(d, first)) = stack.last() {
            if cur.is_some_and(|c| c >= d) {
                break;
            }
            stack.pop();
            if d == 0 {
                break;
            }
            let outer = stack.last().map_or(0, |s| s.0).max(cur.unwrap_or(0));
            nodes.push(Node { parent_depth: outer, depth: d, first_leaf: first, last_leaf: k - 1 });
            lb = first;
        }
        if let Some(c) = cur {
            if stack.last().is_none_or(|s| c > s.0) {
                stack.push((c, lb));
            }
        }
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_range(dict: &[Vec<u32>], q: &[u32]) -> Option<(usize, usize)> {
        let hits: Vec<usize> = (0..dict.len()).filter(|&k| dict[k].starts_with(q)).collect();
        hits.first().map(|&l| (l + 1, hits.last().unwrap() + 1))
    }

    #[test]
    fn fattest_numbers() {
        assert_eq!(two_fattest(0, 5), 4);
        assert_eq!(two_fattest(4, 5), 5);
        assert_eq!(two_fattest(3, 8), 8);
        assert_eq!(two_fattest(8, 15), 12);
    }

    #[test]
    fn trie_shape_on_small_dictionary() {
        let dict: Vec<Vec<u32>> = vec![vec![1, 1], vec![1, 3, 1], vec![1, 3, 2]];
        let nodes = trie_nodes(3, |a, b| lcp(&dict[a], &dict[b]), |k| dict[k].len() + 1);
        // three leaves, node "1 3", node "1"
        assert_eq!(nodes.len(), 5);
        assert!(nodes.iter().any(|n| n.depth == 2 && n.parent_depth == 1 && (n.first_leaf, n.last_leaf) == (1, 2)));
        assert!(nodes.iter().any(|n| n.depth == 1 && n.parent_depth == 0 && (n.first_leaf, n.last_leaf) == (0, 2)));
    }

    #[test]
    fn exact_on_genuine_prefixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for round in 0..200 {
            let n = rng.gen_range(1..120);
            let sigma = rng.gen_range(1..4u32);
            let mut dict: Vec<Vec<u32>> = (0..n)
                .map(|_| {
                    let len = rng.gen_range(1..10);
                    (0..len).map(|_| rng.gen_range(1..=sigma)).collect()
                })
                .collect();
            dict.sort();
            let w = WeakPrefixSearcher::build(&dict, round).unwrap();
            for key in &dict {
                for t in 1..=key.len() {
                    let q = &key[..t];
                    assert_eq!(Some(w.query(q)), brute_range(&dict, q), "dict={dict:?} q={q:?}");
                }
            }
            // foreign queries stay in range
            for _ in 0..20 {
                let q: Vec<u32> = (0..rng.gen_range(1..12)).map(|_| rng.gen_range(1..=4)).collect();
                let (l, r) = w.query(&q);
                assert!(1 <= l && l <= n && 1 <= r && r <= n);
            }
            let mut out = ByteWriter::new();
            w.write(&mut out);
            let bytes = out.into_bytes();
            assert_eq!(WeakPrefixSearcher::read(&mut ByteReader::new(&bytes)).unwrap(), w);
        }
    }

    #[test]
    fn whole_dictionary_for_the_common_first_symbol() {
        let dict = vec![vec![1u32], vec![1, 1], vec![1, 2, 1]];
        let w = WeakPrefixSearcher::build(&dict, 0).unwrap();
        assert_eq!(w.query(&[1]), (1, 3));
        assert_eq!(w.query(&[1, 2, 1]), (3, 3));
    }

    #[test]
    fn rejects_unsorted() {
        assert!(matches!(WeakPrefixSearcher::build(&[vec![2u32], vec![1]], 0), Err(Error::Unsorted(2))));
    }
}
