//! The stored pieces of an index, each with its own section codec.

use crate::codec::{ByteReader, ByteWriter};
use crate::encoding::RankValue;
use crate::error::{Error, Result};
use crate::succinct::{bits_for, EliasFano, IntVector, Mmphf, RankBitVector};

/// Sampled R-positions and the text positions stored for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledEntries {
    /// Bit `p - 1` is set iff R-position `p` is sampled.
    pub(crate) is_sampled: RankBitVector,
    /// Sampled R-positions in increasing order.
    pub(crate) positions: EliasFano,
    /// `R[p]` for each sampled `p`, in the same order.
    pub(crate) values: IntVector,
}

impl SampledEntries {
    pub(crate) fn new(n: usize, sampled: &[(usize, usize)]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &(p, _) in sampled {
            bits[p - 1] = true;
        }
        let ps: Vec<u64> = sampled.iter().map(|&(p, _)| p as u64).collect();
        let vs: Vec<u64> = sampled.iter().map(|&(_, v)| v as u64).collect();
        Ok(SampledEntries {
            is_sampled: RankBitVector::from_bits(bits),
            positions: EliasFano::new(&ps)?,
            values: IntVector::with_width(&vs, bits_for(n as u64)),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn is_sampled(&self, p: usize) -> bool {
        self.is_sampled.get(p - 1)
    }

    /// Number of sampled R-positions in `1..=p`.
    #[inline]
    pub fn rank(&self, p: usize) -> usize {
        self.is_sampled.rank1(p)
    }

    /// R-position of the `k`-th sampled entry, 1-based.
    #[inline]
    pub fn position(&self, k: usize) -> usize {
        self.positions.get(k - 1) as usize
    }

    /// Text position stored for the `k`-th sampled entry, 1-based.
    #[inline]
    pub fn value(&self, k: usize) -> usize {
        self.values.get(k - 1) as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.len()).map(|k| (self.position(k), self.value(k)))
    }

    pub fn size_in_bits(&self) -> usize {
        self.is_sampled.size_in_bits() + self.positions.size_in_bits() + self.values.size_in_bits()
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        self.is_sampled.write(w);
        self.positions.write(w);
        self.values.write(w);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>, n: usize) -> Result<Self> {
        let is_sampled = RankBitVector::read(r)?;
        let positions = EliasFano::read(r)?;
        let values = IntVector::read(r)?;
        let ok = is_sampled.len() == n
            && positions.len() == is_sampled.count_ones()
            && values.len() == positions.len()
            && positions.iter().enumerate().all(|(k, p)| p >= 1 && is_sampled.select1(k + 1) == Some(p as usize - 1))
            && values.iter().all(|v| (1..=n as u64).contains(&v));
        if !ok {
            return Err(Error::Corrupt("sampled entries are inconsistent".into()));
        }
        Ok(SampledEntries { is_sampled, positions, values })
    }
}

/// One unsampled R-position's backstep data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackstepEntry {
    /// `None` is the flag: no usable length below the cutoff.
    pub l: Option<usize>,
    pub b: Option<RankValue>,
    pub d: Option<usize>,
}

/// Packed L, B, D over unsampled R-positions in R order; 0 encodes the flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackstepTables {
    pub(crate) l: IntVector,
    pub(crate) b: IntVector,
    pub(crate) d: IntVector,
}

impl BackstepTables {
    pub(crate) fn new(rows: &[BackstepEntry]) -> Self {
        let pack = |f: &dyn Fn(&BackstepEntry) -> u64| IntVector::from_values(&rows.iter().map(f).collect::<Vec<_>>());
        BackstepTables {
            l: pack(&|e| e.l.map_or(0, |x| x as u64)),
            b: pack(&|e| e.b.map_or(0, |x| u64::from(x.doubled()))),
            d: pack(&|e| e.d.map_or(0, |x| x as u64)),
        }
    }

    pub fn len(&self) -> usize {
        self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l.is_empty()
    }

    /// Entry for the `u`-th unsampled position, 1-based.
    #[inline]
    pub fn get(&self, u: usize) -> BackstepEntry {
        let l = self.l.get(u - 1) as usize;
        if l == 0 {
            return BackstepEntry { l: None, b: None, d: None };
        }
        BackstepEntry {
            l: Some(l),
            b: Some(RankValue::from_doubled(self.b.get(u - 1) as u32)),
            d: Some(self.d.get(u - 1) as usize),
        }
    }

    pub fn size_in_bits(&self) -> usize {
        self.l.size_in_bits() + self.b.size_in_bits() + self.d.size_in_bits()
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        self.l.write(w);
        self.b.write(w);
        self.d.write(w);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>, unsampled: usize, n: usize) -> Result<Self> {
        let t = BackstepTables { l: IntVector::read(r)?, b: IntVector::read(r)?, d: IntVector::read(r)? };
        let ok = [&t.l, &t.b, &t.d].iter().all(|v| v.len() == unsampled)
            && (0..unsampled).all(|k| {
                let (l, b, d) = (t.l.get(k), t.b.get(k), t.d.get(k));
                if l == 0 {
                    b == 0 && d == 0
                } else {
                    l < n as u64 && (1..=2 * l + 1).contains(&b) && (1..n as u64).contains(&d)
                }
            });
        if !ok {
            return Err(Error::Corrupt("backstep tables are inconsistent".into()));
        }
        Ok(t)
    }
}

/// Maps an extension encoding to the sampled R-position the backstep
/// offset is measured from.
///
/// Sorted extensions have non-decreasing anchors, so a monotone hash gives
/// the extension's rank and a bit vector marking where the anchor changes
/// turns that rank into a slot of the distinct-anchor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackstepAnchor {
    pub(crate) mmphf: Mmphf,
    pub(crate) changes: RankBitVector,
    pub(crate) anchors: IntVector,
}

impl BackstepAnchor {
    /// `sorted_anchors[k]` is the anchor of the `k`-th smallest extension.
    pub(crate) fn new<K: AsRef<[u32]>>(sorted_exts: &[K], sorted_anchors: &[usize], seed: u64) -> Result<Self> {
        let mmphf = Mmphf::build(sorted_exts, seed)?;
        let changes: Vec<bool> =
            (0..sorted_anchors.len()).map(|k| k == 0 || sorted_anchors[k] != sorted_anchors[k - 1]).collect();
        let mut distinct: Vec<u64> = sorted_anchors.iter().map(|&a| a as u64).collect();
        distinct.dedup();
        Ok(BackstepAnchor {
            mmphf,
            changes: RankBitVector::from_bits(changes),
            anchors: IntVector::from_values(&distinct),
        })
    }

    pub fn len(&self) -> usize {
        self.mmphf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mmphf.is_empty()
    }

    /// Anchor of a stored extension; some stored anchor otherwise.
    #[inline]
    pub fn anchor(&self, ext: &[u32]) -> Option<usize> {
        let h = self.mmphf.eval(ext);
        (h > 0).then(|| self.anchors.get(self.changes.rank1(h) - 1) as usize)
    }

    pub fn size_in_bits(&self) -> usize {
        self.mmphf.size_in_bits() + self.changes.size_in_bits() + self.anchors.size_in_bits()
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        self.mmphf.write(w);
        self.changes.write(w);
        self.anchors.write(w);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>, n: usize) -> Result<Self> {
        let mmphf = Mmphf::read(r)?;
        let changes = RankBitVector::read(r)?;
        let anchors = IntVector::read(r)?;
        let ok = changes.len() == mmphf.len()
            && (changes.is_empty() || changes.get(0))
            && changes.count_ones() == anchors.len()
            && anchors.iter().all(|a| a as usize <= n);
        if !ok {
            return Err(Error::Corrupt("backstep anchor is inconsistent".into()));
        }
        Ok(BackstepAnchor { mmphf, changes, anchors })
    }
}

/// Answers for every encoding shorter than `m_min` that occurs in the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortPatternTable {
    /// Sorted encodings, concatenated.
    pub(crate) symbols: IntVector,
    /// Prefix sums of encoding lengths (one more entry than encodings).
    pub(crate) bounds: IntVector,
    pub(crate) counts: IntVector,
    pub(crate) positions: IntVector,
}

impl ShortPatternTable {
    /// `entries` sorted by encoding: (doubled encoding, count, smallest position).
    pub(crate) fn new(entries: &[(Vec<u32>, usize, usize)]) -> Self {
        let flat: Vec<u64> = entries.iter().flat_map(|e| e.0.iter().map(|&s| u64::from(s))).collect();
        let mut bounds = vec![0u64];
        for e in entries {
            bounds.push(bounds.last().expect("nonempty") + e.0.len() as u64);
        }
        ShortPatternTable {
            symbols: IntVector::from_values(&flat),
            bounds: IntVector::from_values(&bounds),
            counts: IntVector::from_values(&entries.iter().map(|e| e.1 as u64).collect::<Vec<_>>()),
            positions: IntVector::from_values(&entries.iter().map(|e| e.2 as u64).collect::<Vec<_>>()),
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn key(&self, k: usize) -> Vec<u32> {
        let (a, b) = (self.bounds.get(k) as usize, self.bounds.get(k + 1) as usize);
        (a..b).map(|t| self.symbols.get(t) as u32).collect()
    }

    /// `(count, smallest position)`, or `None` if the encoding never occurs.
    pub fn lookup(&self, enc: &[u32]) -> Option<(usize, usize)> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.key(mid).as_slice().cmp(enc) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => {
                    return Some((self.counts.get(mid) as usize, self.positions.get(mid) as usize))
                }
            }
        }
        None
    }

    pub fn size_in_bits(&self) -> usize {
        self.symbols.size_in_bits()
            + self.bounds.size_in_bits()
            + self.counts.size_in_bits()
            + self.positions.size_in_bits()
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        self.symbols.write(w);
        self.bounds.write(w);
        self.counts.write(w);
        self.positions.write(w);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>, n: usize) -> Result<Self> {
        let t = ShortPatternTable {
            symbols: IntVector::read(r)?,
            bounds: IntVector::read(r)?,
            counts: IntVector::read(r)?,
            positions: IntVector::read(r)?,
        };
        let entries = t.counts.len();
        let ok = t.positions.len() == entries
            && t.bounds.len() == entries + 1
            && t.bounds.get(0) == 0
            && t.bounds.get(entries) as usize == t.symbols.len()
            && (0..entries).all(|k| t.bounds.get(k) < t.bounds.get(k + 1))
            && (1..entries).all(|k| t.key(k - 1) < t.key(k))
            && t.counts.iter().all(|c| (1..=n as u64).contains(&c))
            && t.positions.iter().all(|p| (1..=n as u64).contains(&p));
        if !ok {
            return Err(Error::Corrupt("short-pattern table is inconsistent".into()));
        }
        Ok(t)
    }
}
