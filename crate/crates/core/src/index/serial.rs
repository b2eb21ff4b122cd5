use std::fmt;

use super::components::{BackstepAnchor, BackstepTables, SampledEntries, ShortPatternTable};
use super::params::IndexParams;
use super::OpIndex;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};
use crate::succinct::WeakPrefixSearcher;
use crate::window::WindowStore;

pub const MAGIC: &[u8; 4] = b"OPME";
pub const FORMAT_VERSION: u8 = 1;

const SECTION_NAMES: [&str; 6] =
    ["window store", "sampled entries", "backstep tables", "anchor", "prefix search", "short patterns"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSize {
    pub name: &'static str,
    pub bits: usize,
}

/// Serialized size broken down by section.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexStats {
    pub n: usize,
    pub ell: usize,
    pub sample: usize,
    pub sampled_positions: usize,
    pub sections: Vec<SectionSize>,
    pub total_bits: usize,
}

impl IndexStats {
    pub fn bits_per_symbol(&self) -> f64 {
        self.total_bits as f64 / self.n as f64
    }
}

impl fmt::Display for IndexStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n\t{}", self.n)?;
        writeln!(f, "ell\t{}", self.ell)?;
        writeln!(f, "sample\t{}", self.sample)?;
        writeln!(f, "sampled\t{}", self.sampled_positions)?;
        for s in &self.sections {
            writeln!(f, "section\t{}\t{}", s.name, s.bits)?;
        }
        writeln!(f, "total_bits\t{}", self.total_bits)?;
        write!(f, "bits_per_symbol\t{:.3}", self.bits_per_symbol())
    }
}

impl OpIndex {
    fn sections(&self) -> [Vec<u8>; 6] {
        let enc = |f: &dyn Fn(&mut ByteWriter)| {
            let mut w = ByteWriter::new();
            f(&mut w);
            w.into_bytes()
        };
        [
            enc(&|w| self.window.write(w)),
            enc(&|w| self.sampled.write(w)),
            enc(&|w| self.backstep.write(w)),
            enc(&|w| self.anchor.write(w)),
            enc(&|w| self.wps.write(w)),
            enc(&|w| self.short.write(w)),
        ]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.params;
        let mut w = ByteWriter::new();
        w.put_raw(MAGIC);
        w.put_raw(&[FORMAT_VERSION]);
        for v in [
            p.n as u64,
            p.c_num,
            p.c_den,
            p.ell as u64,
            p.sample as u64,
            p.occ_threshold as u64,
            p.m_min as u64,
            p.seed,
        ] {
            w.put_u64(v);
        }
        let sections = self.sections();
        w.put_usize(sections.len());
        for s in &sections {
            w.put_section(s);
        }
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        if r.take(4)? != MAGIC {
            return Err(Error::Corrupt("missing OPME magic".into()));
        }
        let version = r.take(1)?[0];
        if version != FORMAT_VERSION {
            return Err(Error::Corrupt(format!("unsupported format version {version}")));
        }
        let n = r.get_usize()?;
        let params = IndexParams {
            n,
            c_num: r.get_u64()?,
            c_den: r.get_u64()?,
            ell: r.get_usize()?,
            sample: r.get_usize()?,
            occ_threshold: r.get_usize()?,
            m_min: r.get_usize()?,
            seed: r.get_u64()?,
        };
        params.validate().map_err(|e| Error::Corrupt(format!("header: {e}")))?;
        let count = r.get_usize()?;
        if count != SECTION_NAMES.len() {
            return Err(Error::Corrupt(format!("expected {} sections, found {count}", SECTION_NAMES.len())));
        }
        fn section<'a, T>(r: &mut ByteReader<'a>, f: impl FnOnce(&mut ByteReader<'a>) -> Result<T>) -> Result<T> {
            let mut s = ByteReader::new(r.get_section()?);
            let v = f(&mut s)?;
            s.finish()?;
            Ok(v)
        }
        let window = section(&mut r, WindowStore::read)?;
        let sampled = section(&mut r, |s| SampledEntries::read(s, n))?;
        let backstep = section(&mut r, |s| BackstepTables::read(s, n - sampled.len(), n))?;
        let anchor = section(&mut r, |s| BackstepAnchor::read(s, n))?;
        let wps = section(&mut r, WeakPrefixSearcher::read)?;
        let short = section(&mut r, |s| ShortPatternTable::read(s, n))?;
        r.finish()?;
        if window.len() != n || window.ell() != params.ell || wps.dict_len() != n {
            return Err(Error::Corrupt("section dimensions disagree with the header".into()));
        }
        Ok(OpIndex { params, window, sampled, backstep, anchor, wps, short })
    }

    pub fn stats(&self) -> IndexStats {
        let sections: Vec<SectionSize> = SECTION_NAMES
            .iter()
            .zip(self.sections())
            .map(|(&name, s)| SectionSize { name, bits: 8 * s.len() })
            .collect();
        IndexStats {
            n: self.params.n,
            ell: self.params.ell,
            sample: self.params.sample,
            sampled_positions: self.sampled.len(),
            sections,
            total_bits: 8 * self.to_bytes().len(),
        }
    }
}
