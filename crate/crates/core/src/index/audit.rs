//! Exhaustive structural checks of a built index against its text.

use std::fmt;

use super::build::{analyze, short_entries};
use super::OpIndex;
use crate::error::{Error, Result};

/// Outcome of one family of checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn total_checked(&self) -> usize {
        self.checks.iter().map(|c| c.checked).sum()
    }

    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    fn push(&mut self, name: &'static str, checked: usize, violations: usize) {
        self.checks.push(AuditCheck { name, checked, violations });
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check\tchecked\tviolations")?;
        for c in &self.checks {
            writeln!(f, "{}\t{}\t{}", c.name, c.checked, c.violations)?;
        }
        Ok(())
    }
}

impl OpIndex {
    /// Recomputes every key set from `text` and checks each stored structure
    /// against it: rank and select on the sampled bit vector, Elias–Fano
    /// access, stored values, backstep rows, perfect-hash bijectivity,
    /// monotone-hash ranks, anchors, prefix search on every genuine prefix,
    /// the short-pattern table and window re-encoding.
    ///
    /// Costs O(n·ell·log n); meant for tests and `selftest`.
    pub fn audit(&self, text: &[u64]) -> Result<AuditReport> {
        let n = self.len();
        if text.len() != n {
            return Err(Error::InvalidArgument(format!("index is over {n} symbols, text has {}", text.len())));
        }
        let a = analyze(text, &self.params)?;
        let mut report = AuditReport::default();

        let bits = &self.sampled.is_sampled;
        let mut ones = 0;
        let mut bad = usize::from(bits.len() != n);
        for p in 0..=n.min(bits.len()) {
            bad += usize::from(bits.rank1(p) != ones);
            if p < n {
                let expected = a.is_sampled[p];
                bad += usize::from(bits.get(p) != expected);
                ones += usize::from(expected);
            }
        }
        report.push("rank", n + 1, bad);

        let list = &a.sampled_list;
        let bad = usize::from(self.sampled.len() != list.len())
            + list.iter().enumerate().filter(|&(k, &(p, _))| bits.select1(k + 1) != Some(p - 1)).count();
        report.push("select", list.len(), bad);

        let ef = &self.sampled.positions;
        let bad = usize::from(ef.len() != list.len())
            + list.iter().enumerate().filter(|&(k, &(p, _))| ef.access(k + 1).ok() != Some(p as u64)).count();
        report.push("elias-fano access", list.len(), bad);

        let bad = list
            .iter()
            .enumerate()
            .filter(|&(k, &(_, v))| k >= self.sampled.values.len() || self.sampled.values.get(k) != v as u64)
            .count();
        report.push("sampled values", list.len(), bad);

        let bad = usize::from(self.backstep.len() != a.rows.len())
            + a.rows
                .iter()
                .enumerate()
                .filter(|&(u, row)| u >= self.backstep.len() || self.backstep.get(u + 1) != *row)
                .count();
        report.push("backstep rows", a.rows.len(), bad);

        let exts: Vec<&[u32]> = a.exts.iter().map(|e| a.ext(e)).collect();
        let (collisions, misranked) = self.anchor.mmphf.audit(&exts);
        let prefix = self.wps.audit(&a.dictionary());
        report.push("perfect hash bijectivity", exts.len() + prefix.hash_keys, collisions + prefix.hash_violations);
        report.push("monotone hash ranks", exts.len(), misranked);
        let bad = a.exts.iter().zip(&exts).filter(|(e, key)| self.anchor.anchor(key) != Some(e.2)).count();
        report.push("anchors", exts.len(), bad);

        report.push("prefix search", prefix.prefixes, prefix.prefix_violations);

        let entries = short_entries(&a.trunc, self.params.m_min);
        let bad = usize::from(self.short.len() != entries.len())
            + entries.iter().filter(|(enc, c, p)| self.short.lookup(enc) != Some((*c, *p))).count();
        report.push("short patterns", entries.len(), bad);

        let mut out = Vec::new();
        let mut scratch = Vec::new();
        let mut bad = 0;
        for j in 1..=n {
            let t = a.trunc.get(j);
            let m = t.len().min(self.window.max_extract_len());
            let ok = self.window.extract_doubled_into(j, m, &mut scratch, &mut out).is_ok() && out == t[..m];
            bad += usize::from(!ok);
        }
        report.push("window re-encoding", n, bad);

        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use crate::index::{OpIndex, ParamsBuilder};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn clean_index_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let text: Vec<u64> = (0..600).map(|_| rng.gen_range(0..6)).collect();
        let idx = OpIndex::build(&text, ParamsBuilder::new().build(600).unwrap()).unwrap();
        let report = idx.audit(&text).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 11);
        assert!(report.checks.iter().all(|c| c.checked > 0));
    }

    #[test]
    fn foreign_text_is_caught() {
        let text: Vec<u64> = (0..200u64).map(|k| (k * 17) % 11).collect();
        let idx = OpIndex::build(&text, ParamsBuilder::new().build(200).unwrap()).unwrap();
        let other: Vec<u64> = (0..200u64).map(|k| (k * 13) % 7).collect();
        assert!(!idx.audit(&other).unwrap().passed());
        assert!(idx.audit(&text[..100]).is_err());
    }
}
