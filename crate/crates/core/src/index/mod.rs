//! The compact order-preserving index.
//!
//! An [`OpIndex`] stores no text characters. Everything it needs is kept as
//! ranks: window-local ranks for re-encoding any short substring, and a
//! sampled rank-encoded suffix array whose gaps are bridged by backward
//! steps driven by the L/B/D tables.

mod audit;
mod build;
mod components;
mod params;
mod query;
mod serial;

pub use audit::{AuditCheck, AuditReport};
pub use build::{suffix_compare, suffix_order};
pub use components::{BackstepAnchor, BackstepEntry, BackstepTables, SampledEntries, ShortPatternTable};
pub use params::{default_sample, lg_pow_ceil, IndexParams, ParamsBuilder, DEFAULT_SEED};
pub use query::{QueryResult, QueryTrace};
pub use serial::{IndexStats, SectionSize, FORMAT_VERSION, MAGIC};

use crate::succinct::WeakPrefixSearcher;
use crate::window::WindowStore;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpIndex {
    params: IndexParams,
    window: WindowStore,
    sampled: SampledEntries,
    backstep: BackstepTables,
    anchor: BackstepAnchor,
    wps: WeakPrefixSearcher,
    short: ShortPatternTable,
}

impl OpIndex {
    pub fn params(&self) -> &IndexParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.n
    }

    pub fn is_empty(&self) -> bool {
        self.params.n == 0
    }

    pub fn window_store(&self) -> &WindowStore {
        &self.window
    }

    pub fn sampled(&self) -> &SampledEntries {
        &self.sampled
    }

    /// Sampled R-positions in increasing order.
    pub fn sampled_positions(&self) -> Vec<usize> {
        self.sampled.iter().map(|(p, _)| p).collect()
    }

    /// Stored text position for a sampled R-position.
    pub fn sampled_value(&self, p: usize) -> Option<usize> {
        if !(1..=self.len()).contains(&p) || !self.sampled.is_sampled(p) {
            return None;
        }
        Some(self.sampled.value(self.sampled.rank(p)))
    }

    /// L/B/D of an unsampled R-position; `None` for sampled or out-of-range
    /// positions.
    pub fn backstep_entry(&self, i: usize) -> Option<BackstepEntry> {
        if !(1..=self.len()).contains(&i) || self.sampled.is_sampled(i) {
            return None;
        }
        Some(self.backstep.get(i - self.sampled.rank(i)))
    }

    pub fn anchor(&self) -> &BackstepAnchor {
        &self.anchor
    }

    pub fn prefix_searcher(&self) -> &WeakPrefixSearcher {
        &self.wps
    }

    pub fn short_patterns(&self) -> &ShortPatternTable {
        &self.short
    }
}
