//! Succinct building blocks: packed integers, rank/select bit vectors,
//! Elias-Fano sequences, perfect hashing and weak prefix search.

mod bitvec;
mod elias_fano;
mod fingerprint;
mod intvec;
mod mmphf;
mod mphf;
mod wps;

pub use bitvec::RankBitVector;
pub use elias_fano::EliasFano;
pub use fingerprint::{mix64, Fingerprinter};
pub use intvec::{bits_for, IntVector};
pub use mmphf::Mmphf;
pub use mphf::Mphf;
pub use wps::{PrefixSearchAudit, WeakPrefixSearcher};
