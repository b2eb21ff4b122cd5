//! Compact index for order-preserving pattern matching.
//!
//! [`OpIndex`] answers count and locate queries for patterns whose
//! characters compare like a substring of the text, while storing ranks
//! only. The guide in `book/` walks through the structure on a running
//! example; [`oracle`] holds the brute-force references the tests compare
//! against.
//!
//! ```
//! use opme::{OpIndex, ParamsBuilder};
//!
//! let text = [3, 9, 7, 2, 3, 5, 6, 8, 4, 3];
//! let index = OpIndex::build(&text, ParamsBuilder::new().build(text.len())?)?;
//! assert_eq!(index.count(&[1, 2])?, 5);
//! # Ok::<(), opme::Error>(())
//! ```

pub mod codec;
pub mod corpus;
pub mod encoding;
pub mod error;
pub mod index;
pub mod oracle;
pub mod selftest;
pub mod succinct;
pub mod window;

pub use encoding::{order_isomorphic, prepend_rank, rank_encode, Encoding, OrderStatSet, RankValue};
pub use error::{Error, Result};
pub use index::{IndexParams, OpIndex, ParamsBuilder, QueryResult};
pub use window::WindowStore;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    mod encoding {}
    #[doc = include_str!("../../../book/src/suffix_array.md")]
    mod suffix_array {}
    #[doc = include_str!("../../../book/src/backward_steps.md")]
    mod backward_steps {}
    #[doc = include_str!("../../../book/src/queries.md")]
    mod queries {}
    #[doc = include_str!("../../../book/src/space.md")]
    mod space {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/testing.md")]
    mod testing {}
}
