//! Exact analysis of contract paths in multiagent resource allocation:
//! deal classes, shortest and unique rational paths, and constructions of
//! settings whose only rational path is exponentially long.
//!
//! ```
//! use contractnet::constructions::snake_m4_instance;
//! use contractnet::explorer::verify_claims;
//!
//! let inst = snake_m4_instance();
//! assert_eq!(inst.path_length(), 7);
//! assert!(verify_claims(&inst).unwrap().iter().all(|c| c.passed));
//! ```

pub mod bench;
pub mod catalog;
pub mod constructions;
pub mod deal;
pub mod error;
pub mod explorer;
pub mod hypercube;
pub mod instance_file;
pub mod model;
pub mod snake_search;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/allocations.md")]
    mod allocations {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/snakes.md")]
    mod snakes {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
