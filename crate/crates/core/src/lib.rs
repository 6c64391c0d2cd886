//! Two-state overlap inequalities, event-graph polytopes and contextual
//! advantage for Mach-Zehnder interferometers.
//!
//! The guide in `book/` walks through every module; its snippets are run as
//! doc-tests of this crate.

pub mod error;
pub mod eventgraph;
pub mod geometry;
pub mod interrogation;
pub mod optics;
pub mod presets;
pub mod qstate;
pub mod scan;
pub mod scenario;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/overlaps.md")]
    mod overlaps {}
    #[doc = include_str!("../../../book/src/interferometer.md")]
    mod interferometer {}
    #[doc = include_str!("../../../book/src/event-graphs.md")]
    mod event_graphs {}
    #[doc = include_str!("../../../book/src/polytope.md")]
    mod polytope {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/interrogation.md")]
    mod interrogation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
