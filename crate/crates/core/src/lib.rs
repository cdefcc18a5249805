//! Component reusability metrics for object-oriented systems.
//!
//! The crate works on a language-agnostic [`CodeFacts`](model::CodeFacts)
//! model that can be loaded from fact files ([`facts_io`]) or derived from
//! MiniOO sources ([`minilang`]). On top of it:
//!
//! * [`metrics`] computes method complexity, WMC, WCM, DIT, NOC and CBOM;
//! * [`reuse`] keeps the per-component reuse ledger and finds victims;
//! * [`reconfig`] picks highly coupled components and splits them in two.

pub mod cli;
pub mod facts_io;
pub mod metrics;
pub mod minilang;
pub mod model;
pub mod reconfig;
pub mod render;
pub mod reuse;
