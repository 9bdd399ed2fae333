//! Incremental reasoning over labeled disjunctive metric constraint
//! networks.
//!
//! Constraints between time points are disjunctions of intervals. Instead of
//! branching over disjuncts, each alternative carries a label; propagation
//! works on whole labeled constraints and records label combinations proven
//! inconsistent. One network therefore holds every scenario at once, queries
//! project it down, and assertions never require re-solving from scratch.

pub mod context;
pub mod error;
pub mod ia;
pub mod ilset;
pub mod label;
pub mod lc;
pub mod logic;
pub mod netgen;
pub mod oracle;
pub mod query;
pub mod tcn;
pub mod time;

pub use error::{Error, Result};
pub use ilset::ILSetStore;
pub use label::{LabelId, LabelSet, Labels, R0, W0};
pub use lc::{lc_compose, lc_intersect, lc_inverse, lc_union, EvalCtx, Lec, LC};
pub use tcn::{InputRecord, NodeId, PartitionPolicy, Tcn, TcnConfig, ORIGIN};
pub use time::{Bound, Interval, TimeValue};
