//! A mixed-binary branch-and-bound laboratory for studying strong-branching
//! score functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: instances, MPS / JSON codecs, solution checking;
//! * [`simplex`]: bounded-variable primal and dual simplex with warm starts;
//! * [`rules`]: gain estimation, score functions and variable selection;
//! * [`engine`]: best-bound branch-and-bound driving a rule;
//! * [`generators`]: seeded random instance families;
//! * [`bench`]: campaign runner and summary metrics.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod bench;
pub mod engine;
pub mod generators;
pub mod model;
pub mod rules;
pub mod simplex;
