//! A desk-scale data-stream kernel in which a stream is an evaluable
//! function from a discrete time domain to a pluggable base container
//! (bag, set, option, identity, or sequence).
//!
//! The crate has three layers:
//!
//! - [`base`] and [`stream`]: the container abstraction with its monad and
//!   monoid structure, and streams built on top of it together with the
//!   snapshot-reducible operators (map, selection, cross product, union).
//! - [`physical`], [`windows`], [`patterns`], [`partition`]: physical table
//!   representations with snapshot/reconstruct pairs and mechanically derived
//!   operators, window operators, regex-style pattern matching over tagged
//!   event streams, and keyed partitioned evaluation.
//! - [`laws`]: a reusable checking harness that verifies the algebraic
//!   claims (monad laws, monoid laws, snapshot-reducibility commutation,
//!   right-inverse round trips) by exhaustive evaluation over finite
//!   carriers and finite time domains.
//!
//! Everything is immutable after construction and safe to share between
//! threads; composed streams memoize per-instant results internally.

pub mod base;
pub mod error;
pub mod kinds;
pub mod laws;
pub mod partition;
pub mod patterns;
pub mod physical;
pub mod stream;
pub mod time;
pub mod windows;

pub use base::{Bag, BagBase, Base, EqSet, IdentityBase, MaybeBase, MonoidBase, SeqBase, SetBase, Sum, Value};
pub use error::Error;
pub use stream::{SnapshotFn, Stream};
pub use time::{BiTime, FiniteDomain, TimeDomain, TimeInterval, TimePoint};
