//! Finite-model laboratory for pre-uniform spaces.
//!
//! A pre-uniformity relaxes the classical uniformity axioms by dropping
//! closure under binary intersection; its induced structures (pre-topologies,
//! which need not be closed under finite intersections, and pre-proximities)
//! are studied here on small finite carriers, where every axiom, theorem and
//! counterexample claim is decidable by exhaustive computation.
//!
//! The crate is organised bottom-up:
//!
//! * [`relcore`] — binary relations on a finite carrier as bitmasks;
//! * [`pretop`] — pre-topologies (union-closed open families) and separation;
//! * [`preunif`] — entourage families, axiom checks, induced pre-topologies,
//!   covers, products, coreflections;
//! * [`metrics`] — exact-rational pseudometrics and chain metrization;
//! * [`preprox`] — pre-proximities and their compatibility theory;
//! * [`groups`] — pre-topological groups and the left-cover pipeline;
//! * [`search`] — canonical enumeration, property hunts, certificates;
//! * [`interchange`] — the JSON document format shared with the CLI and FFI.

pub mod groups;
pub mod interchange;
pub mod metrics;
pub mod preprox;
pub mod pretop;
pub mod preunif;
pub mod relcore;
pub mod search;
