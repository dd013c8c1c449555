//! memlab: execution, analysis and translation tools for systems of mobile
//! membranes.
//!
//! A membrane system is a tree of labeled compartments holding multisets of
//! objects. Rules move membranes (endocytosis, exocytosis and their forced and
//! mutual variants), rewrite objects in place, or — in the objects-on-surface
//! flavour — create, fuse and engulf membranes (pino, surface exo, phago).
//! Steps are maximally parallel: a step applies a multiset of rule instances
//! to which no further compatible instance can be added.
//!
//! The crate provides:
//!
//! * [`config`] — the configuration model: membrane trees, canonical keys for
//!   structural congruence, dissolution.
//! * [`rules`] + [`parser`] + [`validate`] — the `.mem` rule language.
//! * [`engine`] — instance matching, maximal-step enumeration, simulation
//!   strategies and traces.
//! * [`timed`] — lifetimes on objects and membranes (tick / expire).
//! * [`reach`] — exact reachability for the pure-mobility subclass, bounded
//!   search otherwise.
//! * [`ambient`] / [`brane`] — safe mobile ambients and the pino/exo/phago
//!   brane fragment: parsers and one-step reducers.
//! * [`translate`] + [`correspond`] — compilation of both calculi into
//!   membrane systems and the operational-correspondence checker.

pub mod ambient;
pub mod brane;
pub mod config;
pub mod correspond;
pub mod engine;
pub mod multiset;
pub mod parser;
pub mod reach;
pub mod rules;
pub mod timed;
pub mod translate;
pub mod validate;

pub use config::{Configuration, Membrane, Path};
pub use multiset::{Multiset, Obj, Symbol, Timer};
pub use rules::{Rule, SystemDefinition, SystemKind};
