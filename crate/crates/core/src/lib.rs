//! Automated architecture search for quantum GANs.
//!
//! A declarative search configuration is expanded into a grid of training
//! experiments, executed by a pool of workers that talk to each other only
//! through a write-once object store, and aggregated into per-configuration
//! statistics from which the best generator is selected and persisted.
//!
//! * [`quantum`]: statevector simulator, ansatz families, transpiled depth,
//!   entangling capability.
//! * [`gan`]: classical discriminator, parameter-shift generator gradients,
//!   ADAM, the training loop and the model file format.
//! * [`metrics`]: relative entropy, KS statistic, aggregation, selection.
//! * [`data`]: CSV ingest, equal-width discretization, resampling.
//! * [`orchestrator`]: configuration, grid, scheduling, store, pipelines.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod gan;
pub mod metrics;
pub mod orchestrator;
pub mod quantum;
pub mod seed;
