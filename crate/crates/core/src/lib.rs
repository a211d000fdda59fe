// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Reliability-aware service placement for NFV.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`]: infrastructure, service types, placement plans and the
//!   closed-form cost / reliability computations.
//! - [`trellis`]: the Viterbi-style static placement algorithm (VRSSP) and
//!   its output pass.
//! - [`mdp`]: state indexing, feasible actions, transition model and reward.
//! - [`policy`]: value iteration with idle-resource estimation and
//!   arrangement search (VVI), producing a stationary [`policy::Policy`].
//! - [`baselines`]: the static comparison heuristics.
//! - [`sim`]: the slotted environment and its metrics.
//! - [`config`]: the JSON experiment configuration shared by the CLI.
//! - [`oracle`]: exhaustive search over tiny instances, used as a test oracle.

// `!(x >= 0.0)` is used on purpose so NaN fails validation; `is_none_or` is
// newer than the MSRV.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::unnecessary_map_or)]

pub mod baselines;
pub mod config;
pub mod error;
pub mod mdp;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod sim;
pub mod trellis;

pub use error::{Error, Result};
pub use model::{
    CostBreakdown, Infrastructure, PlacementPlan, ResourceLedger, ServerId, ServiceCatalog, ServicePlacement,
    ServiceType, VnfAssignment,
};
pub use trellis::{run_vrssp, VrsspInput, VrsspOutput};
