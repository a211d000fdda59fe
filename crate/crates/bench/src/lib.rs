// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benches.

use std::path::PathBuf;

use relplace_core::config::{load_config, ExperimentConfig};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/configs")
}

/// 7 InPs x 3 servers, 4 service types with 3 to 6 VNFs.
pub fn paper_setup() -> ExperimentConfig {
    load_config(configs().join("paper_setup.json")).expect("paper_setup.json")
}

/// 2 types, 3 InPs x 2 servers.
pub fn reduced_setup() -> ExperimentConfig {
    load_config(configs().join("reduced_setup.json")).expect("reduced_setup.json")
}
