// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Domain model: infrastructure providers and their servers, service types,
//! realized placement plans, and the closed-form cost and reliability
//! functions every other module builds on.
//!
//! Servers are addressed by a global [`ServerId`] assigned InP-major: all
//! servers of the first InP, then all servers of the second, and so on.
//! Per-server resource vectors are stored flat as `server * num_resources + j`.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Absolute tolerance for comparing costs.
pub const COST_TOL: f64 = 1e-9;
/// Absolute tolerance for comparing probabilities.
pub const PROB_TOL: f64 = 1e-12;
/// Penalty weight used when a service type does not specify one.
pub const DEFAULT_PENALTY: f64 = 1e6;

/// Global server index.
pub type ServerId = usize;

/// `I(cap - failure_prob)`: a service exactly at its cap counts as reliable.
pub fn meets_reliability(failure_prob: f64, cap: f64) -> bool {
    cap - failure_prob >= -PROB_TOL
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inp {
    pub failure_prob: f64,
    /// One capacity vector per server, `|R|` entries each.
    pub servers: Vec<Vec<u32>>,
}

/// How link cost and bandwidth between server pairs are given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LinkSpec {
    /// Same cost for every pair inside one InP and another for pairs across
    /// InPs. Bandwidth is uniform.
    Uniform { same_inp_cost: f64, cross_inp_cost: f64, bandwidth: f64 },
    /// Full `|S| x |S|` tables over global server ids.
    Matrix { cost: Vec<Vec<f64>>, bandwidth: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfrastructureSpec {
    pub inps: Vec<Inp>,
    pub links: LinkSpec,
    /// Per-resource weights, each in `[0, 1]`.
    pub alpha: Vec<f64>,
    pub beta: f64,
    pub v_base: f64,
    /// `deployment_cost[inp][vnf_type]`.
    pub deployment_cost: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ServerInfo {
    pub inp: usize,
    /// Index of the server inside its InP.
    pub local: usize,
}

/// Validated infrastructure with derived cost tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InfrastructureSpec", into = "InfrastructureSpec")]
pub struct Infrastructure {
    spec: InfrastructureSpec,
    servers: Vec<ServerInfo>,
    capacity: Vec<u32>,
    unit_cost: Vec<f64>,
    link_cost: Vec<f64>,
    link_bandwidth: Vec<f64>,
    num_resources: usize,
    num_vnf_types: usize,
}

impl TryFrom<InfrastructureSpec> for Infrastructure {
    type Error = Error;

    fn try_from(spec: InfrastructureSpec) -> Result<Self> {
        Infrastructure::new(spec)
    }
}

impl From<Infrastructure> for InfrastructureSpec {
    fn from(infra: Infrastructure) -> Self {
        infra.spec
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

impl Infrastructure {
    pub fn new(spec: InfrastructureSpec) -> Result<Self> {
        if spec.inps.is_empty() {
            return Err(invalid("infrastructure needs at least one InP"));
        }
        let num_resources = spec.alpha.len();
        if num_resources == 0 {
            return Err(invalid("alpha must list at least one resource type"));
        }
        for (j, a) in spec.alpha.iter().enumerate() {
            if !(0.0..=1.0).contains(a) {
                return Err(invalid(format!("alpha[{j}] = {a} is outside [0, 1]")));
            }
        }
        if !(spec.beta > 0.0) {
            return Err(invalid(format!("beta must be > 0, got {}", spec.beta)));
        }
        let mut servers = Vec::new();
        let mut capacity = Vec::new();
        for (i, inp) in spec.inps.iter().enumerate() {
            if !(inp.failure_prob > 0.0 && inp.failure_prob < 1.0) {
                return Err(invalid(format!("inps[{i}].failure_prob = {} is outside (0, 1)", inp.failure_prob)));
            }
            if inp.failure_prob > spec.v_base + PROB_TOL {
                return Err(invalid(format!(
                    "inps[{i}].failure_prob = {} exceeds v_base = {}",
                    inp.failure_prob, spec.v_base
                )));
            }
            if inp.servers.is_empty() {
                return Err(invalid(format!("inps[{i}] has no servers")));
            }
            for (s, cap) in inp.servers.iter().enumerate() {
                if cap.len() != num_resources {
                    return Err(invalid(format!(
                        "inps[{i}].servers[{s}] has {} resource entries, expected {num_resources}",
                        cap.len()
                    )));
                }
                servers.push(ServerInfo { inp: i, local: s });
                capacity.extend_from_slice(cap);
            }
        }
        if spec.deployment_cost.len() != spec.inps.len() {
            return Err(invalid(format!(
                "deployment_cost has {} rows, expected one per InP ({})",
                spec.deployment_cost.len(),
                spec.inps.len()
            )));
        }
        let num_vnf_types = spec.deployment_cost[0].len();
        if num_vnf_types == 0 {
            return Err(invalid("deployment_cost must list at least one VNF type"));
        }
        for (i, row) in spec.deployment_cost.iter().enumerate() {
            if row.len() != num_vnf_types {
                return Err(invalid(format!(
                    "deployment_cost[{i}] has {} entries, expected {num_vnf_types}",
                    row.len()
                )));
            }
            if row.iter().any(|c| !(*c >= 0.0)) {
                return Err(invalid(format!("deployment_cost[{i}] has a negative entry")));
            }
        }

        let n = servers.len();
        let mut link_cost = vec![0.0; n * n];
        let mut link_bandwidth = vec![0.0; n * n];
        match &spec.links {
            LinkSpec::Uniform { same_inp_cost, cross_inp_cost, bandwidth } => {
                if *same_inp_cost < 0.0 || *cross_inp_cost < 0.0 || *bandwidth < 0.0 {
                    return Err(invalid("link cost and bandwidth must be >= 0"));
                }
                for a in 0..n {
                    for b in 0..n {
                        if a == b {
                            continue;
                        }
                        link_cost[a * n + b] =
                            if servers[a].inp == servers[b].inp { *same_inp_cost } else { *cross_inp_cost };
                        link_bandwidth[a * n + b] = *bandwidth;
                    }
                }
            }
            LinkSpec::Matrix { cost, bandwidth } => {
                for (name, table, out) in
                    [("cost", cost, &mut link_cost), ("bandwidth", bandwidth, &mut link_bandwidth)]
                {
                    if table.len() != n || table.iter().any(|r| r.len() != n) {
                        return Err(invalid(format!("links.{name} must be {n} x {n}")));
                    }
                    for a in 0..n {
                        if table[a][a] != 0.0 {
                            return Err(invalid(format!("links.{name}[{a}][{a}] must be 0")));
                        }
                        for b in 0..n {
                            if table[a][b] < 0.0 {
                                return Err(invalid(format!("links.{name}[{a}][{b}] is negative")));
                            }
                            if table[a][b] != table[b][a] {
                                return Err(invalid(format!("links.{name} is not symmetric at ({a}, {b})")));
                            }
                            out[a * n + b] = table[a][b];
                        }
                    }
                }
            }
        }

        let unit_cost = spec
            .inps
            .iter()
            .flat_map(|inp| spec.alpha.iter().map(move |a| a * (spec.beta * (spec.v_base - inp.failure_prob)).exp()))
            .collect();

        Ok(Infrastructure {
            servers,
            capacity,
            unit_cost,
            link_cost,
            link_bandwidth,
            num_resources,
            num_vnf_types,
            spec,
        })
    }

    pub fn spec(&self) -> &InfrastructureSpec {
        &self.spec
    }

    pub fn num_inps(&self) -> usize {
        self.spec.inps.len()
    }

    pub fn num_servers(&self) -> usize {
        self.servers.len()
    }

    pub fn num_resources(&self) -> usize {
        self.num_resources
    }

    pub fn num_vnf_types(&self) -> usize {
        self.num_vnf_types
    }

    pub fn server(&self, id: ServerId) -> ServerInfo {
        self.servers[id]
    }

    pub fn inp_failure_prob(&self, inp: usize) -> f64 {
        self.spec.inps[inp].failure_prob
    }

    /// Failure probability of a server (the one of its InP).
    pub fn failure_prob(&self, id: ServerId) -> f64 {
        self.spec.inps[self.servers[id].inp].failure_prob
    }

    pub fn capacity(&self, id: ServerId) -> &[u32] {
        &self.capacity[id * self.num_resources..(id + 1) * self.num_resources]
    }

    /// Flat `|S| x |R|` capacity vector.
    pub fn capacities(&self) -> &[u32] {
        &self.capacity
    }

    /// `C_{i,j} = alpha_j * exp(beta * (v_base - v_i))`.
    pub fn server_unit_cost(&self, inp: usize, resource: usize) -> Result<f64> {
        check_index("InP", inp, self.num_inps())?;
        check_index("resource", resource, self.num_resources)?;
        Ok(self.unit_cost[inp * self.num_resources + resource])
    }

    /// Unchecked variant of [`server_unit_cost`](Self::server_unit_cost) for hot loops.
    #[inline]
    pub fn unit_cost(&self, inp: usize, resource: usize) -> f64 {
        self.unit_cost[inp * self.num_resources + resource]
    }

    #[inline]
    pub fn link_cost(&self, a: ServerId, b: ServerId) -> f64 {
        self.link_cost[a * self.servers.len() + b]
    }

    #[inline]
    pub fn link_bandwidth(&self, a: ServerId, b: ServerId) -> f64 {
        self.link_bandwidth[a * self.servers.len() + b]
    }

    #[inline]
    pub fn deployment_cost(&self, inp: usize, vnf_type: usize) -> f64 {
        self.spec.deployment_cost[inp][vnf_type]
    }

    /// Server plus deployment cost of hosting one VNF instance on `server`.
    pub fn hosting_cost(&self, server: ServerId, vnf: &Vnf) -> f64 {
        let inp = self.servers[server].inp;
        let resources: f64 = vnf.demands.iter().enumerate().map(|(j, r)| f64::from(*r) * self.unit_cost(inp, j)).sum();
        resources + self.deployment_cost(inp, vnf.vnf_type)
    }
}

/// One VNF of a service function chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vnf {
    pub vnf_type: usize,
    pub demands: Vec<u32>,
}

fn default_penalty() -> f64 {
    DEFAULT_PENALTY
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceType {
    /// Highest tolerable failure probability of a placed service.
    pub failure_cap: f64,
    /// Probability that an active service leaves at the end of a slot.
    pub departure_prob: f64,
    pub bandwidth: f64,
    pub vnfs: Vec<Vnf>,
    /// `arrival_pmf[m] = Pr(m arrivals in a slot)`.
    pub arrival_pmf: Vec<f64>,
    pub admission_reward: f64,
    #[serde(default = "default_penalty")]
    pub penalty: f64,
    pub sigma_max: u32,
}

impl ServiceType {
    pub fn num_vnfs(&self) -> usize {
        self.vnfs.len()
    }

    pub fn lambda_max(&self) -> u32 {
        (self.arrival_pmf.len() - 1) as u32
    }
}

/// Ordered list of service types; type `l` is `catalog[l]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ServiceCatalog(pub Vec<ServiceType>);

impl std::ops::Deref for ServiceCatalog {
    type Target = [ServiceType];

    fn deref(&self) -> &[ServiceType] {
        &self.0
    }
}

impl ServiceCatalog {
    /// Checks the type invariants and that VNF types and resource counts fit `infra`.
    pub fn validate(&self, infra: &Infrastructure) -> Result<()> {
        if self.0.is_empty() {
            return Err(invalid("service catalog is empty"));
        }
        for (l, st) in self.0.iter().enumerate() {
            let here = |msg: String| invalid(format!("service_types[{l}]: {msg}"));
            if !(st.failure_cap > 0.0 && st.failure_cap < 1.0) {
                return Err(here(format!("failure_cap = {} is outside (0, 1)", st.failure_cap)));
            }
            if !(st.departure_prob > 0.0 && st.departure_prob <= 1.0) {
                return Err(here(format!("departure_prob = {} is outside (0, 1]", st.departure_prob)));
            }
            if !(st.bandwidth >= 0.0) {
                return Err(here("bandwidth must be >= 0".into()));
            }
            if st.vnfs.is_empty() {
                return Err(here("needs at least one VNF".into()));
            }
            for (u, vnf) in st.vnfs.iter().enumerate() {
                if vnf.vnf_type >= infra.num_vnf_types() {
                    return Err(here(format!(
                        "vnfs[{u}].vnf_type = {} but only {} VNF types have deployment costs",
                        vnf.vnf_type,
                        infra.num_vnf_types()
                    )));
                }
                if vnf.demands.len() != infra.num_resources() {
                    return Err(here(format!(
                        "vnfs[{u}].demands has {} entries, expected {}",
                        vnf.demands.len(),
                        infra.num_resources()
                    )));
                }
            }
            if st.arrival_pmf.is_empty() || st.arrival_pmf.iter().any(|p| !(*p >= 0.0)) {
                return Err(here("arrival_pmf must be a non-empty list of non-negative numbers".into()));
            }
            let total: f64 = st.arrival_pmf.iter().sum();
            if (total - 1.0).abs() > PROB_TOL {
                return Err(here(format!("arrival_pmf sums to {total}, expected 1")));
            }
            if !(st.penalty > 0.0) {
                return Err(here(format!("penalty = {} must be > 0", st.penalty)));
            }
            if !(st.admission_reward >= 0.0) {
                return Err(here("admission_reward must be >= 0".into()));
            }
        }
        Ok(())
    }
}

/// Main and optional backup server of one VNF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnfAssignment {
    pub main: ServerId,
    pub backup: Option<ServerId>,
}

impl VnfAssignment {
    pub fn main_only(main: ServerId) -> Self {
        VnfAssignment { main, backup: None }
    }

    pub fn servers(&self) -> impl Iterator<Item = ServerId> {
        std::iter::once(self.main).chain(self.backup)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ServicePlacement {
    pub service_type: usize,
    pub vnfs: Vec<VnfAssignment>,
}

impl ServicePlacement {
    pub fn backup_count(&self) -> usize {
        self.vnfs.iter().filter(|a| a.backup.is_some()).count()
    }

    /// Flat `|S| x |R|` resource usage of this service.
    pub fn usage(&self, infra: &Infrastructure, catalog: &ServiceCatalog) -> Vec<u32> {
        let r = infra.num_resources();
        let mut usage = vec![0u32; infra.num_servers() * r];
        let st = &catalog[self.service_type];
        for (assignment, vnf) in self.vnfs.iter().zip(&st.vnfs) {
            for server in assignment.servers() {
                for (j, d) in vnf.demands.iter().enumerate() {
                    usage[server * r + j] += d;
                }
            }
        }
        usage
    }

    /// Links used between consecutive VNFs, as `(a, b)` with `a < b`, each
    /// carrying the service bandwidth once per (sender, receiver) instance pair.
    pub fn link_pairs(&self) -> Vec<(ServerId, ServerId)> {
        let mut pairs = Vec::new();
        for w in self.vnfs.windows(2) {
            for a in w[0].servers() {
                for b in w[1].servers() {
                    if a != b {
                        pairs.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        pairs
    }
}

/// A set of placed services.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlacementPlan {
    pub services: Vec<ServicePlacement>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub server: f64,
    pub forwarding: f64,
    pub deployment: f64,
    pub total: f64,
}

impl Add for CostBreakdown {
    type Output = CostBreakdown;

    fn add(self, o: CostBreakdown) -> CostBreakdown {
        CostBreakdown {
            server: self.server + o.server,
            forwarding: self.forwarding + o.forwarding,
            deployment: self.deployment + o.deployment,
            total: self.total + o.total,
        }
    }
}

impl AddAssign for CostBreakdown {
    fn add_assign(&mut self, o: CostBreakdown) {
        *self = *self + o;
    }
}

fn check_placement(placement: &ServicePlacement, infra: &Infrastructure, catalog: &ServiceCatalog) -> Result<()> {
    check_index("service type", placement.service_type, catalog.len())?;
    let st = &catalog[placement.service_type];
    if placement.vnfs.len() != st.vnfs.len() {
        return Err(Error::InvalidInput(format!(
            "placement of a type-{} service has {} VNFs, the type has {}",
            placement.service_type,
            placement.vnfs.len(),
            st.vnfs.len()
        )));
    }
    for a in &placement.vnfs {
        for s in a.servers() {
            check_index("server", s, infra.num_servers())?;
        }
    }
    Ok(())
}

/// Cost of one placed service: resources times unit cost and deployment for
/// every assigned server (main and backup), plus forwarding between every
/// instance of VNF `u` and every instance of VNF `u + 1`.
pub fn service_cost(
    placement: &ServicePlacement,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> Result<CostBreakdown> {
    check_placement(placement, infra, catalog)?;
    let st = &catalog[placement.service_type];
    let mut cost = CostBreakdown::default();
    for (assignment, vnf) in placement.vnfs.iter().zip(&st.vnfs) {
        for server in assignment.servers() {
            let inp = infra.server(server).inp;
            cost.server +=
                vnf.demands.iter().enumerate().map(|(j, r)| f64::from(*r) * infra.unit_cost(inp, j)).sum::<f64>();
            cost.deployment += infra.deployment_cost(inp, vnf.vnf_type);
        }
    }
    for w in placement.vnfs.windows(2) {
        for a in w[0].servers() {
            for b in w[1].servers() {
                cost.forwarding += st.bandwidth * infra.link_cost(a, b);
            }
        }
    }
    cost.total = cost.server + cost.forwarding + cost.deployment;
    Ok(cost)
}

pub fn placement_cost(plan: &PlacementPlan, infra: &Infrastructure, catalog: &ServiceCatalog) -> Result<CostBreakdown> {
    plan.services.iter().try_fold(CostBreakdown::default(), |acc, p| Ok(acc + service_cost(p, infra, catalog)?))
}

/// Failure probability of a VNF: `v_main`, or `v_main * v_backup` with a backup.
pub fn vnf_failure_probability(assignment: &VnfAssignment, infra: &Infrastructure) -> f64 {
    let main = infra.failure_prob(assignment.main);
    match assignment.backup {
        Some(b) => main * infra.failure_prob(b),
        None => main,
    }
}

/// `1 - prod_u (1 - f_u)` with VNF failures independent.
pub fn service_failure_probability(assignments: &[VnfAssignment], infra: &Infrastructure) -> f64 {
    let running: f64 = assignments.iter().map(|a| 1.0 - vnf_failure_probability(a, infra)).product();
    1.0 - running
}

/// Idle server resources and link bandwidth.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceLedger {
    num_servers: usize,
    num_resources: usize,
    server_idle: Vec<u32>,
    link_idle: Vec<f64>,
}

impl ResourceLedger {
    /// Everything idle.
    pub fn full(infra: &Infrastructure) -> Self {
        let n = infra.num_servers();
        let mut link_idle = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                link_idle[a * n + b] = infra.link_bandwidth(a, b);
            }
        }
        ResourceLedger {
            num_servers: n,
            num_resources: infra.num_resources(),
            server_idle: infra.capacities().to_vec(),
            link_idle,
        }
    }

    /// Ledger with the given server idle vector and full link bandwidth.
    pub fn with_server_idle(infra: &Infrastructure, idle: Vec<u32>) -> Result<Self> {
        let mut ledger = Self::full(infra);
        if idle.len() != ledger.server_idle.len() {
            return Err(Error::InvalidInput(format!(
                "idle vector has {} entries, expected {}",
                idle.len(),
                ledger.server_idle.len()
            )));
        }
        for (k, (i, c)) in idle.iter().zip(infra.capacities()).enumerate() {
            if i > c {
                return Err(Error::InvalidInput(format!(
                    "idle {i} exceeds capacity {c} at server {} resource {}",
                    k / ledger.num_resources,
                    k % ledger.num_resources
                )));
            }
        }
        ledger.server_idle = idle;
        Ok(ledger)
    }

    pub fn server_idle(&self) -> &[u32] {
        &self.server_idle
    }

    pub fn idle(&self, server: ServerId, resource: usize) -> u32 {
        self.server_idle[server * self.num_resources + resource]
    }

    pub fn link_idle(&self, a: ServerId, b: ServerId) -> f64 {
        self.link_idle[a * self.num_servers + b]
    }

    pub fn fits(&self, server: ServerId, demands: &[u32]) -> bool {
        demands.iter().enumerate().all(|(j, d)| self.server_idle[server * self.num_resources + j] >= *d)
    }

    /// Take `demands` from one server; fails without change if it does not fit.
    pub fn take(&mut self, server: ServerId, demands: &[u32]) -> Result<()> {
        if !self.fits(server, demands) {
            return Err(Error::LedgerInconsistency(format!("server {server} cannot host demand {demands:?}")));
        }
        for (j, d) in demands.iter().enumerate() {
            self.server_idle[server * self.num_resources + j] -= d;
        }
        Ok(())
    }

    pub fn give_back(&mut self, server: ServerId, demands: &[u32], infra: &Infrastructure) -> Result<()> {
        let cap = infra.capacity(server);
        for (j, d) in demands.iter().enumerate() {
            let slot = &mut self.server_idle[server * self.num_resources + j];
            if u64::from(*slot) + u64::from(*d) > u64::from(cap[j]) {
                return Err(Error::LedgerInconsistency(format!(
                    "releasing {d} on server {server} resource {j} exceeds capacity {}",
                    cap[j]
                )));
            }
            *slot += d;
        }
        Ok(())
    }

    /// Takes a flat `|S| x |R|` usage vector and the service's link bandwidth.
    pub fn allocate(
        &mut self,
        placement: &ServicePlacement,
        infra: &Infrastructure,
        catalog: &ServiceCatalog,
    ) -> Result<()> {
        let usage = placement.usage(infra, catalog);
        if usage.iter().zip(&self.server_idle).any(|(u, i)| u > i) {
            return Err(Error::LedgerInconsistency("placement exceeds idle server resources".into()));
        }
        for (i, u) in self.server_idle.iter_mut().zip(&usage) {
            *i -= u;
        }
        let bw = catalog[placement.service_type].bandwidth;
        for (a, b) in placement.link_pairs() {
            self.link_idle[a * self.num_servers + b] -= bw;
            self.link_idle[b * self.num_servers + a] -= bw;
        }
        Ok(())
    }

    pub fn release(
        &mut self,
        placement: &ServicePlacement,
        infra: &Infrastructure,
        catalog: &ServiceCatalog,
    ) -> Result<()> {
        let usage = placement.usage(infra, catalog);
        for (k, (i, u)) in self.server_idle.iter_mut().zip(&usage).enumerate() {
            let cap = infra.capacities()[k];
            if u64::from(*i) + u64::from(*u) > u64::from(cap) {
                return Err(Error::LedgerInconsistency(format!(
                    "release overflows capacity at server {} resource {}",
                    k / self.num_resources,
                    k % self.num_resources
                )));
            }
            *i += u;
        }
        let bw = catalog[placement.service_type].bandwidth;
        for (a, b) in placement.link_pairs() {
            self.link_idle[a * self.num_servers + b] += bw;
            self.link_idle[b * self.num_servers + a] += bw;
        }
        Ok(())
    }
}

/// One violated placement constraint.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Main/backup rule: backup equals main, or a server index is dangling.
    Placement { service: usize, vnf: usize, reason: String },
    /// Aggregate demand above idle resources.
    ServerCapacity { server: ServerId, resource: usize, demand: u64, idle: u32 },
    /// Aggregate link demand above idle bandwidth.
    Bandwidth { a: ServerId, b: ServerId, demand: f64, idle: f64 },
    /// Consecutive VNF instances on distinct servers with no link between them.
    Forwarding { service: usize, vnf: usize, from: ServerId, to: ServerId },
    /// Service failure probability above its cap.
    Reliability { service: usize, failure_prob: f64, cap: f64 },
}

/// Lists every violated constraint of `plan` against `ledger`; empty iff the
/// plan is feasible.
pub fn validate_plan(
    plan: &PlacementPlan,
    ledger: &ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = infra.num_servers();
    let r = infra.num_resources();
    let mut demand = vec![0u64; n * r];
    let mut link_demand: BTreeMap<(ServerId, ServerId), f64> = BTreeMap::new();

    for (k, p) in plan.services.iter().enumerate() {
        if p.service_type >= catalog.len() {
            out.push(Violation::Placement {
                service: k,
                vnf: 0,
                reason: format!("unknown service type {}", p.service_type),
            });
            continue;
        }
        let st = &catalog[p.service_type];
        if p.vnfs.len() != st.vnfs.len() {
            out.push(Violation::Placement {
                service: k,
                vnf: 0,
                reason: format!("{} VNFs assigned, type has {}", p.vnfs.len(), st.vnfs.len()),
            });
            continue;
        }
        let mut dangling = false;
        for (u, a) in p.vnfs.iter().enumerate() {
            for s in a.servers() {
                if s >= n {
                    out.push(Violation::Placement { service: k, vnf: u, reason: format!("server {s} does not exist") });
                    dangling = true;
                }
            }
            if a.backup == Some(a.main) {
                out.push(Violation::Placement {
                    service: k,
                    vnf: u,
                    reason: format!("backup equals main server {}", a.main),
                });
            }
        }
        if dangling {
            continue;
        }
        for (a, vnf) in p.vnfs.iter().zip(&st.vnfs) {
            for s in a.servers() {
                for (j, d) in vnf.demands.iter().enumerate() {
                    demand[s * r + j] += u64::from(*d);
                }
            }
        }
        for (u, w) in p.vnfs.windows(2).enumerate() {
            for from in w[0].servers() {
                for to in w[1].servers() {
                    if from == to {
                        continue;
                    }
                    if infra.link_bandwidth(from, to) <= 0.0 {
                        out.push(Violation::Forwarding { service: k, vnf: u, from, to });
                    }
                    *link_demand.entry((from.min(to), from.max(to))).or_default() += st.bandwidth;
                }
            }
        }
        let e = service_failure_probability(&p.vnfs, infra);
        if !meets_reliability(e, st.failure_cap) {
            out.push(Violation::Reliability { service: k, failure_prob: e, cap: st.failure_cap });
        }
    }

    for (idx, d) in demand.iter().enumerate() {
        let idle = ledger.server_idle[idx];
        if *d > u64::from(idle) {
            out.push(Violation::ServerCapacity { server: idx / r, resource: idx % r, demand: *d, idle });
        }
    }
    for ((a, b), d) in link_demand {
        let idle = ledger.link_idle(a, b);
        if d > idle + COST_TOL {
            out.push(Violation::Bandwidth { a, b, demand: d, idle });
        }
    }
    out
}
