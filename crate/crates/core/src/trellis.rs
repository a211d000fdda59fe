// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Viterbi-style static placement (VRSSP).
//!
//! A batch of `K` services, fed in the order given by an arrangement, is
//! unrolled into `2 * sum(U)` stages: for every VNF one stage picks the main
//! server and the next one picks the backup (or no backup). Stage states are
//! candidate servers; state `0` means "no server" and exists only on backup
//! stages. Every state keeps one survived path: the cheapest predecessor
//! under the decision metric (hosting cost + routing + reliability penalty +
//! accumulated cost), together with the path's reliability and a copy of the
//! server resources left along it.
//!
//! Stages are 0-based here: stage `m` is a main stage when `m` is even.

use crate::error::{Error, Result};
use crate::model::{
    meets_reliability, Infrastructure, PlacementPlan, ServerId, ServiceCatalog, ServicePlacement, VnfAssignment,
};

/// Trellis state id: `0` is "no server", `s + 1` is server `s`.
pub type StateId = usize;

pub const NO_SERVER: StateId = 0;

#[inline]
fn server_of(x: StateId) -> Option<ServerId> {
    x.checked_sub(1)
}

/// Input batch: the action, the arrangement the services are fed in and the
/// idle-resource snapshot (flat `|S| x |R|`).
#[derive(Clone, Debug, PartialEq)]
pub struct VrsspInput {
    pub action: Vec<u32>,
    pub arrangement: Vec<usize>,
    pub snapshot: Vec<u32>,
}

impl VrsspInput {
    /// Checks that `arrangement` holds exactly `action[l]` copies of each `l`
    /// and that the snapshot fits `infra`.
    pub fn new(action: Vec<u32>, arrangement: Vec<usize>, snapshot: Vec<u32>, infra: &Infrastructure) -> Result<Self> {
        let mut counts = vec![0u32; action.len()];
        for &l in &arrangement {
            if l >= action.len() {
                return Err(Error::InvalidInput(format!("arrangement references type {l}")));
            }
            counts[l] += 1;
        }
        if counts != action {
            return Err(Error::InvalidInput(format!(
                "arrangement {arrangement:?} is not a permutation of action {action:?}"
            )));
        }
        if snapshot.len() != infra.capacities().len() {
            return Err(Error::InvalidInput(format!(
                "snapshot has {} entries, expected {}",
                snapshot.len(),
                infra.capacities().len()
            )));
        }
        if snapshot.iter().zip(infra.capacities()).any(|(s, c)| s > c) {
            return Err(Error::InvalidInput("snapshot exceeds server capacity".into()));
        }
        Ok(VrsspInput { action, arrangement, snapshot })
    }

    /// Arrangement in ascending type order.
    pub fn type_ordered(action: Vec<u32>, snapshot: Vec<u32>, infra: &Infrastructure) -> Result<Self> {
        let arrangement = action.iter().enumerate().flat_map(|(l, &a)| std::iter::repeat(l).take(a as usize)).collect();
        VrsspInput::new(action, arrangement, snapshot, infra)
    }

    /// Arrangement as given; the action is derived from it.
    pub fn from_arrangement(
        arrangement: Vec<usize>,
        num_types: usize,
        snapshot: Vec<u32>,
        infra: &Infrastructure,
    ) -> Result<Self> {
        let mut action = vec![0u32; num_types];
        for &l in &arrangement {
            if l >= num_types {
                return Err(Error::InvalidInput(format!("arrangement references type {l}")));
            }
            action[l] += 1;
        }
        VrsspInput::new(action, arrangement, snapshot, infra)
    }
}

/// `L_V = sum_k 2 * U(rho_k)`.
pub fn stage_count(arrangement: &[usize], catalog: &ServiceCatalog) -> usize {
    arrangement.iter().map(|&l| 2 * catalog[l].num_vnfs()).sum()
}

/// Candidate states of stage `m`: every server on main stages, plus the
/// no-server state on backup stages.
pub fn stage_states(m: usize, infra: &Infrastructure) -> Vec<StateId> {
    let first = if m % 2 == 0 { 1 } else { 0 };
    (first..=infra.num_servers()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StageInfo {
    /// Position of the service in the arrangement.
    pub service: usize,
    pub service_type: usize,
    /// 0-based VNF index inside the service.
    pub vnf: usize,
    pub is_main: bool,
}

/// Components of the decision metric for one transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionCost {
    /// Server resources plus deployment at the candidate.
    pub hosting: f64,
    pub routing: f64,
    pub penalty: f64,
    /// Accumulated cost of the predecessor.
    pub prior: f64,
}

impl TransitionCost {
    pub fn total(&self) -> f64 {
        self.hosting + self.routing + self.penalty + self.prior
    }
}

/// Survived-path data of every state of one stage.
#[derive(Clone, Debug)]
pub struct StageTable {
    pub alive: Vec<bool>,
    /// Accumulated placement cost of the survived path plus the reliability
    /// hinge of every completed service on it. Per-stage penalties are not
    /// kept.
    pub cost: Vec<f64>,
    /// Reliability of the current service along the survived path.
    pub reliability: Vec<f64>,
    /// Predecessor state at the previous stage.
    pub pred: Vec<StateId>,
    /// Flat `(|S| + 1) x |S| x |R|` remaining resources per state.
    pub remaining: Vec<u32>,
}

/// Per-service result of a valid run.
#[derive(Clone, Debug, PartialEq)]
pub struct ServiceOutcome {
    /// Position in the arrangement.
    pub position: usize,
    pub service_type: usize,
    /// 0-based rank among the batch's services of the same type.
    pub ordinal: usize,
    pub cost: f64,
    pub failure_prob: f64,
    /// Flat `|S| x |R|` resource usage.
    pub usage: Vec<u32>,
    pub placement: ServicePlacement,
}

impl ServiceOutcome {
    pub fn reliable(&self, catalog: &ServiceCatalog) -> bool {
        meets_reliability(self.failure_prob, catalog[self.service_type].failure_cap)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VrsspOutput {
    /// `false` when some main stage lost every state.
    pub valid: bool,
    /// Arrangement position of the service whose main stage emptied.
    pub blocked_at: Option<usize>,
    pub services: Vec<ServiceOutcome>,
}

impl VrsspOutput {
    pub fn invalid(blocked_at: usize) -> Self {
        VrsspOutput { valid: false, blocked_at: Some(blocked_at), services: Vec::new() }
    }

    pub fn plan(&self) -> PlacementPlan {
        PlacementPlan { services: self.services.iter().map(|s| s.placement.clone()).collect() }
    }

    /// Counts of reliable services per type.
    pub fn realized(&self, catalog: &ServiceCatalog) -> Vec<u32> {
        let mut counts = vec![0u32; catalog.len()];
        for s in self.services.iter().filter(|s| s.reliable(catalog)) {
            counts[s.service_type] += 1;
        }
        counts
    }
}

/// A trellis over one input batch.
pub struct Trellis<'a> {
    infra: &'a Infrastructure,
    catalog: &'a ServiceCatalog,
    input: &'a VrsspInput,
    info: Vec<StageInfo>,
    stages: Vec<StageTable>,
    blocked_at: Option<usize>,
    width: usize,
    block: usize,
}

impl<'a> Trellis<'a> {
    pub fn new(input: &'a VrsspInput, catalog: &'a ServiceCatalog, infra: &'a Infrastructure) -> Self {
        let mut info = Vec::with_capacity(stage_count(&input.arrangement, catalog));
        for (k, &l) in input.arrangement.iter().enumerate() {
            for u in 0..catalog[l].num_vnfs() {
                for is_main in [true, false] {
                    info.push(StageInfo { service: k, service_type: l, vnf: u, is_main });
                }
            }
        }
        Trellis {
            infra,
            catalog,
            input,
            info,
            stages: Vec::new(),
            blocked_at: None,
            width: infra.num_servers() + 1,
            block: infra.capacities().len(),
        }
    }

    pub fn stage_count(&self) -> usize {
        self.info.len()
    }

    pub fn stage_info(&self, m: usize) -> StageInfo {
        self.info[m]
    }

    /// Stages computed so far.
    pub fn stages(&self) -> &[StageTable] {
        &self.stages
    }

    #[inline]
    fn v(&self, x: StateId) -> f64 {
        server_of(x).map_or(1.0, |s| self.infra.failure_prob(s))
    }

    #[inline]
    fn link(&self, a: StateId, b: StateId) -> f64 {
        match (server_of(a), server_of(b)) {
            (Some(a), Some(b)) => self.infra.link_cost(a, b),
            _ => 0.0,
        }
    }

    /// Predecessor of `x` at stage `m`, or `None` before the first stage.
    #[inline]
    fn pred(&self, m: usize, x: StateId) -> StateId {
        self.stages[m].pred[x]
    }

    fn prior_cost(&self, m: usize, x1: StateId) -> f64 {
        if m == 0 {
            0.0
        } else {
            self.stages[m - 1].cost[x1]
        }
    }

    fn prior_reliability(&self, m: usize, x1: StateId) -> f64 {
        if m == 0 {
            1.0
        } else {
            self.stages[m - 1].reliability[x1]
        }
    }

    /// Remaining resources of `x1` at stage `m - 1` (the snapshot before stage 0).
    fn prior_remaining(&self, m: usize, x1: StateId) -> &[u32] {
        if m == 0 {
            &self.input.snapshot
        } else {
            &self.stages[m - 1].remaining[x1 * self.block..(x1 + 1) * self.block]
        }
    }

    /// Reliability of the current service after moving from `x1` (stage
    /// `m - 1`) to `x2` (stage `m`).
    pub fn transition_reliability(&self, m: usize, x1: StateId, x2: StateId) -> f64 {
        let info = self.info[m];
        if info.is_main {
            let up = 1.0 - self.v(x2);
            if info.vnf == 0 {
                up
            } else {
                self.prior_reliability(m, x1) * up
            }
        } else {
            // x1 is the main of this VNF.
            if x2 == NO_SERVER {
                return self.prior_reliability(m, x1);
            }
            let pair = 1.0 - self.v(x1) * self.v(x2);
            if info.vnf == 0 {
                pair
            } else {
                self.prior_reliability(m, x1) * pair / (1.0 - self.v(x1))
            }
        }
    }

    /// Decision metric components for moving from `x1` to `x2` at stage `m`.
    pub fn transition_cost(&self, m: usize, x1: StateId, x2: StateId) -> TransitionCost {
        let info = self.info[m];
        let st = &self.catalog[info.service_type];
        let vnf = &st.vnfs[info.vnf];
        let hosting = server_of(x2).map_or(0.0, |s| self.infra.hosting_cost(s, vnf));

        let routing = if x2 == NO_SERVER || info.vnf == 0 {
            0.0
        } else if info.is_main {
            // previous VNF's main and backup
            let prev_backup = x1;
            let prev_main = self.pred(m - 1, x1);
            st.bandwidth * (self.link(prev_main, x2) + self.link(prev_backup, x2))
        } else {
            let prev_backup = self.pred(m - 1, x1);
            let prev_main = self.pred(m - 2, prev_backup);
            st.bandwidth * (self.link(prev_backup, x2) + self.link(prev_main, x2))
        };

        let target = if x2 == NO_SERVER { 1.0 } else { 1.0 - st.failure_cap };
        let shortfall = target - self.transition_reliability(m, x1, x2);
        let penalty = if shortfall >= 0.0 { st.penalty * shortfall } else { 0.0 };

        TransitionCost { hosting, routing, penalty, prior: self.prior_cost(m, x1) }
    }

    /// Runs every stage. Returns `false` if some main stage lost every state.
    pub fn run(&mut self) -> bool {
        for m in 0..self.info.len() {
            if !self.step(m) {
                self.blocked_at = Some(self.info[m].service);
                return false;
            }
        }
        true
    }

    fn step(&mut self, m: usize) -> bool {
        let info = self.info[m];
        let demands = &self.catalog[info.service_type].vnfs[info.vnf].demands;
        let r = self.infra.num_resources();
        let width = self.width;
        let block = self.block;

        let predecessors: Vec<StateId> =
            if m == 0 { vec![NO_SERVER] } else { (0..width).filter(|&x| self.stages[m - 1].alive[x]).collect() };

        let mut table = StageTable {
            alive: vec![false; width],
            cost: vec![0.0; width],
            reliability: vec![0.0; width],
            pred: vec![0; width],
            remaining: vec![0; width * block],
        };
        let mut any = false;

        for x2 in stage_states(m, self.infra) {
            let mut best: Option<(f64, StateId, TransitionCost)> = None;
            for &x1 in &predecessors {
                if let Some(s) = server_of(x2) {
                    if !info.is_main && x1 == x2 {
                        continue;
                    }
                    let rem = self.prior_remaining(m, x1);
                    if demands.iter().enumerate().any(|(j, d)| rem[s * r + j] < *d) {
                        continue;
                    }
                }
                let tc = self.transition_cost(m, x1, x2);
                let theta = tc.total();
                if best.map_or(true, |(b, _, _)| theta < b) {
                    best = Some((theta, x1, tc));
                }
            }
            let Some((theta, sp, tc)) = best else { continue };
            any = true;
            table.alive[x2] = true;
            table.pred[x2] = sp;
            let tau = self.transition_reliability(m, sp, x2);
            table.cost[x2] = theta - tc.penalty + self.completion_hinge(m, tau);
            table.reliability[x2] = tau;
            let dst = x2 * block;
            table.remaining[dst..dst + block].copy_from_slice(self.prior_remaining(m, sp));
            if let Some(s) = server_of(x2) {
                for (j, d) in demands.iter().enumerate() {
                    table.remaining[dst + s * r + j] -= d;
                }
            }
        }
        if any {
            self.stages.push(table);
        }
        any
    }

    /// `M * max(0, (1 - F) - tau)` when stage `m` closes a service, else 0.
    /// Kept in the survived-path cost so that later services still see the
    /// shortfall of the ones before them.
    pub fn completion_hinge(&self, m: usize, tau: f64) -> f64 {
        let info = self.info[m];
        let st = &self.catalog[info.service_type];
        if info.is_main || info.vnf + 1 != st.num_vnfs() {
            return 0.0;
        }
        let shortfall = 1.0 - st.failure_cap - tau;
        if shortfall > 0.0 {
            st.penalty * shortfall
        } else {
            0.0
        }
    }

    /// Survived-path cost of `x2` at stage `m` when reached from `x1`.
    pub fn survived_cost(&self, m: usize, x1: StateId, x2: StateId) -> f64 {
        let tc = self.transition_cost(m, x1, x2);
        tc.total() - tc.penalty + self.completion_hinge(m, self.transition_reliability(m, x1, x2))
    }

    /// Terminal objective of state `x` at the last stage: placement cost plus
    /// the reliability hinge of every service on the path.
    pub fn terminal_objective(&self, x: StateId) -> f64 {
        self.stages[self.info.len() - 1].cost[x]
    }

    /// Best last-stage state, lowest id on ties.
    pub fn best_terminal(&self) -> Option<StateId> {
        let last = self.stages.len().checked_sub(1)?;
        if last + 1 != self.info.len() {
            return None;
        }
        let mut best: Option<(f64, StateId)> = None;
        for x in 0..self.width {
            if !self.stages[last].alive[x] {
                continue;
            }
            let obj = self.terminal_objective(x);
            if best.map_or(true, |(b, _)| obj < b) {
                best = Some((obj, x));
            }
        }
        best.map(|(_, x)| x)
    }

    /// State sequence of the survived path ending in `x` at stage `m`.
    pub fn path(&self, m: usize, x: StateId) -> Vec<StateId> {
        let mut path = vec![0; m + 1];
        let mut cur = x;
        for stage in (0..=m).rev() {
            path[stage] = cur;
            cur = self.stages[stage].pred[cur];
        }
        path
    }

    /// Output pass over the best path: per-service usage, cost and failure
    /// probability.
    pub fn outputs(&self) -> VrsspOutput {
        if let Some(k) = self.blocked_at {
            return VrsspOutput::invalid(k);
        }
        let Some(zeta) = self.best_terminal() else {
            return VrsspOutput { valid: true, blocked_at: None, services: Vec::new() };
        };
        let path = self.path(self.info.len() - 1, zeta);
        let r = self.infra.num_resources();
        let mut services: Vec<ServiceOutcome> = Vec::with_capacity(self.input.arrangement.len());
        let mut ordinals = vec![0usize; self.catalog.len()];
        let mut running = 1.0;

        for (m, &x) in path.iter().enumerate() {
            let info = self.info[m];
            let st = &self.catalog[info.service_type];
            let vnf = &st.vnfs[info.vnf];
            if info.vnf == 0 && info.is_main {
                services.push(ServiceOutcome {
                    position: info.service,
                    service_type: info.service_type,
                    ordinal: ordinals[info.service_type],
                    cost: 0.0,
                    failure_prob: 1.0,
                    usage: vec![0; self.block],
                    placement: ServicePlacement {
                        service_type: info.service_type,
                        vnfs: Vec::with_capacity(st.num_vnfs()),
                    },
                });
                ordinals[info.service_type] += 1;
                running = 1.0;
            }
            let out = services.last_mut().expect("service opened at its first stage");
            if let Some(s) = server_of(x) {
                for (j, d) in vnf.demands.iter().enumerate() {
                    out.usage[s * r + j] += d;
                }
                out.cost += self.infra.hosting_cost(s, vnf);
                if info.vnf > 0 {
                    let (a, b) = if info.is_main { (m - 2, m - 1) } else { (m - 2, m - 3) };
                    out.cost += st.bandwidth * (self.link(path[a], x) + self.link(path[b], x));
                }
            }
            if info.is_main {
                let main = server_of(x).expect("main stages hold servers");
                out.placement.vnfs.push(VnfAssignment::main_only(main));
            } else {
                running *= 1.0 - self.v(path[m - 1]) * self.v(x);
                out.placement.vnfs.last_mut().expect("main precedes backup").backup = server_of(x);
                if info.vnf + 1 == st.num_vnfs() {
                    out.failure_prob = 1.0 - running;
                }
            }
        }
        VrsspOutput { valid: true, blocked_at: None, services }
    }
}

/// Builds and runs the trellis for `input`.
pub fn run_vrssp(input: &VrsspInput, catalog: &ServiceCatalog, infra: &Infrastructure) -> VrsspOutput {
    let mut trellis = Trellis::new(input, catalog, infra);
    trellis.run();
    trellis.outputs()
}

/// Runs the batch and, while it is blocked at some service, drops that
/// service and reruns the rest. Positions in the result refer to the original
/// arrangement; the second value lists the dropped positions.
pub fn run_vrssp_dropping(
    input: &VrsspInput,
    catalog: &ServiceCatalog,
    infra: &Infrastructure,
) -> (VrsspOutput, Vec<usize>) {
    let mut kept: Vec<usize> = (0..input.arrangement.len()).collect();
    let mut dropped = Vec::new();
    let mut current = input.clone();
    loop {
        let mut out = run_vrssp(&current, catalog, infra);
        match out.blocked_at {
            Some(k) => {
                dropped.push(kept.remove(k));
                current.arrangement.remove(k);
                current.action[input.arrangement[dropped[dropped.len() - 1]]] -= 1;
            }
            None => {
                for s in &mut out.services {
                    s.position = kept[s.position];
                }
                dropped.sort_unstable();
                return (out, dropped);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{
        service_cost, service_failure_probability, InfrastructureSpec, Inp, LinkSpec, COST_TOL, PROB_TOL,
    };

    fn grid_infra(inps: usize, per_inp: usize, cap: u32) -> Infrastructure {
        Infrastructure::new(InfrastructureSpec {
            inps: (0..inps)
                .map(|i| Inp { failure_prob: 0.07 - 0.01 * i as f64, servers: vec![vec![cap]; per_inp] })
                .collect(),
            links: LinkSpec::Uniform { same_inp_cost: 0.1, cross_inp_cost: 0.5, bandwidth: 1e6 },
            alpha: vec![1.0],
            beta: 15.0,
            v_base: 0.07,
            deployment_cost: vec![vec![1.0]; inps],
        })
        .unwrap()
    }

    fn type_with(u: usize) -> crate::model::ServiceType {
        let mut st = one_vnf_type(5, 0.05);
        st.vnfs = vec![st.vnfs[0].clone(); u];
        st
    }

    #[test]
    fn stage_count_examples() {
        let catalog = ServiceCatalog(vec![type_with(3), type_with(5), type_with(4)]);
        assert_eq!(stage_count(&[], &catalog), 0);
        assert_eq!(stage_count(&[0, 1], &catalog), 16);
        assert_eq!(stage_count(&[2], &catalog), 8);
    }

    #[test]
    fn stage_state_sets() {
        let infra = grid_infra(7, 3, 100);
        assert_eq!(stage_states(0, &infra).len(), 21);
        assert_eq!(stage_states(1, &infra).len(), 22);
        let one = grid_infra(1, 1, 100);
        assert_eq!(stage_states(1, &one), vec![NO_SERVER, 1]);
        assert_eq!(stage_states(0, &one), vec![1]);
    }

    #[test]
    fn transition_reliability_cases() {
        // server 0: v = 0.1, server 1: v = 0.2
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let mut t = Trellis::new(&input, &catalog, &infra);
        assert!((t.transition_reliability(0, NO_SERVER, 1) - 0.9).abs() < PROB_TOL);
        t.run();
        assert!((t.transition_reliability(1, 1, 2) - 0.98).abs() < PROB_TOL);
        assert_eq!(t.transition_reliability(1, 1, NO_SERVER), 0.9);
    }

    #[test]
    fn transition_reliability_replaces_main_factor() {
        let infra = tiny_infra();
        let mut st = one_vnf_type(1, 0.05);
        st.vnfs.push(st.vnfs[0].clone());
        let catalog = ServiceCatalog(vec![st]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let mut t = Trellis::new(&input, &catalog, &infra);
        t.run();
        // stage 2 main of VNF 1 on server 0 coming from backup state x1
        let tau1 = t.stages()[1].reliability[2];
        let t2 = t.transition_reliability(2, 2, 1);
        assert!((t2 - tau1 * 0.9).abs() < PROB_TOL);
        // stage 3: backup on server 1 for main on server 0
        let tau2 = t.stages()[2].reliability[1];
        let t3 = t.transition_reliability(3, 1, 2);
        assert!((t3 - tau2 * (1.0 - 0.02) / 0.9).abs() < PROB_TOL);
    }

    #[test]
    fn transition_cost_examples() {
        // demand 5, C = 2, DC = 3, F loose enough for a bare main: 13
        let mut spec = tiny_infra().spec().clone();
        spec.deployment_cost = vec![vec![3.0], vec![3.0]];
        let infra = Infrastructure::new(spec).unwrap();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.15)]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let t = Trellis::new(&input, &catalog, &infra);
        let tc = t.transition_cost(0, NO_SERVER, 1);
        assert!((tc.total() - 13.0).abs() < COST_TOL);
        assert_eq!(tc.penalty, 0.0);
        assert_eq!(tc.routing, 0.0);
    }

    #[test]
    fn penalty_hinge() {
        // T = 0.90 against target 0.95 with M = 1e6 -> 5e4
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let t = Trellis::new(&input, &catalog, &infra);
        let tc = t.transition_cost(0, NO_SERVER, 1);
        assert!((tc.penalty - 5e4).abs() < 1e-6);
    }

    #[test]
    fn no_server_transition_carries_only_penalty_and_prior() {
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let mut t = Trellis::new(&input, &catalog, &infra);
        t.run();
        let tc = t.transition_cost(1, 1, NO_SERVER);
        assert_eq!(tc.hosting, 0.0);
        assert_eq!(tc.routing, 0.0);
        assert!((tc.prior - 10.0).abs() < COST_TOL);
        // target 1 against 0.9
        assert!((tc.penalty - 1e5).abs() < 1e-6);
    }

    #[test]
    fn tiny_instance_places_main_and_backup() {
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let out = run_vrssp(&input, &catalog, &infra);
        assert!(out.valid);
        let s = &out.services[0];
        assert!((s.cost - 15.0).abs() < COST_TOL);
        assert!((s.failure_prob - 0.02).abs() < PROB_TOL);
        assert_eq!(s.usage, vec![5, 5]);
        let a = s.placement.vnfs[0];
        assert_ne!(Some(a.main), a.backup);
        assert!(a.backup.is_some());
    }

    #[test]
    fn blocked_when_first_vnf_fits_nowhere() {
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(11, 0.05)]);
        let input = VrsspInput::type_ordered(vec![1], vec![10, 10], &infra).unwrap();
        let out = run_vrssp(&input, &catalog, &infra);
        assert!(!out.valid);
        assert!(out.services.is_empty());
        assert_eq!(out.blocked_at, Some(0));
    }

    #[test]
    fn empty_action_is_valid_and_empty() {
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let input = VrsspInput::type_ordered(vec![0], vec![10, 10], &infra).unwrap();
        let out = run_vrssp(&input, &catalog, &infra);
        assert!(out.valid);
        assert!(out.services.is_empty());
    }

    #[test]
    fn main_only_chain_on_perfect_servers() {
        // v tiny, cap generous; F loose so no backup is needed
        let infra = matrix_infra(&[1e-9, 1e-9], &[100, 100], 0.0, 0.0);
        let mut st = one_vnf_type(5, 0.5);
        st.vnfs = vec![st.vnfs[0].clone(); 3];
        let catalog = ServiceCatalog(vec![st]);
        let input = VrsspInput::type_ordered(vec![1], vec![100, 100], &infra).unwrap();
        let out = run_vrssp(&input, &catalog, &infra);
        assert!(out.services[0].failure_prob < 1e-8);
    }

    #[test]
    fn dropping_skips_blocked_services() {
        let infra = tiny_infra();
        let catalog = ServiceCatalog(vec![one_vnf_type(5, 0.05), one_vnf_type(11, 0.05)]);
        let input = VrsspInput::new(vec![2, 1], vec![0, 1, 0], vec![10, 10], &infra).unwrap();
        // type 1 fits nowhere
        assert_eq!(run_vrssp(&input, &catalog, &infra).blocked_at, Some(1));
        let (out, dropped) = run_vrssp_dropping(&input, &catalog, &infra);
        assert!(out.valid);
        assert_eq!(dropped, vec![1]);
        assert_eq!(out.services.iter().map(|s| s.position).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn outputs_match_model_recomputation() {
        let infra = grid_infra(3, 2, 60);
        let catalog = ServiceCatalog(vec![type_with(3), type_with(2)]);
        let input = VrsspInput::new(vec![2, 1], vec![0, 1, 0], infra.capacities().to_vec(), &infra).unwrap();
        let out = run_vrssp(&input, &catalog, &infra);
        assert!(out.valid);
        for s in &out.services {
            let c = service_cost(&s.placement, &infra, &catalog).unwrap();
            assert!((c.total - s.cost).abs() < COST_TOL, "{} vs {}", c.total, s.cost);
            let e = service_failure_probability(&s.placement.vnfs, &infra);
            assert!((e - s.failure_prob).abs() < PROB_TOL);
            assert_eq!(s.placement.usage(&infra, &catalog), s.usage);
        }
        assert_eq!(out.services.iter().map(|s| s.ordinal).collect::<Vec<_>>(), vec![0, 0, 1]);
    }

    #[test]
    fn input_rejects_bad_arrangement() {
        let infra = tiny_infra();
        assert!(VrsspInput::new(vec![1, 1], vec![0, 0], vec![10, 10], &infra).is_err());
        assert!(VrsspInput::new(vec![1], vec![0], vec![10], &infra).is_err());
        assert!(VrsspInput::new(vec![1], vec![0], vec![11, 10], &infra).is_err());
    }
}
