// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Value iteration with idle-resource estimation and arrangement search (VVI).
//!
//! The solver never sees the true resource ledger. For every active-count
//! vector it keeps an estimate of the idle resources, learned from the
//! placements it evaluates, and runs the trellis against that estimate.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mdp::{is_feasible, reward, DepartureMode, MdpState, StateSpace, TransitionModel, DEFAULT_MAX_STATES};
use crate::model::{Infrastructure, InfrastructureSpec, ServiceCatalog};
use crate::trellis::{run_vrssp, VrsspInput, VrsspOutput};

pub const POLICY_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub gamma: f64,
    /// Stopping threshold on the sup-norm difference. `None` picks
    /// `1e-3 * max_l q^l` (at least `1e-9`).
    pub epsilon: Option<f64>,
    pub num_arrangements: usize,
    pub alpha_init: f64,
    pub discount_d: f64,
    pub departure_mode: DepartureMode,
    pub max_iterations: usize,
    pub max_states: u128,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            gamma: 0.9,
            epsilon: None,
            num_arrangements: 10,
            alpha_init: 1.0,
            discount_d: 0.5,
            departure_mode: DepartureMode::Binomial,
            max_iterations: 500,
            max_states: DEFAULT_MAX_STATES,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn epsilon_for(&self, catalog: &ServiceCatalog) -> f64 {
        self.epsilon.unwrap_or_else(|| {
            let q = catalog.iter().map(|t| t.admission_reward).fold(0.0, f64::max);
            (1e-3 * q).max(1e-9)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.into()));
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad("gamma must lie in (0, 1)");
        }
        if self.epsilon.is_some_and(|e| !(e > 0.0)) {
            return bad("epsilon must be positive");
        }
        if self.num_arrangements == 0 {
            return bad("num_arrangements must be at least 1");
        }
        if !(self.alpha_init > 0.0 && self.alpha_init <= 1.0) {
            return bad("alpha_init must lie in (0, 1]");
        }
        if !(self.discount_d > 0.0 && self.discount_d <= 1.0) {
            return bad("discount_d must lie in (0, 1]");
        }
        if self.max_iterations < 2 {
            return bad("max_iterations must be at least 2");
        }
        Ok(())
    }
}

/// Idle-resource estimate per active-count vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceEstimate {
    block: usize,
    values: Vec<f64>,
    alpha: Vec<f64>,
    discount: f64,
    capacities: Vec<u32>,
}

impl ResourceEstimate {
    /// All estimates zero except the empty system, which is fully idle.
    pub fn new(space: &StateSpace, infra: &Infrastructure, alpha_init: f64, discount: f64) -> Self {
        let block = infra.capacities().len();
        let mut values = vec![0.0; space.num_active() * block];
        let empty = space.active_index(&vec![0; space.num_types()]).expect("zero vector is in range");
        for (v, c) in values[empty * block..(empty + 1) * block].iter_mut().zip(infra.capacities()) {
            *v = f64::from(*c);
        }
        ResourceEstimate {
            block,
            values,
            alpha: vec![alpha_init; space.num_active()],
            discount,
            capacities: infra.capacities().to_vec(),
        }
    }

    pub fn values(&self, eta: usize) -> &[f64] {
        &self.values[eta * self.block..(eta + 1) * self.block]
    }

    pub fn alpha(&self, eta: usize) -> f64 {
        self.alpha[eta]
    }

    /// Integer snapshot handed to the trellis (estimates rounded down).
    pub fn snapshot(&self, eta: usize) -> Vec<u32> {
        self.values(eta).iter().zip(&self.capacities).map(|(v, c)| (v.max(0.0).floor() as u32).min(*c)).collect()
    }

    /// `w[next] <- alpha (source - usage) + (1 - alpha) w[next]`, then
    /// `alpha <- alpha * D`.
    pub fn update(&mut self, eta_next: usize, source: &[u32], usage: &[u32]) {
        let a = self.alpha[eta_next];
        let dst = &mut self.values[eta_next * self.block..(eta_next + 1) * self.block];
        for ((w, s), u) in dst.iter_mut().zip(source).zip(usage) {
            *w = a * (f64::from(*s) - f64::from(*u)) + (1.0 - a) * *w;
        }
        self.alpha[eta_next] *= self.discount;
    }
}

/// `A_r`: per type, the services of the batch that met their failure cap.
pub fn realized_action(output: &VrsspOutput, catalog: &ServiceCatalog) -> Vec<u32> {
    if output.valid {
        output.realized(catalog)
    } else {
        vec![0; catalog.len()]
    }
}

/// Multiset of service types: `action[l]` copies of `l`, ascending.
pub fn service_type_vector(action: &[u32]) -> Vec<usize> {
    action.iter().enumerate().flat_map(|(l, &a)| std::iter::repeat(l).take(a as usize)).collect()
}

/// Number of distinct orderings of the action's services.
pub fn distinct_arrangement_count(action: &[u32]) -> u128 {
    let mut num: u128 = 1;
    let mut n: u128 = 0;
    for &a in action {
        for i in 1..=u128::from(a) {
            n += 1;
            num = num * n / i;
        }
    }
    num
}

/// `count` seeded shuffles of the action's services, deduplicated in draw order.
pub fn generate_arrangements(action: &[u32], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let stv = service_type_vector(action);
    let mut pool: Vec<Vec<usize>> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut p = stv.clone();
        p.shuffle(rng);
        if !pool.contains(&p) {
            pool.push(p);
        }
    }
    pool
}

#[derive(Clone, Debug, Default)]
struct ArrangementEntry {
    pool: VecDeque<Vec<usize>>,
    first: Vec<usize>,
    best_reward: Option<f64>,
    best: Option<Vec<usize>>,
}

impl ArrangementEntry {
    fn next(&mut self) -> Vec<usize> {
        self.pool.pop_front().or_else(|| self.best.clone()).unwrap_or_else(|| self.first.clone())
    }
}

/// Result of evaluating one action in one state.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionEvaluation {
    pub reward: f64,
    pub realized: Vec<u32>,
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyEntry {
    pub action: Vec<u32>,
    pub arrangement: Vec<usize>,
    pub value: f64,
}

/// Stationary policy over the full state space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub version: u32,
    /// SHA-256 of the infrastructure and service types the policy was solved for.
    pub fingerprint: String,
    pub sigma_max: Vec<u32>,
    pub lambda_max: Vec<u32>,
    pub gamma: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub iterations: usize,
    pub converged: bool,
    /// Mean state value after every sweep.
    pub trace: Vec<f64>,
    /// Sup-norm difference after every sweep.
    pub diffs: Vec<f64>,
    pub entries: Vec<PolicyEntry>,
}

impl Policy {
    pub fn space(&self) -> Result<StateSpace> {
        StateSpace::from_bounds(self.sigma_max.clone(), self.lambda_max.clone())
    }

    pub fn lookup(&self, state: &MdpState) -> Result<&PolicyEntry> {
        let space = self.space()?;
        let idx = space
            .index_of(state)
            .ok_or_else(|| Error::InvalidInput(format!("state {state:?} is outside the policy's state space")))?;
        Ok(&self.entries[idx])
    }

    pub fn mean_value(&self) -> f64 {
        self.entries.iter().map(|e| e.value).sum::<f64>() / self.entries.len() as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Policy = serde_json::from_str(text)?;
        if p.version != POLICY_FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "policy format version {} is not supported (expected {POLICY_FORMAT_VERSION})",
                p.version
            )));
        }
        let len = p.space()?.len();
        if p.entries.len() != len {
            return Err(Error::InvalidInput(format!("policy has {} entries for {len} states", p.entries.len())));
        }
        Ok(p)
    }
}

/// Hex SHA-256 over the canonical JSON of the infrastructure and catalog.
pub fn fingerprint(infra: &Infrastructure, catalog: &ServiceCatalog) -> String {
    #[derive(Serialize)]
    struct World<'a> {
        infrastructure: &'a InfrastructureSpec,
        service_types: &'a [crate::model::ServiceType],
    }
    let text = serde_json::to_vec(&World { infrastructure: infra.spec(), service_types: catalog })
        .expect("model types serialize");
    Sha256::digest(&text).iter().map(|b| format!("{b:02x}")).collect()
}

/// Sweep-by-sweep VVI solver.
pub struct Solver<'a> {
    infra: &'a Infrastructure,
    catalog: &'a ServiceCatalog,
    params: SolverParams,
    model: TransitionModel,
    estimate: ResourceEstimate,
    ledger: Vec<Vec<Option<ArrangementEntry>>>,
    rng: ChaCha8Rng,
    values: Vec<f64>,
    best: Vec<(usize, f64)>,
    learning: bool,
    trace: Vec<f64>,
    diffs: Vec<f64>,
}

impl<'a> Solver<'a> {
    pub fn new(infra: &'a Infrastructure, catalog: &'a ServiceCatalog, params: SolverParams) -> Result<Self> {
        params.validate()?;
        catalog.validate(infra)?;
        let space = StateSpace::new(catalog, params.max_states)?;
        let estimate = ResourceEstimate::new(&space, infra, params.alpha_init, params.discount_d);
        let n = space.len();
        let model = TransitionModel::new(space, catalog, params.departure_mode);
        Ok(Solver {
            infra,
            catalog,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            params,
            model,
            estimate,
            ledger: vec![Vec::new(); n],
            values: vec![0.0; n],
            best: vec![(0, 0.0); n],
            learning: true,
            trace: Vec::new(),
            diffs: Vec::new(),
        })
    }

    pub fn space(&self) -> &StateSpace {
        self.model.space()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn estimate(&self) -> &ResourceEstimate {
        &self.estimate
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    pub fn diffs(&self) -> &[f64] {
        &self.diffs
    }

    /// With learning off, estimates stay fixed and every action replays its
    /// best arrangement, so rewards are stationary.
    pub fn set_learning(&mut self, on: bool) {
        self.learning = on;
    }

    /// Best reward seen so far for `action` in `state`.
    pub fn best_reward(&self, state: usize, action: usize) -> Option<f64> {
        self.ledger[state].get(action)?.as_ref()?.best_reward
    }

    fn evaluate(&mut self, sidx: usize, state: &MdpState, aidx: usize, action: &[u32], z: &[f64]) -> ActionEvaluation {
        let space = self.model.space();
        let eta = space.active_index(&state.actives).expect("state in range");
        let mut realized = vec![0u32; action.len()];
        let mut r = 0.0;
        if action.iter().any(|&a| a > 0) {
            let actions = &mut self.ledger[sidx];
            if actions.len() <= aidx {
                actions.resize(aidx + 1, None);
            }
            let entry = actions[aidx].get_or_insert_with(|| {
                let pool = generate_arrangements(action, self.params.num_arrangements, &mut self.rng);
                ArrangementEntry { first: pool[0].clone(), pool: pool.into(), best_reward: None, best: None }
            });
            let rho =
                if self.learning { entry.next() } else { entry.best.clone().unwrap_or_else(|| entry.first.clone()) };
            let snapshot = self.estimate.snapshot(eta);
            let input = VrsspInput::new(action.to_vec(), rho.clone(), snapshot.clone(), self.infra)
                .expect("arrangement matches action and snapshot fits");
            let out = run_vrssp(&input, self.catalog, self.infra);
            r = reward(&out, self.catalog);
            realized = realized_action(&out, self.catalog);
            if entry.best_reward.map_or(true, |b| r >= b) {
                entry.best_reward = Some(r);
                entry.best = Some(rho);
            }
            if self.learning && realized.iter().any(|&a| a > 0) {
                let mut usage = vec![0u32; snapshot.len()];
                for s in out.services.iter().filter(|s| s.reliable(self.catalog)) {
                    for (u, x) in usage.iter_mut().zip(&s.usage) {
                        *u += x;
                    }
                }
                let next: Vec<u32> = state.actives.iter().zip(&realized).map(|(s, a)| s + a).collect();
                let eta_next = space.active_index(&next).expect("feasible action stays within sigma_max");
                self.estimate.update(eta_next, &snapshot, &usage);
            }
        }
        let next: Vec<u32> = state.actives.iter().zip(&realized).map(|(s, a)| s + a).collect();
        let q = r + self.params.gamma * z[space.active_index(&next).expect("within sigma_max")];
        ActionEvaluation { reward: r, realized, q }
    }

    /// One synchronous sweep over every state; returns the sup-norm change.
    pub fn sweep(&mut self) -> f64 {
        let z = self.model.expected_values(&self.values);
        let n = self.values.len();
        let mut next = Vec::with_capacity(n);
        for sidx in 0..n {
            let state = self.model.space().state_of(sidx);
            let actions = self.model.space().feasible_actions(&state);
            let mut best = (0usize, f64::NEG_INFINITY);
            for (aidx, action) in actions.iter().enumerate() {
                let ev = self.evaluate(sidx, &state, aidx, action, &z);
                if ev.q > best.1 {
                    best = (aidx, ev.q);
                }
            }
            next.push(best.1);
            self.best[sidx] = best;
        }
        let diff = next.iter().zip(&self.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        self.values = next;
        self.trace.push(self.values.iter().sum::<f64>() / n as f64);
        self.diffs.push(diff);
        diff
    }

    /// Sweeps until the sup-norm change drops below epsilon (at least two
    /// sweeps) or the iteration cap is hit.
    pub fn solve(mut self) -> Result<Policy> {
        let eps = self.params.epsilon_for(self.catalog);
        let mut converged = false;
        while self.diffs.len() < self.params.max_iterations {
            let diff = self.sweep();
            if self.diffs.len() >= 2 && diff < eps {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                iterations: self.diffs.len(),
                last_diff: *self.diffs.last().unwrap_or(&f64::INFINITY),
                trace: self.trace,
            });
        }
        Ok(self.into_policy(converged))
    }

    /// Policy greedy with respect to the last sweep.
    pub fn into_policy(self, converged: bool) -> Policy {
        let space = self.model.space();
        let entries = (0..space.len())
            .map(|sidx| {
                let state = space.state_of(sidx);
                let (aidx, value) = self.best[sidx];
                let action = space.feasible_actions(&state).swap_remove(aidx);
                let arrangement = self.ledger[sidx]
                    .get(aidx)
                    .and_then(|e| e.as_ref())
                    .and_then(|e| e.best.clone())
                    .unwrap_or_else(|| service_type_vector(&action));
                PolicyEntry { action, arrangement, value }
            })
            .collect();
        Policy {
            version: POLICY_FORMAT_VERSION,
            fingerprint: fingerprint(self.infra, self.catalog),
            sigma_max: space.sigma_max().to_vec(),
            lambda_max: space.lambda_max().to_vec(),
            gamma: self.params.gamma,
            epsilon: self.params.epsilon_for(self.catalog),
            seed: self.params.seed,
            iterations: self.diffs.len(),
            converged,
            trace: self.trace,
            diffs: self.diffs,
            entries,
        }
    }
}

/// Runs VVI to convergence.
pub fn value_iteration(infra: &Infrastructure, catalog: &ServiceCatalog, params: SolverParams) -> Result<Policy> {
    Solver::new(infra, catalog, params)?.solve()
}

/// Checks that every stored action is feasible for its state.
pub fn check_policy(policy: &Policy) -> Result<()> {
    let space = policy.space()?;
    for (i, e) in policy.entries.iter().enumerate() {
        let s = space.state_of(i);
        if !is_feasible(&e.action, &s, space.sigma_max()) {
            return Err(Error::InvalidInput(format!("stored action {:?} is infeasible in {s:?}", e.action)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{service_cost, ServicePlacement, VnfAssignment};

    fn space_for(sigma: u32) -> (Infrastructure, ServiceCatalog) {
        let infra = matrix_infra(&[0.1], &[100], 0.0, 0.0);
        let mut t = one_vnf_type(40, 0.5);
        t.sigma_max = sigma;
        (infra, ServiceCatalog(vec![t]))
    }

    #[test]
    fn estimate_recurrence() {
        let infra = matrix_infra(&[0.1], &[100], 0.0, 0.0);
        let (_, cat) = space_for(2);
        let space = StateSpace::new(&cat, DEFAULT_MAX_STATES).unwrap();
        let mut est = ResourceEstimate::new(&space, &infra, 1.0, 0.5);
        assert_eq!(est.values(0), &[100.0]);
        assert_eq!(est.values(1), &[0.0]);
        est.update(1, &[100], &[40]);
        assert_eq!(est.values(1), &[60.0]);
        assert_eq!(est.alpha(1), 0.5);
        est.update(1, &[80], &[30]);
        assert_eq!(est.values(1), &[55.0]);
        assert_eq!(est.alpha(1), 0.25);
        est.update(1, &[55], &[0]);
        assert_eq!(est.values(1), &[55.0]);
    }

    #[test]
    fn snapshot_floors() {
        let infra = matrix_infra(&[0.1], &[100], 0.0, 0.0);
        let (_, cat) = space_for(2);
        let space = StateSpace::new(&cat, DEFAULT_MAX_STATES).unwrap();
        let mut est = ResourceEstimate::new(&space, &infra, 1.0, 0.5);
        est.update(2, &[99], &[0]);
        est.update(2, &[0], &[0]);
        assert_eq!(est.values(2), &[49.5]);
        assert_eq!(est.snapshot(2), vec![49]);
    }

    #[test]
    fn arrangement_pools() {
        assert_eq!(service_type_vector(&[1, 2, 0, 1]), vec![0, 1, 1, 3]);
        assert_eq!(distinct_arrangement_count(&[1, 2, 0, 1]), 12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pool = generate_arrangements(&[1, 2, 0, 1], 200, &mut rng);
        assert_eq!(pool.len(), 12);
        assert_eq!(generate_arrangements(&[0, 1], 10, &mut rng), vec![vec![1]]);
        assert_eq!(generate_arrangements(&[2, 0], 3, &mut rng), vec![vec![0, 0]]);
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(generate_arrangements(&[2, 2], 5, &mut a), generate_arrangements(&[2, 2], 5, &mut b));
    }

    #[test]
    fn realized_counts_reliable_services() {
        let infra = tiny_infra();
        let mut t = one_vnf_type(1, 0.04);
        t.vnfs[0].demands = vec![1];
        let cat = ServiceCatalog(vec![t]);
        let input = VrsspInput::type_ordered(vec![2], vec![10, 10], &infra).unwrap();
        let out = run_vrssp(&input, &cat, &infra);
        assert_eq!(realized_action(&out, &cat), vec![2]);
        assert_eq!(realized_action(&VrsspOutput::invalid(0), &cat), vec![0]);
    }

    #[test]
    fn zero_rewards_give_zero_values() {
        let (infra, mut cat) = space_for(2);
        cat.0[0].vnfs[0].demands = vec![1000];
        let params = SolverParams { epsilon: Some(1e-9), ..Default::default() };
        let p = value_iteration(&infra, &cat, params).unwrap();
        assert_eq!(p.iterations, 2);
        assert!(p.entries.iter().all(|e| e.value == 0.0 && e.action == vec![0]));
    }

    #[test]
    fn single_self_loop_geometric_value() {
        // arrivals always 1, sigma_max 1, everything departs: (1, 0) loops on itself
        let (infra, mut cat) = space_for(1);
        cat.0[0].arrival_pmf = vec![0.0, 1.0];
        cat.0[0].departure_prob = 1.0;
        cat.0[0].admission_reward = 1000.0;
        let params = SolverParams { epsilon: Some(1e-12), max_iterations: 1000, ..Default::default() };
        let p = value_iteration(&infra, &cat, params).unwrap();
        let space = p.space().unwrap();
        let idx = space.index_of(&MdpState { arrivals: vec![1], actives: vec![0] }).unwrap();
        let placement = ServicePlacement { service_type: 0, vnfs: vec![VnfAssignment::main_only(0)] };
        let r = 1000.0 - service_cost(&placement, &infra, &cat).unwrap().total;
        assert!((p.entries[idx].value - r / (1.0 - 0.9)).abs() < 1e-9);
        assert_eq!(p.entries[idx].action, vec![1]);
    }

    #[test]
    fn same_seed_same_policy() {
        let infra = tiny_infra();
        let mut a = one_vnf_type(3, 0.05);
        a.sigma_max = 2;
        let mut b = one_vnf_type(2, 0.05);
        b.sigma_max = 2;
        let cat = ServiceCatalog(vec![a, b]);
        let params = SolverParams { seed: 11, ..Default::default() };
        let p1 = value_iteration(&infra, &cat, params.clone()).unwrap();
        let p2 = value_iteration(&infra, &cat, params).unwrap();
        assert_eq!(p1.to_json().unwrap(), p2.to_json().unwrap());
        check_policy(&p1).unwrap();
        assert_eq!(Policy::from_json(&p1.to_json().unwrap()).unwrap(), p1);
    }

    #[test]
    fn lookup_returns_zero_action_without_arrivals() {
        let infra = tiny_infra();
        let mut t = one_vnf_type(3, 0.05);
        t.sigma_max = 2;
        let cat = ServiceCatalog(vec![t]);
        let p = value_iteration(&infra, &cat, SolverParams::default()).unwrap();
        for sigma in 0..=2 {
            let e = p.lookup(&MdpState { arrivals: vec![0], actives: vec![sigma] }).unwrap();
            assert_eq!(e.action, vec![0]);
        }
        let full = p.lookup(&MdpState { arrivals: vec![1], actives: vec![2] }).unwrap();
        assert_eq!(full.action, vec![0]);
        assert!(p.lookup(&MdpState { arrivals: vec![2], actives: vec![0] }).is_err());
    }

    #[test]
    fn nonconvergence_keeps_trace() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(3, 0.05)]);
        let params = SolverParams { epsilon: Some(1e-300), max_iterations: 3, ..Default::default() };
        match value_iteration(&infra, &cat, params) {
            Err(Error::NonConvergence { iterations: 3, trace, .. }) => assert_eq!(trace.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn frozen_rewards_contract() {
        let infra = tiny_infra();
        let mut a = one_vnf_type(3, 0.05);
        a.sigma_max = 3;
        let cat = ServiceCatalog(vec![a]);
        let mut s = Solver::new(&infra, &cat, SolverParams::default()).unwrap();
        for _ in 0..15 {
            s.sweep();
        }
        s.set_learning(false);
        for _ in 0..30 {
            s.sweep();
        }
        let d = s.diffs();
        for w in d[16..].windows(2) {
            assert!(w[1] <= 0.9 * w[0] + 1e-9, "{} > 0.9 * {}", w[1], w[0]);
        }
    }

    #[test]
    fn params_validation() {
        assert!(SolverParams { gamma: 1.0, ..Default::default() }.validate().is_err());
        assert!(SolverParams { num_arrangements: 0, ..Default::default() }.validate().is_err());
        assert!(SolverParams::default().validate().is_ok());
        let cat = ServiceCatalog(vec![one_vnf_type(3, 0.05)]);
        assert_eq!(SolverParams::default().epsilon_for(&cat), 0.1);
    }
}
