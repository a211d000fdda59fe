// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Slotted environment.
//!
//! Each slot: sample arrivals, place them with the chosen strategy against
//! the true resource ledger, activate the services that met their failure
//! cap, then let every active service (including the new ones) depart with
//! its type's probability.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{place_batch, BaselineId};
use crate::error::{Error, Result};
use crate::mdp::{MdpState, StateSpace};
use crate::model::{service_cost, Infrastructure, ResourceLedger, ServiceCatalog, ServicePlacement};
use crate::policy::{fingerprint, Policy, PolicyEntry};
use crate::trellis::{run_vrssp_dropping, VrsspInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Solved admission policy; needs a [`Policy`].
    Mdp,
    Static(BaselineId),
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Mdp => "mdp",
            Strategy::Static(id) => id.name(),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("mdp") {
            Ok(Strategy::Mdp)
        } else {
            s.parse().map(Strategy::Static)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActiveService {
    pub service_type: usize,
    pub placement: ServicePlacement,
    pub usage: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct SlotState {
    pub slot: u64,
    pub actives: Vec<ActiveService>,
    pub ledger: ResourceLedger,
    pub rng: ChaCha8Rng,
}

impl SlotState {
    pub fn new(infra: &Infrastructure, seed: u64) -> Self {
        SlotState {
            slot: 0,
            actives: Vec::new(),
            ledger: ResourceLedger::full(infra),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn active_counts(&self, num_types: usize) -> Vec<u32> {
        let mut c = vec![0u32; num_types];
        for a in &self.actives {
            c[a.service_type] += 1;
        }
        c
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub slot: u64,
    pub arrivals: Vec<u32>,
    /// Admitted services that met their failure cap, per type.
    pub admissions: Vec<u32>,
    pub placement_cost: f64,
    pub backups: u32,
    /// VNFs of the admitted services.
    pub vnfs: u32,
    pub cumulative_admission_ratio: f64,
}

/// Per-type arrival samplers.
pub struct ArrivalSampler {
    dists: Vec<WeightedIndex<f64>>,
}

impl ArrivalSampler {
    pub fn new(catalog: &ServiceCatalog) -> Result<Self> {
        let dists = catalog
            .iter()
            .enumerate()
            .map(|(l, t)| {
                WeightedIndex::new(&t.arrival_pmf)
                    .map_err(|e| Error::InvalidModel(format!("service_types[{l}].arrival_pmf: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(ArrivalSampler { dists })
    }

    /// One independent draw per type.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        self.dists.iter().map(|d| d.sample(rng) as u32).collect()
    }
}

/// Independent draws per type from the catalog's arrival PMFs.
pub fn sample_arrivals(rng: &mut ChaCha8Rng, catalog: &ServiceCatalog) -> Result<Vec<u32>> {
    Ok(ArrivalSampler::new(catalog)?.sample(rng))
}

/// `true` for every active service that leaves, each with its type's
/// departure probability.
pub fn sample_departures(rng: &mut ChaCha8Rng, actives: &[ActiveService], catalog: &ServiceCatalog) -> Vec<bool> {
    actives.iter().map(|a| rng.gen_bool(catalog[a.service_type].departure_prob.clamp(0.0, 1.0))).collect()
}

/// Everything a slot needs besides its mutable state.
pub struct Environment<'a> {
    pub infra: &'a Infrastructure,
    pub catalog: &'a ServiceCatalog,
    pub strategy: Strategy,
    policy: Option<(&'a Policy, StateSpace)>,
    arrivals: ArrivalSampler,
}

impl<'a> Environment<'a> {
    /// A policy is required for [`Strategy::Mdp`] and must match the world.
    pub fn new(
        infra: &'a Infrastructure,
        catalog: &'a ServiceCatalog,
        strategy: Strategy,
        policy: Option<&'a Policy>,
    ) -> Result<Self> {
        catalog.validate(infra)?;
        let policy = match (strategy, policy) {
            (Strategy::Mdp, None) => return Err(Error::InvalidInput("the mdp strategy needs a policy".into())),
            (Strategy::Mdp, Some(p)) => {
                let expected = fingerprint(infra, catalog);
                if p.fingerprint != expected {
                    return Err(Error::InvalidInput(format!(
                        "policy fingerprint {} does not match the configuration ({expected})",
                        p.fingerprint
                    )));
                }
                Some((p, p.space()?))
            }
            (_, _) => None,
        };
        Ok(Environment { infra, catalog, strategy, policy, arrivals: ArrivalSampler::new(catalog)? })
    }

    fn policy_entry(&self, arrivals: &[u32], actives: &[u32]) -> Result<&PolicyEntry> {
        let (policy, space) = self.policy.as_ref().expect("checked in new");
        let state = MdpState { arrivals: arrivals.to_vec(), actives: actives.to_vec() };
        let idx = space
            .index_of(&state)
            .ok_or_else(|| Error::InvalidInput(format!("state {state:?} is outside the policy's state space")))?;
        Ok(&policy.entries[idx])
    }

    /// Placements (met their caps) for this slot's arrivals, computed against
    /// a copy of the live ledger.
    fn decide(&self, state: &SlotState, arrivals: &[u32]) -> Result<Vec<ServicePlacement>> {
        match self.strategy {
            Strategy::Mdp => {
                let counts = state.active_counts(self.catalog.len());
                let entry = self.policy_entry(arrivals, &counts)?;
                if entry.arrangement.is_empty() {
                    return Ok(Vec::new());
                }
                let input = VrsspInput::new(
                    entry.action.clone(),
                    entry.arrangement.clone(),
                    state.ledger.server_idle().to_vec(),
                    self.infra,
                )?;
                let (out, _) = run_vrssp_dropping(&input, self.catalog, self.infra);
                Ok(out.services.into_iter().filter(|s| s.reliable(self.catalog)).map(|s| s.placement).collect())
            }
            Strategy::Static(id) => {
                let services = crate::policy::service_type_vector(arrivals);
                let mut scratch = state.ledger.clone();
                Ok(place_batch(id, &services, &mut scratch, self.infra, self.catalog).admitted)
            }
        }
    }

    /// Runs one slot and returns its metrics (without the cumulative ratio).
    pub fn run_slot(&self, state: &mut SlotState) -> Result<SlotMetrics> {
        let l = self.catalog.len();
        let arrivals = self.arrivals.sample(&mut state.rng);
        let placements = self.decide(state, &arrivals)?;
        let mut m = SlotMetrics { slot: state.slot, arrivals, admissions: vec![0; l], ..Default::default() };
        for p in placements {
            state.ledger.allocate(&p, self.infra, self.catalog)?;
            m.admissions[p.service_type] += 1;
            m.placement_cost += service_cost(&p, self.infra, self.catalog)?.total;
            m.backups += p.backup_count() as u32;
            m.vnfs += p.vnfs.len() as u32;
            let usage = p.usage(self.infra, self.catalog);
            state.actives.push(ActiveService { service_type: p.service_type, placement: p, usage });
        }
        if self.strategy == Strategy::Mdp {
            let (policy, _) = self.policy.as_ref().expect("checked in new");
            let counts = state.active_counts(l);
            if counts.iter().zip(&policy.sigma_max).any(|(c, m)| c > m) {
                return Err(Error::LedgerInconsistency(format!("active counts {counts:?} exceed sigma_max")));
            }
        }
        let leaving = sample_departures(&mut state.rng, &state.actives, self.catalog);
        let mut kept = Vec::with_capacity(state.actives.len());
        for (a, gone) in std::mem::take(&mut state.actives).into_iter().zip(leaving) {
            if gone {
                state.ledger.release(&a.placement, self.infra, self.catalog)?;
            } else {
                kept.push(a);
            }
        }
        state.actives = kept;
        check_conservation(state, self.infra)?;
        state.slot += 1;
        Ok(m)
    }
}

/// Idle plus in-use equals capacity, exactly.
pub fn check_conservation(state: &SlotState, infra: &Infrastructure) -> Result<()> {
    let mut total: Vec<u64> = state.ledger.server_idle().iter().map(|&x| u64::from(x)).collect();
    for a in &state.actives {
        for (t, u) in total.iter_mut().zip(&a.usage) {
            *t += u64::from(*u);
        }
    }
    for (k, (t, c)) in total.iter().zip(infra.capacities()).enumerate() {
        if *t != u64::from(*c) {
            return Err(Error::LedgerInconsistency(format!(
                "slot {}: idle + in use = {t} but capacity is {c} at entry {k}",
                state.slot
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub arrived: u64,
    pub admitted: u64,
    pub admission_ratio: f64,
}

impl GroupSummary {
    fn add(&mut self, arrived: u64, admitted: u64) {
        self.arrived += arrived;
        self.admitted += admitted;
    }

    fn finish(&mut self) {
        self.admission_ratio = ratio(self.admitted, self.arrived);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VnfCountSummary {
    pub num_vnfs: usize,
    #[serde(flatten)]
    pub counts: GroupSummary,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub strategy: String,
    pub seed: u64,
    pub slots: u64,
    pub arrived: u64,
    pub admitted: u64,
    pub admission_ratio: f64,
    pub total_placement_cost: f64,
    /// Per admitted service.
    pub mean_placement_cost: f64,
    pub backups_per_vnf: f64,
    /// Mean VNF count of admitted services.
    pub mean_sfc_length: f64,
    pub per_type: Vec<GroupSummary>,
    pub per_vnf_count: Vec<VnfCountSummary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub slots: Vec<SlotMetrics>,
    pub summary: Summary,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl MetricsReport {
    /// CSV with header: slot, per-type arrivals and admissions,
    /// placement_cost, backups, cumulative_admission_ratio.
    pub fn to_csv(&self) -> String {
        let l = self.summary.per_type.len();
        let mut out = String::from("slot");
        for t in 0..l {
            let _ = write!(out, ",arrivals_{t}");
        }
        for t in 0..l {
            let _ = write!(out, ",admissions_{t}");
        }
        out.push_str(",placement_cost,backups,cumulative_admission_ratio\n");
        for m in &self.slots {
            let _ = write!(out, "{}", m.slot);
            for a in m.arrivals.iter().chain(&m.admissions) {
                let _ = write!(out, ",{a}");
            }
            let _ = writeln!(out, ",{},{},{}", m.placement_cost, m.backups, m.cumulative_admission_ratio);
        }
        out
    }
}

/// Seeds the slot state, runs `slots` slots and aggregates the metrics.
pub fn run_experiment(env: &Environment, slots: u64, seed: u64) -> Result<MetricsReport> {
    if slots == 0 {
        return Err(Error::InvalidInput("slots must be at least 1".into()));
    }
    let catalog = env.catalog;
    let mut state = SlotState::new(env.infra, seed);
    let mut rows = Vec::with_capacity(slots as usize);
    let mut summary = Summary {
        strategy: env.strategy.to_string(),
        seed,
        slots,
        per_type: vec![GroupSummary::default(); catalog.len()],
        ..Default::default()
    };
    let max_u = catalog.iter().map(|t| t.num_vnfs()).max().unwrap_or(0);
    let mut by_len = vec![GroupSummary::default(); max_u + 1];
    let (mut backups, mut vnfs) = (0u64, 0u64);
    for _ in 0..slots {
        let mut m = env.run_slot(&mut state)?;
        for (l, (&a, &d)) in m.arrivals.iter().zip(&m.admissions).enumerate() {
            summary.arrived += u64::from(a);
            summary.admitted += u64::from(d);
            summary.per_type[l].add(a.into(), d.into());
            by_len[catalog[l].num_vnfs()].add(a.into(), d.into());
        }
        summary.total_placement_cost += m.placement_cost;
        backups += u64::from(m.backups);
        vnfs += u64::from(m.vnfs);
        m.cumulative_admission_ratio = ratio(summary.admitted, summary.arrived);
        rows.push(m);
    }
    summary.admission_ratio = ratio(summary.admitted, summary.arrived);
    summary.mean_placement_cost =
        if summary.admitted == 0 { 0.0 } else { summary.total_placement_cost / summary.admitted as f64 };
    summary.backups_per_vnf = ratio(backups, vnfs);
    summary.mean_sfc_length = ratio(vnfs, summary.admitted);
    summary.per_type.iter_mut().for_each(GroupSummary::finish);
    summary.per_vnf_count = by_len
        .into_iter()
        .enumerate()
        .filter(|(u, _)| catalog.iter().any(|t| t.num_vnfs() == *u))
        .map(|(num_vnfs, mut counts)| {
            counts.finish();
            VnfCountSummary { num_vnfs, counts }
        })
        .collect();
    Ok(MetricsReport { slots: rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::policy::{value_iteration, SolverParams};

    fn world() -> (Infrastructure, ServiceCatalog) {
        let infra = matrix_infra(&[0.05, 0.03, 0.01], &[20, 20, 20], 0.2, 1.0);
        let mut a = one_vnf_type(4, 0.01);
        a.vnfs.push(a.vnfs[0].clone());
        a.sigma_max = 3;
        let mut b = one_vnf_type(3, 0.04);
        b.sigma_max = 3;
        (infra, ServiceCatalog(vec![a, b]))
    }

    #[test]
    fn strategy_names() {
        assert_eq!("mdp".parse::<Strategy>().unwrap(), Strategy::Mdp);
        assert_eq!("cera".parse::<Strategy>().unwrap(), Strategy::Static(BaselineId::Cera));
        assert_eq!(Strategy::Static(BaselineId::VrsspGreedy).to_string(), "vrssp");
    }

    #[test]
    fn point_mass_at_zero_never_arrives() {
        let (_, mut cat) = world();
        for t in &mut cat.0 {
            t.arrival_pmf = vec![1.0];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_arrivals(&mut rng, &cat).unwrap(), vec![0, 0]);
        }
    }

    #[test]
    fn departure_extremes() {
        let (infra, mut cat) = world();
        let placement = ServicePlacement { service_type: 0, vnfs: vec![] };
        let actives = vec![ActiveService { service_type: 0, placement, usage: vec![0; infra.capacities().len()] }; 5];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        cat.0[0].departure_prob = 1.0;
        assert!(sample_departures(&mut rng, &actives, &cat).iter().all(|&g| g));
        cat.0[0].departure_prob = 0.0;
        assert!(sample_departures(&mut rng, &actives, &cat).iter().all(|&g| !g));
    }

    #[test]
    fn empty_slot_is_a_no_op() {
        let (infra, mut cat) = world();
        for t in &mut cat.0 {
            t.arrival_pmf = vec![1.0];
        }
        let env = Environment::new(&infra, &cat, Strategy::Static(BaselineId::VrsspGreedy), None).unwrap();
        let r = run_experiment(&env, 1, 0).unwrap();
        assert_eq!(r.summary.arrived, 0);
        assert_eq!(r.summary.admission_ratio, 0.0);
        assert_eq!(r.slots[0].placement_cost, 0.0);
    }

    #[test]
    fn conservation_and_determinism_for_every_strategy() {
        let (infra, cat) = world();
        let policy = value_iteration(&infra, &cat, SolverParams::default()).unwrap();
        let mut strategies = vec![Strategy::Mdp];
        strategies.extend(BaselineId::ALL.map(Strategy::Static));
        for s in strategies {
            let env = Environment::new(&infra, &cat, s, Some(&policy)).unwrap();
            let a = run_experiment(&env, 300, 9).unwrap();
            let b = run_experiment(&env, 300, 9).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
            assert_eq!(a.summary, b.summary);
            assert!(a.summary.admitted > 0, "{s}");
            assert!((0.0..=1.0).contains(&a.summary.admission_ratio));
            assert!((0.0..=1.0).contains(&a.summary.backups_per_vnf));
        }
    }

    #[test]
    fn admitted_services_can_leave_in_the_same_slot() {
        let (infra, mut cat) = world();
        for t in &mut cat.0 {
            t.departure_prob = 1.0;
            t.arrival_pmf = vec![0.0, 1.0];
        }
        let env = Environment::new(&infra, &cat, Strategy::Static(BaselineId::MinResource), None).unwrap();
        let mut state = SlotState::new(&infra, 3);
        let m = env.run_slot(&mut state).unwrap();
        assert!(m.admissions.iter().sum::<u32>() > 0);
        assert!(state.actives.is_empty());
        assert_eq!(state.ledger.server_idle(), infra.capacities());
    }

    #[test]
    fn mdp_needs_matching_policy() {
        let (infra, cat) = world();
        assert!(Environment::new(&infra, &cat, Strategy::Mdp, None).is_err());
        let policy = value_iteration(&infra, &cat, SolverParams::default()).unwrap();
        let mut other = cat.clone();
        other.0[0].admission_reward += 1.0;
        assert!(Environment::new(&infra, &other, Strategy::Mdp, Some(&policy)).is_err());
    }

    #[test]
    fn csv_layout() {
        let (infra, cat) = world();
        let env = Environment::new(&infra, &cat, Strategy::Static(BaselineId::Cera), None).unwrap();
        let r = run_experiment(&env, 3, 1).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "slot,arrivals_0,arrivals_1,admissions_0,admissions_1,placement_cost,backups,cumulative_admission_ratio"
        );
        assert_eq!(lines.count(), 3);
        assert_eq!(r.summary.per_vnf_count.iter().map(|v| v.num_vnfs).collect::<Vec<_>>(), vec![1, 2]);
    }
}
