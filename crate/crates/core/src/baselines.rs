// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Static comparison heuristics.
//!
//! MinResource, MinReliability and CERA place every main first (cheapest
//! feasible server per VNF) and then add backups service by service.
//! RedundantVNF builds each service completely, mains and backups, before
//! moving to the next one and rolls back services that cannot reach their
//! failure cap. `VrsspGreedy` feeds the whole batch to the trellis.
//!
//! All functions work on a scratch [`ResourceLedger`]; servers are taken from
//! it as they are assigned. Ties go to the lowest VNF index, then the lowest
//! server index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{
    meets_reliability, service_cost, service_failure_probability, Infrastructure, PlacementPlan, ResourceLedger,
    ServerId, ServiceCatalog, ServicePlacement, VnfAssignment,
};
use crate::trellis::{run_vrssp_dropping, VrsspInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineId {
    MinResource,
    MinReliability,
    Cera,
    RedundantVnf,
    VrsspGreedy,
}

impl BaselineId {
    pub const ALL: [BaselineId; 5] = [
        BaselineId::MinResource,
        BaselineId::MinReliability,
        BaselineId::Cera,
        BaselineId::RedundantVnf,
        BaselineId::VrsspGreedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineId::MinResource => "min-resource",
            BaselineId::MinReliability => "min-reliability",
            BaselineId::Cera => "cera",
            BaselineId::RedundantVnf => "redundant-vnf",
            BaselineId::VrsspGreedy => "vrssp",
        }
    }
}

impl fmt::Display for BaselineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "min-resource" | "minresource" => BaselineId::MinResource,
            "min-reliability" | "minreliability" => BaselineId::MinReliability,
            "cera" => BaselineId::Cera,
            "redundant-vnf" | "redundantvnf" => BaselineId::RedundantVnf,
            "vrssp" | "vrssp-greedy" | "vrsspgreedy" => BaselineId::VrsspGreedy,
            _ => return Err(Error::InvalidInput(format!("unknown strategy `{s}`"))),
        })
    }
}

fn hosting(infra: &Infrastructure, catalog: &ServiceCatalog, service_type: usize, vnf: usize, server: ServerId) -> f64 {
    infra.hosting_cost(server, &catalog[service_type].vnfs[vnf])
}

/// Places the mains of one service, each VNF on the feasible server with the
/// lowest hosting plus routing cost from the previous VNF. Returns `None`
/// (with the ledger untouched) if some VNF fits nowhere.
pub fn place_mains(
    service_type: usize,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> Option<ServicePlacement> {
    let st = &catalog[service_type];
    let mut vnfs: Vec<VnfAssignment> = Vec::with_capacity(st.num_vnfs());
    for (u, vnf) in st.vnfs.iter().enumerate() {
        let mut best: Option<(f64, ServerId)> = None;
        for s in 0..infra.num_servers() {
            if !ledger.fits(s, &vnf.demands) {
                continue;
            }
            let routing = vnfs.last().map_or(0.0, |p| st.bandwidth * infra.link_cost(p.main, s));
            let c = hosting(infra, catalog, service_type, u, s) + routing;
            if best.map_or(true, |(b, _)| c < b) {
                best = Some((c, s));
            }
        }
        match best {
            Some((_, s)) => {
                ledger.take(s, &vnf.demands).expect("fits was checked");
                vnfs.push(VnfAssignment::main_only(s));
            }
            None => {
                for (a, v) in vnfs.iter().zip(&st.vnfs) {
                    ledger.give_back(a.main, &v.demands, infra).expect("taken above");
                }
                return None;
            }
        }
    }
    Some(ServicePlacement { service_type, vnfs })
}

/// Mains for every service in order; rejected services are `None`.
pub fn greedy_main_placement(
    services: &[usize],
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> Vec<Option<ServicePlacement>> {
    services.iter().map(|&l| place_mains(l, ledger, infra, catalog)).collect()
}

fn failure(p: &ServicePlacement, infra: &Infrastructure) -> f64 {
    service_failure_probability(&p.vnfs, infra)
}

pub fn is_reliable(p: &ServicePlacement, infra: &Infrastructure, catalog: &ServiceCatalog) -> bool {
    meets_reliability(failure(p, infra), catalog[p.service_type].failure_cap)
}

fn cost(p: &ServicePlacement, infra: &Infrastructure, catalog: &ServiceCatalog) -> f64 {
    service_cost(p, infra, catalog).expect("placement references valid servers").total
}

/// Servers that can host a backup of VNF `u`.
fn backup_candidates(
    p: &ServicePlacement,
    u: usize,
    ledger: &ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> Vec<ServerId> {
    let demands = &catalog[p.service_type].vnfs[u].demands;
    (0..infra.num_servers()).filter(|&s| s != p.vnfs[u].main && ledger.fits(s, demands)).collect()
}

fn with_backup(p: &ServicePlacement, u: usize, s: ServerId) -> ServicePlacement {
    let mut q = p.clone();
    q.vnfs[u].backup = Some(s);
    q
}

/// Cheapest candidate that makes the service reliable, else the most
/// reliable candidate.
fn choose_backup_server(
    p: &ServicePlacement,
    u: usize,
    candidates: &[ServerId],
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> ServerId {
    let base = cost(p, infra, catalog);
    let mut cheapest: Option<(f64, ServerId)> = None;
    for &s in candidates {
        let q = with_backup(p, u, s);
        if is_reliable(&q, infra, catalog) {
            let c = cost(&q, infra, catalog) - base;
            if cheapest.map_or(true, |(b, _)| c < b) {
                cheapest = Some((c, s));
            }
        }
    }
    if let Some((_, s)) = cheapest {
        return s;
    }
    let mut best = candidates[0];
    for &s in &candidates[1..] {
        if infra.failure_prob(s) < infra.failure_prob(best) {
            best = s;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VnfRule {
    /// Smallest total demand first.
    MinResource,
    /// Highest failure probability first.
    MinReliability,
}

fn pick_vnf(
    p: &ServicePlacement,
    open: &[usize],
    rule: VnfRule,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> usize {
    let st = &catalog[p.service_type];
    let mut best = open[0];
    for &u in &open[1..] {
        let better = match rule {
            VnfRule::MinResource => {
                let d = |u: usize| st.vnfs[u].demands.iter().map(|&x| u64::from(x)).sum::<u64>();
                d(u) < d(best)
            }
            VnfRule::MinReliability => infra.failure_prob(p.vnfs[u].main) > infra.failure_prob(p.vnfs[best].main),
        };
        if better {
            best = u;
        }
    }
    best
}

/// Adds backups one VNF at a time under `rule` until the service is reliable
/// or no VNF can take one.
fn add_backups_by_rule(
    p: &mut ServicePlacement,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
    rule: VnfRule,
) {
    let mut exhausted = vec![false; p.vnfs.len()];
    while !is_reliable(p, infra, catalog) {
        let open: Vec<usize> = (0..p.vnfs.len()).filter(|&u| p.vnfs[u].backup.is_none() && !exhausted[u]).collect();
        if open.is_empty() {
            return;
        }
        let u = pick_vnf(p, &open, rule, infra, catalog);
        let candidates = backup_candidates(p, u, ledger, infra, catalog);
        if candidates.is_empty() {
            exhausted[u] = true;
            continue;
        }
        let s = choose_backup_server(p, u, &candidates, infra, catalog);
        ledger.take(s, &catalog[p.service_type].vnfs[u].demands).expect("candidate fits");
        p.vnfs[u].backup = Some(s);
    }
}

/// CIM = reliability gain / incremental cost; commits the best pair until the
/// service is reliable. A zero-cost pair has infinite CIM.
fn add_backups_cera(
    p: &mut ServicePlacement,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) {
    while !is_reliable(p, infra, catalog) {
        let base_cost = cost(p, infra, catalog);
        let base_rel = 1.0 - failure(p, infra);
        let mut best: Option<(f64, usize, ServerId)> = None;
        for u in 0..p.vnfs.len() {
            if p.vnfs[u].backup.is_some() {
                continue;
            }
            for s in backup_candidates(p, u, ledger, infra, catalog) {
                let q = with_backup(p, u, s);
                let gain = 1.0 - failure(&q, infra) - base_rel;
                let c = cost(&q, infra, catalog) - base_cost;
                let cim = if c <= 0.0 { f64::INFINITY } else { gain / c };
                if best.map_or(true, |(b, _, _)| cim > b) {
                    best = Some((cim, u, s));
                }
            }
        }
        let Some((_, u, s)) = best else { return };
        ledger.take(s, &catalog[p.service_type].vnfs[u].demands).expect("candidate fits");
        p.vnfs[u].backup = Some(s);
    }
}

fn backup_pass(
    plan: &mut PlacementPlan,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
    f: impl Fn(&mut ServicePlacement, &mut ResourceLedger),
) {
    for p in &mut plan.services {
        if !is_reliable(p, infra, catalog) {
            f(p, ledger);
        }
    }
}

/// Backups for the VNF with the smallest total demand first.
pub fn min_resource_backup(
    plan: &mut PlacementPlan,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) {
    backup_pass(plan, ledger, infra, catalog, |p, l| add_backups_by_rule(p, l, infra, catalog, VnfRule::MinResource));
}

/// Backups for the least reliable VNF first.
pub fn min_reliability_backup(
    plan: &mut PlacementPlan,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) {
    backup_pass(plan, ledger, infra, catalog, |p, l| {
        add_backups_by_rule(p, l, infra, catalog, VnfRule::MinReliability)
    });
}

/// Backups by cost importance measure.
pub fn cera_backup(
    plan: &mut PlacementPlan,
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) {
    backup_pass(plan, ledger, infra, catalog, |p, l| add_backups_cera(p, l, infra, catalog));
}

fn release(p: &ServicePlacement, ledger: &mut ResourceLedger, infra: &Infrastructure, catalog: &ServiceCatalog) {
    let st = &catalog[p.service_type];
    for (a, v) in p.vnfs.iter().zip(&st.vnfs) {
        for s in a.servers() {
            ledger.give_back(s, &v.demands, infra).expect("released what was taken");
        }
    }
}

/// Service by service: mains, then backups on the least reliable VNF until
/// the cap is met; services that cannot reach it are rolled back.
pub fn redundant_vnf_place(
    services: &[usize],
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> PlacementPlan {
    let mut plan = PlacementPlan::default();
    for &l in services {
        let Some(mut p) = place_mains(l, ledger, infra, catalog) else { continue };
        add_backups_by_rule(&mut p, ledger, infra, catalog, VnfRule::MinReliability);
        if is_reliable(&p, infra, catalog) {
            plan.services.push(p);
        } else {
            release(&p, ledger, infra, catalog);
        }
    }
    plan
}

/// Placement attempt for one batch.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BatchResult {
    /// Services that met their failure cap, in input order.
    pub admitted: Vec<ServicePlacement>,
    /// Input positions of the admitted services.
    pub positions: Vec<usize>,
}

/// Runs baseline `id` on `services` (type indices, in placement order).
/// `ledger` is a scratch copy; on return it holds only the admitted services.
pub fn place_batch(
    id: BaselineId,
    services: &[usize],
    ledger: &mut ResourceLedger,
    infra: &Infrastructure,
    catalog: &ServiceCatalog,
) -> BatchResult {
    let mut result = BatchResult::default();
    match id {
        BaselineId::VrsspGreedy => {
            if services.is_empty() {
                return result;
            }
            let input =
                VrsspInput::from_arrangement(services.to_vec(), catalog.len(), ledger.server_idle().to_vec(), infra)
                    .expect("service types are valid and the ledger fits the infrastructure");
            let (out, _) = run_vrssp_dropping(&input, catalog, infra);
            for s in out.services {
                if s.reliable(catalog) {
                    for (a, v) in s.placement.vnfs.iter().zip(&catalog[s.service_type].vnfs) {
                        for srv in a.servers() {
                            ledger.take(srv, &v.demands).expect("trellis path is resource-feasible");
                        }
                    }
                    result.positions.push(s.position);
                    result.admitted.push(s.placement);
                }
            }
        }
        BaselineId::RedundantVnf => {
            // positions recovered by matching in order
            let plan = redundant_vnf_place(services, ledger, infra, catalog);
            let mut next = 0;
            for p in plan.services {
                while services[next] != p.service_type {
                    next += 1;
                }
                result.positions.push(next);
                next += 1;
                result.admitted.push(p);
            }
        }
        _ => {
            let mains = greedy_main_placement(services, ledger, infra, catalog);
            let positions: Vec<usize> = mains.iter().enumerate().filter(|(_, m)| m.is_some()).map(|(k, _)| k).collect();
            let mut plan = PlacementPlan { services: mains.into_iter().flatten().collect() };
            match id {
                BaselineId::MinResource => min_resource_backup(&mut plan, ledger, infra, catalog),
                BaselineId::MinReliability => min_reliability_backup(&mut plan, ledger, infra, catalog),
                _ => cera_backup(&mut plan, ledger, infra, catalog),
            }
            for (p, k) in plan.services.into_iter().zip(positions) {
                if is_reliable(&p, infra, catalog) {
                    result.admitted.push(p);
                    result.positions.push(k);
                } else {
                    release(&p, ledger, infra, catalog);
                }
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::validate_plan;

    #[test]
    fn names_round_trip() {
        for id in BaselineId::ALL {
            assert_eq!(id.name().parse::<BaselineId>().unwrap(), id);
        }
        assert_eq!("RedundantVNF".parse::<BaselineId>().unwrap(), BaselineId::RedundantVnf);
        assert!("nope".parse::<BaselineId>().is_err());
    }

    #[test]
    fn mains_co_locate_on_cheap_server() {
        let infra = matrix_infra(&[0.1, 0.01], &[100, 100], 1.0, 0.0);
        let mut st = one_vnf_type(5, 0.5);
        st.vnfs = vec![st.vnfs[0].clone(); 3];
        let cat = ServiceCatalog(vec![st]);
        let mut ledger = ResourceLedger::full(&infra);
        let p = place_mains(0, &mut ledger, &infra, &cat).unwrap();
        // v = 0.1 is the cheaper server under beta = 1, v_base = 0.5
        assert!(p.vnfs.iter().all(|a| a.main == 0));
    }

    #[test]
    fn tiny_main_on_cost_one_server() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let mut ledger = ResourceLedger::full(&infra);
        let p = place_mains(0, &mut ledger, &infra, &cat).unwrap();
        assert_eq!(p.vnfs[0].main, 1);
        assert_eq!(ledger.server_idle(), &[10, 5]);
    }

    #[test]
    fn zero_capacity_rejects_everything() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let mut ledger = ResourceLedger::with_server_idle(&infra, vec![0, 0]).unwrap();
        assert_eq!(greedy_main_placement(&[0, 0], &mut ledger, &infra, &cat), vec![None, None]);
        for id in BaselineId::ALL {
            assert!(place_batch(id, &[0, 0], &mut ledger.clone(), &infra, &cat).admitted.is_empty());
        }
    }

    #[test]
    fn rejected_mains_roll_back() {
        let infra = tiny_infra();
        let mut st = one_vnf_type(6, 0.5);
        st.vnfs.push(st.vnfs[0].clone());
        st.vnfs.push(st.vnfs[0].clone());
        let cat = ServiceCatalog(vec![st]);
        let mut ledger = ResourceLedger::full(&infra);
        assert!(place_mains(0, &mut ledger, &infra, &cat).is_none());
        assert_eq!(ledger.server_idle(), &[10, 10]);
    }

    #[test]
    fn min_resource_adds_backup_on_tiny() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let mut ledger = ResourceLedger::full(&infra);
        let mut plan = PlacementPlan {
            services: greedy_main_placement(&[0], &mut ledger, &infra, &cat).into_iter().flatten().collect(),
        };
        min_resource_backup(&mut plan, &mut ledger, &infra, &cat);
        let p = &plan.services[0];
        assert_eq!(p.vnfs[0], VnfAssignment { main: 1, backup: Some(0) });
        assert!((failure(p, &infra) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn reliable_service_unchanged() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.5)]);
        for f in [min_resource_backup, min_reliability_backup, cera_backup] {
            let mut ledger = ResourceLedger::full(&infra);
            let mut plan = PlacementPlan {
                services: greedy_main_placement(&[0], &mut ledger, &infra, &cat).into_iter().flatten().collect(),
            };
            let before = plan.clone();
            f(&mut plan, &mut ledger, &infra, &cat);
            assert_eq!(plan, before);
        }
    }

    #[test]
    fn no_spare_capacity_leaves_service_unreliable() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let mut ledger = ResourceLedger::with_server_idle(&infra, vec![0, 5]).unwrap();
        let mut plan = PlacementPlan {
            services: greedy_main_placement(&[0], &mut ledger, &infra, &cat).into_iter().flatten().collect(),
        };
        min_resource_backup(&mut plan, &mut ledger, &infra, &cat);
        assert!(plan.services[0].vnfs[0].backup.is_none());
        assert!(!is_reliable(&plan.services[0], &infra, &cat));
    }

    #[test]
    fn min_reliability_targets_weakest_vnf() {
        // mains forced onto v = 0.07 and v = 0.01 by capacity
        let infra = matrix_infra(&[0.07, 0.01, 0.02], &[5, 5, 10], 0.0, 0.0);
        let mut st = one_vnf_type(5, 0.02);
        st.vnfs.push(st.vnfs[0].clone());
        let cat = ServiceCatalog(vec![st]);
        let mut ledger = ResourceLedger::full(&infra);
        let p =
            ServicePlacement { service_type: 0, vnfs: vec![VnfAssignment::main_only(0), VnfAssignment::main_only(1)] };
        ledger.take(0, &[5]).unwrap();
        ledger.take(1, &[5]).unwrap();
        let mut plan = PlacementPlan { services: vec![p] };
        min_reliability_backup(&mut plan, &mut ledger, &infra, &cat);
        assert_eq!(plan.services[0].vnfs[0].backup, Some(2));
    }

    #[test]
    fn equal_reliability_ties_to_lowest_vnf() {
        let infra = matrix_infra(&[0.1, 0.1, 0.1], &[10, 10, 10], 0.0, 0.0);
        let mut st = one_vnf_type(5, 0.5);
        st.failure_cap = 0.15;
        st.vnfs.push(st.vnfs[0].clone());
        let cat = ServiceCatalog(vec![st]);
        let mut ledger = ResourceLedger::full(&infra);
        let mut plan = PlacementPlan {
            services: greedy_main_placement(&[0], &mut ledger, &infra, &cat).into_iter().flatten().collect(),
        };
        min_reliability_backup(&mut plan, &mut ledger, &infra, &cat);
        let p = &plan.services[0];
        assert!(p.vnfs[0].backup.is_some());
        assert!(p.vnfs[1].backup.is_none());
    }

    #[test]
    fn cera_prefers_higher_gain_per_cost() {
        // VNF 0 main on v = 0.5; backup options: server 1 (v = 0.1) and 2 (v = 0.3)
        let infra = matrix_infra(&[0.5, 0.1, 0.3], &[100, 100, 100], 0.0, 1.0);
        let cat = ServiceCatalog(vec![one_vnf_type(1, 0.06)]);
        let mut ledger = ResourceLedger::full(&infra);
        ledger.take(0, &[1]).unwrap();
        let mut plan = PlacementPlan {
            services: vec![ServicePlacement { service_type: 0, vnfs: vec![VnfAssignment::main_only(0)] }],
        };
        cera_backup(&mut plan, &mut ledger, &infra, &cat);
        // oracle: ratio of gain over cost per candidate
        let cost_of = |s: usize| infra.hosting_cost(s, &cat[0].vnfs[0]);
        let cim = |s: usize| (0.5 - 0.5 * infra.failure_prob(s)) / cost_of(s);
        let expect = if cim(2) > cim(1) { 2 } else { 1 };
        assert_eq!(plan.services[0].vnfs[0].backup, Some(expect));
    }

    #[test]
    fn cera_zero_cost_candidate_first() {
        let mut infra_spec = matrix_infra(&[0.5, 0.1, 0.3], &[100, 100, 100], 0.0, 0.0).spec().clone();
        infra_spec.alpha = vec![0.0];
        let infra = Infrastructure::new(infra_spec).unwrap();
        let cat = ServiceCatalog(vec![one_vnf_type(1, 0.2)]);
        let mut ledger = ResourceLedger::full(&infra);
        ledger.take(0, &[1]).unwrap();
        let mut plan = PlacementPlan {
            services: vec![ServicePlacement { service_type: 0, vnfs: vec![VnfAssignment::main_only(0)] }],
        };
        cera_backup(&mut plan, &mut ledger, &infra, &cat);
        // both free: infinite CIM, first wins
        assert_eq!(plan.services[0].vnfs[0].backup, Some(1));
    }

    #[test]
    fn redundant_vnf_prefers_short_chains_under_scarcity() {
        let infra = matrix_infra(&[0.1, 0.1, 0.1], &[10, 10, 10], 0.0, 0.0);
        let mut long = one_vnf_type(5, 0.05);
        long.vnfs = vec![long.vnfs[0].clone(); 4];
        let short = one_vnf_type(5, 0.05);
        let cat = ServiceCatalog(vec![long, short]);
        let mut ledger = ResourceLedger::full(&infra);
        let plan = redundant_vnf_place(&[0, 1], &mut ledger, &infra, &cat);
        assert_eq!(plan.services.len(), 1);
        assert_eq!(plan.services[0].service_type, 1);
        assert_eq!(redundant_vnf_place(&[], &mut ledger, &infra, &cat).services.len(), 0);
    }

    #[test]
    fn batch_outputs_validate() {
        let infra = matrix_infra(&[0.05, 0.03, 0.01, 0.02], &[30, 30, 30, 30], 0.5, 1.0);
        let mut a = one_vnf_type(7, 0.01);
        a.vnfs = vec![a.vnfs[0].clone(); 3];
        let b = one_vnf_type(9, 0.02);
        let cat = ServiceCatalog(vec![a, b]);
        for id in BaselineId::ALL {
            let full = ResourceLedger::full(&infra);
            let mut ledger = full.clone();
            let res = place_batch(id, &[0, 1, 0, 1, 1], &mut ledger, &infra, &cat);
            let plan = PlacementPlan { services: res.admitted.clone() };
            assert!(validate_plan(&plan, &full, &infra, &cat).is_empty(), "{id}");
            let mut check = full.clone();
            for p in &plan.services {
                check.allocate(p, &infra, &cat).unwrap();
            }
            assert_eq!(check.server_idle(), ledger.server_idle(), "{id}");
            assert_eq!(res.admitted.len(), res.positions.len());
        }
    }
}
