// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Exhaustive search over main/backup assignments of tiny instances.
//!
//! Every VNF of every service gets a main server and either no backup or a
//! backup on a different server, subject to the idle resources. Two optima
//! are reported: the cheapest assignment in which every service meets its
//! failure cap, and the smallest penalized objective
//! `sum cost + sum M * max(0, e - F)` over all assignments, which is the
//! quantity the trellis minimizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    meets_reliability, service_cost, service_failure_probability, Infrastructure, PlacementPlan, ServiceCatalog,
    ServicePlacement, VnfAssignment,
};

pub const MAX_SERVERS: usize = 6;
pub const MAX_SERVICES: usize = 2;
pub const MAX_VNFS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInstance {
    /// Service type of each service, in order.
    pub services: Vec<usize>,
    /// Idle resources (flat `|S| x |R|`); full capacity when absent.
    #[serde(default)]
    pub snapshot: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// A placement meeting every failure cap exists.
    pub feasible: bool,
    pub min_cost: Option<f64>,
    pub plan: Option<PlacementPlan>,
    pub failure_probs: Option<Vec<f64>>,
    /// `None` when not even the mains fit.
    pub min_objective: Option<f64>,
    pub objective_plan: Option<PlacementPlan>,
}

/// `M * max(0, e - F)`.
pub fn reliability_hinge(failure_prob: f64, failure_cap: f64, penalty: f64) -> f64 {
    (failure_prob - failure_cap).max(0.0) * penalty
}

#[derive(Clone, Copy, PartialEq)]
enum Goal {
    Reliable,
    Objective,
}

struct Search<'a> {
    infra: &'a Infrastructure,
    catalog: &'a ServiceCatalog,
    services: &'a [usize],
    /// (service, vnf) in placement order.
    slots: Vec<(usize, usize)>,
    remaining: Vec<u32>,
    current: Vec<VnfAssignment>,
    goal: Goal,
    best: Option<(f64, Vec<VnfAssignment>)>,
}

impl Search<'_> {
    fn fits(&self, s: usize, demands: &[u32]) -> bool {
        let r = self.infra.num_resources();
        demands.iter().enumerate().all(|(j, d)| self.remaining[s * r + j] >= *d)
    }

    fn adjust(&mut self, s: usize, demands: &[u32], take: bool) {
        let r = self.infra.num_resources();
        for (j, d) in demands.iter().enumerate() {
            if take {
                self.remaining[s * r + j] -= d;
            } else {
                self.remaining[s * r + j] += d;
            }
        }
    }

    /// Hosting of `a` plus routing from every instance of the previous VNF.
    fn step_cost(&self, k: usize, u: usize, a: VnfAssignment) -> f64 {
        let st = &self.catalog[self.services[k]];
        let vnf = &st.vnfs[u];
        let mut c: f64 = a.servers().map(|s| self.infra.hosting_cost(s, vnf)).sum();
        if u > 0 {
            let prev = self.current[self.current.len() - 1];
            for x in prev.servers() {
                for y in a.servers() {
                    c += st.bandwidth * self.infra.link_cost(x, y);
                }
            }
        }
        c
    }

    /// `cost` holds the placement cost so far plus the hinge of finished
    /// services; `running` is the current service's running probability.
    fn dfs(&mut self, depth: usize, cost: f64, running: f64) {
        if let Some((b, _)) = &self.best {
            if cost >= *b {
                return;
            }
        }
        if depth == self.slots.len() {
            self.best = Some((cost, self.current.clone()));
            return;
        }
        let (k, u) = self.slots[depth];
        let st = &self.catalog[self.services[k]];
        let demands = st.vnfs[u].demands.clone();
        let n = self.infra.num_servers();
        for main in 0..n {
            if !self.fits(main, &demands) {
                continue;
            }
            self.adjust(main, &demands, true);
            for backup in std::iter::once(None).chain((0..n).filter(|&b| b != main).map(Some)) {
                if let Some(b) = backup {
                    if !self.fits(b, &demands) {
                        continue;
                    }
                    self.adjust(b, &demands, true);
                }
                let a = VnfAssignment { main, backup };
                let f = self.infra.failure_prob(main) * backup.map_or(1.0, |b| self.infra.failure_prob(b));
                let run = running * (1.0 - f);
                let mut c = cost + self.step_cost(k, u, a);
                let last = u + 1 == st.num_vnfs();
                let prune = match self.goal {
                    // the failure probability only grows with more VNFs
                    Goal::Reliable => !meets_reliability(1.0 - run, st.failure_cap),
                    Goal::Objective => {
                        let h = reliability_hinge(1.0 - run, st.failure_cap, st.penalty);
                        if last {
                            c += h;
                            false
                        } else {
                            self.best.as_ref().is_some_and(|(b, _)| c + h >= *b)
                        }
                    }
                };
                if !prune {
                    self.current.push(a);
                    self.dfs(depth + 1, c, if last { 1.0 } else { run });
                    self.current.pop();
                }
                if let Some(b) = backup {
                    self.adjust(b, &demands, false);
                }
            }
            self.adjust(main, &demands, false);
        }
    }
}

fn plan_from(flat: &[VnfAssignment], services: &[usize], catalog: &ServiceCatalog) -> PlacementPlan {
    let mut plan = PlacementPlan::default();
    let mut it = flat.iter();
    for &l in services {
        let vnfs = it.by_ref().take(catalog[l].num_vnfs()).copied().collect();
        plan.services.push(ServicePlacement { service_type: l, vnfs });
    }
    plan
}

/// Checks the enumeration bound and the instance's references.
pub fn check_instance(instance: &OracleInstance, infra: &Infrastructure, catalog: &ServiceCatalog) -> Result<()> {
    if infra.num_servers() > MAX_SERVERS {
        return Err(Error::EnumerationBound(format!("{} servers (max {MAX_SERVERS})", infra.num_servers())));
    }
    if instance.services.len() > MAX_SERVICES {
        return Err(Error::EnumerationBound(format!("{} services (max {MAX_SERVICES})", instance.services.len())));
    }
    for &l in &instance.services {
        if l >= catalog.len() {
            return Err(Error::InvalidInput(format!("service type {l} is not in the catalog")));
        }
        if catalog[l].num_vnfs() > MAX_VNFS {
            return Err(Error::EnumerationBound(format!(
                "service type {l} has {} VNFs (max {MAX_VNFS})",
                catalog[l].num_vnfs()
            )));
        }
    }
    if let Some(s) = &instance.snapshot {
        if s.len() != infra.capacities().len() || s.iter().zip(infra.capacities()).any(|(a, c)| a > c) {
            return Err(Error::InvalidInput("snapshot does not fit the infrastructure".into()));
        }
    }
    Ok(())
}

pub fn solve(instance: &OracleInstance, infra: &Infrastructure, catalog: &ServiceCatalog) -> Result<OracleResult> {
    check_instance(instance, infra, catalog)?;
    let slots: Vec<(usize, usize)> = instance
        .services
        .iter()
        .enumerate()
        .flat_map(|(k, &l)| (0..catalog[l].num_vnfs()).map(move |u| (k, u)))
        .collect();
    let snapshot = instance.snapshot.clone().unwrap_or_else(|| infra.capacities().to_vec());
    let run = |goal| {
        let mut s = Search {
            infra,
            catalog,
            services: &instance.services,
            slots: slots.clone(),
            remaining: snapshot.clone(),
            current: Vec::new(),
            goal,
            best: None,
        };
        s.dfs(0, 0.0, 1.0);
        s.best
    };

    let reliable = run(Goal::Reliable);
    let objective = run(Goal::Objective);
    let (min_cost, plan, failure_probs) = match reliable {
        Some((_, flat)) => {
            let plan = plan_from(&flat, &instance.services, catalog);
            let mut total = 0.0;
            let mut probs = Vec::new();
            for p in &plan.services {
                total += service_cost(p, infra, catalog)?.total;
                probs.push(service_failure_probability(&p.vnfs, infra));
            }
            (Some(total), Some(plan), Some(probs))
        }
        None => (None, None, None),
    };
    Ok(OracleResult {
        feasible: plan.is_some(),
        min_cost,
        plan,
        failure_probs,
        min_objective: objective.as_ref().map(|(c, _)| *c),
        objective_plan: objective.map(|(_, flat)| plan_from(&flat, &instance.services, catalog)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::COST_TOL;

    #[test]
    fn tiny_instance_optimum() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let r = solve(&OracleInstance { services: vec![0], snapshot: None }, &infra, &cat).unwrap();
        assert!(r.feasible);
        assert!((r.min_cost.unwrap() - 15.0).abs() < COST_TOL);
        assert!((r.failure_probs.unwrap()[0] - 0.02).abs() < 1e-12);
        assert!((r.min_objective.unwrap() - 15.0).abs() < COST_TOL);
    }

    #[test]
    fn infeasible_reliability() {
        let infra = matrix_infra(&[0.5], &[10], 0.0, 0.0);
        let cat = ServiceCatalog(vec![one_vnf_type(1, 0.01)]);
        let r = solve(&OracleInstance { services: vec![0], snapshot: None }, &infra, &cat).unwrap();
        assert!(!r.feasible);
        assert!(r.min_cost.is_none());
        // main only: cost exp(0) * 1 plus hinge 1e6 * 0.49
        assert!((r.min_objective.unwrap() - (1.0 + 0.49e6)).abs() < 1e-6);
    }

    #[test]
    fn no_services() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(5, 0.05)]);
        let r = solve(&OracleInstance { services: vec![], snapshot: None }, &infra, &cat).unwrap();
        assert!(r.feasible);
        assert_eq!(r.min_cost, Some(0.0));
        assert_eq!(r.min_objective, Some(0.0));
    }

    #[test]
    fn nothing_fits() {
        let infra = tiny_infra();
        let cat = ServiceCatalog(vec![one_vnf_type(11, 0.05)]);
        let r = solve(&OracleInstance { services: vec![0], snapshot: None }, &infra, &cat).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.min_objective, None);
    }

    #[test]
    fn bounds_enforced() {
        let infra = matrix_infra(&[0.1; 7], &[10; 7], 0.0, 0.0);
        let cat = ServiceCatalog(vec![one_vnf_type(1, 0.05)]);
        assert!(matches!(
            solve(&OracleInstance { services: vec![0], snapshot: None }, &infra, &cat),
            Err(Error::EnumerationBound(_))
        ));
        let small = tiny_infra();
        assert!(matches!(
            solve(&OracleInstance { services: vec![0, 0, 0], snapshot: None }, &small, &cat),
            Err(Error::EnumerationBound(_))
        ));
    }

    #[test]
    fn brute_force_agrees_without_pruning() {
        // plain enumeration over 2 VNFs on 3 servers
        let infra = matrix_infra(&[0.05, 0.1, 0.2], &[12, 12, 12], 0.3, 1.0);
        let mut st = one_vnf_type(4, 0.02);
        st.vnfs.push(st.vnfs[0].clone());
        let cat = ServiceCatalog(vec![st]);
        let r = solve(&OracleInstance { services: vec![0], snapshot: None }, &infra, &cat).unwrap();
        let opts: Vec<VnfAssignment> = (0..3)
            .flat_map(|m| {
                std::iter::once(None)
                    .chain((0..3).filter(move |&b| b != m).map(Some))
                    .map(move |b| VnfAssignment { main: m, backup: b })
            })
            .collect();
        let mut best = f64::INFINITY;
        for a in &opts {
            for b in &opts {
                let p = ServicePlacement { service_type: 0, vnfs: vec![*a, *b] };
                let usage = p.usage(&infra, &cat);
                if usage.iter().any(|&x| x > 12) {
                    continue;
                }
                let e = service_failure_probability(&p.vnfs, &infra);
                if e <= 0.02 {
                    best = best.min(service_cost(&p, &infra, &cat).unwrap().total);
                }
            }
        }
        assert!((r.min_cost.unwrap() - best).abs() < COST_TOL);
    }
}
