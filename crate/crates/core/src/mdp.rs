// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Admission MDP: state indexing, feasible actions, transitions and reward.
//!
//! A state is an arrival vector `lambda` and an active-count vector `sigma`.
//! Indices are 0-based and mixed-radix with the first type varying fastest:
//! `index = arrival_index * |active states| + active_index`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ServiceCatalog;
use crate::trellis::VrsspOutput;

/// Default cap on `|states|`.
pub const DEFAULT_MAX_STATES: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepartureMode {
    /// Each active service leaves independently with its type's probability.
    #[default]
    Binomial,
    /// `prod_l d^(j - k)` without the binomial factor. Rows do not sum to one.
    PaperLiteral,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MdpState {
    pub arrivals: Vec<u32>,
    pub actives: Vec<u32>,
}

/// Mixed-radix index over vectors bounded componentwise by `max`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Radix {
    max: Vec<u32>,
    strides: Vec<usize>,
    len: usize,
}

impl Radix {
    fn new(max: Vec<u32>) -> Self {
        let mut strides = Vec::with_capacity(max.len());
        let mut len = 1usize;
        for &m in &max {
            strides.push(len);
            len *= m as usize + 1;
        }
        Radix { max, strides, len }
    }

    fn index(&self, v: &[u32]) -> Option<usize> {
        if v.len() != self.max.len() {
            return None;
        }
        let mut idx = 0;
        for ((&x, &m), &s) in v.iter().zip(&self.max).zip(&self.strides) {
            if x > m {
                return None;
            }
            idx += x as usize * s;
        }
        Some(idx)
    }

    fn vector(&self, mut idx: usize) -> Vec<u32> {
        self.max
            .iter()
            .map(|&m| {
                let base = m as usize + 1;
                let x = idx % base;
                idx /= base;
                x as u32
            })
            .collect()
    }
}

/// Enumeration of all states with index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    active: Radix,
    arrival: Radix,
}

impl StateSpace {
    /// Fails if the state count exceeds `max_states`.
    pub fn new(catalog: &ServiceCatalog, max_states: u128) -> Result<Self> {
        let sigma_max: Vec<u32> = catalog.iter().map(|t| t.sigma_max).collect();
        let lambda_max: Vec<u32> = catalog.iter().map(|t| t.lambda_max()).collect();
        let size: u128 = sigma_max.iter().chain(&lambda_max).map(|&m| u128::from(m) + 1).product();
        if size > max_states {
            return Err(Error::StateSpaceTooLarge { size, cap: max_states });
        }
        Ok(StateSpace { active: Radix::new(sigma_max), arrival: Radix::new(lambda_max) })
    }

    /// State space from explicit bounds, with no size cap beyond `usize`.
    pub fn from_bounds(sigma_max: Vec<u32>, lambda_max: Vec<u32>) -> Result<Self> {
        if sigma_max.len() != lambda_max.len() {
            return Err(Error::InvalidInput("sigma_max and lambda_max differ in length".into()));
        }
        let size: u128 = sigma_max.iter().chain(&lambda_max).map(|&m| u128::from(m) + 1).product();
        if size > usize::MAX as u128 {
            return Err(Error::StateSpaceTooLarge { size, cap: usize::MAX as u128 });
        }
        Ok(StateSpace { active: Radix::new(sigma_max), arrival: Radix::new(lambda_max) })
    }

    pub fn len(&self) -> usize {
        self.active.len * self.arrival.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_types(&self) -> usize {
        self.active.max.len()
    }

    pub fn num_active(&self) -> usize {
        self.active.len
    }

    pub fn num_arrival(&self) -> usize {
        self.arrival.len
    }

    pub fn sigma_max(&self) -> &[u32] {
        &self.active.max
    }

    pub fn lambda_max(&self) -> &[u32] {
        &self.arrival.max
    }

    pub fn active_index(&self, sigma: &[u32]) -> Option<usize> {
        self.active.index(sigma)
    }

    pub fn active_vector(&self, idx: usize) -> Vec<u32> {
        self.active.vector(idx)
    }

    pub fn arrival_index(&self, lambda: &[u32]) -> Option<usize> {
        self.arrival.index(lambda)
    }

    pub fn arrival_vector(&self, idx: usize) -> Vec<u32> {
        self.arrival.vector(idx)
    }

    pub fn index_of(&self, state: &MdpState) -> Option<usize> {
        Some(self.arrival_index(&state.arrivals)? * self.active.len + self.active_index(&state.actives)?)
    }

    pub fn state_of(&self, idx: usize) -> MdpState {
        MdpState {
            arrivals: self.arrival.vector(idx / self.active.len),
            actives: self.active.vector(idx % self.active.len),
        }
    }

    /// Feasible actions in lexicographic order (first type fastest); the zero
    /// action comes first.
    pub fn feasible_actions(&self, state: &MdpState) -> Vec<Vec<u32>> {
        let bounds: Vec<u32> = state
            .arrivals
            .iter()
            .zip(&state.actives)
            .zip(self.sigma_max())
            .map(|((&lam, &sig), &max)| lam.min(max.saturating_sub(sig)))
            .collect();
        let radix = Radix::new(bounds);
        (0..radix.len).map(|i| radix.vector(i)).collect()
    }
}

/// `a^l <= lambda^l` and `a^l + sigma^l <= sigma_max^l`.
pub fn is_feasible(action: &[u32], state: &MdpState, sigma_max: &[u32]) -> bool {
    action.len() == state.arrivals.len()
        && action
            .iter()
            .zip(&state.arrivals)
            .zip(&state.actives)
            .zip(sigma_max)
            .all(|(((&a, &lam), &sig), &max)| a <= lam && a + sig <= max)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Probability that one type goes from `j` to `k` actives at the slot end.
pub fn type_departure_prob(j: u32, k: u32, d: f64, mode: DepartureMode) -> f64 {
    if k > j {
        return 0.0;
    }
    let gone = (j - k) as i32;
    match mode {
        DepartureMode::Binomial => binomial(j, k) * d.powi(gone) * (1.0 - d).powi(k as i32),
        DepartureMode::PaperLiteral => d.powi(gone),
    }
}

pub fn departure_prob(j: &[u32], k: &[u32], catalog: &ServiceCatalog, mode: DepartureMode) -> f64 {
    j.iter().zip(k).zip(catalog.iter()).map(|((&j, &k), t)| type_departure_prob(j, k, t.departure_prob, mode)).product()
}

pub fn arrival_prob(i: &[u32], catalog: &ServiceCatalog) -> f64 {
    i.iter().zip(catalog.iter()).map(|(&x, t)| t.arrival_pmf.get(x as usize).copied().unwrap_or(0.0)).product()
}

/// Transition structure with per-type departure tables.
#[derive(Clone, Debug)]
pub struct TransitionModel {
    space: StateSpace,
    mode: DepartureMode,
    arrival: Vec<f64>,
    /// `dep[l][j * (max + 1) + k]`.
    dep: Vec<Vec<f64>>,
}

impl TransitionModel {
    pub fn new(space: StateSpace, catalog: &ServiceCatalog, mode: DepartureMode) -> Self {
        let arrival = (0..space.num_arrival()).map(|i| arrival_prob(&space.arrival_vector(i), catalog)).collect();
        let dep = catalog
            .iter()
            .map(|t| {
                let n = t.sigma_max + 1;
                let mut table = vec![0.0; (n * n) as usize];
                for j in 0..n {
                    for k in 0..=j {
                        table[(j * n + k) as usize] = type_departure_prob(j, k, t.departure_prob, mode);
                    }
                }
                table
            })
            .collect();
        TransitionModel { space, mode, arrival, dep }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn mode(&self) -> DepartureMode {
        self.mode
    }

    /// `P(next | state, A_r)`: arrivals of `next` times departures from
    /// `sigma + A_r` down to `next.actives`.
    pub fn transition_prob(&self, state: &MdpState, realized: &[u32], next: &MdpState) -> f64 {
        let Some(ai) = self.space.arrival_index(&next.arrivals) else { return 0.0 };
        let mut p = self.arrival[ai];
        for (l, ((&s, &a), &k)) in state.actives.iter().zip(realized).zip(&next.actives).enumerate() {
            let n = self.space.sigma_max()[l] + 1;
            let j = s + a;
            if j >= n || k >= n {
                return 0.0;
            }
            p *= self.dep[l][(j * n + k) as usize];
        }
        p
    }

    /// Every destination with nonzero probability from `sigma + A_r`, as
    /// `(global index, probability)`.
    pub fn row(&self, state: &MdpState, realized: &[u32]) -> Vec<(usize, f64)> {
        let source: Vec<u32> = state.actives.iter().zip(realized).map(|(s, a)| s + a).collect();
        let mut out = Vec::new();
        for ai in 0..self.space.num_arrival() {
            if self.arrival[ai] == 0.0 {
                continue;
            }
            let survivors = Radix::new(source.clone());
            for si in 0..survivors.len {
                let k = survivors.vector(si);
                let next = MdpState { arrivals: self.space.arrival_vector(ai), actives: k };
                let p = self.transition_prob(state, realized, &next);
                if p != 0.0 {
                    out.push((self.space.index_of(&next).expect("destination in range"), p));
                }
            }
        }
        out
    }

    /// `Z(j) = sum_{lambda', k} P(lambda') P(j -> k) V(lambda', k)` for every
    /// post-admission active vector `j`, indexed by active index.
    pub fn expected_values(&self, values: &[f64]) -> Vec<f64> {
        let na = self.space.num_active();
        let mut w = vec![0.0; na];
        for (ai, &pa) in self.arrival.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            for (wk, v) in w.iter_mut().zip(&values[ai * na..(ai + 1) * na]) {
                *wk += pa * v;
            }
        }
        // contract one type axis at a time
        for l in 0..self.space.num_types() {
            let n = self.space.sigma_max()[l] as usize + 1;
            let stride = self.space.active.strides[l];
            let mut next = vec![0.0; na];
            for (idx, out) in next.iter_mut().enumerate() {
                let j = (idx / stride) % n;
                let base = idx - j * stride;
                *out = (0..=j).map(|k| self.dep[l][j * n + k] * w[base + k * stride]).sum();
            }
            w = next;
        }
        w
    }
}

/// `sum_k [q * I(F - e) - cost]` over the batch; zero for an invalid run.
pub fn reward(output: &VrsspOutput, catalog: &ServiceCatalog) -> f64 {
    if !output.valid {
        return 0.0;
    }
    output
        .services
        .iter()
        .map(|s| {
            let q = if s.reliable(catalog) { catalog[s.service_type].admission_reward } else { 0.0 };
            q - s.cost
        })
        .sum()
}
