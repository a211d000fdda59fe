// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

//! Commands behind the `relplace` binary.
//!
//! Every command reads an [`ExperimentConfig`] and writes plain files:
//!
//! | command    | output                                                     |
//! |------------|------------------------------------------------------------|
//! | `solve`    | `<out>/policy.json`, `<out>/trace.csv`                     |
//! | `simulate` | `<out>/slots.csv`, `<out>/summary.json`                    |
//! | `compare`  | `<out>/compare.csv`, `<out>/runs.csv`, `<out>/by_vnf_count.csv` |
//! | `oracle`   | JSON on stdout                                             |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use relplace_core::config::{load_config, ExperimentConfig};
use relplace_core::oracle::{self, OracleInstance, OracleResult};
use relplace_core::policy::{Policy, Solver};
use relplace_core::sim::{run_experiment, Environment, MetricsReport, Strategy, Summary};
use relplace_core::Error;

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn out_dir(out: &Path) -> Result<PathBuf> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    Ok(out.to_path_buf())
}

pub fn trace_csv(policy_trace: &[f64], diffs: &[f64]) -> String {
    let mut s = String::from("iteration,mean_value,sup_norm_diff\n");
    for (n, (v, d)) in policy_trace.iter().zip(diffs).enumerate() {
        let _ = writeln!(s, "{},{v},{d}", n + 1);
    }
    s
}

/// Solves the policy; the trace is written even if value iteration does not
/// converge.
pub fn solve(cfg: &ExperimentConfig) -> Result<Policy, (Error, Vec<f64>, Vec<f64>)> {
    let mut solver =
        Solver::new(&cfg.infrastructure, &cfg.service_types, cfg.mdp.clone()).map_err(|e| (e, vec![], vec![]))?;
    let eps = cfg.mdp.epsilon_for(&cfg.service_types);
    while solver.diffs().len() < cfg.mdp.max_iterations {
        let d = solver.sweep();
        if solver.diffs().len() >= 2 && d < eps {
            return Ok(solver.into_policy(true));
        }
    }
    let (trace, diffs) = (solver.trace().to_vec(), solver.diffs().to_vec());
    Err((
        Error::NonConvergence {
            iterations: diffs.len(),
            last_diff: *diffs.last().unwrap_or(&f64::INFINITY),
            trace: trace.clone(),
        },
        trace,
        diffs,
    ))
}

/// `seed` overrides `mdp.seed` from the config.
pub fn cmd_solve(config: &Path, seed: Option<u64>, out: &Path) -> Result<Policy> {
    let mut cfg = load_config(config)?;
    if let Some(seed) = seed {
        cfg.mdp.seed = seed;
    }
    let dir = out_dir(out)?;
    match solve(&cfg) {
        Ok(policy) => {
            write(&dir.join("trace.csv"), &trace_csv(&policy.trace, &policy.diffs))?;
            write(&dir.join("policy.json"), &policy.to_json()?)?;
            Ok(policy)
        }
        Err((e, trace, diffs)) => {
            if !trace.is_empty() {
                write(&dir.join("trace.csv"), &trace_csv(&trace, &diffs))?;
            }
            Err(e.into())
        }
    }
}

pub fn load_policy(path: &Path) -> Result<Policy> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Policy::from_json(&text)?)
}

pub fn simulate(
    cfg: &ExperimentConfig,
    policy: Option<&Policy>,
    strategy: Strategy,
    slots: u64,
    seed: u64,
) -> Result<MetricsReport> {
    let env = Environment::new(&cfg.infrastructure, &cfg.service_types, strategy, policy)?;
    Ok(run_experiment(&env, slots, seed)?)
}

pub fn cmd_simulate(
    config: &Path,
    policy: Option<&Path>,
    strategy: &str,
    slots: Option<u64>,
    seed: Option<u64>,
    out: &Path,
) -> Result<Summary> {
    let cfg = load_config(config)?;
    let strategy: Strategy = strategy.parse()?;
    let policy = match (strategy, policy) {
        (Strategy::Mdp, None) => {
            return Err(Error::InvalidInput("--policy is required for the mdp strategy".into()).into())
        }
        (_, Some(p)) => Some(load_policy(p)?),
        (_, None) => None,
    };
    let report =
        simulate(&cfg, policy.as_ref(), strategy, slots.unwrap_or(cfg.sim.slots), seed.unwrap_or(cfg.sim.seed))?;
    let dir = out_dir(out)?;
    write(&dir.join("slots.csv"), &report.to_csv())?;
    write(&dir.join("summary.json"), &serde_json::to_string_pretty(&report.summary)?)?;
    Ok(report.summary)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub strategy: String,
    pub runs: usize,
    pub admission_ratio_mean: f64,
    pub admission_ratio_std: f64,
    pub placement_cost_mean: f64,
    pub placement_cost_std: f64,
    pub backups_per_vnf_mean: f64,
    pub backups_per_vnf_std: f64,
    pub sfc_length_mean: f64,
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    pub runs: Vec<Summary>,
}

/// Runs every (strategy, seed) pair, one thread per pair.
pub fn compare(
    cfg: &ExperimentConfig,
    policy: Option<&Policy>,
    strategies: &[Strategy],
    seeds: &[u64],
    slots: u64,
) -> Result<Comparison> {
    let results: Vec<Result<Summary>> = std::thread::scope(|scope| {
        let handles: Vec<_> = strategies
            .iter()
            .flat_map(|&s| seeds.iter().map(move |&seed| (s, seed)))
            .map(|(s, seed)| scope.spawn(move || simulate(cfg, policy, s, slots, seed).map(|r| r.summary)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation thread panicked")).collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = strategies
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let group = &runs[i * seeds.len()..(i + 1) * seeds.len()];
            let col = |f: fn(&Summary) -> f64| group.iter().map(f).collect::<Vec<_>>();
            let (ar, ar_sd) = mean_std(&col(|r| r.admission_ratio));
            let (pc, pc_sd) = mean_std(&col(|r| r.mean_placement_cost));
            let (bk, bk_sd) = mean_std(&col(|r| r.backups_per_vnf));
            let (len, _) = mean_std(&col(|r| r.mean_sfc_length));
            CompareRow {
                strategy: s.to_string(),
                runs: group.len(),
                admission_ratio_mean: ar,
                admission_ratio_std: ar_sd,
                placement_cost_mean: pc,
                placement_cost_std: pc_sd,
                backups_per_vnf_mean: bk,
                backups_per_vnf_std: bk_sd,
                sfc_length_mean: len,
            }
        })
        .collect();
    Ok(Comparison { rows, runs })
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| Error::InvalidInput(format!("`{x}`: {e}"))))
        .collect::<std::result::Result<_, _>>()?;
    if items.is_empty() {
        return Err(Error::InvalidInput(format!("empty list `{s}`")).into());
    }
    Ok(items)
}

pub fn cmd_compare(
    config: &Path,
    strategies: &str,
    seeds: &str,
    policy: Option<&Path>,
    slots: Option<u64>,
    out: &Path,
) -> Result<Comparison> {
    let cfg = load_config(config)?;
    let strategies: Vec<Strategy> = parse_list(strategies)?;
    let seeds: Vec<u64> = parse_list(seeds)?;
    let policy = match policy {
        Some(p) => Some(load_policy(p)?),
        None if strategies.contains(&Strategy::Mdp) => Some(solve(&cfg).map_err(|(e, _, _)| e)?),
        None => None,
    };
    let cmp = compare(&cfg, policy.as_ref(), &strategies, &seeds, slots.unwrap_or(cfg.sim.slots))?;
    let dir = out_dir(out)?;

    let mut table = String::from(
        "strategy,runs,admission_ratio_mean,admission_ratio_std,placement_cost_mean,placement_cost_std,backups_per_vnf_mean,backups_per_vnf_std,sfc_length_mean\n",
    );
    for r in &cmp.rows {
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{},{}",
            r.strategy,
            r.runs,
            r.admission_ratio_mean,
            r.admission_ratio_std,
            r.placement_cost_mean,
            r.placement_cost_std,
            r.backups_per_vnf_mean,
            r.backups_per_vnf_std,
            r.sfc_length_mean
        );
    }
    write(&dir.join("compare.csv"), &table)?;

    let mut runs = String::from(
        "strategy,seed,slots,arrived,admitted,admission_ratio,mean_placement_cost,backups_per_vnf,mean_sfc_length\n",
    );
    let mut by_len = String::from("strategy,seed,num_vnfs,arrived,admitted,admission_ratio\n");
    for r in &cmp.runs {
        let _ = writeln!(
            runs,
            "{},{},{},{},{},{},{},{},{}",
            r.strategy,
            r.seed,
            r.slots,
            r.arrived,
            r.admitted,
            r.admission_ratio,
            r.mean_placement_cost,
            r.backups_per_vnf,
            r.mean_sfc_length
        );
        for v in &r.per_vnf_count {
            let _ = writeln!(
                by_len,
                "{},{},{},{},{},{}",
                r.strategy, r.seed, v.num_vnfs, v.counts.arrived, v.counts.admitted, v.counts.admission_ratio
            );
        }
    }
    write(&dir.join("runs.csv"), &runs)?;
    write(&dir.join("by_vnf_count.csv"), &by_len)?;
    Ok(cmp)
}

pub fn cmd_oracle(config: &Path, instance: &Path) -> Result<OracleResult> {
    let cfg = load_config(config)?;
    let text = fs::read_to_string(instance).with_context(|| format!("reading {}", instance.display()))?;
    let inst: OracleInstance = serde_json::from_str(&text)?;
    Ok(oracle::solve(&inst, &cfg.infrastructure, &cfg.service_types)?)
}

/// Stable error kind for the machine-readable error line.
pub fn error_kind(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidInput(_) => "invalid_input",
            Error::StateSpaceTooLarge { .. } => "state_space_too_large",
            Error::NonConvergence { .. } => "non_convergence",
            Error::LedgerInconsistency(_) => "ledger_inconsistency",
            Error::EnumerationBound(_) => "enumeration_bound",
            Error::Io(_) => "io",
            Error::Json(_) => "parse",
        };
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return "parse";
    }
    if err.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some()) {
        return "io";
    }
    "other"
}

/// `{"error": {"kind": ..., "message": ...}}`
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_rows() {
        assert_eq!(trace_csv(&[1.5, 2.0], &[1.5, 0.5]), "iteration,mean_value,sup_norm_diff\n1,1.5,1.5\n2,2,0.5\n");
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<u64>("1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_list::<u64>(",").is_err());
        let err = parse_list::<Strategy>("vrssp,nope").unwrap_err();
        assert_eq!(error_kind(&err), "invalid_input");
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 1.0);
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
    }

    #[test]
    fn error_line_is_json() {
        let v: serde_json::Value = serde_json::from_str(&error_json("io", "no \"file\"")).unwrap();
        assert_eq!(v["error"]["kind"], "io");
        assert_eq!(v["error"]["message"], "no \"file\"");
    }
}
