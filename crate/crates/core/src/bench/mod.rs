//! Campaign runner: every instance × rule × primal gap × seed combination,
//! aggregated into the shifted-geometric-mean tables used for comparison.

mod metrics;
mod report;

pub use metrics::{gap_remaining, reduction_pct, shifted_geomean};
pub use report::{
    aggregate, cmp_gap, read_results_csv, row_order, summary_markdown, write_results_csv, Cell, ResultRow, RowStatus,
    GAP_SHIFT, TREE_SHIFT,
};

use crate::engine::{init_primal_bound, solve, SolveReport, SolveStatus};
use crate::generators::{generate, GenSpec};
use crate::model::{from_json, load_mps, Instance};
use crate::rules::RuleConfig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid campaign: {0}")]
    Invalid(String),
    #[error("campaign config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Load { path: String, msg: String },
    #[error("thread pool: {0}")]
    Pool(String),
}

/// An instance file (`.json` codec or MPS) or a generator specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path(PathBuf),
    Generated(GenSpec),
}

impl InstanceSource {
    pub fn load(&self) -> Result<Instance, BenchError> {
        match self {
            InstanceSource::Path(p) => load_instance(p),
            InstanceSource::Generated(spec) => {
                generate(spec).map_err(|e| BenchError::Load { path: spec.instance_name(), msg: e.to_string() })
            }
        }
    }

    /// File holding a cached reference optimum, for file-backed instances.
    fn optimum_cache(&self) -> Option<PathBuf> {
        match self {
            InstanceSource::Path(p) => Some(optimum_cache_path(p)),
            InstanceSource::Generated(_) => None,
        }
    }
}

/// `<instance>.opt`, a text file holding one number.
pub fn optimum_cache_path(instance: &Path) -> PathBuf {
    instance.with_extension("opt")
}

pub fn read_cached_optimum(cache: &Path) -> Option<f64> {
    let z: f64 = std::fs::read_to_string(cache).ok()?.trim().parse().ok()?;
    z.is_finite().then_some(z)
}

pub fn load_instance(path: &Path) -> Result<Instance, BenchError> {
    let err = |msg: String| BenchError::Load { path: path.display().to_string(), msg };
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        from_json(&text).map_err(|e| err(e.to_string()))
    } else {
        load_mps(path).map_err(|e| err(e.to_string()))
    }
}

fn default_node_limit() -> usize {
    20_000
}

fn default_bootstrap_limit() -> usize {
    1_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub instances: Vec<InstanceSource>,
    pub rules: Vec<String>,
    /// Relative primal gaps; `null` runs without an initial bound.
    pub primal_gaps: Vec<Option<f64>>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_node_limit")]
    pub node_limit: usize,
    /// Known optima by instance name, in the instance's sense.
    #[serde(default)]
    pub reference_optima: BTreeMap<String, f64>,
    /// Rule against which the summary reports tree-size reductions.
    #[serde(default)]
    pub baseline: Option<String>,
    /// Node limit of the Def-SB solve used when an optimum is missing.
    #[serde(default = "default_bootstrap_limit")]
    pub bootstrap_node_limit: usize,
    /// Record per-run wall time. Off by default so results are reproducible
    /// byte for byte.
    #[serde(default)]
    pub record_wall_time: bool,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

impl Campaign {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let c: Campaign = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Invalid(m));
        if self.instances.is_empty() || self.rules.is_empty() || self.primal_gaps.is_empty() || self.seeds.is_empty() {
            return bad("instances, rules, primal_gaps and seeds must be nonempty".into());
        }
        if self.node_limit == 0 || self.bootstrap_node_limit == 0 {
            return bad("node limits must be positive".into());
        }
        for g in self.primal_gaps.iter().flatten() {
            if !(g.is_finite() && *g >= 0.0) {
                return bad(format!("primal gap {g} must be finite and nonnegative"));
            }
        }
        for r in &self.rules {
            RuleConfig::parse(r).map_err(|e| BenchError::Invalid(e.to_string()))?;
        }
        if let Some(b) = &self.baseline {
            if !self.rules.contains(b) {
                return bad(format!("baseline {b} is not among the rules"));
            }
        }
        for (k, v) in &self.reference_optima {
            if !v.is_finite() {
                return bad(format!("reference optimum for {k} is not finite"));
            }
        }
        Ok(())
    }
}

pub struct CampaignResult {
    pub rows: Vec<ResultRow>,
    pub cells: Vec<Cell>,
    /// Reference optima used, including bootstrapped ones.
    pub optima: BTreeMap<String, f64>,
}

impl CampaignResult {
    pub fn summary(&self, baseline: Option<&str>) -> String {
        summary_markdown(&self.cells, baseline)
    }
}

struct Loaded {
    source: InstanceSource,
    inst: Option<Instance>,
    error: Option<String>,
}

/// Finds z* for an instance: configured, cached next to the file, or from a
/// Def-SB solve. The solve result is cached for file-backed instances.
fn reference_optimum(c: &Campaign, l: &Loaded, inst: &Instance) -> Option<f64> {
    if let Some(&z) = c.reference_optima.get(&inst.name) {
        return Some(z);
    }
    let cache = l.source.optimum_cache();
    if let Some(z) = cache.as_deref().and_then(read_cached_optimum) {
        return Some(z);
    }
    let z = bootstrap_optimum(inst, c.bootstrap_node_limit)?;
    if let Some(p) = cache {
        if let Err(e) = std::fs::write(&p, format!("{z:?}\n")) {
            log::warn!("could not cache optimum at {}: {e}", p.display());
        }
    }
    Some(z)
}

/// Optimum in the instance's sense from a Def-SB solve, if it finishes
/// within `node_limit`.
pub fn bootstrap_optimum(inst: &Instance, node_limit: usize) -> Option<f64> {
    let rule = RuleConfig::parse("def-sb").expect("catalog rule");
    match solve(inst, &rule, None, node_limit, 0) {
        Ok(r) if r.status == SolveStatus::Optimal => Some(r.incumbent_value()),
        Ok(r) => {
            log::warn!("{}: bootstrap solve ended with {:?}; no reference optimum", inst.name, r.status);
            None
        }
        Err(e) => {
            log::warn!("{}: bootstrap solve failed: {e}", inst.name);
            None
        }
    }
}

fn row_status(r: &SolveReport) -> RowStatus {
    match r.status {
        SolveStatus::Optimal => RowStatus::Optimal,
        SolveStatus::NodeLimit => RowStatus::NodeLimit,
        SolveStatus::Infeasible => RowStatus::Infeasible,
    }
}

struct Job<'a> {
    inst: Option<&'a Instance>,
    name: String,
    error: Option<String>,
    rule: &'a str,
    gap: Option<f64>,
    seed: u64,
    z_star: Option<f64>,
}

fn run_job(c: &Campaign, job: &Job) -> ResultRow {
    let mut row = ResultRow {
        instance: job.name.clone(),
        rule: job.rule.to_string(),
        gap: job.gap,
        seed: job.seed,
        status: RowStatus::Error,
        tree_size: 0,
        gap_remaining: 1.0,
        wall_time: None,
    };
    let fail = |row: ResultRow, msg: &str| {
        log::error!("{} / {} / {:?}: {msg}", row.instance, row.rule, row.gap);
        row
    };
    let Some(inst) = job.inst else {
        return fail(row, job.error.as_deref().unwrap_or("instance unavailable"));
    };
    let init = match (job.gap, job.z_star) {
        (None, _) => None,
        (Some(g), Some(z)) => Some(init_primal_bound(z, g, inst.sense)),
        (Some(_), None) => return fail(row, "no reference optimum"),
    };
    let rule = RuleConfig::parse(job.rule).expect("validated rule");
    let start = Instant::now();
    let report = match solve(inst, &rule, init, c.node_limit, job.seed) {
        Ok(r) => r,
        Err(e) => return fail(row, &e.to_string()),
    };
    if c.record_wall_time {
        row.wall_time = Some(start.elapsed().as_secs_f64());
    }
    row.status = row_status(&report);
    row.tree_size = report.tree_size;
    // Without a known optimum the run's own incumbent stands in for z*.
    let z = job.z_star.unwrap_or_else(|| report.incumbent_value());
    row.gap_remaining = gap_remaining(&report, z, report.root_lp_value());
    row
}

/// Runs the campaign on `jobs` worker threads. Rows come back sorted by
/// (instance, rule, gap, seed) whatever the thread count.
pub fn run_campaign(c: &Campaign, jobs: usize) -> Result<CampaignResult, BenchError> {
    c.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    pool.install(|| run_in_pool(c))
}

fn run_in_pool(c: &Campaign) -> Result<CampaignResult, BenchError> {
    let loaded: Vec<Loaded> = c
        .instances
        .par_iter()
        .map(|s| match s.load() {
            Ok(inst) => Loaded { source: s.clone(), inst: Some(inst), error: None },
            Err(e) => Loaded { source: s.clone(), inst: None, error: Some(e.to_string()) },
        })
        .collect();
    let needs_optimum = c.primal_gaps.iter().any(|g| g.is_some());
    let optima: Vec<Option<f64>> = loaded
        .par_iter()
        .map(|l| match &l.inst {
            Some(inst) if needs_optimum => reference_optimum(c, l, inst),
            Some(inst) => c.reference_optima.get(&inst.name).copied(),
            None => None,
        })
        .collect();
    let mut work = Vec::new();
    for (l, z) in loaded.iter().zip(&optima) {
        let name = match (&l.inst, &l.source) {
            (Some(i), _) => i.name.clone(),
            (None, InstanceSource::Path(p)) => p.display().to_string(),
            (None, InstanceSource::Generated(g)) => g.instance_name(),
        };
        for rule in &c.rules {
            for &gap in &c.primal_gaps {
                for &seed in &c.seeds {
                    work.push(Job {
                        inst: l.inst.as_ref(),
                        name: name.clone(),
                        error: l.error.clone(),
                        rule,
                        gap,
                        seed,
                        z_star: *z,
                    });
                }
            }
        }
    }
    let mut rows: Vec<ResultRow> = work.par_iter().map(|j| run_job(c, j)).collect();
    rows.sort_by(row_order);
    let cells = aggregate(&rows);
    let optima = loaded.iter().zip(optima).filter_map(|(l, z)| Some((l.inst.as_ref()?.name.clone(), z?))).collect();
    Ok(CampaignResult { rows, cells, optima })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_validation() {
        let c = Campaign::from_json(
            r#"{"instances":[{"kind":"mdk_small","seed":1,"overrides":{"n":10,"m":4}},"x.mps"],
                "rules":["def-sb","eff-sb-37"],"primal_gaps":[0.0,null],"baseline":"def-sb"}"#,
        )
        .unwrap();
        assert_eq!(c.seeds, vec![0]);
        assert_eq!(c.node_limit, 20_000);
        assert!(matches!(c.instances[1], InstanceSource::Path(_)));
        assert!(matches!(c.instances[0], InstanceSource::Generated(_)));
        let bad = [
            r#"{"instances":[],"rules":["def-sb"],"primal_gaps":[null]}"#,
            r#"{"instances":["a"],"rules":["nope"],"primal_gaps":[null]}"#,
            r#"{"instances":["a"],"rules":["def-sb"],"primal_gaps":[-0.1]}"#,
            r#"{"instances":["a"],"rules":["def-sb"],"primal_gaps":[null],"baseline":"eff-sb"}"#,
            r#"{"instances":["a"],"rules":["def-sb"],"primal_gaps":[null],"typo":1}"#,
        ];
        for b in bad {
            assert!(Campaign::from_json(b).is_err(), "{b}");
        }
    }
}
