//! Branching rules: gain estimation, score functions and exponent updates.
//!
//! A rule is named by a catalog entry optionally followed by overrides, e.g.
//! `la-sb` or `la-sb:eta=0.2,k_i=5`. [`Brancher`] holds the per-solve state
//! (pseudocosts, current exponents) and makes one decision per node.

mod asym;
mod gains;
mod score;

pub use asym::{
    cardinality_exponents, detect_cardinality, last_assignment_exponents, pa_select_mode, CardinalityState, LaMode,
};
pub use gains::{child_gain, strong_branch, PseudocostStore, ReliabilityParams};
pub use score::{
    asymmetric_score, efficacious_clip, product_score, select_variable, Candidate, EfficaciousPair, GainPair,
    SelectContext,
};

use crate::engine::LeafLog;
use crate::model::Instance;
use crate::simplex::{LpOutcome, LpStatus, SimplexError, WarmStart};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RuleError {
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("bad override {0:?}")]
    BadOverride(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainSource {
    Raw,
    Efficacious,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Asymmetry {
    None,
    La,
    Rla,
    Pala,
    Cardinality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreParams {
    pub epsilon: f64,
    pub a_min: f64,
    pub a_max: f64,
    /// Fixed asymmetric exponents, used when `asymmetry` is `None`.
    pub a0: f64,
    pub a1: f64,
    pub eta: f64,
    pub k_i: usize,
    pub update_period: usize,
    pub pa_threshold: f64,
    pub gain_source: GainSource,
    pub asymmetry: Asymmetry,
    pub pruning_focused: bool,
    /// Smallest right-hand side accepted as a cardinality row.
    pub card_min_rhs: f64,
}

impl Default for ScoreParams {
    fn default() -> Self {
        ScoreParams {
            epsilon: 1e-6,
            a_min: 0.5,
            a_max: 0.5,
            a0: 0.0,
            a1: 0.0,
            eta: 0.15,
            k_i: 10,
            update_period: 50,
            pa_threshold: 0.05,
            gain_source: GainSource::Raw,
            asymmetry: Asymmetry::None,
            pruning_focused: false,
            card_min_rhs: 2.0,
        }
    }
}

impl ScoreParams {
    pub fn validate(&self) -> Result<(), RuleError> {
        let exps = [self.a_min, self.a_max, self.a0, self.a1, self.eta];
        if exps.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(RuleError::Invalid("exponents and eta must be finite and nonnegative".into()));
        }
        if self.a0 * self.a1 != 0.0 {
            return Err(RuleError::Invalid("at most one of a0, a1 may be positive".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(RuleError::Invalid("epsilon must be positive".into()));
        }
        if self.update_period == 0 {
            return Err(RuleError::Invalid("update_period must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    FullStrong,
    Reliability(ReliabilityParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleConfig {
    /// The name as given, including any overrides.
    pub name: String,
    pub params: ScoreParams,
    pub estimator: Estimator,
}

pub const CATALOG: [&str; 13] = [
    "def-sb",
    "def-sb-37",
    "eff-sb",
    "eff-sb-37",
    "la-sb",
    "rla-sb",
    "pala-sb",
    "eff-card",
    "prune-focus",
    "prune-focus-37",
    "def-rb",
    "eff-rb-37",
    "pala-rb",
];

fn base_rule(name: &str) -> Option<(ScoreParams, Estimator)> {
    let mut p = ScoreParams::default();
    let mut est = Estimator::FullStrong;
    let s37 = |p: &mut ScoreParams| {
        p.a_min = 0.3;
        p.a_max = 0.7;
    };
    match name {
        "def-sb" => {}
        "def-sb-37" => s37(&mut p),
        "eff-sb" => p.gain_source = GainSource::Efficacious,
        "eff-sb-37" | "la-sb" | "rla-sb" | "pala-sb" | "eff-card" => {
            p.gain_source = GainSource::Efficacious;
            s37(&mut p);
            p.asymmetry = match name {
                "la-sb" => Asymmetry::La,
                "rla-sb" => Asymmetry::Rla,
                "pala-sb" => Asymmetry::Pala,
                "eff-card" => Asymmetry::Cardinality,
                _ => Asymmetry::None,
            };
        }
        "prune-focus" => p.pruning_focused = true,
        "prune-focus-37" => {
            p.pruning_focused = true;
            s37(&mut p);
        }
        "def-rb" | "eff-rb-37" | "pala-rb" => {
            let (q, _) = base_rule(&name.replace("-rb", "-sb"))?;
            p = q;
            est = Estimator::Reliability(ReliabilityParams::default());
        }
        _ => return None,
    }
    Some((p, est))
}

fn parse_count(v: &str) -> Option<usize> {
    match v {
        "inf" | "none" => Some(usize::MAX),
        _ => v.parse().ok(),
    }
}

impl RuleConfig {
    /// Parses `name[:key=value,...]`.
    pub fn parse(spec: &str) -> Result<Self, RuleError> {
        let spec = spec.trim();
        let (name, overrides) = match spec.split_once(':') {
            Some((n, o)) => (n.trim(), o),
            None => (spec, ""),
        };
        let (mut p, mut est) = base_rule(name).ok_or_else(|| RuleError::UnknownRule(name.to_string()))?;
        for kv in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || RuleError::BadOverride(kv.to_string());
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            let (k, v) = (k.trim(), v.trim());
            let real = || v.parse::<f64>().map_err(|_| bad());
            match k {
                "a_min" => p.a_min = real()?,
                "a_max" => p.a_max = real()?,
                "a0" => p.a0 = real()?,
                "a1" => p.a1 = real()?,
                "eta" => p.eta = real()?,
                "epsilon" => p.epsilon = real()?,
                "pa_threshold" => p.pa_threshold = real()?,
                "card_min_rhs" => p.card_min_rhs = real()?,
                "k_i" | "k_I" => p.k_i = parse_count(v).ok_or_else(bad)?,
                "update_period" => p.update_period = parse_count(v).ok_or_else(bad)?,
                "reliability" | "budget" | "iter_cap" => {
                    let Estimator::Reliability(ref mut rp) = est else {
                        return Err(bad());
                    };
                    let n = parse_count(v).ok_or_else(bad)?;
                    match k {
                        "reliability" => rp.reliability = n,
                        "budget" => rp.budget = n,
                        _ => rp.iter_cap = (n != usize::MAX).then_some(n),
                    }
                }
                _ => return Err(bad()),
            }
        }
        p.validate()?;
        Ok(RuleConfig { name: spec.to_string(), params: p, estimator: est })
    }
}

/// What the rule decided at a node.
#[derive(Debug, Clone)]
pub struct Decision {
    pub var: usize,
    /// Child outcomes already solved to completion during gain estimation.
    pub children: Option<[LpOutcome; 2]>,
    pub gains: GainPair,
    /// True when the chosen variable's gains came from LP solves here.
    pub strong_branched: bool,
    pub a0: f64,
    pub a1: f64,
}

/// Per-solve rule state.
pub struct Brancher {
    config: RuleConfig,
    card_row: Option<usize>,
    pseudo: PseudocostStore,
    a0: f64,
    a1: f64,
}

impl Brancher {
    pub fn new(config: RuleConfig, inst: &Instance) -> Self {
        let card_row = match config.params.asymmetry {
            Asymmetry::Cardinality => detect_cardinality(inst, config.params.card_min_rhs),
            _ => None,
        };
        let (a0, a1) = (config.params.a0, config.params.a1);
        Brancher { config, card_row, pseudo: PseudocostStore::new(inst.num_vars()), a0, a1 }
    }

    pub fn config(&self) -> &RuleConfig {
        &self.config
    }

    pub fn cardinality_row(&self) -> Option<usize> {
        self.card_row
    }

    pub fn pseudocosts(&self) -> &PseudocostStore {
        &self.pseudo
    }

    /// Recomputes the global exponents; the engine calls this every
    /// `update_period` branched nodes.
    pub fn refresh(&mut self, log: &LeafLog) {
        let p = &self.config.params;
        let mode = match p.asymmetry {
            Asymmetry::La => LaMode::La,
            Asymmetry::Rla => LaMode::Rla,
            Asymmetry::Pala => pa_select_mode(log, p),
            Asymmetry::None | Asymmetry::Cardinality => return,
        };
        (self.a0, self.a1) = last_assignment_exponents(log, p, mode);
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.a0, self.a1)
    }

    /// Feeds the realized gains of a branching into the pseudocosts.
    pub fn observe(&mut self, var: usize, value: f64, gains: GainPair) {
        if matches!(self.config.estimator, Estimator::Reliability(_)) {
            self.pseudo.observe(var, 0, gains.delta0, value);
            self.pseudo.observe(var, 1, gains.delta1, value);
        }
    }

    /// Chooses a branching variable among `candidates` (var, LP value),
    /// which must be sorted by variable index.
    #[allow(clippy::too_many_arguments)]
    pub fn decide(
        &mut self,
        inst: &Instance,
        lower: &[f64],
        upper: &[f64],
        warm: &WarmStart,
        node: &LpOutcome,
        incumbent: f64,
        candidates: &[(usize, f64)],
    ) -> Result<Decision, SimplexError> {
        let node_value = node.objective;
        let (a0, a1) = match self.card_row {
            Some(row) => cardinality_exponents(CardinalityState::at_node(inst, row, lower, upper)),
            None => (self.a0, self.a1),
        };
        let mut cands = Vec::with_capacity(candidates.len());
        let mut solved: Vec<Option<[LpOutcome; 2]>> = Vec::with_capacity(candidates.len());
        let mut strong = vec![false; candidates.len()];
        match self.config.estimator {
            Estimator::FullStrong => {
                for &(var, value) in candidates {
                    let (g, kids) = strong_branch(warm, node_value, var, None)?;
                    cands.push(Candidate { var, value, gains: g });
                    solved.push(Some(kids));
                }
                strong.fill(true);
            }
            Estimator::Reliability(rp) => {
                let eps = self.config.params.epsilon;
                let mut order: Vec<usize> = (0..candidates.len()).collect();
                order.sort_by(|&a, &b| {
                    let fa = (candidates[a].1 - 0.5).abs();
                    let fb = (candidates[b].1 - 0.5).abs();
                    fa.total_cmp(&fb).then(candidates[a].0.cmp(&candidates[b].0))
                });
                let mut gains = vec![GainPair::new(0.0, 0.0); candidates.len()];
                solved.resize(candidates.len(), None);
                let mut used = 0usize;
                for i in order {
                    let (var, value) = candidates[i];
                    if !self.pseudo.is_reliable(var, rp.reliability) && used < rp.budget {
                        used += 1;
                        let (g, kids) = strong_branch(warm, node_value, var, rp.iter_cap)?;
                        self.pseudo.observe(var, 0, g.delta0, value);
                        self.pseudo.observe(var, 1, g.delta1, value);
                        gains[i] = g;
                        strong[i] = true;
                        if kids.iter().all(|k| k.status != LpStatus::IterationLimit) {
                            solved[i] = Some(kids);
                        }
                    } else {
                        gains[i] = GainPair::new(
                            self.pseudo.estimate(var, 0, value, eps),
                            self.pseudo.estimate(var, 1, value, eps),
                        );
                    }
                }
                for (i, &(var, value)) in candidates.iter().enumerate() {
                    cands.push(Candidate { var, value, gains: gains[i] });
                }
            }
        }
        let ctx = SelectContext { node_bound: node_value, incumbent, a0, a1 };
        let var = select_variable(&cands, &self.config.params, &ctx);
        let i = cands.iter().position(|c| c.var == var).expect("selected variable is a candidate");
        Ok(Decision { var, children: solved[i].take(), gains: cands[i].gains, strong_branched: strong[i], a0, a1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_parses() {
        for name in CATALOG {
            let r = RuleConfig::parse(name).unwrap();
            assert_eq!(r.name, name);
        }
        let rb = RuleConfig::parse("def-rb").unwrap();
        assert_eq!(rb.estimator, Estimator::Reliability(ReliabilityParams::default()));
        assert_eq!(rb.params, RuleConfig::parse("def-sb").unwrap().params);
        let la = RuleConfig::parse("la-sb").unwrap().params;
        assert_eq!((la.a_min, la.a_max, la.eta, la.k_i), (0.3, 0.7, 0.15, 10));
    }

    #[test]
    fn overrides() {
        let r = RuleConfig::parse("la-sb: eta=0.3, k_I=4").unwrap();
        assert_eq!((r.params.eta, r.params.k_i), (0.3, 4));
        let r = RuleConfig::parse("def-rb:reliability=inf,budget=inf,iter_cap=none").unwrap();
        assert_eq!(
            r.estimator,
            Estimator::Reliability(ReliabilityParams { reliability: usize::MAX, budget: usize::MAX, iter_cap: None })
        );
        assert!(matches!(RuleConfig::parse("nope"), Err(RuleError::UnknownRule(_))));
        assert!(matches!(RuleConfig::parse("def-sb:budget=3"), Err(RuleError::BadOverride(_))));
        assert!(matches!(RuleConfig::parse("def-sb:a0=0.1,a1=0.1"), Err(RuleError::Invalid(_))));
        assert!(matches!(RuleConfig::parse("def-sb:epsilon=0"), Err(RuleError::Invalid(_))));
    }
}
