//! Seeded generators for the fourteen benchmark families.
//!
//! Every family draws from a `ChaCha8Rng` seeded with `seed_from_u64(seed)`,
//! so a `(kind, seed, overrides)` triple reproduces the same instance on any
//! platform. Overrides change dimensions only; the sampling distributions are
//! fixed.

mod families;
pub mod graphs;

use crate::model::{Instance, ModelError};
use crate::simplex::{solve_root, LpProblem, LpStatus};
use families::AuctionParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Resampling attempts for families whose draws can be infeasible.
const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("unknown generator kind {0:?}")]
    UnknownKind(String),
    #[error("{kind}: unknown override {key:?}")]
    UnknownOverride { kind: Kind, key: String },
    #[error("{kind}: override {key} = {value} is invalid: {reason}")]
    BadOverride { kind: Kind, key: String, value: f64, reason: String },
    #[error("{0}: no feasible draw after {MAX_ATTEMPTS} attempts")]
    Exhausted(Kind),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    MdkSmall,
    MdkMedium,
    MdkLarge,
    Lotsizing,
    Bigbucket,
    Matching,
    WeightedCoverage,
    PortfolioCcp,
    Fcnf,
    SetPacking,
    SetCovering,
    IndependentSet,
    Cflp,
    CombAuction,
}

impl Kind {
    pub const ALL: [Kind; 14] = [
        Kind::MdkSmall,
        Kind::MdkMedium,
        Kind::MdkLarge,
        Kind::Lotsizing,
        Kind::Bigbucket,
        Kind::Matching,
        Kind::WeightedCoverage,
        Kind::PortfolioCcp,
        Kind::Fcnf,
        Kind::SetPacking,
        Kind::SetCovering,
        Kind::IndependentSet,
        Kind::Cflp,
        Kind::CombAuction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::MdkSmall => "mdk_small",
            Kind::MdkMedium => "mdk_medium",
            Kind::MdkLarge => "mdk_large",
            Kind::Lotsizing => "lotsizing",
            Kind::Bigbucket => "bigbucket",
            Kind::Matching => "matching",
            Kind::WeightedCoverage => "weighted_coverage",
            Kind::PortfolioCcp => "portfolio_ccp",
            Kind::Fcnf => "fcnf",
            Kind::SetPacking => "set_packing",
            Kind::SetCovering => "set_covering",
            Kind::IndependentSet => "independent_set",
            Kind::Cflp => "cflp",
            Kind::CombAuction => "comb_auction",
        }
    }

    /// Dimension keys accepted as overrides, with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Kind::MdkSmall | Kind::MdkMedium | Kind::MdkLarge => &[("n", 100.0), ("m", 50.0)],
            Kind::Lotsizing => &[("n", 30.0)],
            Kind::Bigbucket => &[("periods", 10.0), ("products", 3.0)],
            Kind::Matching => &[("nodes", 300.0), ("edges", 1000.0)],
            Kind::WeightedCoverage => &[("universe", 1000.0), ("sets", 200.0), ("k", 12.0)],
            Kind::PortfolioCcp => &[("n", 20.0), ("m", 100.0), ("k", 10.0)],
            Kind::Fcnf => &[("nodes", 50.0), ("edges", 150.0), ("commodities", 3.0)],
            Kind::SetPacking => &[("n", 200.0), ("m", 1000.0)],
            Kind::SetCovering => &[("n", 300.0), ("m", 3000.0)],
            Kind::IndependentSet => &[("nodes", 500.0), ("affinity", 4.0)],
            Kind::Cflp => &[("customers", 100.0), ("facilities", 100.0), ("ratio", 5.0)],
            Kind::CombAuction => &[("items", 200.0), ("bids", 1000.0)],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, GenError> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| GenError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: Kind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, f64>,
}

impl GenSpec {
    pub fn new(kind: Kind, seed: u64) -> Self {
        GenSpec { kind, seed, overrides: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.overrides.insert(key.to_string(), value);
        self
    }

    /// `{kind}-{seed}`, followed by `-{key}{value}` for each override.
    pub fn instance_name(&self) -> String {
        let mut name = format!("{}-{}", self.kind, self.seed);
        for (k, v) in &self.overrides {
            name.push_str(&format!("-{k}{v}"));
        }
        name
    }
}

/// Resolved dimensions with range checks.
struct Dims {
    kind: Kind,
    values: BTreeMap<&'static str, f64>,
}

impl Dims {
    fn resolve(spec: &GenSpec) -> Result<Self, GenError> {
        let defaults = spec.kind.defaults();
        let mut values: BTreeMap<&'static str, f64> = defaults.iter().copied().collect();
        for (key, &value) in &spec.overrides {
            let Some(&(k, _)) = defaults.iter().find(|(k, _)| k == key) else {
                return Err(GenError::UnknownOverride { kind: spec.kind, key: key.clone() });
            };
            values.insert(k, value);
        }
        Ok(Dims { kind: spec.kind, values })
    }

    fn bad(&self, key: &str, reason: impl Into<String>) -> GenError {
        GenError::BadOverride { kind: self.kind, key: key.to_string(), value: self.values[key], reason: reason.into() }
    }

    /// A whole number no smaller than `min`.
    fn count(&self, key: &str, min: usize) -> Result<usize, GenError> {
        let v = self.values[key];
        if !v.is_finite() || v.fract() != 0.0 || v < min as f64 || v > 1e7 {
            return Err(self.bad(key, format!("expected an integer >= {min}")));
        }
        Ok(v as usize)
    }

    fn positive(&self, key: &str) -> Result<f64, GenError> {
        let v = self.values[key];
        if !(v.is_finite() && v > 0.0) {
            return Err(self.bad(key, "expected a positive number"));
        }
        Ok(v)
    }

    fn edges(&self, nodes: usize) -> Result<usize, GenError> {
        let e = self.count("edges", 1)?;
        if e > nodes * (nodes - 1) / 2 {
            return Err(self.bad("edges", format!("exceeds the {} node pairs", nodes * (nodes - 1) / 2)));
        }
        Ok(e)
    }
}

fn root_feasible(inst: &Instance) -> bool {
    let lp = LpProblem::new(inst);
    matches!(solve_root(&lp.root_view()).map(|o| o.status), Ok(LpStatus::Optimal))
}

/// Draws until the root relaxation is feasible.
fn resample(
    kind: Kind,
    rng: &mut ChaCha8Rng,
    mut build: impl FnMut(&mut ChaCha8Rng) -> Result<Instance, ModelError>,
) -> Result<Instance, GenError> {
    for _ in 0..MAX_ATTEMPTS {
        let inst = build(rng)?;
        if root_feasible(&inst) {
            return Ok(inst);
        }
    }
    Err(GenError::Exhausted(kind))
}

pub fn generate(spec: &GenSpec) -> Result<Instance, GenError> {
    let d = Dims::resolve(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rng = &mut rng;
    let name = spec.instance_name();
    let inst = match spec.kind {
        Kind::MdkSmall | Kind::MdkMedium | Kind::MdkLarge => {
            let frac = match spec.kind {
                Kind::MdkSmall => 0.25,
                Kind::MdkMedium => 0.5,
                _ => 0.75,
            };
            families::multi_knapsack(rng, name, d.count("n", 1)?, d.count("m", 1)?, frac)?
        }
        Kind::Lotsizing => families::lot_sizing(rng, name, d.count("n", 2)?)?,
        Kind::Bigbucket => {
            let (t, p) = (d.count("periods", 1)?, d.count("products", 1)?);
            resample(spec.kind, rng, |r| families::big_bucket(r, name.clone(), t, p))?
        }
        Kind::Matching => {
            let nodes = d.count("nodes", 2)?;
            families::matching(rng, name, nodes, d.edges(nodes)?)?
        }
        Kind::WeightedCoverage => {
            families::weighted_coverage(rng, name, d.count("universe", 1)?, d.count("sets", 1)?, d.count("k", 1)?)?
        }
        Kind::PortfolioCcp => {
            let (n, m) = (d.count("n", 1)?, d.count("m", 1)?);
            let k = d.count("k", 0)?;
            if k > m {
                return Err(d.bad("k", "exceeds m"));
            }
            families::portfolio(rng, name, n, m, k)?
        }
        Kind::Fcnf => {
            let nodes = d.count("nodes", 2)?;
            let edges = d.edges(nodes)?;
            let com = d.count("commodities", 1)?;
            resample(spec.kind, rng, |r| families::fixed_charge_flow(r, name.clone(), nodes, edges, com))?
        }
        Kind::SetPacking => families::set_packing(rng, name, d.count("n", 1)?, d.count("m", 1)?)?,
        Kind::SetCovering => families::set_covering(rng, name, d.count("n", 1)?, d.count("m", 1)?)?,
        Kind::IndependentSet => {
            let nodes = d.count("nodes", 2)?;
            let aff = d.count("affinity", 1)?;
            if aff >= nodes {
                return Err(d.bad("affinity", "must be below the node count"));
            }
            families::independent_set(rng, name, nodes, aff)?
        }
        Kind::Cflp => families::facility_location(
            rng,
            name,
            d.count("customers", 1)?,
            d.count("facilities", 1)?,
            d.positive("ratio")?,
        )?,
        Kind::CombAuction => {
            let items = d.count("items", 2)?;
            let params = AuctionParams {
                items,
                bids: d.count("bids", 1)?,
                min_value: 1.0,
                max_value: 100.0,
                value_deviation: 0.5,
                add_item_prob: 0.65,
                max_sub_bids: 5,
                additivity: 0.2,
                budget_factor: 1.5,
                resale_factor: 0.5,
            };
            families::combinatorial_auction(rng, name, &params)?
        }
    };
    Ok(inst)
}

/// Instances for seeds `base_seed .. base_seed + count`.
pub fn sample_suite(kind: Kind, count: usize, base_seed: u64) -> Result<Vec<Instance>, GenError> {
    (0..count as u64).map(|i| generate(&GenSpec::new(kind, base_seed + i))).collect()
}

/// Parses `key=value` override pairs as given on the command line.
pub fn parse_overrides<'s>(pairs: impl IntoIterator<Item = &'s str>) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for pair in pairs {
        let (k, v) = pair.split_once('=').ok_or_else(|| format!("expected key=value, got {pair:?}"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("bad number in {pair:?}"))?;
        if !seen.insert(k.trim().to_string()) {
            return Err(format!("duplicate override {k:?}"));
        }
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}
