//! Gain estimation by full strong branching or reliability branching.

use super::score::GainPair;
use crate::simplex::{LpOutcome, LpStatus, SimplexError, WarmStart};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReliabilityParams {
    /// Observations per side before pseudocosts are trusted.
    pub reliability: usize,
    /// Strong-branching evaluations (candidates) per node.
    pub budget: usize,
    /// Dual simplex iteration cap per child LP, `None` for no cap.
    pub iter_cap: Option<usize>,
}

impl Default for ReliabilityParams {
    fn default() -> Self {
        ReliabilityParams { reliability: 8, budget: 100, iter_cap: Some(500) }
    }
}

/// Per-variable, per-side sums of unit gains.
#[derive(Debug, Clone, Default)]
pub struct PseudocostStore {
    sum: Vec<[f64; 2]>,
    count: Vec<[usize; 2]>,
    global_sum: [f64; 2],
    global_count: [usize; 2],
}

fn moved(side: usize, frac: f64) -> f64 {
    if side == 0 {
        frac
    } else {
        1.0 - frac
    }
}

impl PseudocostStore {
    pub fn new(num_vars: usize) -> Self {
        PseudocostStore { sum: vec![[0.0; 2]; num_vars], count: vec![[0; 2]; num_vars], ..Default::default() }
    }

    /// Records `gain` for moving `var` from fractional value `frac` to `side`.
    /// Infinite gains carry no unit information and are skipped.
    pub fn observe(&mut self, var: usize, side: usize, gain: f64, frac: f64) {
        let dist = moved(side, frac);
        if !gain.is_finite() || dist <= 1e-9 {
            return;
        }
        let unit = gain / dist;
        self.sum[var][side] += unit;
        self.count[var][side] += 1;
        self.global_sum[side] += unit;
        self.global_count[side] += 1;
    }

    pub fn count(&self, var: usize, side: usize) -> usize {
        self.count[var][side]
    }

    pub fn is_reliable(&self, var: usize, threshold: usize) -> bool {
        self.count[var][0] >= threshold && self.count[var][1] >= threshold
    }

    pub fn unit_average(&self, var: usize, side: usize) -> Option<f64> {
        (self.count[var][side] > 0).then(|| self.sum[var][side] / self.count[var][side] as f64)
    }

    pub fn global_average(&self, side: usize) -> Option<f64> {
        (self.global_count[side] > 0).then(|| self.global_sum[side] / self.global_count[side] as f64)
    }

    /// Estimated gain: own average, else global average, else `epsilon`.
    pub fn estimate(&self, var: usize, side: usize, frac: f64, epsilon: f64) -> f64 {
        match self.unit_average(var, side).or_else(|| self.global_average(side)) {
            Some(psi) => psi * moved(side, frac),
            None => epsilon,
        }
    }
}

/// Gain of a child outcome relative to the node value.
pub fn child_gain(node_value: f64, child: &LpOutcome) -> Result<f64, SimplexError> {
    match child.status {
        LpStatus::Infeasible => Ok(f64::INFINITY),
        LpStatus::Optimal => Ok((child.objective - node_value).max(0.0)),
        LpStatus::IterationLimit => Ok((child.dual_bound - node_value).max(0.0)),
        LpStatus::Unbounded => Err(SimplexError::Numerical("child LP unbounded under a bounded parent".into())),
    }
}

/// Solves both children of `var` and returns the gains with the outcomes.
pub fn strong_branch(
    warm: &WarmStart,
    node_value: f64,
    var: usize,
    iter_cap: Option<usize>,
) -> Result<(GainPair, [LpOutcome; 2]), SimplexError> {
    let down = warm.branch(var, (0.0, 0.0), iter_cap)?;
    let up = warm.branch(var, (1.0, 1.0), iter_cap)?;
    let g = GainPair::new(child_gain(node_value, &down)?, child_gain(node_value, &up)?);
    Ok((g, [down, up]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_and_update() {
        let mut s = PseudocostStore::new(3);
        assert_eq!(s.estimate(0, 0, 0.3, 1e-6), 1e-6);
        s.observe(1, 0, 1.2, 0.4);
        assert!((s.unit_average(1, 0).unwrap() - 3.0).abs() < 1e-12);
        // Variable 0 falls back to the global down average.
        assert!((s.estimate(0, 0, 0.5, 1e-6) - 1.5).abs() < 1e-12);
        let mut t = PseudocostStore::new(1);
        t.observe(0, 0, 0.5, 0.25);
        t.observe(0, 0, 0.5, 0.25);
        assert_eq!(t.estimate(0, 0, 0.25, 1e-6), 0.5);
        t.observe(0, 1, f64::INFINITY, 0.25);
        assert_eq!(t.count(0, 1), 0);
    }

    #[test]
    fn reliability_threshold() {
        let mut s = PseudocostStore::new(1);
        for _ in 0..7 {
            s.observe(0, 0, 1.0, 0.5);
        }
        for _ in 0..8 {
            s.observe(0, 1, 1.0, 0.5);
        }
        assert!(!s.is_reliable(0, 8));
        s.observe(0, 0, 1.0, 0.5);
        assert!(s.is_reliable(0, 8));
    }
}
