//! Gain clipping, score functions and the selection step.

use super::ScoreParams;

/// Child LP gains in minimization sense; `+inf` marks an infeasible child.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPair {
    pub delta0: f64,
    pub delta1: f64,
}

impl GainPair {
    /// Clamps tiny negative gains (solver noise) to zero.
    pub fn new(delta0: f64, delta1: f64) -> Self {
        debug_assert!(!delta0.is_nan() && !delta1.is_nan());
        GainPair { delta0: delta0.max(0.0), delta1: delta1.max(0.0) }
    }

    pub fn side(&self, side: usize) -> f64 {
        if side == 0 {
            self.delta0
        } else {
            self.delta1
        }
    }

    pub fn infeasible_sides(&self) -> usize {
        self.delta0.is_infinite() as usize + self.delta1.is_infinite() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficaciousPair {
    pub q0: f64,
    pub q1: f64,
}

/// `q = min(max(delta, eps), delta_pd)` on each side.
pub fn efficacious_clip(g: GainPair, delta_pd: f64, epsilon: f64) -> EfficaciousPair {
    let clip = |d: f64| d.max(epsilon).min(delta_pd);
    EfficaciousPair { q0: clip(g.delta0), q1: clip(g.delta1) }
}

pub fn product_score(q0: f64, q1: f64, a_min: f64, a_max: f64) -> f64 {
    q0.min(q1).powf(a_min) * q0.max(q1).powf(a_max)
}

pub fn asymmetric_score(q0: f64, q1: f64, a0: f64, a1: f64, a_min: f64, a_max: f64) -> f64 {
    q0.powf(a0) * q1.powf(a1) * product_score(q0, q1, a_min, a_max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub var: usize,
    /// LP value of the variable at the node.
    pub value: f64,
    pub gains: GainPair,
}

/// Node information the selection step needs besides the gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectContext {
    /// Node LP value (minimization sense).
    pub node_bound: f64,
    /// Incumbent bound (minimization sense), `+inf` when none.
    pub incumbent: f64,
    pub a0: f64,
    pub a1: f64,
}

impl SelectContext {
    pub fn delta_pd(&self) -> f64 {
        if self.incumbent.is_finite() {
            (self.incumbent - self.node_bound).max(0.0)
        } else {
            f64::INFINITY
        }
    }

    fn child_pruned(&self, gain: f64) -> bool {
        gain.is_infinite() || crate::engine::prunes(self.node_bound + gain, self.incumbent)
    }
}

/// Keeps the first maximum, so ties go to the earliest (lowest-index) candidate.
fn argmax(cands: &[Candidate], mut key: impl FnMut(&Candidate) -> f64) -> usize {
    let mut best = 0;
    let mut best_key = f64::NEG_INFINITY;
    for (i, c) in cands.iter().enumerate() {
        let k = key(c);
        if k > best_key || (k == best_key && c.var < cands[best].var) {
            best = i;
            best_key = k;
        }
    }
    cands[best].var
}

fn params_score(q0: f64, q1: f64, p: &ScoreParams, ctx: &SelectContext) -> f64 {
    asymmetric_score(q0, q1, ctx.a0, ctx.a1, p.a_min, p.a_max)
}

/// Textbook handling of infeasible children followed by score maximization
/// on `max(delta, eps)`.
fn select_raw(cands: &[Candidate], p: &ScoreParams, ctx: &SelectContext) -> usize {
    let both: Vec<Candidate> = cands.iter().filter(|c| c.gains.infeasible_sides() == 2).copied().collect();
    if !both.is_empty() {
        return both.iter().map(|c| c.var).min().unwrap();
    }
    let one: Vec<Candidate> = cands.iter().filter(|c| c.gains.infeasible_sides() == 1).copied().collect();
    if !one.is_empty() {
        return argmax(&one, |c| c.gains.delta0.min(c.gains.delta1));
    }
    argmax(cands, |c| params_score(c.gains.delta0.max(p.epsilon), c.gains.delta1.max(p.epsilon), p, ctx))
}

fn select_efficacious(cands: &[Candidate], p: &ScoreParams, ctx: &SelectContext) -> usize {
    let dpd = ctx.delta_pd();
    if dpd.is_infinite() && cands.iter().any(|c| c.gains.infeasible_sides() > 0) {
        // Without an incumbent infinite gains cannot be clipped.
        return select_raw(cands, p, ctx);
    }
    argmax(cands, |c| {
        let q = efficacious_clip(c.gains, dpd, p.epsilon);
        params_score(q.q0, q.q1, p, ctx)
    })
}

fn select_pruning(cands: &[Candidate], p: &ScoreParams, ctx: &SelectContext) -> usize {
    let pruned = |c: &Candidate| ctx.child_pruned(c.gains.delta0) as usize + ctx.child_pruned(c.gains.delta1) as usize;
    let top = cands.iter().map(pruned).max().unwrap();
    let class: Vec<Candidate> = cands.iter().filter(|c| pruned(c) == top).copied().collect();
    match top {
        2 => class.iter().map(|c| c.var).min().unwrap(),
        1 => argmax(&class, |c| if ctx.child_pruned(c.gains.delta0) { c.gains.delta1 } else { c.gains.delta0 }),
        _ => argmax(&class, |c| params_score(c.gains.delta0.max(p.epsilon), c.gains.delta1.max(p.epsilon), p, ctx)),
    }
}

/// Picks the branching variable among `cands`; ties break to the lowest index.
pub fn select_variable(cands: &[Candidate], p: &ScoreParams, ctx: &SelectContext) -> usize {
    assert!(!cands.is_empty(), "select_variable needs at least one candidate");
    if p.pruning_focused {
        select_pruning(cands, p, ctx)
    } else {
        match p.gain_source {
            super::GainSource::Raw => select_raw(cands, p, ctx),
            super::GainSource::Efficacious => select_efficacious(cands, p, ctx),
        }
    }
}
