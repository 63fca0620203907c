use super::{
    BasisSnapshot, LpOutcome, LpProblem, LpStatus, LpView, SimplexError, VarStatus, DUAL_TOL, PIVOT_TOL, PRIMAL_TOL,
    REFACTOR_PERIOD,
};
use std::sync::Arc;

const ZERO_STEP: f64 = 1e-12;
/// Relative objective progress below which a pivot counts as degenerate.
const STALL_GAIN: f64 = 1e-9;

enum DualEnd {
    PrimalFeasible,
    Infeasible,
    CapHit,
    LostDualFeasibility,
}

struct PrimalRatio {
    leave: Option<(usize, bool)>,
    step: f64,
}

/// Working state of the revised simplex. Indices `0..n` are structurals,
/// `n..n+m` are row logicals whose column is `-e_i`.
#[derive(Clone)]
pub(super) struct Simplex<'a> {
    p: &'a LpProblem,
    n: usize,
    m: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    head: Vec<usize>,
    status: Vec<VarStatus>,
    /// Row-major dense basis inverse.
    binv: Vec<f64>,
    /// Squared norms of the rows of `binv`, the dual steepest-edge weights.
    row_norms: Vec<f64>,
    x: Vec<f64>,
    d: Vec<f64>,
    duals_valid: bool,
    since_refactor: usize,
    iterations: usize,
    degenerate_run: usize,
}

fn resting_status(lo: f64, hi: f64) -> VarStatus {
    if lo.is_finite() {
        VarStatus::AtLower
    } else if hi.is_finite() {
        VarStatus::AtUpper
    } else {
        VarStatus::Free
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn invert(mut a: Vec<f64>, k: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for c in 0..k {
        let mut piv = c;
        for r in c + 1..k {
            if a[r * k + c].abs() > a[piv * k + c].abs() {
                piv = r;
            }
        }
        if a[piv * k + c].abs() < 1e-11 {
            return None;
        }
        if piv != c {
            for t in 0..k {
                a.swap(piv * k + t, c * k + t);
                inv.swap(piv * k + t, c * k + t);
            }
        }
        let scale = 1.0 / a[c * k + c];
        for t in 0..k {
            a[c * k + t] *= scale;
            inv[c * k + t] *= scale;
        }
        let nonzeros = |v: &[f64]| -> Vec<(usize, f64)> {
            v.iter().enumerate().filter(|(_, &x)| x != 0.0).map(|(t, &x)| (t, x)).collect()
        };
        let arow = nonzeros(&a[c * k..(c + 1) * k]);
        let irow = nonzeros(&inv[c * k..(c + 1) * k]);
        for r in 0..k {
            if r == c {
                continue;
            }
            let f = a[r * k + c];
            if f == 0.0 {
                continue;
            }
            for &(t, v) in &arow {
                a[r * k + t] -= f * v;
            }
            for &(t, v) in &irow {
                inv[r * k + t] -= f * v;
            }
        }
    }
    Some(inv)
}

impl<'a> Simplex<'a> {
    fn empty(view: &LpView<'a>) -> Self {
        let p = view.problem();
        let (n, m) = (p.n, p.m);
        let mut lower = view.lower().to_vec();
        lower.extend_from_slice(&p.row_lower);
        let mut upper = view.upper().to_vec();
        upper.extend_from_slice(&p.row_upper);
        let mut cost = p.cost.clone();
        cost.resize(n + m, 0.0);
        Simplex {
            p,
            n,
            m,
            lower,
            upper,
            cost,
            head: (n..n + m).collect(),
            status: vec![VarStatus::Basic; n + m],
            binv: Vec::new(),
            row_norms: Vec::new(),
            x: vec![0.0; n + m],
            d: vec![0.0; n + m],
            duals_valid: false,
            since_refactor: 0,
            iterations: 0,
            degenerate_run: 0,
        }
    }

    /// All-logical starting basis; `B = -I`. Boxed structurals rest at the
    /// bound their cost favours, so the start is dual feasible whenever every
    /// unboxed column has a favourable cost.
    pub(super) fn slack_basis(view: &LpView<'a>) -> Self {
        let mut s = Self::empty(view);
        for j in 0..s.n {
            let (lo, hi) = (s.lower[j], s.upper[j]);
            s.status[j] = if lo.is_finite() && hi.is_finite() && s.cost[j] < 0.0 {
                VarStatus::AtUpper
            } else {
                resting_status(lo, hi)
            };
        }
        let m = s.m;
        s.binv = vec![0.0; m * m];
        for i in 0..m {
            s.binv[i * m + i] = -1.0;
        }
        s.row_norms = vec![1.0; m];
        s.recompute_primal();
        s.recompute_duals();
        s
    }

    pub(super) fn from_snapshot(view: &LpView<'a>, snap: &BasisSnapshot) -> Result<Self, SimplexError> {
        let mut s = Self::empty(view);
        if snap.status.len() != s.n + s.m {
            return Err(SimplexError::BasisMismatch { expected: s.n + s.m, got: snap.status.len() });
        }
        if snap.head.len() != s.m {
            return Err(SimplexError::BasisMismatch { expected: s.m, got: snap.head.len() });
        }
        s.head = snap.head.clone();
        s.status = snap.status.clone();
        for k in 0..s.n + s.m {
            s.settle(k);
        }
        s.refresh()?;
        Ok(s)
    }

    pub(super) fn lower(&self, k: usize) -> f64 {
        self.lower[k]
    }

    pub(super) fn upper(&self, k: usize) -> f64 {
        self.upper[k]
    }

    /// Keeps a nonbasic status consistent with the variable's current bounds.
    fn settle(&mut self, k: usize) {
        let (lo, hi) = (self.lower[k], self.upper[k]);
        self.status[k] = match self.status[k] {
            VarStatus::Basic => VarStatus::Basic,
            VarStatus::AtLower if lo.is_finite() => VarStatus::AtLower,
            VarStatus::AtUpper if hi.is_finite() => VarStatus::AtUpper,
            VarStatus::Free if !lo.is_finite() && !hi.is_finite() => VarStatus::Free,
            _ => resting_status(lo, hi),
        };
    }

    fn nonbasic_value(&self, k: usize) -> f64 {
        match self.status[k] {
            VarStatus::AtLower => self.lower[k],
            VarStatus::AtUpper => self.upper[k],
            VarStatus::Free => 0.0,
            VarStatus::Basic => self.x[k],
        }
    }

    pub(super) fn tighten(&mut self, var: usize, lo: f64, hi: f64) {
        self.lower[var] = lo;
        self.upper[var] = hi;
        if self.status[var] != VarStatus::Basic {
            self.settle(var);
            if self.nonbasic_value(var) != self.x[var] {
                self.recompute_primal();
            }
        }
    }

    fn refactor(&mut self) -> Result<(), SimplexError> {
        let (n, m) = (self.n, self.m);
        let mut s_cols = Vec::new();
        let mut s_pos = Vec::new();
        let mut slack_pos = vec![usize::MAX; m];
        let mut s_index = vec![usize::MAX; n];
        for (p, &k) in self.head.iter().enumerate() {
            if k < n {
                s_index[k] = s_cols.len();
                s_cols.push(k);
                s_pos.push(p);
            } else {
                slack_pos[k - n] = p;
            }
        }
        let rprime: Vec<usize> = (0..m).filter(|&i| slack_pos[i] == usize::MAX).collect();
        let k = s_cols.len();
        if rprime.len() != k {
            return Err(SimplexError::SingularBasis);
        }
        let mut r_index = vec![usize::MAX; m];
        for (u, &i) in rprime.iter().enumerate() {
            r_index[i] = u;
        }
        let mut block = vec![0.0; k * k];
        for (t, &j) in s_cols.iter().enumerate() {
            for &(i, a) in self.p.column(j) {
                if r_index[i] != usize::MAX {
                    block[r_index[i] * k + t] = a;
                }
            }
        }
        let minv = invert(block, k).ok_or(SimplexError::SingularBasis)?;
        let binv = &mut self.binv;
        binv.clear();
        binv.resize(m * m, 0.0);
        for t in 0..k {
            let p = s_pos[t];
            for (u, &i) in rprime.iter().enumerate() {
                binv[p * m + i] = minv[t * k + u];
            }
        }
        // A basic logical of row i equals A_{i,S} x_S - v_i.
        for i in 0..m {
            let p = slack_pos[i];
            if p == usize::MAX {
                continue;
            }
            binv[p * m + i] = -1.0;
            for &(j, a) in self.p.row(i) {
                let t = s_index[j];
                if t == usize::MAX {
                    continue;
                }
                for (u, &ri) in rprime.iter().enumerate() {
                    binv[p * m + ri] += a * minv[t * k + u];
                }
            }
        }
        self.row_norms = (0..m).map(|p| norm2(&self.binv[p * m..(p + 1) * m])).collect();
        self.since_refactor = 0;
        Ok(())
    }

    fn refresh(&mut self) -> Result<(), SimplexError> {
        self.refactor()?;
        self.recompute_primal();
        self.recompute_duals();
        Ok(())
    }

    fn recompute_primal(&mut self) {
        let (n, m) = (self.n, self.m);
        let mut v = vec![0.0; m];
        for k in 0..n + m {
            if self.status[k] == VarStatus::Basic {
                continue;
            }
            let val = self.nonbasic_value(k);
            self.x[k] = val;
            if val == 0.0 {
                continue;
            }
            if k < n {
                for &(i, a) in self.p.column(k) {
                    v[i] += a * val;
                }
            } else {
                v[k - n] -= val;
            }
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            let s: f64 = row.iter().zip(&v).map(|(b, vi)| b * vi).sum();
            self.x[self.head[p]] = -s;
        }
    }

    fn row_duals(&self, basic_cost: impl Fn(usize) -> f64) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for p in 0..m {
            let c = basic_cost(p);
            if c == 0.0 {
                continue;
            }
            for (yi, b) in y.iter_mut().zip(&self.binv[p * m..(p + 1) * m]) {
                *yi += c * b;
            }
        }
        y
    }

    fn reduced_cost(&self, k: usize, c: f64, y: &[f64]) -> f64 {
        if k < self.n {
            c - self.p.column(k).iter().map(|&(i, a)| a * y[i]).sum::<f64>()
        } else {
            c + y[k - self.n]
        }
    }

    fn recompute_duals(&mut self) {
        let y = self.row_duals(|p| self.cost[self.head[p]]);
        for k in 0..self.n + self.m {
            self.d[k] = if self.status[k] == VarStatus::Basic { 0.0 } else { self.reduced_cost(k, self.cost[k], &y) };
        }
        self.duals_valid = true;
    }

    fn column(&self, q: usize) -> Vec<f64> {
        let m = self.m;
        if q < self.n {
            let col = self.p.column(q);
            (0..m).map(|p| col.iter().map(|&(i, a)| self.binv[p * m + i] * a).sum()).collect()
        } else {
            let i = q - self.n;
            (0..m).map(|p| -self.binv[p * m + i]).collect()
        }
    }

    /// Row `r` of `B^-1 [A | -I]`, zero on basic positions.
    fn pivot_row(&self, r: usize) -> Vec<f64> {
        let (n, m) = (self.n, self.m);
        let rho = &self.binv[r * m..(r + 1) * m];
        let mut row = vec![0.0; n + m];
        for k in 0..n + m {
            if self.status[k] == VarStatus::Basic {
                continue;
            }
            row[k] = if k < n { self.p.column(k).iter().map(|&(i, a)| rho[i] * a).sum() } else { -rho[k - n] };
        }
        row
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let inv = 1.0 / alpha[r];
        for b in &mut self.binv[r * m..(r + 1) * m] {
            *b *= inv;
        }
        let prow: Vec<(usize, f64)> =
            self.binv[r * m..(r + 1) * m].iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, &v)| (i, v)).collect();
        for (p, &f) in alpha.iter().enumerate() {
            if p == r || f == 0.0 {
                continue;
            }
            let row = &mut self.binv[p * m..(p + 1) * m];
            for &(i, v) in &prow {
                row[i] -= f * v;
            }
            self.row_norms[p] = norm2(row);
        }
        self.row_norms[r] = prow.iter().map(|(_, v)| v * v).sum();
        self.head[r] = q;
        self.status[q] = VarStatus::Basic;
        self.since_refactor += 1;
    }

    fn infeasibility(&self, k: usize) -> f64 {
        (self.lower[k] - self.x[k]).max(self.x[k] - self.upper[k]).max(0.0)
    }

    fn max_infeasibility(&self) -> f64 {
        self.head.iter().map(|&k| self.infeasibility(k)).fold(0.0, f64::max)
    }

    fn bland(&self) -> bool {
        self.degenerate_run > 3 * (self.n + self.m)
    }

    fn note_step(&mut self, gain: f64) {
        let scale: f64 = 1.0 + self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum::<f64>().abs();
        if gain.abs() <= STALL_GAIN * scale {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
        }
    }

    fn iteration_guard(&self) -> Result<(), SimplexError> {
        if self.iterations > 50 * (self.n + self.m) + 20_000 {
            Err(SimplexError::Numerical("simplex iteration guard exceeded".into()))
        } else {
            Ok(())
        }
    }

    fn dual_feasible(&self) -> bool {
        (0..self.n + self.m).all(|k| {
            if self.lower[k] == self.upper[k] {
                return true;
            }
            match self.status[k] {
                VarStatus::Basic => true,
                VarStatus::AtLower => self.d[k] >= -DUAL_TOL,
                VarStatus::AtUpper => self.d[k] <= DUAL_TOL,
                VarStatus::Free => self.d[k].abs() <= DUAL_TOL,
            }
        })
    }

    /// Picks an improving nonbasic variable and its direction of motion.
    fn choose_entering(&self, d: &[f64]) -> Option<(usize, f64, f64)> {
        let bland = self.bland();
        let mut best: Option<(usize, f64, f64)> = None;
        let mut best_score = 0.0;
        for k in 0..self.n + self.m {
            if self.status[k] == VarStatus::Basic || self.lower[k] == self.upper[k] {
                continue;
            }
            let dk = d[k];
            let dir = match self.status[k] {
                VarStatus::AtLower if dk < -DUAL_TOL => 1.0,
                VarStatus::AtUpper if dk > DUAL_TOL => -1.0,
                VarStatus::Free if dk.abs() > DUAL_TOL => -dk.signum(),
                _ => continue,
            };
            if bland {
                return Some((k, dir, dk.abs()));
            }
            if dk.abs() > best_score {
                best_score = dk.abs();
                best = Some((k, dir, dk.abs()));
            }
        }
        best
    }

    fn primal_ratio(&self, alpha: &[f64], dir: f64, phase1: bool) -> PrimalRatio {
        let bland = self.bland();
        // (position, exact ratio, relaxed ratio, to_upper)
        let mut cands: Vec<(usize, f64, f64, bool)> = Vec::new();
        for (p, &a) in alpha.iter().enumerate() {
            if a.abs() < PIVOT_TOL {
                continue;
            }
            let k = self.head[p];
            let beta = -dir * a;
            let (x, lo, hi) = (self.x[k], self.lower[k], self.upper[k]);
            let (bound, to_upper) = if phase1 && x < lo - PRIMAL_TOL {
                if beta <= 0.0 {
                    continue;
                }
                (lo, false)
            } else if phase1 && x > hi + PRIMAL_TOL {
                if beta >= 0.0 {
                    continue;
                }
                (hi, true)
            } else if beta > 0.0 {
                if !hi.is_finite() {
                    continue;
                }
                (hi, true)
            } else {
                if !lo.is_finite() {
                    continue;
                }
                (lo, false)
            };
            let ratio = (bound - x) / beta;
            cands.push((p, ratio, ratio + PRIMAL_TOL / beta.abs(), to_upper));
        }
        let chosen = if bland {
            let tmin = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            cands.iter().filter(|c| c.1 <= tmin + ZERO_STEP).min_by_key(|c| self.head[c.0]).copied()
        } else {
            let tmax = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
            let mut pick: Option<(usize, f64, f64, bool)> = None;
            for &c in cands.iter().filter(|c| c.1 <= tmax) {
                if pick.is_none_or(|b| alpha[c.0].abs() > alpha[b.0].abs()) {
                    pick = Some(c);
                }
            }
            pick
        };
        match chosen {
            Some((p, ratio, _, to_upper)) => PrimalRatio { leave: Some((p, to_upper)), step: ratio.max(0.0) },
            None => PrimalRatio { leave: None, step: f64::INFINITY },
        }
    }

    /// Reduced costs for the phase-one objective (sum of infeasibilities).
    fn phase1_costs(&self) -> Vec<f64> {
        let c1: Vec<f64> = self
            .head
            .iter()
            .map(|&k| {
                if self.x[k] < self.lower[k] - PRIMAL_TOL {
                    -1.0
                } else if self.x[k] > self.upper[k] + PRIMAL_TOL {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let y = self.row_duals(|p| c1[p]);
        (0..self.n + self.m)
            .map(|k| if self.status[k] == VarStatus::Basic { 0.0 } else { self.reduced_cost(k, 0.0, &y) })
            .collect()
    }

    fn primal(&mut self) -> Result<LpStatus, SimplexError> {
        loop {
            if self.since_refactor >= REFACTOR_PERIOD {
                self.refresh()?;
            }
            self.iteration_guard()?;
            let phase1 = self.max_infeasibility() > PRIMAL_TOL;
            let entering = if phase1 {
                let d1 = self.phase1_costs();
                self.choose_entering(&d1)
            } else {
                if !self.duals_valid {
                    self.recompute_duals();
                }
                self.choose_entering(&self.d)
            };
            let Some((q, dir, dq)) = entering else {
                return Ok(if phase1 { LpStatus::Infeasible } else { LpStatus::Optimal });
            };
            let alpha = self.column(q);
            let ratio = self.primal_ratio(&alpha, dir, phase1);
            let range = self.upper[q] - self.lower[q];
            let flip = range.is_finite() && range <= ratio.step;
            let step = if flip { range } else { ratio.step };
            if !step.is_finite() {
                if phase1 {
                    return Err(SimplexError::Numerical("unbounded phase-one direction".into()));
                }
                return Ok(LpStatus::Unbounded);
            }
            self.x[q] += dir * step;
            for (p, &a) in alpha.iter().enumerate() {
                if a != 0.0 {
                    self.x[self.head[p]] -= dir * a * step;
                }
            }
            self.iterations += 1;
            self.note_step(dq * step);
            if flip {
                self.status[q] = if dir > 0.0 { VarStatus::AtUpper } else { VarStatus::AtLower };
                self.x[q] = self.nonbasic_value(q);
                continue;
            }
            let (r, to_upper) = ratio.leave.expect("finite step implies a leaving row");
            let leaving = self.head[r];
            self.status[leaving] = if to_upper { VarStatus::AtUpper } else { VarStatus::AtLower };
            self.x[leaving] = if to_upper { self.upper[leaving] } else { self.lower[leaving] };
            if !phase1 && self.duals_valid {
                let row = self.pivot_row(r);
                let theta = self.d[q] / alpha[r];
                for (dk, rk) in self.d.iter_mut().zip(&row) {
                    if *rk != 0.0 {
                        *dk -= theta * rk;
                    }
                }
                self.d[leaving] = -theta;
                self.d[q] = 0.0;
            } else {
                self.duals_valid = false;
            }
            self.pivot(r, q, &alpha);
        }
    }

    fn dual(&mut self, cap: Option<usize>) -> Result<DualEnd, SimplexError> {
        let start = self.iterations;
        loop {
            if self.since_refactor >= REFACTOR_PERIOD {
                self.refresh()?;
                if !self.dual_feasible() {
                    return Ok(DualEnd::LostDualFeasibility);
                }
            }
            self.iteration_guard()?;
            let bland = self.bland();
            let mut leave: Option<(usize, f64)> = None;
            for (p, &k) in self.head.iter().enumerate() {
                let inf = self.infeasibility(k);
                if inf <= PRIMAL_TOL {
                    continue;
                }
                let inf = inf * inf / self.row_norms[p];
                let better = match leave {
                    None => true,
                    Some((bp, binf)) => {
                        if bland {
                            k < self.head[bp]
                        } else {
                            inf > binf
                        }
                    }
                };
                if better {
                    leave = Some((p, inf));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(DualEnd::PrimalFeasible);
            };
            if cap.is_some_and(|c| self.iterations - start >= c) {
                return Ok(DualEnd::CapHit);
            }
            let kl = self.head[r];
            let (s, target) = if self.x[kl] > self.upper[kl] { (1.0, self.upper[kl]) } else { (-1.0, self.lower[kl]) };
            let row = self.pivot_row(r);
            // (index, exact ratio, relaxed ratio, |alpha|)
            let mut cands: Vec<(usize, f64, f64, f64)> = Vec::new();
            for k in 0..self.n + self.m {
                if self.status[k] == VarStatus::Basic || self.lower[k] == self.upper[k] {
                    continue;
                }
                let ah = s * row[k];
                if ah.abs() < PIVOT_TOL {
                    continue;
                }
                let dk = self.d[k];
                match self.status[k] {
                    VarStatus::AtLower if ah > 0.0 => cands.push((k, dk / ah, (dk + DUAL_TOL) / ah, ah.abs())),
                    VarStatus::AtUpper if ah < 0.0 => cands.push((k, dk / ah, (dk - DUAL_TOL) / ah, ah.abs())),
                    VarStatus::Free => cands.push((k, dk.abs() / ah.abs(), (dk.abs() + DUAL_TOL) / ah.abs(), ah.abs())),
                    _ => {}
                }
            }
            let chosen = if bland {
                let tmin = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
                cands.iter().find(|c| c.1 <= tmin + ZERO_STEP).copied()
            } else {
                let tmax = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
                let mut pick: Option<(usize, f64, f64, f64)> = None;
                for &c in cands.iter().filter(|c| c.1 <= tmax) {
                    if pick.is_none_or(|b| c.3 > b.3) {
                        pick = Some(c);
                    }
                }
                pick
            };
            let Some((q, ratio, _, _)) = chosen else {
                return Ok(DualEnd::Infeasible);
            };
            let alpha = self.column(q);
            if alpha[r].abs() < PIVOT_TOL || (alpha[r] - row[q]).abs() > 1e-6 * (1.0 + alpha[r].abs()) {
                if self.since_refactor > 0 {
                    self.refresh()?;
                    if !self.dual_feasible() {
                        return Ok(DualEnd::LostDualFeasibility);
                    }
                    continue;
                }
                return Err(SimplexError::Numerical("unstable dual pivot".into()));
            }
            let t = ratio.max(0.0);
            for (dk, rk) in self.d.iter_mut().zip(&row) {
                if *rk != 0.0 {
                    *dk -= t * s * rk;
                }
            }
            self.d[kl] = -s * t;
            self.d[q] = 0.0;
            let gain = t * (self.x[kl] - target).abs();
            let dq = (self.x[kl] - target) / alpha[r];
            for (p, &a) in alpha.iter().enumerate() {
                if a != 0.0 {
                    self.x[self.head[p]] -= a * dq;
                }
            }
            self.x[q] += dq;
            self.x[kl] = target;
            self.status[kl] = if s > 0.0 { VarStatus::AtUpper } else { VarStatus::AtLower };
            self.pivot(r, q, &alpha);
            self.iterations += 1;
            self.note_step(gain);
        }
    }

    /// Lagrangian bound `sum_k min_{x_k in [l_k,u_k]} d_k x_k` from fresh row
    /// duals; valid for any multipliers, so it survives early termination.
    fn lagrangian_bound(&self) -> f64 {
        let y = self.row_duals(|p| self.cost[self.head[p]]);
        let mut bound = 0.0;
        for k in 0..self.n + self.m {
            if self.status[k] == VarStatus::Basic {
                continue;
            }
            let dk = self.reduced_cost(k, self.cost[k], &y);
            if dk.abs() <= ZERO_STEP {
                continue;
            }
            let at = if dk > 0.0 { self.lower[k] } else { self.upper[k] };
            if !at.is_finite() {
                return f64::NEG_INFINITY;
            }
            bound += dk * at;
        }
        bound
    }

    fn outcome(&self, status: LpStatus) -> LpOutcome {
        match status {
            LpStatus::Optimal => {
                let objective: f64 = (0..self.n).map(|j| self.cost[j] * self.x[j]).sum();
                LpOutcome {
                    status,
                    objective,
                    dual_bound: objective,
                    primal: Some(self.x[..self.n].to_vec()),
                    basis: Some(Arc::new(BasisSnapshot { head: self.head.clone(), status: self.status.clone() })),
                    iterations: self.iterations,
                }
            }
            LpStatus::Infeasible => LpOutcome::infeasible(self.iterations),
            LpStatus::Unbounded => LpOutcome {
                status,
                objective: f64::NEG_INFINITY,
                dual_bound: f64::NEG_INFINITY,
                primal: None,
                basis: None,
                iterations: self.iterations,
            },
            LpStatus::IterationLimit => {
                let bound = self.lagrangian_bound();
                LpOutcome {
                    status,
                    objective: bound,
                    dual_bound: bound,
                    primal: None,
                    basis: None,
                    iterations: self.iterations,
                }
            }
        }
    }

    pub(super) fn solve_warm(&mut self, cap: Option<usize>) -> Result<LpOutcome, SimplexError> {
        if !self.duals_valid {
            self.recompute_duals();
        }
        if self.dual_feasible() {
            match self.dual(cap)? {
                DualEnd::CapHit => return Ok(self.outcome(LpStatus::IterationLimit)),
                DualEnd::Infeasible => return Ok(self.outcome(LpStatus::Infeasible)),
                DualEnd::PrimalFeasible | DualEnd::LostDualFeasibility => {}
            }
        }
        let status = self.primal()?;
        Ok(self.outcome(status))
    }
}
