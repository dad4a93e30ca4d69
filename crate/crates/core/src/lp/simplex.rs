//! Bounded-variable simplex on a dense condensed (Tucker) tableau.
//!
//! Every row gets an activity variable r_i = a_iᵀx whose bounds encode the
//! relation, so all constraints are bounds and the tableau expresses each
//! basic variable as a linear combination of the nonbasic ones. Phase 1
//! minimizes the sum of infeasibilities, phase 2 the objective; a dual simplex
//! re-optimizes after rows are appended (cutting planes).

use std::time::Instant;

use super::{row_violation, LinearProgram, LpRow, LpSolution, LpStatus, Relation, SolverConfig};

const PIV_TOL: f64 = 1e-9;
const DROP_TOL: f64 = 1e-14;
const REFRESH_EVERY: usize = 200;
const BLAND_AFTER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Pos {
    Basic(usize),
    Nonbasic(usize),
}

pub struct Simplex {
    nrows: usize,
    ncols: usize,
    tab: Vec<f64>,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
    pos: Vec<Pos>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    val: Vec<f64>,
    cost: Vec<f64>,
    dj: Vec<f64>,
    dj_valid: bool,
    /// Rows kept in the tableau as (activity variable, normalized
    /// coefficients), for re-inversion and the final check.
    trows: Vec<(usize, Vec<(usize, f64)>)>,
    /// Per variable: row activities that [`Simplex::drop_slack_rows`] must keep.
    pinned: Vec<bool>,
    /// Rows folded into bounds or found empty; checked at the end too.
    check_rows: Vec<LpRow>,
    orig_lo: Vec<f64>,
    orig_hi: Vec<f64>,
    cfg: SolverConfig,
    iterations: usize,
    status: Option<LpStatus>,
    trivially_infeasible: bool,
    degenerate_run: usize,
    since_refresh: usize,
}

fn normalize(coeffs: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut c: Vec<(usize, f64)> = coeffs.iter().copied().filter(|(_, v)| *v != 0.0).collect();
    c.sort_by_key(|(j, _)| *j);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(c.len());
    for (j, v) in c {
        match out.last_mut() {
            Some((k, w)) if *k == j => *w += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| *v != 0.0);
    out
}

fn relation_bounds(rel: Relation, rhs: f64) -> (f64, f64) {
    match rel {
        Relation::Ge => (rhs, f64::INFINITY),
        Relation::Le => (f64::NEG_INFINITY, rhs),
        Relation::Eq => (rhs, rhs),
    }
}

fn start_value(lo: f64, hi: f64) -> f64 {
    if lo.is_finite() {
        lo
    } else if hi.is_finite() {
        hi
    } else {
        0.0
    }
}

enum Step {
    Flip(f64),
    Pivot { row: usize, step: f64, target: f64 },
    Unbounded,
}

impl Simplex {
    pub fn new(lp: &LinearProgram, cfg: SolverConfig) -> Self {
        let n = lp.num_vars();
        let mut lo = lp.lower.clone();
        let mut hi = lp.upper.clone();
        let mut infeasible = false;
        let mut trows = Vec::new();
        let mut check_rows = Vec::new();
        let ftol = cfg.feas_tol;
        for r in &lp.rows {
            let c = normalize(&r.coeffs);
            match c.len() {
                0 => {
                    let (l, h) = relation_bounds(r.rel, r.rhs);
                    if l > ftol || h < -ftol {
                        infeasible = true;
                    }
                    check_rows.push(r.clone());
                }
                // singleton rows become bounds
                1 => {
                    let (j, a) = c[0];
                    let (l, h) = relation_bounds(r.rel, r.rhs);
                    let (l, h) = if a > 0.0 {
                        (l / a, h / a)
                    } else {
                        (h / a, l / a)
                    };
                    lo[j] = lo[j].max(l);
                    hi[j] = hi[j].min(h);
                    check_rows.push(r.clone());
                }
                _ => trows.push((c, r.rel, r.rhs)),
            }
        }
        for j in 0..n {
            if lo[j] > hi[j] {
                if lo[j] - hi[j] <= ftol * (1.0 + lo[j].abs()) {
                    hi[j] = lo[j];
                } else {
                    infeasible = true;
                }
            }
        }
        let nrows = trows.len();
        let mut s = Simplex {
            nrows: 0,
            ncols: n,
            tab: Vec::with_capacity(nrows * n),
            basis: Vec::with_capacity(nrows),
            nonbasic: (0..n).collect(),
            pos: (0..n).map(Pos::Nonbasic).collect(),
            val: (0..n).map(|j| start_value(lo[j], hi[j])).collect(),
            lo,
            hi,
            cost: lp.objective.clone(),
            dj: vec![0.0; n],
            dj_valid: false,
            trows: Vec::with_capacity(nrows),
            pinned: vec![false; n],
            check_rows,
            orig_lo: lp.lower.clone(),
            orig_hi: lp.upper.clone(),
            cfg,
            iterations: 0,
            status: None,
            trivially_infeasible: infeasible,
            degenerate_run: 0,
            since_refresh: 0,
        };
        for (c, rel, rhs) in trows {
            s.push_row(c, rel, rhs, false);
        }
        s
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Rows currently held in the tableau.
    pub fn num_rows(&self) -> usize {
        self.nrows
    }

    /// Appends a row while keeping the current basis; follow with
    /// [`Simplex::reoptimize`].
    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rel: Relation, rhs: f64) {
        self.append(coeffs, rel, rhs, false);
    }

    /// Like [`Simplex::add_row`], but the row survives [`Simplex::drop_slack_rows`].
    pub fn add_pinned_row(&mut self, coeffs: Vec<(usize, f64)>, rel: Relation, rhs: f64) {
        self.append(coeffs, rel, rhs, true);
    }

    fn append(&mut self, coeffs: Vec<(usize, f64)>, rel: Relation, rhs: f64, pinned: bool) {
        let c = normalize(&coeffs);
        if c.is_empty() {
            let (l, h) = relation_bounds(rel, rhs);
            if l > self.cfg.feas_tol || h < -self.cfg.feas_tol {
                self.trivially_infeasible = true;
            }
            self.check_rows.push(LpRow { coeffs, rel, rhs });
            return;
        }
        self.push_row(c, rel, rhs, pinned);
        self.status = None;
    }

    fn push_row(&mut self, c: Vec<(usize, f64)>, rel: Relation, rhs: f64, pinned: bool) {
        let nc = self.ncols;
        let mut row = vec![0.0; nc];
        let mut act = 0.0;
        for &(k, a) in &c {
            act += a * self.val[k];
            match self.pos[k] {
                Pos::Nonbasic(j) => row[j] += a,
                Pos::Basic(i) => {
                    let src = &self.tab[i * nc..(i + 1) * nc];
                    for (x, y) in row.iter_mut().zip(src) {
                        *x += a * y;
                    }
                }
            }
        }
        let v = self.lo.len();
        let (l, h) = relation_bounds(rel, rhs);
        self.lo.push(l);
        self.hi.push(h);
        self.val.push(act);
        self.cost.push(0.0);
        self.pinned.push(pinned);
        self.pos.push(Pos::Basic(self.nrows));
        self.basis.push(v);
        self.tab.extend_from_slice(&row);
        self.trows.push((v, c));
        self.nrows += 1;
    }

    /// Pins every row currently in the tableau.
    pub fn pin_rows(&mut self) {
        for (v, _) in &self.trows {
            self.pinned[*v] = true;
        }
    }

    /// Drops rows whose activity is basic and at least `margin` away from
    /// both bounds. The current basis stays optimal. Returns how many went.
    pub fn drop_slack_rows(&mut self, margin: f64) -> usize {
        let nc = self.ncols;
        let mut dropped = 0;
        let mut k = 0;
        while k < self.trows.len() {
            let v = self.trows[k].0;
            let slack = (self.val[v] - self.lo[v]).min(self.hi[v] - self.val[v]);
            let Pos::Basic(i) = self.pos[v] else {
                k += 1;
                continue;
            };
            if slack <= margin || self.pinned[v] {
                k += 1;
                continue;
            }
            let last = self.nrows - 1;
            if i != last {
                let (head, tail) = self.tab.split_at_mut(last * nc);
                head[i * nc..(i + 1) * nc].copy_from_slice(&tail[..nc]);
                let moved = self.basis[last];
                self.basis[i] = moved;
                self.pos[moved] = Pos::Basic(i);
            }
            self.tab.truncate(last * nc);
            // the variable slot stays but is free and never read again
            self.lo[v] = f64::NEG_INFINITY;
            self.hi[v] = f64::INFINITY;
            self.basis.pop();
            self.nrows -= 1;
            self.trows.swap_remove(k);
            dropped += 1;
        }
        dropped
    }

    #[inline]
    fn infeas(&self, v: usize) -> f64 {
        let x = self.val[v];
        if x < self.lo[v] {
            self.lo[v] - x
        } else if x > self.hi[v] {
            x - self.hi[v]
        } else {
            0.0
        }
    }

    fn cap(&self) -> usize {
        self.cfg
            .max_iter
            .unwrap_or(50 * (self.nrows + self.ncols))
            .max(50)
    }

    fn out_of_time(&self) -> bool {
        self.cfg.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn refresh(&mut self) {
        let nc = self.ncols;
        for i in 0..self.nrows {
            let row = &self.tab[i * nc..(i + 1) * nc];
            let s: f64 = row
                .iter()
                .zip(&self.nonbasic)
                .map(|(t, &v)| t * self.val[v])
                .sum();
            self.val[self.basis[i]] = s;
        }
        self.since_refresh = 0;
        self.compute_dj();
    }

    fn compute_dj(&mut self) {
        let nc = self.ncols;
        for k in 0..nc {
            self.dj[k] = self.cost[self.nonbasic[k]];
        }
        for i in 0..self.nrows {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.tab[i * nc..(i + 1) * nc];
                for (d, t) in self.dj.iter_mut().zip(row) {
                    *d += cb * t;
                }
            }
        }
        self.dj_valid = true;
    }

    /// Tableau pivot: basic of row `r` leaves, nonbasic of column `j` enters.
    fn pivot(&mut self, r: usize, j: usize) {
        let nc = self.ncols;
        let p = self.tab[r * nc + j];
        let mut nz: Vec<(usize, f64)> = Vec::with_capacity(nc);
        {
            let row = &mut self.tab[r * nc..(r + 1) * nc];
            for (k, x) in row.iter_mut().enumerate() {
                let y = if k == j { 1.0 / p } else { -*x / p };
                *x = if y.abs() < DROP_TOL { 0.0 } else { y };
                if *x != 0.0 {
                    nz.push((k, *x));
                }
            }
        }
        for i in 0..self.nrows {
            if i == r {
                continue;
            }
            let row = &mut self.tab[i * nc..(i + 1) * nc];
            let f = row[j];
            if f == 0.0 {
                continue;
            }
            row[j] = 0.0;
            for &(k, rk) in &nz {
                row[k] += f * rk;
            }
        }
        if self.dj_valid {
            let f = self.dj[j];
            if f != 0.0 {
                self.dj[j] = 0.0;
                for &(k, rk) in &nz {
                    self.dj[k] += f * rk;
                }
            }
        }
        let enter = self.nonbasic[j];
        let leave = self.basis[r];
        self.basis[r] = enter;
        self.nonbasic[j] = leave;
        self.pos[enter] = Pos::Basic(r);
        self.pos[leave] = Pos::Nonbasic(j);
        self.since_refresh += 1;
    }

    /// Moves nonbasic column `j` by `delta`, then pivots or snaps it to a bound.
    fn apply(&mut self, j: usize, delta: f64, leave: Option<(usize, f64)>) {
        let nc = self.ncols;
        let v = self.nonbasic[j];
        if delta != 0.0 {
            self.val[v] += delta;
            for i in 0..self.nrows {
                let t = self.tab[i * nc + j];
                if t != 0.0 {
                    self.val[self.basis[i]] += t * delta;
                }
            }
        }
        match leave {
            Some((r, target)) => {
                self.val[self.basis[r]] = target;
                self.pivot(r, j);
            }
            None => {
                self.val[v] = if delta > 0.0 { self.hi[v] } else { self.lo[v] };
            }
        }
        self.iterations += 1;
        if delta.abs() <= 1e-12 {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
        }
    }

    fn choose_entering(&self, d: &[f64]) -> Option<(usize, f64)> {
        let bland = self.degenerate_run > BLAND_AFTER;
        let tol = self.cfg.opt_tol;
        let mut best: Option<(usize, f64, f64)> = None;
        for (k, &dk) in d.iter().enumerate() {
            let v = self.nonbasic[k];
            let dir = if dk < -tol && self.val[v] < self.hi[v] {
                1.0
            } else if dk > tol && self.val[v] > self.lo[v] {
                -1.0
            } else {
                continue;
            };
            let better = match best {
                None => true,
                Some((bk, _, bd)) => {
                    if bland {
                        v < self.nonbasic[bk]
                    } else {
                        dk.abs() > bd
                    }
                }
            };
            if better {
                best = Some((k, dir, dk.abs()));
            }
        }
        best.map(|(k, dir, _)| (k, dir))
    }

    /// Harris two-pass ratio test for column `j` moving in direction `dir`.
    fn ratio_test(&self, j: usize, dir: f64, phase1: bool) -> Step {
        let nc = self.ncols;
        let tol = self.cfg.feas_tol;
        let v = self.nonbasic[j];
        let span = if dir > 0.0 {
            self.hi[v] - self.val[v]
        } else {
            self.val[v] - self.lo[v]
        };
        let mut cands: Vec<(usize, f64, f64, f64, f64)> = Vec::new();
        let mut theta = f64::INFINITY;
        for i in 0..self.nrows {
            let t = self.tab[i * nc + j];
            let rate = dir * t;
            let b = self.basis[i];
            let (x, l, h) = (self.val[b], self.lo[b], self.hi[b]);
            let below = phase1 && x < l - tol;
            let above = phase1 && x > h + tol;
            let min_piv = if below || above { 1e-12 } else { PIV_TOL };
            if t.abs() <= min_piv {
                continue;
            }
            let lim = if rate > 0.0 {
                if below {
                    Some(((l + tol - x) / rate, (l - x) / rate, l))
                } else if above || !h.is_finite() {
                    None
                } else {
                    Some(((h + tol - x) / rate, (h - x) / rate, h))
                }
            } else if above {
                Some(((x - h + tol) / -rate, (x - h) / -rate, h))
            } else if below || !l.is_finite() {
                None
            } else {
                Some(((x - l + tol) / -rate, (x - l) / -rate, l))
            };
            if let Some((relaxed, exact, target)) = lim {
                theta = theta.min(relaxed);
                cands.push((i, relaxed, exact.max(0.0), target, t.abs()));
            }
        }
        if span <= theta && span.is_finite() {
            return Step::Flip(span);
        }
        if cands.is_empty() {
            return Step::Unbounded;
        }
        let bland = self.degenerate_run > BLAND_AFTER;
        let mut best: Option<(usize, f64, f64, f64)> = None;
        for &(i, _, exact, target, mag) in &cands {
            if exact > theta {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, _, _, bm)) => {
                    if bland {
                        self.basis[i] < self.basis[bi]
                    } else {
                        mag > bm
                    }
                }
            };
            if better {
                best = Some((i, exact, target, mag));
            }
        }
        match best {
            Some((row, step, target, _)) => Step::Pivot { row, step, target },
            None => {
                // every exact limit exceeds the relaxed minimum only through rounding
                let &(row, _, step, target, _) = cands
                    .iter()
                    .min_by(|a, b| a.2.total_cmp(&b.2))
                    .expect("nonempty");
                Step::Pivot { row, step, target }
            }
        }
    }

    fn phase1_costs(&self) -> Option<Vec<f64>> {
        let nc = self.ncols;
        let tol = self.cfg.feas_tol;
        let mut g = vec![0.0; nc];
        let mut any = false;
        for i in 0..self.nrows {
            let b = self.basis[i];
            let x = self.val[b];
            let w = if x < self.lo[b] - tol {
                -1.0
            } else if x > self.hi[b] + tol {
                1.0
            } else {
                continue;
            };
            any = true;
            let row = &self.tab[i * nc..(i + 1) * nc];
            for (gk, t) in g.iter_mut().zip(row) {
                *gk += w * t;
            }
        }
        any.then_some(g)
    }

    fn primal(&mut self) -> LpStatus {
        let start = self.iterations;
        let cap = self.cap();
        loop {
            if self.iterations - start >= cap {
                return LpStatus::IterLimit;
            }
            if self.out_of_time() {
                return LpStatus::TimeLimit;
            }
            if self.since_refresh >= REFRESH_EVERY {
                self.refresh();
            }
            let (phase1, choice) = match self.phase1_costs() {
                Some(g) => (true, self.choose_entering(&g)),
                None => {
                    if !self.dj_valid {
                        self.compute_dj();
                    }
                    (false, self.choose_entering(&self.dj))
                }
            };
            let Some((j, dir)) = choice else {
                return if phase1 {
                    LpStatus::Infeasible
                } else {
                    LpStatus::Optimal
                };
            };
            match self.ratio_test(j, dir, phase1) {
                Step::Flip(step) => self.apply(j, dir * step, None),
                Step::Pivot { row, step, target } => self.apply(j, dir * step, Some((row, target))),
                Step::Unbounded => {
                    return if phase1 {
                        LpStatus::Infeasible
                    } else {
                        LpStatus::Unbounded
                    };
                }
            }
        }
    }

    fn current_violation(&self) -> f64 {
        let x = &self.val[..self.ncols];
        let mut worst = 0.0f64;
        for (j, v) in x.iter().enumerate() {
            worst = worst.max(self.orig_lo[j] - v).max(v - self.orig_hi[j]);
        }
        for r in &self.check_rows {
            worst = worst.max(row_violation(r, x));
        }
        for (v, c) in &self.trows {
            let act: f64 = c.iter().map(|&(j, a)| a * x[j]).sum();
            worst = worst.max(self.lo[*v] - act).max(act - self.hi[*v]);
        }
        worst
    }

    /// Runs primal phases 1 and 2 from the current basis.
    pub fn solve(&mut self) -> LpStatus {
        if self.trivially_infeasible {
            self.status = Some(LpStatus::Infeasible);
            return LpStatus::Infeasible;
        }
        let mut reinverted = false;
        let st = loop {
            let st = self.primal();
            if st == LpStatus::Optimal
                && !reinverted
                && self.current_violation() > self.cfg.feas_tol
            {
                reinverted = true;
                self.reinvert();
                continue;
            }
            break st;
        };
        self.status = Some(st);
        st
    }

    fn dual_feasible(&self) -> bool {
        let tol = self.cfg.opt_tol * 10.0;
        self.dj.iter().enumerate().all(|(k, &d)| {
            let v = self.nonbasic[k];
            let up = self.val[v] < self.hi[v];
            let down = self.val[v] > self.lo[v];
            !((up && d < -tol) || (down && d > tol))
        })
    }

    /// Re-optimizes after [`Simplex::add_row`]: dual simplex while the basis
    /// stays dual feasible, primal clean-up afterwards.
    pub fn reoptimize(&mut self) -> LpStatus {
        if self.trivially_infeasible {
            self.status = Some(LpStatus::Infeasible);
            return LpStatus::Infeasible;
        }
        if !self.dj_valid {
            self.compute_dj();
        }
        if self.dual_feasible() {
            let start = self.iterations;
            let cap = self.cap();
            let nc = self.ncols;
            let ftol = self.cfg.feas_tol;
            let otol = self.cfg.opt_tol;
            loop {
                if self.iterations - start >= cap {
                    self.status = Some(LpStatus::IterLimit);
                    return LpStatus::IterLimit;
                }
                if self.out_of_time() {
                    self.status = Some(LpStatus::TimeLimit);
                    return LpStatus::TimeLimit;
                }
                if self.since_refresh >= REFRESH_EVERY {
                    self.refresh();
                }
                // steepest-edge style: infeasibility² over the squared row norm
                let mut leave: Option<(usize, f64)> = None;
                for i in 0..self.nrows {
                    let inf = self.infeas(self.basis[i]);
                    if inf <= ftol {
                        continue;
                    }
                    let norm: f64 = self.tab[i * nc..(i + 1) * nc].iter().map(|t| t * t).sum();
                    let score = inf * inf / (1.0 + norm);
                    if leave.map_or(true, |(_, w)| score > w) {
                        leave = Some((i, score));
                    }
                }
                let Some((r, _)) = leave else { break };
                let b = self.basis[r];
                let (target, up_needed) = if self.val[b] < self.lo[b] {
                    (self.lo[b], 1.0)
                } else {
                    (self.hi[b], -1.0)
                };
                let row = &self.tab[r * nc..(r + 1) * nc];
                let mut theta = f64::INFINITY;
                let mut cands: Vec<(usize, f64, f64)> = Vec::new();
                for (k, &t) in row.iter().enumerate() {
                    if t.abs() <= PIV_TOL {
                        continue;
                    }
                    let v = self.nonbasic[k];
                    let d = self.dj[k];
                    let ratio = if up_needed * t > 0.0 && self.val[v] < self.hi[v] {
                        d.max(0.0) / t.abs()
                    } else if up_needed * t < 0.0 && self.val[v] > self.lo[v] {
                        (-d).max(0.0) / t.abs()
                    } else {
                        continue;
                    };
                    theta = theta.min(ratio + otol / t.abs());
                    cands.push((k, ratio, t.abs()));
                }
                let pick = cands
                    .iter()
                    .filter(|c| c.1 <= theta)
                    .max_by(|a, b| a.2.total_cmp(&b.2))
                    .map(|c| c.0);
                let Some(k) = pick else {
                    self.status = Some(LpStatus::Infeasible);
                    return LpStatus::Infeasible;
                };
                let delta = (target - self.val[b]) / self.tab[r * nc + k];
                self.apply(k, delta, Some((r, target)));
            }
        }
        self.solve()
    }

    /// Rebuilds the tableau for the current basis from the original rows to
    /// shed accumulated rounding error.
    fn reinvert(&mut self) {
        let nc = self.ncols;
        let target: Vec<usize> = self.basis.iter().copied().filter(|&v| v < nc).collect();
        self.tab.iter_mut().for_each(|x| *x = 0.0);
        for (i, (v, row)) in self.trows.iter().enumerate() {
            for &(j, a) in row {
                self.tab[i * nc + j] = a;
            }
            self.basis[i] = *v;
            self.pos[*v] = Pos::Basic(i);
        }
        for j in 0..nc {
            self.nonbasic[j] = j;
            self.pos[j] = Pos::Nonbasic(j);
        }
        self.dj_valid = false;
        for v in target {
            let Pos::Nonbasic(j) = self.pos[v] else {
                continue;
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.nrows {
                if self.basis[i] < nc {
                    continue;
                }
                let t = self.tab[i * nc + j].abs();
                if t > 1e-11 && best.map_or(true, |(_, bt)| t > bt) {
                    best = Some((i, t));
                }
            }
            if let Some((r, _)) = best {
                self.pivot(r, j);
            }
        }
        // nonbasic structurals keep their values, nonbasic row variables sit on a bound
        for k in 0..nc {
            let v = self.nonbasic[k];
            if v >= nc && !(self.val[v] >= self.lo[v] && self.val[v] <= self.hi[v]) {
                self.val[v] = if self.val[v] < self.lo[v] {
                    self.lo[v]
                } else {
                    self.hi[v]
                };
            }
        }
        self.refresh();
    }

    pub fn solution(&self) -> LpSolution {
        let x = self.val[..self.ncols].to_vec();
        let objective = self.cost[..self.ncols]
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .sum();
        LpSolution {
            status: self.status.unwrap_or(LpStatus::IterLimit),
            objective,
            x,
            iterations: self.iterations,
            max_violation: self.current_violation(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn trivial_examples() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.add_row(vec![(0, 1.0)], Relation::Ge, 3.0);
        let s = solve_lp(&lp, &SolverConfig::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 3.0).abs() < 1e-12 && (s.objective - 3.0).abs() < 1e-12);

        let mut lp = LinearProgram::new(vec![-1.0]);
        lp.add_row(vec![(0, 1.0)], Relation::Ge, 0.0);
        assert_eq!(
            solve_lp(&lp, &SolverConfig::default()).status,
            LpStatus::Unbounded
        );

        let mut lp = LinearProgram::new(vec![0.0]);
        lp.add_row(vec![(0, 1.0)], Relation::Ge, 1.0);
        lp.add_row(vec![(0, 1.0)], Relation::Le, 0.0);
        assert_eq!(
            solve_lp(&lp, &SolverConfig::default()).status,
            LpStatus::Infeasible
        );
    }

    #[test]
    fn small_textbook_lp() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18, x,y ≥ 0 → 36 at (2,6)
        let mut lp = LinearProgram::new(vec![-3.0, -5.0]);
        lp.lower = vec![0.0, 0.0];
        lp.add_row(vec![(0, 1.0), (1, 0.0)], Relation::Le, 4.0);
        lp.add_row(vec![(1, 2.0), (0, 0.0)], Relation::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], Relation::Le, 18.0);
        let s = solve_lp(&lp, &SolverConfig::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_rows_and_free_variables() {
        // min x + y s.t. x − y = 1, x + y ≥ 3 → 3
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Relation::Eq, 1.0);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 3.0);
        let s = solve_lp(&lp, &SolverConfig::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-9);
        assert!((s.x[0] - s.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn warm_started_cuts_match_cold_solve() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.lower = vec![0.0, 0.0];
        lp.add_row(vec![(0, 1.0), (1, 2.0)], Relation::Ge, 2.0);
        let mut s = Simplex::new(&lp, SolverConfig::default());
        assert_eq!(s.solve(), LpStatus::Optimal);
        assert!((s.solution().objective - 1.0).abs() < 1e-9);
        s.add_row(vec![(0, 2.0), (1, 1.0)], Relation::Ge, 2.0);
        assert_eq!(s.reoptimize(), LpStatus::Optimal);
        assert!((s.solution().objective - 4.0 / 3.0).abs() < 1e-9);
        s.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Le, 1.0);
        assert_eq!(s.reoptimize(), LpStatus::Infeasible);
    }
}
