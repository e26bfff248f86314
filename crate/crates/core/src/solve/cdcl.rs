//! A deterministic conflict-driven clause-learning SAT solver.
//!
//! Two watched literals per clause (with blocker literals), VSIDS branching
//! with phase saving, first-UIP learning with recursive minimization,
//! LBD-guided learnt clause deletion and either glucose-style or Luby
//! restarts. No randomness anywhere, so identical inputs give identical
//! search traces. Clauses may be added between calls to [`Solver::solve`].

use std::time::Instant;

type Lit = u32;
type Var = u32;
type CRef = u32;

const NO_REASON: CRef = u32::MAX;
const HEADER: usize = 3;
const FLAG_LEARNT: u32 = 1;
const FLAG_DELETED: u32 = 2;

#[inline]
fn var(l: Lit) -> Var {
    l >> 1
}

#[inline]
fn from_dimacs(x: i32) -> Lit {
    let v = x.unsigned_abs() - 1;
    (v << 1) | (x < 0) as u32
}

#[inline]
fn to_dimacs(l: Lit) -> i32 {
    let v = (var(l) + 1) as i32;
    if l & 1 == 1 {
        -v
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    /// A resource limit was hit before a decision was reached.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartPolicy {
    /// Restart when recent learnt clause quality drops below the long-run average.
    Glucose,
    /// Luby sequence scaled by `unit` conflicts.
    Luby { unit: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub var_decay: f64,
    pub clause_decay: f64,
    pub restarts: RestartPolicy,
    /// Conflicts before the first learnt clause database reduction.
    pub first_reduce: u64,
    /// Added to the reduction interval after each reduction.
    pub reduce_increment: u64,
    /// Learnt clauses with at most this LBD are never deleted.
    pub keep_lbd: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            var_decay: 0.95,
            clause_decay: 0.999,
            restarts: RestartPolicy::Glucose,
            first_reduce: 2000,
            reduce_increment: 300,
            keep_lbd: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub reductions: u64,
    pub learnt_literals: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub max_conflicts: Option<u64>,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: CRef,
    blocker: Lit,
}

/// Binary max-heap of variables ordered by activity.
#[derive(Default, Clone)]
struct VarHeap {
    heap: Vec<Var>,
    index: Vec<i32>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.index.resize(n, -1);
    }

    fn contains(&self, v: Var) -> bool {
        self.index[v as usize] >= 0
    }

    // ties go to the smaller variable so the order is total
    #[inline]
    fn above(act: &[f64], a: Var, b: Var) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, act: &[f64], mut i: usize) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::above(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.index[self.heap[i] as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn sift_down(&mut self, act: &[f64], mut i: usize) {
        let v = self.heap[i];
        let len = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && Self::above(act, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            if !Self::above(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.index[self.heap[i] as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn insert(&mut self, act: &[f64], v: Var) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.index[v as usize] = i as i32;
        self.sift_up(act, i);
    }

    fn bumped(&mut self, act: &[f64], v: Var) {
        if self.contains(v) {
            let i = self.index[v as usize] as usize;
            self.sift_up(act, i);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.index[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.sift_down(act, 0);
        }
        Some(top)
    }
}

/// Exponential moving average with bias correction for the early samples.
#[derive(Clone, Copy)]
struct Ema {
    value: f64,
    alpha: f64,
    beta: f64,
    wait: u64,
    period: u64,
}

impl Ema {
    fn new(alpha: f64) -> Self {
        Ema {
            value: 0.0,
            alpha,
            beta: 1.0,
            wait: 1,
            period: 1,
        }
    }

    fn update(&mut self, x: f64) {
        self.value += self.beta * (x - self.value);
        if self.beta > self.alpha {
            self.wait -= 1;
            if self.wait == 0 {
                self.period *= 2;
                self.wait = self.period;
                self.beta = (self.beta * 0.5).max(self.alpha);
            }
        }
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

#[derive(Clone)]
pub struct Solver {
    config: Config,
    num_vars: usize,
    arena: Vec<u32>,
    wasted: usize,
    originals: Vec<CRef>,
    learnts: Vec<CRef>,
    watches: Vec<Vec<Watch>>,
    /// Per literal: 1 true, -1 false, 0 unassigned.
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<CRef>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    clause_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<u8>,
    level_stamp: Vec<u64>,
    stamp: u64,
    to_clear: Vec<Lit>,
    ok: bool,
    model: Vec<bool>,
    stats: Stats,
    next_reduce: u64,
    reduce_interval: u64,
    lbd_fast: Ema,
    lbd_slow: Ema,
    trail_avg: Ema,
    conflicts_since_restart: u64,
    luby_index: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new(Config::default())
    }
}

impl Solver {
    pub fn new(config: Config) -> Self {
        Solver {
            config,
            num_vars: 0,
            arena: Vec::new(),
            wasted: 0,
            originals: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            clause_inc: 1.0,
            heap: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            level_stamp: Vec::new(),
            stamp: 0,
            to_clear: Vec::new(),
            ok: true,
            model: Vec::new(),
            stats: Stats::default(),
            next_reduce: config.first_reduce,
            reduce_interval: config.first_reduce,
            lbd_fast: Ema::new(1.0 / 32.0),
            lbd_slow: Ema::new(1.0 / 100_000.0),
            trail_avg: Ema::new(1.0 / 5000.0),
            conflicts_since_restart: 0,
            luby_index: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// Ensures variables `1..=n` exist.
    pub fn reserve_vars(&mut self, n: usize) {
        if n <= self.num_vars {
            return;
        }
        let old = self.num_vars;
        self.num_vars = n;
        self.watches.resize_with(2 * n, Vec::new);
        self.values.resize(2 * n, 0);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.activity.resize(n, 0.0);
        self.phase.resize(n, false);
        self.seen.resize(n, 0);
        self.level_stamp.resize(n + 1, 0);
        self.heap.grow(n);
        for v in old..n {
            self.heap.insert(&self.activity, v as Var);
        }
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        self.values[l as usize]
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    #[inline]
    fn clause_len(&self, c: CRef) -> usize {
        self.arena[c as usize] as usize
    }

    #[inline]
    fn lits(&self, c: CRef) -> &[Lit] {
        let s = c as usize + HEADER;
        &self.arena[s..s + self.arena[c as usize] as usize]
    }

    #[inline]
    fn flags(&self, c: CRef) -> u32 {
        self.arena[c as usize + 1]
    }

    fn lbd(&self, c: CRef) -> u32 {
        self.flags(c) >> 2
    }

    fn clause_activity(&self, c: CRef) -> f32 {
        f32::from_bits(self.arena[c as usize + 2])
    }

    fn alloc(&mut self, lits: &[Lit], learnt: bool, lbd: u32) -> CRef {
        let c = self.arena.len() as CRef;
        self.arena.push(lits.len() as u32);
        self.arena.push((lbd << 2) | if learnt { FLAG_LEARNT } else { 0 });
        self.arena.push(0f32.to_bits());
        self.arena.extend_from_slice(lits);
        c
    }

    fn attach(&mut self, c: CRef) {
        let (a, b) = {
            let l = self.lits(c);
            (l[0], l[1])
        };
        self.watches[a as usize].push(Watch { cref: c, blocker: b });
        self.watches[b as usize].push(Watch { cref: c, blocker: a });
    }

    fn enqueue(&mut self, l: Lit, reason: CRef) {
        let v = var(l) as usize;
        debug_assert_eq!(self.values[l as usize], 0);
        self.values[l as usize] = 1;
        self.values[(l ^ 1) as usize] = -1;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause of DIMACS literals. Returns `false` once the clause set
    /// is known to be unsatisfiable.
    pub fn add_clause(&mut self, clause: &[i32]) -> bool {
        if !self.ok {
            return false;
        }
        self.backtrack(0);
        let max_var = clause.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0);
        self.reserve_vars(max_var);
        let mut lits: Vec<Lit> = clause.iter().map(|&x| from_dimacs(x)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return true;
        }
        if lits.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        lits.retain(|&l| self.value(l) == 0);
        // keep the caller's literal order among survivors
        let mut ordered = Vec::with_capacity(lits.len());
        for &x in clause {
            let l = from_dimacs(x);
            if lits.binary_search(&l).is_ok() && !ordered.contains(&l) {
                ordered.push(l);
            }
        }
        match ordered.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(ordered[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let c = self.alloc(&ordered, false, 0);
                self.originals.push(c);
                self.attach(c);
                true
            }
        }
    }

    /// Unit propagation; returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let n = ws.len();
            'watches: while i < n {
                let w = ws[i];
                i += 1;
                if self.values[w.blocker as usize] == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = w.cref as usize;
                let len = self.arena[c] as usize;
                let base = c + HEADER;
                if self.arena[base] == false_lit {
                    self.arena.swap(base, base + 1);
                }
                let first = self.arena[base];
                if first != w.blocker && self.values[first as usize] == 1 {
                    ws[j] = Watch {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                for k in 2..len {
                    let l = self.arena[base + k];
                    if self.values[l as usize] != -1 {
                        self.arena.swap(base + 1, base + k);
                        self.watches[l as usize].push(Watch {
                            cref: w.cref,
                            blocker: first,
                        });
                        continue 'watches;
                    }
                }
                ws[j] = Watch {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if self.values[first as usize] == -1 {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < n {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: Var) {
        let a = &mut self.activity[v as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for x in &mut self.activity {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(&self.activity, v);
    }

    fn bump_clause(&mut self, c: CRef) {
        let idx = c as usize + 2;
        let a = f32::from_bits(self.arena[idx]) + self.clause_inc as f32;
        self.arena[idx] = a.to_bits();
        if a > 1e20 {
            for &lc in &self.learnts {
                let i = lc as usize + 2;
                let scaled = f32::from_bits(self.arena[i]) * 1e-20;
                self.arena[i] = scaled.to_bits();
            }
            self.clause_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: Var) -> u32 {
        1 << (self.level[v as usize] & 31)
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let dl = self.decision_level();
        loop {
            if self.flags(confl) & FLAG_LEARNT != 0 {
                self.bump_clause(confl);
            }
            let start = if p.is_some() { 1 } else { 0 };
            let len = self.clause_len(confl);
            for k in start..len {
                let q = self.arena[confl as usize + HEADER + k];
                let v = var(q);
                if self.seen[v as usize] == 0 && self.level[v as usize] > 0 {
                    self.bump_var(v);
                    self.seen[v as usize] = 1;
                    if self.level[v as usize] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index]) as usize] != 0 {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[var(lit) as usize];
            self.seen[var(lit) as usize] = 0;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.unwrap() ^ 1;

        // recursive minimization
        self.to_clear.clear();
        self.to_clear.extend_from_slice(&learnt);
        let mut abstract_levels = 0u32;
        for &l in &learnt[1..] {
            abstract_levels |= self.abstract_level(var(l));
        }
        let mut kept = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            if self.reason[var(l) as usize] == NO_REASON || !self.lit_redundant(l, abstract_levels) {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for &l in &self.to_clear {
            self.seen[var(l) as usize] = 0;
        }
        self.to_clear.clear();

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i]) as usize] > self.level[var(learnt[max_i]) as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[var(learnt[1]) as usize]
        };
        (learnt, bt)
    }

    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32) -> bool {
        let mut stack = vec![p];
        let top = self.to_clear.len();
        while let Some(q) = stack.pop() {
            let c = self.reason[var(q) as usize];
            debug_assert_ne!(c, NO_REASON);
            let len = self.clause_len(c);
            for k in 1..len {
                let l = self.arena[c as usize + HEADER + k];
                let v = var(l) as usize;
                if self.seen[v] == 0 && self.level[v] > 0 {
                    if self.reason[v] != NO_REASON && self.abstract_level(v as Var) & abstract_levels != 0 {
                        self.seen[v] = 1;
                        stack.push(l);
                        self.to_clear.push(l);
                    } else {
                        for &x in &self.to_clear[top..] {
                            self.seen[var(x) as usize] = 0;
                        }
                        self.to_clear.truncate(top);
                        return false;
                    }
                }
            }
        }
        true
    }

    fn compute_lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut count = 0;
        for &l in lits {
            let lv = self.level[var(l) as usize] as usize;
            if self.level_stamp[lv] != self.stamp {
                self.level_stamp[lv] = self.stamp;
                count += 1;
            }
        }
        count
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = var(l);
            self.values[l as usize] = 0;
            self.values[(l ^ 1) as usize] = 0;
            self.reason[v as usize] = NO_REASON;
            self.phase[v as usize] = l & 1 == 0;
            self.heap.insert(&self.activity, v);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            let pos = (v << 1) as Lit;
            if self.values[pos as usize] == 0 {
                return Some(if self.phase[v as usize] { pos } else { pos | 1 });
            }
        }
        None
    }

    fn is_locked(&self, c: CRef) -> bool {
        let first = self.lits(c)[0];
        self.value(first) == 1 && self.reason[var(first) as usize] == c
    }

    /// Deletes about half of the learnt clauses, keeping low-LBD and locked ones.
    fn reduce_db(&mut self) {
        self.stats.reductions += 1;
        let mut order = std::mem::take(&mut self.learnts);
        order.sort_by(|&a, &b| {
            self.lbd(b)
                .cmp(&self.lbd(a))
                .then(self.clause_activity(a).total_cmp(&self.clause_activity(b)))
                .then(a.cmp(&b))
        });
        let target = order.len() / 2;
        let mut removed = 0;
        let mut kept = Vec::with_capacity(order.len());
        for c in order {
            if removed < target && self.lbd(c) > self.config.keep_lbd && !self.is_locked(c) {
                self.arena[c as usize + 1] |= FLAG_DELETED;
                self.wasted += HEADER + self.clause_len(c);
                removed += 1;
            } else {
                kept.push(c);
            }
        }
        kept.sort_unstable();
        self.learnts = kept;
        self.collect_garbage();
    }

    /// Compacts the arena and rebuilds watch lists from the first two
    /// literals of every live clause.
    fn collect_garbage(&mut self) {
        let mut fresh = Vec::with_capacity(self.arena.len() - self.wasted);
        let remap = |arena: &Vec<u32>, c: CRef, fresh: &mut Vec<u32>| -> CRef {
            let s = c as usize;
            let len = arena[s] as usize;
            let nc = fresh.len() as CRef;
            fresh.extend_from_slice(&arena[s..s + HEADER + len]);
            nc
        };
        let mut moved = std::collections::HashMap::new();
        for list in [&mut self.originals, &mut self.learnts] {
            for c in list.iter_mut() {
                let nc = remap(&self.arena, *c, &mut fresh);
                moved.insert(*c, nc);
                *c = nc;
            }
        }
        for &l in &self.trail {
            let v = var(l) as usize;
            let r = self.reason[v];
            if r != NO_REASON {
                self.reason[v] = *moved.get(&r).expect("reason clauses are never deleted");
            }
        }
        self.arena = fresh;
        self.wasted = 0;
        for w in &mut self.watches {
            w.clear();
        }
        let all: Vec<CRef> = self.originals.iter().chain(self.learnts.iter()).copied().collect();
        for c in all {
            self.attach(c);
        }
    }

    /// Removes clauses satisfied at decision level 0.
    fn simplify(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        // level-0 reasons are never consulted during analysis
        for &l in &self.trail {
            self.reason[var(l) as usize] = NO_REASON;
        }
        let satisfied = |s: &Solver, c: CRef| s.lits(c).iter().any(|&l| s.value(l) == 1);
        let mut dropped = false;
        for list_id in 0..2 {
            let list = if list_id == 0 {
                std::mem::take(&mut self.originals)
            } else {
                std::mem::take(&mut self.learnts)
            };
            let mut keep = Vec::with_capacity(list.len());
            for c in list {
                if satisfied(self, c) {
                    self.arena[c as usize + 1] |= FLAG_DELETED;
                    self.wasted += HEADER + self.clause_len(c);
                    dropped = true;
                } else {
                    keep.push(c);
                }
            }
            if list_id == 0 {
                self.originals = keep;
            } else {
                self.learnts = keep;
            }
        }
        if dropped {
            self.collect_garbage();
        }
    }

    fn should_restart(&mut self) -> bool {
        match self.config.restarts {
            RestartPolicy::Glucose => {
                self.conflicts_since_restart >= 50 && self.lbd_fast.value > 1.25 * self.lbd_slow.value
            }
            RestartPolicy::Luby { unit } => {
                let limit = (luby(2.0, self.luby_index) * unit as f64) as u64;
                if self.conflicts_since_restart >= limit {
                    self.luby_index += 1;
                    true
                } else {
                    false
                }
            }
        }
    }

    /// Runs the search. On `Sat`, [`model`](Self::model) holds a total assignment.
    pub fn solve(&mut self, limits: Limits) -> Status {
        self.model.clear();
        if !self.ok {
            return Status::Unsat;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.ok = false;
            return Status::Unsat;
        }
        self.simplify();
        let start_conflicts = self.stats.conflicts;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                self.conflicts_since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Status::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                let lbd = self.compute_lbd(&learnt);
                self.lbd_fast.update(lbd as f64);
                self.lbd_slow.update(lbd as f64);
                self.trail_avg.update(self.trail.len() as f64);
                self.stats.learnt_literals += learnt.len() as u64;
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let c = self.alloc(&learnt, true, lbd);
                    self.learnts.push(c);
                    self.attach(c);
                    self.bump_clause(c);
                    self.enqueue(learnt[0], c);
                }
                self.var_inc /= self.config.var_decay;
                self.clause_inc /= self.config.clause_decay;

                if self.stats.conflicts.is_multiple_of(256) {
                    if let Some(d) = limits.deadline {
                        if Instant::now() >= d {
                            self.backtrack(0);
                            return Status::Unknown;
                        }
                    }
                }
                if let Some(m) = limits.max_conflicts {
                    if self.stats.conflicts - start_conflicts >= m {
                        self.backtrack(0);
                        return Status::Unknown;
                    }
                }
            } else {
                if self.should_restart() {
                    self.stats.restarts += 1;
                    self.conflicts_since_restart = 0;
                    self.lbd_fast.value = self.lbd_slow.value;
                    self.backtrack(0);
                }
                if self.stats.conflicts >= self.next_reduce {
                    self.reduce_interval += self.config.reduce_increment;
                    self.next_reduce = self.stats.conflicts + self.reduce_interval;
                    self.reduce_db();
                }
                match self.pick_branch() {
                    None => {
                        self.model = (0..self.num_vars).map(|v| self.values[v << 1] == 1).collect();
                        self.backtrack(0);
                        return Status::Sat;
                    }
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }

    /// The last satisfying assignment, `model()[v - 1]` for variable `v`.
    pub fn model(&self) -> &[bool] {
        &self.model
    }

    /// The last model as DIMACS literals.
    pub fn model_dimacs(&self) -> Vec<i32> {
        self.model
            .iter()
            .enumerate()
            .map(|(i, &b)| to_dimacs(((i as u32) << 1) | (!b) as u32))
            .collect()
    }
}
