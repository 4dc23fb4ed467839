//! Exact and heuristic searches for extremal point sets.
//!
//! - [`find_min_percolating`]: iterative deepening on the size of a
//!   percolating set, with a cover-based prune.
//! - [`find_max_nonpercolating`]: Close-by-One enumeration of closed sets.
//!   A largest non-percolating set is closed, so only closed sets are visited.
//! - [`find_max_time`]: exhaustive, random or hill-climbing search for slow
//!   percolating sets.
//! - [`enumerate_minimal_percolating`]: all inclusion-minimal percolating sets.
//!
//! Percolation time never increases when points are added to a percolating
//! set: if A ⊆ B then the round-s infected set of A is contained in that of
//! B. Every percolating set therefore contains a minimal one that is at least
//! as slow, which the time searches exploit.
//!
//! Parallel runs split the search tree into disjoint prefixes and merge the
//! results in prefix order, so they report the same outcome as a serial run
//! whenever the budget is not hit.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::PointSet;
use crate::constructions::{broom_seed, r_broom};
use crate::error::{Error, Result};
use crate::percolation::{covered_by_k_lines, percolates, percolation_time, Percolator};
use crate::plane::IncidencePlane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    #[serde(rename = "min_perc")]
    MinPercolating,
    #[serde(rename = "max_nonperc")]
    MaxNonPercolating,
    #[serde(rename = "max_time")]
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Random,
    Hillclimb,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Strategy::Exact),
            "random" => Ok(Strategy::Random),
            "hillclimb" => Ok(Strategy::Hillclimb),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Limits on a search. Nodes are counted exactly; the clock is read every
/// 2^16 nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Fix the first chosen point to index 0 on coordinatized PG(2,q), which
    /// is point-transitive.
    pub symmetry: bool,
    pub threads: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: None,
            max_time: None,
            symmetry: true,
            threads: 1,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            ..Budget::default()
        }
    }

    pub fn with_time(mut self, limit: Duration) -> Self {
        self.max_time = Some(limit);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn without_symmetry(mut self) -> Self {
        self.symmetry = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_nodes == Some(0) || self.max_time == Some(Duration::ZERO) || self.threads == 0 {
            return Err(Error::BadRange(
                "budget limits and thread count must be positive".into(),
            ));
        }
        Ok(())
    }

    fn is_bounded(&self) -> bool {
        self.max_nodes.is_some() || self.max_time.is_some()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub target: Target,
    pub q: usize,
    pub r: usize,
    pub value: usize,
    pub exact: bool,
    pub witness: Vec<usize>,
    pub nodes: u64,
    pub seconds: f64,
    pub strategy: Strategy,
    pub seed: Option<u64>,
    /// The search stopped on its budget; `value` is the best found so far.
    #[serde(skip)]
    pub budget_exhausted: bool,
}

/// Shared node and time accounting.
struct Meter {
    used: AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
}

impl Meter {
    fn new(budget: &Budget) -> Self {
        Meter {
            used: AtomicU64::new(0),
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|d| Instant::now() + d),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Accounts one node; false once the budget is spent.
    fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if self.max_nodes.is_some_and(|m| n > m)
            || (n & 0xFFFF == 0 && self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn is_exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }
}

/// Result of one prefix task.
struct Task<T> {
    value: T,
    nodes: u64,
    /// Later prefixes need not run.
    stop: bool,
}

/// Runs `tasks` prefix tasks, serially or on a rayon pool, and returns the
/// results up to and including the first one asking to stop.
fn drive<T, F>(threads: usize, tasks: usize, run: F) -> Vec<Task<T>>
where
    T: Send,
    F: Fn(usize) -> Task<T> + Sync,
{
    if threads <= 1 {
        let mut out = Vec::new();
        for i in 0..tasks {
            let t = run(i);
            let stop = t.stop;
            out.push(t);
            if stop {
                break;
            }
        }
        return out;
    }
    let first_stop = AtomicUsize::new(usize::MAX);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let results: Vec<Option<Task<T>>> = pool.install(|| {
        (0..tasks)
            .into_par_iter()
            .map(|i| {
                if i > first_stop.load(Ordering::Relaxed) {
                    return None;
                }
                let t = run(i);
                if t.stop {
                    first_stop.fetch_min(i, Ordering::Relaxed);
                }
                Some(t)
            })
            .collect()
    });
    let mut out = Vec::new();
    for t in results {
        let t = t.expect("tasks before the first stop always run");
        let stop = t.stop;
        out.push(t);
        if stop {
            break;
        }
    }
    out
}

fn uses_symmetry(plane: &IncidencePlane, budget: &Budget) -> bool {
    budget.symmetry && plane.coordinates().is_some()
}

fn check_r(plane: &IncidencePlane, r: usize) -> Result<()> {
    if r == 0 || r > plane.order() + 1 {
        return Err(Error::BadRange(format!(
            "r = {r} outside 1..={}",
            plane.order() + 1
        )));
    }
    Ok(())
}

fn verified(outcome: SearchOutcome, ok: bool) -> Result<SearchOutcome> {
    if ok {
        Ok(outcome)
    } else {
        Err(Error::VerificationFailed {
            name: format!("{:?} search", outcome.target),
            check: "witness re-verification".into(),
        })
    }
}

/// Smallest percolating set, by iterative deepening from C(r+1,2).
///
/// A partial set D with k more points to add is skipped when D lies on
/// r − 1 − k lines: every completion then lies on r − 1 lines and cannot
/// percolate.
pub fn find_min_percolating(
    plane: &IncidencePlane,
    r: usize,
    budget: &Budget,
) -> Result<SearchOutcome> {
    check_r(plane, r)?;
    budget.validate()?;
    let start = Instant::now();
    let meter = Meter::new(budget);
    let n = plane.size();
    let q = plane.order();
    let incumbent = if r <= q {
        broom_seed(plane, 0, r)?
    } else {
        plane.all_points()
    };
    let symmetric = uses_symmetry(plane, budget);
    let mut nodes = 0;
    let mut best = incumbent.clone();
    let mut exact = true;

    for size in r * (r + 1) / 2..incumbent.len() {
        // with symmetry the first point is 0 and tasks split on the second
        let (fixed, tasks) = match (symmetric, size) {
            (true, s) if s >= 2 => (vec![0], n - 1),
            (true, _) => (vec![0], 1),
            (false, _) => (vec![], n),
        };
        let results = drive(budget.threads, tasks, |i| {
            let mut chosen = fixed.clone();
            let mut set = plane.point_set(fixed.iter().copied());
            if size >= 1 && chosen.len() < size {
                let x = if fixed.is_empty() { i } else { i + 1 };
                chosen.push(x);
                set.insert(x);
            }
            let mut search = MinSearch {
                plane,
                r,
                size,
                perc: Percolator::new(plane, r),
                meter: &meter,
                nodes: 0,
            };
            let found = search.dfs(&mut chosen, &mut set);
            Task {
                stop: found.is_some(),
                value: found,
                nodes: search.nodes,
            }
        });
        nodes += results.iter().map(|t| t.nodes).sum::<u64>();
        if let Some(found) = results.into_iter().find_map(|t| t.value) {
            best = found;
            break;
        }
        if meter.is_exhausted() {
            exact = false;
            break;
        }
    }
    let ok = percolates(plane, &best, r);
    verified(
        SearchOutcome {
            target: Target::MinPercolating,
            q,
            r,
            value: best.len(),
            exact,
            witness: best.to_vec(),
            nodes,
            seconds: start.elapsed().as_secs_f64(),
            strategy: Strategy::Exact,
            seed: None,
            budget_exhausted: !exact,
        },
        ok,
    )
}

struct MinSearch<'a> {
    plane: &'a IncidencePlane,
    r: usize,
    size: usize,
    perc: Percolator<'a>,
    meter: &'a Meter,
    nodes: u64,
}

impl MinSearch<'_> {
    fn dfs(&mut self, chosen: &mut Vec<usize>, set: &mut PointSet) -> Option<PointSet> {
        self.nodes += 1;
        if !self.meter.tick() {
            return None;
        }
        let remaining = self.size - chosen.len();
        if remaining == 0 {
            return self.perc.percolates(set).then(|| set.clone());
        }
        if !chosen.is_empty() && remaining < self.r {
            let k = self.r - 1 - remaining;
            if covered_by_k_lines(self.plane, set, k) {
                return None;
            }
        }
        let start = chosen.last().map_or(0, |&x| x + 1);
        let n = self.plane.size();
        for x in start..=n - remaining {
            chosen.push(x);
            set.insert(x);
            let found = self.dfs(chosen, set);
            set.remove(x);
            chosen.pop();
            if found.is_some() {
                return found;
            }
            if self.meter.is_exhausted() {
                return None;
            }
        }
        None
    }
}

/// Largest non-percolating set, by Close-by-One over closed sets.
///
/// A child of the closed set C is cl(C ∪ {x}) for x above the generator of
/// C; it is kept only when it adds no point below x, so every closed set is
/// reached once. Children equal to the whole plane are dropped, and a branch
/// is cut when even all points above x could not beat the incumbent.
pub fn find_max_nonpercolating(
    plane: &IncidencePlane,
    r: usize,
    budget: &Budget,
) -> Result<SearchOutcome> {
    check_r(plane, r)?;
    budget.validate()?;
    let start = Instant::now();
    let meter = Meter::new(budget);
    let q = plane.order();
    let n = plane.size();

    let finish = |best: PointSet, nodes: u64, exact: bool| {
        let ok = !percolates(plane, &best, r);
        verified(
            SearchOutcome {
                target: Target::MaxNonPercolating,
                q,
                r,
                value: best.len(),
                exact,
                witness: best.to_vec(),
                nodes,
                seconds: start.elapsed().as_secs_f64(),
                strategy: Strategy::Exact,
                seed: None,
                budget_exhausted: !exact,
            },
            ok,
        )
    };
    if r == 1 {
        // a single point infects every line through it
        return finish(plane.empty_points(), 0, true);
    }
    let incumbent = r_broom(plane, 0, r - 1)?;
    let cap = (q + 1) * (r - 1);
    let results = drive(budget.threads, n, |x| {
        let mut search = ClosedSearch {
            plane,
            perc: Percolator::new(plane, r),
            meter: &meter,
            nodes: 0,
            best: incumbent.clone(),
            improved: false,
            cap,
        };
        let empty = plane.empty_points();
        search.child(&empty, x);
        Task {
            stop: search.best.len() >= cap,
            value: search.improved.then_some(search.best),
            nodes: search.nodes,
        }
    });
    let nodes = results.iter().map(|t| t.nodes).sum();
    let reached_cap = results.last().is_some_and(|t| t.stop);
    let mut best = incumbent;
    for t in results {
        if let Some(set) = t.value {
            if set.len() > best.len() {
                best = set;
            }
        }
    }
    let exact = reached_cap || !meter.is_exhausted();
    finish(best, nodes, exact)
}

struct ClosedSearch<'a> {
    plane: &'a IncidencePlane,
    perc: Percolator<'a>,
    meter: &'a Meter,
    nodes: u64,
    best: PointSet,
    improved: bool,
    cap: usize,
}

impl ClosedSearch<'_> {
    /// Visits cl(parent ∪ {x}) if it is a canonical child of `parent`.
    fn child(&mut self, parent: &PointSet, x: usize) {
        if self.best.len() >= self.cap || parent.contains(x) {
            return;
        }
        self.nodes += 1;
        if !self.meter.tick() {
            return;
        }
        let mut gen = parent.clone();
        gen.insert(x);
        let closed = self.perc.closure_of(&gen).clone();
        if closed.is_full() {
            return;
        }
        // canonical: no new point below x
        let below_new = closed
            .iter()
            .take_while(|&y| y < x)
            .any(|y| !parent.contains(y));
        if below_new {
            return;
        }
        if closed.len() > self.best.len() {
            self.best = closed.clone();
            self.improved = true;
        }
        let n = self.plane.size();
        let above_free = (x + 1..n).filter(|&y| !closed.contains(y)).count();
        if closed.len() + above_free <= self.best.len() {
            return;
        }
        for y in x + 1..n {
            if !closed.contains(y) {
                self.child(&closed, y);
                if self.meter.is_exhausted() || self.best.len() >= self.cap {
                    return;
                }
            }
        }
    }
}

/// Result of [`enumerate_minimal_percolating`].
#[derive(Debug, Clone)]
pub struct MinimalSets {
    pub sets: Vec<PointSet>,
    /// False when the budget cut the enumeration short.
    pub complete: bool,
    pub nodes: u64,
}

/// All inclusion-minimal percolating sets of at most `max_size` points, in
/// ascending lexicographic order of their sorted indices.
///
/// A partial set is extended only while it stays independent (no point lies
/// in the closure of the others) and while adding every later point would
/// still percolate. An independent percolating set is minimal.
pub fn enumerate_minimal_percolating(
    plane: &IncidencePlane,
    r: usize,
    max_size: Option<usize>,
    budget: &Budget,
) -> Result<MinimalSets> {
    let mut sets = Vec::new();
    let (complete, nodes) = for_each_minimal(plane, r, max_size, budget, false, |set| {
        sets.push(set.clone())
    })?;
    Ok(MinimalSets {
        sets,
        complete,
        nodes,
    })
}

/// Streams minimal percolating sets to `visit`. With `symmetric`, only sets
/// containing point 0 are produced (one representative class per orbit of
/// the smallest point on point-transitive planes).
fn for_each_minimal<F>(
    plane: &IncidencePlane,
    r: usize,
    max_size: Option<usize>,
    budget: &Budget,
    symmetric: bool,
    mut visit: F,
) -> Result<(bool, u64)>
where
    F: FnMut(&PointSet),
{
    check_r(plane, r)?;
    budget.validate()?;
    let meter = Meter::new(budget);
    let n = plane.size();
    let cap = max_size.unwrap_or(n).min(n);
    let tasks = if symmetric { 1 } else { n };
    let results = drive(budget.threads, tasks, |first| {
        let mut walk = MinimalWalk {
            plane,
            perc: Percolator::new(plane, r),
            meter: &meter,
            nodes: 0,
            cap,
            found: Vec::new(),
        };
        let mut set = plane.point_set([first]);
        let mut chosen = vec![first];
        if cap >= 1 {
            walk.visit(&mut chosen, &mut set);
        }
        Task {
            value: walk.found,
            nodes: walk.nodes,
            stop: false,
        }
    });
    let mut nodes = 0;
    for t in results {
        nodes += t.nodes;
        for s in &t.value {
            visit(s);
        }
    }
    Ok((!meter.is_exhausted(), nodes))
}

struct MinimalWalk<'a> {
    plane: &'a IncidencePlane,
    perc: Percolator<'a>,
    meter: &'a Meter,
    nodes: u64,
    cap: usize,
    found: Vec<PointSet>,
}

impl MinimalWalk<'_> {
    /// `set` is independent and does not percolate unless it is a leaf.
    fn visit(&mut self, chosen: &mut Vec<usize>, set: &mut PointSet) {
        self.nodes += 1;
        if !self.meter.tick() {
            return;
        }
        let closure = self.perc.closure_of(set).clone();
        if closure.is_full() {
            self.found.push(set.clone());
            return;
        }
        if chosen.len() >= self.cap {
            return;
        }
        let n = self.plane.size();
        let last = *chosen.last().expect("nonempty");
        let mut widest = set.clone();
        for y in last + 1..n {
            widest.insert(y);
        }
        if !self.perc.percolates(&widest) {
            return;
        }
        for x in last + 1..n {
            if closure.contains(x) {
                continue;
            }
            chosen.push(x);
            set.insert(x);
            if self.independent(set, x) {
                self.visit(chosen, set);
            }
            set.remove(x);
            chosen.pop();
            if self.meter.is_exhausted() {
                return;
            }
        }
    }

    /// No old point of `set` lies in the closure of the others once `x` joins.
    fn independent(&mut self, set: &PointSet, x: usize) -> bool {
        let mut probe = set.clone();
        for d in set.iter().filter(|&d| d != x) {
            probe.remove(d);
            let inside = self.perc.closure_of(&probe).contains(d);
            probe.insert(d);
            if inside {
                return false;
            }
        }
        true
    }
}

/// Largest percolation time found by the given strategy.
///
/// `Exact` enumerates every subset when the plane has at most 13 points and
/// every minimal percolating set otherwise; it is exact only if it finishes.
/// `Random` samples uniform subsets with sizes between C(r+1,2) and twice
/// that, shrinking each percolating sample to a minimal one. `Hillclimb`
/// swaps single points of a minimal percolating set, accepts moves that do
/// not lower the time and restarts after a run of moves without progress.
/// The heuristics count closures as nodes and need a bounded budget.
pub fn find_max_time(
    plane: &IncidencePlane,
    r: usize,
    strategy: Strategy,
    budget: &Budget,
    seed: u64,
) -> Result<SearchOutcome> {
    check_r(plane, r)?;
    budget.validate()?;
    let start = Instant::now();
    let q = plane.order();
    let n = plane.size();
    // the r-broom percolates in one round (for r = q+1 only the full set percolates)
    let mut best = if r <= q {
        r_broom(plane, 0, r)?
    } else {
        plane.all_points()
    };
    let mut best_time = percolation_time(plane, &best, r).expect("broom percolates");
    let (nodes, exact, exhausted, seed_used) = match strategy {
        Strategy::Exact if n <= 13 => {
            let meter = Meter::new(budget);
            let mut perc = Percolator::new(plane, r);
            let mut nodes = 0;
            for mask in 0u64..1 << n {
                if !meter.tick() {
                    break;
                }
                nodes += 1;
                let set = plane.point_set((0..n).filter(|i| mask >> i & 1 == 1));
                if let Some(t) = perc.evaluate(&set).time() {
                    if t > best_time {
                        best_time = t;
                        best = set;
                    }
                }
            }
            let done = !meter.is_exhausted();
            (nodes, done, !done, None)
        }
        Strategy::Exact => {
            let symmetric = uses_symmetry(plane, budget);
            let mut perc = Percolator::new(plane, r);
            let (complete, nodes) = for_each_minimal(plane, r, None, budget, symmetric, |set| {
                if let Some(t) = perc.evaluate(set).time() {
                    if t > best_time {
                        best_time = t;
                        best = set.clone();
                    }
                }
            })?;
            (nodes, complete, !complete, None)
        }
        Strategy::Random | Strategy::Hillclimb => {
            if !budget.is_bounded() {
                return Err(Error::BadRange(
                    "heuristic search needs a node or time limit".into(),
                ));
            }
            let meter = Meter::new(budget);
            let mut climber = Climber {
                plane,
                perc: Percolator::new(plane, r),
                meter: &meter,
                rng: ChaCha8Rng::seed_from_u64(seed),
                nodes: 0,
                best: best.clone(),
                best_time,
            };
            let lo = (r * (r + 1) / 2).min(n);
            let hi = (2 * lo).min(n);
            if strategy == Strategy::Random {
                climber.random(lo, hi);
            } else {
                climber.hillclimb(lo, hi);
            }
            best = climber.best;
            best_time = climber.best_time;
            (climber.nodes, false, true, Some(seed))
        }
    };
    let ok = percolation_time(plane, &best, r) == Some(best_time);
    verified(
        SearchOutcome {
            target: Target::MaxTime,
            q,
            r,
            value: best_time,
            exact,
            witness: best.to_vec(),
            nodes,
            seconds: start.elapsed().as_secs_f64(),
            strategy,
            seed: seed_used,
            budget_exhausted: exhausted,
        },
        ok,
    )
}

/// Moves without improving the current set before a restart.
const PATIENCE: usize = 400;

struct Climber<'a> {
    plane: &'a IncidencePlane,
    perc: Percolator<'a>,
    meter: &'a Meter,
    rng: ChaCha8Rng,
    nodes: u64,
    best: PointSet,
    best_time: usize,
}

impl Climber<'_> {
    /// Percolation time of `set`, charging one node; None when out of budget
    /// or when the set does not percolate.
    fn time(&mut self, set: &PointSet) -> Option<Option<usize>> {
        if !self.meter.tick() {
            return None;
        }
        self.nodes += 1;
        Some(self.perc.evaluate(set).time())
    }

    fn sample(&mut self, lo: usize, hi: usize) -> PointSet {
        let n = self.plane.size();
        let size = self.rng.gen_range(lo..=hi);
        let picks = rand::seq::index::sample(&mut self.rng, n, size);
        self.plane.point_set(picks.iter())
    }

    /// Drops points in random order while the set keeps percolating. Time
    /// can only grow along the way. Returns None when out of budget.
    fn shrink(&mut self, mut set: PointSet, mut time: usize) -> Option<(PointSet, usize)> {
        let mut order = set.to_vec();
        order.shuffle(&mut self.rng);
        for x in order {
            set.remove(x);
            match self.time(&set)? {
                Some(t) => time = t,
                None => {
                    set.insert(x);
                }
            }
        }
        Some((set, time))
    }

    fn record(&mut self, set: &PointSet, time: usize) {
        if time > self.best_time {
            self.best_time = time;
            self.best = set.clone();
        }
    }

    /// A random minimal percolating set, or None when out of budget.
    fn fresh(&mut self, lo: usize, hi: usize) -> Option<(PointSet, usize)> {
        loop {
            let set = self.sample(lo, hi);
            if let Some(t) = self.time(&set)? {
                let (set, t) = self.shrink(set, t)?;
                self.record(&set, t);
                return Some((set, t));
            }
        }
    }

    fn random(&mut self, lo: usize, hi: usize) {
        while self.fresh(lo, hi).is_some() {}
    }

    fn hillclimb(&mut self, lo: usize, hi: usize) {
        let n = self.plane.size();
        'restart: while let Some((mut current, mut time)) = self.fresh(lo, hi) {
            let mut stale = 0;
            while stale < PATIENCE {
                let members = current.to_vec();
                let out = members[self.rng.gen_range(0..members.len())];
                let into = loop {
                    let y = self.rng.gen_range(0..n);
                    if !current.contains(y) {
                        break y;
                    }
                };
                let mut next = current.clone();
                next.remove(out);
                next.insert(into);
                let Some(t) = self.time(&next) else { return };
                let Some(t) = t else {
                    stale += 1;
                    continue;
                };
                let Some((next, t)) = self.shrink(next, t) else {
                    return;
                };
                if t > time {
                    stale = 0;
                } else {
                    stale += 1;
                }
                if t >= time {
                    current = next;
                    time = t;
                    self.record(&current, time);
                }
            }
            continue 'restart;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::is_minimal_percolating;

    fn pg(q: u64) -> IncidencePlane {
        IncidencePlane::pg2_of_order(q).unwrap()
    }

    /// Brute force over all subsets: (min percolating size, max non-percolating size, max time).
    fn brute(plane: &IncidencePlane, r: usize) -> (usize, usize, usize) {
        let n = plane.size();
        let (mut min_p, mut max_np, mut max_t) = (usize::MAX, 0, 0);
        for mask in 0u64..1 << n {
            let set = plane.point_set((0..n).filter(|i| mask >> i & 1 == 1));
            match percolation_time(plane, &set, r) {
                Some(t) => {
                    min_p = min_p.min(set.len());
                    max_t = max_t.max(t);
                }
                None => max_np = max_np.max(set.len()),
            }
        }
        (min_p, max_np, max_t)
    }

    #[test]
    fn brute_force_agreement() {
        for q in [2u64, 3] {
            let p = pg(q);
            for r in 1..=q as usize + 1 {
                let (min_p, max_np, max_t) = brute(&p, r);
                let b = Budget::default();
                let m = find_min_percolating(&p, r, &b).unwrap();
                assert_eq!((m.value, m.exact), (min_p, true), "m q={q} r={r}");
                let mm = find_max_nonpercolating(&p, r, &b).unwrap();
                assert_eq!((mm.value, mm.exact), (max_np, true), "M q={q} r={r}");
                let t = find_max_time(&p, r, Strategy::Exact, &b, 0).unwrap();
                assert_eq!((t.value, t.exact), (max_t, true), "T q={q} r={r}");
            }
        }
    }

    #[test]
    fn minimal_enumeration_matches_time_search() {
        let p = pg(3);
        for r in 2..=4 {
            let all = enumerate_minimal_percolating(&p, r, None, &Budget::default()).unwrap();
            assert!(all.complete);
            let slowest = all
                .sets
                .iter()
                .filter_map(|s| percolation_time(&p, s, r))
                .max()
                .unwrap();
            let (_, _, max_t) = brute(&p, r);
            assert_eq!(slowest, max_t);
        }
    }

    #[test]
    fn minimal_sets_at_r2_are_triangles() {
        let p = pg(3);
        let all = enumerate_minimal_percolating(&p, 2, None, &Budget::default()).unwrap();
        // 13·12·9/6 non-collinear triples
        assert_eq!(all.sets.len(), 13 * 12 * 9 / 6);
        for s in &all.sets {
            assert_eq!(s.len(), 3);
            let v = s.to_vec();
            let l = p.line_through(v[0], v[1]).unwrap();
            assert!(!p.is_incident(v[2], l));
        }
    }

    #[test]
    fn enumeration_emits_only_minimal_sets() {
        let p = pg(3);
        let all = enumerate_minimal_percolating(&p, 3, None, &Budget::default()).unwrap();
        assert!(!all.sets.is_empty());
        for s in &all.sets {
            assert!(is_minimal_percolating(&p, s, 3));
            assert!(s.len() >= 6);
        }
    }

    #[test]
    fn min_percolating_q5() {
        let o = find_min_percolating(&pg(5), 3, &Budget::default()).unwrap();
        assert_eq!((o.value, o.exact), (6, true));
        let o = find_min_percolating(&pg(3), 2, &Budget::default()).unwrap();
        assert_eq!(o.value, 3);
    }

    #[test]
    fn max_nonpercolating_q4() {
        let o = find_max_nonpercolating(&pg(4), 4, &Budget::default()).unwrap();
        assert_eq!((o.value, o.exact), (15, true));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let o = find_min_percolating(&pg(5), 4, &Budget::nodes(50)).unwrap();
        assert!(!o.exact);
        assert!(o.budget_exhausted);
        assert_eq!(o.value, 13);
        assert!(find_min_percolating(&pg(5), 4, &Budget::nodes(0)).is_err());
    }

    #[test]
    fn parallel_matches_serial() {
        let p = pg(4);
        let serial = find_min_percolating(&p, 3, &Budget::default()).unwrap();
        let parallel = find_min_percolating(&p, 3, &Budget::default().with_threads(4)).unwrap();
        assert_eq!(serial.witness, parallel.witness);
        assert_eq!(serial.nodes, parallel.nodes);
        let serial = find_max_nonpercolating(&p, 3, &Budget::default()).unwrap();
        let parallel = find_max_nonpercolating(&p, 3, &Budget::default().with_threads(3)).unwrap();
        assert_eq!(serial.witness, parallel.witness);
        assert_eq!(serial.nodes, parallel.nodes);
    }

    #[test]
    fn heuristics_are_deterministic() {
        let p = pg(5);
        for s in [Strategy::Random, Strategy::Hillclimb] {
            let a = find_max_time(&p, 4, s, &Budget::nodes(5000), 7).unwrap();
            let b = find_max_time(&p, 4, s, &Budget::nodes(5000), 7).unwrap();
            assert_eq!(a.witness, b.witness);
            assert_eq!(a.value, b.value);
            assert!(!a.exact);
        }
        assert!(find_max_time(&p, 4, Strategy::Random, &Budget::default(), 1).is_err());
    }

    #[test]
    fn json_shape() {
        let o = find_min_percolating(&pg(2), 2, &Budget::default()).unwrap();
        let v = serde_json::to_value(&o).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            vec![
                "exact", "nodes", "q", "r", "seconds", "seed", "strategy", "target", "value",
                "witness"
            ]
        );
        assert_eq!(v["target"], "min_perc");
    }
}
