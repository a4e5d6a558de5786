//! Longest snake search.
//!
//! Both modes grow a path from `0^m` whose first step flips bit 0. A vertex
//! may be appended when it neighbours the head and no other path vertex,
//! which is tracked incrementally by counting, for each vertex, how many
//! path vertices are equal or adjacent to it.
//!
//! The exhaustive mode additionally only enters a fresh dimension through
//! the lowest unused one (coordinate permutations fix `0^m`), and prunes
//! with a flood-fill bound on how far the head could still travel.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypercube::SnakePath;
use crate::model::Bundle;

/// Largest dimension accepted by the exhaustive mode.
pub const EXHAUSTIVE_LIMIT: u32 = 7;

/// Largest dimension accepted at all.
pub const SEARCH_LIMIT: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Heuristic,
}

/// Work limits. Heuristic runs are reproducible for a given seed as long
/// as the time limit is not what stops them.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub restarts: u32,
    pub nodes_per_restart: u64,
    pub time_limit: Option<Duration>,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            restarts: 64,
            nodes_per_restart: 200_000,
            time_limit: Some(Duration::from_secs(120)),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub path: SnakePath,
    /// True when the exhaustive mode proved the length optimal.
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

pub fn snake_search(m: u32, mode: SearchMode, budget: &SearchBudget) -> Result<SearchOutcome> {
    if m < 2 {
        return Err(Error::Parameter(format!(
            "snake search needs m >= 2, got {m}"
        )));
    }
    if m > SEARCH_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "snake search beyond dimension {SEARCH_LIMIT}"
        )));
    }
    let started = Instant::now();
    let deadline = budget.time_limit.map(|t| started + t);
    let (labels, optimal, nodes) = match mode {
        SearchMode::Exhaustive => {
            if m > EXHAUSTIVE_LIMIT {
                return Err(Error::Parameter(format!(
                    "exhaustive snake search is limited to m <= {EXHAUSTIVE_LIMIT}"
                )));
            }
            let mut s = Exhaustive::new(m, deadline);
            s.run();
            if s.timed_out {
                return Err(Error::SearchFailure(format!(
                    "time limit reached before the exhaustive search for m = {m} finished"
                )));
            }
            (s.best, true, s.nodes)
        }
        SearchMode::Heuristic => {
            let (best, nodes) = heuristic(m, budget, deadline);
            (best, false, nodes)
        }
    };
    if labels.len() < 2 {
        return Err(Error::SearchFailure(
            "no path longer than one vertex".into(),
        ));
    }
    let path = SnakePath::new(m, labels.into_iter().map(Bundle).collect())?;
    Ok(SearchOutcome {
        path,
        optimal,
        nodes,
        elapsed: started.elapsed(),
    })
}

/// Shared incremental path state.
struct Grid {
    m: u32,
    touch: Vec<u8>,
    path: Vec<u64>,
}

impl Grid {
    fn new(m: u32) -> Grid {
        let mut g = Grid {
            m,
            touch: vec![0; 1usize << m],
            path: Vec::new(),
        };
        g.push(0);
        g.push(1);
        g
    }

    fn push(&mut self, v: u64) {
        self.touch[v as usize] += 1;
        for d in 0..self.m {
            self.touch[(v ^ (1 << d)) as usize] += 1;
        }
        self.path.push(v);
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("non-empty path");
        self.touch[v as usize] -= 1;
        for d in 0..self.m {
            self.touch[(v ^ (1 << d)) as usize] -= 1;
        }
    }

    fn head(&self) -> u64 {
        *self.path.last().expect("non-empty path")
    }

    /// Neighbour of the head that only the head touches.
    fn can_step(&self, d: u32) -> bool {
        self.touch[(self.head() ^ (1 << d)) as usize] == 1
    }

    fn moves(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.m).filter(|&d| self.can_step(d))
    }
}

struct Exhaustive {
    grid: Grid,
    best: Vec<u64>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
    queue: Vec<u64>,
    mark: Vec<u32>,
    epoch: u32,
}

impl Exhaustive {
    fn new(m: u32, deadline: Option<Instant>) -> Exhaustive {
        let grid = Grid::new(m);
        let best = grid.path.clone();
        Exhaustive {
            grid,
            best,
            nodes: 0,
            deadline,
            timed_out: false,
            queue: Vec::with_capacity(1 << m),
            mark: vec![0; 1usize << m],
            epoch: 0,
        }
    }

    fn run(&mut self) {
        self.dfs(1);
    }

    /// Vertices the head could still reach through currently free
    /// vertices; an upper bound on the remaining extension.
    fn reachable(&mut self) -> usize {
        self.epoch += 1;
        let epoch = self.epoch;
        let m = self.grid.m;
        self.queue.clear();
        let head = self.grid.head();
        for d in 0..m {
            let v = head ^ (1 << d);
            if self.grid.touch[v as usize] == 1 && self.mark[v as usize] != epoch {
                self.mark[v as usize] = epoch;
                self.queue.push(v);
            }
        }
        let mut i = 0;
        while i < self.queue.len() {
            let v = self.queue[i];
            i += 1;
            for d in 0..m {
                let w = v ^ (1 << d);
                if self.grid.touch[w as usize] == 0 && self.mark[w as usize] != epoch {
                    self.mark[w as usize] = epoch;
                    self.queue.push(w);
                }
            }
        }
        self.queue.len()
    }

    fn dfs(&mut self, max_dim: u32) {
        self.nodes += 1;
        if self.nodes & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        if self.grid.path.len() > self.best.len() {
            self.best = self.grid.path.clone();
        }
        if self.grid.path.len() + self.reachable() <= self.best.len() {
            return;
        }
        let limit = (max_dim + 1).min(self.grid.m);
        for d in 0..limit {
            if self.grid.can_step(d) {
                let v = self.grid.head() ^ (1 << d);
                self.grid.push(v);
                self.dfs(max_dim.max(d + 1));
                self.grid.pop();
            }
        }
    }
}

fn heuristic(m: u32, budget: &SearchBudget, deadline: Option<Instant>) -> (Vec<u64>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best: Vec<u64> = vec![0, 1];
    let mut nodes = 0u64;
    for _ in 0..budget.restarts.max(1) {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let mut run = Randomized {
            grid: Grid::new(m),
            nodes: 0,
            limit: budget.nodes_per_restart.max(1),
            best: Vec::new(),
            noise: rng.gen_range(0.0..0.5),
            deadline,
        };
        let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
        run.dfs(&mut local);
        nodes += run.nodes;
        if run.best.len() > best.len() {
            best = run.best;
        }
    }
    (best, nodes)
}

struct Randomized {
    grid: Grid,
    nodes: u64,
    limit: u64,
    best: Vec<u64>,
    noise: f64,
    deadline: Option<Instant>,
}

impl Randomized {
    fn exhausted(&self) -> bool {
        self.nodes >= self.limit
            || (self.nodes & 0xfff == 0 && self.deadline.is_some_and(|d| Instant::now() >= d))
    }

    fn dfs(&mut self, rng: &mut ChaCha8Rng) {
        self.nodes += 1;
        if self.grid.path.len() > self.best.len() {
            self.best = self.grid.path.clone();
        }
        if self.exhausted() {
            return;
        }
        let free: Vec<u32> = self.grid.moves().collect();
        let mut moves: Vec<(usize, u32)> = free
            .into_iter()
            .map(|d| {
                let v = self.grid.head() ^ (1 << d);
                self.grid.push(v);
                let onward = self.grid.moves().count();
                self.grid.pop();
                (onward, d)
            })
            .collect();
        moves.shuffle(rng);
        // Most constrained first, but dead ends last; occasionally explore.
        if !rng.gen_bool(self.noise) {
            moves.sort_by_key(|&(onward, _)| if onward == 0 { usize::MAX } else { onward });
        }
        for (_, d) in moves {
            let v = self.grid.head() ^ (1 << d);
            self.grid.push(v);
            self.dfs(rng);
            self.grid.pop();
            if self.exhausted() {
                return;
            }
        }
    }
}
