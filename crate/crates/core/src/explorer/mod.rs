//! Search over the contract-net graph, whose vertices are allocations and
//! whose edges are the deals admitted by a structural and a rationality
//! class.
//!
//! Neighbour enumeration order is fixed (resources ascending, then
//! receiving agent ascending for O-contracts); breadth-first search expands
//! neighbours in label order. Every result is reproducible.

mod space;
mod verify;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::deal::{rationality_holds, RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::model::{Allocation, Bundle, Rational, ResourceSetting};

pub use space::{l_max_scan, max_sigma_e, AllocationSpace, ClassGraph, UNREACHED};
pub use verify::{
    verify_claims, verify_unique_path, Certificate, ClaimCheck, Counterexample, ScanMode,
    UniqueVerdict, FULL_SCAN_LIMIT,
};

/// Default limit on stored search states.
pub const DEFAULT_NODE_CAP: usize = 2_000_000;

/// A shortest-path question over one setting.
#[derive(Clone, Debug)]
pub struct PathQuery<'a> {
    pub setting: &'a ResourceSetting,
    pub from: Allocation,
    pub to: Allocation,
    pub structural: StructuralClass,
    pub rationality: RationalityClass,
    /// Steps allowed to break the rationality class.
    pub budget: u32,
    pub node_cap: usize,
}

impl<'a> PathQuery<'a> {
    pub fn new(
        setting: &'a ResourceSetting,
        from: Allocation,
        to: Allocation,
        structural: StructuralClass,
        rationality: RationalityClass,
    ) -> PathQuery<'a> {
        PathQuery {
            setting,
            from,
            to,
            structural,
            rationality,
            budget: 0,
            node_cap: DEFAULT_NODE_CAP,
        }
    }

    pub fn with_budget(mut self, budget: u32) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(Vec<Allocation>),
    /// No class path exists: the shortest length is undefined.
    Unreachable,
    /// The search stopped at the node cap without an answer.
    CapExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub outcome: Outcome,
    pub explored: usize,
}

impl PathResult {
    /// Number of deals on the found path.
    pub fn length(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Found(p) => Some(p.len() - 1),
            _ => None,
        }
    }
}

/// Memoised utility lookups.
pub(crate) struct Evaluator<'a> {
    setting: &'a ResourceSetting,
    cache: Vec<HashMap<Bundle, Rational>>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(setting: &'a ResourceSetting) -> Evaluator<'a> {
        Evaluator {
            setting,
            cache: vec![HashMap::new(); setting.agents()],
        }
    }

    pub(crate) fn value(&mut self, agent: usize, b: Bundle) -> Rational {
        let setting = self.setting;
        self.cache[agent]
            .entry(b)
            .or_insert_with(|| setting.utility(agent).evaluate(b))
            .clone()
    }

    pub(crate) fn values(&mut self, p: &Allocation) -> Vec<Rational> {
        (0..p.agents())
            .map(|i| self.value(i, p.bundle(i)))
            .collect()
    }

    pub(crate) fn rational(
        &mut self,
        class: RationalityClass,
        p: &Allocation,
        q: &Allocation,
    ) -> bool {
        if class == RationalityClass::None {
            return true;
        }
        let before = self.values(p);
        let after = self.values(q);
        let involved: Vec<usize> = (0..p.agents())
            .filter(|&i| p.bundle(i) != q.bundle(i))
            .collect();
        rationality_holds(class, &before, &after, &involved)
    }
}

/// Every allocation one deal of `class` away from `p`, in canonical order.
/// Fails with `CapExceeded` when the neighbourhood is larger than `cap`.
pub fn structural_neighbors(
    p: &Allocation,
    class: StructuralClass,
    cap: usize,
) -> Result<Vec<Allocation>> {
    let n = p.agents();
    let m = p.resources();
    let mut out = Vec::new();
    match class {
        StructuralClass::O => {
            for r in 0..m {
                let owner = p.owner(r);
                for a in (0..n).filter(|&a| a != owner) {
                    out.push(p.moved(r, a));
                }
            }
        }
        StructuralClass::Swap => {
            for r1 in 0..m {
                for r2 in r1 + 1..m {
                    let (a, b) = (p.owner(r1), p.owner(r2));
                    if a != b {
                        out.push(p.moved(r1, b).moved(r2, a));
                    }
                }
            }
        }
        StructuralClass::Mk(_) | StructuralClass::Unrestricted => {
            let k = match class {
                StructuralClass::Mk(k) => k.min(n),
                _ => n,
            };
            for group in 1u64..1 << n {
                let size = group.count_ones() as usize;
                if size < 2 || size > k {
                    continue;
                }
                let agents: Vec<usize> = (0..n).filter(|&i| group >> i & 1 == 1).collect();
                redistribute(p, &agents, cap, &mut out)?;
            }
        }
    }
    if out.len() > cap {
        return Err(Error::CapExceeded(cap));
    }
    Ok(out)
}

/// All reassignments of the pooled resources of `agents` among them in
/// which each of them ends with a different bundle.
fn redistribute(
    p: &Allocation,
    agents: &[usize],
    cap: usize,
    out: &mut Vec<Allocation>,
) -> Result<()> {
    let pool: Vec<u32> = agents
        .iter()
        .flat_map(|&i| p.bundle(i).resources())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let g = agents.len();
    let total = (g as f64).powi(pool.len() as i32);
    if total > cap as f64 || out.len() as f64 + total > 4.0 * cap as f64 {
        return Err(Error::CapExceeded(cap));
    }
    let mut choice = vec![0usize; pool.len()];
    loop {
        let mut bundles = p.bundles().to_vec();
        for &i in agents {
            bundles[i] = Bundle::EMPTY;
        }
        for (slot, &r) in pool.iter().enumerate() {
            let a = agents[choice[slot]];
            bundles[a] = bundles[a].with(r);
        }
        if agents.iter().all(|&i| bundles[i] != p.bundle(i)) {
            out.push(
                Allocation::from_bundles(bundles, p.resources()).expect("pooled reassignment"),
            );
        }
        // odometer, last resource fastest
        let mut pos = pool.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < g {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Class-satisfying successors of `p` (the budget is ignored).
pub fn phi_successors(p: &Allocation, q: &PathQuery<'_>) -> Result<Vec<Allocation>> {
    q.setting.check(p)?;
    let mut eval = Evaluator::new(q.setting);
    let neighbors = structural_neighbors(p, q.structural, q.node_cap)?;
    Ok(neighbors
        .into_iter()
        .filter(|n| eval.rational(q.rationality, p, n))
        .collect())
}

/// Breadth-first search for a shortest class path. States carry the
/// number of irrational steps used; a state is expanded only if it uses
/// less budget than any earlier visit of the same allocation.
pub fn shortest_path(q: &PathQuery<'_>) -> Result<PathResult> {
    q.setting.check(&q.from)?;
    q.setting.check(&q.to)?;
    if q.from == q.to {
        return Err(Error::NotADeal);
    }
    let mut eval = Evaluator::new(q.setting);
    struct Node {
        alloc: Allocation,
        used: u32,
        parent: usize,
    }
    let mut nodes = vec![Node {
        alloc: q.from.clone(),
        used: 0,
        parent: usize::MAX,
    }];
    let mut best_used: HashMap<Allocation, u32> = HashMap::new();
    best_used.insert(q.from.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut explored = 0usize;
    while let Some(idx) = queue.pop_front() {
        explored += 1;
        let current = nodes[idx].alloc.clone();
        let used = nodes[idx].used;
        let neighbors = match structural_neighbors(&current, q.structural, q.node_cap) {
            Ok(mut n) => {
                // label order makes the returned path the lexicographically least
                n.sort_by_cached_key(|a| a.labels());
                n
            }
            Err(Error::CapExceeded(_)) => {
                return Ok(PathResult {
                    outcome: Outcome::CapExceeded,
                    explored,
                })
            }
            Err(e) => return Err(e),
        };
        for next in neighbors {
            let cost = u32::from(!eval.rational(q.rationality, &current, &next));
            let next_used = used + cost;
            if next_used > q.budget {
                continue;
            }
            match best_used.entry(next.clone()) {
                Entry::Occupied(mut e) => {
                    if *e.get() <= next_used {
                        continue;
                    }
                    e.insert(next_used);
                }
                Entry::Vacant(e) => {
                    e.insert(next_used);
                }
            }
            nodes.push(Node {
                alloc: next.clone(),
                used: next_used,
                parent: idx,
            });
            if next == q.to {
                let mut path = Vec::new();
                let mut at = nodes.len() - 1;
                while at != usize::MAX {
                    path.push(nodes[at].alloc.clone());
                    at = nodes[at].parent;
                }
                path.reverse();
                return Ok(PathResult {
                    outcome: Outcome::Found(path),
                    explored,
                });
            }
            if nodes.len() > q.node_cap {
                return Ok(PathResult {
                    outcome: Outcome::CapExceeded,
                    explored,
                });
            }
            queue.push_back(nodes.len() - 1);
        }
    }
    Ok(PathResult {
        outcome: Outcome::Unreachable,
        explored,
    })
}

/// Moves each misplaced resource once, in index order.
pub fn unrestricted_o_path(from: &Allocation, to: &Allocation) -> Result<Vec<Allocation>> {
    if from.agents() != to.agents() || from.resources() != to.resources() {
        return Err(Error::InvalidAllocation(
            "allocations belong to different settings".into(),
        ));
    }
    if from == to {
        return Err(Error::NotADeal);
    }
    let mut path = vec![from.clone()];
    for r in 0..from.resources() {
        let target = to.owner(r);
        let current = path.last().expect("non-empty");
        if current.owner(r) != target {
            let next = current.moved(r, target);
            path.push(next);
        }
    }
    Ok(path)
}

/// True when no allocation weakly improves every agent and strictly
/// improves one.
pub fn is_pareto_optimal(p: &Allocation, setting: &ResourceSetting) -> Result<bool> {
    setting.check(p)?;
    let space = AllocationSpace::new(setting, space::ENUMERATION_CAP)?;
    let here = space.index_of(p);
    Ok(!(0..space.size()).any(|q| {
        let (a, b) = (space.values(here), space.values(q));
        b.iter().zip(a).all(|(x, y)| x >= y) && b.iter().zip(a).any(|(x, y)| x > y)
    }))
}

/// How a maximal run picks among several admissible deals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieRule {
    First,
    Last,
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct MaximalRun {
    pub path: Vec<Allocation>,
}

impl MaximalRun {
    pub fn terminal(&self) -> &Allocation {
        self.path.last().expect("runs include their start")
    }
}

/// Applies admissible deals until none is left. Each step is checked to
/// raise the quantity that guarantees termination.
pub fn run_maximal_path(
    setting: &ResourceSetting,
    start: &Allocation,
    structural: StructuralClass,
    rationality: RationalityClass,
    tie: TieRule,
    step_cap: usize,
) -> Result<MaximalRun> {
    if rationality == RationalityClass::None {
        return Err(Error::Parameter(
            "maximal runs need a rationality class that guarantees progress".into(),
        ));
    }
    setting.check(start)?;
    let mut rng = match tie {
        TieRule::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut eval = Evaluator::new(setting);
    let mut path = vec![start.clone()];
    loop {
        let current = path.last().expect("non-empty").clone();
        let mut options: Vec<Allocation> =
            structural_neighbors(&current, structural, DEFAULT_NODE_CAP)?
                .into_iter()
                .filter(|q| eval.rational(rationality, &current, q))
                .collect();
        if options.is_empty() {
            return Ok(MaximalRun { path });
        }
        if path.len() > step_cap {
            return Err(Error::CapExceeded(step_cap));
        }
        let next = match (tie, rng.as_mut()) {
            (TieRule::First, _) => options.swap_remove(0),
            (TieRule::Last, _) => options.pop().expect("non-empty"),
            (TieRule::Seeded(_), Some(r)) => options.choose(r).expect("non-empty").clone(),
            (TieRule::Seeded(_), None) => unreachable!("seeded runs own an rng"),
        };
        let before = eval.values(&current);
        let after = eval.values(&next);
        match rationality {
            RationalityClass::IR | RationalityClass::CooperativelyRational => {
                let b: Rational = before.iter().sum();
                let a: Rational = after.iter().sum();
                debug_assert!(a > b, "welfare must rise on {rationality} steps");
            }
            RationalityClass::PigouDalton => {
                let sq = |v: &[Rational]| v.iter().map(|x| x * x).sum::<Rational>();
                debug_assert!(sq(&after) < sq(&before));
            }
            _ => {}
        }
        path.push(next);
    }
}
