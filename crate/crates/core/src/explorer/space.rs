//! Dense enumeration of all `n^m` allocations for small settings.

use std::collections::VecDeque;

use super::structural_neighbors;
use crate::deal::{rationality_holds, RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::model::{Allocation, Bundle, Rational, ResourceSetting};

/// Largest `n^m` materialised by [`AllocationSpace`] for callers that do
/// not pass their own limit.
pub(crate) const ENUMERATION_CAP: usize = 1 << 18;

/// Largest `n^m` accepted by [`l_max_scan`].
pub const L_MAX_CAP: usize = 4096;

/// Marks nodes a breadth-first search did not reach.
pub const UNREACHED: u32 = u32::MAX;

/// Every allocation of a setting, indexed by its owner vector read as a
/// base-`n` number (resource 0 least significant), with cached values.
pub struct AllocationSpace {
    n: usize,
    m: u32,
    size: usize,
    values: Vec<Vec<Rational>>,
    sigma: Vec<Rational>,
}

impl AllocationSpace {
    pub fn new(setting: &ResourceSetting, limit: usize) -> Result<AllocationSpace> {
        let n = setting.agents();
        let m = setting.resources();
        let size = (n as u128).checked_pow(m).unwrap_or(u128::MAX);
        if size > limit as u128 {
            return Err(Error::CapExceeded(limit));
        }
        let size = size as usize;
        let per_bundle: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..1u64 << m)
                    .map(|b| setting.utility(i).evaluate(Bundle(b)))
                    .collect()
            })
            .collect();
        let mut values = Vec::with_capacity(size);
        let mut sigma = Vec::with_capacity(size);
        let mut bundles = vec![0u64; n];
        for idx in 0..size {
            bundles.iter_mut().for_each(|b| *b = 0);
            let mut rest = idx;
            for r in 0..m {
                bundles[rest % n] |= 1 << r;
                rest /= n;
            }
            let v: Vec<Rational> = (0..n)
                .map(|i| per_bundle[i][bundles[i] as usize].clone())
                .collect();
            sigma.push(v.iter().sum());
            values.push(v);
        }
        Ok(AllocationSpace {
            n,
            m,
            size,
            values,
            sigma,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self, idx: usize) -> &[Rational] {
        &self.values[idx]
    }

    pub fn sigma_u(&self, idx: usize) -> &Rational {
        &self.sigma[idx]
    }

    pub fn sigma_e(&self, idx: usize) -> &Rational {
        self.values[idx].iter().min().expect("at least two agents")
    }

    pub fn allocation(&self, idx: usize) -> Allocation {
        let mut owners = Vec::with_capacity(self.m as usize);
        let mut rest = idx;
        for _ in 0..self.m {
            owners.push(rest % self.n);
            rest /= self.n;
        }
        Allocation::from_owners(&owners, self.n).expect("index decodes to a partition")
    }

    pub fn index_of(&self, p: &Allocation) -> usize {
        (0..self.m)
            .rev()
            .fold(0, |acc, r| acc * self.n + p.owner(r))
    }

    fn involved(&self, a: usize, b: usize) -> Vec<usize> {
        let (pa, pb) = (self.allocation(a), self.allocation(b));
        (0..self.n)
            .filter(|&i| pa.bundle(i) != pb.bundle(i))
            .collect()
    }

    /// True when the deal from `a` to `b` meets `class`.
    pub fn rational(&self, class: RationalityClass, a: usize, b: usize) -> bool {
        match class {
            RationalityClass::None => true,
            RationalityClass::IR => self.sigma[b] > self.sigma[a],
            _ => rationality_holds(
                class,
                &self.values[a],
                &self.values[b],
                &self.involved(a, b),
            ),
        }
    }

    /// Edges of the contract-net graph restricted to one class pair.
    pub fn graph(
        &self,
        structural: StructuralClass,
        rationality: RationalityClass,
    ) -> Result<ClassGraph> {
        let mut adj = Vec::with_capacity(self.size);
        for idx in 0..self.size {
            let p = self.allocation(idx);
            let out: Vec<u32> = structural_neighbors(&p, structural, usize::MAX >> 2)?
                .iter()
                .map(|q| self.index_of(q))
                .filter(|&j| self.rational(rationality, idx, j))
                .map(|j| j as u32)
                .collect();
            adj.push(out);
        }
        Ok(ClassGraph { adj })
    }
}

/// Adjacency lists over [`AllocationSpace`] indices.
pub struct ClassGraph {
    pub adj: Vec<Vec<u32>>,
}

impl ClassGraph {
    /// Hop distances from `src`; [`UNREACHED`] where no path exists.
    pub fn distances(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.adj.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = dist[v] + 1;
                    queue.push_back(w as usize);
                }
            }
        }
        dist
    }
}

/// Longest shortest class path over all deals that are themselves
/// `rationality`-satisfying and realisable by a class path. `None` when no
/// such deal exists.
pub fn l_max_scan(
    setting: &ResourceSetting,
    structural: StructuralClass,
    rationality: RationalityClass,
) -> Result<Option<usize>> {
    let space = AllocationSpace::new(setting, L_MAX_CAP)?;
    let graph = space.graph(structural, rationality)?;
    let mut best = None;
    for src in 0..space.size() {
        let dist = graph.distances(src);
        for (dst, &d) in dist.iter().enumerate() {
            if d == UNREACHED || d == 0 {
                continue;
            }
            if space.rational(rationality, src, dst) {
                best = best.max(Some(d as usize));
            }
        }
    }
    Ok(best)
}

/// Largest egalitarian welfare over every allocation.
pub fn max_sigma_e(setting: &ResourceSetting) -> Result<Rational> {
    let space = AllocationSpace::new(setting, ENUMERATION_CAP)?;
    Ok((0..space.size())
        .map(|i| space.sigma_e(i).clone())
        .max()
        .expect("space is non-empty"))
}
