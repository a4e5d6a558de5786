//! Settings, bundles, allocations and utility functions.
//!
//! Resources are identified by index `0..m` and agents by index `0..n`. A
//! bundle is stored as a bit mask in which bit `r` is set when resource `r`
//! is held; its textual label lists the bits left to right, so the label
//! `1000` is the bundle holding only resource 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational used for every utility value.
pub type Rational = BigRational;

/// Largest resource count a bundle mask can represent.
pub const MAX_RESOURCES: u32 = 64;

/// Largest resource count for which `2^m` bundles are enumerated.
pub const ENUMERATION_LIMIT: u32 = 24;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^e` as an exact rational.
pub fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::one() << e as usize)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// A set of resources, stored as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bundle(pub u64);

impl Bundle {
    pub const EMPTY: Bundle = Bundle(0);

    pub fn full(m: u32) -> Bundle {
        if m >= 64 {
            Bundle(u64::MAX)
        } else {
            Bundle((1u64 << m) - 1)
        }
    }

    pub fn from_resources<I: IntoIterator<Item = u32>>(rs: I) -> Bundle {
        Bundle(rs.into_iter().fold(0, |acc, r| acc | (1u64 << r)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, r: u32) -> bool {
        self.0 >> r & 1 == 1
    }

    pub fn with(self, r: u32) -> Bundle {
        Bundle(self.0 | (1u64 << r))
    }

    pub fn without(self, r: u32) -> Bundle {
        Bundle(self.0 & !(1u64 << r))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, m: u32) -> Bundle {
        Bundle(!self.0 & Bundle::full(m).0)
    }

    pub fn is_subset(self, other: Bundle) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Bundle) -> Bundle {
        Bundle(self.0 | other.0)
    }

    pub fn intersection(self, other: Bundle) -> Bundle {
        Bundle(self.0 & other.0)
    }

    pub fn difference(self, other: Bundle) -> Bundle {
        Bundle(self.0 & !other.0)
    }

    pub fn resources(self) -> impl Iterator<Item = u32> {
        let bits = self.0;
        (0..64u32).filter(move |r| bits >> r & 1 == 1)
    }

    /// Hamming distance between the two masks.
    pub fn distance(self, other: Bundle) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// Binary label of width `m`; the leftmost character is resource 0.
    pub fn label(self, m: u32) -> String {
        (0..m)
            .map(|r| if self.contains(r) { '1' } else { '0' })
            .collect()
    }

    pub fn parse_label(s: &str) -> Result<Bundle> {
        let s = s.trim();
        if s.len() > MAX_RESOURCES as usize {
            return Err(Error::Parse(format!("label too long: {s:?}")));
        }
        let mut bits = 0u64;
        for (r, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1u64 << r,
                _ => return Err(Error::Parse(format!("bad label character in {s:?}"))),
            }
        }
        Ok(Bundle(bits))
    }
}

/// A partition of the resources among the agents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation {
    resources: u32,
    bundles: Vec<Bundle>,
}

impl Allocation {
    pub fn from_bundles(bundles: Vec<Bundle>, resources: u32) -> Result<Allocation> {
        if resources == 0 || resources > MAX_RESOURCES {
            return Err(Error::InvalidAllocation(format!(
                "resource count {resources} outside 1..={MAX_RESOURCES}"
            )));
        }
        let full = Bundle::full(resources);
        let mut seen = 0u64;
        for (i, b) in bundles.iter().enumerate() {
            if !b.is_subset(full) {
                return Err(Error::InvalidAllocation(format!(
                    "agent {i} holds a resource outside 0..{resources}"
                )));
            }
            if seen & b.0 != 0 {
                return Err(Error::InvalidAllocation(format!(
                    "agent {i} shares a resource with an earlier agent"
                )));
            }
            seen |= b.0;
        }
        if seen != full.0 {
            return Err(Error::InvalidAllocation(
                "bundles do not cover every resource".into(),
            ));
        }
        Ok(Allocation { resources, bundles })
    }

    pub fn from_owners(owners: &[usize], agents: usize) -> Result<Allocation> {
        let mut bundles = vec![Bundle::EMPTY; agents];
        for (r, &o) in owners.iter().enumerate() {
            if o >= agents {
                return Err(Error::InvalidAllocation(format!(
                    "resource {r} assigned to unknown agent {o}"
                )));
            }
            bundles[o] = bundles[o].with(r as u32);
        }
        Allocation::from_bundles(bundles, owners.len() as u32)
    }

    /// Two-agent allocation `<label, complement>`.
    pub fn pair(first: Bundle, resources: u32) -> Result<Allocation> {
        Allocation::from_bundles(vec![first, first.complement(resources)], resources)
    }

    pub fn parse_labels<S: AsRef<str>>(labels: &[S]) -> Result<Allocation> {
        let width = labels
            .first()
            .map(|l| l.as_ref().trim().len())
            .ok_or_else(|| Error::Parse("allocation needs at least one bundle".into()))?;
        let mut bundles = Vec::with_capacity(labels.len());
        for l in labels {
            if l.as_ref().trim().len() != width {
                return Err(Error::Parse("bundle labels differ in width".into()));
            }
            bundles.push(Bundle::parse_label(l.as_ref())?);
        }
        Allocation::from_bundles(bundles, width as u32)
    }

    pub fn resources(&self) -> u32 {
        self.resources
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> Bundle {
        self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn owner(&self, r: u32) -> usize {
        self.bundles
            .iter()
            .position(|b| b.contains(r))
            .expect("allocation covers every resource")
    }

    pub fn owners(&self) -> Vec<usize> {
        (0..self.resources).map(|r| self.owner(r)).collect()
    }

    /// The allocation obtained by handing resource `r` to agent `to`.
    pub fn moved(&self, r: u32, to: usize) -> Allocation {
        let from = self.owner(r);
        let mut bundles = self.bundles.clone();
        bundles[from] = bundles[from].without(r);
        bundles[to] = bundles[to].with(r);
        Allocation {
            resources: self.resources,
            bundles,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.bundles
            .iter()
            .map(|b| b.label(self.resources))
            .collect()
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.labels().join(","))
    }
}

/// A named total function over bundles, supplied by a construction.
#[derive(Clone)]
pub struct ClosedForm {
    pub name: String,
    f: Arc<dyn Fn(Bundle) -> Rational + Send + Sync>,
}

impl ClosedForm {
    pub fn new<F>(name: impl Into<String>, f: F) -> ClosedForm
    where
        F: Fn(Bundle) -> Rational + Send + Sync + 'static,
    {
        ClosedForm {
            name: name.into(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedForm({})", self.name)
    }
}

/// One agent's valuation of bundles.
#[derive(Clone, Debug)]
pub enum UtilitySpec {
    /// Sparse table; bundles without an entry take `default`.
    Table {
        entries: BTreeMap<Bundle, Rational>,
        default: Rational,
    },
    /// `u(S)` is the sum of the per-resource values over `S`.
    Additive {
        values: Vec<Rational>,
    },
    /// `u(S)` is 1 for the listed bundles and 0 elsewhere.
    ZeroOne {
        ones: BTreeSet<Bundle>,
    },
    ClosedForm(ClosedForm),
}

impl UtilitySpec {
    pub fn constant(v: Rational) -> UtilitySpec {
        UtilitySpec::Table {
            entries: BTreeMap::new(),
            default: v,
        }
    }

    pub fn zero() -> UtilitySpec {
        UtilitySpec::constant(Rational::zero())
    }

    pub fn table<I>(entries: I, default: Rational) -> UtilitySpec
    where
        I: IntoIterator<Item = (Bundle, Rational)>,
    {
        UtilitySpec::Table {
            entries: entries.into_iter().collect(),
            default,
        }
    }

    pub fn evaluate(&self, b: Bundle) -> Rational {
        match self {
            UtilitySpec::Table { entries, default } => {
                entries.get(&b).cloned().unwrap_or_else(|| default.clone())
            }
            UtilitySpec::Additive { values } => b
                .resources()
                .filter_map(|r| values.get(r as usize))
                .fold(Rational::zero(), |acc, v| acc + v),
            UtilitySpec::ZeroOne { ones } => {
                if ones.contains(&b) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            UtilitySpec::ClosedForm(c) => (c.f)(b),
        }
    }

    /// Converts to an explicit table over `2^m` bundles, keeping the most
    /// frequent value as the default (ties go to the smallest value).
    pub fn materialize(&self, m: u32) -> Result<UtilitySpec> {
        if let UtilitySpec::Table { entries, default } = self {
            let full = Bundle::full(m);
            if entries.keys().all(|b| b.is_subset(full)) {
                return Ok(UtilitySpec::Table {
                    entries: entries
                        .iter()
                        .filter(|(_, v)| *v != default)
                        .map(|(b, v)| (*b, v.clone()))
                        .collect(),
                    default: default.clone(),
                });
            }
        }
        guard_enumeration(m)?;
        let values: Vec<Rational> = (0..1u64 << m).map(|b| self.evaluate(Bundle(b))).collect();
        let mut counts: BTreeMap<&Rational, usize> = BTreeMap::new();
        for v in &values {
            *counts.entry(v).or_default() += 1;
        }
        let best = counts.values().copied().max().unwrap_or(0);
        let default = counts
            .iter()
            .find(|(_, c)| **c == best)
            .map(|(v, _)| (*v).clone())
            .unwrap_or_else(Rational::zero);
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != default)
            .map(|(b, v)| (Bundle(b as u64), v.clone()))
            .collect();
        Ok(UtilitySpec::Table { entries, default })
    }
}

fn guard_enumeration(m: u32) -> Result<()> {
    if m > ENUMERATION_LIMIT {
        Err(Error::ResourceLimit(format!(
            "enumerating 2^{m} bundles exceeds the limit of 2^{ENUMERATION_LIMIT}"
        )))
    } else {
        Ok(())
    }
}

/// Agents, resources and one utility function per agent.
#[derive(Clone, Debug)]
pub struct ResourceSetting {
    resources: u32,
    utilities: Vec<UtilitySpec>,
}

impl ResourceSetting {
    pub fn new(resources: u32, utilities: Vec<UtilitySpec>) -> Result<ResourceSetting> {
        if utilities.len() < 2 {
            return Err(Error::Parameter(format!(
                "a setting needs at least two agents, got {}",
                utilities.len()
            )));
        }
        if resources == 0 || resources > MAX_RESOURCES {
            return Err(Error::Parameter(format!(
                "resource count {resources} outside 1..={MAX_RESOURCES}"
            )));
        }
        Ok(ResourceSetting {
            resources,
            utilities,
        })
    }

    pub fn agents(&self) -> usize {
        self.utilities.len()
    }

    pub fn resources(&self) -> u32 {
        self.resources
    }

    pub fn utilities(&self) -> &[UtilitySpec] {
        &self.utilities
    }

    pub fn utility(&self, agent: usize) -> &UtilitySpec {
        &self.utilities[agent]
    }

    pub fn with_utility(&self, agent: usize, u: UtilitySpec) -> ResourceSetting {
        let mut utilities = self.utilities.clone();
        utilities[agent] = u;
        ResourceSetting {
            resources: self.resources,
            utilities,
        }
    }

    pub fn check(&self, p: &Allocation) -> Result<()> {
        if p.agents() != self.agents() || p.resources() != self.resources {
            return Err(Error::InvalidAllocation(format!(
                "allocation has {} agents over {} resources, setting has {} over {}",
                p.agents(),
                p.resources(),
                self.agents(),
                self.resources
            )));
        }
        Ok(())
    }

    /// `u_i(P_i)` for every agent.
    pub fn values(&self, p: &Allocation) -> Result<Vec<Rational>> {
        self.check(p)?;
        Ok(self
            .utilities
            .iter()
            .zip(p.bundles())
            .map(|(u, b)| u.evaluate(*b))
            .collect())
    }

    /// Utilitarian social welfare.
    pub fn sigma_u(&self, p: &Allocation) -> Result<Rational> {
        Ok(self
            .values(p)?
            .into_iter()
            .fold(Rational::zero(), |acc, v| acc + v))
    }

    /// Egalitarian social welfare.
    pub fn sigma_e(&self, p: &Allocation) -> Result<Rational> {
        Ok(self
            .values(p)?
            .into_iter()
            .min()
            .expect("settings have at least two agents"))
    }
}

/// True when adding any single resource never lowers the value, which by
/// transitivity is the full subset condition.
pub fn is_monotone(u: &UtilitySpec, m: u32) -> Result<bool> {
    Ok(monotonicity_witness(u, m)?.is_none())
}

/// A pair `(S, S + r)` with `u(S) > u(S + r)`, if one exists.
pub fn monotonicity_witness(u: &UtilitySpec, m: u32) -> Result<Option<(Bundle, Bundle)>> {
    guard_enumeration(m)?;
    let values: Vec<Rational> = (0..1u64 << m).map(|b| u.evaluate(Bundle(b))).collect();
    for s in 0..1u64 << m {
        for r in 0..m {
            let t = s | (1u64 << r);
            if t != s && values[s as usize] > values[t as usize] {
                return Ok(Some((Bundle(s), Bundle(t))));
            }
        }
    }
    Ok(None)
}

/// Absolute value helper kept here so callers need not import `Signed`.
pub fn abs(v: &Rational) -> Rational {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip_and_order() {
        let b = Bundle::parse_label("1000").unwrap();
        assert_eq!(b, Bundle(1));
        assert_eq!(b.label(4), "1000");
        assert_eq!(Bundle::parse_label("0101").unwrap().label(4), "0101");
        for bits in 0..1u64 << 10 {
            let b = Bundle(bits);
            assert_eq!(Bundle::parse_label(&b.label(10)).unwrap(), b);
            assert_eq!(b.complement(10).complement(10), b);
        }
    }

    #[test]
    fn allocation_rejects_overlap_and_gaps() {
        let a = Bundle::parse_label("1100").unwrap();
        let b = Bundle::parse_label("0110").unwrap();
        assert!(matches!(
            Allocation::from_bundles(vec![a, b], 4),
            Err(Error::InvalidAllocation(_))
        ));
        let c = Bundle::parse_label("0010").unwrap();
        assert!(matches!(
            Allocation::from_bundles(vec![a, c], 4),
            Err(Error::InvalidAllocation(_))
        ));
        let ok = Allocation::pair(a, 4).unwrap();
        assert_eq!(ok.labels(), vec!["1100", "0011"]);
        assert_eq!(ok.owner(2), 1);
    }

    #[test]
    fn setting_needs_two_agents_and_resources() {
        assert!(ResourceSetting::new(3, vec![UtilitySpec::zero()]).is_err());
        assert!(ResourceSetting::new(0, vec![UtilitySpec::zero(), UtilitySpec::zero()]).is_err());
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn additive_sums_singletons() {
        let values = vec![ratio(1, 2), int(3), ratio(-2, 3), int(5)];
        let u = UtilitySpec::Additive {
            values: values.clone(),
        };
        let b = Bundle::parse_label("1101").unwrap();
        // independent sum over the labelled positions
        let expected = values[0].clone() + values[1].clone() + values[3].clone();
        assert_eq!(u.evaluate(b), expected);
        let zero = UtilitySpec::Additive {
            values: vec![int(0); 4],
        };
        assert_eq!(zero.evaluate(b), int(0));
    }

    #[test]
    fn zero_one_only_yields_bits() {
        let u = UtilitySpec::ZeroOne {
            ones: [Bundle(3), Bundle(5)].into_iter().collect(),
        };
        for b in 0..16 {
            let v = u.evaluate(Bundle(b));
            assert!(v == int(0) || v == int(1));
        }
        assert_eq!(u.evaluate(Bundle(5)), int(1));
    }

    #[test]
    fn monotonicity_guard_and_constant() {
        assert!(is_monotone(&UtilitySpec::constant(int(4)), 6).unwrap());
        assert!(matches!(
            is_monotone(&UtilitySpec::zero(), 25),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn materialize_keeps_values() {
        let u = UtilitySpec::ClosedForm(ClosedForm::new("weight", |b: Bundle| {
            int(b.len() as i64 % 2)
        }));
        let t = u.materialize(5).unwrap();
        for b in 0..32 {
            assert_eq!(t.evaluate(Bundle(b)), u.evaluate(Bundle(b)));
        }
    }
}
