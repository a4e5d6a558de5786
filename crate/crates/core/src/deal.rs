//! Deals between allocations and the predicates that classify them.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::model::{Allocation, Rational, ResourceSetting};

/// An ordered pair of distinct allocations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Deal {
    from: Allocation,
    to: Allocation,
}

impl Deal {
    pub fn new(from: Allocation, to: Allocation) -> Result<Deal> {
        if from == to {
            return Err(Error::NotADeal);
        }
        if from.agents() != to.agents() || from.resources() != to.resources() {
            return Err(Error::InvalidAllocation(
                "deal endpoints belong to different settings".into(),
            ));
        }
        Ok(Deal { from, to })
    }

    pub fn from(&self) -> &Allocation {
        &self.from
    }

    pub fn to(&self) -> &Allocation {
        &self.to
    }

    /// Agents whose bundle changes.
    pub fn involved_agents(&self) -> Vec<usize> {
        involved(&self.from, &self.to)
    }

    /// Resources whose owner changes.
    pub fn moved_resources(&self) -> Vec<u32> {
        (0..self.from.resources())
            .filter(|&r| self.from.owner(r) != self.to.owner(r))
            .collect()
    }

    pub fn is_structural(&self, class: StructuralClass) -> bool {
        structural_holds(&self.from, &self.to, class)
    }

    pub fn is_rational(&self, class: RationalityClass, setting: &ResourceSetting) -> Result<bool> {
        let before = setting.values(&self.from)?;
        let after = setting.values(&self.to)?;
        Ok(rationality_holds(
            class,
            &before,
            &after,
            &self.involved_agents(),
        ))
    }
}

impl fmt::Display for Deal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

fn involved(from: &Allocation, to: &Allocation) -> Vec<usize> {
    (0..from.agents())
        .filter(|&i| from.bundle(i) != to.bundle(i))
        .collect()
}

/// Shape restriction on a deal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructuralClass {
    /// One resource moves between two agents.
    O,
    /// Two agents exchange one resource each.
    Swap,
    /// Between two and `k` agents change their bundles.
    Mk(usize),
    Unrestricted,
}

impl StructuralClass {
    pub fn mk(k: usize) -> Result<StructuralClass> {
        if k < 2 {
            return Err(Error::Parameter(format!("M(k) needs k >= 2, got {k}")));
        }
        Ok(StructuralClass::Mk(k))
    }

    pub fn name(self) -> String {
        match self {
            StructuralClass::O => "O".into(),
            StructuralClass::Swap => "swap".into(),
            StructuralClass::Mk(k) => format!("M{k}"),
            StructuralClass::Unrestricted => "any".into(),
        }
    }
}

impl fmt::Display for StructuralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for StructuralClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<StructuralClass> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "o" => Ok(StructuralClass::O),
            "swap" | "s" => Ok(StructuralClass::Swap),
            "any" | "unrestricted" => Ok(StructuralClass::Unrestricted),
            _ => {
                let digits = lower
                    .strip_prefix("m(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| lower.strip_prefix('m'))
                    .ok_or_else(|| Error::Parse(format!("unknown structural class {s:?}")))?;
                let k = digits
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("unknown structural class {s:?}")))?;
                StructuralClass::mk(k)
            }
        }
    }
}

/// Rationality condition on a deal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RationalityClass {
    /// Utilitarian welfare strictly rises.
    IR,
    /// Nobody loses and somebody gains.
    CooperativelyRational,
    /// The least utility among the involved agents strictly rises.
    Equitable,
    /// Two agents, same total, strictly smaller gap.
    PigouDalton,
    None,
}

impl RationalityClass {
    pub fn name(self) -> &'static str {
        match self {
            RationalityClass::IR => "IR",
            RationalityClass::CooperativelyRational => "CR",
            RationalityClass::Equitable => "equitable",
            RationalityClass::PigouDalton => "pigou-dalton",
            RationalityClass::None => "none",
        }
    }
}

impl fmt::Display for RationalityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RationalityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<RationalityClass> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ir" => Ok(RationalityClass::IR),
            "cr" | "cooperative" => Ok(RationalityClass::CooperativelyRational),
            "equitable" | "eq" => Ok(RationalityClass::Equitable),
            "pigou-dalton" | "pd" | "pigoudalton" => Ok(RationalityClass::PigouDalton),
            "none" => Ok(RationalityClass::None),
            _ => Err(Error::Parse(format!("unknown rationality class {s:?}"))),
        }
    }
}

/// Structural test on a pair of allocations; `false` when they are equal.
pub fn structural_holds(from: &Allocation, to: &Allocation, class: StructuralClass) -> bool {
    let agents = involved(from, to);
    if agents.is_empty() {
        return false;
    }
    debug_assert_eq!(
        agents.iter().fold(0u64, |a, &i| a | from.bundle(i).0),
        agents.iter().fold(0u64, |a, &i| a | to.bundle(i).0),
    );
    match class {
        StructuralClass::Unrestricted => true,
        StructuralClass::Mk(k) => agents.len() >= 2 && agents.len() <= k,
        StructuralClass::O | StructuralClass::Swap => {
            if agents.len() != 2 {
                return false;
            }
            let (i, j) = (agents[0], agents[1]);
            let lost_i = from.bundle(i).difference(to.bundle(i)).len();
            let gained_i = to.bundle(i).difference(from.bundle(i)).len();
            let lost_j = from.bundle(j).difference(to.bundle(j)).len();
            let gained_j = to.bundle(j).difference(from.bundle(j)).len();
            if class == StructuralClass::O {
                lost_i + gained_i == 1 && lost_j + gained_j == 1
            } else {
                lost_i == 1 && gained_i == 1 && lost_j == 1 && gained_j == 1
            }
        }
    }
}

/// Rationality test given each agent's value before and after.
pub fn rationality_holds(
    class: RationalityClass,
    before: &[Rational],
    after: &[Rational],
    involved: &[usize],
) -> bool {
    match class {
        RationalityClass::None => true,
        RationalityClass::IR => {
            let b: Rational = before.iter().sum();
            let a: Rational = after.iter().sum();
            a > b
        }
        RationalityClass::CooperativelyRational => {
            before.iter().zip(after).all(|(b, a)| a >= b)
                && before.iter().zip(after).any(|(b, a)| a > b)
        }
        RationalityClass::Equitable => {
            if involved.is_empty() {
                return false;
            }
            let b = involved.iter().map(|&i| &before[i]).min();
            let a = involved.iter().map(|&i| &after[i]).min();
            a > b
        }
        RationalityClass::PigouDalton => {
            if involved.len() != 2 {
                return false;
            }
            let (i, j) = (involved[0], involved[1]);
            before[i].clone() + &before[j] == after[i].clone() + &after[j]
                && (after[i].clone() - &after[j]).abs() < (before[i].clone() - &before[j]).abs()
        }
    }
}
