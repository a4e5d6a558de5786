//! Worst-case instances: settings whose unique rational contract path is
//! exponentially long.
//!
//! * [`snake`] — two agents, O-contracts along a snake in the `m`-cube.
//! * [`ext`] — monotone variants over `2s` resources built from a snake in
//!   the `s`-cube.
//! * [`rounds`] — `k` agents trading in rounds of `M(k−1)` contracts along
//!   complementary Hamiltonian cycles.

pub mod ext;
pub mod rounds;
pub mod snake;

use std::collections::BTreeMap;
use std::fmt;

use crate::deal::{rationality_holds, structural_holds, Deal, RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::model::{Allocation, Rational, ResourceSetting};

pub use ext::{build_thm4, build_thm5, classify_labels, ext_transform, LabelClass, Parity};
pub use rounds::{
    b_matrix, build_cor3, build_mk_path, build_multi, build_thm6, multi_transform, reappearance_r,
    schedule_allocations, CubeState, RoundPath,
};
pub use snake::{build_cor1, build_cor2, build_thm3, snake_m4_instance};

/// A property a construction asserts about its instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// The expected path is the only class-satisfying path from its start.
    UniquePath,
    /// Every utility function is monotone.
    MonotoneUtilities,
    /// The expected path has the construction's formula length, which is
    /// also the shortest class path length and at least the bound.
    LengthFormula,
    /// No path of the given structural class (with the instance's
    /// rationality) realises the designated deal.
    NoShorterClassPath(StructuralClass),
}

impl Claim {
    pub fn name(self) -> String {
        match self {
            Claim::UniquePath => "unique-path".into(),
            Claim::MonotoneUtilities => "monotone-utilities".into(),
            Claim::LengthFormula => "length-formula".into(),
            Claim::NoShorterClassPath(c) => format!("no-shorter-class-path:{c}"),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Claim> {
        match s.trim() {
            "unique-path" => Ok(Claim::UniquePath),
            "monotone-utilities" => Ok(Claim::MonotoneUtilities),
            "length-formula" => Ok(Claim::LengthFormula),
            other => match other.strip_prefix("no-shorter-class-path:") {
                Some(c) => Ok(Claim::NoShorterClassPath(c.parse()?)),
                None => Err(Error::Parse(format!("unknown claim {other:?}"))),
            },
        }
    }
}

/// A generated setting together with the path it is built around.
#[derive(Clone, Debug)]
pub struct ConstructedInstance {
    pub construction: String,
    pub params: BTreeMap<String, String>,
    pub setting: ResourceSetting,
    pub expected_path: Vec<Allocation>,
    pub structural: StructuralClass,
    pub rationality: RationalityClass,
    pub claims: Vec<Claim>,
    /// Number of deals the construction's length formula predicts.
    pub formula_length: Option<usize>,
    /// Published lower bound on the path length, when it applies.
    pub bound: Option<Rational>,
    pub notes: Vec<String>,
}

impl ConstructedInstance {
    /// First and last allocation of the expected path.
    pub fn designated_deal(&self) -> Result<Deal> {
        let first = self
            .expected_path
            .first()
            .ok_or_else(|| Error::MalformedPath("empty expected path".into()))?;
        let last = self.expected_path.last().expect("non-empty");
        Deal::new(first.clone(), last.clone())
    }

    /// Number of deals on the expected path.
    pub fn path_length(&self) -> usize {
        self.expected_path.len().saturating_sub(1)
    }

    /// Index of the first step that breaks the instance's classes.
    pub fn first_bad_step(&self) -> Result<Option<usize>> {
        for (i, w) in self.expected_path.windows(2).enumerate() {
            if !self.step_holds(&w[0], &w[1])? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn step_holds(&self, from: &Allocation, to: &Allocation) -> Result<bool> {
        if !structural_holds(from, to, self.structural) {
            return Ok(false);
        }
        let before = self.setting.values(from)?;
        let after = self.setting.values(to)?;
        let involved: Vec<usize> = (0..from.agents())
            .filter(|&i| from.bundle(i) != to.bundle(i))
            .collect();
        Ok(rationality_holds(
            self.rationality,
            &before,
            &after,
            &involved,
        ))
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

pub(crate) fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
