//! JSON instance files. Rationals are `"p/q"` strings (or plain integers)
//! and bundles are binary labels, leftmost character first resource.
//!
//! ```
//! use contractnet::constructions::snake_m4_instance;
//! use contractnet::instance_file::InstanceFile;
//!
//! let file = InstanceFile::from_instance(&snake_m4_instance()).unwrap();
//! let text = file.to_json().unwrap();
//! assert_eq!(InstanceFile::from_json(&text).unwrap(), file);
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constructions::{Claim, ConstructedInstance};
use crate::deal::{RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::model::{
    format_rational, parse_rational, Allocation, Bundle, ResourceSetting, UtilitySpec,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UtilityEntry {
    Table {
        default: String,
        entries: BTreeMap<String, String>,
    },
    Additive {
        values: Vec<String>,
    },
    ZeroOne {
        ones: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DealEntry {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: u32,
    #[serde(default)]
    pub construction: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    pub agent_count: usize,
    pub resource_count: u32,
    pub resource_names: Vec<String>,
    pub utilities: Vec<UtilityEntry>,
    pub structural: String,
    pub rationality: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated_deal: Option<DealEntry>,
    #[serde(default)]
    pub expected_path: Vec<Vec<String>>,
    #[serde(default)]
    pub claims: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn utility_entry(u: &UtilitySpec, m: u32) -> Result<UtilityEntry> {
    Ok(match u {
        UtilitySpec::Additive { values } => UtilityEntry::Additive {
            values: values.iter().map(format_rational).collect(),
        },
        UtilitySpec::ZeroOne { ones } => UtilityEntry::ZeroOne {
            ones: ones.iter().map(|b| b.label(m)).collect(),
        },
        other => match other.materialize(m)? {
            UtilitySpec::Table { entries, default } => UtilityEntry::Table {
                default: format_rational(&default),
                entries: entries
                    .iter()
                    .map(|(b, v)| (b.label(m), format_rational(v)))
                    .collect(),
            },
            _ => unreachable!("materialize yields tables"),
        },
    })
}

fn label_of(s: &str, m: u32) -> Result<Bundle> {
    if s.len() != m as usize {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: s.len() as u32,
        });
    }
    Bundle::parse_label(s)
}

fn utility_spec(e: &UtilityEntry, m: u32) -> Result<UtilitySpec> {
    Ok(match e {
        UtilityEntry::Table { default, entries } => UtilitySpec::Table {
            default: parse_rational(default)?,
            entries: entries
                .iter()
                .map(|(b, v)| Ok((label_of(b, m)?, parse_rational(v)?)))
                .collect::<Result<_>>()?,
        },
        UtilityEntry::Additive { values } => {
            if values.len() != m as usize {
                return Err(Error::Parse(format!(
                    "additive utility lists {} values for {m} resources",
                    values.len()
                )));
            }
            UtilitySpec::Additive {
                values: values
                    .iter()
                    .map(|v| parse_rational(v))
                    .collect::<Result<_>>()?,
            }
        }
        UtilityEntry::ZeroOne { ones } => UtilitySpec::ZeroOne {
            ones: ones.iter().map(|b| label_of(b, m)).collect::<Result<_>>()?,
        },
    })
}

fn parse_allocation(labels: &[String], n: usize, m: u32) -> Result<Allocation> {
    if labels.len() != n {
        return Err(Error::Parse(format!(
            "allocation lists {} bundles for {n} agents",
            labels.len()
        )));
    }
    let bundles = labels
        .iter()
        .map(|l| label_of(l, m))
        .collect::<Result<Vec<_>>>()?;
    Allocation::from_bundles(bundles, m)
}

impl InstanceFile {
    /// Canonical file form; closed-form utilities become tables.
    pub fn from_instance(inst: &ConstructedInstance) -> Result<InstanceFile> {
        let m = inst.setting.resources();
        let designated_deal = inst.designated_deal().ok().map(|d| DealEntry {
            from: d.from().labels(),
            to: d.to().labels(),
        });
        Ok(InstanceFile {
            format_version: FORMAT_VERSION,
            construction: inst.construction.clone(),
            params: inst.params.clone(),
            agent_count: inst.setting.agents(),
            resource_count: m,
            resource_names: (1..=m).map(|r| format!("r{r}")).collect(),
            utilities: inst
                .setting
                .utilities()
                .iter()
                .map(|u| utility_entry(u, m))
                .collect::<Result<_>>()?,
            structural: inst.structural.name(),
            rationality: inst.rationality.name().to_string(),
            designated_deal,
            expected_path: inst.expected_path.iter().map(Allocation::labels).collect(),
            claims: inst.claims.iter().map(|c| c.name()).collect(),
            formula_length: inst.formula_length,
            bound: inst.bound.as_ref().map(format_rational),
            notes: inst.notes.clone(),
        })
    }

    pub fn to_instance(&self) -> Result<ConstructedInstance> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format version {}",
                self.format_version
            )));
        }
        let (n, m) = (self.agent_count, self.resource_count);
        if self.utilities.len() != n {
            return Err(Error::Parse(format!(
                "{} utilities for {n} agents",
                self.utilities.len()
            )));
        }
        if self.resource_names.len() != m as usize {
            return Err(Error::Parse(format!(
                "{} resource names for {m} resources",
                self.resource_names.len()
            )));
        }
        let utilities = self
            .utilities
            .iter()
            .map(|u| utility_spec(u, m))
            .collect::<Result<_>>()?;
        let setting = ResourceSetting::new(m, utilities)?;
        let expected_path = self
            .expected_path
            .iter()
            .map(|p| parse_allocation(p, n, m))
            .collect::<Result<Vec<_>>>()?;
        let structural: StructuralClass = self.structural.parse()?;
        let rationality: RationalityClass = self.rationality.parse()?;
        let claims = self
            .claims
            .iter()
            .map(|c| c.parse::<Claim>())
            .collect::<Result<Vec<_>>>()?;
        if let (Some(d), Some(first), Some(last)) = (
            &self.designated_deal,
            expected_path.first(),
            expected_path.last(),
        ) {
            if parse_allocation(&d.from, n, m)? != *first || parse_allocation(&d.to, n, m)? != *last
            {
                return Err(Error::MalformedPath(
                    "designated deal does not match the path endpoints".into(),
                ));
            }
        }
        Ok(ConstructedInstance {
            construction: self.construction.clone(),
            params: self.params.clone(),
            setting,
            expected_path,
            structural,
            rationality,
            claims,
            formula_length: self.formula_length,
            bound: self.bound.as_deref().map(parse_rational).transpose()?,
            notes: self.notes.clone(),
        })
    }

    /// The designated deal, from the explicit entry or the path endpoints.
    pub fn designated(&self) -> Result<Option<(Allocation, Allocation)>> {
        let (n, m) = (self.agent_count, self.resource_count);
        if let Some(d) = &self.designated_deal {
            return Ok(Some((
                parse_allocation(&d.from, n, m)?,
                parse_allocation(&d.to, n, m)?,
            )));
        }
        match (self.expected_path.first(), self.expected_path.last()) {
            (Some(a), Some(b)) if self.expected_path.len() > 1 => Ok(Some((
                parse_allocation(a, n, m)?,
                parse_allocation(b, n, m)?,
            ))),
            _ => Ok(None),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<InstanceFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<InstanceFile> {
        InstanceFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn store(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
