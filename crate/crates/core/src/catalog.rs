//! Plain-text snake and cycle catalogs: a header line `snake <dim>` or
//! `cycle <dim>`, then one binary label per line. `#` starts a comment.
//!
//! ```
//! use contractnet::catalog::{parse_catalog, Code};
//!
//! let text = "# the 3-cube snake\nsnake 3\n000\n001\n101\n111\n110\n";
//! match parse_catalog(text).unwrap() {
//!     Code::Snake(s) => assert_eq!(s.len(), 4),
//!     Code::Cycle(_) => unreachable!(),
//! }
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::hypercube::{HamCycle, SnakePath};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Code {
    Snake(SnakePath),
    Cycle(HamCycle),
}

pub fn parse_catalog(text: &str) -> Result<Code> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty catalog".into()))?;
    let (kind, dim) = header
        .split_once(char::is_whitespace)
        .ok_or_else(|| Error::Parse(format!("bad catalog header {header:?}")))?;
    let dim: u32 = dim
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension in header {header:?}")))?;
    let labels: Vec<&str> = lines.collect();
    if let Some(l) = labels.iter().find(|l| l.len() != dim as usize) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: l.len() as u32,
        });
    }
    match kind {
        "snake" => Ok(Code::Snake(SnakePath::parse(&labels)?)),
        "cycle" => Ok(Code::Cycle(HamCycle::parse(&labels)?)),
        other => Err(Error::Parse(format!("unknown catalog kind {other:?}"))),
    }
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Code> {
    parse_catalog(&std::fs::read_to_string(path)?)
}

fn render(kind: &str, dim: u32, labels: Vec<String>) -> String {
    let mut out = format!("{kind} {dim}\n");
    for l in labels {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

pub fn render_snake(s: &SnakePath) -> String {
    render("snake", s.dimension(), s.label_strings())
}

pub fn render_cycle(c: &HamCycle) -> String {
    render("cycle", c.dimension(), c.label_strings())
}
