//! Certificates that an expected path is the only class path from its
//! first allocation, and per-claim checking of constructed instances.

use num_traits::ToPrimitive;

use super::{shortest_path, structural_neighbors, AllocationSpace, Evaluator, Outcome, PathQuery};
use crate::constructions::{Claim, ConstructedInstance};
use crate::deal::{structural_holds, Deal, RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::model::{monotonicity_witness, Allocation, Bundle, Rational, UtilitySpec};

/// Settings with at most this many allocations are scanned exhaustively.
pub const FULL_SCAN_LIMIT: usize = 1 << 12;

const NEIGHBOR_CAP: usize = 1 << 20;
const SUPPORT_CAP: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// Every allocation of the setting was tested against every on-path
    /// allocation.
    FullScan,
    /// Every structural neighbour of every on-path allocation was tested.
    NeighborEnumeration,
    /// Only allocations built from table entries were tested; the rest are
    /// excluded by a value bound.
    SupportScan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: ScanMode,
    /// Candidate deals examined.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// The step leaving position `index` does not satisfy the classes.
    StepFails { index: usize },
    /// Position `index` admits a class deal other than the next step.
    ExtraSuccessor { index: usize, deal: Deal },
    /// Two non-consecutive positions are one structural deal apart.
    Shortcut { from: usize, to: usize },
    /// The path revisits an allocation.
    Repeat { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniqueVerdict {
    Certified(Certificate),
    Refuted(Counterexample),
    /// No scan mode applies within its limits.
    Undecided(String),
}

impl UniqueVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, UniqueVerdict::Certified(_))
    }
}

/// Checks that every step of the expected path satisfies the classes, that
/// no two non-consecutive positions are one structural deal apart, and
/// that each non-final position has exactly one class-satisfying
/// successor.
pub fn verify_unique_path(inst: &ConstructedInstance) -> Result<UniqueVerdict> {
    let path = &inst.expected_path;
    if path.len() < 2 {
        return Err(Error::MalformedPath("path needs at least one deal".into()));
    }
    for p in path {
        inst.setting.check(p)?;
    }
    if let Some(index) = inst.first_bad_step()? {
        return Ok(UniqueVerdict::Refuted(Counterexample::StepFails { index }));
    }
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            if path[i] == path[j] {
                return Ok(UniqueVerdict::Refuted(Counterexample::Repeat {
                    first: i,
                    second: j,
                }));
            }
            if j >= i + 2 && structural_holds(&path[i], &path[j], inst.structural) {
                return Ok(UniqueVerdict::Refuted(Counterexample::Shortcut {
                    from: i,
                    to: j,
                }));
            }
        }
    }
    if let Ok(space) = AllocationSpace::new(&inst.setting, FULL_SCAN_LIMIT) {
        return Ok(full_scan(inst, &space));
    }
    match neighbor_scan(inst)? {
        Some(v) => Ok(v),
        None => support_scan(inst),
    }
}

fn extra(index: usize, from: &Allocation, to: &Allocation) -> UniqueVerdict {
    UniqueVerdict::Refuted(Counterexample::ExtraSuccessor {
        index,
        deal: Deal::new(from.clone(), to.clone()).expect("distinct allocations"),
    })
}

fn full_scan(inst: &ConstructedInstance, space: &AllocationSpace) -> UniqueVerdict {
    let path = &inst.expected_path;
    let mut checked = 0;
    for (index, w) in path.windows(2).enumerate() {
        let here = space.index_of(&w[0]);
        for q in 0..space.size() {
            if q == here {
                continue;
            }
            checked += 1;
            let cand = space.allocation(q);
            if cand != w[1]
                && structural_holds(&w[0], &cand, inst.structural)
                && space.rational(inst.rationality, here, q)
            {
                return extra(index, &w[0], &cand);
            }
        }
    }
    UniqueVerdict::Certified(Certificate {
        mode: ScanMode::FullScan,
        checked,
    })
}

/// `None` when some neighbourhood is too large to enumerate.
fn neighbor_scan(inst: &ConstructedInstance) -> Result<Option<UniqueVerdict>> {
    let path = &inst.expected_path;
    let mut eval = Evaluator::new(&inst.setting);
    let mut checked = 0;
    for (index, w) in path.windows(2).enumerate() {
        let neighbors = match structural_neighbors(&w[0], inst.structural, NEIGHBOR_CAP) {
            Ok(n) => n,
            Err(Error::CapExceeded(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        for cand in neighbors {
            checked += 1;
            if cand != w[1] && eval.rational(inst.rationality, &w[0], &cand) {
                return Ok(Some(extra(index, &w[0], &cand)));
            }
        }
    }
    Ok(Some(UniqueVerdict::Certified(Certificate {
        mode: ScanMode::NeighborEnumeration,
        checked,
    })))
}

fn support_scan(inst: &ConstructedInstance) -> Result<UniqueVerdict> {
    let path = &inst.expected_path;
    let setting = &inst.setting;
    let n = setting.agents();
    let mut supports: Vec<Vec<Bundle>> = Vec::with_capacity(n);
    let mut defaults = Vec::with_capacity(n);
    let mut maxima = Vec::with_capacity(n);
    for i in 0..n {
        let UtilitySpec::Table { entries, default } = setting.utility(i) else {
            return Ok(UniqueVerdict::Undecided(format!(
                "agent {i} has no table utility for a support scan"
            )));
        };
        supports.push(entries.keys().copied().collect());
        maxima.push(
            entries
                .values()
                .chain([default])
                .max()
                .expect("non-empty")
                .clone(),
        );
        defaults.push(default.clone());
    }
    let moving = &path[..path.len() - 1];
    for p in moving {
        for (i, support) in supports.iter().enumerate() {
            if !support.contains(&p.bundle(i)) {
                return Ok(UniqueVerdict::Undecided(format!(
                    "on-path bundle {} of agent {i} is off its table",
                    p.bundle(i).label(p.resources())
                )));
            }
        }
    }
    // Every allocation with an off-table bundle must fail the rationality
    // class from every moving position.
    let excluded = match inst.rationality {
        RationalityClass::IR => {
            let total: Rational = maxima.iter().sum();
            let off_best = (0..n)
                .map(|i| total.clone() - &maxima[i] + &defaults[i])
                .max()
                .expect("agents");
            moving
                .iter()
                .all(|p| setting.sigma_u(p).map(|v| off_best <= v).unwrap_or(false))
        }
        RationalityClass::CooperativelyRational => (0..n).all(|i| {
            moving
                .iter()
                .all(|p| defaults[i] < setting.utility(i).evaluate(p.bundle(i)))
        }),
        RationalityClass::Equitable => {
            let worst = defaults.iter().max().expect("agents");
            moving
                .iter()
                .all(|p| setting.sigma_e(p).map(|v| *worst < v).unwrap_or(false))
        }
        _ => false,
    };
    if !excluded {
        return Ok(UniqueVerdict::Undecided(
            "off-table allocations are not excluded by a value bound".into(),
        ));
    }
    let candidates = on_support_allocations(&supports, setting.resources())?;
    let mut eval = Evaluator::new(setting);
    let mut checked = 0;
    for (index, w) in path.windows(2).enumerate() {
        for cand in &candidates {
            checked += 1;
            if *cand != w[0]
                && *cand != w[1]
                && structural_holds(&w[0], cand, inst.structural)
                && eval.rational(inst.rationality, &w[0], cand)
            {
                return Ok(extra(index, &w[0], cand));
            }
        }
    }
    Ok(UniqueVerdict::Certified(Certificate {
        mode: ScanMode::SupportScan,
        checked,
    }))
}

/// Partitions in which every agent holds one of its table bundles.
fn on_support_allocations(supports: &[Vec<Bundle>], m: u32) -> Result<Vec<Allocation>> {
    fn go(
        supports: &[Vec<Bundle>],
        m: u32,
        used: Bundle,
        chosen: &mut Vec<Bundle>,
        out: &mut Vec<Allocation>,
    ) -> Result<()> {
        let i = chosen.len();
        if i == supports.len() {
            if used == Bundle::full(m) {
                out.push(Allocation::from_bundles(chosen.clone(), m)?);
                if out.len() > SUPPORT_CAP {
                    return Err(Error::CapExceeded(SUPPORT_CAP));
                }
            }
            return Ok(());
        }
        for &b in &supports[i] {
            if b.intersection(used).is_empty() {
                chosen.push(b);
                go(supports, m, used.union(b), chosen, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(supports, m, Bundle::EMPTY, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Outcome of one claim check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ClaimCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> ClaimCheck {
        ClaimCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn describe(v: &UniqueVerdict, m: u32) -> String {
    match v {
        UniqueVerdict::Certified(c) => {
            format!("certified by {:?} ({} candidates)", c.mode, c.checked)
        }
        UniqueVerdict::Refuted(Counterexample::ExtraSuccessor { index, deal }) => format!(
            "extra successor at position {index}: {} -> {}",
            deal.from(),
            deal.to()
        ),
        UniqueVerdict::Refuted(c) => format!("{c:?}"),
        UniqueVerdict::Undecided(why) => format!("undecided in {m} resources: {why}"),
    }
}

/// Checks every claim of an instance. The first entry, present whenever
/// claims are, confirms that the expected path itself conforms.
pub fn verify_claims(inst: &ConstructedInstance) -> Result<Vec<ClaimCheck>> {
    let mut report = Vec::new();
    if inst.claims.is_empty() {
        return Ok(report);
    }
    let m = inst.setting.resources();
    let bad = inst.first_bad_step()?;
    let deal = inst.designated_deal()?;
    let deal_ok = deal.is_rational(inst.rationality, &inst.setting)?;
    report.push(ClaimCheck::new(
        "path-conformance",
        bad.is_none() && deal_ok,
        match bad {
            Some(i) => format!("step {i} breaks {} / {}", inst.structural, inst.rationality),
            None if !deal_ok => format!("designated deal is not {}", inst.rationality),
            None => format!("{} deals conform", inst.path_length()),
        },
    ));
    let mut verdict: Option<UniqueVerdict> = None;
    let mut unique = |inst: &ConstructedInstance| -> Result<UniqueVerdict> {
        if verdict.is_none() {
            verdict = Some(verify_unique_path(inst)?);
        }
        Ok(verdict.clone().expect("just set"))
    };
    for &claim in &inst.claims {
        let check = match claim {
            Claim::UniquePath => {
                let v = unique(inst)?;
                ClaimCheck::new(claim.name(), v.is_certified(), describe(&v, m))
            }
            Claim::MonotoneUtilities => {
                let mut failures = Vec::new();
                for (i, u) in inst.setting.utilities().iter().enumerate() {
                    if let Some((s, t)) = monotonicity_witness(u, m)? {
                        failures.push(format!(
                            "agent {i}: u({}) = {} > u({}) = {}",
                            s.label(m),
                            u.evaluate(s),
                            t.label(m),
                            u.evaluate(t)
                        ));
                    }
                }
                let passed = failures.is_empty();
                let detail = if passed {
                    "all utilities monotone".to_string()
                } else {
                    failures.join("; ")
                };
                ClaimCheck::new(claim.name(), passed, detail)
            }
            Claim::LengthFormula => length_check(inst, &mut unique)?,
            Claim::NoShorterClassPath(class) => no_shorter(inst, class, &mut unique)?,
        };
        report.push(check);
    }
    Ok(report)
}

fn length_check(
    inst: &ConstructedInstance,
    unique: &mut dyn FnMut(&ConstructedInstance) -> Result<UniqueVerdict>,
) -> Result<ClaimCheck> {
    let name = Claim::LengthFormula.name();
    let len = inst.path_length();
    let mut problems = Vec::new();
    if let Some(f) = inst.formula_length {
        if f != len {
            problems.push(format!("formula gives {f}, path has {len}"));
        }
    }
    if let Some(bound) = &inst.bound {
        let need = bound.ceil().to_integer().to_i64().unwrap_or(i64::MAX);
        if (len as i64) < need {
            problems.push(format!("length {len} below bound {bound}"));
        }
    }
    // A uniqueness certificate pins the shortest length; otherwise search.
    let via = if unique(inst)?.is_certified() {
        format!("shortest length {len} via uniqueness certificate")
    } else {
        let deal = inst.designated_deal()?;
        let q = PathQuery::new(
            &inst.setting,
            deal.from().clone(),
            deal.to().clone(),
            inst.structural,
            inst.rationality,
        );
        let r = shortest_path(&q)?;
        match r.outcome {
            Outcome::Found(p) if p.len() - 1 == len => format!("shortest length {len} by search"),
            Outcome::Found(p) => {
                problems.push(format!(
                    "a shorter class path of length {} exists",
                    p.len() - 1
                ));
                String::new()
            }
            Outcome::Unreachable => {
                problems.push("designated deal unreachable".into());
                String::new()
            }
            Outcome::CapExceeded => {
                problems.push("search hit its node cap".into());
                String::new()
            }
        }
    };
    let passed = problems.is_empty();
    Ok(ClaimCheck::new(
        name,
        passed,
        if passed { via } else { problems.join("; ") },
    ))
}

/// Every deal of class `a` is also a deal of class `b`.
fn narrower(a: StructuralClass, b: StructuralClass) -> bool {
    use StructuralClass::*;
    match (a, b) {
        (_, Unrestricted) => true,
        (O, O) | (Swap, Swap) => true,
        (O | Swap, Mk(_)) => true,
        (Mk(x), Mk(y)) => x <= y,
        _ => false,
    }
}

fn no_shorter(
    inst: &ConstructedInstance,
    class: StructuralClass,
    unique: &mut dyn FnMut(&ConstructedInstance) -> Result<UniqueVerdict>,
) -> Result<ClaimCheck> {
    let name = Claim::NoShorterClassPath(class).name();
    let deal = inst.designated_deal()?;
    let start = deal.from();
    let q = PathQuery::new(
        &inst.setting,
        start.clone(),
        deal.to().clone(),
        class,
        inst.rationality,
    );
    let mut eval = Evaluator::new(&inst.setting);
    if let Ok(neighbors) = structural_neighbors(start, class, NEIGHBOR_CAP) {
        let count = neighbors.len();
        if !neighbors
            .iter()
            .any(|n| eval.rational(inst.rationality, start, n))
        {
            return Ok(ClaimCheck::new(
                name,
                true,
                format!(
                    "none of {count} {class} neighbours of the start is {}",
                    inst.rationality
                ),
            ));
        }
    }
    // A narrower-class path would be a second path of the certified class,
    // unless the certified path itself never leaves the narrower class.
    let path = &inst.expected_path;
    if narrower(class, inst.structural) && unique(inst)?.is_certified() {
        if let Some(i) = path
            .windows(2)
            .position(|w| !structural_holds(&w[0], &w[1], class))
        {
            return Ok(ClaimCheck::new(
                name,
                true,
                format!(
                    "the unique {} path is certified and its step {i} is not {class}",
                    inst.structural
                ),
            ));
        }
    }
    let r = shortest_path(&q)?;
    Ok(match r.outcome {
        Outcome::Unreachable => ClaimCheck::new(
            name,
            true,
            format!("unreachable after exploring {} allocations", r.explored),
        ),
        Outcome::Found(p) => ClaimCheck::new(
            name,
            false,
            format!("{class} path of length {} exists", p.len() - 1),
        ),
        Outcome::CapExceeded => ClaimCheck::new(name, false, "search hit its node cap"),
    })
}
