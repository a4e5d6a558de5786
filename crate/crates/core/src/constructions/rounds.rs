//! `k`-agent round schedules of `M(k−1)` contracts.
//!
//! The resources split into one block of `s` resources per agent pair
//! `{i, j}`; only `i` and `j` ever hold resources of that block. Within a
//! round, stage `p` leaves agent `p` out and every other pair moves one
//! step along a Hamiltonian cycle of the `s`-cube: the block's initial
//! owner follows the cycle itself, its partner the complementary cycle.
//! The number of steps a pair has taken is its cube position `χ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{params, Claim, ConstructedInstance};
use crate::deal::{RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::hypercube::HamCycle;
use crate::model::{int, Allocation, Bundle, Rational, ResourceSetting, UtilitySpec};

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::Parameter(format!(
            "round schedules need k >= 3, got {k}"
        )));
    }
    Ok(())
}

/// `b[i][j]` is true when agent `i` starts with the block of `{i, j}`.
/// The recurrence `b_{i,i} = false`, `b_{i,j} = ¬b_{i,j−1}` for `i < j`,
/// `b_{i,j} = ¬b_{j,i}` for `i > j` resolves to "`j − i` is odd" above
/// the diagonal.
pub fn b_matrix(k: usize) -> Result<Vec<Vec<bool>>> {
    check_k(k)?;
    let mut b = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            b[i][j] = !b[i][j - 1];
        }
    }
    for i in 0..k {
        for j in 0..i {
            b[i][j] = !b[j][i];
        }
    }
    Ok(b)
}

/// Lexicographic index of the pair `{i, j}` among all pairs of `0..k`.
pub fn pair_index(i: usize, j: usize, k: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
}

/// `min { qk : q(k−2) ≡ 0 (mod 2^s) }`.
pub fn reappearance_r(k: usize, s: u32) -> Result<usize> {
    check_k(k)?;
    if !(2..=40).contains(&s) {
        return Err(Error::Parameter(format!(
            "block size s must be in 2..=40, got {s}"
        )));
    }
    let modulus = 1u64 << s;
    let q = modulus / modulus.gcd(&(k as u64 - 2));
    Ok(q as usize * k)
}

/// Position in the schedule: round `x`, stage `p`, and the symmetric table
/// of cube positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeState {
    pub round: usize,
    pub stage: usize,
    pub chi: Vec<Vec<usize>>,
}

impl CubeState {
    fn initial(k: usize) -> CubeState {
        CubeState {
            round: 0,
            stage: k - 1,
            chi: vec![vec![0; k]; k],
        }
    }

    fn next(&self) -> CubeState {
        let k = self.chi.len();
        let (round, stage) = if self.stage == k - 1 {
            (self.round + 1, 0)
        } else {
            (self.round, self.stage + 1)
        };
        let mut chi = self.chi.clone();
        for (i, j) in pairs(k) {
            if stage != i && stage != j {
                chi[i][j] += 1;
                chi[j][i] += 1;
            }
        }
        CubeState { round, stage, chi }
    }

    /// `Σ_{j≠i} χ(i, j)`.
    pub fn position_sum(&self, i: usize) -> usize {
        self.chi[i].iter().sum()
    }
}

/// The generated schedule and everything needed to interpret it.
#[derive(Clone, Debug)]
pub struct RoundPath {
    pub k: usize,
    pub s: u32,
    pub cycle: HamCycle,
    pub b: Vec<Vec<bool>>,
    pub states: Vec<CubeState>,
    pub allocations: Vec<Allocation>,
    /// Why generation stopped.
    pub stopped_by: StopReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// One more step would let some agent return to an earlier bundle.
    Shortcut,
    Cap,
}

impl RoundPath {
    pub fn resources(&self) -> u32 {
        self.s * (self.k * (self.k - 1) / 2) as u32
    }

    /// Agent `i`'s holding in the block of `{i, j}` at position `d`
    /// (0-based), as an `s`-bit label.
    pub fn share(&self, d: usize, i: usize, j: usize) -> Bundle {
        block_share(
            &self.allocations[d].bundle(i),
            pair_index(i, j, self.k),
            self.s,
        )
    }
}

fn block_share(b: &Bundle, block: usize, s: u32) -> Bundle {
    Bundle((b.0 >> (block as u32 * s)) & Bundle::full(s).0)
}

fn allocation_of(state: &CubeState, b: &[Vec<bool>], cycle: &HamCycle, s: u32) -> Allocation {
    let k = b.len();
    let m = s * (k * (k - 1) / 2) as u32;
    let mut bundles = vec![Bundle::EMPTY; k];
    for (i, j) in pairs(k) {
        let (owner, other) = if b[i][j] { (i, j) } else { (j, i) };
        let v = cycle.at(state.chi[i][j]);
        let shift = pair_index(i, j, k) as u32 * s;
        bundles[owner].0 |= v.0 << shift;
        bundles[other].0 |= v.complement(s).0 << shift;
    }
    Allocation::from_bundles(bundles, m).expect("blocks partition the resources")
}

/// The first `deals + 1` allocations of the round schedule with no stop
/// rule applied.
pub fn schedule_allocations(
    k: usize,
    s: u32,
    cycle: &HamCycle,
    deals: usize,
) -> Result<Vec<Allocation>> {
    let b = b_matrix(k)?;
    if cycle.dimension() != s || cycle.at(0) != Bundle::full(s) {
        return Err(Error::Parameter(
            "the cycle must be an s-cube cycle from 1^s".into(),
        ));
    }
    if s as usize * k * (k - 1) / 2 > crate::model::MAX_RESOURCES as usize {
        return Err(Error::ResourceLimit(format!(
            "{} resources",
            s as usize * k * (k - 1) / 2
        )));
    }
    let mut state = CubeState::initial(k);
    let mut out = vec![allocation_of(&state, &b, cycle, s)];
    for _ in 0..deals {
        state = state.next();
        out.push(allocation_of(&state, &b, cycle, s));
    }
    Ok(out)
}

/// Generates the schedule from `Q^{0,k−1}` until a further step would let
/// some agent return to a bundle it held two or more steps earlier (an
/// `M(k−1)` shortcut), or until `cap` deals.
///
/// The last agent sits out the last stage of every round, so it is back at
/// its initial bundle one step before the round boundary at which all cube
/// positions wrap; the uncapped schedule therefore has `r − 2` deals.
///
/// No single agent repeats, but for odd `k` the long schedule lets several
/// agents jump ahead to later holdings in one deal, so uniqueness can fail;
/// a cap of `2^s` deals kept it in every case tried. The verifier decides
/// per instance.
pub fn build_mk_path(k: usize, s: u32, cycle: &HamCycle, cap: Option<usize>) -> Result<RoundPath> {
    let b = b_matrix(k)?;
    let r = reappearance_r(k, s)?;
    if cycle.dimension() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            found: cycle.dimension(),
        });
    }
    if cycle.at(0) != Bundle::full(s) {
        return Err(Error::Parameter("the cycle must start at 1^s".into()));
    }
    let blocks = k * (k - 1) / 2;
    if s as usize * blocks > crate::model::MAX_RESOURCES as usize {
        return Err(Error::ResourceLimit(format!(
            "{} resources",
            s as usize * blocks
        )));
    }
    let max_deals = cap.map_or(r, |c| c.min(r));
    let mut states = vec![CubeState::initial(k)];
    let mut allocations = vec![allocation_of(&states[0], &b, cycle, s)];
    let mut stopped_by = StopReason::Cap;
    while allocations.len() - 1 < max_deals {
        let next_state = states.last().expect("non-empty").next();
        let next = allocation_of(&next_state, &b, cycle, s);
        let earlier = &allocations[..allocations.len() - 1];
        let repeats = earlier
            .iter()
            .any(|p| (0..k).any(|i| p.bundle(i) == next.bundle(i)));
        if repeats {
            stopped_by = StopReason::Shortcut;
            break;
        }
        states.push(next_state);
        allocations.push(next);
    }
    Ok(RoundPath {
        k,
        s,
        cycle: cycle.clone(),
        b,
        states,
        allocations,
        stopped_by,
    })
}

/// `−2^{km}`.
fn off_path_value(k: usize, m: u32) -> Rational {
    -Rational::from_integer(BigInt::one() << (k * m as usize))
}

/// Per-agent tables over the bundles the schedule visits.
fn path_tables(
    path: &RoundPath,
    default: Rational,
    value: impl Fn(&CubeState, usize) -> Rational,
) -> Result<Vec<UtilitySpec>> {
    let mut tables = vec![std::collections::BTreeMap::new(); path.k];
    for (state, alloc) in path.states.iter().zip(&path.allocations) {
        for (i, table) in tables.iter_mut().enumerate() {
            let v = value(state, i);
            if let Some(old) = table.insert(alloc.bundle(i), v.clone()) {
                if old != v {
                    return Err(Error::MalformedPath(format!(
                        "agent {i} revisits bundle {} with values {old} and {v}",
                        alloc.bundle(i).label(path.resources())
                    )));
                }
            }
        }
    }
    Ok(tables
        .into_iter()
        .map(|entries| UtilitySpec::Table {
            entries,
            default: default.clone(),
        })
        .collect())
}

fn round_instance(
    construction: &str,
    path: RoundPath,
    utilities: Vec<UtilitySpec>,
    rationality: RationalityClass,
    variant: Option<&str>,
) -> Result<ConstructedInstance> {
    let k = path.k;
    let m = path.resources();
    let mut p = params([
        ("k", k.to_string()),
        ("s", path.s.to_string()),
        ("m", m.to_string()),
        ("cycle", path.cycle.label_strings().join(",")),
    ]);
    if let Some(v) = variant {
        p.insert("variant".into(), v.into());
    }
    let mut claims = vec![Claim::UniquePath, Claim::LengthFormula];
    if k >= 4 {
        claims.push(Claim::NoShorterClassPath(StructuralClass::Mk(k - 2)));
    }
    let mut notes = Vec::new();
    if path.stopped_by == StopReason::Cap {
        notes.push("path truncated by the step cap".into());
    }
    Ok(ConstructedInstance {
        construction: construction.into(),
        params: p,
        setting: ResourceSetting::new(m, utilities)?,
        formula_length: Some(path.allocations.len() - 1),
        expected_path: path.allocations,
        structural: StructuralClass::Mk(k - 1),
        rationality,
        claims,
        bound: Some(Rational::from_integer(BigInt::one() << path.s) - int(1)),
        notes,
    })
}

/// IR instance: `u_i` is the sum of agent `i`'s cube positions on the
/// schedule and `−2^{km}` elsewhere.
pub fn build_thm6(
    k: usize,
    s: u32,
    cycle: &HamCycle,
    cap: Option<usize>,
) -> Result<ConstructedInstance> {
    let path = build_mk_path(k, s, cycle, cap)?;
    let default = off_path_value(k, path.resources());
    let utilities = path_tables(&path, default, |st, i| int(st.position_sum(i) as i64))?;
    round_instance("thm6", path, utilities, RationalityClass::IR, None)
}

/// Value of agent `i` at stage `(x, p)` in the equitable variant.
fn equitable_value(x: usize, p: usize, i: usize, k: usize) -> i64 {
    let (x, p, i, k) = (x as i64, p as i64, i as i64, k as i64);
    let k2 = k * k;
    if p == k - 1 {
        x * k2 + k - i
    } else if i == 0 {
        (x - 1) * k2 + k + p
    } else if p < i - 1 {
        (x - 1) * k2 + k - i + p + 1
    } else if p <= i {
        x * k2 + 1
    } else {
        x * k2 + 1 + p - i
    }
}

/// `CR` reuses the IR utilities; `Equitable` installs the staged
/// piecewise utility with default `−1`.
pub fn build_cor3(
    k: usize,
    s: u32,
    cycle: &HamCycle,
    variant: RationalityClass,
    cap: Option<usize>,
) -> Result<ConstructedInstance> {
    let path = build_mk_path(k, s, cycle, cap)?;
    let utilities = match variant {
        RationalityClass::CooperativelyRational => {
            let default = off_path_value(k, path.resources());
            path_tables(&path, default, |st, i| int(st.position_sum(i) as i64))?
        }
        RationalityClass::Equitable => path_tables(&path, int(-1), |st, i| {
            int(equitable_value(st.round, st.stage, i, k))
        })?,
        other => {
            return Err(Error::Parameter(format!(
                "variant {other} is not one of CR, equitable"
            )))
        }
    };
    round_instance("cor3", path, utilities, variant, Some(variant.name()))
}

/// Doubles each block: alongside its share `α` of the block of `{i, j}`,
/// agent `i` takes the complement `ᾱ` in a fresh copy of that block.
/// Every bundle then has exactly `(k−1)s` resources.
pub fn multi_transform(path: &[Allocation], k: usize, s: u32) -> Result<Vec<Allocation>> {
    check_k(k)?;
    let blocks = k * (k - 1) / 2;
    let m = s as usize * blocks;
    if 2 * m > crate::model::MAX_RESOURCES as usize {
        return Err(Error::ResourceLimit(format!("{} resources", 2 * m)));
    }
    path.iter()
        .enumerate()
        .map(|(d, p)| {
            if p.agents() != k || p.resources() as usize != m {
                return Err(Error::MalformedPath(format!(
                    "allocation {} has the wrong shape",
                    d + 1
                )));
            }
            let mut bundles = vec![Bundle::EMPTY; k];
            for i in 0..k {
                for block in 0..blocks {
                    let share = block_share(&p.bundle(i), block, s);
                    let outside = (0..k).all(|j| j == i || pair_index(i, j, k) != block);
                    if outside && !share.is_empty() {
                        return Err(Error::MalformedPath(format!(
                            "agent {i} holds resources of a block it is not part of at {}",
                            d + 1
                        )));
                    }
                    if outside {
                        continue;
                    }
                    let shift = block as u32 * s;
                    bundles[i].0 |= share.0 << shift;
                    bundles[i].0 |= share.complement(s).0 << (shift + m as u32);
                }
            }
            Allocation::from_bundles(bundles, 2 * m as u32)
        })
        .collect()
}

/// Structural-only instance along the doubled schedule.
pub fn build_multi(
    k: usize,
    s: u32,
    cycle: &HamCycle,
    cap: Option<usize>,
) -> Result<ConstructedInstance> {
    let path = build_mk_path(k, s, cycle, cap)?;
    let doubled = multi_transform(&path.allocations, k, s)?;
    let m = 2 * path.resources();
    Ok(ConstructedInstance {
        construction: "multi".into(),
        params: params([
            ("k", k.to_string()),
            ("s", s.to_string()),
            ("m", m.to_string()),
            ("cycle", path.cycle.label_strings().join(",")),
        ]),
        setting: ResourceSetting::new(m, vec![UtilitySpec::zero(); k])?,
        formula_length: Some(doubled.len() - 1),
        expected_path: doubled,
        structural: StructuralClass::Mk(k - 1),
        rationality: RationalityClass::None,
        claims: Vec::new(),
        bound: None,
        notes: vec!["no utility family: only the path structure is checked".into()],
    })
}
