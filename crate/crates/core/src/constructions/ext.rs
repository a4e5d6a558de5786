//! Monotone instances over `2s` resources.
//!
//! A snake `α_1 … α_t` in the `s`-cube is doubled to `β_{2i−1} = α_i ᾱ_i`
//! (the first `s` resources hold `α_i`, the next `s` its complement) and
//! consecutive doubled labels are joined through the weight-`(s+1)` label
//! `β_{2i}` covering both. Every bundle on the resulting path has weight
//! `s` or `s+1`, which leaves room to make both utilities monotone.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{params, Claim, ConstructedInstance};
use crate::deal::{RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::hypercube::SnakePath;
use crate::model::{
    int, pow2, ratio, Allocation, Bundle, ClosedForm, Rational, ResourceSetting, UtilitySpec,
    ENUMERATION_LIMIT,
};

/// Class of a weight-`(s+1)` label relative to an ext path. Indices are
/// the 1-based `i` of `β_{2i}` (Good) or of `β_{2i−1}` (Digression).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LabelClass {
    Good(usize),
    Digression(usize),
    Inaccessible,
}

/// Whether the resource count is `2s` or `2s + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    /// One extra resource always held by the second agent.
    Odd,
}

fn double(a: Bundle, s: u32) -> Bundle {
    Bundle(a.0 | (a.complement(s).0 << s))
}

/// The interpolated doubling `β_1 … β_{2t−1}` of a snake.
pub fn ext_transform(snake: &SnakePath) -> Result<Vec<Bundle>> {
    let s = snake.dimension();
    if s < 2 {
        return Err(Error::InvalidSnake(
            "ext needs a snake of dimension >= 2".into(),
        ));
    }
    if 2 * s > crate::model::MAX_RESOURCES {
        return Err(Error::ResourceLimit(format!("2s = {} resources", 2 * s)));
    }
    let a = snake.labels();
    let mut out = Vec::with_capacity(2 * a.len() - 1);
    for i in 0..a.len() {
        out.push(double(a[i], s));
        if i + 1 < a.len() {
            let (cur, next) = (a[i], a[i + 1]);
            let joint = if cur.is_subset(next) {
                Bundle(next.0 | (cur.complement(s).0 << s))
            } else {
                Bundle(cur.0 | (next.complement(s).0 << s))
            };
            out.push(joint);
        }
    }
    Ok(out)
}

fn check_ext(ext: &[Bundle], s: u32) -> Result<()> {
    if ext.is_empty() || ext.len().is_multiple_of(2) {
        return Err(Error::MalformedPath(format!(
            "ext path must have odd length, got {}",
            ext.len()
        )));
    }
    for (j, b) in ext.iter().enumerate() {
        let want = if j % 2 == 0 { s } else { s + 1 };
        if b.len() != want || !b.is_subset(Bundle::full(2 * s)) {
            return Err(Error::MalformedPath(format!(
                "label {} at position {} should have weight {want}",
                b.label(2 * s),
                j + 1
            )));
        }
        if j > 0 && ext[j - 1].distance(*b) != 1 {
            return Err(Error::MalformedPath(format!(
                "positions {j} and {} are not adjacent",
                j + 1
            )));
        }
    }
    Ok(())
}

fn class_of(ext: &[Bundle], gamma: Bundle) -> LabelClass {
    let t = ext.len().div_ceil(2);
    if let Some(j) = ext.iter().position(|&b| b == gamma) {
        if j % 2 == 1 {
            return LabelClass::Good(j.div_ceil(2));
        }
    }
    for i in 1..t {
        if ext[2 * i - 2].is_subset(gamma) {
            return LabelClass::Digression(i);
        }
    }
    LabelClass::Inaccessible
}

/// Classifies every weight-`(s+1)` label over `2s` resources.
pub fn classify_labels(ext: &[Bundle], s: u32) -> Result<BTreeMap<Bundle, LabelClass>> {
    check_ext(ext, s)?;
    if 2 * s > ENUMERATION_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "classifying labels over {} resources",
            2 * s
        )));
    }
    Ok((0..1u64 << (2 * s))
        .map(Bundle)
        .filter(|b| b.len() == s + 1)
        .map(|b| (b, class_of(ext, b)))
        .collect())
}

/// What a doubled-snake bundle is, for the piecewise utilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    /// `β_{2i−1}` with its 1-based `i`.
    Odd(usize),
    /// `β_{2i}`.
    Even(usize),
    Digression(usize),
    /// Weight below `s`, or weight `s` off the path.
    Low,
    /// Inaccessible or weight at least `s + 2`.
    High,
}

struct Roles {
    s: u32,
    index: BTreeMap<Bundle, usize>,
    odd: Vec<Bundle>,
}

impl Roles {
    fn new(ext: &[Bundle], s: u32) -> Roles {
        Roles {
            s,
            index: ext.iter().enumerate().map(|(j, &b)| (b, j + 1)).collect(),
            odd: ext.iter().step_by(2).copied().collect(),
        }
    }

    fn t(&self) -> usize {
        self.odd.len()
    }

    fn role(&self, gamma: Bundle) -> Role {
        let gamma = gamma.intersection(Bundle::full(2 * self.s));
        let w = gamma.len();
        let s = self.s;
        if w < s {
            return Role::Low;
        }
        if w >= s + 2 {
            return Role::High;
        }
        if let Some(&j) = self.index.get(&gamma) {
            return if j % 2 == 1 {
                Role::Odd(j.div_ceil(2))
            } else {
                Role::Even(j / 2)
            };
        }
        if w == s {
            return Role::Low;
        }
        let t = self.t();
        match (1..t).find(|&i| self.odd[i - 1].is_subset(gamma)) {
            Some(i) => Role::Digression(i),
            None => Role::High,
        }
    }
}

fn closed(name: String, roles: Arc<Roles>, f: fn(&Roles, Role, Bundle) -> i64) -> UtilitySpec {
    UtilitySpec::ClosedForm(ClosedForm::new(name, move |b| {
        int(f(&roles, roles.role(b), b))
    }))
}

fn u1_thm4(r: &Roles, role: Role, _: Bundle) -> i64 {
    let t = r.t() as i64;
    match role {
        Role::Odd(i) => 2 * i as i64 - 1,
        Role::Even(i) => 2 * i as i64 + 1,
        Role::Digression(i) => 2 * i as i64,
        Role::Low => 0,
        Role::High => 2 * t - 1,
    }
}

fn u2_thm4(r: &Roles, _: Role, b: Bundle) -> i64 {
    let t = r.t() as i64;
    let w = b.intersection(Bundle::full(2 * r.s)).len();
    if w + 2 <= r.s {
        0
    } else if w + 1 == r.s {
        2 * t + 1
    } else {
        2 * t + 2
    }
}

fn u1_cr(r: &Roles, role: Role, _: Bundle) -> i64 {
    let t = r.t() as i64;
    match role {
        Role::Odd(i) => i as i64,
        Role::Even(i) => i as i64 + 1,
        Role::Digression(i) => i as i64,
        Role::Low => 0,
        Role::High => 2 * t - 1,
    }
}

/// Second agent's value, looked up through the complement of its bundle.
fn complement_role(r: &Roles, b: Bundle) -> Role {
    r.role(b.complement(2 * r.s))
}

fn u2_cr(r: &Roles, _: Role, b: Bundle) -> i64 {
    let t = r.t() as i64;
    match complement_role(r, b) {
        Role::Odd(i) => i as i64,
        Role::Even(i) => i as i64,
        Role::Digression(i) => i as i64 - 1,
        Role::Low => 2 * t - 1,
        Role::High => 0,
    }
}

fn u2_equitable(r: &Roles, _: Role, b: Bundle) -> i64 {
    let t = r.t() as i64;
    match complement_role(r, b) {
        Role::Odd(i) => 2 * i as i64,
        Role::Even(i) => 2 * i as i64,
        Role::Digression(i) => 2 * i as i64 - 1,
        Role::Low => 2 * t - 1,
        Role::High => 0,
    }
}

/// `(77/128)·2^s − 3`, applicable once `s >= 7`.
pub fn ext_bound(s: u32) -> Option<Rational> {
    (s >= 7).then(|| ratio(77, 128) * pow2(s) - int(3))
}

fn ext_instance(
    construction: &str,
    snake: &SnakePath,
    parity: Parity,
    rationality: RationalityClass,
    utilities: impl FnOnce(Arc<Roles>) -> Vec<UtilitySpec>,
) -> Result<ConstructedInstance> {
    if snake.is_empty() {
        return Err(Error::InvalidSnake("snake needs at least one edge".into()));
    }
    let s = snake.dimension();
    let ext = ext_transform(snake)?;
    let m = match parity {
        Parity::Even => 2 * s,
        Parity::Odd => 2 * s + 1,
    };
    if m > crate::model::MAX_RESOURCES {
        return Err(Error::ResourceLimit(format!("{m} resources")));
    }
    let roles = Arc::new(Roles::new(&ext, s));
    let path = ext
        .iter()
        .map(|&b| Allocation::pair(b, m))
        .collect::<Result<Vec<_>>>()?;
    let mut p = params([
        ("s", s.to_string()),
        ("m", m.to_string()),
        ("snake", snake.label_strings().join(",")),
    ]);
    let mut notes = Vec::new();
    if parity == Parity::Odd {
        p.insert("parity".into(), "odd".into());
        notes.push(format!(
            "resource {} is pinned to the second agent; utilities ignore it",
            m - 1
        ));
    }
    if construction == "thm5" {
        p.insert("variant".into(), rationality.name().into());
    }
    Ok(ConstructedInstance {
        construction: construction.into(),
        params: p,
        setting: ResourceSetting::new(m, utilities(roles))?,
        formula_length: Some(ext.len() - 1),
        expected_path: path,
        structural: StructuralClass::O,
        rationality,
        claims: vec![
            Claim::UniquePath,
            Claim::MonotoneUtilities,
            Claim::LengthFormula,
        ],
        bound: ext_bound(s),
        notes,
    })
}

/// Monotone IR instance along `ext(snake)`.
pub fn build_thm4(snake: &SnakePath, parity: Parity) -> Result<ConstructedInstance> {
    let s = snake.dimension();
    ext_instance("thm4", snake, parity, RationalityClass::IR, |roles| {
        vec![
            closed(format!("thm4-u1-s{s}"), roles.clone(), u1_thm4),
            closed(format!("thm4-u2-s{s}"), roles, u2_thm4),
        ]
    })
}

/// Monotone money-free instance; `variant` is `CR` or `Equitable`.
pub fn build_thm5(
    snake: &SnakePath,
    variant: RationalityClass,
    parity: Parity,
) -> Result<ConstructedInstance> {
    let s = snake.dimension();
    let (u1, u2): (
        fn(&Roles, Role, Bundle) -> i64,
        fn(&Roles, Role, Bundle) -> i64,
    ) = match variant {
        RationalityClass::CooperativelyRational => (u1_cr, u2_cr),
        RationalityClass::Equitable => (u1_thm4, u2_equitable),
        other => {
            return Err(Error::Parameter(format!(
                "variant {other} is not one of CR, equitable"
            )))
        }
    };
    ext_instance("thm5", snake, parity, variant, |roles| {
        vec![
            closed(
                format!("thm5-{}-u1-s{s}", variant.name()),
                roles.clone(),
                u1,
            ),
            closed(format!("thm5-{}-u2-s{s}", variant.name()), roles, u2),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::fixtures;
    use crate::model::is_monotone;
    use proptest::prelude::*;

    fn labels(xs: &[&str]) -> Vec<Bundle> {
        xs.iter().map(|s| Bundle::parse_label(s).unwrap()).collect()
    }

    #[test]
    fn doubling_example() {
        let ext = ext_transform(&fixtures::snake_s3()).unwrap();
        assert_eq!(
            ext,
            labels(&[
                "000111", "001111", "001110", "101110", "101010", "111010", "111000", "111001",
                "110001"
            ])
        );
        let one_step = SnakePath::parse(&["000", "100"]).unwrap();
        assert_eq!(ext_transform(&one_step).unwrap().len(), 3);
    }

    #[test]
    fn label_classes_example() {
        let ext = ext_transform(&fixtures::snake_s3()).unwrap();
        let classes = classify_labels(&ext, 3).unwrap();
        let pick = |f: fn(&LabelClass) -> bool| {
            let mut v: Vec<String> = classes
                .iter()
                .filter(|(_, c)| f(c))
                .map(|(b, _)| b.label(6))
                .collect();
            v.sort();
            v
        };
        let sorted = |xs: &[&str]| {
            let mut v: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
            v.sort();
            v
        };
        assert_eq!(
            pick(|c| matches!(c, LabelClass::Good(_))),
            sorted(&["001111", "101110", "111010", "111001"])
        );
        assert_eq!(
            pick(|c| matches!(c, LabelClass::Digression(_))),
            sorted(&["010111", "100111", "101011", "011110", "111100"])
        );
        assert_eq!(
            pick(|c| matches!(c, LabelClass::Inaccessible)),
            sorted(&["011011", "011101", "101101", "110110", "110011", "110101"])
        );
        assert_eq!(classes.len(), 15);
    }

    #[test]
    fn thm4_example_values() {
        let inst = build_thm4(&fixtures::snake_s3(), Parity::Even).unwrap();
        let u1 = inst.setting.utility(0);
        let u2 = inst.setting.utility(1);
        let at = |u: &UtilitySpec, s: &str| u.evaluate(Bundle::parse_label(s).unwrap());
        assert_eq!(at(u1, "001110"), int(3));
        assert_eq!(at(u1, "011110"), int(4));
        assert_eq!(at(u1, "110011"), int(9));
        assert_eq!(at(u2, "110000"), int(11));
        assert_eq!(at(u2, "100000"), int(0));
        assert_eq!(at(u2, "111000"), int(12));
        assert!(is_monotone(u1, 6).unwrap());
        assert!(is_monotone(u2, 6).unwrap());
        assert_eq!(inst.first_bad_step().unwrap(), None);
    }

    #[test]
    fn odd_parity_pins_last_resource() {
        let inst = build_thm4(&fixtures::snake_s3(), Parity::Odd).unwrap();
        assert_eq!(inst.setting.resources(), 7);
        for p in &inst.expected_path {
            assert!(p.bundle(1).contains(6));
        }
        assert_eq!(inst.first_bad_step().unwrap(), None);
        assert!(is_monotone(inst.setting.utility(0), 7).unwrap());
        assert!(is_monotone(inst.setting.utility(1), 7).unwrap());
    }

    #[test]
    fn thm5_variants_follow_path() {
        for v in [
            RationalityClass::CooperativelyRational,
            RationalityClass::Equitable,
        ] {
            let inst = build_thm5(&fixtures::snake_s3(), v, Parity::Even).unwrap();
            assert_eq!(inst.first_bad_step().unwrap(), None, "{v}");
        }
        assert!(build_thm5(&fixtures::snake_s3(), RationalityClass::IR, Parity::Even).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn ext_properties(s in 2u32..6, seed in any::<u64>()) {
            use crate::snake_search::*;
            let budget = SearchBudget { restarts: 1, nodes_per_restart: 200, time_limit: None, seed };
            let snake = snake_search(s, SearchMode::Heuristic, &budget).unwrap().path;
            let ext = ext_transform(&snake).unwrap();
            let as_labels: Vec<_> = ext.iter().map(|&b| crate::hypercube::Label::new(b, 2 * s)).collect();
            prop_assert!(crate::hypercube::has_sc_property(&as_labels).unwrap());
            for (j, b) in ext.iter().enumerate() {
                prop_assert_eq!(b.len(), if j % 2 == 0 { s } else { s + 1 });
            }
            // every weight-(s+1) label covers at most two weight-s path labels
            for gamma in (0..1u64 << (2 * s)).map(Bundle).filter(|b| b.len() == s + 1) {
                let covered = ext.iter().step_by(2).filter(|b| b.is_subset(gamma)).count();
                prop_assert!(covered <= 2);
            }
            let classes = classify_labels(&ext, s).unwrap();
            let choose = (s + 2..=2 * s).product::<u32>() / (1..s).product::<u32>();
            prop_assert_eq!(classes.len() as u32, choose);
            for inst in [
                build_thm4(&snake, Parity::Even).unwrap(),
                build_thm5(&snake, RationalityClass::CooperativelyRational, Parity::Even).unwrap(),
            ] {
                prop_assert!(is_monotone(inst.setting.utility(0), 2 * s).unwrap());
                prop_assert!(is_monotone(inst.setting.utility(1), 2 * s).unwrap());
            }
        }
    }
}
