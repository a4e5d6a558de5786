//! Two-agent instances along a snake: agent 0 walks the snake, agent 1
//! holds the complement.

use num_traits::Zero;

use super::{params, Claim, ConstructedInstance};
use crate::deal::{RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::hypercube::{fixtures, SnakePath};
use crate::model::{int, pow2, ratio, Allocation, Bundle, Rational, ResourceSetting, UtilitySpec};

/// `(77/256)·2^m − 2`, the snake length lower bound, for `m >= 7`.
pub fn snake_bound(m: u32) -> Option<Rational> {
    (m >= 7).then(|| ratio(77, 256) * pow2(m) - int(2))
}

fn path_of(snake: &SnakePath, bystanders: usize) -> Vec<Allocation> {
    let m = snake.dimension();
    snake
        .labels()
        .iter()
        .map(|&a| {
            let mut bundles = vec![a, a.complement(m)];
            bundles.extend(std::iter::repeat_n(Bundle::EMPTY, bystanders));
            Allocation::from_bundles(bundles, m).expect("complementary pair partitions")
        })
        .collect()
}

/// `u(α_k) = k` along the snake (1-based), `0` elsewhere.
fn index_utility(snake: &SnakePath) -> UtilitySpec {
    UtilitySpec::table(
        snake
            .labels()
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, int(i as i64 + 1))),
        Rational::zero(),
    )
}

fn instance(
    construction: &str,
    snake: &SnakePath,
    utilities: Vec<UtilitySpec>,
    rationality: RationalityClass,
    variant: Option<&str>,
) -> ConstructedInstance {
    let m = snake.dimension();
    let bystanders = utilities.len() - 2;
    let mut p = params([
        ("m", m.to_string()),
        ("snake", snake.label_strings().join(",")),
    ]);
    if let Some(v) = variant {
        p.insert("variant".into(), v.into());
    }
    if bystanders > 0 {
        p.insert("n".into(), utilities.len().to_string());
    }
    ConstructedInstance {
        construction: construction.into(),
        params: p,
        setting: ResourceSetting::new(m, utilities).expect("at least two agents"),
        expected_path: path_of(snake, bystanders),
        structural: StructuralClass::O,
        rationality,
        claims: vec![Claim::UniquePath, Claim::LengthFormula],
        formula_length: Some(snake.len()),
        bound: snake_bound(m),
        notes: Vec::new(),
    }
}

fn check_nontrivial(snake: &SnakePath) -> Result<()> {
    if snake.is_empty() {
        return Err(Error::InvalidSnake("snake needs at least one edge".into()));
    }
    Ok(())
}

/// IR O-contract instance: `σ_u` along the snake is `1, 2, …, t`.
pub fn build_thm3(snake: &SnakePath) -> Result<ConstructedInstance> {
    check_nontrivial(snake)?;
    Ok(instance(
        "thm3",
        snake,
        vec![index_utility(snake), UtilitySpec::zero()],
        RationalityClass::IR,
        None,
    ))
}

/// The 4-cube instance with its published per-agent split of `σ_u`.
pub fn snake_m4_instance() -> ConstructedInstance {
    let snake = fixtures::snake_m4();
    let split: [(&str, i64, i64); 8] = [
        ("0000", 1, 0),
        ("1000", 1, 1),
        ("1010", 2, 1),
        ("1110", 2, 2),
        ("0110", 3, 2),
        ("0111", 3, 3),
        ("0101", 4, 3),
        ("1101", 4, 4),
    ];
    let bundle = |s: &str| Bundle::parse_label(s).expect("fixture label");
    let u1 = UtilitySpec::table(split.iter().map(|&(s, a, _)| (bundle(s), int(a))), int(0));
    let u2 = UtilitySpec::table(
        split
            .iter()
            .map(|&(s, _, b)| (bundle(s).complement(4), int(b))),
        int(0),
    );
    let mut inst = instance("thm3", &snake, vec![u1, u2], RationalityClass::IR, None);
    inst.params.insert("split".into(), "fixture".into());
    inst
}

fn cor1_utilities(snake: &SnakePath, variant: RationalityClass) -> Result<Vec<UtilitySpec>> {
    let m = snake.dimension();
    let u1 = index_utility(snake);
    let u2 = match variant {
        RationalityClass::IR => UtilitySpec::zero(),
        RationalityClass::CooperativelyRational => UtilitySpec::zero(),
        RationalityClass::Equitable => UtilitySpec::table(
            snake
                .labels()
                .iter()
                .enumerate()
                .map(|(i, a)| (a.complement(m), int(i as i64 + 1))),
            Rational::zero(),
        ),
        RationalityClass::PigouDalton => UtilitySpec::table(
            snake
                .labels()
                .iter()
                .enumerate()
                .map(|(i, a)| (a.complement(m), pow2(m) - int(i as i64 + 1))),
            pow2(m),
        ),
        RationalityClass::None => {
            return Err(Error::Parameter(
                "variant must name a rationality class".into(),
            ))
        }
    };
    Ok(vec![u1, u2])
}

/// Money-free variants: `CR`, `Equitable` or `PigouDalton`.
pub fn build_cor1(snake: &SnakePath, variant: RationalityClass) -> Result<ConstructedInstance> {
    check_nontrivial(snake)?;
    if variant == RationalityClass::IR || variant == RationalityClass::None {
        return Err(Error::Parameter(format!(
            "variant {variant} is not one of CR, equitable, pigou-dalton"
        )));
    }
    let utilities = cor1_utilities(snake, variant)?;
    Ok(instance(
        "cor1",
        snake,
        utilities,
        variant,
        Some(variant.name()),
    ))
}

/// Adds `n − 2` bystanders holding nothing, for any of the four variants.
pub fn build_cor2(
    snake: &SnakePath,
    variant: RationalityClass,
    n: usize,
) -> Result<ConstructedInstance> {
    check_nontrivial(snake)?;
    if n < 3 {
        return Err(Error::Parameter(format!(
            "bystander variant needs n >= 3, got {n}"
        )));
    }
    let m = snake.dimension();
    let mut utilities = cor1_utilities(snake, variant)?;
    let bystander = match variant {
        RationalityClass::IR => UtilitySpec::table([(Bundle::EMPTY, int(1))], int(0)),
        RationalityClass::CooperativelyRational => UtilitySpec::zero(),
        RationalityClass::Equitable => UtilitySpec::table([(Bundle::EMPTY, pow2(m))], int(0)),
        RationalityClass::PigouDalton => UtilitySpec::constant(pow2(m)),
        RationalityClass::None => unreachable!("rejected above"),
    };
    utilities.extend(std::iter::repeat_n(bystander, n - 2));
    Ok(instance(
        "cor2",
        snake,
        utilities,
        variant,
        Some(variant.name()),
    ))
}
