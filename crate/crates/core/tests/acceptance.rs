//! Acceptance criteria, one printed line each. Exact arithmetic throughout,
//! so every comparison is equality; only runtimes carry limits.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use contractnet::bench::{random_additive_setting, random_zero_one_setting};
use contractnet::constructions::{
    build_cor1, build_mk_path, build_thm3, build_thm4, build_thm5, build_thm6, classify_labels,
    ext_transform, reappearance_r, schedule_allocations, snake_m4_instance, ConstructedInstance,
    LabelClass, Parity,
};
use contractnet::deal::{structural_holds, Deal, RationalityClass, StructuralClass};
use contractnet::explorer::{
    is_pareto_optimal, l_max_scan, max_sigma_e, run_maximal_path, shortest_path,
    structural_neighbors, unrestricted_o_path, verify_claims, verify_unique_path, Outcome,
    PathQuery, ScanMode, TieRule, UniqueVerdict,
};
use contractnet::hypercube::fixtures;
use contractnet::model::{
    int, is_monotone, Allocation, Bundle, Rational, ResourceSetting, UtilitySpec,
};
use contractnet::snake_search::{snake_search, SearchBudget, SearchMode};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn label(s: &str) -> Bundle {
    Bundle::parse_label(s).unwrap()
}

fn labels(b: &[Bundle], m: u32) -> Vec<String> {
    b.iter().map(|x| x.label(m)).collect()
}

fn shortest_len(inst: &ConstructedInstance) -> Result<usize, String> {
    let d = inst.designated_deal().map_err(err)?;
    let q = PathQuery::new(
        &inst.setting,
        d.from().clone(),
        d.to().clone(),
        inst.structural,
        inst.rationality,
    );
    match shortest_path(&q).map_err(err)?.outcome {
        Outcome::Found(p) => Ok(p.len() - 1),
        other => Err(format!("no shortest path: {other:?}")),
    }
}

fn certified(inst: &ConstructedInstance) -> Result<ScanMode, String> {
    match verify_unique_path(inst).map_err(err)? {
        UniqueVerdict::Certified(c) => Ok(c.mode),
        other => Err(format!("uniqueness not certified: {other:?}")),
    }
}

// 1
fn snake_m4_reproduction() -> Check {
    for inst in [
        snake_m4_instance(),
        build_thm3(&fixtures::snake_m4()).map_err(err)?,
    ] {
        let sigma: Vec<Rational> = inst
            .expected_path
            .iter()
            .map(|p| inst.setting.sigma_u(p).unwrap())
            .collect();
        ensure(
            sigma == (1..=8).map(int).collect::<Vec<_>>(),
            format!("σ_u column {sigma:?}"),
        )?;
        let len = shortest_len(&inst)?;
        ensure(len == 7, format!("shortest IR O-path has length {len}"))?;
        certified(&inst)?;
    }
    Ok("σ_u = 1..8, L^opt = 7, unique and shortcut-free (published and canonical splits)".into())
}

// 2
fn cor1_variants() -> Check {
    let snake = fixtures::snake_m4();
    let mut notes = Vec::new();
    for v in [
        RationalityClass::CooperativelyRational,
        RationalityClass::Equitable,
        RationalityClass::PigouDalton,
    ] {
        let start = Instant::now();
        let inst = build_cor1(&snake, v).map_err(err)?;
        ensure(
            inst.first_bad_step().map_err(err)?.is_none(),
            format!("{v}: path breaks the class"),
        )?;
        certified(&inst).map_err(|e| format!("{v}: {e}"))?;
        let len = shortest_len(&inst)?;
        ensure(len == 7, format!("{v}: length {len}"))?;
        if v == RationalityClass::PigouDalton {
            for p in &inst.expected_path {
                let vals = inst.setting.values(p).map_err(err)?;
                ensure(
                    vals[0].clone() + &vals[1] == int(16),
                    format!("PD sum broken at {p}"),
                )?;
            }
        }
        let t = start.elapsed();
        ensure(t < Duration::from_secs(1), format!("{v} took {t:?}"))?;
        notes.push(format!("{v} ok"));
    }
    Ok(format!("{}; PD sum 16 at every step", notes.join(", ")))
}

const EXT_S3: [&str; 9] = [
    "000111", "001111", "001110", "101110", "101010", "111010", "111000", "111001", "110001",
];
const GOOD: [&str; 4] = ["001111", "101110", "111010", "111001"];
const DIGRESSION: [&str; 5] = ["010111", "100111", "101011", "011110", "111100"];
const INACCESSIBLE: [&str; 6] = ["011011", "011101", "101101", "110110", "110011", "110101"];

fn odd_betas() -> BTreeSet<Bundle> {
    EXT_S3.iter().step_by(2).map(|s| label(s)).collect()
}

/// The printed `u_1` of the IR example.
fn ext_ir_u1(s: Bundle) -> i64 {
    let named: [(&str, i64); 14] = [
        ("000111", 1),
        ("010111", 2),
        ("100111", 2),
        ("001111", 3),
        ("001110", 3),
        ("011110", 4),
        ("101110", 5),
        ("101010", 5),
        ("101011", 6),
        ("111010", 7),
        ("111000", 7),
        ("111100", 8),
        ("111001", 9),
        ("110001", 9),
    ];
    if let Some(&(_, v)) = named.iter().find(|(l, _)| label(l) == s) {
        return v;
    }
    if s.len() >= 5 || INACCESSIBLE.iter().any(|l| label(l) == s) {
        return 9;
    }
    assert!(s.len() <= 3 && !odd_betas().contains(&s));
    0
}

fn ext_ir_u2(s: Bundle) -> i64 {
    match s.len() {
        0 | 1 => 0,
        2 => 11,
        _ => 12,
    }
}

// 3
fn ext_ir() -> Check {
    let snake = fixtures::snake_s3();
    let ext = ext_transform(&snake).map_err(err)?;
    ensure(
        labels(&ext, 6) == EXT_S3,
        format!("ext path {:?}", labels(&ext, 6)),
    )?;
    let classes = classify_labels(&ext, 3).map_err(err)?;
    let collect = |want: fn(&LabelClass) -> bool| -> BTreeSet<String> {
        classes
            .iter()
            .filter(|(_, c)| want(c))
            .map(|(b, _)| b.label(6))
            .collect()
    };
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    ensure(
        collect(|c| matches!(c, LabelClass::Good(_))) == set(&GOOD),
        "Good set differs",
    )?;
    ensure(
        collect(|c| matches!(c, LabelClass::Digression(_))) == set(&DIGRESSION),
        "Digression set differs",
    )?;
    ensure(
        collect(|c| matches!(c, LabelClass::Inaccessible)) == set(&INACCESSIBLE),
        "Inaccessible set differs",
    )?;
    let inst = build_thm4(&snake, Parity::Even).map_err(err)?;
    for b in (0..64).map(Bundle) {
        let (u1, u2) = (
            inst.setting.utility(0).evaluate(b),
            inst.setting.utility(1).evaluate(b),
        );
        ensure(
            u1 == int(ext_ir_u1(b)),
            format!("u1({}) = {u1}", b.label(6)),
        )?;
        ensure(
            u2 == int(ext_ir_u2(b)),
            format!("u2({}) = {u2}", b.label(6)),
        )?;
    }
    for i in 0..2 {
        ensure(
            is_monotone(inst.setting.utility(i), 6).map_err(err)?,
            format!("u{} not monotone", i + 1),
        )?;
    }
    let mode = certified(&inst)?;
    ensure(mode == ScanMode::FullScan, format!("certified by {mode:?}"))?;
    Ok(
        "ext path, label classes and both tables match; monotone; unique over all 64 allocations"
            .into(),
    )
}

/// The printed `⟨u_1(S), u_2(R∖S)⟩` pairs of the money-free examples.
fn ext_money_free_pair(s: Bundle, equitable: bool) -> (i64, i64) {
    let cr: [(&str, i64, i64); 14] = [
        ("000111", 1, 1),
        ("010111", 1, 0),
        ("100111", 1, 0),
        ("001111", 2, 1),
        ("001110", 2, 2),
        ("011110", 2, 1),
        ("101110", 3, 2),
        ("101010", 3, 3),
        ("101011", 3, 2),
        ("111010", 4, 3),
        ("111000", 4, 4),
        ("111100", 4, 3),
        ("111001", 5, 4),
        ("110001", 5, 5),
    ];
    let eq: [(&str, i64, i64); 14] = [
        ("000111", 1, 2),
        ("010111", 2, 1),
        ("100111", 2, 1),
        ("001111", 3, 2),
        ("001110", 3, 4),
        ("011110", 4, 3),
        ("101110", 5, 4),
        ("101010", 5, 6),
        ("101011", 6, 5),
        ("111010", 7, 6),
        ("111000", 7, 8),
        ("111100", 8, 7),
        ("111001", 9, 8),
        ("110001", 9, 10),
    ];
    let table = if equitable { &eq } else { &cr };
    if let Some(&(_, a, b)) = table.iter().find(|(l, _, _)| label(l) == s) {
        return (a, b);
    }
    if s.len() >= 5 || INACCESSIBLE.iter().any(|l| label(l) == s) {
        return (9, 0);
    }
    (0, 9)
}

// 4
fn ext_money_free() -> Check {
    let snake = fixtures::snake_s3();
    let mut problems = Vec::new();
    for (variant, equitable) in [
        (RationalityClass::CooperativelyRational, false),
        (RationalityClass::Equitable, true),
    ] {
        let inst = build_thm5(&snake, variant, Parity::Even).map_err(err)?;
        for b in (0..64).map(Bundle) {
            let got = (
                inst.setting.utility(0).evaluate(b),
                inst.setting.utility(1).evaluate(b.complement(6)),
            );
            let (a, c) = ext_money_free_pair(b, equitable);
            ensure(
                got == (int(a), int(c)),
                format!("{variant}: pair at {} is {got:?}", b.label(6)),
            )?;
        }
        certified(&inst).map_err(|e| format!("{variant}: {e}"))?;
        for c in verify_claims(&inst).map_err(err)? {
            if c.name == "monotone-utilities" && !c.passed {
                problems.push(format!("{variant}: {}", c.detail));
            }
        }
    }
    if problems.is_empty() {
        Ok("both tables match; monotone; unique CR and equitable paths certified".into())
    } else {
        Err(format!(
            "tables match and both unique paths are certified, but the printed equitable table is not monotone: {}",
            problems.join("; ")
        ))
    }
}

const THM6_SUBSETS: [[&str; 12]; 9] = [
    [
        "111", "000", "111", "000", "111", "000", "111", "000", "111", "000", "111", "000",
    ],
    [
        "111", "000", "111", "000", "110", "001", "111", "001", "110", "000", "110", "001",
    ],
    [
        "111", "001", "110", "000", "110", "001", "110", "001", "110", "001", "110", "101",
    ],
    [
        "110", "001", "010", "001", "110", "101", "110", "001", "010", "101", "010", "101",
    ],
    [
        "010", "101", "010", "101", "010", "101", "010", "101", "010", "101", "010", "101",
    ],
    [
        "010", "101", "011", "101", "011", "100", "010", "100", "011", "101", "011", "100",
    ],
    [
        "010", "100", "001", "101", "011", "100", "011", "100", "001", "100", "011", "110",
    ],
    [
        "011", "100", "001", "100", "011", "110", "011", "100", "001", "110", "001", "110",
    ],
    [
        "001", "110", "001", "110", "001", "110", "001", "110", "001", "110", "001", "110",
    ],
];

const THM6_CHI: [[usize; 12]; 9] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1],
    [0, 1, 1, 0, 1, 1, 1, 1, 2, 1, 1, 2],
    [1, 1, 2, 1, 1, 2, 1, 1, 2, 2, 2, 2],
    [2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [2, 2, 2, 2, 3, 3, 2, 3, 3, 2, 3, 3],
    [2, 3, 3, 2, 3, 3, 3, 3, 4, 3, 3, 4],
    [3, 3, 4, 3, 3, 4, 3, 3, 4, 4, 4, 4],
    [4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4],
];

/// Columns of the printed tables: for each agent `i`, partners `j ≠ i`
/// in increasing order.
fn columns(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

// 5
fn rounds_fixture() -> Check {
    let (k, s) = (4, 3);
    let cycle = fixtures::cycle_s3();
    let path = build_mk_path(k, s, &cycle, None).map_err(err)?;
    let cols = columns(k);
    let mut subset_misses = Vec::new();
    for d in 0..9 {
        for (c, &(i, j)) in cols.iter().enumerate() {
            let chi = path.states[d].chi[i][j];
            ensure(
                chi == THM6_CHI[d][c],
                format!("d={} χ({i},{j}) = {chi}", d + 1),
            )?;
            let got = path.share(d, i, j).label(s);
            if got != THM6_SUBSETS[d][c] {
                // the printed cell and its partner's printed cell must partition the block
                let partner = cols.iter().position(|&p| p == (j, i)).expect("column");
                let printed = label(THM6_SUBSETS[d][c]);
                let other = label(THM6_SUBSETS[d][partner]);
                subset_misses.push(format!(
                    "d={} A{i} share of block {{{i},{j}}}: printed {}, generated {got}; printed partner share {} {}",
                    d + 1,
                    THM6_SUBSETS[d][c],
                    THM6_SUBSETS[d][partner],
                    if printed.intersection(other).is_empty() && printed.union(other) == Bundle::full(s) {
                        "completes the block"
                    } else {
                        "does not partition the block with it, so no allocation matches the printed row"
                    }
                ));
            }
        }
    }
    let r = reappearance_r(k, s).map_err(err)?;
    ensure(r == 16, format!("r = {r}"))?;
    let raw = schedule_allocations(k, s, &cycle, r + 1).map_err(err)?;
    // r > 1: agent 0 sits out stage 0, so d = 2 repeats trivially
    let first_repeat = (2..raw.len())
        .find(|&d| raw[d].bundle(0) == raw[0].bundle(0))
        .map(|d| d + 1);
    ensure(
        first_repeat == Some(1 + r),
        format!("P_0^(1) first reappears at d = {first_repeat:?}"),
    )?;
    let literal16 = raw[15].bundle(0) == raw[0].bundle(0);

    let inst = build_thm6(k, s, &cycle, None).map_err(err)?;
    ensure(
        inst.first_bad_step().map_err(err)?.is_none(),
        "a step is not an IR M(3)-contract",
    )?;
    for w in inst.expected_path.windows(2) {
        let deal = Deal::new(w[0].clone(), w[1].clone()).map_err(err)?;
        ensure(
            deal.involved_agents().len() == 3,
            "a step does not involve exactly 3 agents",
        )?;
    }
    let start = &inst.expected_path[0];
    let m2 = structural_neighbors(start, StructuralClass::Mk(2), usize::MAX >> 2).map_err(err)?;
    let mut ir = 0;
    for q in &m2 {
        let deal = Deal::new(start.clone(), q.clone()).map_err(err)?;
        if deal
            .is_rational(RationalityClass::IR, &inst.setting)
            .map_err(err)?
        {
            ir += 1;
        }
    }
    ensure(ir == 0, format!("{ir} IR M(2) successors of P^(1)"))?;
    let deal = inst.designated_deal().map_err(err)?;
    ensure(
        deal.is_rational(RationalityClass::IR, &inst.setting)
            .map_err(err)?,
        "designated deal not IR",
    )?;
    ensure(
        deal.is_structural(StructuralClass::Mk(4)),
        "designated deal not M(4)",
    )?;
    ensure(
        deal.involved_agents().len() == 4,
        "designated deal does not involve all four agents",
    )?;
    let summary = format!(
        "χ table matches; {} of 108 subset cells match; r = 16 with P_0^(1) = P_0^(1+r) = P_0^(17) \
         (literal index 16 {}); {} IR M(3) steps; none of {} M(2) neighbours of P^(1) is IR; designated deal is one IR M(4)-contract",
        108 - subset_misses.len(),
        if literal16 { "also matches" } else { "does not, the gap being 1-based indexing" },
        inst.path_length(),
        m2.len()
    );
    if subset_misses.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; mismatches: {}",
            subset_misses.join(" | ")
        ))
    }
}

// 6
fn snake_scaling() -> Check {
    let mut parts = Vec::new();
    for (m, mode) in [
        (5, SearchMode::Exhaustive),
        (6, SearchMode::Exhaustive),
        (7, SearchMode::Heuristic),
    ] {
        let budget = SearchBudget {
            time_limit: Some(Duration::from_secs(120)),
            ..SearchBudget::default()
        };
        let found = snake_search(m, mode, &budget).map_err(err)?;
        let snake = found.path;
        let inst = build_thm3(&snake).map_err(err)?;
        certified(&inst).map_err(|e| format!("m={m}: {e}"))?;
        let report = verify_claims(&inst).map_err(err)?;
        ensure(
            report.iter().all(|c| c.passed),
            format!("m={m}: {report:?}"),
        )?;
        let len = shortest_len(&inst)?;
        ensure(
            len == snake.len(),
            format!("m={m}: L^opt {len} vs snake {}", snake.len()),
        )?;
        if m == 7 {
            ensure(
                snake.len() >= 37,
                format!("m=7 snake has only {} edges", snake.len()),
            )?;
        }
        parts.push(format!("m={m}: {} ({:?})", snake.len(), mode));
    }
    Ok(format!(
        "certified unique lengths {}; m=7 meets ⌈(77/256)·2^7 − 2⌉ = 37",
        parts.join(", ")
    ))
}

fn random_allocation(rng: &mut ChaCha8Rng, n: usize, m: u32) -> Allocation {
    let owners: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    Allocation::from_owners(&owners, n).unwrap()
}

fn random_table_setting(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: u32,
    lo: i64,
    hi: i64,
) -> ResourceSetting {
    let utilities = (0..n)
        .map(|_| {
            UtilitySpec::table(
                (0..1u64 << m).map(|b| (Bundle(b), int(rng.gen_range(lo..=hi)))),
                int(0),
            )
        })
        .collect();
    ResourceSetting::new(m, utilities).unwrap()
}

// 7
fn completeness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(1..=8);
        let from = random_allocation(&mut rng, n, m);
        let mut to = random_allocation(&mut rng, n, m);
        while to == from {
            to = random_allocation(&mut rng, n, m);
        }
        let path = unrestricted_o_path(&from, &to).map_err(err)?;
        let misplaced = (0..m).filter(|&r| from.owner(r) != to.owner(r)).count();
        ensure(
            path.len() - 1 == misplaced && misplaced <= m as usize,
            "O-path length is not the misplaced count",
        )?;
        ensure(path.last() == Some(&to), "O-path ends elsewhere")?;
        ensure(
            path.windows(2)
                .all(|w| structural_holds(&w[0], &w[1], StructuralClass::O)),
            "O-path step is not an O-contract",
        )?;
    }
    let len_of = |o: &Outcome| match o {
        Outcome::Found(p) => Some(p.len() - 1),
        _ => None,
    };
    for _ in 0..200 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(2..=5);
        let setting = random_table_setting(&mut rng, n, m, -5, 5);
        let from = random_allocation(&mut rng, n, m);
        let mut to = random_allocation(&mut rng, n, m);
        while to == from {
            to = random_allocation(&mut rng, n, m);
        }
        let gamma = rng.gen_range(0..=m);
        let q = PathQuery::new(
            &setting,
            from.clone(),
            to.clone(),
            StructuralClass::O,
            RationalityClass::IR,
        );
        let a = len_of(
            &shortest_path(&q.clone().with_budget(gamma))
                .map_err(err)?
                .outcome,
        );
        let b = len_of(
            &shortest_path(&q.clone().with_budget(gamma + 1))
                .map_err(err)?
                .outcome,
        );
        let ok = match (a, b) {
            (Some(x), Some(y)) => y <= x,
            (None, _) => true,
            (Some(_), None) => false,
        };
        ensure(
            ok,
            format!("budget {gamma} gives {a:?} but {} gives {b:?}", gamma + 1),
        )?;
        let full = len_of(&shortest_path(&q.with_budget(m)).map_err(err)?.outcome);
        let misplaced = (0..m).filter(|&r| from.owner(r) != to.owner(r)).count();
        ensure(full == Some(misplaced), format!("budget m gives {full:?}"))?;
    }
    Ok("500 O-paths have the misplaced-resource length ≤ m; 200 budgeted queries are monotone and complete at γ = m".into())
}

// 8
fn table2_desk_scale() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_add = (0, 0);
    for _ in 0..200 {
        let m = rng.gen_range(2..=8);
        let setting = random_additive_setting(2, m, &mut rng);
        if let Some(l) =
            l_max_scan(&setting, StructuralClass::O, RationalityClass::IR).map_err(err)?
        {
            ensure(l <= m as usize, format!("additive m={m}: L^max = {l}"))?;
            worst_add = worst_add.max((l, m));
        }
    }
    let mut worst_01 = (0, 0);
    for _ in 0..200 {
        let m = rng.gen_range(2..=8);
        let setting = random_zero_one_setting(2, m, 0.3, &mut rng);
        if let Some(l) = l_max_scan(
            &setting,
            StructuralClass::O,
            RationalityClass::CooperativelyRational,
        )
        .map_err(err)?
        {
            ensure(l <= m as usize, format!("0–1 m={m}: L^max = {l}"))?;
            worst_01 = worst_01.max((l, m));
        }
    }
    Ok(format!(
        "additive IR and 0–1 CR settings never need more than m O-contracts (largest seen {} at m={}, {} at m={})",
        worst_add.0, worst_add.1, worst_01.0, worst_01.1
    ))
}

// 9
fn fact1_convergence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let n = *[2usize, 3].choose(&mut rng).unwrap();
        let m = rng.gen_range(2..=5);
        let setting = random_table_setting(&mut rng, n, m, 0, 9);
        let start = random_allocation(&mut rng, n, m);
        let tie = TieRule::Seeded(trial);
        let cr = run_maximal_path(
            &setting,
            &start,
            StructuralClass::Unrestricted,
            RationalityClass::CooperativelyRational,
            tie,
            100_000,
        )
        .map_err(err)?;
        ensure(
            is_pareto_optimal(cr.terminal(), &setting).map_err(err)?,
            format!(
                "trial {trial}: CR terminal {} is not Pareto optimal",
                cr.terminal()
            ),
        )?;
        let eq = run_maximal_path(
            &setting,
            &start,
            StructuralClass::Unrestricted,
            RationalityClass::Equitable,
            tie,
            100_000,
        )
        .map_err(err)?;
        let best = max_sigma_e(&setting).map_err(err)?;
        let got = setting.sigma_e(eq.terminal()).map_err(err)?;
        ensure(
            got == best,
            format!("trial {trial}: equitable terminal has σ_e {got}, optimum {best}"),
        )?;
    }
    Ok("100 CR runs end Pareto optimal; 100 equitable runs end at maximal σ_e".into())
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, fn() -> Check, Duration);
    let secs = Duration::from_secs;
    let criteria: [Criterion; 9] = [
        (1, "4-cube snake instance", snake_m4_reproduction, secs(1)),
        (2, "money-free snake variants", cor1_variants, secs(3)),
        (3, "IR ext example", ext_ir, secs(1)),
        (4, "money-free ext examples", ext_money_free, secs(1)),
        (5, "k = 4, s = 3 round schedule", rounds_fixture, secs(30)),
        (6, "snake length scaling", snake_scaling, secs(400)),
        (7, "completeness properties", completeness, secs(30)),
        (
            8,
            "additive and 0–1 path lengths",
            table2_desk_scale,
            secs(60),
        ),
        (
            9,
            "convergence of maximal runs",
            fact1_convergence,
            secs(60),
        ),
    ];
    let mut failures = 0;
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|p| {
                Err(p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into()))
            })
            .and_then(|detail| {
                let t = start.elapsed();
                if t > limit {
                    Err(format!("{detail}; but took {t:.2?} (limit {limit:?})"))
                } else {
                    Ok(detail)
                }
            });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} [{t:.2?}]: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {n:>2} FAIL  {name} [{t:.2?}]: {detail}");
            }
        }
    }
    println!(
        "criterion 10 NOTE  out of scope: asymptotic constants for large m and the hardness result \
         have no desk-scale experiment; criteria 3–6 check monotonicity, uniqueness and formula lengths instead"
    );
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
