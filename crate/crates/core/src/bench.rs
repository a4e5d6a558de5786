//! Experiment rows, CSV output and a small SVG plot of path length against
//! the number of resources.

use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{build_thm3, build_thm4, build_thm6, ConstructedInstance, Parity};
use crate::deal::{RationalityClass, StructuralClass};
use crate::error::{Error, Result};
use crate::explorer::{l_max_scan, verify_claims};
use crate::hypercube::{ham_cycle, SnakePath};
use crate::model::{format_rational, int, Bundle, ResourceSetting, UtilitySpec};
use crate::snake_search::{snake_search, SearchBudget, SearchMode};

/// Column order of [`write_csv`]; stable across releases.
pub const CSV_COLUMNS: [&str; 9] = [
    "construction",
    "m",
    "k",
    "s",
    "variant",
    "path_length",
    "bound",
    "search_ms",
    "verified",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub construction: String,
    pub m: u32,
    pub k: Option<usize>,
    pub s: Option<u32>,
    pub variant: String,
    pub path_length: usize,
    /// Published bound for the row's parameters, empty when none applies.
    pub bound: String,
    pub search_ms: u64,
    pub verified: bool,
}

/// Longest snake the search finds: exhaustive up to `m = 6`, heuristic
/// beyond.
pub fn find_snake(m: u32, seed: u64) -> Result<(SnakePath, u64)> {
    let mode = if m <= 6 {
        SearchMode::Exhaustive
    } else {
        SearchMode::Heuristic
    };
    let budget = SearchBudget {
        seed,
        ..SearchBudget::default()
    };
    let out = snake_search(m, mode, &budget)?;
    Ok((out.path, out.elapsed.as_millis() as u64))
}

fn row_for(
    inst: &ConstructedInstance,
    k: Option<usize>,
    s: Option<u32>,
    search_ms: u64,
) -> Result<ExperimentRow> {
    let verified = verify_claims(inst)?.iter().all(|c| c.passed);
    Ok(ExperimentRow {
        construction: inst.construction.clone(),
        m: inst.setting.resources(),
        k,
        s,
        variant: inst.param("variant").unwrap_or("").to_string(),
        path_length: inst.path_length(),
        bound: inst.bound.as_ref().map(format_rational).unwrap_or_default(),
        search_ms,
        verified,
    })
}

/// Snake instances for each `m`; the verified column is the claim report.
pub fn bench_thm3(ms: RangeInclusive<u32>, seed: u64) -> Result<Vec<ExperimentRow>> {
    ms.map(|m| {
        let (snake, ms) = find_snake(m, seed)?;
        row_for(&build_thm3(&snake)?, None, None, ms)
    })
    .collect()
}

/// Monotone instances built from snakes in the `s`-cube.
pub fn bench_thm4(ss: RangeInclusive<u32>, seed: u64) -> Result<Vec<ExperimentRow>> {
    ss.map(|s| {
        let (snake, ms) = find_snake(s, seed)?;
        row_for(&build_thm4(&snake, Parity::Even)?, None, Some(s), ms)
    })
    .collect()
}

/// Round schedules for each `k` on the `s`-cube.
pub fn bench_thm6(ks: RangeInclusive<usize>, s: u32) -> Result<Vec<ExperimentRow>> {
    let cycle = ham_cycle(s)?;
    ks.map(|k| {
        let start = Instant::now();
        let inst = build_thm6(k, s, &cycle, None)?;
        let ms = start.elapsed().as_millis() as u64;
        row_for(&inst, Some(k), Some(s), ms)
    })
    .collect()
}

/// Two agents with integer per-resource values in `-5..=5`.
pub fn random_additive_setting<R: Rng>(n: usize, m: u32, rng: &mut R) -> ResourceSetting {
    let utilities = (0..n)
        .map(|_| UtilitySpec::Additive {
            values: (0..m).map(|_| int(rng.gen_range(-5..=5))).collect(),
        })
        .collect();
    ResourceSetting::new(m, utilities).expect("valid shape")
}

/// Each bundle is worth 1 with probability `density`.
pub fn random_zero_one_setting<R: Rng>(
    n: usize,
    m: u32,
    density: f64,
    rng: &mut R,
) -> ResourceSetting {
    let utilities = (0..n)
        .map(|_| UtilitySpec::ZeroOne {
            ones: (0..1u64 << m)
                .filter(|_| rng.gen_bool(density))
                .map(Bundle)
                .collect(),
        })
        .collect();
    ResourceSetting::new(m, utilities).expect("valid shape")
}

fn random_trials(
    family: &str,
    ms: RangeInclusive<u32>,
    trials: usize,
    seed: u64,
    make: impl Fn(u32, &mut ChaCha8Rng) -> ResourceSetting,
    rationality: RationalityClass,
) -> Result<Vec<ExperimentRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ms.map(|m| {
        let start = Instant::now();
        let mut worst = 0;
        for _ in 0..trials {
            let setting = make(m, &mut rng);
            if let Some(l) = l_max_scan(&setting, StructuralClass::O, rationality)? {
                worst = worst.max(l);
            }
        }
        Ok(ExperimentRow {
            construction: family.into(),
            m,
            k: None,
            s: None,
            variant: rationality.name().into(),
            path_length: worst,
            bound: m.to_string(),
            search_ms: start.elapsed().as_millis() as u64,
            verified: worst <= m as usize,
        })
    })
    .collect()
}

/// Largest shortest IR O-path over random additive two-agent settings.
pub fn bench_additive(
    ms: RangeInclusive<u32>,
    trials: usize,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    random_trials(
        "additive",
        ms,
        trials,
        seed,
        |m, rng| random_additive_setting(2, m, rng),
        RationalityClass::IR,
    )
}

/// Largest shortest CR O-path over random 0–1 two-agent settings.
pub fn bench_zero_one(
    ms: RangeInclusive<u32>,
    trials: usize,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    random_trials(
        "zero-one",
        ms,
        trials,
        seed,
        |m, rng| random_zero_one_setting(2, m, 0.3, rng),
        RationalityClass::CooperativelyRational,
    )
}

/// Writes the header even when `rows` is empty.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Path length against `m` per construction, log-scaled on the y axis.
pub fn plot_svg(rows: &[ExperimentRow]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    const COLORS: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
    ];
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    svg += &format!(
        "<line x1=\"{PAD}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{b}\" stroke=\"black\"/>\n",
        b = H - PAD,
        r = W - PAD
    );
    svg += &format!(
        "<text x=\"{}\" y=\"{}\">resources m</text>\n<text x=\"10\" y=\"{}\">log10 length</text>\n",
        W / 2.0 - 30.0,
        H - 15.0,
        PAD - 20.0
    );
    if rows.is_empty() {
        svg += "</svg>\n";
        return svg;
    }
    let min_m = rows.iter().map(|r| r.m).min().unwrap_or(0) as f64;
    let max_m = (rows.iter().map(|r| r.m).max().unwrap_or(1) as f64).max(min_m + 1.0);
    let log = |len: usize| ((len.max(1)) as f64).log10();
    let max_y = rows.iter().map(|r| log(r.path_length)).fold(1.0, f64::max);
    let x = |m: u32| PAD + (m as f64 - min_m) / (max_m - min_m) * (W - 2.0 * PAD);
    let y = |len: usize| H - PAD - log(len) / max_y * (H - 2.0 * PAD);
    let mut families: Vec<&str> = rows.iter().map(|r| r.construction.as_str()).collect();
    families.dedup();
    families.sort_unstable();
    families.dedup();
    for (fi, fam) in families.iter().enumerate() {
        let color = COLORS[fi % COLORS.len()];
        let mut pts: Vec<(u32, usize)> = rows
            .iter()
            .filter(|r| r.construction == *fam)
            .map(|r| (r.m, r.path_length))
            .collect();
        pts.sort_unstable();
        let coords: Vec<String> = pts
            .iter()
            .map(|&(m, l)| format!("{:.1},{:.1}", x(m), y(l)))
            .collect();
        svg += &format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            coords.join(" ")
        );
        svg += &format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{fam}</text>\n",
            W - PAD - 60.0,
            PAD + 15.0 * fi as f64
        );
    }
    svg += "</svg>\n";
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn empty_range_gives_header_only() {
        let rows = bench_thm3(5..=4, 0).unwrap();
        assert!(rows.is_empty());
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "construction,m,k,s,variant,path_length,bound,search_ms,verified\n"
        );
    }

    #[test]
    fn small_snake_rows() {
        let rows = bench_thm3(4..=5, 0).unwrap();
        assert_eq!(rows[0].path_length, 7);
        assert_eq!(rows[1].path_length, 13);
        assert!(rows.iter().all(|r| r.verified && r.bound.is_empty()));
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("thm3,4,,,,7,,"));
        assert!(plot_svg(&rows).contains("polyline"));
    }

    #[test]
    fn additive_trials_stay_within_m() {
        let rows = bench_additive(3..=4, 5, 7).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.verified && r.path_length <= r.m as usize));
        assert_eq!(rows[0].bound, "3");
    }
}
