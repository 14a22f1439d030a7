//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gridramsey::bounds::{
    corollary_grid, epsilon, guaranteed_count_lower_bound, lll_volume_threshold, minimal_coloring,
    mu_sequence,
};
use gridramsey::pipeline::{a3_table, obstruction_count_exponent, published_a3};
use gridramsey::qform::{
    build_matrix, coloring_from_vector, conjectured_spectrum, min_rectangles, psd_check,
    qform_penalized, spectrum,
};
use gridramsey::search::{
    find_coloring, is_guaranteed_exact, min_mono_boxes_exact, moser_tardos_color, obstruction_set,
    FindOutcome,
};
use gridramsey::{verify, Grid, SearchBudget, Verdict};

use common::{brute_min_rectangles, grids_up_to};

/// Per-cell search budget for the table sweep.
const TABLE_CELL_SECONDS: u64 = 45;
const TABLE_LIMIT: Duration = Duration::from_secs(600);
const MINIMAL_LIMIT: Duration = Duration::from_secs(120);
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const SPECTRUM_LIMIT: Duration = Duration::from_secs(300);
const OBSTRUCTION_LIMIT: Duration = Duration::from_secs(600);
const COROLLARY_LIMIT: Duration = Duration::from_secs(1);
const RANDOM_VECTORS: usize = 200;
const RESAMPLE_SEEDS: u64 = 20;
const RESAMPLE_CAP: u64 = 1_000_000;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, ok: bool, name: &str, tolerance: &str, detail: String) {
        if !ok {
            self.failures += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {name} [tol: {tolerance}] {detail}");
    }
}

fn g(s: &[u64]) -> Grid {
    Grid::from_sides(s).unwrap()
}

fn budget() -> SearchBudget {
    SearchBudget::new(u64::MAX, 600)
}

fn table_checks(report: &mut Report) {
    let start = Instant::now();
    let table = a3_table(3..=8, 3..=8, &SearchBudget::new(u64::MAX, TABLE_CELL_SECONDS)).unwrap();
    let elapsed = start.elapsed();
    let cell = |a1, a2| table.get(a1, a2).unwrap().a3_bound;
    let wanted = [((3, 7), 127), ((3, 8), 85), ((5, 5), 101), ((5, 6), 76)];
    let got: Vec<String> = wanted
        .iter()
        .map(|&((a1, a2), _)| format!("({a1},{a2})={:?}", cell(a1, a2)))
        .collect();
    let exact = wanted.iter().all(|&((a1, a2), v)| cell(a1, a2) == Some(v));
    report.line(
        exact && elapsed < TABLE_LIMIT,
        "a3-table-exact-cells",
        "exact, < 600 s",
        format!("{} in {:.1}s", got.join(" "), elapsed.as_secs_f64()),
    );

    let mut checked = 0;
    let mut better = Vec::new();
    let mut violations = Vec::new();
    let mut skipped = Vec::new();
    for e in &table.cells {
        if !e.t_exact {
            skipped.push(format!("({},{})", e.a1, e.a2));
            continue;
        }
        let (Some(ours), Some(theirs)) = (e.a3_bound, published_a3(e.a1, e.a2)) else {
            continue;
        };
        checked += 1;
        if ours > theirs {
            violations.push(format!("({},{}) {ours}>{theirs}", e.a1, e.a2));
        } else if ours < theirs {
            better.push(format!("({},{}) {ours}<{theirs}", e.a1, e.a2));
        }
        if let Some(cert) = &e.certificate {
            if verify(cert, &budget()).is_err() {
                violations.push(format!("({},{}) certificate rejected", e.a1, e.a2));
            }
        }
    }
    report.line(
        violations.is_empty() && checked > 0,
        "a3-table-soundness-3..8",
        "bound <= published",
        format!(
            "{checked} cells compared; violations: [{}]; smaller: [{}]; t not exact: [{}]",
            violations.join(" "),
            better.join(" "),
            skipped.join(" ")
        ),
    );
}

fn exponent_checks(report: &mut Report) {
    let got: Vec<u64> = (3..=6)
        .map(|d| obstruction_count_exponent(d).unwrap().exponent.to_u64().unwrap())
        .collect();
    let agree = (3..=12).all(|d| obstruction_count_exponent(d).unwrap().routes_agree == Some(true));
    report.line(
        got == [8, 25, 76, 229] && agree,
        "obstruction-exponents",
        "exact",
        format!("d=3..6 -> {got:?}; maximization route agrees for d<=12: {agree}"),
    );
}

fn minimal_coloring_checks(report: &mut Report) {
    let start = Instant::now();
    let mus = mu_sequence(2u32, 3).unwrap();
    let mut ok = mus == [3u32, 7, 127].map(BigUint::from);
    let mut details = vec![format!("mu(2,3)={:?}", mus.iter().map(ToString::to_string).collect::<Vec<_>>())];
    for (c, d) in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)] {
        let m = minimal_coloring(c, d).unwrap();
        let count = m.coloring.count_monochromatic_boxes();
        let trimmed = m.coloring.remove_last_layer().unwrap().count_monochromatic_boxes();
        ok &= count == BigUint::one() && trimmed == BigUint::default();
        details.push(format!("(c={c},d={d}) boxes={count} trimmed={trimmed}"));
    }
    let elapsed = start.elapsed();
    report.line(
        ok && elapsed < MINIMAL_LIMIT,
        "mu-sequence-minimal-colorings",
        "exact, < 120 s",
        format!("{} in {:.1}s", details.join("; "), elapsed.as_secs_f64()),
    );
}

fn oracle_checks(report: &mut Report) {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for r in 1..=4usize {
        for s in 1..=6usize {
            let q = min_rectangles(r, s, &budget()).unwrap().exact();
            let e = min_mono_boxes_exact(2, &g(&[r as u64, s as u64]), &budget())
                .exact()
                .and_then(|t| t.to_u64());
            let brute = brute_min_rectangles(r, s);
            if q != Some(brute) || e != Some(brute) {
                mismatches.push(format!("[{r},{s}] qform={q:?} search={e:?} brute={brute}"));
            }
        }
    }
    let inst = build_matrix(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut vector_mismatches = 0;
    for _ in 0..RANDOM_VECTORS {
        let mut v: Vec<u64> = (0..16).map(|_| rng.gen_range(0..3)).collect();
        v[rng.gen_range(0..16)] += 1;
        let col = coloring_from_vector(4, &v).unwrap();
        if qform_penalized(&inst, &v).unwrap() != col.count_monochromatic_boxes() * 2u32 {
            vector_mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    report.line(
        mismatches.is_empty() && vector_mismatches == 0 && elapsed < ORACLE_LIMIT,
        "qform-search-oracles",
        "exact, < 300 s",
        format!(
            "r<=4,s<=6 mismatches: [{}]; random vectors: {vector_mismatches}/{RANDOM_VECTORS} mismatched; {:.1}s",
            mismatches.join(" "),
            elapsed.as_secs_f64()
        ),
    );
}

fn spectrum_checks(report: &mut Report) {
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for r in 3..=7 {
        let rep = spectrum(r).unwrap();
        let pairs: Vec<String> = rep.pairs.iter().map(|p| format!("{}:{}", p.lambda, p.mult)).collect();
        let stated: Vec<String> = conjectured_spectrum(r)
            .unwrap()
            .iter()
            .map(|p| format!("{}:{}", p.lambda, p.mult))
            .collect();
        let matches = rep.verified && rep.matches_conjecture == Some(true);
        ok &= matches;
        details.push(format!(
            "r={r} exact {{{}}} stated {{{}}} trace_ok={}",
            pairs.join(","),
            stated.join(","),
            rep.trace_matches
        ));
    }
    report.line(
        ok,
        "spectrum-formula-r3..7",
        "exact",
        details.join("; "),
    );
    let psd: Vec<Option<bool>> = (3..=9).map(|r| psd_check(r).unwrap()).collect();
    let elapsed = start.elapsed();
    report.line(
        psd.iter().all(|&p| p == Some(true)) && elapsed < SPECTRUM_LIMIT,
        "psd-r3..9",
        "exact, < 300 s",
        format!("{psd:?} in {:.1}s", elapsed.as_secs_f64()),
    );
}

fn bound_soundness_checks(report: &mut Report) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let (mut delta_checked, mut eps_checked, mut lll_checked) = (0, 0, 0);
    for c in [2u64, 3] {
        for d in 1..=4 {
            let threshold = lll_volume_threshold(c, d).unwrap();
            for grid in grids_up_to(d, 24) {
                let name = format!("c={c} {grid}");
                let mut min: Option<BigUint> = None;
                let mut exact_min = || -> BigUint {
                    min.get_or_insert_with(|| {
                        min_mono_boxes_exact(c as usize, &grid, &budget())
                            .exact()
                            .cloned()
                            .expect("small grids decide")
                    })
                    .clone()
                };
                for ceiling in [false, true] {
                    if let Some(bound) = guaranteed_count_lower_bound(c, &grid, ceiling).unwrap() {
                        delta_checked += 1;
                        let m = BigRational::from_integer(exact_min().into());
                        if bound > m {
                            problems.push(format!("{name}: bound {bound} > min {m}"));
                        }
                    }
                }
                if epsilon(c, &grid).unwrap() < BigRational::one() {
                    eps_checked += 1;
                    if find_coloring(c as usize, &grid, &budget()) != FindOutcome::Guaranteed {
                        problems.push(format!("{name}: eps < 1 but not guaranteed"));
                    }
                }
                if grid.volume() <= threshold {
                    lll_checked += 1;
                    if !matches!(find_coloring(c as usize, &grid, &budget()), FindOutcome::Colorable(_)) {
                        problems.push(format!("{name}: below the local-lemma threshold but not colorable"));
                    }
                }
            }
        }
    }
    report.line(
        problems.is_empty(),
        "bound-soundness-volume<=24",
        "exact",
        format!(
            "count bounds checked {delta_checked}, eps<1 grids {eps_checked}, threshold grids {lll_checked}; problems: [{}]; {:.1}s",
            problems.join(" "),
            start.elapsed().as_secs_f64()
        ),
    );
}

fn obstruction_checks(report: &mut Report) {
    let start = Instant::now();
    let set = obstruction_set(2, 2, &g(&[8, 30]), &budget()).unwrap();
    let grids: Vec<String> = set.grids.iter().map(ToString::to_string).collect();
    let mut ok = set.grids == [g(&[3, 7]), g(&[5, 5])] && set.frontier_complete;
    for entry in &set.entries {
        ok &= entry.guarantee.verdict == Verdict::Guaranteed && verify(&entry.guarantee, &budget()).is_ok();
        ok &= !entry.decrements.is_empty();
        for dec in &entry.decrements {
            ok &= dec.verdict == Verdict::Colorable && verify(dec, &budget()).is_ok();
        }
    }
    let colorable: Vec<Grid> = set.entries.iter().flat_map(|e| e.decrements.iter().map(|c| c.grid.canonicalize())).collect();
    let mut witnessed = Vec::new();
    for w in [g(&[3, 6]), g(&[4, 6])] {
        let cert = is_guaranteed_exact(2, &w, &budget());
        let valid = cert.verdict == Verdict::Colorable && verify(&cert, &budget()).is_ok();
        ok &= valid;
        witnessed.push(format!("{w}:{}", if valid { "verified" } else { "rejected" }));
    }
    let elapsed = start.elapsed();
    report.line(
        ok && elapsed < OBSTRUCTION_LIMIT,
        "obstructions-c2-d2",
        "exact, < 600 s",
        format!(
            "{{{}}} complete={} decrement witnesses {:?}; {} in {:.1}s",
            grids.join(", "),
            set.frontier_complete,
            colorable.iter().map(ToString::to_string).collect::<Vec<_>>(),
            witnessed.join(" "),
            elapsed.as_secs_f64()
        ),
    );
}

fn corollary_checks(report: &mut Report) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for c in 2u32..=5 {
        for d in 1..=6usize {
            let eps = epsilon(c, &corollary_grid(c, d).unwrap()).unwrap();
            let want = BigRational::new((d as i64).into(), (d as i64 + 1).into());
            if eps != want {
                bad.push(format!("c={c} d={d}: {eps}"));
            }
        }
    }
    let elapsed = start.elapsed();
    report.line(
        bad.is_empty() && elapsed < COROLLARY_LIMIT,
        "corollary-grid-epsilon",
        "exact, < 1 s",
        format!("24 cases; off: [{}] in {:.3}s", bad.join(" "), elapsed.as_secs_f64()),
    );
}

fn resample_checks(report: &mut Report) {
    let grid = g(&[4, 6]);
    let mut ok = true;
    let mut steps = Vec::new();
    for seed in 0..RESAMPLE_SEEDS {
        let a = moser_tardos_color(2, &grid, seed, RESAMPLE_CAP).unwrap();
        let b = moser_tardos_color(2, &grid, seed, RESAMPLE_CAP).unwrap();
        ok &= a.success && a.coloring.is_box_free() && a == b;
        steps.push(a.resamples);
    }
    report.line(
        ok,
        "moser-tardos-4x6",
        "all seeds succeed, identical reruns",
        format!("{RESAMPLE_SEEDS} seeds, resamples {steps:?}"),
    );
}

fn main() {
    let mut report = Report { failures: 0 };
    corollary_checks(&mut report);
    exponent_checks(&mut report);
    resample_checks(&mut report);
    minimal_coloring_checks(&mut report);
    oracle_checks(&mut report);
    bound_soundness_checks(&mut report);
    obstruction_checks(&mut report);
    spectrum_checks(&mut report);
    table_checks(&mut report);
    if report.failures > 0 {
        println!("{} criteria failed", report.failures);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
