//! Acceptance suite: one `[PASS]` / `[FAIL]` line per criterion, non-zero exit
//! if any criterion fails. Tolerances and seeds are fixed below.

use std::path::Path;
use std::time::Instant;

use dea_cli::{
    render_csv, run, run_bench, Algorithm, BenchConfig, BenchOutput, RunConfig, Setting,
};
use dea_core::analysis::{
    estimate_pairwise_elcs, expected_lcs_estimate, range_for_probability,
    range_for_probability_uniform, range_lower_bound,
};
use dea_core::datagen::generated_alphabet;
use dea_core::{
    brute_force_lcs, dea_solve, is_common_subsequence, lcs2, lcs_k, long_run, upper_bound, Dataset,
    Distribution, Error, Sequence, SolveOptions, SymbolId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Allowed error on a real-valued search range before ceiling.
const RANGE_TOL: f64 = 0.6;
const UNIFORM_RANGE_TOL_4: f64 = 0.5;
const UNIFORM_RANGE_TOL_20: f64 = 1.0;
const ELCS_TRIALS: usize = 300;
const ELCS_SEED: u64 = 2024;
const ELCS_TOL_4: f64 = 2.0;
const ELCS_TOL_20: f64 = 1.0;
const ORACLE_INSTANCES: usize = 600;
const VALIDITY_INSTANCES: usize = 600;
const BOUND_INSTANCES: usize = 300;
/// Exact DP is attempted up to this many cells in the guarantee suite.
const GUARANTEE_CELL_BUDGET: u128 = 2_000_000;
const BENCH_SEED: u64 = 2024;
const RANDOM_CONTENTS_BAND: (f64, f64) = (250.0, 391.0);
const MIN_DEA_LR_GAP: f64 = 5.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_dataset(
    rng: &mut ChaCha8Rng,
    k_max: usize,
    len_min: usize,
    len_max: usize,
    sigmas: &[usize],
) -> Dataset {
    let sigma = sigmas[rng.gen_range(0..sigmas.len())];
    let k = rng.gen_range(1..=k_max);
    let seqs: Vec<Sequence> = (0..k)
        .map(|_| {
            let len = rng.gen_range(len_min..=len_max);
            (0..len)
                .map(|_| rng.gen_range(0..sigma as SymbolId))
                .collect()
        })
        .collect();
    Dataset::new(generated_alphabet(sigma), seqs).expect("valid ids")
}

fn instances(
    seed: u64,
    count: usize,
    k_max: usize,
    len_min: usize,
    len_max: usize,
    sigmas: &[usize],
) -> Vec<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_dataset(&mut rng, k_max, len_min, len_max, sigmas))
        .collect()
}

fn near(name: &str, got: f64, want: f64, tol: f64) -> Option<String> {
    ((got - want).abs() > tol).then(|| format!("{name}: {got:.4} vs {want} ± {tol}"))
}

fn c1_formula_anchors() -> Outcome {
    let mut failures = Vec::new();
    for (r, want) in [(0.5, 11.0), (0.8, 5.0)] {
        let l = range_for_probability(0.95, 100, r).unwrap();
        if l.ceil() != want {
            failures.push(format!("ceil range(0.95,100,{r}) = {}", l.ceil()));
        }
    }
    failures.extend(near(
        "range(0.05,100,0.5)",
        range_for_probability(0.05, 100, 0.5).unwrap(),
        5.1,
        RANGE_TOL,
    ));
    failures.extend(near(
        "range-uniform(0.95,5000,4)",
        range_for_probability_uniform(0.95, 5000, 4).unwrap(),
        39.9,
        UNIFORM_RANGE_TOL_4,
    ));
    failures.extend(near(
        "range-uniform(0.95,250,20)",
        range_for_probability_uniform(0.95, 250, 20).unwrap(),
        165.5,
        UNIFORM_RANGE_TOL_20,
    ));
    let table = [
        (25, [15.86, 8.75, 4.44]),
        (100, [65.24, 34.83, 18.05]),
        (500, [326.01, 180.56, 89.81]),
        (5000, [3268.26, 1819.85, 900.19]),
    ];
    for (n, elcs) in table {
        for (e, want) in elcs.iter().zip([2u64, 3, 6]) {
            let got = range_lower_bound(n, *e).unwrap();
            if got != want {
                failures.push(format!("lower bound n={n} elcs={e}: {got} vs {want}"));
            }
        }
    }
    let e = expected_lcs_estimate(1000, 50).unwrap();
    if e != 39.0 {
        failures.push(format!("expected-lcs(1000,50) = {e}"));
    }
    if failures.is_empty() {
        outcome(true, "all formula anchors within tolerance")
    } else {
        outcome(false, failures.join("; "))
    }
}

fn c2_monte_carlo() -> Outcome {
    let start = Instant::now();
    let a = estimate_pairwise_elcs(100, 4, ELCS_TRIALS, ELCS_SEED).unwrap();
    let b = estimate_pairwise_elcs(25, 20, ELCS_TRIALS, ELCS_SEED).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok_a = (a.mean - 65.24).abs() <= ELCS_TOL_4;
    let ok_b = (b.mean - 8.75).abs() <= ELCS_TOL_20;
    outcome(
        ok_a && ok_b && secs < 30.0,
        format!(
            "(100,4) mean {:.2} in 65.24±{ELCS_TOL_4}: {ok_a}; (25,20) mean {:.2} in 8.75±{ELCS_TOL_20}: {ok_b}; {secs:.1}s",
            a.mean, b.mean
        ),
    )
}

fn c3_oracle_equivalence() -> Outcome {
    let sets = instances(3, ORACLE_INSTANCES, 3, 0, 10, &[2, 4]);
    let k_mismatch = sets
        .par_iter()
        .filter(|d| lcs_k(d, u128::MAX).unwrap().len() != brute_force_lcs(d, 10).unwrap().len())
        .count();
    let pairs = instances(33, ORACLE_INSTANCES, 1, 0, 10, &[2, 4]);
    let pair_mismatch = pairs
        .par_chunks(2)
        .filter(|c| {
            let (s, t) = (&c[0].sequences()[0], &c[1].sequences()[0]);
            let d = Dataset::new(generated_alphabet(4), vec![s.clone(), t.clone()]).unwrap();
            let got = lcs2(s, t);
            !is_common_subsequence(&got, &d) || got.len() != brute_force_lcs(&d, 10).unwrap().len()
        })
        .count();
    outcome(
        k_mismatch == 0 && pair_mismatch == 0,
        format!(
            "lcs_k mismatches {k_mismatch}/{}; lcs2 mismatches {pair_mismatch}/{}",
            sets.len(),
            pairs.len() / 2
        ),
    )
}

fn validity_instances() -> Vec<Dataset> {
    instances(4, VALIDITY_INSTANCES, 8, 1, 40, &[2, 4, 20])
}

fn c4_universal_validity() -> Outcome {
    let sets = validity_instances();
    let cfg = RunConfig {
        search_range: None,
        cell_budget: GUARANTEE_CELL_BUDGET,
    };
    let results: Vec<(usize, usize)> = sets
        .par_iter()
        .map(|d| {
            let mut checked = 0;
            let mut failed = 0;
            for a in Algorithm::ALL {
                match run(a, d, &cfg) {
                    Ok(out) => {
                        checked += 1;
                        if !is_common_subsequence(&out.cs, d) {
                            failed += 1;
                        }
                    }
                    Err(_) if a == Algorithm::Exact => {}
                    Err(e) => panic!("{a}: {e}"),
                }
            }
            (checked, failed)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let failed: usize = results.iter().map(|r| r.1).sum();
    outcome(
        failed == 0,
        format!(
            "{failed} invalid outputs in {checked} runs over {} instances",
            sets.len()
        ),
    )
}

fn c5_guarantees() -> Outcome {
    let sets = validity_instances();
    let rows: Vec<(bool, Option<bool>)> = sets
        .par_iter()
        .map(|d| {
            let dea = dea_solve(d, &SolveOptions::default()).length;
            let lr = long_run(d).m;
            let bounded = match lcs_k(d, GUARANTEE_CELL_BUDGET) {
                Ok(opt) => {
                    let opt = opt.len();
                    let common_symbol = lr > 0;
                    Some(dea <= opt && (!common_symbol || opt <= d.sigma() * dea))
                }
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => panic!("{e}"),
            };
            (dea >= lr, bounded)
        })
        .collect();
    let lr_fail = rows.iter().filter(|r| !r.0).count();
    let exact_n = rows.iter().filter(|r| r.1.is_some()).count();
    let ratio_fail = rows.iter().filter(|r| r.1 == Some(false)).count();
    outcome(
        lr_fail == 0 && ratio_fail == 0 && exact_n > 0,
        format!(
            "dea < longrun on {lr_fail}/{}; ratio violations {ratio_fail}/{exact_n} exact-solvable",
            rows.len()
        ),
    )
}

fn bench(settings: Vec<Setting>, reps: usize, algorithms: Vec<Algorithm>) -> BenchOutput {
    let cfg = BenchConfig {
        seed: BENCH_SEED,
        reps,
        algorithms,
        settings,
        search_range: None,
        cell_budget: dea_core::DEFAULT_CELL_BUDGET,
        timing: false,
    };
    run_bench(&cfg).expect("bench runs")
}

fn c6_random_contents() -> Outcome {
    let start = Instant::now();
    let out = bench(
        vec![Setting::Generated {
            k: 100,
            n: 1000,
            sigma: 4,
            distribution: Distribution::RandomContents,
        }],
        10,
        vec![Algorithm::LongRun, Algorithm::DeaMc],
    );
    let lr = &out.summaries[0];
    let mc = &out.summaries[1];
    let in_band = mc.mean >= RANDOM_CONTENTS_BAND.0 && mc.mean <= RANDOM_CONTENTS_BAND.1;
    let gap = mc.mean - lr.mean;
    outcome(
        in_band && gap >= MIN_DEA_LR_GAP,
        format!(
            "DEA(MC) {} in [{}, {}]: {in_band}; LR {}; gap {gap:.2} >= {MIN_DEA_LR_GAP}: {}; {:.0}s",
            mc.cell(),
            RANDOM_CONTENTS_BAND.0,
            RANDOM_CONTENTS_BAND.1,
            lr.cell(),
            gap >= MIN_DEA_LR_GAP,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn c7_beta_trend() -> Outcome {
    let betas = [0.1, 0.2, 0.3, 0.4, 0.5];
    let settings = betas
        .iter()
        .map(|&beta| Setting::Generated {
            k: 100,
            n: 300,
            sigma: 4,
            distribution: Distribution::BetaSkew { beta },
        })
        .collect();
    let out = bench(settings, 5, vec![Algorithm::DeaMc]);
    let means: Vec<f64> = out.summaries.iter().map(|s| s.mean).collect();
    let decreasing = means.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = means.iter().map(|m| format!("{m:.1}")).collect();
    outcome(
        decreasing,
        format!("DEA(MC) means over beta 0.1..0.5: {}", shown.join(", ")),
    )
}

fn c8_upper_bound() -> Outcome {
    let sets = instances(8, BOUND_INSTANCES, 5, 1, 10, &[2, 4]);
    let bad = sets
        .par_iter()
        .filter(|d| {
            upper_bound(d, dea_core::DEFAULT_CELL_BUDGET).upper_bound
                < brute_force_lcs(d, 10).unwrap().len()
        })
        .count();
    outcome(
        bad == 0,
        format!(
            "upper bound below optimum on {bad}/{} instances",
            sets.len()
        ),
    )
}

fn c9_determinism() -> Outcome {
    let text = r#"
seed = 31
reps = 4
algorithms = ["longrun", "dea", "dea-mc", "greedy", "tournament"]

[[settings]]
k = 12
n = 80
sigma = 4
dist = "random-contents"

[[settings]]
k = 6
n = 50
sigma = 20
"#;
    let cfg = BenchConfig::from_toml(text, Path::new(".")).expect("config parses");
    // Different pool sizes change completion order but must not change bytes.
    let once = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| render_csv(&run_bench(&cfg).expect("bench runs"), cfg.timing))
    };
    let (a, b) = (once(1), once(8));
    outcome(
        a == b && !a.is_empty(),
        format!(
            "two bench runs (1 and 8 threads): {} and {} bytes, identical: {}",
            a.len(),
            b.len(),
            a == b
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("C1", "formula anchors", c1_formula_anchors),
        ("C2", "pairwise expected LCS Monte Carlo", c2_monte_carlo),
        (
            "C3",
            "exact solvers match brute force",
            c3_oracle_equivalence,
        ),
        ("C4", "universal validity", c4_universal_validity),
        ("C5", "guarantee suite", c5_guarantees),
        ("C6", "random-contents trend", c6_random_contents),
        ("C7", "beta-skew trend", c7_beta_trend),
        ("C8", "upper bound soundness", c8_upper_bound),
        ("C9", "bench determinism", c9_determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| x == id) {
            continue;
        }
        let o = f();
        println!(
            "[{}] {id} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!(
            "acceptance: {} failed ({})",
            failed.len(),
            failed.join(", ")
        );
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
