//! End-to-end acceptance checks. Each test prints one PASS/FAIL line with the
//! measured value and the required range, then asserts.
//!
//! The convergence checks share one sweep: 30 seeded 10×10 random zero-sum
//! games, every solver, 10⁵ iterations.

mod common;

use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use eqsolve::generator::{named_game, random_zero_sum};
use eqsolve::harness::{
    dwfp_average_at_weights, exploitability_matched_correspondence, fit_loglog_slope,
    iterations_to_reach, max_gap, median, run_sweep, runs_of, small_step_fp_oracle,
    weight_correspondence, ExperimentConfig,
};
use eqsolve::solvers::{
    potential, run, DwfpState, EvalSchedule, FpState, Init, RmState, RmVariant, RunOptions,
    WeightSearch,
};
use eqsolve::{SolverKind, StrategyProfile, TraceRow};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const SUITE_GAMES: usize = 30;
const SUITE_ITERATIONS: u64 = 100_000;
const FIT_LO: f64 = 1e2;
const FIT_HI: f64 = 1e4;

struct Suite {
    rows: Vec<TraceRow>,
    seconds: f64,
}

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let config = ExperimentConfig {
            rows: 10,
            cols: 10,
            num_games: SUITE_GAMES,
            base_seed: 0,
            max_iterations: SUITE_ITERATIONS,
            ..Default::default()
        };
        let start = Instant::now();
        let rows = run_sweep(&config).expect("suite sweep");
        Suite { rows, seconds: start.elapsed().as_secs_f64() }
    })
}

fn report(name: &str, passed: bool, detail: String) {
    let status = if passed { "PASS" } else { "FAIL" };
    // written past the test harness's capture so passing lines show too
    let _ = writeln!(std::io::stderr(), "acceptance {status} {name}: {detail}");
    assert!(passed, "{name}: {detail}");
}

fn median_slope(kind: SolverKind, fit: fn(&[TraceRow], f64, f64) -> eqsolve::Result<eqsolve::harness::SlopeFit>) -> f64 {
    let slopes: Vec<f64> = runs_of(&suite().rows, kind)
        .values()
        .map(|run| fit(run, FIT_LO, FIT_HI).expect("fit").slope)
        .collect();
    assert_eq!(slopes.len(), SUITE_GAMES);
    median(&slopes).unwrap()
}

#[test]
fn fp_rate() {
    let slope = median_slope(SolverKind::Fp, fit_loglog_slope);
    let fp_seconds = suite().seconds;
    report(
        "fp_rate",
        (-0.7..=-0.3).contains(&slope),
        format!("median slope {slope:.4} over iterations 1e2..1e4, want [-0.7, -0.3] (sweep of all solvers took {fp_seconds:.1}s)"),
    );
}

#[test]
fn dwfp_rate() {
    let slope = median_slope(SolverKind::Dwfp, fit_loglog_slope);
    report(
        "dwfp_rate",
        (-1.3..=-0.75).contains(&slope),
        format!("median slope {slope:.4} over iterations 1e2..1e4, want [-1.3, -0.75]"),
    );
}

#[test]
fn weight_growth_exponent() {
    let slope = median_slope(SolverKind::Dwfp, weight_correspondence);
    // how FP's iteration count to a given accuracy scales with DW-FP's
    let fp = runs_of(&suite().rows, SolverKind::Fp);
    let matched: Vec<f64> = runs_of(&suite().rows, SolverKind::Dwfp)
        .iter()
        .filter_map(|(seed, run)| {
            exploitability_matched_correspondence(run, &fp[seed], FIT_LO, FIT_HI).ok()
        })
        .map(|f| f.slope)
        .collect();
    let matched = median(&matched).map_or("n/a".to_string(), |m| format!("{m:.3}"));
    report(
        "weight_growth_exponent",
        (1.6..=2.4).contains(&slope),
        format!(
            "median log W vs log t slope {slope:.4}, want [1.6, 2.4] \
             (FP iterations at equal exploitability grow with exponent {matched})"
        ),
    );
}

#[test]
fn dwfp_reaches_target_first() {
    let target = 1e-3;
    let med = |kind| {
        let its: Vec<f64> = runs_of(&suite().rows, kind)
            .values()
            .map(|run| iterations_to_reach(run, target).map_or(f64::INFINITY, |t| t as f64))
            .collect();
        median(&its).unwrap()
    };
    let (dw, rmp, fp) = (med(SolverKind::Dwfp), med(SolverKind::RmPlus), med(SolverKind::Fp));
    report(
        "dwfp_reaches_target_first",
        dw < rmp && dw < fp,
        format!("median iterations to eps 1e-3: dwfp {dw}, rm_plus {rmp}, fp {fp} (inf = not within 1e5)"),
    );
}

#[test]
fn dwfp_iteration_cost() {
    let per_iter = |kind| {
        let t: Vec<f64> = runs_of(&suite().rows, kind)
            .values()
            .map(|run| {
                let last = run.last().unwrap();
                last.wall_time_ns as f64 / last.iteration as f64
            })
            .collect();
        median(&t).unwrap()
    };
    let (dw, greedy) = (per_iter(SolverKind::Dwfp), per_iter(SolverKind::GreedyRm));
    report(
        "dwfp_iteration_cost",
        dw <= 0.5 * greedy,
        format!(
            "median ns/iteration: dwfp {dw:.0}, greedy_rm {greedy:.0}, ratio {:.3}, want <= 0.5",
            dw / greedy
        ),
    );
}

#[test]
fn unit_weight_equivalence() {
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let g = random_zero_sum(5, 5, seed).unwrap();
        let init = Init::Seeded(seed).profile(&g);
        let mut fp = FpState::new(&g, &init).unwrap();
        let mut dw = DwfpState::new(&g, &init).unwrap().with_fixed_weight(1.0);
        for _ in 0..1000 {
            fp.fp_step(&g);
            dw.dwfp_step(&g);
            for (a, b) in [(fp.qbar(), dw.qbar()), (fp.avg(), dw.avg())] {
                for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    report(
        "unit_weight_equivalence",
        worst <= 1e-12,
        format!("max |difference| in Q and average over 5 games x 1000 steps: {worst:.3e}, want <= 1e-12"),
    );
}

#[test]
fn small_step_oracle() {
    let marks: Vec<f64> = (1..=100).map(f64::from).collect();
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let g = random_zero_sum(5, 5, seed).unwrap();
        let init = Init::Seeded(seed).profile(&g);
        let dw = dwfp_average_at_weights(&g, &init, &marks).unwrap();
        let fp = small_step_fp_oracle(&g, &init, 1e-3, 100.0, &marks).unwrap();
        assert_eq!(dw.len(), marks.len());
        worst = worst.max(max_gap(&dw, &fp));
    }
    report(
        "small_step_oracle",
        worst <= 1e-2,
        format!("max inf-norm gap at W = 1..100 over 5 games: {worst:.3e}, want <= 1e-2"),
    );
}

#[test]
fn greedy_potential_monotone() {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for seed in 0..10 {
        let g = random_zero_sum(10, 10, seed).unwrap();
        let init = Init::Seeded(seed).profile(&g);
        let mut s = RmState::new(&g, &init, RmVariant::Greedy(WeightSearch::Exact)).unwrap();
        s.greedy_rm_step(&g, WeightSearch::Exact).unwrap();
        let mut prev = potential(s.rbar());
        for _ in 1..10_000 {
            s.greedy_rm_step(&g, WeightSearch::Exact).unwrap();
            let phi = potential(s.rbar());
            let rise = phi - prev;
            worst = worst.max(rise);
            if rise > 1e-9 {
                violations += 1;
            }
            prev = phi;
        }
    }
    report(
        "greedy_potential_monotone",
        violations == 0,
        format!("largest one-step rise of the potential {worst:.3e} ({violations} steps above 1e-9) over 10 games x 1e4 steps, want none"),
    );
}

#[test]
fn fixtures() {
    let mut lines = Vec::new();
    let mut passed = true;
    for name in ["matching_pennies", "rps"] {
        let g = named_game(name).unwrap();
        let e = common::profile_exploitability(&g, &StrategyProfile::uniform(&g));
        passed &= e <= 1e-12;
        lines.push(format!("uniform {name} eps {e:.1e}"));
    }
    let rps = named_game("rps").unwrap();
    for kind in SolverKind::ALL {
        let weighted = matches!(kind, SolverKind::GreedyRm | SolverKind::Dwfp);
        let opts = if weighted {
            RunOptions::new(u64::MAX, 1e4, EvalSchedule::from_iterations(vec![1]))
        } else {
            RunOptions::new(10_000, f64::INFINITY, EvalSchedule::from_iterations(vec![1]))
        };
        let result = run(kind, &rps, &opts).unwrap();
        let last = result.rows.last().unwrap();
        let ok = last.exploitability <= 1e-2;
        passed &= ok;
        lines.push(format!(
            "{kind} eps {:.2e} at t={} W={:.3e}",
            last.exploitability, last.iteration, last.cumulative_weight
        ));
    }
    report("fixtures", passed, format!("{}; want uniform <= 1e-12 and every solver <= 1e-2", lines.join(", ")));
}

#[test]
fn invariants() {
    let cases = 1000;
    let mut results = Vec::new();
    let mut run_property = |name: &str,
                            f: &dyn Fn(&mut TestRunner) -> Result<(), String>| {
        let mut runner = TestRunner::new(Config { cases, ..Config::default() });
        results.push((name.to_string(), f(&mut runner)));
    };
    run_property("simplex", &|r| {
        r.run(&(common::game_and_init(), 0..common::SOLVER_VARIANTS), |((g, init), k)| {
            common::check_simplex(&g, &init, k, 30)
        })
        .map_err(|e| e.to_string())
    });
    run_property("rm_plus_nonnegative", &|r| {
        r.run(&common::game_and_init(), |(g, init)| common::check_rm_plus_nonnegative(&g, &init, 30))
            .map_err(|e| e.to_string())
    });
    run_property("gap_nonnegative", &|r| {
        r.run(&common::game_and_init(), |(g, init)| common::check_gap_nonnegative(&g, &init, 30))
            .map_err(|e| e.to_string())
    });
    run_property("exploitability_nonnegative", &|r| {
        let strat = common::game_and_init().prop_flat_map(|(g, _)| {
            let (m, n) = (g.num_actions(0), g.num_actions(1));
            (Just(g), common::weights(m), common::weights(n))
        });
        r.run(&strat, |(g, x, y)| common::check_exploitability_nonnegative(&g, &x, &y))
            .map_err(|e| e.to_string())
    });
    run_property("determinism", &|r| {
        r.run(&(common::game_and_init(), 0..common::SOLVER_VARIANTS), |((g, init), k)| {
            common::check_determinism(&g, &init, k, 20)
        })
        .map_err(|e| e.to_string())
    });
    let passed = results.iter().all(|(_, r)| r.is_ok());
    let detail = results
        .iter()
        .map(|(n, r)| match r {
            Ok(()) => format!("{n} ok"),
            Err(e) => format!("{n} failed: {e}"),
        })
        .collect::<Vec<_>>()
        .join(", ");
    report("invariants", passed, format!("{cases} cases each: {detail}"));
}
