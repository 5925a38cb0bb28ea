//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use duration_solver::asymptotic::{self, mean_operator_limit, phi_limit};
use duration_solver::simulate::{exhaustive_policy_value, monte_carlo};
use duration_solver::{
    closed_form_value, duration_pmf, mean_operator, mean_operator_direct, payoff, payoff_from_pmf,
    policy_value, solve, transition_prob, Epoch, Horizon, PolicyThresholds,
};

/// (N, k1, k2, v_N) reference rows.
const TABLE: [(usize, usize, usize, f64); 13] = [
    (10, 1, 4, 0.527526),
    (20, 2, 8, 0.464357),
    (30, 3, 12, 0.442977),
    (40, 4, 16, 0.432325),
    (50, 6, 21, 0.426411),
    (60, 7, 25, 0.422846),
    (70, 8, 29, 0.420142),
    (80, 9, 33, 0.418024),
    (90, 10, 37, 0.416322),
    (100, 12, 41, 0.415064),
    (200, 24, 83, 0.409431),
    (500, 60, 208, 0.406064),
    (1000, 120, 417, 0.404944),
];

const A_REF: f64 = 0.120381;
const B_REF: f64 = 0.417188;
const V_REF: f64 = 0.403827;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn h(n: usize) -> Horizon {
    Horizon::new(n).expect("valid horizon")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_thresholds() -> Outcome {
    for &(n, k1, k2, _) in &TABLE {
        let t = solve(h(n)).thresholds;
        ensure((t.k1, t.k2) == (k1, k2), || format!("N={n}: got ({}, {}), want ({k1}, {k2})", t.k1, t.k2))?;
    }
    Ok("13/13 threshold pairs exact".into())
}

fn c2_values() -> Outcome {
    let mut worst = 0.0f64;
    for &(n, _, _, v) in &TABLE {
        let got = solve(h(n)).value;
        let err = (got - v).abs();
        worst = worst.max(err);
        ensure(err <= 5e-7, || format!("N={n}: v={got:.9}, want {v} (err {err:.2e})"))?;
    }
    Ok(format!("13/13 values within 5e-7 (max err {worst:.2e})"))
}

fn c3_constants() -> Outcome {
    let b = asymptotic::solve_b();
    let a = asymptotic::solve_a(b).map_err(|e| e.to_string())?;
    let v = asymptotic::asymptotic_value().map_err(|e| e.to_string())?;
    ensure((b - B_REF).abs() <= 1e-6, || format!("b={b}"))?;
    ensure((a - A_REF).abs() <= 1e-5, || format!("a={a}"))?;
    ensure((v - V_REF).abs() <= 1e-5, || format!("v={v}"))?;
    Ok(format!("a={a:.9} b={b:.9} v={v:.9}"))
}

fn c4_large_n() -> Outcome {
    let n = 100_000;
    let r = solve(h(n));
    let nf = n as f64;
    let (r1, r2) = (r.thresholds.k1 as f64 / nf, r.thresholds.k2 as f64 / nf);
    ensure((r1 - A_REF).abs() <= 5e-4, || format!("k1/N={r1}"))?;
    ensure((r2 - B_REF).abs() <= 5e-4, || format!("k2/N={r2}"))?;
    ensure((r.value - V_REF).abs() <= 5e-4, || format!("v_N={}", r.value))?;
    Ok(format!("k1/N={r1} k2/N={r2} v_N={:.7}", r.value))
}

fn c5_exhaustive() -> Outcome {
    let mut pairs = 0;
    for n in 2..=8 {
        let hz = h(n);
        let sol = solve(hz);
        let mut best = f64::MIN;
        let mut values = Vec::new();
        for pol in PolicyThresholds::all(hz) {
            let e = exhaustive_policy_value(hz, pol).map_err(|e| e.to_string())?;
            let d = policy_value(pol, hz).map_err(|e| e.to_string())?;
            ensure((e - d).abs() <= 1e-12, || format!("N={n} {pol:?}: exhaustive {e} vs DP {d}"))?;
            best = best.max(e);
            values.push((pol, e));
            pairs += 1;
        }
        ensure((best - sol.value).abs() <= 1e-12, || format!("N={n}: max {best} vs solve {}", sol.value))?;
        let maximizers: Vec<PolicyThresholds> =
            values.iter().filter(|&&(_, v)| v >= best - 1e-12).map(|&(p, _)| p).collect();
        ensure(maximizers.contains(&sol.thresholds), || {
            format!("N={n}: solve thresholds {:?} not among maximizers {maximizers:?}", sol.thresholds)
        })?;
        ensure(maximizers.iter().all(|p| p.k1 == sol.thresholds.k1), || {
            format!("N={n}: maximizers {maximizers:?} disagree on k1")
        })?;
    }
    Ok(format!("{pairs} (N, k1, k2) cases agree; optimum attained by solve thresholds"))
}

fn c6_identities() -> Outcome {
    let mut worst_payoff = 0.0f64;
    for n in 2..=300 {
        for k in 1..=n {
            for r in 1..=2.min(k) {
                let a = payoff(k, r, h(n)).map_err(|e| e.to_string())?;
                let b = payoff_from_pmf(k, r, h(n)).map_err(|e| e.to_string())?;
                worst_payoff = worst_payoff.max((a - b).abs());
            }
        }
    }
    ensure(worst_payoff <= 1e-12, || format!("payoff vs pmf max err {worst_payoff:.2e}"))?;

    let mut worst_mean = 0.0f64;
    for n in 2..=500 {
        for k in 2..=n {
            let a = mean_operator(k, h(n)).map_err(|e| e.to_string())?;
            let b = mean_operator_direct(k, h(n)).map_err(|e| e.to_string())?;
            worst_mean = worst_mean.max((a - b).abs());
        }
    }
    ensure(worst_mean <= 1e-12, || format!("mean operator max err {worst_mean:.2e}"))?;

    let mut worst_cf = 0.0f64;
    for n in [10, 50, 100, 500, 1000] {
        let r = solve(h(n));
        let cf = closed_form_value(r.thresholds.k1, r.thresholds.k2, h(n)).map_err(|e| e.to_string())?;
        worst_cf = worst_cf.max((cf - r.continuation(r.thresholds.k1)).abs());
    }
    ensure(worst_cf <= 1e-10, || format!("closed form max err {worst_cf:.2e}"))?;
    Ok(format!(
        "payoff {worst_payoff:.1e}, mean operator {worst_mean:.1e}, closed form {worst_cf:.1e}"
    ))
}

fn c7_properties() -> Outcome {
    for n in 2..=200 {
        let hz = h(n);
        for i in 1..=n {
            for r in 1..=2.min(i) {
                let total = duration_pmf(i, r, hz).map_err(|e| e.to_string())?.total();
                ensure((total - 1.0).abs() <= 1e-12, || format!("pmf N={n} i={i} r={r} total {total}"))?;
            }
        }
        for k in 2..=n {
            let p1 = payoff(k, 1, hz).map_err(|e| e.to_string())?;
            let p2 = payoff(k, 2, hz).map_err(|e| e.to_string())?;
            ensure(p1 >= p2, || format!("phi(k,1) < phi(k,2) at N={n} k={k}"))?;
            let row: f64 = (k + 1..=n)
                .map(|s| transition_prob(k, Epoch::At(s), hz).expect("valid"))
                .sum();
            let absorbed = transition_prob(k, Epoch::Absorbed, hz).map_err(|e| e.to_string())?;
            ensure((2.0 * row + absorbed - 1.0).abs() <= 1e-12, || format!("row N={n} k={k}"))?;
        }
    }
    for n in (2..=300).chain([500, 1000, 5000]) {
        let r = solve(h(n));
        let c = r.continuation_table();
        // one-ulp jitter where the recursion averages equal values
        ensure(c.windows(2).all(|w| w[1] <= w[0] + 1e-15), || format!("continuation not monotone at N={n}"))?;
        for k in 1..=r.thresholds.k1 {
            ensure((r.continuation(k) - r.value).abs() <= 1e-15, || format!("continuation not flat at N={n} k={k}"))?;
        }
    }
    Ok("pmf normalization, payoff dominance, monotone/flat continuation, chain rows".into())
}

fn c8_monte_carlo() -> Outcome {
    let hz = h(100);
    let pol = PolicyThresholds::new(12, 41).map_err(|e| e.to_string())?;
    let first = monte_carlo(hz, pol, 1_000_000, 42).map_err(|e| e.to_string())?;
    let second = monte_carlo(hz, pol, 1_000_000, 42).map_err(|e| e.to_string())?;
    let z = (first.mean - 0.415064) / first.std_error;
    ensure(z.abs() < 3.0, || format!("mean {} se {} z {z}", first.mean, first.std_error))?;
    ensure(
        first.mean.to_bits() == second.mean.to_bits() && first.std_error.to_bits() == second.std_error.to_bits(),
        || "repeated run differs".into(),
    )?;
    Ok(format!("mean {:.6} se {:.2e} z {z:.3}; repeat bit-identical", first.mean, first.std_error))
}

fn c9_limits() -> Outcome {
    let n = 100_000;
    let hz = h(n);
    let bound = 5.0 / n as f64;
    let mut worst = 0.0f64;
    for i in 1..=19 {
        let x = 0.05 * i as f64;
        let k = (x * n as f64).round() as usize;
        for r in 1..=2 {
            let finite = payoff(k, r, hz).map_err(|e| e.to_string())?;
            let limit = phi_limit(x, r).map_err(|e| e.to_string())?;
            worst = worst.max((finite - limit).abs());
        }
        let finite = mean_operator(k, hz).map_err(|e| e.to_string())?;
        let limit = mean_operator_limit(x).map_err(|e| e.to_string())?;
        worst = worst.max((finite - limit).abs());
    }
    ensure(worst <= bound, || format!("max gap {worst:.2e} > {bound:.2e}"))?;
    Ok(format!("max gap {worst:.2e} <= {bound:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 table thresholds", c1_thresholds, Duration::from_secs(1)),
        ("2 table values", c2_values, Duration::from_secs(1)),
        ("3 asymptotic constants", c3_constants, Duration::from_secs(1)),
        ("4 large-N convergence", c4_large_n, Duration::from_secs(10)),
        ("5 exhaustive oracle", c5_exhaustive, Duration::from_secs(120)),
        ("6 identity suite", c6_identities, Duration::from_secs(60)),
        ("7 property suite", c7_properties, Duration::from_secs(60)),
        ("8 Monte Carlo gate", c8_monte_carlo, Duration::from_secs(30)),
        ("9 limit consistency", c9_limits, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; runtime {elapsed:.2?} over {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  criterion {name}: {reason} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
