//! Acceptance suite. Runs every criterion in sequence (timings are not
//! disturbed by parallel tests), prints one PASS/FAIL line each and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rule150::bench::{measure_scaling, ITERATION_RATIO_BAND, SIMULATION_RATIO_BAND};
use rule150::blocks::{
    block_sum, block_sum_fib, detrend_offset, detrended_series, MAX_BLOCK_SUM_N,
};
use rule150::eca::{row150_polynomial, simulate_activity, RuleNumber};
use rule150::replication::{activity_series, ReplicationRule};
use rule150::spin::{activity_closed_form, chi, chi_closed, MAX_CHI_N};
use rule150::{Error, Method};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TABLE1: &str = include_str!("data/table1.txt");
const TABLE2: &str = include_str!("data/table2.txt");

fn data_rows(text: &str) -> impl Iterator<Item = Vec<u64>> + '_ {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
}

/// Table 1 flattened to `X(0..256)`.
fn table1() -> Vec<u64> {
    let grid: Vec<Vec<u64>> = data_rows(TABLE1).collect();
    assert_eq!(grid.len(), 16);
    (0..256).map(|t| grid[t % 16][t / 16]).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_diff(label: &str, got: &[u64], want: &[u64]) -> Result<(), String> {
    ensure(got.len() == want.len(), || {
        format!("{label}: length {} != {}", got.len(), want.len())
    })?;
    match got.iter().zip(want).position(|(a, b)| a != b) {
        None => Ok(()),
        Some(t) => Err(format!("{label}: t={t} got {} want {}", got[t], want[t])),
    }
}

fn table1_reproduction() -> Outcome {
    let want = table1();
    let start = Instant::now();
    for method in Method::ALL {
        let got = method.series(256).map_err(|e| e.to_string())?;
        first_diff(method.name(), &got, &want)?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("256 values x 3 methods in {elapsed:?}"))
}

fn table2_reproduction() -> Outcome {
    for row in data_rows(TABLE2) {
        let (n, s) = (row[0] as u32, row[1]);
        ensure(block_sum(n) == Ok(s), || {
            format!("recurrence S_{n} = {:?}, want {s}", block_sum(n))
        })?;
        ensure(block_sum_fib(n) == Ok(s), || {
            format!("F_(n+2)*2^n S_{n} = {:?}, want {s}", block_sum_fib(n))
        })?;
    }
    Ok("S_0..S_17 via recurrence and Fibonacci".into())
}

fn chi_consistency() -> Outcome {
    let iterated = activity_series(1 << 20).map_err(|e| e.to_string())?;
    let simulated = simulate_activity(RuleNumber::RULE_150, (1 << 12) + 1);
    for n in 0..=20u32 {
        let t = (1u64 << n) - 1;
        let recurrence = chi(n).map_err(|e| e.to_string())?;
        ensure(chi_closed(n) == Ok(recurrence), || {
            format!("chi_closed({n}) != chi({n})")
        })?;
        ensure(iterated.at(t) == Some(recurrence), || {
            format!("iteration X({t}) != chi({n})")
        })?;
        ensure(activity_closed_form(t) == Ok(recurrence), || {
            format!("closed X({t}) != chi({n})")
        })?;
        if n <= 12 {
            ensure(simulated[t as usize] == recurrence, || {
                format!("simulated X({t}) != chi({n})")
            })?;
        }
    }
    let table = table1();
    for (n, want) in [(0u32, 1u64), (3, 11), (5, 43), (8, 341)] {
        ensure(chi(n) == Ok(want), || {
            format!("chi({n}) = {:?}, want {want}", chi(n))
        })?;
        ensure(table[(1 << n) - 1] == want, || {
            format!("Table 1 X(2^{n}-1) != {want}")
        })?;
    }
    Ok("n <= 20 (iteration/closed), n <= 12 (simulation), spot values".into())
}

fn cross_method_equivalence() -> Outcome {
    let iterated = activity_series(1 << 16).map_err(|e| e.to_string())?;
    for (t, &x) in iterated.values().iter().enumerate() {
        let closed = activity_closed_form(t as u64).map_err(|e| e.to_string())?;
        ensure(x == closed, || {
            format!("t={t} iteration={x} closed={closed}")
        })?;
    }
    let simulated = simulate_activity(RuleNumber::RULE_150, 1 << 13);
    first_diff("simulation", &simulated, &iterated.values()[..1 << 13])?;
    for t in 0..=512u64 {
        let poly = row150_polynomial(t).popcount();
        ensure(poly == iterated.values()[t as usize], || {
            format!("polynomial popcount differs at t={t}")
        })?;
    }
    Ok("t < 2^16 closed, t < 2^13 simulation, t <= 512 polynomial".into())
}

fn detrending() -> Outcome {
    let levels = 20;
    let d = detrended_series(1 << levels).map_err(|e| e.to_string())?;
    ensure(d[0] == 0, || format!("t=0 detrended to {}", d[0]))?;
    for n in 1..=levels {
        let sum: i64 = d[(1 << (n - 1))..(1 << n)].iter().sum();
        ensure(sum == 0, || format!("block n={n} sums to {sum}"))?;
    }
    let offsets: Vec<u64> = (0..=5).map(|n| detrend_offset(n).unwrap()).collect();
    ensure(offsets == [1, 3, 4, 7, 11, 18], || {
        format!("N_0..N_5 = {offsets:?}")
    })?;
    Ok("dyadic blocks n <= 20 sum to 0; N_0..N_5 = 1,3,4,7,11,18".into())
}

fn self_similarity() -> Outcome {
    let x = activity_series(1 << 16)
        .map_err(|e| e.to_string())?
        .into_values();
    let mut checked = 0;
    for m in 1..(1usize << 13) {
        for j in 0..4 {
            let t = 8 * m + j;
            ensure(x[t] == x[j] * x[m], || {
                format!("X({t})={} but X({j})*X({m})={}", x[t], x[j] * x[m])
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} values with 8 <= 8m+j < 2^16"))
}

fn variant_rules() -> Outcome {
    let sierpinski = ReplicationRule::sierpinski()
        .run(12)
        .map_err(|e| e.to_string())?
        .concatenated();
    let thue_morse = ReplicationRule::thue_morse()
        .run(12)
        .map_err(|e| e.to_string())?
        .concatenated();
    ensure(
        sierpinski.len() == 1 << 12 && thue_morse.len() == 1 << 12,
        || "wrong lengths".into(),
    )?;
    for t in 0..(1usize << 12) {
        let ones = t.count_ones();
        ensure(sierpinski[t] == 1 << ones, || {
            format!("Sierpinski t={t}: {}", sierpinski[t])
        })?;
        let sign = if ones % 2 == 0 { 1 } else { -1 };
        ensure(thue_morse[t] == sign, || {
            format!("Thue-Morse t={t}: {}", thue_morse[t])
        })?;
    }
    Ok("t < 2^12 for both".into())
}

fn eigenvalue_limit() -> Outcome {
    let s30 = block_sum(30).map_err(|e| e.to_string())?;
    let s29 = block_sum(29).map_err(|e| e.to_string())?;
    let err = (s30 as f64 / s29 as f64 - (1.0 + 5f64.sqrt())).abs();
    ensure(err < 1e-9, || format!("|S_30/S_29 - (1+sqrt5)| = {err:e}"))?;
    Ok(format!("|S_30/S_29 - (1+sqrt5)| = {err:.3e}"))
}

fn complexity_separation() -> Outcome {
    let runs = [
        (
            Method::Iteration,
            [1usize << 17, 1 << 18],
            ITERATION_RATIO_BAND,
        ),
        (Method::Simulate, [1 << 13, 1 << 14], SIMULATION_RATIO_BAND),
    ];
    let mut report = Vec::new();
    for (method, sizes, band) in runs {
        let start = Instant::now();
        let points = measure_scaling(method, &sizes, 9).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let ratio = points[1].doubling_ratio.expect("second point has a ratio");
        ensure(elapsed < Duration::from_secs(60), || {
            format!("{method} bench took {elapsed:?}")
        })?;
        ensure(band.contains(&ratio), || {
            format!(
                "{method} doubling ratio {ratio:.2} outside [{}, {}]",
                band.start(),
                band.end()
            )
        })?;
        report.push(format!("{method} {ratio:.2}"));
    }
    Ok(report.join(", "))
}

fn overflow_discipline() -> Outcome {
    let overflowing = [
        ("chi", chi(MAX_CHI_N + 1)),
        ("chi_closed", chi_closed(MAX_CHI_N + 1)),
        ("block_sum", block_sum(MAX_BLOCK_SUM_N + 1)),
        ("block_sum_fib", block_sum_fib(MAX_BLOCK_SUM_N + 1)),
        ("chi far", chi(1000)),
        ("block_sum far", block_sum(1000)),
    ];
    for (label, result) in overflowing {
        ensure(matches!(result, Err(Error::Overflow(_))), || {
            format!("{label}: {result:?}")
        })?;
    }
    ensure(
        chi(MAX_CHI_N).is_ok() && block_sum(MAX_BLOCK_SUM_N).is_ok(),
        || "last in-range values must succeed".into(),
    )?;
    Ok(format!(
        "chi(n > {MAX_CHI_N}) and S_n (n > {MAX_BLOCK_SUM_N}) report overflow"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Table 1 reproduction", table1_reproduction),
        ("Table 2 reproduction", table2_reproduction),
        ("chi consistency", chi_consistency),
        ("cross-method equivalence", cross_method_equivalence),
        ("detrending", detrending),
        ("self-similarity", self_similarity),
        ("variant rules", variant_rules),
        ("eigenvalue limit", eigenvalue_limit),
        ("complexity separation", complexity_separation),
        ("overflow discipline", overflow_discipline),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
