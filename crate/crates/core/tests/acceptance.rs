//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use lacasse_core::approx::{q_growth_check, tree_eval, Q_RATIO_WINDOW};
use lacasse_core::cli::{self, OutputRecord};
use lacasse_core::exact::{binomial, ipow00, ExactInt, ExactRational};
use lacasse_core::identity::{
    alpha_closed, alpha_direct, beta_closed, beta_direct, ramanujan_q, s_d_closed,
    telescoping_difference, xi_scaled_brute,
};
use lacasse_core::series::{
    geom_power, tree_series, tree_series_by_fixed_point, tree_series_by_formula, TruncatedSeries,
};
use lacasse_core::Error;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

const VERIFY_MAX_N: u64 = 300;
const VERIFY_TIME_LIMIT: Duration = Duration::from_secs(30);
const ALPHA_MAX_N: usize = 100;
const BETA_MAX_N: usize = 60;
const GENERAL_MAX_N: usize = 30;
const GENERAL_MAX_D: u32 = 5;
const Q_LINK_MAX_N: u64 = 200;
const TREE_ORDER: usize = 200;
const TELESCOPE_MAX_N: u64 = 300;
const FLOAT_SAMPLES: usize = 200;
const FLOAT_Z_MAX: f64 = 0.3;
const FLOAT_SERIES_ORDER: usize = 60;
const FLOAT_TOLERANCE: f64 = 1e-12;
const Q_GRID: [u64; 3] = [100, 200, 400];

fn pow_n(n: u64, e: u64) -> ExactInt {
    ipow00(&ExactInt::from(n), e)
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_lacasse")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn integral_egf(series: &TruncatedSeries, n: usize) -> Result<ExactInt, String> {
    let c = series.egf_coeff(n).map_err(|e| e.to_string())?;
    ensure(c.is_integer(), || format!("n! [z^{n}] = {c} is not an integer"))?;
    Ok(c.to_integer())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["verify", "--from", "1", "--to", &VERIFY_MAX_N.to_string(), "--format", "json", "--jobs", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || format!("exit status {:?}", out.status))?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for line in text.lines() {
        let rec: OutputRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        ensure(rec.passed == Some(true), || format!("n={} not passed", rec.n))?;
        if rec.quantity == "diff" {
            ensure(rec.value == pow_n(rec.n, rec.n + 1).to_string(), || format!("n={} diff mismatch", rec.n))?;
            checked += 1;
        }
    }
    ensure(checked == VERIFY_MAX_N, || format!("{checked} diff records"))?;
    ensure(elapsed < VERIFY_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} values of n, {:.1}s single-threaded", elapsed.as_secs_f64()))
}

fn criterion_2() -> Check {
    let y = tree_series(ALPHA_MAX_N).map_err(|e| e.to_string())?;
    let g = geom_power(&y, 2, ALPHA_MAX_N).map_err(|e| e.to_string())?;
    for n in 0..=ALPHA_MAX_N {
        let direct = alpha_direct(n as u64);
        let closed = alpha_closed(n as u64);
        let series = integral_egf(&g, n)?;
        ensure(direct == closed && closed == series, || format!("alpha routes differ at n={n}"))?;
    }
    Ok(format!("0 <= n <= {ALPHA_MAX_N}"))
}

fn criterion_3() -> Check {
    let y = tree_series(BETA_MAX_N).map_err(|e| e.to_string())?;
    let g = geom_power(&y, 3, BETA_MAX_N).map_err(|e| e.to_string())?;
    for n in 0..=BETA_MAX_N {
        let direct = beta_direct(n as u64);
        let closed = beta_closed(n as u64);
        let series = integral_egf(&g, n)?;
        ensure(direct == closed && closed == series, || format!("beta routes differ at n={n}"))?;
    }
    Ok(format!("0 <= n <= {BETA_MAX_N}"))
}

/// The general formula with the binomial index as printed, C(k+d-1, d-1).
fn printed_index_formula(n: u64, d: u64) -> ExactInt {
    // n! sum_k n^{n-k}/(n-k)! C(k+d-1, d-1) = sum_k (n!/(n-k)!) n^{n-k} C(k+d-1, d-1)
    let mut falling = ExactInt::from(1);
    let mut acc = ExactInt::zero();
    for k in 0..=n {
        if k > 0 {
            falling *= n - k + 1;
        }
        acc += &falling * pow_n(n, n - k) * binomial(k + d - 1, (d - 1) as i64);
    }
    acc
}

fn criterion_4() -> Check {
    let y = tree_series(GENERAL_MAX_N).map_err(|e| e.to_string())?;
    let mut printed_mismatches = 0;
    for d in 1..=GENERAL_MAX_D {
        let g = geom_power(&y, d, GENERAL_MAX_N).map_err(|e| e.to_string())?;
        for n in 0..=GENERAL_MAX_N {
            let closed = s_d_closed(n as u64, d).map_err(|e| e.to_string())?;
            let brute = xi_scaled_brute(n as u64, d).map_err(|e| e.to_string())?;
            let series = integral_egf(&g, n)?;
            ensure(closed == brute && brute == series, || format!("s_d routes differ at d={d} n={n}"))?;
            if printed_index_formula(n as u64, u64::from(d)) != closed {
                printed_mismatches += 1;
            }
        }
    }
    Ok(format!(
        "d in 1..={GENERAL_MAX_D}, n <= {GENERAL_MAX_N}; index C(k+d-1, d-1) disagrees in {printed_mismatches} of {} cases",
        GENERAL_MAX_D as usize * (GENERAL_MAX_N + 1)
    ))
}

fn criterion_5() -> Check {
    for n in 1..=Q_LINK_MAX_N {
        let q = ramanujan_q(n).map_err(|e| e.to_string())?;
        let rhs = ExactRational::from_integer(pow_n(n, n)) * (ExactRational::from_integer(1.into()) + q);
        ensure(ExactRational::from_integer(alpha_closed(n)) == rhs, || format!("Q link fails at n={n}"))?;
    }
    Ok(format!("1 <= n <= {Q_LINK_MAX_N}"))
}

fn criterion_6() -> Check {
    let by_formula = tree_series_by_formula(TREE_ORDER);
    let by_fixed_point = tree_series_by_fixed_point(TREE_ORDER).map_err(|e| e.to_string())?;
    ensure(by_formula == by_fixed_point, || "constructions differ".into())?;
    let y = tree_series(TREE_ORDER).map_err(|e| e.to_string())?;
    let rhs = &TruncatedSeries::z(TREE_ORDER) * &y.exp_trunc().map_err(|e| e.to_string())?;
    let residual = &rhs - &y;
    ensure(residual.order() == TREE_ORDER && residual.is_zero(), || "nonzero residual".into())?;
    Ok(format!("order {TREE_ORDER}"))
}

fn criterion_7() -> Check {
    for n in 0..=TELESCOPE_MAX_N {
        let v = telescoping_difference(n).map_err(|e| e.to_string())?;
        ensure(v == pow_n(n, n + 1), || format!("n={n}"))?;
    }
    Ok(format!("0 <= n <= {TELESCOPE_MAX_N}"))
}

fn criterion_8_tree_eval() -> Check {
    let coeffs: Vec<f64> = tree_series_by_formula(FLOAT_SERIES_ORDER)
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap())
        .collect();
    let partial_sum = |z: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c);

    let mut rng = rand::rngs::StdRng::seed_from_u64(20_260_101);
    let mut worst = (0.0f64, 0.0f64);
    let mut failures = 0;
    for _ in 0..FLOAT_SAMPLES {
        let z = rng.gen_range(0.0..=FLOAT_Z_MAX);
        let r = tree_eval(z).map_err(|e| e.to_string())?;
        let gap = (r.y - partial_sum(z)).abs();
        if gap > FLOAT_TOLERANCE {
            failures += 1;
        }
        if gap > worst.1 {
            worst = (z, gap);
        }
    }
    ensure(failures == 0, || {
        format!(
            "{failures}/{FLOAT_SAMPLES} points off by more than {FLOAT_TOLERANCE:e}; worst z={:.4} gap={:.3e} \
             (the order-{FLOAT_SERIES_ORDER} partial sum truncates y(z) by more than the tolerance for z > ~0.258)",
            worst.0, worst.1
        )
    })?;
    Ok(format!("{FLOAT_SAMPLES} points, worst gap {:.3e}", worst.1))
}

fn criterion_8_q_growth() -> Check {
    let table = q_growth_check(&Q_GRID).map_err(|e| e.to_string())?;
    let ratios: Vec<String> = table.rows.iter().map(|r| format!("{}:{:.5}", r.n, r.ratio)).collect();
    for row in &table.rows {
        let exact = ramanujan_q(row.n).map_err(|e| e.to_string())?.to_f64().unwrap();
        ensure(row.q == exact, || format!("Q({}) float mismatch", row.n))?;
        ensure((row.ratio - exact / (PI * row.n as f64 / 2.0).sqrt()).abs() < 1e-15, || "ratio".into())?;
    }
    ensure(table.window_holds(), || format!("ratios outside {Q_RATIO_WINDOW:?}: {ratios:?}"))?;
    ensure(table.approaches_from_below(), || format!("not increasing below 1: {ratios:?}"))?;
    Ok(ratios.join(" "))
}

fn run_bin(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(bin()).args(args).output().map_err(|e| e.to_string())
}

fn criterion_9() -> Check {
    // exit 0 / 2 from the binary
    ensure(run_bin(&["verify", "--from", "1", "--to", "20"])?.status.code() == Some(0), || "verify exit".into())?;
    ensure(run_bin(&["verify", "--from", "5", "--to", "3"])?.status.code() == Some(2), || "bad range exit".into())?;
    ensure(run_bin(&["value", "xi", "0"])?.status.code() == Some(2), || "domain exit".into())?;
    ensure(run_bin(&["bench", "--n-max", "2", "--repetitions", "0"])?.status.code() == Some(2), || "bench exit".into())?;

    // exit 1 when a per-n check fails
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run_with_verifier(
        ["lacasse", "verify", "--from", "1", "--to", "5"],
        &mut out,
        &mut err,
        |v, n| if n == 4 { Err(Error::IdentityFailure { n }) } else { v.verify(n) },
    );
    ensure(code == 1, || format!("failure exit {code}"))?;

    // plain / json / csv carry the same values
    let plain = String::from_utf8(run_bin(&["verify", "--from", "1", "--to", "15"])?.stdout).unwrap();
    let json = String::from_utf8(run_bin(&["verify", "--from", "1", "--to", "15", "--format", "json"])?.stdout).unwrap();
    let csv_text = String::from_utf8(run_bin(&["verify", "--from", "1", "--to", "15", "--format", "csv"])?.stdout).unwrap();
    let json: Vec<OutputRecord> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let csv_rows: Vec<csv::StringRecord> = csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(json.len() == 45 && csv_rows.len() == 45, || "record counts".into())?;
    for (i, line) in plain.lines().take(15).enumerate() {
        for (j, q) in ["alpha", "beta", "diff"].into_iter().enumerate() {
            let rec = &json[3 * i + j];
            let want = line
                .split(' ')
                .find_map(|kv| kv.strip_prefix(&format!("{q}=")))
                .unwrap_or_default();
            ensure(rec.value == want && &csv_rows[3 * i + j][3] == want, || format!("{q} at n={}", i + 1))?;
        }
    }

    // --jobs does not change output
    for format in ["plain", "json", "csv"] {
        let a = run_bin(&["verify", "--from", "1", "--to", "60", "--format", format, "--jobs", "1"])?;
        let b = run_bin(&["verify", "--from", "1", "--to", "60", "--format", format, "--jobs", "8"])?;
        ensure(a.stdout == b.stdout, || format!("--jobs changes {format} output"))?;
    }
    Ok("exit codes 0/1/2, format equivalence, --jobs independence".into())
}

type Criterion = (&'static str, &'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1", "verify n in [1, 300]: beta - alpha = n^(n+1)", criterion_1),
        ("2", "alpha: direct = closed = series, n <= 100", criterion_2),
        ("3", "beta: enumeration = closed = series, n <= 60", criterion_3),
        ("4", "s_d: closed = brute = series, d <= 5, n <= 30", criterion_4),
        ("5", "alpha(n) = n^n (1 + Q(n)), n <= 200", criterion_5),
        ("6", "tree function: formula = fixed point, zero residual, order 200", criterion_6),
        ("7", "telescoping difference = n^(n+1), n <= 300", criterion_7),
        ("8a", "tree_eval vs order-60 partial sum within 1e-12, z in [0, 0.3]", criterion_8_tree_eval),
        ("8b", "Q(n)/sqrt(pi n/2) in [0.97, 1.01] for n in {100, 200, 400}", criterion_8_q_growth),
        ("9", "CLI exit codes, format equivalence, --jobs independence", criterion_9),
    ];

    let mut failed = Vec::new();
    for (id, what, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] criterion {id:<3} {what} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                println!("[FAIL] criterion {id:<3} {what}: {detail} [{secs:.1}s]");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        std::process::exit(1);
    }
}
