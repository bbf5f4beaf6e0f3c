//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use digital_anomaly::anomaly::{self, DigitalAnomaly};
use digital_anomaly::bounds;
use digital_anomaly::exactmath::radical;
use digital_anomaly::search::{self, Oracle, SearchOptions, SearchReport, Status};
use num_bigint::BigUint;
use num_traits::One;

type Outcome = Result<String, String>;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn quad(x: u64, y: u64, b: u64, k: u32) -> (BigUint, BigUint, BigUint, u32) {
    (big(x), big(y), big(b), k)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs as f64, || {
        format!("took {:.2}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

fn set(r: &SearchReport) -> BTreeSet<DigitalAnomaly> {
    r.anomalies().cloned().collect()
}

/// The criterion-2 search results, computed once and shared.
struct Shared {
    y: SearchReport,
    x: SearchReport,
}

impl Shared {
    fn compute() -> Result<Self, String> {
        let opts = SearchOptions::default();
        let y =
            search::brute_force_bases(2..=100, 2, Oracle::Y, opts).map_err(|e| e.to_string())?;
        let x =
            search::brute_force_bases(2..=100, 2, Oracle::X, opts).map_err(|e| e.to_string())?;
        Ok(Self { y, x })
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let accept = [
        quad(5, 2, 10, 1),
        quad(10, 3, 30, 1),
        quad(108, 10, 135, 1),
        quad(18, 4, 6, 2),
        quad(1323, 36, 42, 2),
    ];
    // Near misses that must be rejected.
    let reject = [
        quad(6, 2, 10, 1),
        quad(5, 2, 10, 2),
        quad(5, 3, 10, 1),
        quad(18, 4, 6, 1),
        quad(1323, 36, 42, 3),
        quad(108, 10, 136, 1),
    ];
    for (x, y, b, k) in &accept {
        ensure(anomaly::verify(x, y, b, *k), || {
            format!("rejected ({x}, {y}, {b}, {k})")
        })?;
    }
    for (x, y, b, k) in &reject {
        ensure(!anomaly::verify(x, y, b, *k), || {
            format!("accepted ({x}, {y}, {b}, {k})")
        })?;
    }
    within(started.elapsed(), 1)?;
    Ok(format!(
        "{} accepted, {} rejected",
        accept.len(),
        reject.len()
    ))
}

fn criterion_2(s: &Shared) -> Outcome {
    let elapsed = s.y.elapsed + s.x.elapsed;
    within(elapsed, 60)?;
    let (ys, xs) = (set(&s.y), set(&s.x));
    ensure(ys == xs, || {
        format!(
            "y-only {:?}, x-only {:?}",
            ys.difference(&xs)
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            xs.difference(&ys)
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )
    })?;
    Ok(format!(
        "{} anomalies in both, {:.2}s",
        ys.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_3(s: &Shared) -> Outcome {
    for a in s.y.anomalies() {
        let p = anomaly::to_params(a).map_err(|e| format!("{a}: {e}"))?;
        ensure(p.generates_anomalies(), || {
            format!("{a} -> {p} violates t < n < m < 2n or tn square")
        })?;
        ensure(
            p.t() < p.n() && p.n() < p.m() && p.m() < &(p.n() * 2u32),
            || format!("{a} -> {p}: order"),
        )?;
        ensure(num_integer::Integer::gcd(p.m(), p.n()).is_one(), || {
            format!("{a} -> {p}: gcd")
        })?;
        ensure(p.sqrt_tn().is_some(), || {
            format!("{a} -> {p}: tn not square")
        })?;
        let back = anomaly::from_params(&p).map_err(|e| format!("{p}: {e}"))?;
        ensure(back.contains(a), || format!("{p} does not regenerate {a}"))?;
    }
    Ok(format!("{} roundtrips", s.y.found()))
}

fn criterion_4(s: &Shared) -> Outcome {
    let mut n = 0;
    for a in s.y.anomalies().filter(|a| a.gcd_xy().is_one()) {
        let y = a.y();
        let x = y * y + 1u32;
        let expected = (&x, y, &(&x * y), 1);
        ensure((a.x(), a.y(), a.base(), a.k()) == expected, || {
            format!("{a} is not in the coprime family")
        })?;
        n += 1;
    }
    ensure(n > 0, || "no coprime anomalies found".into())?;
    Ok(format!(
        "{n} coprime anomalies, all of the form (y^2+1, y, (y^2+1)y, 1)"
    ))
}

fn criterion_5(s: &Shared) -> Outcome {
    for a in s.y.anomalies() {
        let p = anomaly::to_params(a).map_err(|e| e.to_string())?;
        let k = anomaly::k_window(p.m(), p.n(), a.base()).map_err(|e| format!("{a}: {e}"))?;
        ensure(k == a.k(), || format!("{a}: window gives k = {k}"))?;
    }
    Ok(format!("{} windows match", s.y.found()))
}

fn criterion_6(s: &Shared) -> Outcome {
    let started = Instant::now();
    let mut sweep =
        search::parametric_sweep(1000, SearchOptions::default()).map_err(|e| e.to_string())?;
    let cap = big(100);
    sweep.retain(|a| a.base() <= &cap && a.k() <= 2);
    within(started.elapsed(), 120)?;
    let (sw, bf) = (set(&sweep), set(&s.y));
    ensure(sw == bf, || {
        format!(
            "sweep-only {:?}, brute-only {:?}",
            sw.difference(&bf)
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            bf.difference(&sw)
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )
    })?;
    Ok(format!(
        "{} anomalies, {:.2}s",
        sw.len(),
        started.elapsed().as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    let report =
        search::conjecture_k2_scan(100, SearchOptions::default()).map_err(|e| e.to_string())?;
    within(started.elapsed(), 120)?;
    let found: Vec<_> = report.anomalies().map(ToString::to_string).collect();
    ensure(found == ["(18, 4, 6, 2)", "(1323, 36, 42, 2)"], || {
        format!("found {found:?}")
    })?;
    ensure(!report.has_counterexamples(), || {
        "unexpected counterexample flag".into()
    })?;

    let clean = cli(&["conjecture", "--base-max", "100"]);
    ensure(clean.status.code() == Some(0), || {
        format!("clean scan exited {:?}", clean.status.code())
    })?;

    // With nothing known, both hits must surface as flagged records and exit 3.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let empty = dir.path().join("known.jsonl");
    std::fs::write(&empty, "").map_err(|e| e.to_string())?;
    let flagged = cli(&[
        "conjecture",
        "--base-max",
        "100",
        "--known",
        empty.to_str().unwrap(),
    ]);
    ensure(flagged.status.code() == Some(3), || {
        format!("flagged scan exited {:?}", flagged.status.code())
    })?;
    let stdout = String::from_utf8_lossy(&flagged.stdout);
    let flags = stdout
        .matches(Status::CounterexampleCandidate.as_str())
        .count();
    ensure(flags == 2, || format!("{flags} flagged records on stdout"))?;
    Ok("exactly the two known k = 2 anomalies; flagged run exits 3".into())
}

fn criterion_8() -> Outcome {
    let got = bounds::baker_constant(&big(10)).map_err(|e| e.to_string())?;
    let direct = 2.0 * 32f64.powi(8) * 2f64.ln() * 5f64.ln();
    let rel = ((got - direct) / direct).abs();
    ensure(rel < 1e-12, || {
        format!("D_10 = {got}, direct {direct}, rel {rel:e}")
    })?;

    let e = std::f64::consts::E;
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        // Log-spaced with a small irregular offset so samples avoid round numbers.
        let frac = (i as f64 - 0.5 * ((i * 7919) % 97) as f64 / 97.0) / 100.0;
        let r = e * (1e6 / e).powf(frac);
        let z = bounds::invert_z_over_log_z(r).map_err(|err| format!("R = {r}: {err}"))?;
        let residual = ((z / z.ln() - r) / r).abs();
        worst = worst.max(residual);
        ensure(residual < 1e-9, || {
            format!("R = {r}: z = {z}, residual {residual:e}")
        })?;
    }
    Ok(format!(
        "D_10 rel err {rel:.1e}; worst inversion residual {worst:.1e}"
    ))
}

fn criterion_9(s: &Shared) -> Outcome {
    let a = DigitalAnomaly::new(big(18), big(4), big(6), 2).map_err(|e| e.to_string())?;
    let t = bounds::anomaly_abc_score(&a).map_err(|e| e.to_string())?;
    ensure(
        (t.a.clone(), t.b.clone(), t.c.clone()) == (big(1), big(8), big(9)),
        || format!("triple ({}, {}, {})", t.a, t.b, t.c),
    )?;
    ensure(t.rad_abc == big(6), || format!("rad {}", t.rad_abc))?;
    let expected = 9f64.ln() / 6f64.ln();
    ensure((t.quality - expected).abs() < 1e-12, || {
        format!("quality {} vs {expected}", t.quality)
    })?;

    for a in s.y.anomalies() {
        let p = anomaly::to_params(a).map_err(|e| e.to_string())?;
        let gap = p.gap();
        let rad = radical(&(&gap * p.n() * p.m())).map_err(|e| e.to_string())?;
        ensure(rad <= a.base() * &gap, || {
            format!("{a}: Rad = {rad} > B(m-n)")
        })?;
    }
    Ok(format!(
        "quality {:.12}; Rad bound holds on {} anomalies",
        t.quality,
        s.y.found()
    ))
}

fn criterion_10() -> Outcome {
    // Finiteness is not checkable at this scale; the bound reports must at
    // least exist, be finite, and order sensibly.
    for b in 2..=100u64 {
        let r = bounds::fixed_base_bounds(&big(b)).map_err(|e| format!("base {b}: {e}"))?;
        let mut values = vec![
            r.d_b,
            r.log_n_bound_case1,
            r.c_bound_case2,
            r.log_n_bound_case2,
        ];
        values.extend(r.c_bound_case3);
        values.extend(r.log_m_bound_case3);
        ensure(values.iter().all(|v| v.is_finite() && *v > 0.0), || {
            format!("base {b}: {r:?}")
        })?;
        ensure(r.log_n_bound_case2 > r.log_n_bound_case1, || {
            format!("base {b}: case 2 below case 1")
        })?;
        ensure(r.c_bound_case3.is_none() == (b % 2 == 0), || {
            format!("base {b}: case 3 definedness")
        })?;
    }
    Ok("bound reports finite for bases 2..=100 (finiteness itself not reproducible)".into())
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digital-anomaly"))
        .args(args)
        .output()
        .expect("run digital-anomaly")
}

fn criterion_11() -> Outcome {
    let runs: [&[&str]; 2] = [
        &[
            "search-brute",
            "--base-max",
            "100",
            "--k-max",
            "2",
            "--oracle",
            "both",
        ],
        &[
            "search-param",
            "--n-max",
            "1000",
            "--base-max",
            "100",
            "--k-max",
            "2",
        ],
    ];
    let mut lines = Vec::new();
    for args in runs {
        let mut outs = Vec::new();
        for workers in ["1", "4"] {
            let mut full = args.to_vec();
            full.extend(["--workers", workers]);
            let out = cli(&full);
            ensure(out.status.success(), || {
                format!(
                    "{} exited {:?}: {}",
                    full.join(" "),
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                )
            })?;
            outs.push(out.stdout);
        }
        ensure(outs[0] == outs[1], || {
            format!("{}: output differs between 1 and 4 workers", args[0])
        })?;
        ensure(!outs[0].is_empty(), || format!("{}: empty output", args[0]))?;
        lines.push(outs[0].iter().filter(|&&c| c == b'\n').count());
    }
    Ok(format!(
        "identical JSONL ({} and {} lines)",
        lines[0], lines[1]
    ))
}

fn main() {
    // Keep panic output out of the summary lines.
    panic::set_hook(Box::new(|_| {}));
    let shared = Shared::compute();
    let shared = shared.as_ref();
    let with = |f: fn(&Shared) -> Outcome| -> Box<dyn Fn() -> Outcome + '_> {
        Box::new(move || shared.map_err(Clone::clone).and_then(f))
    };
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, with(criterion_2)),
        (3, with(criterion_3)),
        (4, with(criterion_4)),
        (5, with(criterion_5)),
        (6, with(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, with(criterion_9)),
        (10, Box::new(criterion_10)),
        (11, Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (n, run) in &criteria {
        let outcome = panic::catch_unwind(panic::AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
