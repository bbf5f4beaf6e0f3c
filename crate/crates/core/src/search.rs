//! Exhaustive searches for digital anomalies.
//!
//! Two independent brute-force oracles scan a fixed base:
//!
//! * [`brute_force_y`] solves `x = B^k y^2 / (B^k - y)` for `2 <= y`,
//!   `y^2 < B^k`, which is `O(B^(k/2))` per exponent;
//! * [`brute_force_x`] runs over every `k`-digit `x` and solves the quadratic
//!   in `y`, which is `O(B^k)` and only meant for cross-checking.
//!
//! [`parametric_sweep`] instead walks the `(t, m, n)` parameter space, and
//! [`conjecture_k2_scan`] runs the `y`-oracle at `k = 2` over a range of
//! bases, flagging anything outside the two known solutions.
//!
//! Every search splits its range into disjoint chunks, runs them on up to
//! `workers` threads, and merges by sorting on `(base, k, x, y)`, so the
//! result never depends on the worker count.

use std::fmt;
use std::ops::RangeInclusive;
use std::time::Duration;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anomaly::{self, DigitalAnomaly, ParamTriple};
use crate::error::{Error, Result};
use crate::exactmath::{integer_root, isqrt, squarefree_part};

/// The two `k = 2` anomalies known to exist, as `(x, y, B)`.
pub const KNOWN_K2: [(u64, u64, u64); 2] = [(18, 4, 6), (1323, 36, 42)];

/// Whether a reported anomaly is plain or contradicts an expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    CounterexampleCandidate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::CounterexampleCandidate => "counterexample-candidate",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Wall-clock timer. `std::time::Instant` panics on wasm32-unknown-unknown,
/// where reported times are zero instead.
#[derive(Debug, Clone, Copy)]
struct Stopwatch(#[cfg(not(target_family = "wasm"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        #[cfg(not(target_family = "wasm"))]
        return Self(std::time::Instant::now());
        #[cfg(target_family = "wasm")]
        return Self();
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_family = "wasm"))]
        return self.0.elapsed();
        #[cfg(target_family = "wasm")]
        return Duration::ZERO;
    }
}

/// One reported anomaly with its recovered parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub anomaly: DigitalAnomaly,
    pub params: ParamTriple,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    /// Sorted by `(base, k, x, y)`, no duplicates.
    pub hits: Vec<Hit>,
    pub domain: String,
    pub candidates: u64,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn anomalies(&self) -> impl Iterator<Item = &DigitalAnomaly> {
        self.hits.iter().map(|h| &h.anomaly)
    }

    pub fn found(&self) -> usize {
        self.hits.len()
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Hit> {
        self.hits
            .iter()
            .filter(|h| h.status == Status::CounterexampleCandidate)
    }

    pub fn has_counterexamples(&self) -> bool {
        self.counterexamples().next().is_some()
    }

    /// Keeps only hits matching `keep`.
    pub fn retain(&mut self, keep: impl Fn(&DigitalAnomaly) -> bool) {
        self.hits.retain(|h| keep(&h.anomaly));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { workers: 1 }
    }
}

impl SearchOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: workers.max(1),
        }
    }
}

/// Raw output of one chunk: anomalies and number of candidates examined.
type Partial = (Vec<DigitalAnomaly>, u64);

/// Splits `range` into contiguous chunks and evaluates them, in parallel
/// when more than one worker is requested. Results come back in chunk order.
fn run_chunks<F>(range: RangeInclusive<u64>, opts: SearchOptions, scan: F) -> Result<Partial>
where
    F: Fn(RangeInclusive<u64>) -> Result<Partial> + Sync,
{
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Ok((Vec::new(), 0));
    }
    let chunks = split(lo, hi, opts.workers.max(1) * 4);
    let results: Vec<Result<Partial>> = if opts.workers <= 1 {
        chunks.into_iter().map(&scan).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start {} workers: {e}", opts.workers)))?;
        pool.install(|| chunks.into_par_iter().map(&scan).collect())
    };
    let mut found = Vec::new();
    let mut candidates = 0;
    for r in results {
        let (mut part, count) = r?;
        found.append(&mut part);
        candidates += count;
    }
    Ok((found, candidates))
}

fn split(lo: u64, hi: u64, parts: usize) -> Vec<RangeInclusive<u64>> {
    let len = hi - lo + 1;
    let parts = (parts as u64).clamp(1, len);
    let step = len.div_ceil(parts);
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    while start <= hi {
        let end = start.saturating_add(step - 1).min(hi);
        out.push(start..=end);
        if end == hi {
            break;
        }
        start = end + 1;
    }
    out
}

/// Sorts, deduplicates, attaches parameters and assigns a status.
fn finish(
    mut found: Vec<DigitalAnomaly>,
    candidates: u64,
    domain: String,
    started: Stopwatch,
    status: impl Fn(&DigitalAnomaly) -> Status,
) -> Result<SearchReport> {
    found.sort();
    found.dedup();
    let hits = found
        .into_iter()
        .map(|anomaly| {
            let params = anomaly::to_params(&anomaly)?;
            let status = status(&anomaly);
            Ok(Hit {
                anomaly,
                params,
                status,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport {
        hits,
        domain,
        candidates,
        elapsed: started.elapsed(),
    })
}

fn check_base(base: &BigUint) -> Result<()> {
    if *base < BigUint::from(2u32) {
        return Err(Error::invalid(format!("base must be >= 2, got {base}")));
    }
    Ok(())
}

fn check_k_max(k_max: u32) -> Result<()> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be >= 1"));
    }
    Ok(())
}

/// All anomalies with digit count exactly `k` in `base`, by the `y`-scan.
fn scan_y(base: &BigUint, k: u32, opts: SearchOptions) -> Result<Partial> {
    let power = base.pow(k);
    // y^2 < x < B^k
    let (y_max, _) = isqrt(&(&power - 1u32));
    let y_max = y_max
        .to_u64()
        .ok_or_else(|| Error::invalid(format!("y range for base {base}, k={k} exceeds 64 bits")))?;
    if y_max < 2 {
        return Ok((Vec::new(), 0));
    }
    run_chunks(2..=y_max, opts, |ys| {
        let mut out = Vec::new();
        let count = ys.end() - ys.start() + 1;
        for y in ys {
            let y = BigUint::from(y);
            let denom = &power - &y;
            let (x, rem) = (&power * &y * &y).div_rem(&denom);
            if !rem.is_zero() {
                continue;
            }
            if anomaly::digit_count(&x, base)? != k {
                continue;
            }
            out.push(
                DigitalAnomaly::new(x, y, base.clone(), k).map_err(|e| {
                    Error::inconsistent(format!("y-scan accepted a non-anomaly: {e}"))
                })?,
            );
        }
        Ok((out, count))
    })
}

/// All anomalies with digit count exactly `k` in `base`, by the `x`-scan.
fn scan_x(base: &BigUint, k: u32, opts: SearchOptions) -> Result<Partial> {
    let power = base.pow(k);
    let lo = base.pow(k - 1);
    let (lo, hi) = match (lo.to_u64(), (&power - 1u32).to_u64()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Err(Error::invalid(format!(
                "x range for base {base}, k={k} exceeds 64 bits"
            )))
        }
    };
    let four_p2 = &power * &power * 4u32;
    let two_p = &power * 2u32;
    run_chunks(lo..=hi, opts, |xs| {
        let mut out = Vec::new();
        let count = xs.end() - xs.start() + 1;
        for x in xs {
            let x = BigUint::from(x);
            let disc = &x * &x + &four_p2 * &x;
            let (root, exact) = isqrt(&disc);
            if !exact || root <= x {
                continue;
            }
            let (y, rem) = (&root - &x).div_rem(&two_p);
            if !rem.is_zero() {
                continue;
            }
            out.push(
                DigitalAnomaly::new(x, y, base.clone(), k).map_err(|e| {
                    Error::inconsistent(format!("x-scan accepted a non-anomaly: {e}"))
                })?,
            );
        }
        Ok((out, count))
    })
}

/// Every anomaly in `base` with `k <= k_max`, from the `y`-scan.
pub fn brute_force_y(base: &BigUint, k_max: u32, opts: SearchOptions) -> Result<SearchReport> {
    check_base(base)?;
    check_k_max(k_max)?;
    let started = Stopwatch::start();
    let mut found = Vec::new();
    let mut candidates = 0;
    for k in 1..=k_max {
        let (mut part, count) = scan_y(base, k, opts)?;
        found.append(&mut part);
        candidates += count;
    }
    let domain = format!("y-scan base={base} k<={k_max}");
    finish(found, candidates, domain, started, |_| Status::Verified)
}

/// Every anomaly in `base` with `k <= k_max`, from the `x`-scan.
pub fn brute_force_x(base: &BigUint, k_max: u32, opts: SearchOptions) -> Result<SearchReport> {
    check_base(base)?;
    check_k_max(k_max)?;
    let started = Stopwatch::start();
    let mut found = Vec::new();
    let mut candidates = 0;
    for k in 1..=k_max {
        let (mut part, count) = scan_x(base, k, opts)?;
        found.append(&mut part);
        candidates += count;
    }
    let domain = format!("x-scan base={base} k<={k_max}");
    finish(found, candidates, domain, started, |_| Status::Verified)
}

/// Which brute-force oracle to run over a base range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Y,
    X,
}

/// Runs one oracle over every base in `bases`, merging into one report.
pub fn brute_force_bases(
    bases: RangeInclusive<u64>,
    k_max: u32,
    oracle: Oracle,
    opts: SearchOptions,
) -> Result<SearchReport> {
    check_k_max(k_max)?;
    if *bases.start() < 2 {
        return Err(Error::invalid("bases must start at 2 or above"));
    }
    let started = Stopwatch::start();
    let mut found = Vec::new();
    let mut candidates = 0;
    for b in bases.clone() {
        let base = BigUint::from(b);
        for k in 1..=k_max {
            let (mut part, count) = match oracle {
                Oracle::Y => scan_y(&base, k, opts)?,
                Oracle::X => scan_x(&base, k, opts)?,
            };
            found.append(&mut part);
            candidates += count;
        }
    }
    let name = match oracle {
        Oracle::Y => "y-scan",
        Oracle::X => "x-scan",
    };
    let domain = format!("{name} base={}..={} k<={k_max}", bases.start(), bases.end());
    finish(found, candidates, domain, started, |_| Status::Verified)
}

/// Valid `(t, m)` for a fixed `n`: `n < m <= n + floor(n^(1/4)) + 1`,
/// `gcd(m, n) = 1`, `t (m-n)^4 < n` and `t n` a perfect square.
fn triples_for_n(n: u64) -> Result<Vec<ParamTriple>> {
    let n_big = BigUint::from(n);
    let (quarter, _) = integer_root(&n_big, 4);
    let quarter = quarter.to_u64().unwrap_or(u64::MAX);
    // t n square  <=>  t = s j^2 with s the squarefree part of n.
    let kernel = squarefree_part(&n_big)?
        .to_u64()
        .expect("squarefree part of a u64 fits in u64");
    let mut out = Vec::new();
    for gap in 1..=quarter.saturating_add(1) {
        let gap4 = u128::from(gap).pow(4);
        if gap4 >= u128::from(n) {
            break;
        }
        let m = n + gap;
        if num_integer::gcd(m, n) != 1 {
            continue;
        }
        for j in 1u64.. {
            let t = u128::from(kernel) * u128::from(j) * u128::from(j);
            if t * gap4 >= u128::from(n) {
                break;
            }
            out.push(ParamTriple::new(
                BigUint::from(t),
                BigUint::from(m),
                n_big.clone(),
            )?);
        }
    }
    Ok(out)
}

/// Every anomaly generated by a parameter triple with `n <= n_max`.
///
/// A single triple may yield several `(B, k)`; each is its own record.
pub fn parametric_sweep(n_max: u64, opts: SearchOptions) -> Result<SearchReport> {
    let started = Stopwatch::start();
    let (found, candidates) = if n_max == 0 {
        (Vec::new(), 0)
    } else {
        run_chunks(1..=n_max, opts, |ns| {
            let mut out = Vec::new();
            let mut count = 0;
            for n in ns {
                for p in triples_for_n(n)? {
                    count += 1;
                    out.extend(anomaly::from_params(&p)?);
                }
            }
            Ok((out, count))
        })?
    };
    let domain = format!("parametric n<={n_max}");
    finish(found, candidates, domain, started, |_| Status::Verified)
}

/// Anomalies with digit count exactly `k` across `2 <= B <= b_max`, by the
/// `y`-scan, with any hit outside `known` flagged as a counterexample
/// candidate.
pub fn exponent_scan(
    k: u32,
    b_max: u64,
    known: &[DigitalAnomaly],
    opts: SearchOptions,
) -> Result<SearchReport> {
    check_k_max(k)?;
    let started = Stopwatch::start();
    let mut found = Vec::new();
    let mut candidates = 0;
    for b in 2..=b_max {
        let (mut part, count) = scan_y(&BigUint::from(b), k, opts)?;
        found.append(&mut part);
        candidates += count;
    }
    let domain = format!("k={k} base=2..={b_max}");
    finish(found, candidates, domain, started, |a| {
        if known.contains(a) {
            Status::Verified
        } else {
            Status::CounterexampleCandidate
        }
    })
}

/// The known `k = 2` anomalies as values.
pub fn known_k2() -> Vec<DigitalAnomaly> {
    KNOWN_K2
        .iter()
        .map(|&(x, y, b)| {
            DigitalAnomaly::new(x.into(), y.into(), b.into(), 2).expect("known k=2 anomaly")
        })
        .collect()
}

/// `k = 2` scan over `2 <= B <= b_max`. Anything other than
/// `(18, 4, 6, 2)` and `(1323, 36, 42, 2)` is reported with
/// [`Status::CounterexampleCandidate`], never dropped.
pub fn conjecture_k2_scan(b_max: u64, opts: SearchOptions) -> Result<SearchReport> {
    exponent_scan(2, b_max, &known_k2(), opts)
}
