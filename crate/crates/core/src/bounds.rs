//! Quantitative bounds: the explicit linear-forms-in-logarithms constant
//! `D_B` for the primes of a base, the three case bounds that make the set
//! of anomalies in a fixed base finite, and abc quality scores of the
//! `(m-n, n, m)` triples attached to anomalies.
//!
//! The integer bounds are far too large to materialize; every bound is
//! carried as a natural logarithm.

use std::f64::consts::E;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::anomaly::{self, DigitalAnomaly};
use crate::error::{Error, Result};
use crate::exactmath::{factorize, ln, radical};

/// `epsilon` for which every anomaly with `k >= 3` gives
/// `Rad((m-n) n m) < m^(1/(1+epsilon))`.
pub const ABC_EPSILON_K3: f64 = 1.0 / 11.0;

/// `D_B = 2 (16u)^(2(u+2)) * prod(log r_i)` over the `u` distinct primes
/// `r_i` of `B`.
///
/// The leading 2 accounts for replacing the height of the smallest prime by
/// its square, which keeps every height at least `e` even when 2 | B.
pub fn baker_constant(base: &BigUint) -> Result<f64> {
    if *base < BigUint::from(2u32) {
        return Err(Error::invalid(format!("base must be >= 2, got {base}")));
    }
    let f = factorize(base)?;
    Ok(baker_from_primes(f.primes()))
}

fn baker_from_primes<'a>(primes: impl Iterator<Item = &'a BigUint>) -> f64 {
    let logs: Vec<f64> = primes.map(ln).collect();
    let u = logs.len() as f64;
    let prod: f64 = logs.iter().product();
    2.0 * (16.0 * u).powf(2.0 * (u + 2.0)) * prod
}

/// `log(m/n)`, the linear form bounded from below by [`baker_constant`].
pub fn log_lambda(m: &BigUint, n: &BigUint) -> Result<f64> {
    if n.is_zero() || m <= n {
        return Err(Error::invalid(format!("need m > n >= 1, got m={m}, n={n}")));
    }
    // log(1 + (m-n)/n) keeps precision when m/n is close to 1.
    let gap = m - n;
    let ratio = match (gap.to_f64(), n.to_f64()) {
        (Some(g), Some(d)) if d.is_finite() && g.is_finite() => g / d,
        _ => return Ok(ln(m) - ln(n)),
    };
    Ok(ratio.ln_1p())
}

/// The unique `z >= e` with `z / log z = r`, for `r >= e`.
///
/// `z / log z` is strictly increasing on `(e, inf)` with minimum `e` at
/// `z = e`; solved by bisection to a relative width of `1e-15`.
pub fn invert_z_over_log_z(r: f64) -> Result<f64> {
    if !r.is_finite() || r < E {
        return Err(Error::invalid(format!(
            "z/log z = {r} has no solution with z > e (need r >= e)"
        )));
    }
    if r == E {
        return Ok(E);
    }
    let f = |z: f64| z / z.ln();
    let mut lo = E;
    let mut hi = 2.0 * E;
    while f(hi) < r {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid(format!("z/log z = {r} overflows f64")));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * hi {
            break;
        }
        if f(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Case bounds for a fixed base, all in natural-log scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub base: String,
    /// Number of distinct primes of the base.
    pub u: usize,
    /// Smallest prime factor `p` of the base.
    pub smallest_prime: String,
    pub d_b: f64,
    /// `C = e`: `log n < (4/3) D_B`.
    pub log_n_bound_case1: f64,
    /// `C` an exponent of `n`: `C <= W_B` where `W_B / log W_B = 4 D_B / (3 log p)`.
    pub c_bound_case2: f64,
    /// `log n < (4/3) D_B log W_B`.
    pub log_n_bound_case2: f64,
    /// `C` an exponent of `m`: `C <= V_B` where `V_B / log V_B = 4 D_B / (3 log(p/2))`.
    /// Undefined when `p = 2`.
    pub c_bound_case3: Option<f64>,
    /// `log m < log 2 + (4/3) D_B log V_B`, i.e. `log(m/2)` is below
    /// `(4/3) D_B log V_B`. Undefined when `p = 2`.
    pub log_m_bound_case3: Option<f64>,
}

/// Computes [`BoundReport`] for `base`.
pub fn fixed_base_bounds(base: &BigUint) -> Result<BoundReport> {
    if *base < BigUint::from(2u32) {
        return Err(Error::invalid(format!("base must be >= 2, got {base}")));
    }
    let f = factorize(base)?;
    let d_b = baker_from_primes(f.primes());
    let p = f
        .smallest_prime()
        .expect("base >= 2 has a prime factor")
        .clone();
    let log_p = ln(&p);
    let scale = 4.0 * d_b / 3.0;

    let w_b = invert_z_over_log_z(scale / log_p)?;
    let (c3, m3) = if p == BigUint::from(2u32) {
        (None, None)
    } else {
        let v_b = invert_z_over_log_z(scale / (log_p - std::f64::consts::LN_2))?;
        (Some(v_b), Some(std::f64::consts::LN_2 + scale * v_b.ln()))
    };
    Ok(BoundReport {
        base: base.to_string(),
        u: f.len(),
        smallest_prime: p.to_string(),
        d_b,
        log_n_bound_case1: scale,
        c_bound_case2: w_b,
        log_n_bound_case2: scale * w_b.ln(),
        c_bound_case3: c3,
        log_m_bound_case3: m3,
    })
}

/// An abc triple `a + b = c`, `a < b`, `gcd(a, b) = 1`, with its radical and
/// quality `log c / log Rad(abc)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcTriple {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub rad_abc: BigUint,
    pub quality: f64,
}

impl AbcTriple {
    /// `Rad(abc) < c^(1/(1+epsilon))`, i.e. `quality > 1 + epsilon`.
    pub fn exceeds(&self, epsilon: f64) -> bool {
        self.quality > 1.0 + epsilon
    }

    pub fn is_hit(&self) -> bool {
        self.quality > 1.0
    }
}

pub fn abc_quality(a: &BigUint, b: &BigUint, c: &BigUint) -> Result<AbcTriple> {
    if a.is_zero() {
        return Err(Error::invalid("a must be positive"));
    }
    if &(a + b) != c {
        return Err(Error::invalid(format!("{a} + {b} != {c}")));
    }
    if a >= b {
        return Err(Error::invalid(format!("need a < b, got a={a}, b={b}")));
    }
    if !a.gcd(b).is_one() {
        return Err(Error::invalid(format!("a={a} and b={b} are not coprime")));
    }
    // a, b, c are pairwise coprime, so the radical is multiplicative here.
    let rad_abc = radical(a)? * radical(b)? * radical(c)?;
    let quality = ln(c) / ln(&rad_abc);
    Ok(AbcTriple {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        rad_abc,
        quality,
    })
}

/// Scores `(m-n, n, m)` for the parameters of `a`, checking along the way
/// that `Rad((m-n) n m) <= B (m-n)`.
pub fn anomaly_abc_score(a: &DigitalAnomaly) -> Result<AbcTriple> {
    let p = anomaly::to_params(a)?;
    let gap = p.gap();
    let triple = abc_quality(&gap, p.n(), p.m()).map_err(|e| {
        Error::inconsistent(format!("(m-n, n, m) of {a} is not an abc triple: {e}"))
    })?;
    let ceiling = a.base() * &gap;
    if triple.rad_abc > ceiling {
        return Err(Error::inconsistent(format!(
            "Rad((m-n)nm) = {} exceeds B(m-n) = {ceiling} for {a}",
            triple.rad_abc
        )));
    }
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        ((a - b) / b).abs() < rel
    }

    #[test]
    fn baker_constant_examples() {
        let l2 = 2f64.ln();
        assert!(close(
            baker_constant(&big(2)).unwrap(),
            2.0 * 16f64.powi(6) * l2,
            1e-14
        ));
        assert!(close(baker_constant(&big(2)).unwrap(), 2.3259e7, 1e-4));
        assert!(close(baker_constant(&big(10)).unwrap(), 2.4534e12, 1e-4));
        assert!(close(baker_constant(&big(6)).unwrap(), 1.6746e12, 1e-4));
        // Only distinct primes matter.
        assert_eq!(
            baker_constant(&big(1000)).unwrap(),
            baker_constant(&big(10)).unwrap()
        );
        assert!(baker_constant(&big(1)).is_err());
    }

    #[test]
    fn log_lambda_examples() {
        assert!(close(log_lambda(&big(5), &big(4)).unwrap(), 0.22314, 1e-4));
        assert!(close(log_lambda(&big(9), &big(8)).unwrap(), 0.11778, 1e-4));
        assert!(close(
            log_lambda(&big(2), &big(1)).unwrap(),
            2f64.ln(),
            1e-15
        ));
        assert!(log_lambda(&big(4), &big(4)).is_err());
        assert!(log_lambda(&big(3), &big(0)).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert_z_over_log_z(E).unwrap(), E);
        let z = invert_z_over_log_z(10.0).unwrap();
        assert!((z - 35.77).abs() < 0.01, "{z}");
        // Independent oracle: the fixed-point iteration z <- r log z converges
        // on the upper branch from any start above e.
        let oracle = |r: f64| (0..200).fold(r, |z: f64, _| r * z.ln());
        let z = invert_z_over_log_z(100.0).unwrap();
        assert!((z - oracle(100.0)).abs() / z < 1e-12, "{z}");
        assert!((z - 647.2775).abs() < 1e-3, "{z}");
        assert!(invert_z_over_log_z(2.0).is_err());
        assert!(invert_z_over_log_z(f64::NAN).is_err());
    }

    #[test]
    fn fixed_base_examples() {
        let r = fixed_base_bounds(&big(10)).unwrap();
        assert!(close(r.log_n_bound_case1, 3.2712e12, 1e-4));
        assert_eq!(r.u, 2);
        assert!(r.c_bound_case3.is_none() && r.log_m_bound_case3.is_none());
        let r = fixed_base_bounds(&big(2)).unwrap();
        assert!(close(r.log_n_bound_case1, 3.1012e7, 1e-4));

        let r = fixed_base_bounds(&big(15)).unwrap();
        assert_eq!(r.smallest_prime, "3");
        let v = r.c_bound_case3.unwrap();
        let target = 4.0 * r.d_b / (3.0 * (1.5f64).ln());
        assert!(close(v / v.ln(), target, 1e-9));
        let w = r.c_bound_case2;
        assert!(close(w / w.ln(), 4.0 * r.d_b / (3.0 * 3f64.ln()), 1e-9));
        // log(p/2) < log p, so the case-3 exponent bound is the larger one.
        assert!(v > w);
        assert!(r.log_m_bound_case3.unwrap() > 0.0);
    }

    #[test]
    fn abc_examples() {
        let t = abc_quality(&big(1), &big(8), &big(9)).unwrap();
        assert_eq!(t.rad_abc, big(6));
        assert!((t.quality - 9f64.ln() / 6f64.ln()).abs() < 1e-12);
        assert!(close(t.quality, 1.2263, 1e-4));
        let t = abc_quality(&big(1), &big(48), &big(49)).unwrap();
        assert_eq!(t.rad_abc, big(42));
        assert!(close(t.quality, 1.0413, 1e-4));
        let t = abc_quality(&big(1), &big(2), &big(3)).unwrap();
        assert!(close(t.quality, 0.6131, 1e-3));
        assert!(!t.is_hit());

        assert!(abc_quality(&big(1), &big(2), &big(4)).is_err());
        assert!(abc_quality(&big(2), &big(1), &big(3)).is_err());
        assert!(abc_quality(&big(2), &big(4), &big(6)).is_err());
    }

    #[test]
    fn anomaly_scores() {
        let a = DigitalAnomaly::new(big(18), big(4), big(6), 2).unwrap();
        let t = anomaly_abc_score(&a).unwrap();
        assert_eq!(
            (t.a.clone(), t.b.clone(), t.c.clone()),
            (big(1), big(8), big(9))
        );
        assert!(t.exceeds(0.2));

        let a = DigitalAnomaly::new(big(1323), big(36), big(42), 2).unwrap();
        let t = anomaly_abc_score(&a).unwrap();
        assert_eq!(
            (t.a.clone(), t.b.clone(), t.c.clone()),
            (big(1), big(48), big(49))
        );
        assert!(!t.exceeds(ABC_EPSILON_K3));

        let a = DigitalAnomaly::new(big(5), big(2), big(10), 1).unwrap();
        let t = anomaly_abc_score(&a).unwrap();
        assert_eq!(t.rad_abc, big(10));
        assert!((t.quality - 0.699).abs() < 1e-3);
    }
}
