//! Digital anomalies `(x, y, B, k)`: integers with `x/y = y + x/B^k` where
//! `k` is the number of base-`B` digits of `x`.
//!
//! The central tool is the bijection between the triples `(x, y, B^k)` and
//! parameter triples `(t, m, n)`:
//!
//! ```text
//! x = t m (m-n)^2,   y = sqrt(tn) (m-n),   B^k = m sqrt(tn)
//! ```
//!
//! obtained by clearing denominators to `B^k x = B^k y^2 + x y`, completing
//! the square into the Pythagorean triple `(x + 2B^k y, 2B^2k, x + 2B^2k)`,
//! and decomposing that triple with [`crate::pythag::decompose`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{self, divisors_desc, factorize, integer_root, isqrt};
use crate::pythag::{self, PythTriple};

/// A quadruple that satisfies both the anomaly equation and the digit-count
/// condition. Only constructible through verification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitalAnomaly {
    x: BigUint,
    y: BigUint,
    base: BigUint,
    k: u32,
}

impl DigitalAnomaly {
    pub fn new(x: BigUint, y: BigUint, base: BigUint, k: u32) -> Result<Self> {
        if verify(&x, &y, &base, k) {
            Ok(Self { x, y, base, k })
        } else {
            Err(Error::invalid(format!(
                "({x}, {y}, {base}, {k}) is not a digital anomaly"
            )))
        }
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `B^k`.
    pub fn power(&self) -> BigUint {
        self.base.pow(self.k)
    }

    pub fn gcd_xy(&self) -> BigUint {
        self.x.gcd(&self.y)
    }

    /// Sort key used by every report: `(base, k, x, y)`.
    pub fn sort_key(&self) -> (&BigUint, u32, &BigUint, &BigUint) {
        (&self.base, self.k, &self.x, &self.y)
    }
}

impl PartialOrd for DigitalAnomaly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DigitalAnomaly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for DigitalAnomaly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.base, self.k)
    }
}

/// Parameter triple `(t, m, n)`.
///
/// Construction only enforces the structural part (`t, n >= 1`, `m > n`,
/// `gcd(m, n) = 1`); whether the triple actually generates an anomaly is
/// answered by [`ParamTriple::generates_anomalies`] and [`from_params`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamTriple {
    t: BigUint,
    m: BigUint,
    n: BigUint,
}

impl ParamTriple {
    pub fn new(t: BigUint, m: BigUint, n: BigUint) -> Result<Self> {
        if t.is_zero() || n.is_zero() {
            return Err(Error::invalid("t and n must be positive"));
        }
        if m <= n {
            return Err(Error::invalid(format!("need m > n, got m={m}, n={n}")));
        }
        if !m.gcd(&n).is_one() {
            return Err(Error::invalid(format!("m={m} and n={n} are not coprime")));
        }
        Ok(Self { t, m, n })
    }

    pub fn t(&self) -> &BigUint {
        &self.t
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// `m - n`.
    pub fn gap(&self) -> BigUint {
        &self.m - &self.n
    }

    /// `sqrt(t n)` when `t n` is a perfect square.
    pub fn sqrt_tn(&self) -> Option<BigUint> {
        let (root, exact) = isqrt(&(&self.t * &self.n));
        exact.then_some(root)
    }

    /// `t (m-n)^4 < n`, equivalently `x < B^k`.
    pub fn satisfies_lower(&self) -> bool {
        &self.t * self.gap().pow(4) < self.n
    }

    /// All invariants of a triple recovered from an anomaly: `t n` square,
    /// `t (m-n)^4 < n` and the chain `t < n < m < 2n`.
    pub fn generates_anomalies(&self) -> bool {
        self.sqrt_tn().is_some()
            && self.satisfies_lower()
            && self.t < self.n
            && self.m < &self.n * 2u32
    }
}

impl fmt::Display for ParamTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.t, self.m, self.n)
    }
}

/// Number of base-`B` digits of `x`.
pub fn digit_count(x: &BigUint, base: &BigUint) -> Result<u32> {
    exactmath::digit_count(x, base)
}

/// Checks `B^k x = B^k y^2 + x y` together with `digit_count(x, B) = k`.
/// Malformed candidates (zeros, `B < 2`, `k = 0`) are simply rejected.
pub fn verify(x: &BigUint, y: &BigUint, base: &BigUint, k: u32) -> bool {
    if x.is_zero() || y.is_zero() || k == 0 || *base < BigUint::from(2u32) {
        return false;
    }
    if digit_count(x, base).ok() != Some(k) {
        return false;
    }
    let power = base.pow(k);
    &power * x == &power * y * y + x * y
}

/// The Pythagorean triple `(x + 2B^k y, 2B^2k, x + 2B^2k)` attached to an
/// anomaly. Any positive quadruple satisfies the anomaly equation exactly
/// when this is a Pythagorean triple.
pub fn pythagorean_form(a: &DigitalAnomaly) -> Result<PythTriple> {
    let power = a.power();
    let power2 = &power * &power;
    PythTriple::new(
        &a.x + &power * &a.y * 2u32,
        &power2 * 2u32,
        &a.x + &power2 * 2u32,
    )
    .map_err(|e| Error::inconsistent(format!("pythagorean form of {a}: {e}")))
}

/// Every anomaly generated by `p`, one per admissible `(B, k)` with
/// `B^k = m sqrt(tn)`, ordered by descending `k`.
///
/// Candidate exponents are the divisors of the perfect-power exponent of
/// `m sqrt(tn)`; each is kept only if the exact digit-count window holds.
pub fn from_params(p: &ParamTriple) -> Result<Vec<DigitalAnomaly>> {
    let root = p
        .sqrt_tn()
        .ok_or_else(|| Error::invalid(format!("t*n is not a perfect square for {p}")))?;
    let gap = p.gap();
    let x = &p.t * &p.m * &gap * &gap;
    let y = &root * &gap;
    let power = &p.m * &root;
    // Factor the two cofactors separately; each is far smaller than B^k.
    let g = factorize(&p.m)?.merge(&factorize(&root)?).exponent_gcd();

    let mut out = Vec::new();
    for k in divisors_desc(g) {
        let (base, exact) = integer_root(&power, k);
        if !exact {
            return Err(Error::inconsistent(format!(
                "{power} has no exact {k}-th root despite exponent gcd {g}"
            )));
        }
        if base < BigUint::from(2u32) {
            return Err(Error::inconsistent(format!("base {base} < 2 from {p}")));
        }
        if !in_window(&p.m, &p.n, &base, k) {
            continue;
        }
        let anomaly = DigitalAnomaly::new(x.clone(), y.clone(), base, k)
            .map_err(|e| Error::inconsistent(format!("from {p}: {e}")))?;
        out.push(anomaly);
    }
    Ok(out)
}

/// Recovers the unique `(t, m, n)` of an anomaly via its Pythagorean form.
pub fn to_params(a: &DigitalAnomaly) -> Result<ParamTriple> {
    let triple = pythagorean_form(a)?;
    let gen = pythag::decompose(&triple)?;
    let (t, rem) = gen.ell().div_rem(gen.m());
    if !rem.is_zero() {
        return Err(Error::inconsistent(format!(
            "m={} does not divide ell={} for {a}",
            gen.m(),
            gen.ell()
        )));
    }
    ParamTriple::new(t, gen.m().clone(), gen.n().clone())
        .map_err(|e| Error::inconsistent(format!("recovering {a}: {e}")))
}

fn in_window(m: &BigUint, n: &BigUint, base: &BigUint, k: u32) -> bool {
    let gap = m - n;
    let gap2 = &gap * &gap;
    let mn = m * n;
    let lower = base.pow(k) * &gap2;
    lower < mn && mn <= lower * base
}

/// The digit count determined by `m, n, B`: the unique `k >= 1` with
/// `B^k (m-n)^2 < mn <= B^(k+1) (m-n)^2`, decided in exact integers.
pub fn k_window(m: &BigUint, n: &BigUint, base: &BigUint) -> Result<u32> {
    if n.is_zero() || m <= n {
        return Err(Error::invalid(format!("need m > n >= 1, got m={m}, n={n}")));
    }
    if *base < BigUint::from(2u32) {
        return Err(Error::invalid(format!("base must be >= 2, got {base}")));
    }
    let gap = m - n;
    let mn = m * n;
    let mut lower = base * &gap * &gap;
    if lower >= mn {
        return Err(Error::invalid(format!(
            "mn/(m-n)^2 <= B for m={m}, n={n}, B={base}: no k >= 1"
        )));
    }
    let mut k = 1u32;
    loop {
        let upper = &lower * base;
        if mn <= upper {
            return Ok(k);
        }
        lower = upper;
        k += 1;
    }
}

/// `t (m-n)^4 < n` and `n^(k-1) <= m^2 t^(k+1) (m-n)^(4k)`.
pub fn check_inequalities(p: &ParamTriple, k: u32) -> bool {
    if k == 0 || !p.satisfies_lower() {
        return false;
    }
    let gap = p.gap();
    p.n.pow(k - 1) <= &p.m * &p.m * p.t.pow(k + 1) * gap.pow(4 * k)
}

/// `(s^2 + 1, s, (s^2 + 1) s, 1)`: every anomaly with coprime `x, y`.
pub fn coprime_family(s: &BigUint) -> Result<DigitalAnomaly> {
    if *s < BigUint::from(2u32) {
        return Err(Error::invalid(format!(
            "coprime family needs s >= 2, got {s}"
        )));
    }
    let x = s * s + 1u32;
    let base = &x * s;
    DigitalAnomaly::new(x, s.clone(), base, 1)
        .map_err(|e| Error::inconsistent(format!("coprime family s={s}: {e}")))
}

/// `((s^2 + d) d^2, s d, (s^2 + d) s, 1)` with `gcd(x, y) = d`, for
/// `gcd(s, d) = 1` and `s >= d^2 + 1`.
pub fn gcd_family(d: &BigUint, s: &BigUint) -> Result<DigitalAnomaly> {
    if *d < BigUint::from(2u32) {
        return Err(Error::invalid(format!("gcd family needs d >= 2, got {d}")));
    }
    if !s.gcd(d).is_one() {
        return Err(Error::invalid(format!("s={s} and d={d} are not coprime")));
    }
    if *s <= d * d {
        return Err(Error::invalid(format!(
            "gcd family needs s > d^2, got s={s}, d={d}"
        )));
    }
    let lead = s * s + d;
    let x = &lead * d * d;
    let base = lead * s;
    DigitalAnomaly::new(x, s * d, base, 1)
        .map_err(|e| Error::inconsistent(format!("gcd family d={d}, s={s}: {e}")))
}
