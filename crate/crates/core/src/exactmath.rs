//! Exact integer primitives: square and higher roots, 2-adic valuation,
//! trial-division factorization, radicals and perfect-power exponents.
//!
//! Everything here works on `BigUint` and never touches floating point,
//! except [`ln`], which is the bridge used by the bound computations.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical prime factorization: primes strictly increasing, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, e)| e)
    }

    /// Number of distinct primes.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn smallest_prime(&self) -> Option<&BigUint> {
        self.factors.first().map(|(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Factorization of the product of the two factored values.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut factors: Vec<(BigUint, u32)> = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let ((p, e), (q, f)) = (&a[i], &b[j]);
            match p.cmp(q) {
                Ordering::Equal => {
                    factors.push((p.clone(), e + f));
                    i += 1;
                    j += 1;
                }
                Ordering::Less => {
                    factors.push((p.clone(), *e));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((q.clone(), *f));
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&a[i..]);
        factors.extend_from_slice(&b[j..]);
        Factorization { factors }
    }

    /// gcd of the exponents; 0 for the empty factorization.
    pub fn exponent_gcd(&self) -> u32 {
        self.exponents().fold(0, |g, e| g.gcd(&e))
    }

    fn push(&mut self, p: BigUint, e: u32) {
        if e > 0 {
            self.factors.push((p, e));
        }
    }
}

/// Floor square root with an exactness flag.
///
/// Newton iteration from an upper starting point, followed by a correction
/// step so that `root^2 <= n < (root+1)^2` holds on exit.
pub fn isqrt(n: &BigUint) -> (BigUint, bool) {
    let root = nth_root_floor(n, 2);
    let exact = &root * &root == *n;
    (root, exact)
}

/// Floor `j`-th root with an exactness flag. `j` must be at least 1.
pub fn integer_root(n: &BigUint, j: u32) -> (BigUint, bool) {
    assert!(j >= 1, "root index must be positive");
    let root = nth_root_floor(n, j);
    let exact = root.pow(j) == *n;
    (root, exact)
}

fn nth_root_floor(n: &BigUint, j: u32) -> BigUint {
    if n.is_zero() || n.is_one() || j == 1 {
        return n.clone();
    }
    // 2^ceil(bits/j) is always >= the true root.
    let bits = n.bits();
    let shift = bits.div_ceil(u64::from(j));
    let mut x = BigUint::one() << shift;
    let jm1 = j - 1;
    loop {
        // x_{i+1} = ((j-1) x + n / x^(j-1)) / j
        let next = (&x * jm1 + n / x.pow(jm1)) / j;
        if next >= x {
            break;
        }
        x = next;
    }
    while x.pow(j) > *n {
        x -= 1u32;
    }
    loop {
        let up = &x + 1u32;
        if up.pow(j) <= *n {
            x = up;
        } else {
            break;
        }
    }
    x
}

/// Largest `e` with `2^e | n`.
pub fn nu2(n: &BigUint) -> Result<u64> {
    n.trailing_zeros()
        .ok_or_else(|| Error::invalid("2-adic valuation of zero is undefined"))
}

/// Trial-division factorization. `factorize(1)` is the empty product.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factorize zero"));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factorize_u64(small));
    }
    let mut out = Factorization::default();
    let mut rest = n.clone();
    let twos = rest.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        rest >>= twos;
        out.push(BigUint::from(2u32), twos as u32);
    }
    let mut d: u64 = 3;
    loop {
        if let Some(small) = rest.to_u64() {
            // Finish on the fast path, continuing from the current divisor.
            for (p, e) in factorize_u64_from(small, d).factors {
                out.push(p, e);
            }
            return Ok(out);
        }
        let dd = BigUint::from(d) * d;
        if dd > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(d));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        out.push(BigUint::from(d), e);
        d += 2;
    }
    if !rest.is_one() {
        out.push(rest, 1);
    }
    Ok(out)
}

fn factorize_u64(n: u64) -> Factorization {
    let mut out = Factorization::default();
    let mut rest = n;
    let twos = rest.trailing_zeros();
    if rest > 0 && twos > 0 {
        rest >>= twos;
        out.push(BigUint::from(2u32), twos);
    }
    for (p, e) in factorize_u64_from(rest, 3).factors {
        out.push(p, e);
    }
    out
}

/// Factorizes an odd `n` whose prime factors are all >= `start` (odd).
fn factorize_u64_from(mut n: u64, start: u64) -> Factorization {
    let mut out = Factorization::default();
    let mut d = start;
    while d.checked_mul(d).is_some_and(|dd| dd <= n) {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        out.push(BigUint::from(d), e);
        d += 2;
    }
    if n > 1 {
        out.push(BigUint::from(n), 1);
    }
    out
}

/// Product of the distinct primes dividing `n`; `radical(1) = 1`.
pub fn radical(n: &BigUint) -> Result<BigUint> {
    Ok(factorize(n)?
        .primes()
        .fold(BigUint::one(), |acc, p| acc * p))
}

/// gcd of the exponents in the factorization of `n`.
///
/// `n` is a perfect `j`-th power exactly when `j` divides the result.
pub fn perfect_power_exponent(n: &BigUint) -> Result<u32> {
    if *n < BigUint::from(2u32) {
        return Err(Error::invalid(format!(
            "perfect-power exponent needs n >= 2, got {n}"
        )));
    }
    Ok(factorize(n)?.exponent_gcd())
}

/// Product of the primes that divide `n` to an odd power, so that
/// `n = squarefree_part(n) * j^2` for some integer `j`.
pub fn squarefree_part(n: &BigUint) -> Result<BigUint> {
    Ok(factorize(n)?
        .factors()
        .iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigUint::one(), |acc, (p, _)| acc * p))
}

/// Positive divisors of `g` in descending order.
pub fn divisors_desc(g: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=g).filter(|d| g.is_multiple_of(*d)).collect();
    out.reverse();
    out
}

/// Digit count of `x` in base `base`, i.e. the unique `k` with
/// `base^(k-1) <= x < base^k`.
pub fn digit_count(x: &BigUint, base: &BigUint) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::invalid("digit count of zero is undefined"));
    }
    if *base < BigUint::from(2u32) {
        return Err(Error::invalid(format!("base must be >= 2, got {base}")));
    }
    let mut k = 1u32;
    let mut power = base.clone();
    while power <= *x {
        power *= base;
        k += 1;
    }
    Ok(k)
}

/// Natural logarithm of a positive big integer.
pub fn ln(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(f) = n.to_f64() {
            return f.ln();
        }
    }
    // Keep the top 64 bits as a float and add back the shift.
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
