//! Pythagorean triples with an even middle leg and their `(l, m, n)`
//! generators `(l(m^2-n^2), 2lmn, l(m^2+n^2))`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::isqrt;

/// `a^2 + b^2 = c^2` with `b` even. Checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PythTriple {
    a: BigUint,
    b: BigUint,
    c: BigUint,
}

impl PythTriple {
    pub fn new(a: BigUint, b: BigUint, c: BigUint) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::invalid("triple entries must be positive"));
        }
        if b.is_odd() {
            return Err(Error::invalid(format!("middle leg {b} must be even")));
        }
        if &a * &a + &b * &b != &c * &c {
            return Err(Error::invalid(format!(
                "({a}, {b}, {c}) is not a Pythagorean triple"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn c(&self) -> &BigUint {
        &self.c
    }

    pub fn into_parts(self) -> (BigUint, BigUint, BigUint) {
        (self.a, self.b, self.c)
    }
}

impl fmt::Display for PythTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Generator `(ell, m, n)` with `m > n >= 1` and `gcd(m, n) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleParams {
    ell: BigUint,
    m: BigUint,
    n: BigUint,
}

impl TripleParams {
    pub fn new(ell: BigUint, m: BigUint, n: BigUint) -> Result<Self> {
        if ell.is_zero() || n.is_zero() {
            return Err(Error::invalid("ell and n must be positive"));
        }
        if m <= n {
            return Err(Error::invalid(format!("need m > n, got m={m}, n={n}")));
        }
        if !m.gcd(&n).is_one() {
            return Err(Error::invalid(format!("m={m} and n={n} are not coprime")));
        }
        Ok(Self { ell, m, n })
    }

    pub fn ell(&self) -> &BigUint {
        &self.ell
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }
}

impl fmt::Display for TripleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.ell, self.m, self.n)
    }
}

/// `(l(m^2-n^2), l*2mn, l(m^2+n^2))`.
pub fn compose(params: &TripleParams) -> PythTriple {
    let TripleParams { ell, m, n } = params;
    let m2 = m * m;
    let n2 = n * n;
    PythTriple {
        a: ell * (&m2 - &n2),
        b: ell * m * n * 2u32,
        c: ell * (m2 + n2),
    }
}

/// Rewrites a classic generator (opposite-parity `m0, n0`, even `l0`) as the
/// odd-odd generator `(l0/2, m0+n0, m0-n0)` of the leg-swapped triple.
pub fn flip(classic: &TripleParams) -> Result<TripleParams> {
    let TripleParams { ell, m, n } = classic;
    if ell.is_odd() {
        return Err(Error::invalid(format!("flip needs even ell, got {ell}")));
    }
    if m.is_odd() == n.is_odd() {
        return Err(Error::invalid(format!(
            "flip needs m, n of opposite parity, got m={m}, n={n}"
        )));
    }
    TripleParams::new(ell >> 1u32, m + n, m - n)
        .map_err(|e| Error::inconsistent(format!("flip produced invalid generator: {e}")))
}

/// Unique `(l, m, n)` with `compose(l, m, n) = triple`.
///
/// Uses `(c+a)/2 = l m^2` and `(c-a)/2 = l n^2`: since `m, n` are coprime,
/// `l` is the gcd of the two halves and the quotients are exact squares.
pub fn decompose(triple: &PythTriple) -> Result<TripleParams> {
    let PythTriple { a, c, .. } = triple;
    let sum = c + a;
    let diff = c - a;
    if sum.is_odd() || diff.is_odd() {
        return Err(Error::inconsistent(format!("c +/- a is odd for {triple}")));
    }
    let upper = sum >> 1u32;
    let lower = diff >> 1u32;
    let ell = upper.gcd(&lower);
    if ell.is_zero() {
        return Err(Error::inconsistent(format!("degenerate triple {triple}")));
    }
    let (m, m_exact) = isqrt(&(&upper / &ell));
    let (n, n_exact) = isqrt(&(&lower / &ell));
    if !m_exact || !n_exact {
        return Err(Error::inconsistent(format!(
            "non-square quotient while decomposing {triple}"
        )));
    }
    TripleParams::new(ell, m, n)
        .map_err(|e| Error::inconsistent(format!("decomposing {triple}: {e}")))
}
