//! Exact arithmetic for digital anomalies: integer quadruples `(x, y, B, k)`
//! with `x/y = y + x/B^k` where `k` is the number of base-`B` digits of `x`.
//! `5/2 = 2.5` in base ten is the smallest one.
//!
//! Modules, bottom up:
//!
//! * [`exactmath`]: roots, valuations, factorization, radicals.
//! * [`pythag`]: Pythagorean triples with an even leg and their generators.
//! * [`anomaly`]: verification, the `(t, m, n)` parametrization, families.
//! * [`search`]: brute-force oracles, the parametric sweep, the `k = 2` scan.
//! * [`bounds`]: the fixed-base Baker bounds and abc quality scores.
//! * [`record`]: the flat, string-integer record used for JSONL/CSV output.

pub mod anomaly;
pub mod bounds;
pub mod error;
pub mod exactmath;
pub mod pythag;
pub mod record;
pub mod search;

pub use anomaly::{DigitalAnomaly, ParamTriple};
pub use error::{Error, Result};
