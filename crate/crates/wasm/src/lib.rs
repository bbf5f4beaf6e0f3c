//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Every export takes decimal strings and returns a JSON string, or throws
//! a string describing the problem. The plain `*_json` functions carry the
//! logic so they can be tested natively.

use digital_anomaly::anomaly::{self, DigitalAnomaly};
use digital_anomaly::bounds;
use digital_anomaly::record::{parse_int, ResultRecord};
use digital_anomaly::search::{self, SearchOptions};
use num_bigint::BigUint;
use wasm_bindgen::prelude::*;

/// Largest `B^k_max` the page will scan; keeps a tab responsive.
pub const SCAN_LIMIT: u64 = 10_000_000_000_000;

fn int(name: &str, s: &str) -> Result<BigUint, String> {
    parse_int(name, s).map_err(|e| e.to_string())
}

/// The verdict on `(x, y, B, k)`; accepted quadruples carry their record.
pub fn verify_json(x: &str, y: &str, base: &str, k: u32) -> Result<String, String> {
    let (x, y, base) = (int("x", x)?, int("y", y)?, int("base", base)?);
    if !anomaly::verify(&x, &y, &base, k) {
        return Ok(r#"{"verdict":false}"#.to_owned());
    }
    let a = DigitalAnomaly::new(x, y, base, k).map_err(|e| e.to_string())?;
    let record = ResultRecord::verified(&a).map_err(|e| e.to_string())?;
    // Splice the record text in as-is to keep its field order.
    Ok(format!(
        r#"{{"verdict":true,"record":{}}}"#,
        record.to_json()
    ))
}

/// Every anomaly in one base with `k <= k_max`, as a JSON array of records.
pub fn scan_json(base: &str, k_max: u32) -> Result<String, String> {
    let b = int("base", base)?;
    if k_max == 0 {
        return Err("k_max must be at least 1".into());
    }
    if b.pow(k_max) > BigUint::from(SCAN_LIMIT) {
        return Err(format!(
            "B^k_max must stay below {SCAN_LIMIT} in the browser"
        ));
    }
    let report =
        search::brute_force_y(&b, k_max, SearchOptions::default()).map_err(|e| e.to_string())?;
    let rows = report
        .hits
        .iter()
        .map(|h| ResultRecord::from_hit(h).map(|r| r.to_json()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(format!(
        r#"{{"candidates":{},"anomalies":[{}]}}"#,
        report.candidates,
        rows.join(",")
    ))
}

pub fn bounds_json(base: &str) -> Result<String, String> {
    let report = bounds::fixed_base_bounds(&int("base", base)?).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn verify(x: &str, y: &str, base: &str, k: u32) -> Result<String, JsValue> {
    verify_json(x, y, base, k).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn scan(base: &str, k_max: u32) -> Result<String, JsValue> {
    scan_json(base, k_max).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = bounds)]
pub fn bound_report(base: &str) -> Result<String, JsValue> {
    bounds_json(base).map_err(JsValue::from)
}
