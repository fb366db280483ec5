//! wasm-bindgen surface for `www/index.html`. Every export returns a JSON
//! string; errors come back as `{"error": "..."}`.

use bcmsr::bounds::RateRows;
use bcmsr::channels::*;
use bcmsr::keysim::{bsc_channel, run_key_extraction, run_otp_roundtrip, KeySimConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct Region {
    pub name: &'static str,
    pub rows: RateRows,
    pub vertices: Vec<(f64, f64)>,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

pub fn dueck_regions(case: u8, p: f64, q: f64, r: f64) -> Result<Vec<Region>, String> {
    let case = NoiseCase::from_index(case).ok_or("case must be 1 or 2")?;
    let d = DueckParams::new(case, p, q, r);
    let e = |e: ChannelError| e.to_string();
    let rows = [
        ("nofeedback", dueck_closed_nofeedback_rows(&d).map_err(e)?),
        ("inner1", dueck_closed_inner1_rows(&d).map_err(e)?),
        ("inner2", dueck_closed_inner2_rows(&d).map_err(e)?),
        ("outer", dueck_closed_outer_rows(&d).map_err(e)?),
    ];
    rows.into_iter()
        .map(|(name, rows)| {
            let vertices = rows.system().vertices2d().map_err(|e| e.to_string())?.vertices;
            Ok(Region { name, rows, vertices })
        })
        .collect()
}

pub fn blackwell_sweep(p_max: f64, points: usize, grid: usize) -> Result<Vec<SweepRow>, String> {
    if points == 0 {
        return Err("p grid is empty".into());
    }
    sweep_blackwell_sumrate(&linspace(0.0, p_max, points), grid).map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct KeyRun {
    pub report: bcmsr::keysim::KeySimReport,
    pub otp: bcmsr::keysim::OtpReport,
}

/// Binary Y1 through a BSC(e) to Y2; e = 0.5 makes them independent.
pub fn key_extraction(blocklength: usize, rate: f64, e: f64, seed: u64) -> Result<KeyRun, String> {
    if !(0.0..=1.0).contains(&e) {
        return Err("crossover must lie in [0, 1]".into());
    }
    let cfg = KeySimConfig::new(bsc_channel(e), blocklength, rate, seed);
    let report = run_key_extraction(&cfg).map_err(|e| e.to_string())?;
    let bits = (report.key_bits.floor() as usize).min(8);
    let otp = run_otp_roundtrip(&cfg, bits).map_err(|e| e.to_string())?;
    Ok(KeyRun { report, otp })
}

/// Vertices and rows of the four Dueck bounds (closed forms).
#[wasm_bindgen(js_name = dueckRegions)]
pub fn dueck_regions_json(case: u8, p: f64, q: f64, r: f64) -> String {
    to_json(dueck_regions(case, p, q, r))
}

/// Best sum rate of each Blackwell bound for `points` values of p in [0, p_max].
#[wasm_bindgen(js_name = blackwellSweep)]
pub fn blackwell_sweep_json(p_max: f64, points: usize, grid: usize) -> String {
    to_json(blackwell_sweep(p_max, points, grid))
}

/// Exhaustive key-extraction report plus a one-time-pad run.
#[wasm_bindgen(js_name = keyExtraction)]
pub fn key_extraction_json(blocklength: usize, rate: f64, e: f64, seed: u64) -> String {
    to_json(key_extraction(blocklength, rate, e, seed))
}
