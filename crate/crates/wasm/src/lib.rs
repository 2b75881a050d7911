//! Browser bindings for the two-way channel toolkit.
//!
//! Each exported function is a thin wrapper over a plain Rust function of
//! the same name in [`ops`], which the native tests exercise directly.
//! Curves are returned as flat `Float64Array`s so no serialization layer is
//! needed on either side.

use twc_jscc::TwcError;
use wasm_bindgen::prelude::*;

pub mod ops;

pub use ops::RegionReport;

fn js(err: TwcError) -> JsError {
    JsError::new(&err.to_string())
}

/// Scalar-coding gap over a channel-parameter grid at fixed `rho`.
/// Returns `[param, scalar_d, lower_bound, gap]` per grid point.
#[wasm_bindgen(js_name = gapCurve)]
pub fn gap_curve(family: &str, rho: f64, params: Vec<f64>, side_info: bool) -> Result<Vec<f64>, JsError> {
    ops::gap_curve(family, rho, &params, side_info).map_err(js)
}

/// Rate in bits per symbol at each distortion in `ds`.
#[wasm_bindgen(js_name = rdCurve)]
pub fn rd_curve(curve: &str, q: u32, rho: f64, ds: Vec<f64>) -> Result<Vec<f64>, JsError> {
    ops::rd_curve(curve, q, rho, &ds).map_err(js)
}

/// Gaussian joint source-channel region test for a target pair.
#[wasm_bindgen(js_name = gaussianRegion)]
pub fn gaussian_region(
    rho: f64,
    gamma1: f64,
    gamma2: f64,
    r: f64,
    d1: f64,
    d2: f64,
) -> Result<RegionReport, JsError> {
    ops::gaussian_region(rho, gamma1, gamma2, r, d1, d2).map_err(js)
}
