//! Browser bindings for three interactive views: generalized sampling against the truncated
//! Fourier series, the `D_{N,M}` curve, and the integration-operator regularization sweep.
//!
//! The plain functions are what the tests call; the `#[wasm_bindgen]` wrappers only convert
//! errors for JavaScript.

use sgs_core::basis::{FunctionSystem, Interval};
use sgs_core::crossgram::{assemble_section, IndexRange};
use sgs_core::gensamp::{self, reconstruct_function, Method, TestFunction};
use sgs_core::invreg::{run_volterra, VolterraCase};
use wasm_bindgen::prelude::*;

/// Largest row count the page may request; keeps a click under a second or so.
pub const MAX_N: usize = 400;

fn pair(recon: &str) -> Result<(FunctionSystem, FunctionSystem), String> {
    match recon {
        "haar" => Ok((FunctionSystem::fourier(Interval::UNIT), FunctionSystem::haar(Interval::UNIT))),
        "legendre" => Ok((
            FunctionSystem::fourier(Interval::SYMMETRIC),
            FunctionSystem::legendre(Interval::SYMMETRIC),
        )),
        other => Err(format!("unknown reconstruction system {other:?}")),
    }
}

fn check_sizes(m: usize, n_max: usize) -> Result<(), String> {
    if m == 0 || n_max < m || n_max > MAX_N {
        return Err(format!("need 1 ≤ M ≤ N ≤ {MAX_N}"));
    }
    Ok(())
}

/// `[n, gs_error, truncated_error, best_error]` per row, flattened, for `n = m, m+step, …`.
pub fn gs_sweep(function: &str, m: usize, n_max: usize, step: usize) -> Result<Vec<f64>, String> {
    check_sizes(m, n_max)?;
    let f: TestFunction = function.parse().map_err(|e| format!("{e}"))?;
    let (s, r) = pair("legendre")?;
    let mut out = Vec::new();
    for n in (m..=n_max).step_by(step.max(1)) {
        let rep = reconstruct_function(f, &s, &r, n, m, Method::Generalized).map_err(|e| e.to_string())?;
        out.extend([n as f64, rep.error, rep.truncated_error, rep.best_error]);
    }
    Ok(out)
}

/// `D_{N,M}` for `N = m..=n_max`.
pub fn d_values(recon: &str, m: usize, n_max: usize) -> Result<Vec<f64>, String> {
    check_sizes(m, n_max)?;
    let (s, r) = pair(recon)?;
    let a = assemble_section(&s, &r, IndexRange::leading(n_max), IndexRange::leading(m))
        .map_err(|e| e.to_string())?;
    let ns: Vec<usize> = (m..=n_max).collect();
    Ok(gensamp::d_curve(&a, &ns))
}

/// `[alpha, uneven, unfiltered, filtered]` per row, flattened, with `M = 20, N = 30, R = 40`.
pub fn volterra_sweep(alphas: &[f64], eps_rel: f64, seed: u64) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for &alpha in alphas {
        let case = VolterraCase {
            eps_rel,
            seed,
            ..VolterraCase::new(20, 30, 40, alpha)
        };
        let r = run_volterra(&case).map_err(|e| e.to_string())?;
        out.extend([alpha, r.err_uneven, r.err_unfiltered, r.err_filtered]);
    }
    Ok(out)
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_name = gsSweep)]
pub fn gs_sweep_js(function: &str, m: usize, n_max: usize, step: usize) -> Result<Vec<f64>, JsError> {
    gs_sweep(function, m, n_max, step).map_err(js)
}

#[wasm_bindgen(js_name = dCurve)]
pub fn d_curve_js(recon: &str, m: usize, n_max: usize) -> Result<Vec<f64>, JsError> {
    d_values(recon, m, n_max).map_err(js)
}

#[wasm_bindgen(js_name = volterraSweep)]
pub fn volterra_sweep_js(alphas: Vec<f64>, eps_rel: f64, seed: u32) -> Result<Vec<f64>, JsError> {
    volterra_sweep(&alphas, eps_rel, seed as u64).map_err(js)
}
